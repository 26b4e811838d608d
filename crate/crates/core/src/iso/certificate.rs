//! Machine-readable verdict records. A record carries both input groups, the
//! budgets used and the full certificate, so it can be re-checked offline
//! without any search.

use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::fingerprint::MarkedFingerprint;
use crate::format::{parse_group_file, parse_word, serialize_group};
use crate::presentation::MarkedGroup;
use crate::tietze::{Derivation, Factor};
use crate::word::Word;

use super::witness::{Check, CheckKind, IsoWitness, PeripheralMatch, Side, Strategy};
use super::Verdict;

pub const FORMAT: &str = "dehnfill-verdict/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub generator: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub relator: usize,
    pub conjugator: String,
    pub inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub kind: String,
    pub side: String,
    pub label: String,
    pub word: String,
    pub derivation: Vec<FactorRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralRecordJson {
    pub left: String,
    pub right: String,
    pub forward_conjugator: String,
    pub forward: Vec<MapEntry>,
    pub backward_conjugator: String,
    pub backward: Vec<MapEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoRecord {
    pub strategy: String,
    pub forward: Vec<MapEntry>,
    pub backward: Vec<MapEntry>,
    pub peripherals: Vec<PeripheralRecordJson>,
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonIsoRecord {
    pub level: usize,
    pub field: String,
    pub left_value: String,
    pub right_value: String,
    pub left_filling: String,
    pub right_filling: String,
    pub left_fingerprint: serde_json::Value,
    pub right_fingerprint: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknownRecord {
    pub levels: Vec<String>,
    pub map_search_nodes: u64,
    pub map_search_exhausted: bool,
    pub tietze_search_nodes: u64,
    pub tietze_search_exhausted: bool,
    pub timed_out: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub format: String,
    pub verdict: String,
    pub left: String,
    pub right: String,
    pub budgets: Budgets,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isomorphism: Option<IsoRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_isomorphism: Option<NonIsoRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unknown: Option<UnknownRecord>,
}

fn show(w: &Word, names: &[String]) -> String {
    w.display(names).to_string()
}

fn entries(domain: &[String], images: &[Word], names: &[String]) -> Vec<MapEntry> {
    domain
        .iter()
        .zip(images)
        .map(|(g, w)| MapEntry {
            generator: g.clone(),
            image: show(w, names),
        })
        .collect()
}

fn fingerprint_json(f: &MarkedFingerprint) -> serde_json::Value {
    serde_json::to_value(f).expect("fingerprints serialize")
}

impl VerdictRecord {
    pub fn new(left: &MarkedGroup, right: &MarkedGroup, budgets: &Budgets, verdict: &Verdict) -> Self {
        let mut rec = VerdictRecord {
            format: FORMAT.into(),
            verdict: verdict.name().into(),
            left: serialize_group(left),
            right: serialize_group(right),
            budgets: budgets.clone(),
            isomorphism: None,
            non_isomorphism: None,
            unknown: None,
        };
        match verdict {
            Verdict::Isomorphic(w) => rec.isomorphism = Some(iso_record(left, right, w)),
            Verdict::NotIsomorphic(c) => {
                rec.non_isomorphism = Some(NonIsoRecord {
                    level: c.level,
                    field: c.difference.field.clone(),
                    left_value: c.difference.left.clone(),
                    right_value: c.difference.right.clone(),
                    left_filling: serialize_group(&c.left_filling.as_marked_group(format!("{}_filled", left.name()))),
                    right_filling: serialize_group(
                        &c.right_filling.as_marked_group(format!("{}_filled", right.name())),
                    ),
                    left_fingerprint: fingerprint_json(&c.left_fingerprint),
                    right_fingerprint: fingerprint_json(&c.right_fingerprint),
                })
            }
            Verdict::Unknown(u) => {
                rec.unknown = Some(UnknownRecord {
                    levels: u.levels.iter().map(|l| l.name().to_string()).collect(),
                    map_search_nodes: u.proof.map_nodes,
                    map_search_exhausted: u.proof.map_exhausted,
                    tietze_search_nodes: u.proof.tietze_nodes,
                    tietze_search_exhausted: u.proof.tietze_exhausted,
                    timed_out: u.timed_out,
                })
            }
        }
        rec
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))
    }
}

fn iso_record(left: &MarkedGroup, right: &MarkedGroup, w: &IsoWitness) -> IsoRecord {
    let ln = left.ambient().generators();
    let rn = right.ambient().generators();
    IsoRecord {
        strategy: w.strategy.name().into(),
        forward: entries(ln, &w.forward, rn),
        backward: entries(rn, &w.backward, ln),
        peripherals: w
            .peripherals
            .iter()
            .map(|m| {
                let p = &left.peripherals()[m.left];
                let q = &right.peripherals()[m.right];
                let pg = p.own_presentation().generators();
                let qg = q.own_presentation().generators();
                PeripheralRecordJson {
                    left: p.name().into(),
                    right: q.name().into(),
                    forward_conjugator: show(&m.forward_conjugator, rn),
                    forward: entries(pg, &m.forward, qg),
                    backward_conjugator: show(&m.backward_conjugator, ln),
                    backward: entries(qg, &m.backward, pg),
                }
            })
            .collect(),
        checks: w
            .checks
            .iter()
            .map(|c| {
                let names = match c.side {
                    Side::Left => ln,
                    Side::Right => rn,
                };
                CheckRecord {
                    kind: c.kind.name().into(),
                    side: c.side.name().into(),
                    label: c.label.clone(),
                    word: show(&c.word, names),
                    derivation: c
                        .derivation
                        .factors
                        .iter()
                        .map(|f| FactorRecord {
                            relator: f.relator,
                            conjugator: show(&f.conjugator, names),
                            inverse: f.inverse,
                        })
                        .collect(),
                }
            })
            .collect(),
    }
}

fn read_map(entries: &[MapEntry], domain: &[String], names: &[String]) -> Result<Vec<Word>> {
    if entries.len() != domain.len() || entries.iter().zip(domain).any(|(e, g)| &e.generator != g) {
        return Err(Error::Verification("map entries do not match the generators".into()));
    }
    entries.iter().map(|e| parse_word(&e.image, names)).collect()
}

fn parse_side(s: &str) -> Result<Side> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        _ => Err(Error::Verification(format!("unknown side `{s}`"))),
    }
}

fn parse_kind(s: &str) -> Result<CheckKind> {
    match s {
        "relator" => Ok(CheckKind::Relator),
        "round_trip" => Ok(CheckKind::RoundTrip),
        "peripheral" => Ok(CheckKind::Peripheral),
        _ => Err(Error::Verification(format!("unknown check kind `{s}`"))),
    }
}

fn read_witness(left: &MarkedGroup, right: &MarkedGroup, r: &IsoRecord) -> Result<IsoWitness> {
    let ln = left.ambient().generators();
    let rn = right.ambient().generators();
    let strategy = match r.strategy.as_str() {
        "map_search" => Strategy::MapSearch,
        "tietze_search" => Strategy::TietzeSearch,
        s => return Err(Error::Verification(format!("unknown strategy `{s}`"))),
    };
    let peripherals = r
        .peripherals
        .iter()
        .map(|m| {
            let j = left.peripherals().iter().position(|p| p.name() == m.left);
            let jj = right.peripherals().iter().position(|p| p.name() == m.right);
            let (Some(j), Some(jj)) = (j, jj) else {
                return Err(Error::Verification(format!(
                    "unknown peripheral pair {} / {}",
                    m.left, m.right
                )));
            };
            let pg = left.peripherals()[j].own_presentation().generators();
            let qg = right.peripherals()[jj].own_presentation().generators();
            Ok(PeripheralMatch {
                left: j,
                right: jj,
                forward: read_map(&m.forward, pg, qg)?,
                backward: read_map(&m.backward, qg, pg)?,
                forward_conjugator: parse_word(&m.forward_conjugator, rn)?,
                backward_conjugator: parse_word(&m.backward_conjugator, ln)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let checks = r
        .checks
        .iter()
        .map(|c| {
            let side = parse_side(&c.side)?;
            let names = match side {
                Side::Left => ln,
                Side::Right => rn,
            };
            let factors = c
                .derivation
                .iter()
                .map(|f| Ok(Factor::new(f.relator, parse_word(&f.conjugator, names)?, f.inverse)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Check {
                kind: parse_kind(&c.kind)?,
                side,
                label: c.label.clone(),
                word: parse_word(&c.word, names)?,
                derivation: Derivation::new(factors),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IsoWitness {
        forward: read_map(&r.forward, ln, rn)?,
        backward: read_map(&r.backward, rn, ln)?,
        peripherals,
        checks,
        strategy,
    })
}

/// Re-checks a record. ISOMORPHIC records are checked from their stored
/// derivations alone; NOT_ISOMORPHIC records are recomputed under the stored
/// budgets. UNKNOWN records make no claim and always pass.
pub fn verify_record(rec: &VerdictRecord) -> Result<()> {
    if rec.format != FORMAT {
        return Err(Error::Verification(format!(
            "unsupported record format `{}`",
            rec.format
        )));
    }
    let left = parse_group_file(&rec.left)?;
    let right = parse_group_file(&rec.right)?;
    match rec.verdict.as_str() {
        "ISOMORPHIC" => {
            let r = rec
                .isomorphism
                .as_ref()
                .ok_or_else(|| Error::Verification("ISOMORPHIC record without a witness".into()))?;
            read_witness(&left, &right, r)?.verify(&left, &right)
        }
        "NOT_ISOMORPHIC" => {
            let r = rec
                .non_isomorphism
                .as_ref()
                .ok_or_else(|| Error::Verification("NOT_ISOMORPHIC record without a certificate".into()))?;
            let mut budgets = rec.budgets.clone();
            budgets.exec = crate::budget::ExecMode::Serial;
            let fresh = match super::disprove_level(&left, &right, r.level, &budgets, &super::FingerprintCache::new()) {
                super::LevelOutcome::Certificate(c) => c,
                _ => {
                    return Err(Error::Verification(format!(
                        "no invariant differs at level {} under the recorded budgets",
                        r.level
                    )))
                }
            };
            let again = VerdictRecord::new(&left, &right, &rec.budgets, &Verdict::NotIsomorphic(fresh));
            if again.non_isomorphism.as_ref() != Some(r) {
                return Err(Error::Verification(
                    "recomputed certificate differs from the record".into(),
                ));
            }
            Ok(())
        }
        "UNKNOWN" => Ok(()),
        v => Err(Error::Verification(format!("unknown verdict `{v}`"))),
    }
}
