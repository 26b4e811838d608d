use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use dehnfill_core::charcore::characteristic_core;
use dehnfill_core::filling::characteristic_filling;
use dehnfill_core::fingerprint::{fingerprint, HomCount};
use dehnfill_core::format::{parse_group_file, parse_word, serialize_group};
use dehnfill_core::iso::{compare, verify_record, VerdictRecord};
use dehnfill_core::tietze::Derivation;
use dehnfill_core::wordproblem::{decide_word, WpVerdict};
use dehnfill_core::{Budgets, Error, ExecMode, MarkedGroup, Presentation};
use serde::Serialize;
use thiserror::Error;

use crate::args::{BudgetFlags, Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    fn from_core(context: &Path, e: Error) -> Self {
        let msg = format!("{}: {e}", context.display());
        match e {
            Error::Parse { .. }
            | Error::UndeclaredGenerator { .. }
            | Error::DuplicateGenerator { .. }
            | Error::DuplicatePeripheral { .. }
            | Error::ArityMismatch { .. } => CliError::Parse(msg),
            Error::Verification(_) => CliError::Rejected(msg),
            _ => CliError::Usage(msg),
        }
    }
}

pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_group(path: &Path) -> Result<MarkedGroup> {
    parse_group_file(&read(path)?).map_err(|e| CliError::from_core(path, e))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

/// Defaults, then the config file, then flags.
fn budgets(cli: &Cli, max_level: Option<usize>) -> Result<Budgets> {
    let mut b = Budgets::default();
    if let Some(path) = &cli.config {
        b.apply_config(&read(path)?)
            .map_err(|e| CliError::Budget(format!("{}: {e}", path.display())))?;
    }
    let BudgetFlags {
        hom_node_budget,
        closure_order_cap,
        wp_conjugator_length,
        wp_factor_count,
        tietze_node_cap,
        tietze_size_cap,
        wall_clock_seconds,
        serial,
    } = &cli.budgets;
    macro_rules! flag {
        ($($f:ident),*) => {$(if let Some(v) = $f { b.$f = *v; })*};
    }
    flag!(
        hom_node_budget,
        closure_order_cap,
        wp_conjugator_length,
        wp_factor_count,
        tietze_node_cap,
        tietze_size_cap,
        wall_clock_seconds
    );
    if let Some(m) = max_level {
        b.max_level = m;
    }
    if *serial {
        b.exec = ExecMode::Serial;
    }
    b.validate_positive().map_err(|e| CliError::Budget(e.to_string()))?;
    Ok(b)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Core {
            file,
            peripheral,
            level,
        } => core(cli, file, peripheral, *level),
        Command::Fill { file, level, out } => fill(cli, file, *level, out.as_deref()),
        Command::Fingerprint { file } => fingerprint_cmd(cli, file),
        Command::Wp { file, word } => wp(cli, file, word),
        Command::Compare {
            left,
            right,
            max_level,
            out,
        } => compare_cmd(cli, left, right, *max_level, out.as_deref()),
        Command::Verify { certificate } => verify(cli, certificate),
    }
}

#[derive(Serialize)]
struct BudgetExceeded {
    status: &'static str,
    reason: String,
}

/// Budget exhaustion inside a computation is an inconclusive answer.
fn unknown(cli: &Cli, e: &Error) -> Outcome {
    let stdout = if cli.json {
        json(&BudgetExceeded {
            status: "BUDGET_EXCEEDED",
            reason: e.to_string(),
        })
    } else {
        format!("UNKNOWN: {e}\n")
    };
    Outcome { stdout, code: 2 }
}

fn check_level(level: usize) -> Result<()> {
    if level == 0 {
        return Err(CliError::Usage("level must be at least 1".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct CoreRecord<'a> {
    peripheral: &'a str,
    level: usize,
    quotient_order: u64,
    generators: Vec<String>,
}

fn core(cli: &Cli, file: &Path, peripheral: &str, level: usize) -> Result<Outcome> {
    check_level(level)?;
    let b = budgets(cli, None)?;
    let g = load_group(file)?;
    let p = g.peripheral(peripheral).map_err(|e| CliError::Usage(e.to_string()))?;
    let own = p.own_presentation();
    let c = match characteristic_core(own, level, &b) {
        Ok(c) => c,
        Err(e) if e.is_budget() => return Ok(unknown(cli, &e)),
        Err(e) => return Err(CliError::from_core(file, e)),
    };
    let rec = CoreRecord {
        peripheral,
        level,
        quotient_order: c.quotient_order,
        generators: c.generators.iter().map(|w| own.show(w)).collect(),
    };
    if cli.json {
        return Ok(Outcome::ok(json(&rec)));
    }
    let mut s = format!("C_{level}({peripheral}): index {}\n", rec.quotient_order);
    for w in &rec.generators {
        let _ = writeln!(s, "  {w}");
    }
    Ok(Outcome::ok(s))
}

#[derive(Serialize)]
struct FillRecord {
    level: usize,
    peripheral_orders: Vec<u64>,
    unverified_properness: bool,
    group: String,
}

fn fill(cli: &Cli, file: &Path, level: usize, out: Option<&Path>) -> Result<Outcome> {
    check_level(level)?;
    let b = budgets(cli, None)?;
    let g = load_group(file)?;
    let f = match characteristic_filling(&g, level, &b) {
        Ok(f) => f,
        Err(e) if e.is_budget() => return Ok(unknown(cli, &e)),
        Err(e) => return Err(CliError::from_core(file, e)),
    };
    let orders = f.peripheral_orders.clone().unwrap_or_default();
    let shown: Vec<String> = orders.iter().map(u64::to_string).collect();
    let text = format!(
        "# characteristic filling at level {level}; peripheral orders: {}; properness unverified\n{}",
        shown.join(" "),
        serialize_group(&f.as_marked_group(format!("{}_fill{level}", g.name())))
    );
    if let Some(path) = out {
        write(path, &text)?;
    }
    let stdout = if cli.json {
        json(&FillRecord {
            level,
            peripheral_orders: orders,
            unverified_properness: f.unverified_properness,
            group: text,
        })
    } else if let Some(path) = out {
        format!("wrote {}\n", path.display())
    } else {
        text
    };
    Ok(Outcome::ok(stdout))
}

#[derive(Serialize)]
struct FingerprintRecord<'a> {
    group: &'a str,
    fingerprint: dehnfill_core::fingerprint::Fingerprint,
}

fn fingerprint_cmd(cli: &Cli, file: &Path) -> Result<Outcome> {
    let b = budgets(cli, None)?;
    let g = load_group(file)?;
    let fp = fingerprint(g.ambient(), &b);
    if cli.json {
        return Ok(Outcome::ok(json(&FingerprintRecord {
            group: g.name(),
            fingerprint: fp,
        })));
    }
    let mut s = format!("{}: abelianization {}\n", g.name(), fp.abelianization());
    for (name, c) in &fp.hom_counts {
        let v = match c {
            HomCount::Count(n) => n.to_string(),
            HomCount::BudgetExceeded => "budget exceeded".into(),
        };
        let _ = writeln!(s, "  |Hom(G, {name})| = {v}");
    }
    Ok(Outcome::ok(s))
}

#[derive(Serialize)]
struct FactorJson {
    relator: usize,
    conjugator: String,
    inverse: bool,
}

#[derive(Serialize)]
struct WitnessJson {
    group: String,
    images: Vec<String>,
}

#[derive(Serialize)]
struct WpRecord {
    verdict: &'static str,
    word: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivation: Option<Vec<FactorJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    groups_exceeded: Option<Vec<String>>,
}

fn factors(p: &Presentation, d: &Derivation) -> Vec<FactorJson> {
    d.factors
        .iter()
        .map(|f| FactorJson {
            relator: f.relator,
            conjugator: p.show(&f.conjugator),
            inverse: f.inverse,
        })
        .collect()
}

fn wp(cli: &Cli, file: &Path, text: &str) -> Result<Outcome> {
    let b = budgets(cli, None)?;
    let g = load_group(file)?;
    let p = g.ambient();
    let w = parse_word(text, p.generators()).map_err(|e| CliError::Parse(format!("word `{text}`: {e}")))?;
    let v = decide_word(p, &w, &b).map_err(|e| CliError::from_core(file, e))?;
    let mut rec = WpRecord {
        verdict: v.name(),
        word: p.show(&w),
        derivation: None,
        witness: None,
        groups_exceeded: None,
    };
    let code = match &v {
        WpVerdict::Trivial(d) => {
            rec.derivation = Some(factors(p, d));
            0
        }
        WpVerdict::Nontrivial(h) => {
            rec.witness = Some(WitnessJson {
                group: h.group.clone(),
                images: h.labels(),
            });
            1
        }
        WpVerdict::Unknown(r) => {
            rec.groups_exceeded = Some(r.groups_exceeded.clone());
            2
        }
    };
    if cli.json {
        return Ok(Outcome {
            stdout: json(&rec),
            code,
        });
    }
    let mut s = format!("{}\n", rec.verdict);
    if let Some(fs) = &rec.derivation {
        for f in fs {
            let sign = if f.inverse { "^-1" } else { "" };
            let _ = writeln!(s, "  ({c}) r{}{sign} ({c})^-1", f.relator, c = f.conjugator);
        }
    }
    if let Some(h) = &rec.witness {
        let _ = writeln!(s, "  into {}:", h.group);
        for (gen, img) in p.generators().iter().zip(&h.images) {
            let _ = writeln!(s, "    {gen} -> {img}");
        }
    }
    Ok(Outcome { stdout: s, code })
}

fn verdict_code(verdict: &str) -> u8 {
    match verdict {
        "ISOMORPHIC" => 0,
        "NOT_ISOMORPHIC" => 1,
        _ => 2,
    }
}

fn compare_cmd(cli: &Cli, left: &Path, right: &Path, max_level: Option<usize>, out: Option<&Path>) -> Result<Outcome> {
    let b = budgets(cli, max_level)?;
    let (l, r) = (load_group(left)?, load_group(right)?);
    let v = compare(&l, &r, &b);
    let rec = VerdictRecord::new(&l, &r, &b, &v);
    let text = rec.to_json();
    if let Some(path) = out {
        write(path, &text)?;
    }
    let code = verdict_code(&rec.verdict);
    if cli.json {
        return Ok(Outcome { stdout: text, code });
    }
    Ok(Outcome {
        stdout: summary(&rec),
        code,
    })
}

fn summary(rec: &VerdictRecord) -> String {
    let mut s = format!("{}\n", rec.verdict);
    if let Some(iso) = &rec.isomorphism {
        let _ = writeln!(s, "  found by {}; {} checks", iso.strategy, iso.checks.len());
        for e in &iso.forward {
            let _ = writeln!(s, "  {} -> {}", e.generator, e.image);
        }
        for e in &iso.backward {
            let _ = writeln!(s, "  {} <- {}", e.image, e.generator);
        }
    }
    if let Some(n) = &rec.non_isomorphism {
        let _ = writeln!(
            s,
            "  level {}: {} differs ({} vs {})",
            n.level, n.field, n.left_value, n.right_value
        );
    }
    if let Some(u) = &rec.unknown {
        let _ = writeln!(s, "  levels: {}", u.levels.join(", "));
        let _ = writeln!(
            s,
            "  map search nodes {}, tietze search nodes {}{}",
            u.map_search_nodes,
            u.tietze_search_nodes,
            if u.timed_out { ", timed out" } else { "" }
        );
    }
    s
}

#[derive(Serialize)]
struct VerifyRecord {
    verdict: String,
    verified: bool,
}

fn verify(cli: &Cli, path: &Path) -> Result<Outcome> {
    let rec =
        VerdictRecord::from_json(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    verify_record(&rec).map_err(|e| CliError::from_core(path, e))?;
    let stdout = if cli.json {
        json(&VerifyRecord {
            verdict: rec.verdict.clone(),
            verified: true,
        })
    } else {
        format!("verified {}\n", rec.verdict)
    };
    Ok(Outcome {
        stdout,
        code: verdict_code(&rec.verdict),
    })
}
