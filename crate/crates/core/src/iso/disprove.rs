//! Non-isomorphism certificates from characteristic fillings.

use std::sync::Arc;

use dashmap::DashMap;

use crate::budget::Budgets;
use crate::charcore::CoreCache;
use crate::digest::{digest_text, Digest};
use crate::error::Result;
use crate::filling::{characteristic_filling_cached, FillingResult};
use crate::fingerprint::{marked_fingerprint, Difference, MarkedFingerprint};
use crate::format::serialize_group;
use crate::presentation::MarkedGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonIsoCertificate {
    pub level: usize,
    pub left_filling: FillingResult,
    pub right_filling: FillingResult,
    pub left_fingerprint: MarkedFingerprint,
    pub right_fingerprint: MarkedFingerprint,
    pub difference: Difference,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelOutcome {
    Certificate(Box<NonIsoCertificate>),
    /// Every completed invariant agreed.
    NoDifference,
    /// A filling could not be computed within budget.
    BudgetExceeded,
}

type Entry = Arc<(FillingResult, MarkedFingerprint)>;

/// Characteristic fillings and their marked fingerprints, keyed by the digest
/// of the full marked-group text and the level. Shared between threads.
#[derive(Clone, Default)]
pub struct FingerprintCache {
    map: Arc<DashMap<(Digest, usize), Entry>>,
    cores: CoreCache,
}

impl FingerprintCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn get(&self, g: &MarkedGroup, level: usize, budgets: &Budgets) -> Result<Entry> {
        let key = (digest_text(&serialize_group(&g.with_name("G"))), level);
        if let Some(hit) = self.map.get(&key) {
            return Ok(hit.clone());
        }
        let f = characteristic_filling_cached(g, level, budgets, Some(&self.cores))?;
        let fp = marked_fingerprint(&f, budgets)?;
        let entry = Arc::new((f, fp));
        self.map.insert(key, entry.clone());
        Ok(entry)
    }
}

pub fn disprove_step(
    left: &MarkedGroup,
    right: &MarkedGroup,
    level: usize,
    budgets: &Budgets,
) -> Option<NonIsoCertificate> {
    match disprove_level(left, right, level, budgets, &FingerprintCache::new()) {
        LevelOutcome::Certificate(c) => Some(*c),
        _ => None,
    }
}

/// Compares the level-`level` marked fingerprints. Budget exhaustion on
/// either side yields no certificate; entries over budget never differ.
pub fn disprove_level(
    left: &MarkedGroup,
    right: &MarkedGroup,
    level: usize,
    budgets: &Budgets,
    cache: &FingerprintCache,
) -> LevelOutcome {
    if level == 0 {
        return LevelOutcome::BudgetExceeded;
    }
    let (Ok(l), Ok(r)) = (cache.get(left, level, budgets), cache.get(right, level, budgets)) else {
        return LevelOutcome::BudgetExceeded;
    };
    match l.1.first_difference(&r.1) {
        Some(difference) => LevelOutcome::Certificate(Box::new(NonIsoCertificate {
            level,
            left_filling: l.0.clone(),
            right_filling: r.0.clone(),
            left_fingerprint: l.1.clone(),
            right_fingerprint: r.1.clone(),
            difference,
        })),
        None => LevelOutcome::NoDifference,
    }
}

impl NonIsoCertificate {
    /// Recomputes both fillings and fingerprints and checks that they
    /// reproduce the recorded difference.
    pub fn verify(&self, left: &MarkedGroup, right: &MarkedGroup, budgets: &Budgets) -> Result<()> {
        use crate::error::Error;
        match disprove_level(left, right, self.level, budgets, &FingerprintCache::new()) {
            LevelOutcome::Certificate(c) if *c == *self => Ok(()),
            LevelOutcome::Certificate(c) => Err(Error::Verification(format!(
                "recomputation differs on {} ({} vs {})",
                c.difference.field, c.difference.left, c.difference.right
            ))),
            LevelOutcome::NoDifference => Err(Error::Verification(format!(
                "no invariant differs at level {}",
                self.level
            ))),
            LevelOutcome::BudgetExceeded => Err(Error::Verification(format!(
                "level {} fillings exceed the recorded budgets",
                self.level
            ))),
        }
    }
}
