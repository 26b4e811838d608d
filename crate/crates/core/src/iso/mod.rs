//! Isomorphism semi-decision for marked groups: a proof search racing a
//! disproof search. Either side returns only checked certificates; when both
//! run dry the answer is UNKNOWN.

pub mod certificate;
mod disprove;
mod mapsearch;
mod tietze_search;
mod witness;

use std::sync::atomic::{AtomicBool, Ordering};

pub use certificate::{verify_record, VerdictRecord};
pub use disprove::{disprove_level, disprove_step, FingerprintCache, LevelOutcome, NonIsoCertificate};
pub use witness::{Check, CheckKind, IsoWitness, PeripheralMatch, Side, Strategy};

use crate::budget::{Budgets, Control, Stop, Unbounded};
use crate::par;
use crate::presentation::MarkedGroup;
use witness::{Context, Probes};

/// Per-level disproof status in an UNKNOWN report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelStatus {
    NoDifference,
    BudgetExceeded,
    NotRun,
}

impl LevelStatus {
    pub fn name(self) -> &'static str {
        match self {
            LevelStatus::NoDifference => "no_difference",
            LevelStatus::BudgetExceeded => "budget_exceeded",
            LevelStatus::NotRun => "not_run",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofSearchReport {
    pub map_nodes: u64,
    pub map_exhausted: bool,
    pub tietze_nodes: u64,
    pub tietze_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownReport {
    /// Status of levels `1..=max_level`, in order.
    pub levels: Vec<LevelStatus>,
    pub proof: ProofSearchReport,
    pub timed_out: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Isomorphic(Box<IsoWitness>),
    NotIsomorphic(Box<NonIsoCertificate>),
    Unknown(UnknownReport),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Isomorphic(_) => "ISOMORPHIC",
            Verdict::NotIsomorphic(_) => "NOT_ISOMORPHIC",
            Verdict::Unknown(_) => "UNKNOWN",
        }
    }
}

/// Cancelled by its own flag or by an outer stop.
struct Linked<'a> {
    outer: &'a dyn Stop,
    flag: &'a AtomicBool,
}

impl Stop for Linked<'_> {
    fn stopped(&self) -> bool {
        self.flag.load(Ordering::Relaxed) || self.outer.stopped()
    }
}

pub fn search_isomorphism(left: &MarkedGroup, right: &MarkedGroup, budgets: &Budgets) -> Option<IsoWitness> {
    search_isomorphism_with(left, right, budgets, &Unbounded).0
}

/// Runs the map search and the Tietze search side by side. A map-search
/// witness wins whenever one exists, so the result does not depend on timing.
pub fn search_isomorphism_with(
    left: &MarkedGroup,
    right: &MarkedGroup,
    budgets: &Budgets,
    stop: &dyn Stop,
) -> (Option<IsoWitness>, ProofSearchReport) {
    let mut report = ProofSearchReport::default();
    if left.peripherals().len() != right.peripherals().len() || budgets.tietze_node_cap == 0 {
        return (None, report);
    }
    let left_probes = Probes::new(left.ambient(), budgets);
    let right_probes = Probes::new(right.ambient(), budgets);
    let cx = Context {
        left,
        right,
        left_probes: &left_probes,
        right_probes: &right_probes,
        budgets,
        stop,
    };
    let map_done = AtomicBool::new(false);
    let tietze_stop = Linked {
        outer: stop,
        flag: &map_done,
    };
    let tietze_cx = Context {
        stop: &tietze_stop,
        ..cx
    };
    let (map, tietze) = par::join(
        budgets.exec,
        || {
            let r = mapsearch::map_search(&cx, budgets.tietze_node_cap);
            if r.witness.is_some() {
                map_done.store(true, Ordering::Relaxed);
            }
            r
        },
        || tietze_search::tietze_search(&tietze_cx, budgets.tietze_node_cap),
    );
    report.map_nodes = map.nodes;
    report.map_exhausted = map.exhausted;
    report.tietze_nodes = tietze.nodes;
    report.tietze_exhausted = tietze.exhausted;
    (map.witness.or(tietze.witness), report)
}

pub fn compare(left: &MarkedGroup, right: &MarkedGroup, budgets: &Budgets) -> Verdict {
    let control = Control::with_timeout(budgets.wall_clock_seconds);
    compare_with(left, right, budgets, &control, &FingerprintCache::new())
}

/// Races the proof search against disproof at levels `1..=max_level`.
pub fn compare_with(
    left: &MarkedGroup,
    right: &MarkedGroup,
    budgets: &Budgets,
    control: &Control,
    cache: &FingerprintCache,
) -> Verdict {
    let proof_stop = control.child();
    let disproof_stop = control.child();
    // serially the disproof goes first: its levels are cheap and bounded
    let (disproof, (witness, proof)) = par::join(
        budgets.exec,
        || {
            let mut levels = vec![LevelStatus::NotRun; budgets.max_level];
            for level in 1..=budgets.max_level {
                if disproof_stop.stopped() {
                    break;
                }
                match disprove_level(left, right, level, budgets, cache) {
                    LevelOutcome::Certificate(c) => {
                        proof_stop.cancel();
                        return (Some(c), levels);
                    }
                    LevelOutcome::NoDifference => levels[level - 1] = LevelStatus::NoDifference,
                    LevelOutcome::BudgetExceeded => levels[level - 1] = LevelStatus::BudgetExceeded,
                }
            }
            (None, levels)
        },
        || {
            let r = search_isomorphism_with(left, right, budgets, &proof_stop);
            if r.0.is_some() {
                disproof_stop.cancel();
            }
            r
        },
    );
    let (certificate, levels) = disproof;
    if let Some(w) = witness {
        return Verdict::Isomorphic(Box::new(w));
    }
    if let Some(c) = certificate {
        return Verdict::NotIsomorphic(c);
    }
    Verdict::Unknown(UnknownReport {
        levels,
        proof,
        timed_out: control.timed_out(),
    })
}
