//! Bounded word problem with three outcomes.
//!
//! The triviality side is a best-first search that starts at `w` and
//! repeatedly inserts a cyclic rotation of a relator (or its inverse) at some
//! position, freely reducing after each insertion, until the empty word is
//! reached. Each insertion is multiplication on the left by one conjugate of a
//! relator, so a successful path yields a derivation of `w`. The nontriviality
//! side looks for a homomorphism into a catalog group that sends `w` to a
//! nontrivial element.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::budget::{Budgets, Stop, Unbounded};
use crate::error::{Error, Result};
use crate::finite::{catalog, catalog_group, FiniteGroup, FiniteGroupTable};
use crate::homs::find_hom;
use crate::par;
use crate::presentation::Presentation;
use crate::tietze::{Derivation, Factor};
use crate::word::Word;

/// A homomorphism into a catalog group, as image indices per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomWitness {
    pub group: String,
    pub images: Vec<usize>,
}

impl HomWitness {
    /// Image labels, one per generator.
    pub fn labels(&self) -> Vec<String> {
        let g = catalog_group(&self.group).expect("witness names a catalog group");
        self.images.iter().map(|&i| g.label(i)).collect()
    }

    /// Rebuilds a witness from image labels.
    pub fn from_labels(group: &str, labels: &[String]) -> Result<Self> {
        let g = catalog_group(group).ok_or_else(|| Error::Verification(format!("unknown catalog group `{group}`")))?;
        let images = labels
            .iter()
            .map(|l| {
                g.element(l)
                    .ok_or_else(|| Error::Verification(format!("`{l}` is not an element of {group}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HomWitness {
            group: group.to_string(),
            images,
        })
    }

    /// Checks that the images respect every relator and send `w` to a
    /// nontrivial element.
    pub fn verify(&self, p: &Presentation, w: &Word) -> bool {
        let Some(g) = catalog_group(&self.group) else {
            return false;
        };
        self.images.len() == p.num_generators()
            && self.images.iter().all(|&i| i < g.order())
            && w.max_generator().is_none_or(|m| m < p.num_generators())
            && p.relators().iter().all(|r| g.evaluate(r, &self.images) == g.identity())
            && g.evaluate(w, &self.images) != g.identity()
    }
}

/// What an inconclusive run looked at.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WpReport {
    /// Distinct words reached by the triviality search.
    pub states: u64,
    /// The triviality search stopped on its node budget rather than running
    /// out of states.
    pub derivation_budget_hit: bool,
    /// Catalog groups whose homomorphisms were fully searched.
    pub groups_searched: Vec<String>,
    /// Catalog groups whose search ran out of budget.
    pub groups_exceeded: Vec<String>,
    pub cancelled: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WpVerdict {
    Trivial(Derivation),
    Nontrivial(HomWitness),
    Unknown(WpReport),
}

impl WpVerdict {
    pub fn is_trivial(&self) -> bool {
        matches!(self, WpVerdict::Trivial(_))
    }

    pub fn is_nontrivial(&self) -> bool {
        matches!(self, WpVerdict::Nontrivial(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            WpVerdict::Trivial(_) => "TRIVIAL",
            WpVerdict::Nontrivial(_) => "NONTRIVIAL",
            WpVerdict::Unknown(_) => "UNKNOWN",
        }
    }
}

pub fn decide_word(p: &Presentation, w: &Word, budgets: &Budgets) -> Result<WpVerdict> {
    decide_word_with(p, w, budgets, &Unbounded)
}

/// Runs both searches, concurrently when the budgets allow it; the first
/// definitive answer stops the other. `stop` is polled by both.
pub fn decide_word_with(p: &Presentation, w: &Word, budgets: &Budgets, stop: &dyn Stop) -> Result<WpVerdict> {
    if let Some(m) = w.max_generator() {
        if m >= p.num_generators() {
            return Err(Error::UndeclaredGenerator { name: format!("#{m}") });
        }
    }
    let w = w.free_reduce();
    if w.is_empty() {
        return Ok(WpVerdict::Trivial(Derivation::default()));
    }
    let done = AtomicBool::new(false);
    let either = EitherStop {
        outer: stop,
        done: &done,
    };
    // serially the witness search goes first: it is cheap to exhaust, the
    // derivation search is not
    let (nontrivial, trivial) = par::join(
        budgets.exec,
        || {
            let r = search_witness(p, &w, budgets, &either);
            if r.witness.is_some() {
                done.store(true, Ordering::Relaxed);
            }
            r
        },
        || {
            let r = search_derivation(p, &w, budgets, &either);
            if r.derivation.is_some() {
                done.store(true, Ordering::Relaxed);
            }
            r
        },
    );
    if let Some(d) = trivial.derivation {
        return Ok(WpVerdict::Trivial(d));
    }
    if let Some(h) = nontrivial.witness {
        return Ok(WpVerdict::Nontrivial(h));
    }
    Ok(WpVerdict::Unknown(WpReport {
        states: trivial.states,
        derivation_budget_hit: trivial.budget_hit,
        groups_searched: nontrivial.searched,
        groups_exceeded: nontrivial.exceeded,
        cancelled: stop.stopped(),
    }))
}

struct EitherStop<'a> {
    outer: &'a dyn Stop,
    done: &'a AtomicBool,
}

impl Stop for EitherStop<'_> {
    fn stopped(&self) -> bool {
        self.done.load(Ordering::Relaxed) || self.outer.stopped()
    }
}

struct DerivationSearch {
    derivation: Option<Derivation>,
    states: u64,
    budget_hit: bool,
}

/// A rotation `x^-1 r^e x` of relator `relator` raised to `e = +-1`.
struct Insert {
    word: Word,
    relator: usize,
    inverse: bool,
    /// The prefix `x` of `r^e` that was moved to the end.
    shift: Word,
}

fn insertions(p: &Presentation) -> Vec<Insert> {
    let mut out: Vec<Insert> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, r) in p.relators().iter().enumerate() {
        for inverse in [false, true] {
            let s = if inverse { r.inverse() } else { r.clone() };
            for k in 0..s.len() {
                let rho = s.rotate(k);
                if seen.insert(rho.clone()) {
                    out.push(Insert {
                        word: rho,
                        relator: i,
                        inverse,
                        shift: Word::from_letters(s.letters()[..k].to_vec()),
                    });
                }
            }
        }
    }
    out
}

struct Node {
    word: Word,
    /// (parent node, insertion, position)
    parent: Option<(usize, usize, usize)>,
}

fn search_derivation(p: &Presentation, w: &Word, budgets: &Budgets, stop: &dyn Stop) -> DerivationSearch {
    let mut result = DerivationSearch {
        derivation: None,
        states: 0,
        budget_hit: false,
    };
    let max_steps = budgets.wp_factor_count;
    if max_steps == 0 || p.relators().is_empty() {
        return result;
    }
    let max_len = w.len() + budgets.wp_conjugator_length;
    let inserts = insertions(p);
    let mut nodes = vec![Node {
        word: w.clone(),
        parent: None,
    }];
    let mut best: HashMap<Word, usize> = HashMap::new();
    best.insert(w.clone(), 0);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((w.len(), 0usize, 0usize)));
    let mut work = 0u64;
    while let Some(Reverse((_, steps, id))) = heap.pop() {
        if steps >= max_steps || best.get(&nodes[id].word).is_some_and(|&s| s < steps) {
            continue;
        }
        if stop.stopped() {
            break;
        }
        let current = nodes[id].word.clone();
        let letters = current.letters();
        for pos in 0..=letters.len() {
            let u = Word::from_letters(letters[..pos].to_vec());
            let v = Word::from_letters(letters[pos..].to_vec());
            for (k, ins) in inserts.iter().enumerate() {
                work += 1;
                if work > budgets.hom_node_budget {
                    result.budget_hit = true;
                    result.states = best.len() as u64;
                    return result;
                }
                let next = u.mul(&ins.word).mul(&v);
                if next.len() > max_len {
                    continue;
                }
                if best.get(&next).is_some_and(|&s| s <= steps + 1) {
                    continue;
                }
                best.insert(next.clone(), steps + 1);
                let done = next.is_empty();
                nodes.push(Node {
                    word: next.clone(),
                    parent: Some((id, k, pos)),
                });
                let nid = nodes.len() - 1;
                if done {
                    let d = reconstruct(&nodes, nid, &inserts);
                    if d.proves(p.relators(), w) {
                        result.states = best.len() as u64;
                        result.derivation = Some(d);
                        return result;
                    }
                    continue;
                }
                heap.push(Reverse((next.len(), steps + 1, nid)));
            }
        }
    }
    result.states = best.len() as u64;
    result
}

/// Walks back from the empty word. The step from `s = u v` to `u rho v`
/// multiplies on the left by `F = c r^e c^-1` with `c = u x^-1`; the
/// derivation of the start word is `F_1^-1 ... F_m^-1`.
fn reconstruct(nodes: &[Node], mut id: usize, inserts: &[Insert]) -> Derivation {
    let mut factors = Vec::new();
    while let Some((parent, k, pos)) = nodes[id].parent {
        let ins = &inserts[k];
        let u = Word::from_letters(nodes[parent].word.letters()[..pos].to_vec());
        let c = u.mul(&ins.shift.inverse());
        factors.push(Factor::new(ins.relator, c, !ins.inverse));
        id = parent;
    }
    factors.reverse();
    Derivation::new(factors)
}

struct WitnessSearch {
    witness: Option<HomWitness>,
    searched: Vec<String>,
    exceeded: Vec<String>,
}

/// Sym3 and Sym4 first, then the rest of the catalog.
fn witness_order() -> Vec<Arc<FiniteGroupTable>> {
    let first = ["Sym3", "Sym4"];
    let mut out: Vec<_> = first.iter().filter_map(|n| catalog_group(n)).collect();
    out.extend(catalog().iter().filter(|g| !first.contains(&g.name())).cloned());
    out
}

fn search_witness(p: &Presentation, w: &Word, budgets: &Budgets, stop: &dyn Stop) -> WitnessSearch {
    let mut out = WitnessSearch {
        witness: None,
        searched: Vec::new(),
        exceeded: Vec::new(),
    };
    if budgets.hom_node_budget == 0 {
        return out;
    }
    for g in witness_order() {
        if stop.stopped() {
            break;
        }
        let name = g.name();
        let r = find_hom(p, g.as_ref(), budgets.hom_node_budget, stop, |a| {
            g.evaluate(w, a) != g.identity()
        });
        match r {
            Ok(Some(images)) => {
                out.witness = Some(HomWitness {
                    group: name.to_string(),
                    images,
                });
                return out;
            }
            Ok(None) => out.searched.push(name.to_string()),
            Err(_) => out.exceeded.push(name.to_string()),
        }
    }
    out
}
