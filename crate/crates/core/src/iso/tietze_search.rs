//! Tietze search from both ends. Each side explores presentations reachable
//! by Tietze moves, simplifying moves before generator insertions, and the
//! search stops when a presentation from one side has the same canonical form
//! as one from the other. The accumulated generator maps and the canonical
//! relabelling then give candidate isomorphisms.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::budget::Budgets;
use crate::digest::{canonical_form, normalize_relator, CanonicalForm};
use crate::presentation::Presentation;
use crate::tietze::{apply_tietze, Derivation, Factor, GeneratorMaps, TietzeMove};
use crate::word::{reduced_words_of_length, Word};
use crate::wordproblem::{decide_word_with, WpVerdict};

use super::witness::{assemble, Context, IsoWitness, Strategy};

/// Node budget for the word-problem calls that detect redundant relators.
const REDUNDANCY_NODE_BUDGET: u64 = 20_000;
/// Relabelling pairs tried per canonical match.
const MAX_MATCH_PAIRS: usize = 64;
/// Generator insertions allowed along one path.
const MAX_INSERTIONS: usize = 2;

#[derive(Debug, Default)]
pub(crate) struct TietzeOutcome {
    pub witness: Option<IsoWitness>,
    pub nodes: u64,
    pub exhausted: bool,
}

struct State {
    presentation: Presentation,
    maps: GeneratorMaps,
    form: CanonicalForm,
}

struct Side {
    states: Vec<State>,
    seen: HashMap<String, usize>,
    /// (insertions used, depth, state)
    queue: BinaryHeap<Reverse<(usize, usize, usize)>>,
}

impl Side {
    fn new(p: &Presentation) -> Self {
        let form = canonical_form(p);
        let mut seen = HashMap::new();
        seen.insert(form.text.clone(), 0);
        let mut queue = BinaryHeap::new();
        queue.push(Reverse((0, 0, 0)));
        Side {
            states: vec![State {
                presentation: p.clone(),
                maps: GeneratorMaps::identity(p.num_generators()),
                form,
            }],
            seen,
            queue,
        }
    }
}

/// Rotation and inversion that turn relator `j` into relator `i`, as a
/// one-factor derivation.
fn duplicate_derivation(rels: &[Word], i: usize, j: usize) -> Option<Derivation> {
    let target = &rels[i];
    for inverse in [false, true] {
        let s = if inverse { rels[j].inverse() } else { rels[j].clone() };
        for k in 0..s.len() {
            if &s.rotate(k) == target {
                let x = Word::from_letters(s.letters()[..k].to_vec());
                return Some(Derivation::new(vec![Factor::new(j, x.inverse(), inverse)]));
            }
        }
    }
    None
}

fn fresh_name(p: &Presentation) -> String {
    (0..)
        .map(|k| format!("t{k}"))
        .find(|n| p.generator_index(n).is_none())
        .expect("unbounded names")
}

/// Candidate moves in a fixed order: duplicate relators, generator
/// eliminations, redundant relators, then generator insertions.
fn moves(p: &Presentation, insertions_left: bool, budgets: &Budgets, cx: &Context<'_>) -> Vec<(TietzeMove, bool)> {
    let rels = p.relators();
    let mut out = Vec::new();
    let normal: Vec<Word> = rels.iter().map(normalize_relator).collect();
    let mut duplicate = vec![false; rels.len()];
    for i in 0..rels.len() {
        if let Some(j) = (0..i).find(|&j| normal[j] == normal[i]) {
            if let Some(d) = duplicate_derivation(rels, i, j) {
                duplicate[i] = true;
                out.push((
                    TietzeMove::RemoveRelator {
                        index: i,
                        derivation: d,
                    },
                    false,
                ));
            }
        }
    }
    for g in 0..p.num_generators() {
        if rels.iter().any(|r| r.occurrences(g) == 1) {
            out.push((TietzeMove::RemoveGenerator { generator: g }, false));
        }
    }
    let mut wp = budgets.clone();
    wp.hom_node_budget = wp.hom_node_budget.min(REDUNDANCY_NODE_BUDGET);
    for i in 0..rels.len() {
        if duplicate[i] || cx.stop.stopped() {
            continue;
        }
        let others: Vec<Word> = rels
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, r)| r.clone())
            .collect();
        let Ok(q) = Presentation::new(p.generators().to_vec(), others) else {
            continue;
        };
        if let Ok(WpVerdict::Trivial(d)) = decide_word_with(&q, &rels[i], &wp, cx.stop) {
            let factors = d
                .factors
                .into_iter()
                .map(|f| {
                    Factor::new(
                        if f.relator >= i { f.relator + 1 } else { f.relator },
                        f.conjugator,
                        f.inverse,
                    )
                })
                .collect();
            out.push((
                TietzeMove::RemoveRelator {
                    index: i,
                    derivation: Derivation::new(factors),
                },
                false,
            ));
        }
    }
    if insertions_left && p.size() + 3 <= budgets.tietze_size_cap {
        let name = fresh_name(p);
        for def in reduced_words_of_length(p.num_generators(), 2) {
            out.push((
                TietzeMove::AddGenerator {
                    name: name.clone(),
                    definition: def,
                },
                true,
            ));
        }
    }
    out
}

/// Candidate maps from a left state and a right state with equal canonical
/// text.
fn candidate_maps(l: &State, r: &State) -> Vec<(Vec<Word>, Vec<Word>)> {
    let mut out = Vec::new();
    let la = &l.form.relabelings[0];
    for rb in r.form.relabelings.iter().take(MAX_MATCH_PAIRS) {
        let n = la.len();
        // canonical position -> right state generator
        let mut inv_rb = vec![0usize; n];
        for (g, &c) in rb.iter().enumerate() {
            inv_rb[c] = g;
        }
        let l_to_r: Vec<usize> = la.iter().map(|&c| inv_rb[c]).collect();
        let mut r_to_l = vec![0usize; n];
        for (g, &h) in l_to_r.iter().enumerate() {
            r_to_l[h] = g;
        }
        let forward = l
            .maps
            .forward
            .iter()
            .map(|w| w.relabel(&l_to_r).substitute(&r.maps.backward))
            .collect();
        let backward = r
            .maps
            .forward
            .iter()
            .map(|w| w.relabel(&r_to_l).substitute(&l.maps.backward))
            .collect();
        out.push((forward, backward));
    }
    out
}

pub(crate) fn tietze_search(cx: &Context<'_>, node_cap: u64) -> TietzeOutcome {
    let mut outcome = TietzeOutcome::default();
    if node_cap == 0 {
        return outcome;
    }
    let budgets = cx.budgets;
    let mut sides = [Side::new(cx.left.ambient()), Side::new(cx.right.ambient())];
    if let Some(w) = try_match(cx, &sides[0].states[0], &sides[1].states[0]) {
        outcome.witness = Some(w);
        return outcome;
    }
    let mut turn = 0usize;
    loop {
        if cx.stop.stopped() {
            return outcome;
        }
        if sides[0].queue.is_empty() && sides[1].queue.is_empty() {
            outcome.exhausted = true;
            return outcome;
        }
        let s = if sides[turn].queue.is_empty() { 1 - turn } else { turn };
        turn = 1 - s;
        let Reverse((used, depth, id)) = sides[s].queue.pop().expect("nonempty");
        let p = sides[s].states[id].presentation.clone();
        for (m, inserts) in moves(&p, used < MAX_INSERTIONS, budgets, cx) {
            outcome.nodes += 1;
            if outcome.nodes > node_cap || cx.stop.stopped() {
                return outcome;
            }
            let Ok(step) = apply_tietze(&p, &m) else {
                continue;
            };
            if step.presentation.size() > budgets.tietze_size_cap {
                continue;
            }
            let form = canonical_form(&step.presentation);
            if sides[s].seen.contains_key(&form.text) {
                continue;
            }
            let maps = sides[s].states[id].maps.then(&step);
            let new_id = sides[s].states.len();
            sides[s].seen.insert(form.text.clone(), new_id);
            sides[s].states.push(State {
                presentation: step.presentation,
                maps,
                form,
            });
            let key = (used + usize::from(inserts), depth + 1, new_id);
            sides[s].queue.push(Reverse(key));
            let other = 1 - s;
            if let Some(&oid) = sides[other].seen.get(&sides[s].states[new_id].form.text) {
                let (l, r) = if s == 0 {
                    (&sides[0].states[new_id], &sides[1].states[oid])
                } else {
                    (&sides[0].states[oid], &sides[1].states[new_id])
                };
                if let Some(w) = try_match(cx, l, r) {
                    outcome.witness = Some(w);
                    return outcome;
                }
            }
        }
    }
}

fn try_match(cx: &Context<'_>, l: &State, r: &State) -> Option<IsoWitness> {
    if l.form.text != r.form.text {
        return None;
    }
    candidate_maps(l, r)
        .into_iter()
        .find_map(|(f, b)| assemble(cx, f, b, Strategy::TietzeSearch))
}
