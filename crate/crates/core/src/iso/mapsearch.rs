//! Direct search for generator images. Candidate forward maps are pruned by
//! Sym3 probes of the right group: every probe pulled back along the map
//! must respect the left relators, the pull-backs of distinct probes must be
//! distinct and each pulled-back image must equal the probe's own image.
//! Backward images are then restricted to words on which the pull-backs agree
//! with the probes, and every surviving pair goes to full verification.
//!
//! A first phase searches over the right generators that survive Tietze
//! elimination; the images of eliminated generators follow from their
//! definitions. A second phase uses the whole alphabet.

use crate::finite::FiniteGroup;
use crate::presentation::{MarkedGroup, Presentation};
use crate::word::{reduced_words_up_to, Letter, Word};

use super::witness::{assemble, Context, IsoWitness, Strategy};

/// Longest generator image tried.
pub(crate) const MAX_IMAGE_LENGTH: usize = 3;
/// Backward candidates kept per generator.
const BACKWARD_CANDIDATES: usize = 4;

#[derive(Debug, Default)]
pub(crate) struct MapOutcome {
    pub witness: Option<IsoWitness>,
    pub nodes: u64,
    pub exhausted: bool,
}

struct Search<'a, 'b> {
    cx: &'a Context<'b>,
    node_cap: u64,
    nodes: u64,
    /// Candidate words over the right generators.
    words: Vec<Word>,
    /// Backward candidates: words over the left generators.
    left_words: Vec<Word>,
    /// Eliminated right generators as words in the surviving ones.
    right_defs: Vec<Option<Word>>,
    /// `images[c][h]`: image of candidate `c` under right probe `h`.
    images: Vec<Vec<usize>>,
    /// Left relators completed at each generator.
    levels: Vec<Vec<Word>>,
    /// Subgroup of Sym3 hit by each right probe.
    targets: Vec<Vec<usize>>,
    length: usize,
    out_of_nodes: bool,
}

impl Search<'_, '_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            self.out_of_nodes = true;
        }
        !self.out_of_nodes && !self.cx.stop.stopped()
    }

    fn pullback(&self, choice: &[usize], h: usize) -> Vec<usize> {
        choice.iter().map(|&c| self.images[c][h]).collect()
    }

    fn run(&mut self, choice: &mut Vec<usize>) -> Option<IsoWitness> {
        let n = self.cx.left.ambient().num_generators();
        let level = choice.len();
        if level == n {
            return self.leaf(choice);
        }
        let group = self.cx.right_probes.group.clone();
        let has_long = choice.iter().any(|&c| self.words[c].len() == self.length);
        for c in 0..self.words.len() {
            // iterative deepening: some image must have the current length
            if level + 1 == n && !has_long && self.words[c].len() != self.length {
                continue;
            }
            if !self.tick() {
                return None;
            }
            choice.push(c);
            let ok = (0..self.cx.right_probes.homs.len()).all(|h| {
                let pb = self.pullback(choice, h);
                self.levels[level]
                    .iter()
                    .all(|r| group.evaluate(r, &pb) == group.identity())
            });
            if ok {
                if let Some(w) = self.run(choice) {
                    return Some(w);
                }
            }
            choice.pop();
            if self.out_of_nodes || self.cx.stop.stopped() {
                return None;
            }
        }
        None
    }

    fn leaf(&mut self, choice: &[usize]) -> Option<IsoWitness> {
        let group = self.cx.right_probes.group.clone();
        let probes = &self.cx.right_probes.homs;
        let mut pullbacks: Vec<Vec<usize>> = Vec::with_capacity(probes.len());
        for h in 0..probes.len() {
            let pb = self.pullback(choice, h);
            if group.subgroup(&pb) != self.targets[h] {
                return None;
            }
            pullbacks.push(pb);
        }
        let mut sorted = pullbacks.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != pullbacks.len() {
            return None;
        }
        let forward: Vec<Word> = choice.iter().map(|&c| self.words[c].clone()).collect();
        let right = self.cx.right.ambient();
        let survivors: Vec<usize> = (0..right.num_generators())
            .filter(|&y| self.right_defs[y].is_none())
            .collect();
        let mut per_generator: Vec<Vec<Word>> = Vec::with_capacity(survivors.len());
        for &y in &survivors {
            let cands: Vec<Word> = self
                .left_words
                .iter()
                .filter(|v| {
                    probes
                        .iter()
                        .zip(&pullbacks)
                        .all(|(h, pb)| group.evaluate(v, pb) == h[y])
                })
                .take(BACKWARD_CANDIDATES)
                .cloned()
                .collect();
            if cands.is_empty() {
                return None;
            }
            per_generator.push(cands);
        }
        let mut pick = vec![0usize; per_generator.len()];
        loop {
            if !self.tick() {
                return None;
            }
            let mut backward = vec![Word::empty(); right.num_generators()];
            for ((&y, &i), c) in survivors.iter().zip(&pick).zip(&per_generator) {
                backward[y] = c[i].clone();
            }
            let eliminating = survivors.len() < backward.len();
            for (y, d) in self.right_defs.iter().enumerate() {
                if let Some(d) = d {
                    backward[y] = d.substitute(&backward);
                }
            }
            let solved = if eliminating {
                backward.clone()
            } else {
                solve_eliminable(right, &backward)
            };
            if solved != backward {
                if let Some(w) = assemble(self.cx, forward.clone(), solved, Strategy::MapSearch) {
                    return Some(w);
                }
            }
            if let Some(w) = assemble(self.cx, forward.clone(), backward, Strategy::MapSearch) {
                return Some(w);
            }
            let mut k = pick.len();
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < per_generator[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
    }
}

/// Replaces the image of each generator that occurs exactly once in some
/// relator by the value that relator forces, given the other images.
fn solve_eliminable(right: &Presentation, backward: &[Word]) -> Vec<Word> {
    let mut out = backward.to_vec();
    for y in 0..right.num_generators() {
        let Some(r) = right.relators().iter().find(|r| r.occurrences(y) == 1) else {
            continue;
        };
        let k = r
            .letters()
            .iter()
            .position(|l| l.generator() == y)
            .expect("occurs once");
        let u = Word::from_letters(r.letters()[..k].to_vec()).substitute(&out);
        let v = Word::from_letters(r.letters()[k + 1..].to_vec()).substitute(&out);
        // u y^e v = 1
        let s = u.inverse().mul(&v.inverse());
        out[y] = if r.letters()[k].is_inverse() { s.inverse() } else { s };
    }
    out
}

/// Sequential Tietze elimination of generators occurring once in some
/// relator, preferring generators no peripheral word mentions, then short
/// definitions. Entry `y` is the value of `y` as a word in the survivors.
fn eliminate(g: &MarkedGroup) -> Vec<Option<Word>> {
    let p = g.ambient();
    let n = p.num_generators();
    let marked: Vec<bool> = (0..n)
        .map(|y| {
            g.peripherals()
                .iter()
                .flat_map(|q| q.ambient_words())
                .any(|w| w.mentions(y))
        })
        .collect();
    let mut rels: Vec<Word> = p.relators().to_vec();
    let mut defs: Vec<Option<Word>> = vec![None; n];
    while let Some((i, y)) = rels
        .iter()
        .enumerate()
        .flat_map(|(i, r)| (0..n).filter(|&y| r.occurrences(y) == 1).map(move |y| (i, y)))
        .min_by_key(|&(i, y)| (marked[y], rels[i].len(), y))
    {
        let r = rels.swap_remove(i);
        let k = r
            .letters()
            .iter()
            .position(|l| l.generator() == y)
            .expect("occurs once");
        let u = Word::from_letters(r.letters()[..k].to_vec());
        let v = Word::from_letters(r.letters()[k + 1..].to_vec());
        let s = u.inverse().mul(&v.inverse());
        let s = if r.letters()[k].is_inverse() { s.inverse() } else { s };
        let images: Vec<Word> = (0..n)
            .map(|g| {
                if g == y {
                    s.clone()
                } else {
                    Word::letter(Letter::gen(g))
                }
            })
            .collect();
        for r in &mut rels {
            *r = r.substitute(&images).cyclic_reduce();
        }
        rels.retain(|r| !r.is_empty());
        for d in defs.iter_mut().flatten() {
            *d = d.substitute(&images);
        }
        defs[y] = Some(s);
    }
    defs
}

pub(crate) fn map_search(cx: &Context<'_>, node_cap: u64) -> MapOutcome {
    let defs = eliminate(cx.right);
    let mut outcome = MapOutcome::default();
    if defs.iter().any(Option::is_some) {
        outcome = map_phase(cx, node_cap / 2, defs);
        if outcome.witness.is_some() || cx.stop.stopped() {
            outcome.exhausted = false;
            return outcome;
        }
    }
    let full = vec![None; cx.right.ambient().num_generators()];
    let rest = map_phase(cx, node_cap - outcome.nodes.min(node_cap), full);
    MapOutcome {
        witness: rest.witness,
        nodes: outcome.nodes + rest.nodes,
        exhausted: rest.exhausted,
    }
}

fn map_phase(cx: &Context<'_>, node_cap: u64, right_defs: Vec<Option<Word>>) -> MapOutcome {
    let left = cx.left.ambient();
    let right = cx.right.ambient();
    let mut outcome = MapOutcome::default();
    if node_cap == 0 {
        return outcome;
    }
    let group = cx.right_probes.group.clone();
    let mut levels = vec![Vec::new(); left.num_generators()];
    for r in left.relators() {
        if let Some(m) = r.max_generator() {
            levels[m].push(r.clone());
        }
    }
    let targets: Vec<Vec<usize>> = cx.right_probes.homs.iter().map(|h| group.subgroup(h)).collect();
    let max_len = MAX_IMAGE_LENGTH.min(cx.budgets.wp_conjugator_length.max(1));
    let survivors: Vec<usize> = (0..right.num_generators())
        .filter(|&y| right_defs[y].is_none())
        .collect();
    for length in 0..=max_len {
        let words: Vec<Word> = reduced_words_up_to(survivors.len(), length)
            .iter()
            .map(|w| w.relabel(&survivors))
            .collect();
        let images = words
            .iter()
            .map(|w| cx.right_probes.homs.iter().map(|h| group.evaluate(w, h)).collect())
            .collect();
        let mut search = Search {
            cx,
            node_cap: node_cap - outcome.nodes.min(node_cap),
            nodes: 0,
            words,
            left_words: reduced_words_up_to(left.num_generators(), max_len.max(1)),
            right_defs: right_defs.clone(),
            images,
            levels: levels.clone(),
            targets: targets.clone(),
            length,
            out_of_nodes: false,
        };
        let found = if left.num_generators() == 0 {
            if length == 0 {
                search.leaf(&[])
            } else {
                None
            }
        } else {
            search.run(&mut Vec::new())
        };
        outcome.nodes += search.nodes;
        if found.is_some() {
            outcome.witness = found;
            return outcome;
        }
        if search.out_of_nodes || cx.stop.stopped() {
            return outcome;
        }
    }
    outcome.exhausted = true;
    outcome
}
