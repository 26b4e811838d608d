//! Renaming-invariant canonical forms of presentations.
//!
//! Each relator is replaced by the least cyclic rotation of itself or its
//! inverse, relators are sorted, and generators are relabelled. Generators
//! are first ordered by an occurrence profile that does not depend on their
//! names; ties are broken by trying every order within each tie block and
//! keeping the least serialization. When the tie blocks admit more than
//! [`MAX_RELABELINGS`] orders only the index order inside blocks is tried, and
//! the form is then invariant under relator reordering and rotation but not
//! necessarily under renaming.

use std::fmt;

use sha2::{Digest as _, Sha256};

use crate::presentation::Presentation;
use crate::word::Word;

pub const MAX_RELABELINGS: usize = 5040;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest([u8; 32]);

impl Digest {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", &hex::encode(self.0)[..16])
    }
}

/// A canonical serialization plus every generator relabelling (old index to
/// canonical index) that produces it.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub text: String,
    pub relators: Vec<Word>,
    pub relabelings: Vec<Vec<usize>>,
}

/// Least rotation of `w` or of `w^-1`.
pub fn normalize_relator(w: &Word) -> Word {
    let (a, _) = w.least_rotation();
    let (b, _) = w.inverse().least_rotation();
    a.min(b)
}

/// Relabelling-invariant data about one generator. Signs enter only through
/// `min(positive, negative)` per relator, which does not change when a
/// relator is inverted.
fn generator_profile(p: &Presentation, g: usize) -> (usize, Vec<(usize, usize, usize)>) {
    let mut total = 0;
    let mut per_relator = Vec::new();
    for r in p.relators() {
        let occ = r.occurrences(g);
        if occ > 0 {
            let positive = r
                .letters()
                .iter()
                .filter(|l| l.generator() == g && !l.is_inverse())
                .count();
            per_relator.push((r.len(), occ, positive.min(occ - positive)));
        }
        total += occ;
    }
    per_relator.sort_unstable();
    (total, per_relator)
}

fn for_each_block_order(blocks: &[Vec<usize>], f: &mut impl FnMut(&[usize])) {
    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let x = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, x);
                out.push(tail);
            }
        }
        out
    }
    let per_block: Vec<Vec<Vec<usize>>> = blocks.iter().map(|b| permutations(b)).collect();
    let mut idx = vec![0usize; blocks.len()];
    let mut order = Vec::new();
    loop {
        order.clear();
        for (b, &i) in per_block.iter().zip(&idx) {
            order.extend_from_slice(&b[i]);
        }
        f(&order);
        let mut k = blocks.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_block[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn factorial_capped(n: usize, cap: usize) -> usize {
    (1..=n)
        .try_fold(1usize, |acc, k| acc.checked_mul(k).filter(|&v| v <= cap))
        .unwrap_or(cap + 1)
}

pub fn canonical_form(p: &Presentation) -> CanonicalForm {
    let n = p.num_generators();
    let mut keyed: Vec<_> = (0..n).map(|g| (generator_profile(p, g), g)).collect();
    keyed.sort();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, (key, g)) in keyed.iter().enumerate() {
        if i > 0 && keyed[i - 1].0 == *key {
            blocks.last_mut().unwrap().push(*g);
        } else {
            blocks.push(vec![*g]);
        }
    }
    let count = blocks.iter().try_fold(1usize, |acc, b| {
        acc.checked_mul(factorial_capped(b.len(), MAX_RELABELINGS))
            .filter(|&v| v <= MAX_RELABELINGS)
    });
    if count.is_none() {
        blocks = keyed.iter().map(|(_, g)| vec![*g]).collect();
    }

    let mut best: Option<Vec<Word>> = None;
    let mut relabelings: Vec<Vec<usize>> = Vec::new();
    let mut map = vec![0usize; n];
    for_each_block_order(&blocks, &mut |order| {
        // order[k] = old generator placed at canonical position k
        for (k, &g) in order.iter().enumerate() {
            map[g] = k;
        }
        let mut rels: Vec<Word> = p
            .relators()
            .iter()
            .map(|r| normalize_relator(&r.relabel(&map)))
            .collect();
        rels.sort();
        match &best {
            Some(b) if rels > *b => {}
            Some(b) if rels == *b => relabelings.push(map.clone()),
            _ => {
                best = Some(rels);
                relabelings.clear();
                relabelings.push(map.clone());
            }
        }
    });
    let relators = best.unwrap_or_default();
    let mut text = format!("{n}|");
    for (i, r) in relators.iter().enumerate() {
        if i > 0 {
            text.push(',');
        }
        for (j, l) in r.letters().iter().enumerate() {
            if j > 0 {
                text.push('.');
            }
            text.push_str(&l.code().to_string());
        }
    }
    CanonicalForm {
        text,
        relators,
        relabelings,
    }
}

/// SHA-256 of the canonical serialization.
pub fn canonical_digest(p: &Presentation) -> Digest {
    digest_text(&canonical_form(p).text)
}

pub(crate) fn digest_text(text: &str) -> Digest {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    Digest(h.finalize().into())
}
