//! Isomorphism witnesses: generator maps in both directions plus a
//! derivation for every identity that makes them mutually inverse,
//! structure-preserving homomorphisms.

use std::collections::HashMap;

use crate::budget::{Budgets, Stop};
use crate::error::{Error, Result};
use crate::finite::{FiniteGroup, FiniteGroupTable};
use crate::presentation::{MarkedGroup, Presentation};
use crate::tietze::Derivation;
use crate::word::{reduced_words_up_to, Letter, Word};
use crate::wordproblem::{decide_word_with, WpVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Relator,
    RoundTrip,
    Peripheral,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Relator => "relator",
            CheckKind::RoundTrip => "round_trip",
            CheckKind::Peripheral => "peripheral",
        }
    }
}

/// `word` is trivial in the group on `side`, as shown by `derivation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub kind: CheckKind,
    pub side: Side,
    pub label: String,
    pub word: Word,
    pub derivation: Derivation,
}

/// Peripheral `left` of the left group corresponds to peripheral `right` of
/// the right group up to conjugacy. The image of the i-th left peripheral
/// generator equals `forward_conjugator · forward[i] · forward_conjugator⁻¹`,
/// with `forward[i]` a word in the right peripheral's own generators;
/// `backward` and `backward_conjugator` do the same in the other direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralMatch {
    pub left: usize,
    pub right: usize,
    pub forward: Vec<Word>,
    pub backward: Vec<Word>,
    pub forward_conjugator: Word,
    pub backward_conjugator: Word,
}

/// Longest conjugator tried when matching peripherals.
pub(crate) const PERIPHERAL_CONJUGATOR_LENGTH: usize = 2;

fn conjugate(g: &Word, w: &Word) -> Word {
    g.mul(w).mul(&g.inverse())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    MapSearch,
    TietzeSearch,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::MapSearch => "map_search",
            Strategy::TietzeSearch => "tietze_search",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    /// Left generator `i` as a word over the right generators.
    pub forward: Vec<Word>,
    /// Right generator `j` as a word over the left generators.
    pub backward: Vec<Word>,
    pub peripherals: Vec<PeripheralMatch>,
    pub checks: Vec<Check>,
    pub strategy: Strategy,
}

/// An identity still to be proved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Obligation {
    pub kind: CheckKind,
    pub side: Side,
    pub label: String,
    pub word: Word,
}

fn ob(kind: CheckKind, side: Side, label: String, word: Word) -> Obligation {
    Obligation {
        kind,
        side,
        label,
        word,
    }
}

/// Relator images and round trips, left side first.
pub(crate) fn map_obligations(
    left: &Presentation,
    right: &Presentation,
    forward: &[Word],
    backward: &[Word],
) -> Vec<Obligation> {
    let mut out = Vec::new();
    for (i, r) in left.relators().iter().enumerate() {
        out.push(ob(
            CheckKind::Relator,
            Side::Right,
            format!("left relator {i}"),
            r.substitute(forward),
        ));
    }
    for (i, r) in right.relators().iter().enumerate() {
        out.push(ob(
            CheckKind::Relator,
            Side::Left,
            format!("right relator {i}"),
            r.substitute(backward),
        ));
    }
    for (g, name) in left.generators().iter().enumerate() {
        let w = forward[g].substitute(backward).mul(&Word::letter(Letter::inv(g)));
        out.push(ob(CheckKind::RoundTrip, Side::Left, format!("left {name}"), w));
    }
    for (g, name) in right.generators().iter().enumerate() {
        let w = backward[g].substitute(forward).mul(&Word::letter(Letter::inv(g)));
        out.push(ob(CheckKind::RoundTrip, Side::Right, format!("right {name}"), w));
    }
    out
}

pub(crate) fn peripheral_obligations(
    left: &MarkedGroup,
    right: &MarkedGroup,
    forward: &[Word],
    backward: &[Word],
    m: &PeripheralMatch,
) -> Vec<Obligation> {
    let (p, q) = (&left.peripherals()[m.left], &right.peripherals()[m.right]);
    let mut out = Vec::new();
    for (i, (a, u)) in p.ambient_words().iter().zip(&m.forward).enumerate() {
        let w = a
            .substitute(forward)
            .mul(&conjugate(&m.forward_conjugator, &q.embed(u)).inverse());
        let name = &p.own_presentation().generators()[i];
        out.push(ob(
            CheckKind::Peripheral,
            Side::Right,
            format!("{} {name} -> {}", p.name(), q.name()),
            w,
        ));
    }
    for (i, (a, v)) in q.ambient_words().iter().zip(&m.backward).enumerate() {
        let w = a
            .substitute(backward)
            .mul(&conjugate(&m.backward_conjugator, &p.embed(v)).inverse());
        let name = &q.own_presentation().generators()[i];
        out.push(ob(
            CheckKind::Peripheral,
            Side::Left,
            format!("{} {name} -> {}", q.name(), p.name()),
            w,
        ));
    }
    out
}

fn side_group<'a>(left: &'a MarkedGroup, right: &'a MarkedGroup, side: Side) -> &'a Presentation {
    match side {
        Side::Left => left.ambient(),
        Side::Right => right.ambient(),
    }
}

impl IsoWitness {
    /// Re-checks the witness from scratch using only the stored derivations.
    pub fn verify(&self, left: &MarkedGroup, right: &MarkedGroup) -> Result<()> {
        let fail = |m: String| Err(Error::Verification(m));
        let (l, r) = (left.ambient(), right.ambient());
        if self.forward.len() != l.num_generators() || self.backward.len() != r.num_generators() {
            return fail("generator map has the wrong length".into());
        }
        if self
            .forward
            .iter()
            .any(|w| w.max_generator().is_some_and(|m| m >= r.num_generators()))
            || self
                .backward
                .iter()
                .any(|w| w.max_generator().is_some_and(|m| m >= l.num_generators()))
        {
            return fail("generator map uses an undeclared generator".into());
        }
        let k = left.peripherals().len();
        if right.peripherals().len() != k || self.peripherals.len() != k {
            return fail("peripheral matching is not a bijection".into());
        }
        let mut seen_l = vec![false; k];
        let mut seen_r = vec![false; k];
        for m in &self.peripherals {
            if m.left >= k || m.right >= k || seen_l[m.left] || seen_r[m.right] {
                return fail("peripheral matching is not a bijection".into());
            }
            seen_l[m.left] = true;
            seen_r[m.right] = true;
            let (p, q) = (&left.peripherals()[m.left], &right.peripherals()[m.right]);
            let pn = p.own_presentation().num_generators();
            let qn = q.own_presentation().num_generators();
            if m.forward.len() != pn
                || m.backward.len() != qn
                || m.forward.iter().any(|u| u.max_generator().is_some_and(|g| g >= qn))
                || m.backward.iter().any(|u| u.max_generator().is_some_and(|g| g >= pn))
                || m.forward_conjugator
                    .max_generator()
                    .is_some_and(|g| g >= r.num_generators())
                || m.backward_conjugator
                    .max_generator()
                    .is_some_and(|g| g >= l.num_generators())
            {
                return fail(format!(
                    "membership words for {} / {} are malformed",
                    p.name(),
                    q.name()
                ));
            }
        }
        let mut expected = map_obligations(l, r, &self.forward, &self.backward);
        for m in &self.peripherals {
            expected.extend(peripheral_obligations(left, right, &self.forward, &self.backward, m));
        }
        if expected.len() != self.checks.len() {
            return fail(format!(
                "{} checks recorded, {} required",
                self.checks.len(),
                expected.len()
            ));
        }
        for (e, c) in expected.iter().zip(&self.checks) {
            if e.kind != c.kind || e.side != c.side || e.label != c.label || e.word != c.word {
                return fail(format!("check `{}` does not match its obligation", c.label));
            }
            let rels = side_group(left, right, c.side).relators();
            if !c.derivation.proves(rels, &c.word) {
                return fail(format!("derivation for `{}` does not reduce to its word", c.label));
            }
        }
        Ok(())
    }
}

/// Homomorphisms into Sym3 used as cheap necessary conditions.
#[derive(Clone, Debug)]
pub(crate) struct Probes {
    pub group: std::sync::Arc<FiniteGroupTable>,
    pub homs: Vec<Vec<usize>>,
}

pub(crate) const PROBE_LIMIT: usize = 512;

impl Probes {
    pub fn new(p: &Presentation, budgets: &Budgets) -> Self {
        let group = crate::finite::catalog_group("Sym3").expect("catalog has Sym3");
        let (homs, _) = crate::homs::first_homs(p, group.as_ref(), budgets.hom_node_budget, PROBE_LIMIT);
        Probes { group, homs }
    }

    /// True when no probe separates `u` from `v`.
    pub fn agree(&self, u: &Word, v: &Word) -> bool {
        self.homs
            .iter()
            .all(|h| self.group.evaluate(u, h) == self.group.evaluate(v, h))
    }

    pub fn kills(&self, w: &Word) -> bool {
        let e = self.group.identity();
        self.homs.iter().all(|h| self.group.evaluate(w, h) == e)
    }
}

/// Proves a list of obligations, stopping at the first that is not shown
/// trivial.
pub(crate) fn discharge(
    left: &MarkedGroup,
    right: &MarkedGroup,
    obligations: Vec<Obligation>,
    budgets: &Budgets,
    stop: &dyn Stop,
) -> Option<Vec<Check>> {
    let mut out = Vec::with_capacity(obligations.len());
    for o in obligations {
        if stop.stopped() {
            return None;
        }
        let p = side_group(left, right, o.side);
        match decide_word_with(p, &o.word, budgets, stop) {
            Ok(WpVerdict::Trivial(derivation)) => out.push(Check {
                kind: o.kind,
                side: o.side,
                label: o.label,
                word: o.word,
                derivation,
            }),
            _ => return None,
        }
    }
    Some(out)
}

/// Derivations of the images of the `source` relators in `target` under
/// `map`. A relator whose image resists a direct proof is derived inside
/// `source` from relators already handled, and that derivation is pushed
/// through the map.
fn prove_relator_images(
    source: &Presentation,
    target: &Presentation,
    map: &[Word],
    budgets: &Budgets,
    stop: &dyn Stop,
) -> Option<Vec<Derivation>> {
    let rels = source.relators();
    let mut proven: Vec<Option<Derivation>> = Vec::with_capacity(rels.len());
    for r in rels {
        if stop.stopped() {
            return None;
        }
        proven.push(match decide_word_with(target, &r.substitute(map), budgets, stop) {
            Ok(WpVerdict::Trivial(d)) => Some(d),
            _ => None,
        });
    }
    loop {
        let (known, pending): (Vec<usize>, Vec<usize>) = (0..rels.len()).partition(|&j| proven[j].is_some());
        if pending.is_empty() {
            return Some(proven.into_iter().map(|d| d.expect("all proven")).collect());
        }
        if known.is_empty() {
            return None;
        }
        let sub = Presentation::new(
            source.generators().to_vec(),
            known.iter().map(|&j| rels[j].clone()).collect(),
        )
        .ok()?;
        let images: Vec<Derivation> = known.iter().map(|&j| proven[j].clone().expect("known")).collect();
        let mut progress = false;
        for i in pending {
            if stop.stopped() {
                return None;
            }
            if let Ok(WpVerdict::Trivial(d)) = decide_word_with(&sub, &rels[i], budgets, stop) {
                let moved = d.transport(map, &images);
                if moved.proves(target.relators(), &rels[i].substitute(map)) {
                    proven[i] = Some(moved);
                    progress = true;
                }
            }
        }
        if !progress {
            return None;
        }
    }
}

type Matched = (PeripheralMatch, Vec<Check>);

/// Finds membership words for one peripheral pair, probing first and proving
/// with the word problem.
struct MemberSearch<'a> {
    left: &'a MarkedGroup,
    right: &'a MarkedGroup,
    left_probes: &'a Probes,
    right_probes: &'a Probes,
    budgets: &'a Budgets,
    stop: &'a dyn Stop,
    forward: &'a [Word],
    backward: &'a [Word],
    memo: HashMap<(usize, usize), Option<Matched>>,
}

impl MemberSearch<'_> {
    /// Membership words for `targets` inside some conjugate of `own`, trying
    /// conjugators by length.
    fn find_words(
        &self,
        targets: &[Word],
        own: &crate::presentation::PeripheralRecord,
        probes: &Probes,
        side: Side,
    ) -> Option<(Word, Vec<Word>)> {
        let p = side_group(self.left, self.right, side);
        let candidates = reduced_words_up_to(
            own.own_presentation().num_generators(),
            self.budgets.wp_conjugator_length,
        );
        let conjugators = reduced_words_up_to(p.num_generators(), PERIPHERAL_CONJUGATOR_LENGTH);
        'conj: for g in &conjugators {
            let mut out = Vec::with_capacity(targets.len());
            for t in targets {
                let mut found = None;
                for u in &candidates {
                    if self.stop.stopped() {
                        return None;
                    }
                    let e = conjugate(g, &own.embed(u));
                    if !probes.agree(t, &e) {
                        continue;
                    }
                    let w = t.mul(&e.inverse());
                    if let Ok(WpVerdict::Trivial(_)) = decide_word_with(p, &w, self.budgets, self.stop) {
                        found = Some(u.clone());
                        break;
                    }
                }
                match found {
                    Some(u) => out.push(u),
                    None => continue 'conj,
                }
            }
            return Some((g.clone(), out));
        }
        None
    }

    fn pair(&mut self, j: usize, jj: usize) -> Option<Matched> {
        if let Some(hit) = self.memo.get(&(j, jj)) {
            return hit.clone();
        }
        let result = self.compute(j, jj);
        self.memo.insert((j, jj), result.clone());
        result
    }

    fn compute(&self, j: usize, jj: usize) -> Option<Matched> {
        let (p, q) = (&self.left.peripherals()[j], &self.right.peripherals()[jj]);
        let fwd_targets: Vec<Word> = p.ambient_words().iter().map(|a| a.substitute(self.forward)).collect();
        let (forward_conjugator, forward) = self.find_words(&fwd_targets, q, self.right_probes, Side::Right)?;
        let bwd_targets: Vec<Word> = q.ambient_words().iter().map(|a| a.substitute(self.backward)).collect();
        let (backward_conjugator, backward) = self.find_words(&bwd_targets, p, self.left_probes, Side::Left)?;
        let m = PeripheralMatch {
            left: j,
            right: jj,
            forward,
            backward,
            forward_conjugator,
            backward_conjugator,
        };
        let obligations = peripheral_obligations(self.left, self.right, self.forward, self.backward, &m);
        let checks = discharge(self.left, self.right, obligations, self.budgets, self.stop)?;
        Some((m, checks))
    }
}

/// Every permutation of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

pub(crate) struct Context<'a> {
    pub left: &'a MarkedGroup,
    pub right: &'a MarkedGroup,
    pub left_probes: &'a Probes,
    pub right_probes: &'a Probes,
    pub budgets: &'a Budgets,
    pub stop: &'a dyn Stop,
}

/// Proves every identity for the candidate maps and matches peripherals
/// under some bijection. Returns a verified witness or nothing.
pub(crate) fn assemble(
    cx: &Context<'_>,
    forward: Vec<Word>,
    backward: Vec<Word>,
    strategy: Strategy,
) -> Option<IsoWitness> {
    let (left, right) = (cx.left, cx.right);
    let k = left.peripherals().len();
    if right.peripherals().len() != k {
        return None;
    }
    let obligations = map_obligations(left.ambient(), right.ambient(), &forward, &backward);
    // reject cheaply before any derivation search
    for o in &obligations {
        let probes = match o.side {
            Side::Left => cx.left_probes,
            Side::Right => cx.right_probes,
        };
        if !probes.kills(&o.word) {
            return None;
        }
    }
    let (l, r) = (left.ambient(), right.ambient());
    let left_images = prove_relator_images(l, r, &forward, cx.budgets, cx.stop)?;
    let right_images = prove_relator_images(r, l, &backward, cx.budgets, cx.stop)?;
    let relator_count = l.relators().len() + r.relators().len();
    let mut rest = obligations;
    let round_trips = rest.split_off(relator_count);
    let mut checks: Vec<Check> = rest
        .into_iter()
        .zip(left_images.into_iter().chain(right_images))
        .map(|(o, derivation)| Check {
            kind: o.kind,
            side: o.side,
            label: o.label,
            word: o.word,
            derivation,
        })
        .collect();
    checks.extend(discharge(left, right, round_trips, cx.budgets, cx.stop)?);
    let mut search = MemberSearch {
        left,
        right,
        left_probes: cx.left_probes,
        right_probes: cx.right_probes,
        budgets: cx.budgets,
        stop: cx.stop,
        forward: &forward,
        backward: &backward,
        memo: HashMap::new(),
    };
    'perms: for perm in permutations(k) {
        let mut matches = Vec::with_capacity(k);
        let mut extra = Vec::new();
        for (j, &jj) in perm.iter().enumerate() {
            match search.pair(j, jj) {
                Some((m, c)) => {
                    matches.push(m);
                    extra.extend(c);
                }
                None => continue 'perms,
            }
        }
        checks.extend(extra);
        let w = IsoWitness {
            forward,
            backward,
            peripherals: matches,
            checks,
            strategy,
        };
        return w.verify(left, right).is_ok().then_some(w);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Unbounded;
    use crate::format::parse_group_file;

    #[test]
    fn permutations_in_order() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn assemble_identity_and_tamper() {
        let g = parse_group_file(
            "group G\n gens: a, b\n rels: a^2, b^3\n peripheral A\n  gens: x\n  rels:\n  embed: x -> a\n end\nend\n",
        )
        .unwrap();
        let b = Budgets::default();
        let probes = Probes::new(g.ambient(), &b);
        let cx = Context {
            left: &g,
            right: &g,
            left_probes: &probes,
            right_probes: &probes,
            budgets: &b,
            stop: &Unbounded,
        };
        let id: Vec<Word> = (0..2).map(|i| Word::letter(Letter::gen(i))).collect();
        let w = assemble(&cx, id.clone(), id.clone(), Strategy::MapSearch).unwrap();
        w.verify(&g, &g).unwrap();
        assert_eq!(w.peripherals[0].forward, vec![Word::letter(Letter::gen(0))]);

        let mut bad = w.clone();
        bad.checks[0].derivation = Derivation::default();
        assert!(bad.verify(&g, &g).is_err());
        let mut bad = w.clone();
        bad.forward[0] = Word::letter(Letter::gen(1));
        assert!(bad.verify(&g, &g).is_err());

        // swapping generators does not preserve the relators
        let swap = vec![Word::letter(Letter::gen(1)), Word::letter(Letter::gen(0))];
        assert!(assemble(&cx, swap.clone(), swap, Strategy::MapSearch).is_none());
    }
}
