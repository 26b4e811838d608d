//! Tietze transformations with explicit generator maps.
//!
//! Every move returns the new presentation together with a forward map (old
//! generators as words in the new ones) and a backward map (new generators as
//! words in the old ones). Composing these along a sequence of moves gives an
//! explicit isomorphism between the first and last presentation.

use crate::error::{Error, Result};
use crate::presentation::{MarkedGroup, Presentation};
use crate::word::{Letter, Word};

/// One conjugate `c * r^(+-1) * c^-1` of relator number `relator`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub relator: usize,
    pub conjugator: Word,
    pub inverse: bool,
}

impl Factor {
    pub fn new(relator: usize, conjugator: Word, inverse: bool) -> Self {
        Factor {
            relator,
            conjugator,
            inverse,
        }
    }

    pub fn expand(&self, relators: &[Word]) -> Result<Word> {
        let r = relators
            .get(self.relator)
            .ok_or_else(|| Error::InvalidMove(format!("relator index {} out of range", self.relator)))?;
        let r = if self.inverse { r.inverse() } else { r.clone() };
        Ok(r.conjugate_by(&self.conjugator))
    }
}

/// A product of conjugates of relators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub factors: Vec<Factor>,
}

impl Derivation {
    pub fn new(factors: Vec<Factor>) -> Self {
        Derivation { factors }
    }

    pub fn single(relator: usize) -> Self {
        Derivation {
            factors: vec![Factor::new(relator, Word::empty(), false)],
        }
    }

    /// The freely reduced product.
    pub fn expand(&self, relators: &[Word]) -> Result<Word> {
        let mut acc = Word::empty();
        for f in &self.factors {
            acc = acc.mul(&f.expand(relators)?);
        }
        Ok(acc)
    }

    /// True when the product freely reduces to `w`.
    pub fn proves(&self, relators: &[Word], w: &Word) -> bool {
        matches!(self.expand(relators), Ok(e) if e == w.free_reduce())
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Derivation of `c * w * c^-1` from one of `w`.
    pub fn conjugated(&self, c: &Word) -> Derivation {
        Derivation::new(
            self.factors
                .iter()
                .map(|f| Factor::new(f.relator, c.mul(&f.conjugator), f.inverse))
                .collect(),
        )
    }

    /// Derivation of `w^-1` from one of `w`.
    pub fn inverted(&self) -> Derivation {
        Derivation::new(
            self.factors
                .iter()
                .rev()
                .map(|f| Factor::new(f.relator, f.conjugator.clone(), !f.inverse))
                .collect(),
        )
    }

    /// Pushes this derivation through a homomorphism. `map` sends source
    /// generators to target words and `images[j]` derives the image of source
    /// relator `j` in the target.
    pub fn transport(&self, map: &[Word], images: &[Derivation]) -> Derivation {
        let mut factors = Vec::new();
        for f in &self.factors {
            let d = &images[f.relator];
            let d = if f.inverse { d.inverted() } else { d.clone() };
            factors.extend(d.conjugated(&f.conjugator.substitute(map)).factors);
        }
        Derivation::new(factors)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TietzeMove {
    /// New generator `name` together with relator `name * definition^-1`.
    AddGenerator { name: String, definition: Word },
    /// Eliminates a generator using the first relator in which it occurs
    /// exactly once.
    RemoveGenerator { generator: usize },
    /// Appends a consequence of the existing relators.
    AddRelator { relator: Word, derivation: Derivation },
    /// Drops relator `index`, which `derivation` expresses through the others.
    RemoveRelator { index: usize, derivation: Derivation },
}

/// Result of one move.
#[derive(Clone, Debug)]
pub struct TietzeStep {
    pub presentation: Presentation,
    /// Old generator `i` as a word in the new generators.
    pub forward: Vec<Word>,
    /// New generator `j` as a word in the old generators.
    pub backward: Vec<Word>,
}

fn identity_map(n: usize) -> Vec<Word> {
    (0..n).map(|g| Word::letter(Letter::gen(g))).collect()
}

pub fn apply_tietze(p: &Presentation, m: &TietzeMove) -> Result<TietzeStep> {
    let n = p.num_generators();
    match m {
        TietzeMove::AddGenerator { name, definition } => {
            if p.generator_index(name).is_some() {
                return Err(Error::InvalidMove(format!("generator `{name}` already exists")));
            }
            if definition.max_generator().is_some_and(|g| g >= n) {
                return Err(Error::InvalidMove("definition uses an undeclared generator".into()));
            }
            let mut gens = p.generators().to_vec();
            gens.push(name.clone());
            let mut rels = p.relators().to_vec();
            rels.push(Word::letter(Letter::gen(n)).mul(&definition.free_reduce().inverse()));
            let mut backward = identity_map(n);
            backward.push(definition.free_reduce());
            Ok(TietzeStep {
                presentation: Presentation::new(gens, rels)?,
                forward: identity_map(n),
                backward,
            })
        }
        TietzeMove::RemoveGenerator { generator } => {
            let g = *generator;
            if g >= n {
                return Err(Error::InvalidMove(format!("no generator #{g}")));
            }
            let (ri, r) = p
                .relators()
                .iter()
                .enumerate()
                .find(|(_, r)| r.occurrences(g) == 1)
                .ok_or_else(|| {
                    Error::InvalidMove(format!("`{}` occurs exactly once in no relator", p.generators()[g]))
                })?;
            let pos = r.letters().iter().position(|l| l.generator() == g).unwrap();
            let rotated = r.rotate(pos);
            let rest = Word::from_letters(rotated.letters()[1..].to_vec());
            // g^e * rest = 1
            let definition = if rotated.letters()[0].is_inverse() {
                rest
            } else {
                rest.inverse()
            };
            // old index -> new index, skipping g
            let reindex: Vec<usize> = (0..n).map(|h| if h > g { h - 1 } else { h }).collect();
            let mut forward: Vec<Word> = (0..n).map(|h| Word::letter(Letter::gen(reindex[h]))).collect();
            forward[g] = definition.relabel(&reindex);
            let rels: Vec<Word> = p
                .relators()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != ri)
                .map(|(_, w)| w.substitute(&forward))
                .collect();
            let gens: Vec<String> = p
                .generators()
                .iter()
                .enumerate()
                .filter(|(h, _)| *h != g)
                .map(|(_, s)| s.clone())
                .collect();
            let backward = (0..n)
                .filter(|&h| h != g)
                .map(|h| Word::letter(Letter::gen(h)))
                .collect();
            Ok(TietzeStep {
                presentation: Presentation::new(gens, rels)?,
                forward,
                backward,
            })
        }
        TietzeMove::AddRelator { relator, derivation } => {
            let target = relator.free_reduce();
            if target.is_empty() {
                return Err(Error::InvalidMove("relator is freely trivial".into()));
            }
            if target.max_generator().is_some_and(|g| g >= n) {
                return Err(Error::InvalidMove("relator uses an undeclared generator".into()));
            }
            if !derivation.proves(p.relators(), &target) {
                return Err(Error::InvalidMove(
                    "derivation does not reduce to the claimed relator".into(),
                ));
            }
            Ok(TietzeStep {
                presentation: p.with_relators([target]),
                forward: identity_map(n),
                backward: identity_map(n),
            })
        }
        TietzeMove::RemoveRelator { index, derivation } => {
            let r = p
                .relators()
                .get(*index)
                .ok_or_else(|| Error::InvalidMove(format!("no relator #{index}")))?;
            if derivation.factors.iter().any(|f| f.relator == *index) {
                return Err(Error::InvalidMove("derivation uses the removed relator".into()));
            }
            if !derivation.proves(p.relators(), r) {
                return Err(Error::InvalidMove(
                    "derivation does not reduce to the removed relator".into(),
                ));
            }
            let rels: Vec<Word> = p
                .relators()
                .iter()
                .enumerate()
                .filter(|(i, _)| i != index)
                .map(|(_, w)| w.clone())
                .collect();
            Ok(TietzeStep {
                presentation: Presentation::new(p.generators().to_vec(), rels)?,
                forward: identity_map(n),
                backward: identity_map(n),
            })
        }
    }
}

/// Applies a move to a marked group, carrying the peripheral embeddings
/// through the forward map.
pub fn apply_tietze_marked(g: &MarkedGroup, m: &TietzeMove) -> Result<(MarkedGroup, TietzeStep)> {
    let step = apply_tietze(g.ambient(), m)?;
    let peripherals = g
        .peripherals()
        .iter()
        .map(|p| p.with_ambient_words(p.ambient_words().iter().map(|w| w.substitute(&step.forward)).collect()))
        .collect();
    let marked = MarkedGroup::from_parts_unchecked(g.name().to_string(), step.presentation.clone(), peripherals);
    Ok((marked, step))
}

/// A composed sequence of moves with the accumulated generator maps.
#[derive(Clone, Debug)]
pub struct GeneratorMaps {
    /// Start generators as words over the current generators.
    pub forward: Vec<Word>,
    /// Current generators as words over the start generators.
    pub backward: Vec<Word>,
}

impl GeneratorMaps {
    pub fn identity(n: usize) -> Self {
        GeneratorMaps {
            forward: identity_map(n),
            backward: identity_map(n),
        }
    }

    pub fn then(&self, step: &TietzeStep) -> Self {
        GeneratorMaps {
            forward: self.forward.iter().map(|w| w.substitute(&step.forward)).collect(),
            backward: step.backward.iter().map(|w| w.substitute(&self.backward)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_generator_is_definitional() {
        let p = Presentation::free(["a"]).unwrap();
        let step = apply_tietze(
            &p,
            &TietzeMove::AddGenerator {
                name: "b".into(),
                definition: p.word("a a").unwrap(),
            },
        )
        .unwrap();
        let q = &step.presentation;
        assert_eq!(q.generators(), &["a".to_string(), "b".to_string()]);
        assert_eq!(q.relators(), &[q.word("b a^-2").unwrap()]);
        assert_eq!(step.backward[1], p.word("a^2").unwrap());
    }

    #[test]
    fn remove_duplicate_relator() {
        let p = Presentation::from_text(&["a"], &["a^3", "a^3"]).unwrap();
        let step = apply_tietze(
            &p,
            &TietzeMove::RemoveRelator {
                index: 1,
                derivation: Derivation::single(0),
            },
        )
        .unwrap();
        assert_eq!(step.presentation, Presentation::from_text(&["a"], &["a^3"]).unwrap());
    }

    #[test]
    fn add_product_of_relators() {
        let p = Presentation::from_text(&["a"], &["a^3"]).unwrap();
        let step = apply_tietze(
            &p,
            &TietzeMove::AddRelator {
                relator: p.word("a^6").unwrap(),
                derivation: Derivation::new(vec![
                    Factor::new(0, Word::empty(), false),
                    Factor::new(0, Word::empty(), false),
                ]),
            },
        )
        .unwrap();
        assert_eq!(
            step.presentation,
            Presentation::from_text(&["a"], &["a^3", "a^6"]).unwrap()
        );
    }

    #[test]
    fn bad_derivation_is_invalid() {
        let p = Presentation::from_text(&["a"], &["a^3"]).unwrap();
        let err = apply_tietze(
            &p,
            &TietzeMove::AddRelator {
                relator: p.word("a^5").unwrap(),
                derivation: Derivation::single(0),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidMove(_)));
    }

    #[test]
    fn remove_relator_cannot_cite_itself() {
        let p = Presentation::from_text(&["a"], &["a^3"]).unwrap();
        let err = apply_tietze(
            &p,
            &TietzeMove::RemoveRelator {
                index: 0,
                derivation: Derivation::single(0),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidMove(_)));
    }

    #[test]
    fn remove_generator_substitutes() {
        // <a, b, c | c b^-1 a^-1, c^2> -> <a, b | (a b)^2>
        let p = Presentation::from_text(&["a", "b", "c"], &["c b^-1 a^-1", "c^2"]).unwrap();
        let step = apply_tietze(&p, &TietzeMove::RemoveGenerator { generator: 2 }).unwrap();
        let q = &step.presentation;
        assert_eq!(q.generators().len(), 2);
        assert_eq!(q.relators(), &[q.word("a b a b").unwrap()]);
        assert_eq!(step.forward[2], q.word("a b").unwrap());
    }

    #[test]
    fn remove_generator_without_solvable_relator() {
        let p = Presentation::from_text(&["a"], &["a^2"]).unwrap();
        assert!(apply_tietze(&p, &TietzeMove::RemoveGenerator { generator: 0 }).is_err());
    }

    #[test]
    fn maps_compose() {
        let p = Presentation::free(["a"]).unwrap();
        let s1 = apply_tietze(
            &p,
            &TietzeMove::AddGenerator {
                name: "b".into(),
                definition: p.word("a a").unwrap(),
            },
        )
        .unwrap();
        let s2 = apply_tietze(&s1.presentation, &TietzeMove::RemoveGenerator { generator: 0 });
        // a occurs twice in b a^-2, so it cannot be eliminated
        assert!(s2.is_err());
        let maps = GeneratorMaps::identity(1).then(&s1);
        assert_eq!(maps.backward[1], p.word("a^2").unwrap());
        assert_eq!(maps.forward[0], p.word("a").unwrap());
    }

    #[test]
    fn transport_through_a_map() {
        let src = Presentation::from_text(&["x", "y"], &["x^3"]).unwrap();
        let tgt = Presentation::from_text(&["a", "b"], &["b a^-1 b a^-1 b a^-1"]).unwrap();
        let w = src.word("y x^-3 y^-1 x^3").unwrap();
        let d = Derivation::new(vec![
            Factor::new(0, src.word("y").unwrap(), true),
            Factor::new(0, Word::empty(), false),
        ]);
        assert!(d.proves(src.relators(), &w));
        // x -> b a^-1, y -> a
        let map = vec![tgt.word("b a^-1").unwrap(), tgt.word("a").unwrap()];
        let moved = d.transport(&map, &[Derivation::single(0)]);
        assert!(moved.proves(tgt.relators(), &w.substitute(&map)));
        assert!(d.inverted().proves(src.relators(), &w.inverse()));
    }
}
