//! Finite presentations and the marked-group data model.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::format;
use crate::word::Word;

/// `<generators | relators>`. Relators are kept freely and cyclically
/// reduced and nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.as_str()) {
                return Err(Error::DuplicateGenerator { name: g.clone() });
            }
        }
        let n = generators.len();
        let mut rels = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(m) = r.max_generator() {
                if m >= n {
                    return Err(Error::UndeclaredGenerator { name: format!("#{m}") });
                }
            }
            let r = r.cyclic_reduce();
            if !r.is_empty() {
                rels.push(r);
            }
        }
        Ok(Presentation {
            generators,
            relators: rels,
        })
    }

    /// Free group on the given names.
    pub fn free<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(names.into_iter().map(Into::into).collect(), Vec::new())
    }

    /// Convenience constructor from a generator list and relators in the text
    /// word syntax (`a^2 b^-1`).
    pub fn from_text(generators: &[&str], relators: &[&str]) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relators
            .iter()
            .map(|r| format::parse_word(r, &names))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names, rels)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Sum of relator lengths.
    pub fn size(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Parses a word in this presentation's alphabet.
    pub fn word(&self, text: &str) -> Result<Word> {
        format::parse_word(text, &self.generators)
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    /// Returns a copy with `extra` relators appended (reduced; empties dropped).
    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Self {
        let mut rels = self.relators.clone();
        for r in extra {
            let r = r.cyclic_reduce();
            if !r.is_empty() {
                rels.push(r);
            }
        }
        Presentation {
            generators: self.generators.clone(),
            relators: rels,
        }
    }

    /// Same group with generators renamed (indices unchanged).
    pub fn renamed(&self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.generators.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} names, got {}",
                self.generators.len(),
                names.len()
            )));
        }
        Self::new(names, self.relators.clone())
    }

    /// Reorders generators: generator `i` moves to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut names = vec![String::new(); self.generators.len()];
        for (i, name) in self.generators.iter().enumerate() {
            names[perm[i]] = name.clone();
        }
        Presentation {
            generators: names,
            relators: self.relators.iter().map(|r| r.relabel(perm)).collect(),
        }
    }
}

/// A peripheral subgroup: its own presentation and, positionally, the ambient
/// word each of its generators maps to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeripheralRecord {
    name: String,
    ambient_words: Vec<Word>,
    own: Presentation,
}

impl PeripheralRecord {
    pub fn new(name: impl Into<String>, ambient_words: Vec<Word>, own: Presentation) -> Result<Self> {
        let name = name.into();
        if ambient_words.len() != own.num_generators() {
            return Err(Error::ArityMismatch {
                peripheral: name,
                words: ambient_words.len(),
                generators: own.num_generators(),
            });
        }
        Ok(PeripheralRecord {
            name,
            ambient_words: ambient_words.into_iter().map(|w| w.free_reduce()).collect(),
            own,
        })
    }

    /// Peripheral `<x | >` embedded by `x -> word`.
    pub fn cyclic(name: impl Into<String>, word: Word) -> Self {
        PeripheralRecord {
            name: name.into(),
            ambient_words: vec![word.free_reduce()],
            own: Presentation::free(["x"]).expect("single generator"),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_words(&self) -> &[Word] {
        &self.ambient_words
    }

    pub fn own_presentation(&self) -> &Presentation {
        &self.own
    }

    /// Pushes a word in the peripheral's own generators into the ambient group.
    pub fn embed(&self, w: &Word) -> Word {
        w.substitute(&self.ambient_words)
    }

    pub(crate) fn with_own(&self, own: Presentation) -> Self {
        PeripheralRecord {
            name: self.name.clone(),
            ambient_words: self.ambient_words.clone(),
            own,
        }
    }

    pub(crate) fn with_ambient_words(&self, ambient_words: Vec<Word>) -> Self {
        PeripheralRecord {
            name: self.name.clone(),
            ambient_words,
            own: self.own.clone(),
        }
    }
}

/// A presentation with a list of peripheral subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedGroup {
    name: String,
    ambient: Presentation,
    peripherals: Vec<PeripheralRecord>,
}

impl MarkedGroup {
    pub fn new(name: impl Into<String>, ambient: Presentation, peripherals: Vec<PeripheralRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &peripherals {
            if !seen.insert(p.name.as_str()) {
                return Err(Error::DuplicatePeripheral { name: p.name.clone() });
            }
            for w in &p.ambient_words {
                if let Some(m) = w.max_generator() {
                    if m >= ambient.num_generators() {
                        return Err(Error::UndeclaredGenerator { name: format!("#{m}") });
                    }
                }
            }
        }
        Ok(MarkedGroup {
            name: name.into(),
            ambient,
            peripherals,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Presentation {
        &self.ambient
    }

    pub fn peripherals(&self) -> &[PeripheralRecord] {
        &self.peripherals
    }

    pub fn peripheral(&self, name: &str) -> Result<&PeripheralRecord> {
        self.peripherals
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::UnknownPeripheral { name: name.to_string() })
    }

    /// Reorders ambient generators (`i` moves to `perm[i]`), rewriting the
    /// peripheral embeddings to match.
    pub fn permute_generators(&self, perm: &[usize]) -> Self {
        MarkedGroup {
            name: self.name.clone(),
            ambient: self.ambient.permuted(perm),
            peripherals: self
                .peripherals
                .iter()
                .map(|p| p.with_ambient_words(p.ambient_words.iter().map(|w| w.relabel(perm)).collect()))
                .collect(),
        }
    }

    /// Reorders the peripheral list: peripheral `j` moves to position `perm[j]`.
    pub fn permute_peripherals(&self, perm: &[usize]) -> Self {
        let mut slots: Vec<Option<PeripheralRecord>> = vec![None; self.peripherals.len()];
        for (j, p) in self.peripherals.iter().enumerate() {
            slots[perm[j]] = Some(p.clone());
        }
        MarkedGroup {
            name: self.name.clone(),
            ambient: self.ambient.clone(),
            peripherals: slots.into_iter().map(|p| p.expect("permutation")).collect(),
        }
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        MarkedGroup {
            name: name.into(),
            ..self.clone()
        }
    }

    pub(crate) fn from_parts_unchecked(
        name: String,
        ambient: Presentation,
        peripherals: Vec<PeripheralRecord>,
    ) -> Self {
        MarkedGroup {
            name,
            ambient,
            peripherals,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relators_are_cyclically_reduced_and_nonempty() {
        let p = Presentation::from_text(&["a", "b"], &["b a b^-1", "a a^-1"]).unwrap();
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.show(&p.relators()[0]), "a");
    }

    #[test]
    fn duplicate_generators_rejected() {
        let err = Presentation::free(["a", "a"]).unwrap_err();
        assert!(matches!(err, Error::DuplicateGenerator { .. }));
    }

    #[test]
    fn arity_mismatch() {
        let own = Presentation::free(["x"]).unwrap();
        let err = PeripheralRecord::new("P", vec![Word::empty(), Word::empty()], own).unwrap_err();
        assert!(matches!(
            err,
            Error::ArityMismatch {
                words: 2,
                generators: 1,
                ..
            }
        ));
    }

    #[test]
    fn duplicate_peripherals_rejected() {
        let amb = Presentation::free(["a"]).unwrap();
        let a = amb.word("a").unwrap();
        let err = MarkedGroup::new(
            "G",
            amb,
            vec![
                PeripheralRecord::cyclic("P", a.clone()),
                PeripheralRecord::cyclic("P", a),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicatePeripheral { .. }));
    }

    #[test]
    fn permuting_generators_keeps_names_attached() {
        let p = Presentation::from_text(&["a", "b"], &["a^2 b"]).unwrap();
        let q = p.permuted(&[1, 0]);
        assert_eq!(q.generators(), &["b".to_string(), "a".to_string()]);
        assert_eq!(q.show(&q.relators()[0]), "a^2 b");
    }
}
