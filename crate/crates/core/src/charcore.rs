//! Characteristic cores: the intersection of all subgroups of index at most
//! `i`, computed as the kernel of the product of every homomorphism into
//! `Sym(i)`.

use std::sync::Arc;

use dashmap::DashMap;

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::homs::enumerate_homs_with;
use crate::presentation::Presentation;
use crate::schreier::{kernel_generators, permutation_image};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreResult {
    pub level: usize,
    /// Generators of the core as words in the presentation's generators.
    pub generators: Vec<Word>,
    /// Index of the core.
    pub quotient_order: u64,
}

pub fn characteristic_core(p: &Presentation, level: usize, budgets: &Budgets) -> Result<CoreResult> {
    if level == 0 {
        return Err(Error::InvalidArgument("core level must be at least 1".into()));
    }
    let homs = enumerate_homs_with(p, level, budgets.hom_node_budget, budgets.hom_node_budget, budgets.exec)?;
    let image = permutation_image(p.num_generators(), &homs, budgets.closure_order_cap)?;
    Ok(CoreResult {
        level,
        generators: kernel_generators(p, &image),
        quotient_order: image.order() as u64,
    })
}

/// Memoizes cores by exact presentation and level. Safe to share between
/// threads.
#[derive(Default, Clone)]
pub struct CoreCache {
    map: Arc<DashMap<(Presentation, usize), CoreResult>>,
}

impl CoreCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_compute(&self, p: &Presentation, level: usize, budgets: &Budgets) -> Result<CoreResult> {
        let key = (p.clone(), level);
        if let Some(hit) = self.map.get(&key) {
            return Ok(hit.clone());
        }
        let result = characteristic_core(p, level, budgets)?;
        self.map.insert(key, result.clone());
        Ok(result)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd_of_exponents(ws: &[Word]) -> i64 {
        ws.iter().fold(0, |acc, w| num_integer::gcd(acc, w.exponent_sums(1)[0]))
    }

    #[test]
    fn level_one_is_whole_group() {
        let p = Presentation::free(["a"]).unwrap();
        let c = characteristic_core(&p, 1, &Budgets::default()).unwrap();
        assert_eq!(c.generators, vec![p.word("a").unwrap()]);
        assert_eq!(c.quotient_order, 1);
    }

    #[test]
    fn integers_level_two_and_three() {
        let p = Presentation::free(["a"]).unwrap();
        let c2 = characteristic_core(&p, 2, &Budgets::default()).unwrap();
        assert_eq!((gcd_of_exponents(&c2.generators), c2.quotient_order), (2, 2));
        let c3 = characteristic_core(&p, 3, &Budgets::default()).unwrap();
        assert_eq!((gcd_of_exponents(&c3.generators), c3.quotient_order), (6, 6));
    }

    #[test]
    fn free_abelian_rank_two_level_two() {
        let p = Presentation::from_text(&["a", "b"], &["a b a^-1 b^-1"]).unwrap();
        let c = characteristic_core(&p, 2, &Budgets::default()).unwrap();
        assert_eq!(c.quotient_order, 4);
        // every generator has even exponent sums; a^2 and b^2 are reachable
        for w in &c.generators {
            let e = w.exponent_sums(2);
            assert!(e[0] % 2 == 0 && e[1] % 2 == 0, "{w:?}");
        }
    }

    #[test]
    fn level_zero_rejected() {
        let p = Presentation::free(["a"]).unwrap();
        assert!(characteristic_core(&p, 0, &Budgets::default()).is_err());
    }

    #[test]
    fn cache_hits() {
        let p = Presentation::free(["a"]).unwrap();
        let cache = CoreCache::new();
        let a = cache.get_or_compute(&p, 3, &Budgets::default()).unwrap();
        let b = cache.get_or_compute(&p, 3, &Budgets::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
    }
}
