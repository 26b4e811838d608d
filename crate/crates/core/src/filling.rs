//! Dehn fillings: quotients of the ambient group by the normal closure of
//! chosen subgroups of the peripherals.

use crate::budget::Budgets;
use crate::charcore::{characteristic_core, CoreCache};
use crate::error::{Error, Result};
use crate::par;
use crate::presentation::{MarkedGroup, PeripheralRecord, Presentation};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillingResult {
    pub quotient: Presentation,
    /// Original peripheral records with the killed words appended to their
    /// own relators. This presents `P_j / N_j` only when the filling is
    /// proper, which is not checked here.
    pub image_peripherals: Vec<PeripheralRecord>,
    /// Sorted `|P_j / C_i(P_j)|`; characteristic fillings only.
    pub peripheral_orders: Option<Vec<u64>>,
    pub level: Option<usize>,
    /// Always true: properness of the filling is never certified.
    pub unverified_properness: bool,
}

impl FillingResult {
    pub fn peripheral_count(&self) -> usize {
        self.image_peripherals.len()
    }

    pub fn as_marked_group(&self, name: impl Into<String>) -> MarkedGroup {
        MarkedGroup::from_parts_unchecked(name.into(), self.quotient.clone(), self.image_peripherals.clone())
    }
}

/// `G / <<N_1, .., N_k>>` with `N_j` generated by `kernels[j]`, words in the
/// j-th peripheral's own generators.
pub fn dehn_filling(g: &MarkedGroup, kernels: &[Vec<Word>]) -> Result<FillingResult> {
    if kernels.len() != g.peripherals().len() {
        return Err(Error::InvalidArgument(format!(
            "{} kernel lists for {} peripherals",
            kernels.len(),
            g.peripherals().len()
        )));
    }
    let mut extra = Vec::new();
    let mut images = Vec::with_capacity(kernels.len());
    for (p, ks) in g.peripherals().iter().zip(kernels) {
        let own_n = p.own_presentation().num_generators();
        for w in ks {
            if let Some(m) = w.max_generator() {
                if m >= own_n {
                    return Err(Error::UndeclaredGenerator {
                        name: format!("{}#{m}", p.name()),
                    });
                }
            }
            extra.push(p.embed(w));
        }
        images.push(p.with_own(p.own_presentation().with_relators(ks.iter().cloned())));
    }
    Ok(FillingResult {
        quotient: g.ambient().with_relators(extra),
        image_peripherals: images,
        peripheral_orders: None,
        level: None,
        unverified_properness: true,
    })
}

/// Filling by the level-`i` characteristic cores of every peripheral.
pub fn characteristic_filling(g: &MarkedGroup, level: usize, budgets: &Budgets) -> Result<FillingResult> {
    characteristic_filling_cached(g, level, budgets, None)
}

pub fn characteristic_filling_cached(
    g: &MarkedGroup,
    level: usize,
    budgets: &Budgets,
    cache: Option<&CoreCache>,
) -> Result<FillingResult> {
    if level == 0 {
        return Err(Error::InvalidArgument("filling level must be at least 1".into()));
    }
    let cores = par::map_ordered(budgets.exec, g.peripherals(), |p| match cache {
        Some(c) => c.get_or_compute(p.own_presentation(), level, budgets),
        None => characteristic_core(p.own_presentation(), level, budgets),
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let kernels: Vec<Vec<Word>> = cores.iter().map(|c| c.generators.clone()).collect();
    let mut f = dehn_filling(g, &kernels)?;
    let mut orders: Vec<u64> = cores.iter().map(|c| c.quotient_order).collect();
    orders.sort_unstable();
    f.peripheral_orders = Some(orders);
    f.level = Some(level);
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_group_file;

    fn f2(second: &str) -> MarkedGroup {
        parse_group_file(&format!(
            "group F2\n gens: a, b\n rels:\n peripheral A\n  gens: x\n  rels:\n  embed: x -> a\n end\n peripheral B\n  gens: x\n  rels:\n  embed: x -> {second}\n end\nend\n"
        ))
        .unwrap()
    }

    #[test]
    fn free_product_filling() {
        let g = f2("b");
        let x2 = vec![Word::power(0, 2)];
        let x3 = vec![Word::power(0, 3)];
        let f = dehn_filling(&g, &[x2, x3]).unwrap();
        assert_eq!(
            f.quotient,
            Presentation::from_text(&["a", "b"], &["a^2", "b^3"]).unwrap()
        );
        assert!(f.peripheral_orders.is_none());
    }

    #[test]
    fn empty_kernels_are_identity() {
        let g = f2("b");
        let f = dehn_filling(&g, &[vec![], vec![]]).unwrap();
        assert_eq!(&f.quotient, g.ambient());
    }

    #[test]
    fn killing_whole_peripheral() {
        let amb = Presentation::free(["a", "b"]).unwrap();
        let g = MarkedGroup::new(
            "G",
            amb.clone(),
            vec![PeripheralRecord::cyclic("A", amb.word("a").unwrap())],
        )
        .unwrap();
        let f = dehn_filling(&g, &[vec![Word::power(0, 1)]]).unwrap();
        assert_eq!(f.quotient, Presentation::from_text(&["a", "b"], &["a"]).unwrap());
    }

    #[test]
    fn kernel_word_outside_peripheral_alphabet() {
        let g = f2("b");
        let bad = vec![Word::power(1, 1)];
        assert!(matches!(
            dehn_filling(&g, &[bad, vec![]]),
            Err(Error::UndeclaredGenerator { .. })
        ));
    }

    #[test]
    fn characteristic_levels() {
        let g = f2("b");
        let f2_ = characteristic_filling(&g, 2, &Budgets::default()).unwrap();
        assert_eq!(
            f2_.quotient,
            Presentation::from_text(&["a", "b"], &["a^2", "b^2"]).unwrap()
        );
        assert_eq!(f2_.peripheral_orders, Some(vec![2, 2]));
        let f1 = characteristic_filling(&g, 1, &Budgets::default()).unwrap();
        assert_eq!(f1.quotient, Presentation::from_text(&["a", "b"], &["a", "b"]).unwrap());
        assert_eq!(f1.peripheral_orders, Some(vec![1, 1]));
    }

    #[test]
    fn squared_peripheral() {
        let g = f2("b b");
        let f = characteristic_filling(&g, 2, &Budgets::default()).unwrap();
        assert_eq!(
            f.quotient,
            Presentation::from_text(&["a", "b"], &["a^2", "b^4"]).unwrap()
        );
        assert_eq!(f.peripheral_orders, Some(vec![2, 2]));
    }
}
