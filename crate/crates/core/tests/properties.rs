mod common;

use dehnfill_core::digest::canonical_digest;
use dehnfill_core::fingerprint::{abelianization, fingerprint};
use dehnfill_core::snf::{smith_normal_form, IntegerMatrix};
use dehnfill_core::word::Letter;
use dehnfill_core::wordproblem::{decide_word, WpVerdict};
use dehnfill_core::{Budgets, Presentation, Word};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>()), 0..=max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect()))
}

fn presentation() -> impl Strategy<Value = Presentation> {
    prop::collection::vec(word(3, 7), 1..=3).prop_filter_map("nonempty relators", |rels| {
        let rels: Vec<Word> = rels
            .iter()
            .map(|w| w.free_reduce().cyclic_reduce())
            .filter(|w| !w.is_empty())
            .collect();
        Presentation::new(vec!["a".into(), "b".into(), "c".into()], rels).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn free_reduction_is_a_normal_form(w in word(3, 12), v in word(3, 12)) {
        let r = w.free_reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(w.mul(&w.inverse()).is_empty());
        prop_assert_eq!(w.concat(&v).free_reduce(), r.mul(&v.free_reduce()));
        prop_assert_eq!(w.len() % 2, r.len() % 2);
    }

    #[test]
    fn digest_ignores_names_order_rotation_and_inversion(
        p in presentation(),
        perm in Just((0..3).collect::<Vec<usize>>()).prop_shuffle(),
        shift in 0usize..16,
        flip in any::<bool>(),
    ) {
        let mut rels: Vec<Word> = p.relators().iter().map(|r| {
            let r = r.rotate(shift % r.len());
            if flip { r.inverse() } else { r }
        }).collect();
        rels.reverse();
        let q = Presentation::new(vec!["x".into(), "y".into(), "z".into()], rels).unwrap().permuted(&perm);
        prop_assert_eq!(canonical_digest(&p), canonical_digest(&q));
    }

    #[test]
    fn snf_survives_unimodular_operations(
        rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 4),
        ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..=3, any::<bool>()), 0..60),
    ) {
        let before = smith_normal_form(&IntegerMatrix::from_rows(&rows));
        let mut m = IntegerMatrix::from_rows(&rows);
        for (i, j, k, on_rows) in ops {
            match (i == j, on_rows) {
                (true, true) => m.negate_row(i),
                (true, false) => m.negate_col(i),
                (false, true) => m.add_row_multiple(i, j, &BigInt::from(k)),
                (false, false) => m.add_col_multiple(i, j, &BigInt::from(k)),
            }
        }
        let after = smith_normal_form(&m);
        prop_assert_eq!(&before, &after);
        for pair in after.windows(2) {
            prop_assert!(pair[1] == BigInt::from(0) || (&pair[1] % &pair[0]) == BigInt::from(0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tietze_moves_preserve_invariants(seed in any::<u64>(), which in 0usize..5, moves in 1usize..=3) {
        let g = &common::seeds()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (h, _) = common::tietze_orbit(&mut rng, g, moves);
        prop_assert_eq!(abelianization(g.ambient()), abelianization(h.ambient()));
        let b = Budgets::default();
        let (x, y) = (fingerprint(g.ambient(), &b), fingerprint(h.ambient(), &b));
        prop_assert!(x.first_difference(&y).is_none(), "{:?} vs {:?}", x, y);
    }

    #[test]
    fn derivations_and_witnesses_check_independently(p in presentation(), w in word(3, 6)) {
        match decide_word(&p, &w, &Budgets::default()).unwrap() {
            WpVerdict::Trivial(d) => prop_assert!(d.expand(p.relators()).unwrap() == w.free_reduce()),
            WpVerdict::Nontrivial(h) => prop_assert!(h.verify(&p, &w)),
            WpVerdict::Unknown(_) => {}
        }
    }
}
