use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use ortho_core::qform::{
    classify_orbit, congruence_transform, diagonalize_congruence, hilbert_symbol, hilbert_symbol_brute, in_theta_j,
    invariants, scalar_orbit, square_class,
};
use ortho_core::rat::{int, MatQ, Rat, SymMatQ};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

const PRIMES: [u64; 3] = [3, 5, 7];

fn padic_rat(p: u64) -> impl Strategy<Value = Rat> {
    (prop_oneof![-30i64..=-1, 1i64..=30], -2i32..=3).prop_map(move |(c, v)| {
        let pv = Rat::from_integer(BigInt::from(p).pow(v.unsigned_abs()));
        if v >= 0 {
            int(c) * pv
        } else {
            int(c) / pv
        }
    })
}

fn sym_matrix(p: u64, n: usize) -> impl Strategy<Value = SymMatQ> {
    proptest::collection::vec((-9i64..=9, 0u32..=2), n * (n + 1) / 2).prop_filter_map("singular", move |ents| {
        let mut m = MatQ::zero(n);
        let mut it = ents.into_iter();
        for i in 0..n {
            for j in i..n {
                let (c, k) = it.next().unwrap();
                let v = int(c) * Rat::from_integer(BigInt::from(p).pow(k));
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        SymMatQ::new(m).ok()
    })
}

fn invertible(n: usize) -> impl Strategy<Value = MatQ> {
    proptest::collection::vec(-3i64..=3, n * n).prop_filter_map("singular", move |ents| {
        let m = MatQ::from_fn(n, |i, j| int(ents[i * n + j]));
        (!m.det().is_zero()).then_some(m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hilbert_closed_form_matches_brute(pi in 0usize..3, a in 1i64..=60, b in 1i64..=60, sa in any::<bool>(), sb in any::<bool>()) {
        let p = PRIMES[pi];
        let a = if sa { int(-a) } else { int(a) };
        let b = if sb { int(-b) } else { int(b) };
        prop_assert_eq!(hilbert_symbol(&a, &b, p).unwrap(), hilbert_symbol_brute(&a, &b, p).unwrap());
    }

    #[test]
    fn hilbert_is_bimultiplicative((p, a, b, c) in (0usize..3).prop_flat_map(|i| {
        let p = PRIMES[i];
        (Just(p), padic_rat(p), padic_rat(p), padic_rat(p))
    })) {
        let h = |x: &Rat, y: &Rat| hilbert_symbol(x, y, p).unwrap();
        prop_assert_eq!(h(&(&a * &b), &c), h(&a, &c) * h(&b, &c));
        prop_assert_eq!(h(&a, &b), h(&b, &a));
        prop_assert_eq!(h(&a, &-a.clone()), 1);
        if a != Rat::one() {
            prop_assert_eq!(h(&a, &(Rat::one() - &a)), 1);
        }
        prop_assert_eq!(h(&(&a * &a), &b), 1);
    }

    #[test]
    fn invariants_are_congruence_stable((p, a, t) in (0usize..3, 2usize..=4).prop_flat_map(|(i, n)| {
        let p = PRIMES[i];
        (Just(p), sym_matrix(p, n), invertible(n))
    })) {
        let b = a.congruent(&t).unwrap();
        prop_assert_eq!(invariants(&a, p).unwrap(), invariants(&b, p).unwrap());
        prop_assert_eq!(scalar_orbit(&a, p).unwrap(), scalar_orbit(&b, p).unwrap());
    }

    #[test]
    fn congruence_under_random_transform(pi in 0usize..3, a in sym_matrix(5, 3), t in invertible(3)) {
        let p = PRIMES[pi];
        let b = a.congruent(&t).unwrap();
        prop_assert_eq!(classify_orbit(&a, p).unwrap(), classify_orbit(&b, p).unwrap());
        prop_assert_eq!(in_theta_j(&a, p).unwrap(), in_theta_j(&b, p).unwrap());
    }

    #[test]
    fn diagonalization_is_a_congruence(a in sym_matrix(3, 3)) {
        let (d, q) = diagonalize_congruence(&a).unwrap();
        prop_assert_eq!(&a.matrix().congruent(&q), d.matrix());
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!(i == j || d.matrix().get(i, j).is_zero());
            }
        }
        let inv = invariants(&a, 3).unwrap();
        // Π_{i≤j} and Π_{i<j} differ by (det, −1)
        prop_assert_eq!(inv.hasse * inv.hasse0, hilbert_symbol(&a.det(), &int(-1), 3).unwrap());
    }

    #[test]
    fn unimodular_integer_forms_have_trivial_hasse(pi in 0usize..3, ents in proptest::collection::vec(-20i64..=20, 6)) {
        let p = PRIMES[pi];
        let m = MatQ::from_fn(3, |i, j| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            int(ents[a * 3 - a * (a + 1) / 2 + b])
        });
        let det = m.det();
        prop_assume!(!det.is_zero());
        prop_assume!(ortho_core::rat::valuation(&det, p).unwrap() == 0);
        let inv = invariants(&SymMatQ::new(m).unwrap(), p).unwrap();
        prop_assert_eq!((inv.hasse, inv.hasse0), (1, 1));
    }

    #[test]
    fn binary_forms_avoid_the_excluded_label(pi in 0usize..3, a in sym_matrix(3, 2)) {
        let p = PRIMES[pi];
        let l = classify_orbit(&a, p).unwrap();
        prop_assert!(!(l.disc == square_class(&int(-1), p).unwrap() && l.hasse == -1));
    }

    #[test]
    fn transform_realizes_congruence(pi in 0usize..3, a in sym_matrix(5, 3), t in invertible(3)) {
        let p = PRIMES[pi];
        let b = a.congruent(&t).unwrap();
        let q = congruence_transform(&a, &b, p, 6).unwrap();
        prop_assert!(a.matrix().congruent(&q).congruent_mod(b.matrix(), p, 6));
    }
}

#[test]
fn ternary_forms_realize_eight_labels() {
    for p in PRIMES {
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        let strat = sym_matrix(p, 3);
        let mut seen = BTreeSet::new();
        for _ in 0..500 {
            let a = strat.new_tree(&mut runner).unwrap().current();
            seen.insert(classify_orbit(&a, p).unwrap());
        }
        assert_eq!(seen.len(), 8, "p = {p}");
    }
}
