mod common;

use betarate_core::exact_tests::ks_critical_value;
use betarate_core::specfun::reg_inc_gamma_upper;
use betarate_core::*;
use common::binomial_exact;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Exact hypergeometric probabilities of every table sharing the margins of
/// `t`, keyed by `wins_b`.
fn enumerate(t: &ContingencyTable) -> Vec<(u64, BigRational)> {
    let denominator = binomial_exact(t.m_tot(), t.m_a());
    t.wins_b_support()
        .map(|wins_b| {
            let wins_a = t.n_tot() - wins_b;
            let losses_a = t.m_a() - wins_a;
            let numerator = binomial_exact(t.n_tot(), wins_a) * binomial_exact(t.o_tot(), losses_a);
            (wins_b, BigRational::new(numerator, denominator.clone()))
        })
        .collect()
}

fn exact_p(t: &ContingencyTable, tail: Tail) -> f64 {
    let tables = enumerate(t);
    let observed = tables.iter().find(|(w, _)| *w == t.wins_b).unwrap().1.clone();
    let total: BigRational = tables
        .iter()
        .filter(|(w, p)| match tail {
            Tail::SingleLess => *w <= t.wins_b,
            Tail::SingleGreater => *w >= t.wins_b,
            Tail::TwoSidedMinLikelihood => *p <= observed,
        })
        .map(|(_, p)| p.clone())
        .fold(BigRational::from_integer(BigInt::from(0)), |acc, p| acc + p);
    total.to_f64().unwrap()
}

const TAILS: [Tail; 3] = [Tail::SingleLess, Tail::SingleGreater, Tail::TwoSidedMinLikelihood];

#[test]
fn fisher_matches_enumeration() {
    let t = ContingencyTable::new(1, 11, 9, 3);
    assert_eq!((t.n_tot(), t.o_tot(), t.m_a()), (10, 14, 12));
    for tail in TAILS {
        let got = fisher_exact_p(&t, tail).unwrap();
        assert!((got - exact_p(&t, tail)).abs() < 1e-12, "{tail:?}");
    }
}

#[test]
fn fisher_examples() {
    let even = ContingencyTable::new(5, 5, 5, 5);
    assert!(fisher_exact_p(&even, Tail::SingleGreater).unwrap() >= 0.5);
    let t = ContingencyTable::new(3, 1, 1, 3);
    // whole support: SingleLess at the maximum wins_b is everything
    let top = t.with_wins_b(*t.wins_b_support().end());
    assert!((fisher_exact_p(&top, Tail::SingleLess).unwrap() - 1.0).abs() < 1e-12);
    let bottom = t.with_wins_b(*t.wins_b_support().start());
    assert!((fisher_exact_p(&bottom, Tail::SingleGreater).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn point_probability_is_exact() {
    let mut rng_state = 7u64;
    let mut next = |bound: u64| {
        rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (rng_state >> 33) % (bound + 1)
    };
    for _ in 0..200 {
        let t = ContingencyTable::new(next(40), next(40), next(40), next(40));
        if t.m_tot() == 0 {
            continue;
        }
        let want = enumerate(&t).into_iter().find(|(w, _)| *w == t.wins_b).unwrap().1;
        let want = want.to_f64().unwrap();
        let got = fisher_table_probability(&t).unwrap();
        assert!((got - want).abs() <= 1e-12 * want.max(1e-300) + 1e-300, "{t:?}");
    }
}

#[test]
fn log_likelihood_conventions() {
    let t = ContingencyTable::new(1, 1, 1, 1);
    let fact = log_likelihood(&t, LikelihoodConvention::Factorial).unwrap();
    assert!((fact - (2.0f64 / 3.0).ln()).abs() < 1e-14);
    let literal = log_likelihood(&t, LikelihoodConvention::BetaOfCounts).unwrap();
    assert_eq!(literal, log_likelihood(&t, LikelihoodConvention::default()).unwrap());
    assert_eq!(literal, log_likelihood(&ContingencyTable::new(1, 1, 1, 1), LikelihoodConvention::BetaOfCounts).unwrap());
    let zero_cell = ContingencyTable::new(0, 3, 2, 2);
    let err = log_likelihood(&zero_cell, LikelihoodConvention::BetaOfCounts).unwrap_err();
    assert!(err.to_string().contains("add one"));
    assert!(log_likelihood(&zero_cell, LikelihoodConvention::Factorial).is_ok());
}

#[test]
fn factorial_likelihood_is_a_log_probability() {
    let mut state = 99u64;
    for _ in 0..100 {
        state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
        let c = |shift: u32| (state >> shift) % 25;
        let t = ContingencyTable::new(c(8), c(16), c(24), c(32));
        if t.m_tot() == 0 {
            continue;
        }
        let ell = log_likelihood(&t, LikelihoodConvention::Factorial).unwrap();
        assert!(ell <= 1e-14);
        let p = fisher_table_probability(&t).unwrap();
        assert!((ell.exp() - p).abs() < 1e-12 * p.max(1e-300), "{t:?}");
    }
}

#[test]
fn wilks_examples() {
    let (d, p) = wilks_test(-4.2, -4.2, 1).unwrap();
    assert_eq!(d, 0.0);
    assert_eq!(p, 1.0);
    let (d, p) = wilks_test(0.0, -3.841459 / 2.0, 1).unwrap();
    assert!((d - 3.841459).abs() < 1e-12);
    assert!((p - 0.05).abs() < 1e-6);
    let (d, p) = wilks_test(0.0, -5.991465 / 2.0, 2).unwrap();
    assert!((p - (-d / 2.0).exp()).abs() < 1e-14);
    assert!((p - 0.05).abs() < 1e-6);
    assert!(wilks_test(-5.0, -4.0, 1).is_err());
    assert!(wilks_test(-3.0, -4.0, 0).is_err());
    assert!(wilks_test(f64::NAN, -4.0, 1).is_err());
}

#[test]
fn wilks_p_is_strictly_decreasing() {
    for dof in [1u32, 2, 3, 7, 20] {
        let mut last = 1.0 + f64::EPSILON;
        for k in 0..200 {
            let d = k as f64 * 0.25;
            let (_, p) = wilks_test(d / 2.0, 0.0, dof).unwrap();
            assert!(p < last, "dof={dof} d={d}");
            assert_eq!(p, reg_inc_gamma_upper(dof as f64 / 2.0, d / 2.0).unwrap());
            last = p;
        }
    }
}

#[test]
fn ks_examples() {
    let a = [0.3, 1.2, -0.5, 2.0];
    let same = ks_two_sample(&a, &a, 0.05).unwrap();
    assert_eq!(same.d_stat, 0.0);
    assert!(!same.reject);
    let low = [0.1, 0.2, 0.3];
    let high = [0.5, 0.6, 0.7, 0.8];
    assert_eq!(ks_two_sample(&low, &high, 0.05).unwrap().d_stat, 1.0);
    let c = ks_critical_value(0.05).unwrap();
    assert!((c - (-0.5 * 0.025f64.ln()).sqrt()).abs() < 1e-15);
    assert!((c - 1.358_102).abs() < 1e-6);
    assert!(ks_two_sample(&[], &a, 0.05).is_err());
    assert!(ks_two_sample(&a, &[f64::NAN], 0.05).is_err());
    assert!(ks_two_sample(&a, &a, 1.0).is_err());
}

#[test]
fn ks_threshold_shrinks_with_sample_size() {
    let mut last = f64::INFINITY;
    for n in [1usize, 2, 5, 10, 50, 200] {
        let xs: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let r = ks_two_sample(&xs, &xs, 0.05).unwrap();
        assert!(r.threshold < last);
        last = r.threshold;
    }
}

/// `sup |F_a - F_b|` by evaluating both right-continuous ECDFs at every
/// pooled point.
fn brute_force_d(a: &[f64], b: &[f64]) -> f64 {
    let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
    a.iter()
        .chain(b)
        .map(|&x| (ecdf(a, x) - ecdf(b, x)).abs())
        .fold(0.0, f64::max)
}

fn table() -> impl Strategy<Value = ContingencyTable> {
    (0u64..30, 0u64..30, 0u64..30, 0u64..30)
        .prop_filter("non-empty", |c| c.0 + c.1 + c.2 + c.3 > 0)
        .prop_map(|(a, b, c, d)| ContingencyTable::new(a, b, c, d))
}

proptest! {
    #[test]
    fn fisher_swap_reflects_tails(t in table()) {
        let s = t.swapped();
        let less = fisher_exact_p(&t, Tail::SingleLess).unwrap();
        let greater = fisher_exact_p(&t, Tail::SingleGreater).unwrap();
        prop_assert!((less - fisher_exact_p(&s, Tail::SingleGreater).unwrap()).abs() < 1e-12);
        prop_assert!((greater - fisher_exact_p(&s, Tail::SingleLess).unwrap()).abs() < 1e-12);
        let two = fisher_exact_p(&t, Tail::TwoSidedMinLikelihood).unwrap();
        prop_assert!((two - fisher_exact_p(&s, Tail::TwoSidedMinLikelihood).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn fisher_tails_partition(t in table()) {
        let less = fisher_exact_p(&t, Tail::SingleLess).unwrap();
        let greater = fisher_exact_p(&t, Tail::SingleGreater).unwrap();
        let point = fisher_table_probability(&t).unwrap();
        prop_assert!((less + greater - point - 1.0).abs() < 1e-12);
        let two = fisher_exact_p(&t, Tail::TwoSidedMinLikelihood).unwrap();
        prop_assert!(two <= 1.0 && two >= point - 1e-15);
    }

    #[test]
    fn ks_is_symmetric_and_matches_brute_force(
        a in prop::collection::vec(-5i32..5, 1..40),
        b in prop::collection::vec(-5i32..5, 1..40),
        alpha in 0.01f64..0.5,
    ) {
        // small integer support forces plenty of ties
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let ab = ks_two_sample(&a, &b, alpha).unwrap();
        let ba = ks_two_sample(&b, &a, alpha).unwrap();
        prop_assert_eq!(ab.d_stat.to_bits(), ba.d_stat.to_bits());
        prop_assert!((ab.d_stat - brute_force_d(&a, &b)).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&ab.d_stat));
        prop_assert_eq!(ab.reject, ab.d_stat > ab.threshold);
        prop_assert_eq!((ab.m_a, ab.m_b), (a.len(), b.len()));
    }
}
