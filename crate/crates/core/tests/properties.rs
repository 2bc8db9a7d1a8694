use num_complex::Complex64;
use proptest::prelude::*;

use gcikit::exact::rat::{fmt_rat, parse_rat, rat, Rat};
use gcikit::fourpoint::{assemble_p4, crossing_check, truncated_4pt_value, PWParams};
use gcikit::kinematics::{Point, PointConfig};
use gcikit::partialwave::{closed_form_b, decompose};
use gcikit::symmetrize::{enumerate_patterns, symmetrized_wt, v1_maxwell_4pt};
use gcikit::thermal::{elliptic_p1, modular_check_g};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn params() -> impl Strategy<Value = PWParams> {
    (
        small_rat(),
        small_rat(),
        small_rat(),
        small_rat(),
        small_rat(),
        0i64..=4,
    )
        .prop_map(|(a0, a1, a2, b, c, big)| PWParams::new(a0, a1, a2, b, c, rat(big, 1)))
}

fn point() -> impl Strategy<Value = Point> {
    [small_rat(), small_rat(), small_rat(), small_rat()]
}

fn config4() -> impl Strategy<Value = PointConfig> {
    proptest::collection::vec(point(), 4)
        .prop_map(PointConfig::new)
        .prop_filter("nondegenerate", |c| c.is_nondegenerate())
}

fn perm4() -> impl Strategy<Value = Vec<usize>> {
    Just(vec![0usize, 1, 2, 3]).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rat_text_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
    }

    #[test]
    fn assembly_is_linear(p in params(), q in params()) {
        let sum = assemble_p4(&p.add(&q)).poly;
        prop_assert_eq!(sum, &assemble_p4(&p).poly + &assemble_p4(&q).poly);
    }

    #[test]
    fn assembled_polynomial_is_crossing_symmetric(p in params()) {
        prop_assert!(crossing_check(&assemble_p4(&p).poly, 4).unwrap());
    }

    #[test]
    fn truncated_function_is_permutation_invariant(p in params(), cfg in config4(), perm in perm4()) {
        let poly = assemble_p4(&p).poly;
        let a = truncated_4pt_value(&poly, &cfg, 4).unwrap();
        let b = truncated_4pt_value(&poly, &cfg.permuted(&perm), 4).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn symmetrized_correlator_is_permutation_invariant(cfg in config4(), perm in perm4(), lam in small_rat()) {
        let a = symmetrized_wt(&lam, &v1_maxwell_4pt, &cfg).unwrap();
        let b = symmetrized_wt(&lam, &v1_maxwell_4pt, &cfg.permuted(&perm)).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn decomposition_is_linear_and_matches_closed_form(p in params(), q in params()) {
        let (k, l) = (3, 3);
        let sp = decompose(&p, k, l).unwrap();
        let sq = decompose(&q, k, l).unwrap();
        let spq = decompose(&p.add(&q), k, l).unwrap();
        for (key, v) in &spq.entries {
            prop_assert_eq!(v, &(&sp.entries[key] + &sq.entries[key]));
            prop_assert_eq!(v, &closed_form_b(key.0, key.1, &p.add(&q)).unwrap());
        }
    }

    #[test]
    fn p1_is_odd_and_periodic(x in 0.05f64..0.95, y in -0.4f64..0.4, tr in -0.5f64..0.5, ti in 0.9f64..2.0) {
        let tau = Complex64::new(tr, ti);
        let z = Complex64::new(x, y);
        let v = elliptic_p1(z, tau, 80).unwrap();
        let m = elliptic_p1(-z, tau, 80).unwrap();
        let s = elliptic_p1(z + 1.0, tau, 80).unwrap();
        let scale = 1.0 + v.norm();
        prop_assert!((v + m).norm() < 1e-10 * scale);
        prop_assert!((v - s).norm() < 1e-10 * scale);
    }

    #[test]
    fn eisenstein_weight_under_s(k in 2usize..=5, tr in -0.5f64..0.5, ti in 0.9f64..2.5) {
        let r = modular_check_g(k, Complex64::new(tr, ti), 200).unwrap();
        prop_assert!(r.s_residual < 1e-10 * (1.0 + r.max), "{:?}", (r.s_residual, r.max));
        prop_assert!(r.t_residual < 1e-10 * (1.0 + r.max));
    }
}

#[test]
fn pairing_patterns_partition_the_points() {
    for n in 1..=5 {
        let pats = enumerate_patterns(n).unwrap();
        let want: usize = (1..=n).map(|j| 2 * j - 1).product();
        assert_eq!(pats.len(), want);
        for p in &pats {
            let mut o = p.order();
            assert!(p.pairs.iter().all(|(a, b)| a < b));
            o.sort_unstable();
            assert_eq!(o, (0..2 * n).collect::<Vec<_>>());
        }
        let mut dedup = pats.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), pats.len());
    }
}
