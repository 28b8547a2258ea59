//! Property tests over the public API.

use hodge_core::combinatorics::{character, dim, partitions, Partition};
use hodge_core::fock::{alpha, vector_report, verify_adjoint, EOperator, FockVector, WedgeOperator};
use hodge_core::gauss::{int, rat};
use hodge_core::genfun::gmv_rhs;
use hodge_core::report::CheckReport;
use hodge_core::series::{Series, SeriesJson};
use hodge_core::suites::random_vector;
use hodge_core::{GaussRat, Rational};
use num_traits::One;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn arb_series() -> impl Strategy<Value = Series> {
    (-3i64..2, proptest::collection::vec((-9i64..10, 1i64..6, -3i64..4), 0..6), 2i64..8).prop_map(
        |(val, cs, len)| {
            let terms = cs.into_iter().enumerate().map(|(k, (p, q, im))| (val + k as i64, GaussRat::new(rat(p, q), int(im))));
            Series::from_terms(terms, Some(val + len))
        },
    )
}

fn arb_a() -> impl Strategy<Value = Rational> {
    (-7i64..8, 1i64..5)
        .prop_map(|(p, q)| rat(p, q))
        .prop_filter("a must avoid 0 and -1", |a| *a != int(0) && *a != int(-1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn series_json_round_trip(s in arb_series()) {
        let text = serde_json::to_string(&s.to_json()).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Series::from_json(&back).unwrap(), s);
    }

    #[test]
    fn partitions_canonicalize(mut parts in proptest::collection::vec(1usize..6, 0..7)) {
        let p = Partition::from_multiset(parts.clone()).unwrap();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(p.parts(), &parts[..]);
        prop_assert_eq!(p.size(), parts.iter().sum::<usize>());
    }

    #[test]
    fn identity_class_character_is_dimension(n in 1usize..8, pick in 0usize..100) {
        let ps = partitions(n);
        let l = &ps[pick % ps.len()];
        prop_assert_eq!(character(l, &Partition::ones(n)).unwrap(), dim(l));
    }

    #[test]
    fn gmv_mirror_symmetry(a in arb_a(), pick in 0usize..100) {
        let all: Vec<Partition> = (1..=3).flat_map(partitions).collect();
        let mu = &all[pick % all.len()];
        let order = -((mu.size() + mu.length()) as i64) + 4;
        let mirror = -&a - Rational::one();
        let r = CheckReport::series(
            "mirror", mu.to_string(),
            &gmv_rhs(mu, &a, order).unwrap(), &gmv_rhs(mu, &mirror, order).unwrap(),
            None, Some(order),
        );
        prop_assert!(r.passed() && r.compared > 0, "{:?}", r.first_mismatch);
    }

    #[test]
    fn operators_are_linear(seed in any::<u64>(), r in -2i64..3, k in -3i64..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (v, w) = (random_vector(&mut rng, 3, 5), random_vector(&mut rng, 3, 5));
        let op = EOperator::new(r, GaussRat::real(rat(1, 2)), 4).unwrap();
        let c = Series::constant(GaussRat::from_int(k));
        let mut combo = v.clone();
        combo.add_scaled(&w, &c);
        let lhs = op.apply(&combo).unwrap();
        let mut rhs = op.apply(&v).unwrap();
        rhs.add_scaled(&op.apply(&w).unwrap(), &c);
        let rep = vector_report("linearity", "E_r", &lhs, &rhs, Some(4));
        prop_assert!(rep.passed(), "{:?}", rep.first_mismatch);
    }

    #[test]
    fn cutoff_accounting(seed in any::<u64>(), shift in 1i64..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let v = random_vector(&mut rng, 3, 3 + shift as usize);
        let out = alpha(-shift).unwrap().apply(&v).unwrap();
        prop_assert!(out.max_energy() <= 3 + shift as usize);
        prop_assert_eq!(out.inexact_from(), None);
        let tight = random_vector(&mut StdRng::seed_from_u64(seed), 3, 3);
        let lossy = alpha(-shift).unwrap().apply(&tight).unwrap();
        if !tight.is_empty() {
            prop_assert!(lossy.max_energy() <= 3);
            prop_assert!(lossy.inexact_from().is_some_and(|e| e <= 4));
        }
    }

    #[test]
    fn gamma_adjointness(seed in any::<u64>(), imaginary in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (v, x) = (random_vector(&mut rng, 3, 3), random_vector(&mut rng, 3, 3));
        let w = if imaginary { GaussRat::i() } else { GaussRat::one() };
        let r = verify_adjoint(&v, &x, &w, 3).unwrap();
        prop_assert!(r.passed(), "{:?}", r.first_mismatch);
    }
}

#[test]
fn vacuum_is_annihilated_by_lowering_modes() {
    for n in 1..4 {
        assert!(alpha(n).unwrap().apply(&FockVector::vacuum(4)).unwrap().is_empty());
    }
}
