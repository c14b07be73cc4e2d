mod common;

use proptest::prelude::*;
use tuplesieve::budget::Budget;
use tuplesieve::tuples::{
    gallagher_average, gallagher_average_with, narrowest_admissible, residue_count, singular_series, Tuple,
};
use tuplesieve::Error;

fn t(v: &[i64]) -> Tuple {
    Tuple::new(v.to_vec()).unwrap()
}

#[test]
fn narrowest_matches_exhaustive_oracle() {
    for k in 2..=7 {
        let r = narrowest_admissible(k, 1000).unwrap();
        assert_eq!(r.diameter, common::narrowest_oracle(k), "k={k}");
        assert!(common::admissible_oracle(r.tuple.offsets()));
        assert_eq!(r.tuple.offsets()[0], 0);
        assert_eq!(r.exhausted_below, r.diameter);
    }
    let six = narrowest_admissible(6, 1000).unwrap();
    assert_eq!(six.tuple.offsets(), &[0, 4, 6, 10, 12, 16]);
    assert!(matches!(narrowest_admissible(6, 15), Err(Error::NotFound(_))));
}

#[test]
fn twin_constant_against_euler_product_oracle() {
    let v = singular_series(&t(&[0, 2]), 5e-9).unwrap();
    let (log, tail) = common::twin_constant_log(10_000_000);
    let hi = log.exp();
    let lo = (log - tail).exp();
    assert!(v.value <= hi + 1e-12 && v.value + v.truncation_bound >= lo - 1e-12);
    assert!((v.value - hi).abs() < 1e-7);
    // 2·C₂, the twin prime constant doubled.
    assert!((v.value - 1.320_323_631_693_739).abs() <= v.truncation_bound + 1e-12);
}

#[test]
fn trivial_singular_series_values() {
    assert_eq!(singular_series(&t(&[0]), 1e-9).unwrap().value, 1.0);
    assert_eq!(singular_series(&t(&[0, 1]), 1e-9).unwrap().value, 0.0);
    assert_eq!(singular_series(&t(&[0, 2, 4]), 1e-9).unwrap().value, 0.0);
    assert_eq!(singular_series(&t(&[0, 3]), 1e-9).unwrap().value, 0.0);
}

#[test]
fn general_tuples_against_partial_product() {
    for h in [vec![0i64, 2, 6], vec![0, 4, 6, 10, 12, 16], vec![0, 6], vec![0, 30], vec![-4, 0, 2]] {
        let v = singular_series(&t(&h), 1e-6).unwrap();
        let limit = 1_000_000u64;
        let partial = common::singular_series_partial(&h, limit);
        // Tail of the oracle: Σ_{p > P} k²/p² ≤ k²/P.
        let k = h.len() as f64;
        let slack = partial * (k * k / limit as f64) + v.truncation_bound + 1e-12;
        assert!(v.value <= partial + 1e-12, "{h:?}: {} > {partial}", v.value);
        assert!(partial - v.value <= slack, "{h:?}: {} vs {partial}", v.value);
    }
}

#[test]
fn gallagher_matches_direct_loops() {
    let budget = Budget::default();
    let tol = 1e-6;
    for h in [5u64, 12, 30] {
        let g = gallagher_average_with(2, h, tol, &budget).unwrap();
        let mut direct = 0.0;
        let mut bound = 0.0;
        for i in 1..=h as i64 {
            for j in 1..=h as i64 {
                if i != j {
                    let v = singular_series(&t(&[i, j]), tol).unwrap();
                    direct += v.value;
                    bound += v.truncation_bound;
                }
            }
        }
        assert!((g.ordered_sum - direct).abs() <= bound + g.truncation_bound + 1e-9 * direct, "h={h}");
        assert!((g.set_sum * 2.0 - g.ordered_sum).abs() <= 1e-12 * g.ordered_sum);
    }
    let h = 10u64;
    let g = gallagher_average_with(3, h, tol, &budget).unwrap();
    let (mut direct, mut bound) = (0.0, 0.0);
    for i in 1..=h as i64 {
        for j in i + 1..=h as i64 {
            for l in j + 1..=h as i64 {
                let v = singular_series(&t(&[i, j, l]), tol).unwrap();
                direct += v.value;
                bound += v.truncation_bound;
            }
        }
    }
    assert!((g.set_sum - direct).abs() <= g.truncation_bound + bound + 1e-12 * direct);
    for h in [1u64, 7, 100] {
        let g = gallagher_average(1, h).unwrap();
        assert_eq!(g.ordered_sum, h as f64);
        assert_eq!(g.ordered_ratio, 1.0);
    }
}

fn tuple_strategy() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::btree_set(-60i64..60, 1..6).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_invariance(h in tuple_strategy(), c in -1000i64..1000) {
        let a = t(&h);
        let b = a.shifted(c);
        prop_assert_eq!(a.is_admissible(), b.is_admissible());
        prop_assert_eq!(a.is_admissible(), common::admissible_oracle(&h));
        let sa = singular_series(&a, 1e-6).unwrap();
        let sb = singular_series(&b, 1e-6).unwrap();
        prop_assert!((sa.value - sb.value).abs() <= sa.truncation_bound + sb.truncation_bound + 1e-12);
        prop_assert_eq!(sa.value > 0.0, a.is_admissible());
    }

    #[test]
    fn residue_count_saturates_past_diameter(h in tuple_strategy(), extra in 1u64..500) {
        let a = t(&h);
        let p = common::primes_upto(a.diameter() + extra + 200)
            .into_iter()
            .find(|&p| p > a.diameter() + extra)
            .unwrap();
        prop_assert_eq!(residue_count(&a, p), h.len() as u64);
        for q in [2u64, 3, 5, 7] {
            let mut r: Vec<i64> = h.iter().map(|x| x.rem_euclid(q as i64)).collect();
            r.sort();
            r.dedup();
            prop_assert_eq!(residue_count(&a, q), r.len() as u64);
        }
    }

    #[test]
    fn tuple_text_and_json_round_trip(h in tuple_strategy()) {
        let a = t(&h);
        let back: Tuple = a.to_string().parse().unwrap();
        prop_assert_eq!(&back, &a);
        let json = serde_json::to_string(&a).unwrap();
        let back: Tuple = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn tuple_rejects_bad_input() {
    assert!(Tuple::new(vec![]).is_err());
    assert!(Tuple::new(vec![1, 1]).is_err());
    assert!("0,x".parse::<Tuple>().is_err());
    assert!(serde_json::from_str::<Tuple>("[2,2]").is_err());
}
