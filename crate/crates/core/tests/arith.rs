mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use tuplesieve::arith::{
    chebyshev_psi, chebyshev_theta, factorize, for_each_prime, generalized_von_mangoldt, prime_flags,
    theta_interval, von_mangoldt, von_mangoldt_interval, MobiusTable, PrimeTable,
};

#[test]
fn tables_match_trial_division_to_1e5() {
    let n = 100_000u64;
    let primes = PrimeTable::sieve(n).unwrap();
    let mob = MobiusTable::sieve(n).unwrap();
    let oracle = common::primes_upto(n);
    assert_eq!(primes.primes(), &oracle[..]);
    let mut is_p = vec![false; n as usize + 1];
    for &p in &oracle {
        is_p[p as usize] = true;
    }
    for k in 1..=n {
        assert_eq!(primes.is_prime(k), is_p[k as usize], "k={k}");
        assert_eq!(mob.mu(k) as i64, common::mu(k), "mu({k})");
    }
    // φ by counting is quadratic; spot-check a prefix and a spread.
    for k in (1..=2000).chain((2000..=n).step_by(997)) {
        assert_eq!(mob.phi(k), common::phi(k), "phi({k})");
    }
}

#[test]
fn trial_division_primality_matches_sieve_past_a_segment() {
    let lo = (1u64 << 20) - 5000;
    let hi = (1u64 << 20) + 5000;
    let flags = prime_flags(lo, hi);
    for (i, f) in flags.iter().enumerate() {
        let m = lo + 1 + i as u64;
        assert_eq!(*f, common::is_prime(m), "m={m}");
        assert_eq!(*f, tuplesieve::arith::is_prime(m));
    }
    let mut streamed = Vec::new();
    for_each_prime(lo + 1, hi, |p| streamed.push(p));
    assert_eq!(streamed.len(), flags.iter().filter(|&&f| f).count());
}

#[test]
fn interval_tables_match_pointwise() {
    let (lo, hi) = (999_000u64, 1_001_000u64);
    let th = theta_interval(lo, hi);
    let lam = von_mangoldt_interval(lo, hi);
    for i in 0..(hi - lo) as usize {
        let m = lo + 1 + i as u64;
        assert_eq!(lam[i], common::von_mangoldt(m), "m={m}");
        let t = if common::is_prime(m) { (m as f64).ln() } else { 0.0 };
        assert_eq!(th[i], t);
    }
    // 2^20 = 1048576 is a prime power; check it sits in the interval table.
    let v = von_mangoldt_interval(1 << 20, (1 << 20) + 1);
    assert_eq!(v[0], 0.0);
    let v = von_mangoldt_interval((1 << 20) - 1, 1 << 20);
    assert_eq!(v[0], 2f64.ln());
}

#[test]
fn chebyshev_sanity() {
    let mut prev = 0.0;
    for x in (0..200).map(|i| 500.0 * i as f64) {
        let p = chebyshev_psi(x);
        assert!(p >= prev);
        prev = p;
    }
    for x in [1e5, 3e5, 1e6] {
        let r = chebyshev_psi(x) / x;
        assert!((0.9..=1.1).contains(&r), "psi({x})/x = {r}");
        assert!(chebyshev_theta(x) <= chebyshev_psi(x));
    }
    let direct: f64 = (1..=10_000u64).map(common::von_mangoldt).sum();
    assert!((chebyshev_psi(10_000.0) - direct).abs() < 1e-8);
}

/// Σ_{d | n} μ(d) log^k(n/d) by direct divisor enumeration.
fn lambda_k_oracle(n: u64, k: u32) -> f64 {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| common::mu(d) as f64 * ((n / d) as f64).ln().powi(k as i32))
        .sum()
}

#[test]
fn generalized_von_mangoldt_matches_divisor_sum() {
    for n in 2..=3000u64 {
        assert!((generalized_von_mangoldt(n, 1, None) - von_mangoldt(n)).abs() < 1e-12, "n={n}");
        for k in 1..=3 {
            let a = generalized_von_mangoldt(n, k, None);
            let b = lambda_k_oracle(n, k);
            assert!((a - b).abs() < 1e-9 * (n as f64).ln().powi(k as i32), "n={n} k={k}: {a} vs {b}");
        }
    }
}

fn mobius_table() -> &'static MobiusTable {
    static T: OnceLock<MobiusTable> = OnceLock::new();
    T.get_or_init(|| MobiusTable::sieve(9_000_000).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn generalized_lambda_vanishes_beyond_k_primes(n in 2u64..10_000, k in 1u32..=4) {
        let omega = factorize(n).len() as u32;
        // Truncating at x = n keeps every divisor, so this is the full sum
        // evaluated term by term without any shortcut.
        let full = generalized_von_mangoldt(n, k, Some(n as f64));
        let exact = generalized_von_mangoldt(n, k, None);
        let scale = (n as f64).ln().powi(k as i32);
        prop_assert!((full - exact).abs() <= 1e-9 * scale);
        if omega > k {
            prop_assert!(full.abs() <= 1e-9 * scale, "n={} k={} value {}", n, k, full);
            prop_assert_eq!(exact, 0.0);
        } else {
            prop_assert!(full > 0.0);
        }
    }

    #[test]
    fn mobius_is_multiplicative(a in 1u64..3000, b in 1u64..3000) {
        let t = mobius_table();
        if common::gcd(a, b) == 1 {
            prop_assert_eq!(t.mu(a * b), t.mu(a) * t.mu(b));
            prop_assert_eq!(t.phi(a * b), t.phi(a) * t.phi(b));
        }
    }

    #[test]
    fn factorization_round_trips(n in 1u64..u64::MAX / 4) {
        let f = factorize(n % 10_000_000_000 + 1);
        let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(back, n % 10_000_000_000 + 1);
        prop_assert!(f.iter().all(|&(p, _)| common::is_prime(p)));
    }
}
