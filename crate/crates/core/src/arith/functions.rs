//! Pointwise arithmetic functions and interval tables of θ and Λ.

use super::sieve::{for_each_prime, isqrt, prime_flags, small_odd_primes};
use crate::sum::CompensatedSum;

/// Prime factorization by trial division, `(p, e)` in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        for p in [d, d + 2] {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
        }
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Primality by trial division, for verifying individual results.
pub fn is_prime(n: u64) -> bool {
    matches!(factorize(n).as_slice(), [(_, 1)])
}

/// Number of divisors τ(n) by trial division.
pub fn divisor_count(n: u64) -> u64 {
    assert!(n >= 1);
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Λ(n): `log p` when `n = p^m`, otherwise 0.
pub fn von_mangoldt(n: u64) -> f64 {
    match factorize(n).as_slice() {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    }
}

/// θ(n): `log n` when `n` is prime, otherwise 0.
pub fn theta(n: u64) -> f64 {
    if is_prime(n) {
        (n as f64).ln()
    } else {
        0.0
    }
}

/// Σ_{d | n} μ(d) (log(n/d))^k, the generalized von Mangoldt function.
///
/// With `x_cut = Some(x)` the sum is truncated to `d <= x` and the logarithm
/// becomes `log(x/d)`, the single-number kernel of the truncated tuple sums.
/// The exact form vanishes whenever `n` has more than `k` distinct prime
/// factors; the truncated form does not.
pub fn generalized_von_mangoldt(n: u64, k: u32, x_cut: Option<f64>) -> f64 {
    assert!(n >= 1 && k >= 1);
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    if x_cut.is_none() && primes.len() > k as usize {
        return 0.0;
    }
    let top = match x_cut {
        Some(x) => x.ln(),
        None => (n as f64).ln(),
    };
    let mut acc = CompensatedSum::new();
    for mask in 0u32..(1 << primes.len()) {
        let mut d = 1u64;
        let mut over = false;
        for (i, &p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d = d.saturating_mul(p);
                if x_cut.is_some_and(|x| d as f64 > x) {
                    over = true;
                    break;
                }
            }
        }
        if over {
            continue;
        }
        let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sign * (top - (d as f64).ln()).powi(k as i32));
    }
    acc.value()
}

/// ψ(x) = Σ_{n ≤ x} Λ(n).
pub fn chebyshev_psi(x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    let limit = x.floor() as u64;
    let mut acc = CompensatedSum::new();
    for_each_prime(2, limit, |p| {
        let lp = (p as f64).ln();
        let mut q = p;
        loop {
            acc.add(lp);
            match q.checked_mul(p) {
                Some(next) if next <= limit => q = next,
                _ => break,
            }
        }
    });
    acc.value()
}

/// Σ_{p ≤ x} log p.
pub fn chebyshev_theta(x: f64) -> f64 {
    if x < 2.0 {
        return 0.0;
    }
    let mut acc = CompensatedSum::new();
    for_each_prime(2, x.floor() as u64, |p| acc.add((p as f64).ln()));
    acc.value()
}

/// θ(n) for `n` in `(start, end]`; index `i` holds `start + 1 + i`.
pub fn theta_interval(start: u64, end: u64) -> Vec<f64> {
    prime_flags(start, end)
        .into_iter()
        .enumerate()
        .map(|(i, p)| if p { ((start + 1 + i as u64) as f64).ln() } else { 0.0 })
        .collect()
}

/// Λ(n) for `n` in `(start, end]`; index `i` holds `start + 1 + i`.
pub fn von_mangoldt_interval(start: u64, end: u64) -> Vec<f64> {
    let mut v = theta_interval(start, end);
    // Proper prime powers p^m, m >= 2, all have p <= sqrt(end).
    let root = isqrt(end);
    let mut base = vec![2u64];
    base.extend(small_odd_primes(root));
    for p in base {
        let lp = (p as f64).ln();
        let mut q = p * p;
        while q <= end {
            if q > start {
                v[(q - start - 1) as usize] = lp;
            }
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn von_mangoldt_examples() {
        assert_eq!(von_mangoldt(8), LN_2);
        assert_eq!(von_mangoldt(12), 0.0);
        assert_eq!(von_mangoldt(97), 97f64.ln());
        assert_eq!(von_mangoldt(1), 0.0);
    }

    #[test]
    fn generalized_examples() {
        assert_eq!(generalized_von_mangoldt(1, 3, None), 0.0);
        assert_eq!(generalized_von_mangoldt(6, 1, None), 0.0);
        // Four divisors: (ln 6)^2 - (ln 3)^2 - (ln 2)^2 + 0.
        let direct = 6f64.ln().powi(2) - 3f64.ln().powi(2) - 2f64.ln().powi(2);
        assert!((generalized_von_mangoldt(6, 2, None) - direct).abs() < 1e-14);
        assert!((direct - 2.0 * LN_2 * 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn generalized_k1_matches_von_mangoldt() {
        for n in 2..5000u64 {
            assert!((generalized_von_mangoldt(n, 1, None) - von_mangoldt(n)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn truncated_kernel_is_exact_identity_above_n() {
        // Σ_{d|n, d<=x} μ(d) log(x/d) = Λ(n) once x >= n > 1.
        for n in 2..500u64 {
            let v = generalized_von_mangoldt(n, 1, Some(1000.0));
            assert!((v - von_mangoldt(n)).abs() < 1e-11, "n={n}");
        }
    }

    #[test]
    fn psi_small() {
        assert_eq!(chebyshev_psi(1.0), 0.0);
        let expect = 2f64.ln() * 3.0 + 3f64.ln() * 2.0 + 5f64.ln() + 7f64.ln();
        assert!((chebyshev_psi(10.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn interval_tables() {
        let lam = von_mangoldt_interval(0, 200);
        let th = theta_interval(0, 200);
        for n in 1..=200u64 {
            assert_eq!(lam[n as usize - 1], von_mangoldt(n), "n={n}");
            assert_eq!(th[n as usize - 1], theta(n), "n={n}");
        }
        let lam = von_mangoldt_interval(1000, 1100);
        assert_eq!(lam[(1024 - 1001) as usize], LN_2);
        assert_eq!(lam[(1089 - 1001) as usize], 0.0); // 33^2
        assert_eq!(lam[(1009 - 1001) as usize], 1009f64.ln());
    }

    #[test]
    fn divisor_counts() {
        assert_eq!(divisor_count(1), 1);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(divisor_count(97), 2);
    }
}
