//! Singular series 𝔖(H) = ∏_p (1 − 1/p)^{−k} (1 − ν_p(H)/p) with a certified
//! bound on the truncated Euler-product tail.
//!
//! Factors are multiplied in log space. For `p > diameter(H)` every factor
//! depends on `k` alone:
//!
//! ```text
//! log f_k(p) = log(1 − k/p) − k log(1 − 1/p) = −Σ_{m≥2} (k^m − k) / (m p^m) ≤ 0
//! ```
//!
//! so the truncated product is an upper bound. For `p > P ≥ 2k`,
//! `|log f_k(p)| ≤ c_k(P)/p²` with `c_k(P) = (k² − k)/2 + 2k³/(3P)`, and
//! grouping integers coprime to 30 in blocks of 30 gives
//! `Σ_{p>P} 1/p² ≤ 8/P² + 8/(30P)` for `P ≥ 5`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{residue_count, Tuple};
use crate::arith::for_each_prime;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Largest Euler-product cutoff the streaming sieve will run to.
pub const MAX_CUTOFF_PRIME: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularSeriesValue {
    pub value: f64,
    /// Certified absolute error of `value` from the omitted tail.
    pub truncation_bound: f64,
    /// Product taken over all primes `p <= cutoff_prime`.
    pub cutoff_prime: u64,
}

#[inline]
fn log_factor(k: u64, nu: u64, p: u64) -> f64 {
    let pf = p as f64;
    (-(nu as f64) / pf).ln_1p() - k as f64 * (-1.0 / pf).ln_1p()
}

fn tail_log_bound(k: u64, cutoff: u64) -> f64 {
    if k <= 1 {
        return 0.0;
    }
    let (kf, p) = (k as f64, cutoff as f64);
    let c = (kf * kf - kf) / 2.0 + 2.0 * kf.powi(3) / (3.0 * p);
    c * (8.0 / (p * p) + 8.0 / (30.0 * p))
}

/// Evaluates 𝔖 for many tuples of the same size `k` with a shared tail.
///
/// Tuples must have diameter at most `split`; primes `p <= split` are
/// handled per tuple and the product over `(split, cutoff]` is computed once.
#[derive(Debug, Clone)]
pub struct SingularSeriesEvaluator {
    k: u64,
    split: u64,
    small_primes: Vec<u64>,
    tail_log: f64,
    tail_bound_log: f64,
    cutoff: u64,
}

impl SingularSeriesEvaluator {
    /// `value_cap` is an upper bound on the values to be evaluated; the cutoff
    /// is chosen so that `value_cap * (1 − e^{−ε}) <= tol`.
    pub fn new(k: u64, split: u64, tol: f64, value_cap: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tol", "tolerance must be positive"));
        }
        let split = split.max(k * k).max(100);
        let mut small_primes = Vec::new();
        for_each_prime(2, split, |p| small_primes.push(p));

        let target = -(1.0 - tol / value_cap).max(f64::MIN_POSITIVE).ln();
        let mut cutoff = split;
        if k > 1 && tail_log_bound(k, cutoff) > target {
            // ε(P) is dominated by c_k·8/(30P); start there and double.
            let c = (k * k - k) as f64 / 2.0 + 1.0;
            cutoff = cutoff.max((c * 8.0 / (30.0 * target)) as u64);
            while tail_log_bound(k, cutoff) > target {
                cutoff = cutoff.saturating_mul(2);
                if cutoff > MAX_CUTOFF_PRIME {
                    break;
                }
            }
        }
        if cutoff > MAX_CUTOFF_PRIME {
            return Err(Error::Resource {
                what: "singular series cutoff prime",
                needed: cutoff,
                cap: MAX_CUTOFF_PRIME,
            });
        }

        let mut tail = CompensatedSum::new();
        if k > 1 && cutoff > split {
            for_each_prime(split + 1, cutoff, |p| tail.add(log_factor(k, k, p)));
        }
        Ok(SingularSeriesEvaluator {
            k,
            split,
            small_primes,
            tail_log: tail.value(),
            tail_bound_log: tail_log_bound(k, cutoff),
            cutoff,
        })
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn eval(&self, h: &Tuple) -> SingularSeriesValue {
        assert_eq!(h.k() as u64, self.k, "evaluator built for another tuple size");
        assert!(h.diameter() <= self.split, "tuple diameter beyond evaluator split");
        if self.k == 1 {
            return SingularSeriesValue { value: 1.0, truncation_bound: 0.0, cutoff_prime: self.cutoff };
        }
        let mut acc = CompensatedSum::new();
        for &p in &self.small_primes {
            let nu = residue_count(h, p);
            if nu == p {
                return SingularSeriesValue { value: 0.0, truncation_bound: 0.0, cutoff_prime: p };
            }
            acc.add(log_factor(self.k, nu, p));
        }
        acc.add(self.tail_log);
        let value = acc.value().exp();
        SingularSeriesValue {
            value,
            truncation_bound: value * -(-self.tail_bound_log).exp_m1(),
            cutoff_prime: self.cutoff,
        }
    }
}

/// 𝔖(H) with certified truncation error at most `tol`. Inadmissible tuples
/// give exactly 0.
pub fn singular_series(h: &Tuple, tol: f64) -> Result<SingularSeriesValue> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "tolerance must be positive"));
    }
    let k = h.k() as u64;
    if let Some(p) = super::first_blocking_prime(h) {
        return Ok(SingularSeriesValue { value: 0.0, truncation_bound: 0.0, cutoff_prime: p });
    }
    // Bound the value by the exact part of the product; tail factors are <= 1.
    let split = h.diameter().max(k * k).max(100);
    let mut head = CompensatedSum::new();
    for_each_prime(2, split, |p| head.add(log_factor(k, residue_count(h, p), p)));
    let cap = head.value().exp() * (1.0 + 1e-12);
    SingularSeriesEvaluator::new(k, split, tol, cap).map(|ev| ev.eval(h))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GallagherAverage {
    pub k: u64,
    pub h: u64,
    /// Σ over ordered k-tuples of distinct components in [1, h].
    pub ordered_sum: f64,
    /// Σ over k-element subsets of [1, h].
    pub set_sum: f64,
    /// ordered_sum / h^k.
    pub ordered_ratio: f64,
    /// set_sum / (h^k / k!); equal to `ordered_ratio` up to rounding.
    pub set_ratio: f64,
    /// Accumulated certified truncation error of `ordered_sum`.
    pub truncation_bound: f64,
    pub tuples: u64,
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Gallagher's average of the singular series over all k-tuples in `[1, h]`.
pub fn gallagher_average(k: u64, h: u64) -> Result<GallagherAverage> {
    gallagher_average_with(k, h, 1e-6, &Budget::from_env())
}

/// As [`gallagher_average`] with an explicit per-tuple tolerance and budget.
pub fn gallagher_average_with(k: u64, h: u64, tol: f64, budget: &Budget) -> Result<GallagherAverage> {
    if k < 1 {
        return Err(Error::invalid("k", "k must be at least 1"));
    }
    if h < k {
        return Err(Error::invalid("h", format!("need h >= k, got h={h}, k={k}")));
    }
    let count = binomial(h, k).ok_or(Error::Resource {
        what: "Gallagher tuple count",
        needed: u64::MAX,
        cap: budget.cost_steps,
    })?;
    budget.check_cost("Gallagher tuple count", count.saturating_mul(k * k))?;
    if count > 100_000_000 {
        return Err(Error::Resource { what: "Gallagher tuple count", needed: count, cap: 100_000_000 });
    }

    // Since ν_p >= 1, each factor is at most (1 − 1/p)^{1−k}, and tail
    // factors are at most 1.
    let split = h.max(k * k).max(100);
    let cap = {
        let mut acc = CompensatedSum::new();
        for_each_prime(2, split, |p| acc.add(-(k as f64 - 1.0) * (-1.0 / p as f64).ln_1p()));
        acc.value().exp()
    };
    let ev = SingularSeriesEvaluator::new(k, split, tol, cap)?;

    let firsts: Vec<u64> = (1..=h - k + 1).collect();
    let partials: Vec<(CompensatedSum, f64)> = firsts
        .into_par_iter()
        .map(|first| {
            let mut acc = CompensatedSum::new();
            let mut bound = 0.0;
            let mut stack = vec![first as i64];
            enumerate_sets(&mut stack, k as usize, h as i64, &mut |offs| {
                let t = Tuple { offsets: offs.to_vec() };
                let v = ev.eval(&t);
                acc.add(v.value);
                bound += v.truncation_bound;
            });
            (acc, bound)
        })
        .collect();
    let mut total = CompensatedSum::new();
    let mut bound = 0.0;
    for (p, b) in &partials {
        total.merge(p);
        bound += b;
    }
    let set_sum = total.value();
    let kfact: f64 = (1..=k).map(|i| i as f64).product();
    let hk = (h as f64).powi(k as i32);
    let ordered_sum = set_sum * kfact;
    Ok(GallagherAverage {
        k,
        h,
        ordered_sum,
        set_sum,
        ordered_ratio: ordered_sum / hk,
        set_ratio: set_sum / (hk / kfact),
        truncation_bound: bound * kfact,
        tuples: count,
    })
}

fn enumerate_sets(stack: &mut Vec<i64>, k: usize, h: i64, f: &mut dyn FnMut(&[i64])) {
    if stack.len() == k {
        f(stack);
        return;
    }
    let last = *stack.last().unwrap();
    let remaining = (k - stack.len()) as i64;
    for next in last + 1..=h - remaining + 1 {
        stack.push(next);
        enumerate_sets(stack, k, h, f);
        stack.pop();
    }
}
