//! Truncated divisor-sum weights evaluated over whole intervals.
//!
//! Every weight here has the form `Σ_{d ≤ R, d | Π(n)} c(d)` for a product
//! `Π(n)` of linear forms. Rather than factoring each `n`, the evaluator
//! loops over squarefree `d ≤ R`, finds the classes `n mod d` with
//! `d | Π(n)`, and adds `c(d)` along each progression. The cost is
//! `Σ_{d ≤ R} ρ(d)·(len/d + 1)` where `ρ(d)` counts the classes.
//!
//! Intervals are half-open, `(start, end]`.

mod export;
mod roots;

use serde::{Deserialize, Serialize};

use crate::arith::MobiusTable;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::par::{concat_chunks, CHUNK_LEN};
use crate::tuples::Tuple;

pub use export::{read_binary, write_binary, write_csv, BinaryDump, BINARY_MAGIC, BINARY_VERSION};
pub use roots::{prime_roots, root_classes, root_classes_forms, tuple_forms, LinearForm, RootSystem};
pub(crate) use roots::DivisorPlan;

/// Largest `k + ℓ` accepted for the tuple weights.
pub const MAX_WEIGHT_EXPONENT: u32 = 150;
/// Largest moment order for the short-interval moment weights.
pub const MAX_MOMENT_ORDER: u32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// Λ_R(n) = Σ_{d | n, d ≤ R} μ(d) log(R/d).
    LambdaR,
    /// λ_R(n) = Σ_{r ≤ R} μ²(r)/φ(r) Σ_{d | (r, n)} d μ(d).
    LambdaLowerR,
    /// Λ_R(n; H, ℓ) = (1/(k+ℓ)!) Σ_{d | P_H(n), d ≤ R} μ(d) (log(R/d))^{k+ℓ}.
    Gpy { tuple: Tuple, ell: u32 },
    /// Σ_{d | P_H(n), d ≤ R} μ(d) (log(R/d)/log R)^{k+1}.
    Selberg { tuple: Tuple },
    /// ψ_R^{(k)}(n, h), the k-th moment weight of Λ_R over (n, n + h].
    Moment { k: u32, h: u64 },
}

impl WeightKind {
    pub fn tag(&self) -> u32 {
        match self {
            WeightKind::LambdaR => 1,
            WeightKind::LambdaLowerR => 2,
            WeightKind::Gpy { .. } => 3,
            WeightKind::Selberg { .. } => 4,
            WeightKind::Moment { .. } => 5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightKind::LambdaR => "lambda_R",
            WeightKind::LambdaLowerR => "lambda_lower_R",
            WeightKind::Gpy { .. } => "gpy",
            WeightKind::Selberg { .. } => "selberg",
            WeightKind::Moment { .. } => "moment",
        }
    }
}

/// Weight values for every `n` in `(start, end]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    pub start: u64,
    pub end: u64,
    pub r: f64,
    pub kind: WeightKind,
    /// Values forced to 0 where a prime `p <= w` divides `P_H(n)`.
    pub restriction: Option<u64>,
    pub values: Vec<f64>,
}

impl WeightTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Weight at `n`, for `start < n <= end`.
    pub fn get(&self, n: u64) -> f64 {
        assert!(n > self.start && n <= self.end, "{n} outside ({}, {}]", self.start, self.end);
        self.values[(n - self.start - 1) as usize]
    }

    /// `(n, value)` pairs in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.start + 1 + i as u64, v))
    }
}

fn check_interval(start: u64, end: u64) -> Result<()> {
    if end <= start {
        return Err(Error::invalid("end", format!("empty interval ({start}, {end}]")));
    }
    Ok(())
}

fn check_r(r: f64) -> Result<u64> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::invalid("R", format!("truncation level must be >= 1, got {r}")));
    }
    Ok(r.floor() as u64)
}

fn ln_factorial(m: u32) -> f64 {
    (1..=m).map(|i| (i as f64).ln()).sum()
}

/// Σ_{d ≤ R, d | Π(n)} μ(d) (log(R/d)/log R)^m for `n` in `(start, end]`.
///
/// Terms are normalized by `log R` so magnitudes stay near 1 for large `m`;
/// callers rescale. Requires `R > 1`.
fn normalized_log_power_sum(
    forms: &[LinearForm],
    m: u32,
    r: f64,
    start: u64,
    end: u64,
    budget: &Budget,
) -> Result<Vec<f64>> {
    let d_max = check_r(r)?;
    let log_r = r.ln();
    let plan = DivisorPlan::build(d_max, forms, budget, |d, mu| {
        mu as f64 * ((log_r - (d as f64).ln()) / log_r).powi(m as i32)
    })?;
    let len = end - start;
    budget.check_cost("divisor scatter", plan.cost(CHUNK_LEN).saturating_mul(len.div_ceil(CHUNK_LEN)))?;
    budget.check_mem("weight table", len * 8)?;
    Ok(concat_chunks(start, end, CHUNK_LEN, |lo, hi| plan.scatter(lo, hi)))
}

/// Λ_R(n) over `(start, end]`. For `1 < n <= R` the value equals Λ(n).
pub fn lambda_r_interval(start: u64, end: u64, r: f64) -> Result<WeightTable> {
    lambda_r_interval_with(start, end, r, &Budget::from_env())
}

pub fn lambda_r_interval_with(start: u64, end: u64, r: f64, budget: &Budget) -> Result<WeightTable> {
    check_interval(start, end)?;
    check_r(r)?;
    let values = if r > 1.0 {
        let forms = [LinearForm { a: 1, b: 0 }];
        let log_r = r.ln();
        let mut v = normalized_log_power_sum(&forms, 1, r, start, end, budget)?;
        v.iter_mut().for_each(|x| *x *= log_r);
        v
    } else {
        vec![0.0; (end - start) as usize]
    };
    Ok(WeightTable { start, end, r, kind: WeightKind::LambdaR, restriction: None, values })
}

/// λ_R(n) over `(start, end]`.
///
/// Swapping the sums gives `λ_R(n) = Σ_{d | n, d ≤ R} d μ(d) S_d` with
/// `S_d = Σ_{r ≤ R, d | r} μ²(r)/φ(r)`.
pub fn lambda_lower_r_interval(start: u64, end: u64, r: f64) -> Result<WeightTable> {
    lambda_lower_r_interval_with(start, end, r, &Budget::from_env())
}

pub fn lambda_lower_r_interval_with(start: u64, end: u64, r: f64, budget: &Budget) -> Result<WeightTable> {
    check_interval(start, end)?;
    let d_max = check_r(r)?;
    let mob = MobiusTable::sieve_with_budget(d_max, budget)?;
    let mut s = vec![0.0f64; d_max as usize + 1];
    for d in 1..=d_max {
        if mob.mu(d) == 0 {
            continue;
        }
        let mut acc = 0.0;
        let mut q = d;
        while q <= d_max {
            if mob.mu(q) != 0 {
                acc += 1.0 / mob.phi(q) as f64;
            }
            q += d;
        }
        s[d as usize] = acc;
    }
    let forms = [LinearForm { a: 1, b: 0 }];
    let plan = DivisorPlan::build(d_max, &forms, budget, |d, mu| d as f64 * mu as f64 * s[d as usize])?;
    budget.check_mem("weight table", (end - start) * 8)?;
    let values = concat_chunks(start, end, CHUNK_LEN, |lo, hi| plan.scatter(lo, hi));
    Ok(WeightTable { start, end, r, kind: WeightKind::LambdaLowerR, restriction: None, values })
}

fn check_tuple_exponent(h: &Tuple, ell: u32) -> Result<u32> {
    let k = h.k() as u32;
    if ell > k {
        return Err(Error::invalid("ell", format!("need 0 <= ell <= k = {k}, got {ell}")));
    }
    if k + ell > MAX_WEIGHT_EXPONENT {
        return Err(Error::invalid("ell", format!("k + ell = {} exceeds {MAX_WEIGHT_EXPONENT}", k + ell)));
    }
    Ok(k + ell)
}

/// Zeroes every `n` for which some prime `p <= w` divides `P_H(n)`.
fn apply_restriction(values: &mut [f64], start: u64, h: &Tuple, w: u64) {
    let forms = tuple_forms(h);
    let end = start + values.len() as u64;
    crate::arith::for_each_prime(2, w, |p| {
        for r in prime_roots(&forms, p) {
            let first = start + 1;
            let mut n = first + (r + p - first % p) % p;
            while n <= end {
                values[(n - first) as usize] = 0.0;
                n += p;
            }
        }
    });
}

/// Λ_R(n; H, ℓ) over `(start, end]`, optionally restricted to `n` with
/// `P_H(n)` free of primes `p <= w`.
pub fn gpy_weight_interval(
    h: &Tuple,
    ell: u32,
    start: u64,
    end: u64,
    r: f64,
    restriction: Option<u64>,
) -> Result<WeightTable> {
    gpy_weight_interval_with(h, ell, start, end, r, restriction, &Budget::from_env())
}

pub fn gpy_weight_interval_with(
    h: &Tuple,
    ell: u32,
    start: u64,
    end: u64,
    r: f64,
    restriction: Option<u64>,
    budget: &Budget,
) -> Result<WeightTable> {
    check_interval(start, end)?;
    check_r(r)?;
    let m = check_tuple_exponent(h, ell)?;
    let mut values = if r > 1.0 {
        let scale = (m as f64 * r.ln().ln() - ln_factorial(m)).exp();
        let mut v = normalized_log_power_sum(&tuple_forms(h), m, r, start, end, budget)?;
        v.iter_mut().for_each(|x| *x *= scale);
        v
    } else {
        vec![0.0; (end - start) as usize]
    };
    if let Some(w) = restriction {
        apply_restriction(&mut values, start, h, w);
    }
    Ok(WeightTable { start, end, r, kind: WeightKind::Gpy { tuple: h.clone(), ell }, restriction, values })
}

/// Selberg sieve weight Σ_{d | P_H(n)} λ_d with λ_d = μ(d) (log(R/d)/log R)^{k+1}
/// for `d <= R` and 0 beyond.
pub fn selberg_weight_interval(h: &Tuple, start: u64, end: u64, r: f64) -> Result<WeightTable> {
    selberg_weight_interval_with(h, start, end, r, &Budget::from_env())
}

pub fn selberg_weight_interval_with(h: &Tuple, start: u64, end: u64, r: f64, budget: &Budget) -> Result<WeightTable> {
    check_interval(start, end)?;
    if !(r >= 2.0) {
        return Err(Error::invalid("R", format!("Selberg weights need R >= 2, got {r}")));
    }
    let m = check_tuple_exponent(h, 1)?;
    let values = normalized_log_power_sum(&tuple_forms(h), m, r, start, end, budget)?;
    Ok(WeightTable { start, end, r, kind: WeightKind::Selberg { tuple: h.clone() }, restriction: None, values })
}

/// Selberg weights for arbitrary linear forms `a_i n + b_i`.
pub(crate) fn selberg_forms_values(
    forms: &[LinearForm],
    start: u64,
    end: u64,
    r: f64,
    budget: &Budget,
) -> Result<Vec<f64>> {
    normalized_log_power_sum(forms, forms.len() as u32 + 1, r, start, end, budget)
}

/// Σ over vectors `(h_1, …, h_k) ∈ [1, h]^k` of `(log R)^{k − |set|}` times
/// the product of Λ_R(n + h') over the distinct components `h'`.
///
/// Grouping vectors by their set of distinct components reduces this to
/// power sums `S_j = Σ_{1 ≤ i ≤ h} Λ_R(n + i)^j`:
///
/// ```text
/// k = 1: S1
/// k = 2: L·S1 + S1² − S2
/// k = 3: L²·S1 + 3L·(S1² − S2) + S1³ − 3·S1·S2 + 2·S3
/// ```
pub fn moment_weight_interval(k: u32, h: u64, start: u64, end: u64, r: f64) -> Result<WeightTable> {
    check_interval(start, end)?;
    if k > MAX_MOMENT_ORDER {
        return Err(Error::invalid("k", format!("moment order {k} exceeds {MAX_MOMENT_ORDER}")));
    }
    if h < 1 {
        return Err(Error::invalid("h", "window length must be >= 1"));
    }
    let lam = lambda_r_interval(start, end + h, r)?;
    let values = moment_values(k, h, &lam.values, r.ln(), (end - start) as usize);
    Ok(WeightTable { start, end, r, kind: WeightKind::Moment { k, h }, restriction: None, values })
}

/// Moment weights from a Λ_R table whose index 0 is the first `n` itself.
pub(crate) fn moment_values(k: u32, h: u64, lam: &[f64], log_r: f64, count: usize) -> Vec<f64> {
    let h = h as usize;
    (0..count)
        .map(|i| {
            let (mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0);
            for &x in &lam[i + 1..=i + h] {
                s1 += x;
                s2 += x * x;
                s3 += x * x * x;
            }
            match k {
                0 => 1.0,
                1 => s1,
                2 => log_r * s1 + (s1 * s1 - s2),
                _ => log_r * log_r * s1 + 3.0 * log_r * (s1 * s1 - s2) + s1 * s1 * s1 - 3.0 * s1 * s2 + 2.0 * s3,
            }
        })
        .collect()
}
