//! Primes in arithmetic progressions: Θ(N; q, a) and the summed worst-case
//! progression error used to probe the level of distribution.
//!
//! Class sums are accumulated in [`FixedSum`], so splitting θ(N) into
//! residue classes is exact: the class totals add back to the same bits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{for_each_prime, MobiusTable};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::sum::{csum, FixedSum};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primes up to `n` with log p rounded once to the fixed-point grid.
struct PrimeLogs {
    primes: Vec<u64>,
    logs: Vec<FixedSum>,
}

impl PrimeLogs {
    fn new(n: u64, budget: &Budget) -> Result<Self> {
        // π(n) < 1.26 n / ln n for n > 1.
        let est = if n < 17 { 8 } else { (1.26 * n as f64 / (n as f64).ln()) as u64 };
        budget.check_mem("prime list with logs", est * 24)?;
        let mut primes = Vec::with_capacity(est as usize);
        for_each_prime(2, n, |p| primes.push(p));
        let logs = primes.iter().map(|&p| FixedSum::from_f64((p as f64).ln())).collect();
        Ok(PrimeLogs { primes, logs })
    }

    fn classes(&self, q: u64) -> Vec<FixedSum> {
        let mut acc = vec![FixedSum::ZERO; q as usize];
        for (&p, &l) in self.primes.iter().zip(&self.logs) {
            acc[(p % q) as usize] += l;
        }
        acc
    }
}

/// Θ(N; q, a) for every class `a` in `0..q`, exactly.
pub fn theta_classes(n: u64, q: u64) -> Result<Vec<FixedSum>> {
    if q < 1 {
        return Err(Error::invalid("q", "need q >= 1"));
    }
    let budget = Budget::from_env();
    budget.check_mem("residue classes", q.saturating_mul(16))?;
    Ok(PrimeLogs::new(n, &budget)?.classes(q))
}

/// Θ(N; q, a) = Σ_{p ≤ N, p ≡ a (mod q)} log p, exact on the fixed-point grid.
pub fn theta_progression_exact(n: u64, q: u64, a: u64) -> Result<FixedSum> {
    if q < 1 {
        return Err(Error::invalid("q", "need q >= 1"));
    }
    if a >= q {
        return Err(Error::invalid("a", format!("need 0 <= a < q, got a={a}, q={q}")));
    }
    let mut acc = FixedSum::ZERO;
    for_each_prime(2, n, |p| {
        if p % q == a {
            acc.add_f64((p as f64).ln());
        }
    });
    Ok(acc)
}

pub fn theta_progression(n: u64, q: u64, a: u64) -> Result<f64> {
    Ok(theta_progression_exact(n, q, a)?.to_f64())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelProbeReport {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "Q")]
    pub q_max: u64,
    #[serde(rename = "A")]
    pub a_exponent: f64,
    /// E(N; q) for q = 1..=Q.
    pub per_q: Vec<f64>,
    pub total: f64,
    /// total · (log N)^A / N
    pub normalized: f64,
    /// Set by [`level_probe`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

/// Σ_{q ≤ Q} max_{(a, q) = 1} |Θ(N; q, a) − N/φ(q)|.
pub fn bv_sum(n: u64, q_max: u64, a_exponent: f64) -> Result<LevelProbeReport> {
    bv_sum_with(n, q_max, a_exponent, &Budget::from_env())
}

pub fn bv_sum_with(n: u64, q_max: u64, a_exponent: f64, budget: &Budget) -> Result<LevelProbeReport> {
    if n < 2 {
        return Err(Error::invalid("N", "need N >= 2"));
    }
    if q_max < 1 || q_max > n {
        return Err(Error::invalid("Q", format!("need 1 <= Q <= N, got Q={q_max}")));
    }
    if !a_exponent.is_finite() {
        return Err(Error::invalid("A", "must be finite"));
    }
    let threads = rayon::current_num_threads().max(1) as u64;
    budget.check_mem("residue classes", q_max.saturating_mul(16).saturating_mul(threads))?;
    let logs = PrimeLogs::new(n, budget)?;
    budget.check_cost("progression binning", (logs.primes.len() as u64).saturating_mul(q_max))?;
    let phi = MobiusTable::sieve_with_budget(q_max, budget)?;
    let nf = n as f64;
    let per_q: Vec<f64> = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let expected = nf / phi.phi(q) as f64;
            logs.classes(q)
                .iter()
                .enumerate()
                .filter(|&(a, _)| gcd(a as u64, q) == 1)
                .map(|(_, t)| (t.to_f64() - expected).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let total = csum(per_q.iter().copied());
    let normalized = total * nf.ln().powf(a_exponent) / nf;
    Ok(LevelProbeReport { n, q_max, a_exponent, per_q, total, normalized, alpha: None })
}

/// Q = floor(N^α), with a relative nudge of 1e-12 so exact powers are not
/// rounded down.
pub fn level_for(n: u64, alpha: f64) -> u64 {
    ((n as f64).powf(alpha) * (1.0 + 1e-12)).floor().max(1.0) as u64
}

/// `bv_sum` at Q = floor(N^α) for each α.
pub fn level_probe(n: u64, alphas: &[f64], a_exponent: f64) -> Result<Vec<LevelProbeReport>> {
    alphas
        .iter()
        .map(|&alpha| {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::invalid("alpha", format!("need 0 < alpha < 1, got {alpha}")));
            }
            let mut rep = bv_sum(n, level_for(n, alpha), a_exponent)?;
            rep.alpha = Some(alpha);
            Ok(rep)
        })
        .collect()
}
