//! E₂-numbers (products of two distinct primes) and their gaps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::MobiusTable;
use crate::budget::Budget;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Table {
    pub limit: u64,
    pub values: Vec<u64>,
}

/// All `pq <= limit` with primes `p < q`.
///
/// Ω(n) = Ω(n / spf(n)) + 1 in one increasing pass over the smallest-factor
/// table; `n` is kept when Ω(n) = 2 and μ(n) ≠ 0, which excludes p².
pub fn e2_sieve(limit: u64) -> Result<E2Table> {
    e2_sieve_with(limit, &Budget::from_env())
}

pub fn e2_sieve_with(limit: u64, budget: &Budget) -> Result<E2Table> {
    if limit < 6 {
        return Err(Error::invalid("limit", "need limit >= 6"));
    }
    budget.check_mem("prime factor counts", limit + 1)?;
    let table = MobiusTable::sieve_with_budget(limit, budget)?;
    let mut big_omega = vec![0u8; limit as usize + 1];
    let mut values = Vec::new();
    for n in 2..=limit {
        let p = table.smallest_factor(n);
        let w = big_omega[(n / p) as usize] + 1;
        big_omega[n as usize] = w;
        if w == 2 && table.mu(n) != 0 {
            values.push(n);
        }
    }
    Ok(E2Table { limit, values })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2GapStats {
    pub limit: u64,
    pub r: usize,
    /// q_{n+r} − q_n → number of indices n.
    pub histogram: BTreeMap<u64, u64>,
    pub min_gap: Option<u64>,
    /// First q_n attaining `min_gap`.
    pub min_at: Option<u64>,
    /// Number of n with q_{n+1} − q_n <= 6.
    pub consecutive_gaps_at_most_6: u64,
    pub count: usize,
}

pub fn e2_gap_stats(limit: u64, r: usize) -> Result<E2GapStats> {
    if limit < 100 {
        return Err(Error::invalid("limit", "need limit >= 100"));
    }
    if r < 1 {
        return Err(Error::invalid("r", "need r >= 1"));
    }
    let table = e2_sieve(limit)?;
    Ok(gap_stats(&table, r))
}

pub fn gap_stats(table: &E2Table, r: usize) -> E2GapStats {
    let v = &table.values;
    let mut histogram = BTreeMap::new();
    let mut min: Option<(u64, u64)> = None;
    for w in v.windows(r + 1) {
        let g = w[r] - w[0];
        *histogram.entry(g).or_insert(0) += 1;
        if min.is_none_or(|(m, _)| g < m) {
            min = Some((g, w[0]));
        }
    }
    let small = v.windows(2).filter(|w| w[1] - w[0] <= 6).count() as u64;
    E2GapStats {
        limit: table.limit,
        r,
        histogram,
        min_gap: min.map(|m| m.0),
        min_at: min.map(|m| m.1),
        consecutive_gaps_at_most_6: small,
        count: v.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let t = e2_sieve(40).unwrap();
        assert_eq!(&t.values[..6], &[6, 10, 14, 15, 21, 22]);
        assert!(!t.values.contains(&4) && !t.values.contains(&12));
        assert!(t.values.windows(3).any(|w| w == [33, 34, 35]));
    }

    #[test]
    fn histogram_counts() {
        let s = e2_gap_stats(1000, 2).unwrap();
        assert_eq!(s.histogram.values().sum::<u64>() as usize, s.count - 2);
        let s1 = e2_gap_stats(100, 1).unwrap();
        assert_eq!(s1.min_gap, Some(1));
        assert_eq!(s1.min_at, Some(14));
    }
}
