use serde::{Deserialize, Serialize};

use crate::arith::for_each_prime;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapEntry {
    /// p_n
    pub p: u64,
    /// p_{n+r}
    pub q: u64,
    /// (p_{n+r} − p_n) / log p_n
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapScan {
    pub limit: u64,
    pub r: usize,
    pub gaps: Vec<GapEntry>,
    pub min_normalized: Option<GapEntry>,
    pub min_gap: Option<u64>,
}

impl GapScan {
    /// Share of normalized gaps strictly below `c`.
    pub fn proportion_below(&self, c: f64) -> f64 {
        if self.gaps.is_empty() {
            return 0.0;
        }
        self.gaps.iter().filter(|g| g.normalized < c).count() as f64 / self.gaps.len() as f64
    }

    /// Smallest raw gap p_{n+r} − p_n among entries with p_n >= `from`.
    pub fn min_gap_from(&self, from: u64) -> Option<u64> {
        self.gaps.iter().filter(|g| g.p >= from).map(|g| g.q - g.p).min()
    }
}

/// Gaps p_{n+r} − p_n for all primes p_{n+r} <= `limit`, normalized by
/// log p_n.
pub fn gap_scan(limit: u64, r: usize) -> Result<GapScan> {
    if r < 1 {
        return Err(Error::invalid("r", "need r >= 1"));
    }
    if limit < 100 {
        return Err(Error::invalid("limit", "need limit >= 100"));
    }
    let mut primes = Vec::new();
    for_each_prime(1, limit, |p| primes.push(p));
    let gaps: Vec<GapEntry> = primes
        .windows(r + 1)
        .map(|w| GapEntry { p: w[0], q: w[r], normalized: (w[r] - w[0]) as f64 / (w[0] as f64).ln() })
        .collect();
    let min_normalized = gaps
        .iter()
        .copied()
        .min_by(|a, b| a.normalized.total_cmp(&b.normalized));
    let min_gap = gaps.iter().map(|g| g.q - g.p).min();
    Ok(GapScan { limit, r, gaps, min_normalized, min_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scan() {
        let s = gap_scan(100, 1).unwrap();
        assert_eq!(s.gaps.len(), 24);
        assert_eq!((s.gaps[0].p, s.gaps[0].q), (2, 3));
        assert_eq!(s.min_gap, Some(1));
        assert_eq!(s.min_gap_from(3), Some(2));
        let s2 = gap_scan(100, 2).unwrap();
        assert_eq!(s2.min_gap_from(5), Some(6));
    }
}
