//! Exhaustive search for the narrowest admissible k-tuple.
//!
//! Diameters are tried in increasing order. For a fixed diameter `D` the
//! search fixes offsets 0 and `D` and chooses the interior offsets in
//! increasing order, tracking occupied residue classes modulo every prime
//! `p <= k`; a branch is cut as soon as some prime has all classes covered.
//! The first hit is therefore the lexicographically smallest tuple of
//! minimal diameter, and reaching it certifies every smaller diameter empty.

use serde::{Deserialize, Serialize};

use super::Tuple;
use crate::error::{Error, Result};

pub const MAX_SEARCH_K: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NarrowestResult {
    pub tuple: Tuple,
    pub diameter: u64,
    /// Search nodes visited, across all diameters tried.
    pub nodes_visited: u64,
    /// Diameters `k−1 ..= diameter−1` were searched exhaustively and held
    /// no admissible tuple.
    pub exhausted_below: u64,
}

struct Occupancy {
    primes: Vec<usize>,
    counts: Vec<Vec<u8>>,
    distinct: Vec<usize>,
}

impl Occupancy {
    fn new(k: usize) -> Self {
        let primes: Vec<usize> = (2..=k).filter(|&p| crate::arith::is_prime(p as u64)).collect();
        let counts = primes.iter().map(|&p| vec![0u8; p]).collect();
        let distinct = vec![0; primes.len()];
        Occupancy { primes, counts, distinct }
    }

    /// Adds an offset; returns false if some prime becomes fully covered.
    fn push(&mut self, h: u64) -> bool {
        let mut ok = true;
        for (i, &p) in self.primes.iter().enumerate() {
            let r = (h % p as u64) as usize;
            if self.counts[i][r] == 0 {
                self.distinct[i] += 1;
                if self.distinct[i] == p {
                    ok = false;
                }
            }
            self.counts[i][r] += 1;
        }
        ok
    }

    fn pop(&mut self, h: u64) {
        for (i, &p) in self.primes.iter().enumerate() {
            let r = (h % p as u64) as usize;
            self.counts[i][r] -= 1;
            if self.counts[i][r] == 0 {
                self.distinct[i] -= 1;
            }
        }
    }
}

fn dfs(
    occ: &mut Occupancy,
    chosen: &mut Vec<u64>,
    need: usize,
    diameter: u64,
    nodes: &mut u64,
) -> bool {
    *nodes += 1;
    if need == 0 {
        return true;
    }
    let last = *chosen.last().unwrap();
    let top = diameter.saturating_sub(need as u64);
    for next in last + 1..=top {
        let ok = occ.push(next);
        if ok {
            chosen.push(next);
            if dfs(occ, chosen, need - 1, diameter, nodes) {
                return true;
            }
            chosen.pop();
        }
        occ.pop(next);
    }
    false
}

/// Admissible k-tuple of minimal diameter (at most `diameter_cap`), first
/// offset 0, ties broken lexicographically.
pub fn narrowest_admissible(k: usize, diameter_cap: u64) -> Result<NarrowestResult> {
    if k == 0 || k > MAX_SEARCH_K {
        return Err(Error::invalid("k", format!("exhaustive search supports 1 <= k <= {MAX_SEARCH_K}")));
    }
    if k == 1 {
        return Ok(NarrowestResult { tuple: Tuple::new(vec![0])?, diameter: 0, nodes_visited: 1, exhausted_below: 0 });
    }
    if diameter_cap < (k - 1) as u64 {
        return Err(Error::invalid("diameter_cap", format!("need diameter_cap >= k-1 = {}", k - 1)));
    }
    let mut nodes = 0u64;
    for diameter in (k - 1) as u64..=diameter_cap {
        let mut occ = Occupancy::new(k);
        let mut chosen = vec![0u64];
        let ok0 = occ.push(0);
        let ok1 = occ.push(diameter);
        if !(ok0 && ok1) {
            continue;
        }
        // Interior offsets live strictly between 0 and the diameter.
        if dfs(&mut occ, &mut chosen, k - 2, diameter, &mut nodes) {
            chosen.push(diameter);
            let tuple = Tuple::new(chosen.iter().map(|&x| x as i64).collect())?;
            if !tuple.is_admissible() {
                return Err(Error::Verification(format!("search produced inadmissible tuple {tuple}")));
            }
            return Ok(NarrowestResult { tuple, diameter, nodes_visited: nodes, exhausted_below: diameter });
        }
    }
    Err(Error::NotFound(format!("no admissible {k}-tuple with diameter <= {diameter_cap}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_k() {
        assert_eq!(narrowest_admissible(1, 10).unwrap().tuple.offsets(), &[0]);
        let r = narrowest_admissible(2, 10).unwrap();
        assert_eq!(r.tuple.offsets(), &[0, 2]);
        assert_eq!(narrowest_admissible(3, 10).unwrap().tuple.offsets(), &[0, 2, 6]);
    }

    #[test]
    fn six_tuple() {
        let r = narrowest_admissible(6, 100).unwrap();
        assert_eq!(r.tuple.offsets(), &[0, 4, 6, 10, 12, 16]);
        assert_eq!(r.diameter, 16);
    }

    #[test]
    fn cap_and_range_errors() {
        assert!(matches!(narrowest_admissible(6, 15), Err(Error::NotFound(_))));
        assert!(narrowest_admissible(11, 100).is_err());
        assert!(narrowest_admissible(0, 100).is_err());
        assert!(narrowest_admissible(4, 2).is_err());
    }
}
