//! Admissible k-tuples of integer offsets.

mod search;
mod singular;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use search::{narrowest_admissible, NarrowestResult};
pub use singular::{
    gallagher_average, gallagher_average_with, singular_series, GallagherAverage, SingularSeriesEvaluator,
    SingularSeriesValue, MAX_CUTOFF_PRIME,
};

/// A set of distinct integer offsets `h_1 < h_2 < … < h_k`.
///
/// Serializes as a JSON array of offsets and parses from a comma-separated
/// list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Tuple {
    offsets: Vec<i64>,
}

impl Tuple {
    /// Builds a tuple from offsets in any order. Duplicates are rejected.
    pub fn new(mut offsets: Vec<i64>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::invalid("tuple", "a tuple needs at least one offset"));
        }
        offsets.sort_unstable();
        if let Some(w) = offsets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid("tuple", format!("offset {} repeated", w[0])));
        }
        Ok(Tuple { offsets })
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn k(&self) -> usize {
        self.offsets.len()
    }

    pub fn diameter(&self) -> u64 {
        (self.offsets[self.k() - 1] - self.offsets[0]) as u64
    }

    pub fn contains(&self, h: i64) -> bool {
        self.offsets.binary_search(&h).is_ok()
    }

    pub fn shifted(&self, c: i64) -> Tuple {
        Tuple { offsets: self.offsets.iter().map(|h| h + c).collect() }
    }

    /// The same pattern translated so that the first offset is 0.
    pub fn normalized(&self) -> Tuple {
        self.shifted(-self.offsets[0])
    }

    /// ν_p(H): number of residue classes mod `p` occupied by the offsets.
    pub fn residue_count(&self, p: u64) -> u64 {
        residue_count(self, p)
    }

    pub fn is_admissible(&self) -> bool {
        is_admissible(self)
    }
}

impl TryFrom<Vec<i64>> for Tuple {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Tuple::new(v)
    }
}

impl From<Tuple> for Vec<i64> {
    fn from(t: Tuple) -> Vec<i64> {
        t.offsets
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.offsets.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{h}")?;
        }
        Ok(())
    }
}

impl FromStr for Tuple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let offsets = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::invalid("tuple", format!("bad offset {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(offsets)
    }
}

/// ν_p(H), the number of distinct residues of the offsets modulo `p`.
pub fn residue_count(h: &Tuple, p: u64) -> u64 {
    assert!(p >= 2);
    let k = h.k() as u64;
    if p > h.diameter() {
        return k;
    }
    let mut seen = vec![false; p as usize];
    let mut count = 0;
    for &o in h.offsets() {
        let r = o.rem_euclid(p as i64) as usize;
        if !seen[r] {
            seen[r] = true;
            count += 1;
        }
    }
    count
}

/// True iff no prime `p` has every class mod `p` occupied. Only `p <= k`
/// can be fully covered.
pub fn is_admissible(h: &Tuple) -> bool {
    first_blocking_prime(h).is_none()
}

/// Smallest prime `p` with ν_p(H) = p, if any.
pub fn first_blocking_prime(h: &Tuple) -> Option<u64> {
    let k = h.k() as u64;
    (2..=k).filter(|&p| crate::arith::is_prime(p)).find(|&p| residue_count(h, p) == p)
}
