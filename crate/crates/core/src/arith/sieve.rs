//! Segmented sieve of Eratosthenes over odd numbers.
//!
//! Segments cover `SEGMENT_SPAN` consecutive integers and only odd slots are
//! stored, so a segment holds `SEGMENT_SPAN / 2` byte flags while sieving and
//! one bit per odd number once packed.

use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// Integers covered by one segment.
pub const SEGMENT_SPAN: u64 = 1 << 20;
const SLOTS: usize = (SEGMENT_SPAN / 2) as usize;

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// Odd primes up to `limit` by a plain sieve; used as base primes.
pub(crate) fn small_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n / 2 + 1];
    let mut out = Vec::new();
    let mut i = 3usize;
    while i <= n {
        if !composite[i / 2] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j / 2] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Flags odd numbers in `[lo, lo + 2*flags.len())`: `flags[i] = 1` iff
/// `lo + 2i + 1` is prime. `lo` must be even.
pub(crate) fn sieve_odd_segment(lo: u64, base: &[u64], flags: &mut [u8]) {
    debug_assert!(lo % 2 == 0);
    flags.fill(1);
    let hi = lo + 2 * flags.len() as u64;
    if lo == 0 && !flags.is_empty() {
        flags[0] = 0; // 1 is not prime
    }
    for &p in base {
        let sq = p * p;
        if sq >= hi {
            break;
        }
        let mut m = sq.max(lo.div_ceil(p) * p);
        if m % 2 == 0 {
            m += p;
        }
        let mut i = ((m - lo - 1) / 2) as usize;
        let step = p as usize;
        while i < flags.len() {
            flags[i] = 0;
            i += step;
        }
    }
}

/// Calls `f` for every prime in `[lo, hi]` in increasing order, using
/// O(segment) memory.
pub fn for_each_prime<F: FnMut(u64)>(lo: u64, hi: u64, mut f: F) {
    if hi < 2 || lo > hi {
        return;
    }
    if lo <= 2 {
        f(2);
    }
    let base = small_odd_primes(isqrt(hi));
    let mut flags = vec![0u8; SLOTS];
    let mut seg = (lo / SEGMENT_SPAN) * SEGMENT_SPAN;
    while seg <= hi {
        let slots = (SLOTS as u64).min((hi - seg) / 2 + 1) as usize;
        sieve_odd_segment(seg, &base, &mut flags[..slots]);
        for (i, &fl) in flags[..slots].iter().enumerate() {
            if fl != 0 {
                let n = seg + 2 * i as u64 + 1;
                if n >= lo && n <= hi {
                    f(n);
                }
            }
        }
        seg += SEGMENT_SPAN;
    }
}

/// Primality flags for `n` in the half-open interval `(start, end]`;
/// index `i` holds `start + 1 + i`.
pub fn prime_flags(start: u64, end: u64) -> Vec<bool> {
    if end <= start {
        return Vec::new();
    }
    let base = small_odd_primes(isqrt(end));
    crate::par::concat_chunks(start, end, SEGMENT_SPAN, |lo, hi| {
        let mut v = vec![true; (hi - lo) as usize];
        for (i, slot) in v.iter_mut().enumerate() {
            let n = lo + 1 + i as u64;
            if n < 2 || (n % 2 == 0 && n != 2) {
                *slot = false;
            }
        }
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = (p * p).max((lo + 1).div_ceil(p) * p);
            while m <= hi {
                v[(m - lo - 1) as usize] = false;
                m += p;
            }
        }
        v
    })
}

/// Sieved primality table over `[0, limit]` with the sorted prime list.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    /// Bit `j` is set iff `2j + 1` is prime.
    odd_bits: Vec<u64>,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn sieve(limit: u64) -> Result<Self> {
        Self::sieve_with_budget(limit, &Budget::from_env())
    }

    pub fn sieve_with_budget(limit: u64, budget: &Budget) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid("limit", "prime sieve needs limit >= 2"));
        }
        let est_primes = if limit < 100 { 25 } else { (1.26 * limit as f64 / (limit as f64).ln()) as u64 };
        budget.check_mem("prime table", limit / 16 + est_primes * 8)?;

        let base = small_odd_primes(isqrt(limit));
        let segments: Vec<u64> = (0..=limit / SEGMENT_SPAN).map(|s| s * SEGMENT_SPAN).collect();
        let packed: Vec<Vec<u64>> = segments
            .into_par_iter()
            .map(|lo| {
                let slots = (SLOTS as u64).min((limit - lo) / 2 + 1) as usize;
                let mut flags = vec![0u8; slots];
                sieve_odd_segment(lo, &base, &mut flags);
                let mut words = vec![0u64; slots.div_ceil(64)];
                for (i, &fl) in flags.iter().enumerate() {
                    if fl != 0 && lo + 2 * (i as u64) < limit {
                        words[i / 64] |= 1 << (i % 64);
                    }
                }
                words
            })
            .collect();
        let odd_bits: Vec<u64> = packed.into_iter().flatten().collect();

        let mut primes = Vec::with_capacity(est_primes as usize);
        primes.push(2);
        for (w, &word) in odd_bits.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as u64;
                primes.push(2 * (64 * w as u64 + b) + 1);
                bits &= bits - 1;
            }
        }
        Ok(PrimeTable { limit, odd_bits, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "{n} beyond sieve limit {}", self.limit);
        if n == 2 {
            return true;
        }
        if n % 2 == 0 {
            return false;
        }
        let j = (n / 2) as usize;
        self.odd_bits[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn count(&self) -> usize {
        self.primes.len()
    }
}
