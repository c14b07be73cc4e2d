use crate::budget::Budget;
use crate::error::{Error, Result};

/// Möbius, Euler φ and smallest-prime-factor tables over `[0, limit]`,
/// built by a linear sieve. Index 0 is unused.
#[derive(Debug, Clone)]
pub struct MobiusTable {
    limit: u64,
    mu: Vec<i8>,
    phi: Vec<u32>,
    spf: Vec<u32>,
}

impl MobiusTable {
    pub fn sieve(limit: u64) -> Result<Self> {
        Self::sieve_with_budget(limit, &Budget::from_env())
    }

    pub fn sieve_with_budget(limit: u64, budget: &Budget) -> Result<Self> {
        if limit < 1 {
            return Err(Error::invalid("limit", "Möbius sieve needs limit >= 1"));
        }
        if limit > u32::MAX as u64 {
            return Err(Error::invalid("limit", "Möbius sieve is limited to 32-bit arguments"));
        }
        budget.check_mem("Möbius table", (limit + 1) * 9)?;
        let n = limit as usize;
        let mut mu = vec![0i8; n + 1];
        let mut phi = vec![0u32; n + 1];
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        mu[1] = 1;
        phi[1] = 1;
        spf[1] = 1;
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mu[i] = -1;
                phi[i] = i as u32 - 1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m > n {
                    break;
                }
                spf[m] = p;
                if p == spf[i] {
                    mu[m] = 0;
                    phi[m] = phi[i] * p;
                } else {
                    mu[m] = -mu[i];
                    phi[m] = phi[i] * (p - 1);
                }
            }
        }
        Ok(MobiusTable { limit, mu, phi, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn mu(&self, n: u64) -> i8 {
        self.mu[n as usize]
    }

    #[inline]
    pub fn phi(&self, n: u64) -> u64 {
        self.phi[n as usize] as u64
    }

    #[inline]
    pub fn smallest_factor(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    /// Prime factorization `(p, e)` in increasing `p`, in O(log n) steps.
    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.smallest_factor(n);
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
            n /= p;
        }
        out
    }

    /// Distinct prime factors of `n`.
    pub fn prime_divisors(&self, n: u64) -> Vec<u64> {
        self.factorize(n).into_iter().map(|(p, _)| p).collect()
    }

    pub fn is_squarefree(&self, n: u64) -> bool {
        self.mu(n) != 0
    }

    pub fn mertens(&self, x: u64) -> i64 {
        self.mu[1..=x as usize].iter().map(|&m| m as i64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definitions() {
        let t = MobiusTable::sieve(100).unwrap();
        assert_eq!(t.mu(1), 1);
        assert_eq!(t.mu(4), 0);
        assert_eq!(t.mu(6), 1);
        assert_eq!(t.mu(30), -1);
        assert_eq!(t.phi(12), 4);
        assert_eq!(t.phi(97), 96);
        assert_eq!(t.factorize(72), vec![(2, 3), (3, 2)]);
        assert_eq!(t.smallest_factor(91), 7);
    }
}
