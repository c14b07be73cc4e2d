//! Sieved arithmetic tables and the classical prime-counting functions.
//!
//! All logarithms are natural.

mod functions;
mod mobius;
mod sieve;

pub use functions::{
    chebyshev_psi, chebyshev_theta, divisor_count, factorize, generalized_von_mangoldt, is_prime,
    theta, theta_interval, von_mangoldt, von_mangoldt_interval,
};
pub use mobius::MobiusTable;
pub use sieve::{for_each_prime, isqrt, prime_flags, PrimeTable, SEGMENT_SPAN};

use crate::error::Result;

/// Sieves all primes up to `limit`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    PrimeTable::sieve(limit)
}

/// Möbius, φ and smallest-factor tables up to `limit`.
pub fn sieve_mobius(limit: u64) -> Result<MobiusTable> {
    MobiusTable::sieve(limit)
}
