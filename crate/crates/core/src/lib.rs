//! Prime-tuple workbench: admissible tuples, singular series, truncated
//! divisor-sum weights, correlation sums and weighted positivity detectors.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

pub mod almost_primes;
pub mod arith;
pub mod budget;
pub mod correlations;
pub mod detector;
pub mod distribution;
pub mod divisor_sums;
pub mod error;
pub mod par;
pub mod sum;
pub mod tuples;

pub use error::{Error, Result};
