//! Memory and cost guards.
//!
//! The memory cap is read from `TUPLESIEVE_MEM_CAP` (bytes, optionally with a
//! `K`, `M` or `G` suffix). Cost budgets count inner-loop steps and are fixed
//! per operation.

use crate::error::{Error, Result};

pub const MEM_CAP_ENV: &str = "TUPLESIEVE_MEM_CAP";
pub const DEFAULT_MEM_CAP: u64 = 4 << 30;
/// Default ceiling on inner-loop steps for combinatorial operations.
pub const DEFAULT_COST_CAP: u64 = 20_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub mem_bytes: u64,
    pub cost_steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { mem_bytes: DEFAULT_MEM_CAP, cost_steps: DEFAULT_COST_CAP }
    }
}

impl Budget {
    /// Budget with the memory cap taken from the environment when set.
    pub fn from_env() -> Self {
        let mem_bytes = std::env::var(MEM_CAP_ENV)
            .ok()
            .and_then(|s| parse_bytes(&s))
            .unwrap_or(DEFAULT_MEM_CAP);
        Budget { mem_bytes, ..Budget::default() }
    }

    pub fn check_mem(&self, what: &'static str, bytes: u64) -> Result<()> {
        if bytes > self.mem_bytes {
            return Err(Error::Resource { what, needed: bytes, cap: self.mem_bytes });
        }
        Ok(())
    }

    pub fn check_cost(&self, what: &'static str, steps: u64) -> Result<()> {
        if steps > self.cost_steps {
            return Err(Error::Resource { what, needed: steps, cap: self.cost_steps });
        }
        Ok(())
    }
}

/// Parses `1024`, `64K`, `512M`, `2G` (binary multiples).
pub fn parse_bytes(s: &str) -> Option<u64> {
    let s = s.trim();
    let (digits, shift) = match s.chars().last()? {
        'k' | 'K' => (&s[..s.len() - 1], 10),
        'm' | 'M' => (&s[..s.len() - 1], 20),
        'g' | 'G' => (&s[..s.len() - 1], 30),
        _ => (s, 0),
    };
    digits.trim().parse::<u64>().ok()?.checked_mul(1u64 << shift)
}
