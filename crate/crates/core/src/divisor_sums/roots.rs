//! Residue classes `n mod d` with `d | Π(n)` for a product of linear forms,
//! lifted from prime moduli by Chinese remaindering.

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, MobiusTable};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::tuples::Tuple;

/// The linear form `a·n + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearForm {
    pub a: u64,
    pub b: i64,
}

impl LinearForm {
    pub fn eval(&self, n: u64) -> i128 {
        self.a as i128 * n as i128 + self.b as i128
    }
}

/// Forms `n + h` for each offset of the tuple.
pub fn tuple_forms(h: &Tuple) -> Vec<LinearForm> {
    h.offsets().iter().map(|&b| LinearForm { a: 1, b }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub modulus: u64,
    /// Sorted residues `r` with `Π(r) ≡ 0 (mod modulus)`.
    pub roots: Vec<u64>,
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Roots of `Π(n) ≡ 0 (mod p)` for a prime `p`.
pub fn prime_roots(forms: &[LinearForm], p: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(forms.len());
    for f in forms {
        let b = f.b.rem_euclid(p as i64) as u64;
        if f.a % p == 0 {
            if b == 0 {
                return (0..p).collect();
            }
            continue;
        }
        let inv = mod_pow(f.a % p, p - 2, p);
        let r = ((p - b) % p) as u128 * inv as u128 % p as u128;
        out.push(r as u64);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Combines roots mod `m` with roots mod prime `p` (coprime to `m`).
fn crt_lift(roots_m: &[u64], m: u64, roots_p: &[u64], p: u64) -> Vec<u64> {
    let m_inv = mod_pow(m % p, p - 2, p);
    let mut out = Vec::with_capacity(roots_m.len() * roots_p.len());
    for &r2 in roots_m {
        for &r1 in roots_p {
            let diff = (r1 + p - r2 % p) % p;
            let t = (diff as u128 * m_inv as u128 % p as u128) as u64;
            out.push(r2 + m * t);
        }
    }
    out.sort_unstable();
    out
}

/// Residues `n mod d` with `d | P_H(n)`, for squarefree `d`.
pub fn root_classes(d: u64, h: &Tuple) -> Result<RootSystem> {
    root_classes_forms(d, &tuple_forms(h))
}

pub fn root_classes_forms(d: u64, forms: &[LinearForm]) -> Result<RootSystem> {
    if d == 0 {
        return Err(Error::invalid("d", "modulus must be positive"));
    }
    let fac = factorize(d);
    if fac.iter().any(|&(_, e)| e > 1) {
        return Err(Error::invalid("d", format!("{d} is not squarefree")));
    }
    let mut roots = vec![0u64];
    let mut m = 1u64;
    for (p, _) in fac {
        roots = crt_lift(&roots, m, &prime_roots(forms, p), p);
        m *= p;
    }
    Ok(RootSystem { modulus: d, roots })
}

/// All squarefree `d <= d_max` with at least one root, each carrying a
/// coefficient, with root lists stored contiguously.
#[derive(Debug, Clone)]
pub(crate) struct DivisorPlan {
    pub moduli: Vec<u64>,
    pub coeffs: Vec<f64>,
    /// Roots of `moduli[i]` are `roots[starts[i]..starts[i + 1]]`.
    pub starts: Vec<usize>,
    pub roots: Vec<u64>,
}

impl DivisorPlan {
    /// Builds the plan; `coeff(d, mu)` gives the weight attached to `d`.
    pub fn build<F>(d_max: u64, forms: &[LinearForm], budget: &Budget, coeff: F) -> Result<Self>
    where
        F: Fn(u64, i8) -> f64,
    {
        let d_max = d_max.max(1);
        let mob = MobiusTable::sieve_with_budget(d_max, budget)?;
        let n = d_max as usize;
        // Per-d index into the plan, usize::MAX when d has no roots or is
        // not squarefree.
        let mut index = vec![usize::MAX; n + 1];
        let mut plan = DivisorPlan { moduli: Vec::new(), coeffs: Vec::new(), starts: vec![0], roots: Vec::new() };
        let root_cap = (budget.mem_bytes / 16) as usize;
        for d in 1..=d_max {
            let mu = mob.mu(d);
            if mu == 0 {
                continue;
            }
            let lifted = if d == 1 {
                vec![0]
            } else {
                let p = mob.smallest_factor(d);
                let m = d / p;
                let im = index[m as usize];
                if im == usize::MAX {
                    continue;
                }
                let rp = prime_roots(forms, p);
                if rp.is_empty() {
                    continue;
                }
                let rm = &plan.roots[plan.starts[im]..plan.starts[im + 1]];
                crt_lift(rm, m, &rp, p)
            };
            index[d as usize] = plan.moduli.len();
            plan.moduli.push(d);
            plan.coeffs.push(coeff(d, mu));
            plan.roots.extend_from_slice(&lifted);
            plan.starts.push(plan.roots.len());
            if plan.roots.len() > root_cap {
                return Err(Error::Resource {
                    what: "divisor root table",
                    needed: plan.roots.len() as u64 * 16,
                    cap: budget.mem_bytes,
                });
            }
        }
        Ok(plan)
    }

    /// Number of scatter steps needed for an interval of length `len`.
    pub fn cost(&self, len: u64) -> u64 {
        (0..self.moduli.len())
            .map(|i| (self.starts[i + 1] - self.starts[i]) as u64 * (len / self.moduli[i] + 1))
            .sum()
    }

    /// Σ coefficient over `d` with `n` in a root class of `d`, for every
    /// `n` in `(lo, hi]`. Per `n`, terms are added in increasing `d`.
    pub fn scatter(&self, lo: u64, hi: u64) -> Vec<f64> {
        let mut v = vec![0.0; (hi - lo) as usize];
        let first = lo + 1;
        for (i, (&d, &c)) in self.moduli.iter().zip(&self.coeffs).enumerate() {
            if c == 0.0 {
                continue;
            }
            let base = first % d;
            for &r in &self.roots[self.starts[i]..self.starts[i + 1]] {
                let mut n = first + (r + d - base) % d;
                while n <= hi {
                    v[(n - first) as usize] += c;
                    n += d;
                }
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i64]) -> Tuple {
        Tuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(root_classes(1, &t(&[0, 2])).unwrap().roots, vec![0]);
        assert_eq!(root_classes(3, &t(&[0, 2])).unwrap().roots, vec![0, 1]);
        let r15 = root_classes(15, &t(&[0, 2])).unwrap();
        let scan: Vec<u64> = (0..15).filter(|n| n * (n + 2) % 15 == 0).collect();
        assert_eq!(r15.roots, scan);
        assert_eq!(r15.roots.len(), 4);
        assert!(root_classes(12, &t(&[0, 2])).is_err());
    }

    #[test]
    fn general_forms() {
        // 3n + 1 ≡ 0 (mod 5) ⇔ n ≡ 3.
        let f = [LinearForm { a: 3, b: 1 }];
        assert_eq!(prime_roots(&f, 5), vec![3]);
        // p | a and p ∤ b: no roots; p | a and p | b: every class.
        assert!(prime_roots(&[LinearForm { a: 5, b: 1 }], 5).is_empty());
        assert_eq!(prime_roots(&[LinearForm { a: 5, b: 10 }], 5).len(), 5);
    }

    #[test]
    fn plan_matches_direct_classes() {
        let h = t(&[0, 4, 6, 10, 12, 16]);
        let forms = tuple_forms(&h);
        let plan = DivisorPlan::build(300, &forms, &Budget::default(), |_, mu| mu as f64).unwrap();
        for (i, &d) in plan.moduli.iter().enumerate() {
            let direct = root_classes(d, &h).unwrap().roots;
            assert_eq!(&plan.roots[plan.starts[i]..plan.starts[i + 1]], direct.as_slice(), "d={d}");
        }
    }
}
