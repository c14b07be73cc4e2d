//! Weighted positivity forms that detect primes in short intervals and tuples.
//!
//! Each form is a sum over `n` of (prime-detecting factor − penalty) ×
//! (nonnegative weight). A positive total forces some `n` where the
//! prime-detecting factor beats the penalty; such `n` are collected as
//! witnesses and re-verified by trial division before being reported.

mod gaps;
mod heathbrown;
mod moments;
mod tuple_forms;

use serde::{Deserialize, Serialize};

use crate::divisor_sums::LinearForm;
use crate::error::{Error, Result};
use crate::tuples::Tuple;

pub use gaps::{gap_scan, GapEntry, GapScan};
pub use heathbrown::{heathbrown_q, tau_threshold};
pub use moments::{first_moment_gap, mean_psi_r, moment_form, mollified_moment};
pub use tuple_forms::{gpy_form, gpy_form_with, gs_single_tuple};

/// Default cap on collected witnesses per report.
pub const DEFAULT_WITNESS_CAP: usize = 1_000_000;
/// Default cap on the number of tuples summed in the GPY form.
pub const DEFAULT_MAX_TUPLES: u64 = 250_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorForm {
    FirstMoment,
    Mollified,
    MomentForm,
    GpySum,
    GsSingle,
    Heathbrown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectorOptions {
    pub witness_cap: usize,
    pub max_tuples: u64,
}

impl Default for DetectorOptions {
    fn default() -> Self {
        DetectorOptions { witness_cap: DEFAULT_WITNESS_CAP, max_tuples: DEFAULT_MAX_TUPLES }
    }
}

/// A labeled piece of a form; the total is Σ weight·value over components.
/// Informational entries carry weight 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub value: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u64,
    pub event: String,
    pub verified: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub big_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple: Option<Tuple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<LinearForm>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorReport {
    pub form: DetectorForm,
    pub params: DetectorParams,
    pub total: f64,
    pub positive: bool,
    pub components: Vec<Component>,
    pub flags: Vec<(String, bool)>,
    pub warnings: Vec<String>,
    pub witnesses: Vec<Witness>,
    /// True when the witness cap cut the list short.
    pub witnesses_truncated: bool,
}

impl DetectorReport {
    fn new(form: DetectorForm, params: DetectorParams, total: f64) -> Self {
        DetectorReport {
            form,
            params,
            total,
            positive: total > 0.0,
            components: Vec::new(),
            flags: Vec::new(),
            warnings: Vec::new(),
            witnesses: Vec::new(),
            witnesses_truncated: false,
        }
    }

    fn push(&mut self, label: &str, value: f64, weight: f64) {
        self.components.push(Component { label: label.to_string(), value, weight });
    }

    fn flag(&mut self, label: &str, value: bool) {
        self.flags.push((label.to_string(), value));
    }

    pub fn component(&self, label: &str) -> Option<f64> {
        self.components.iter().find(|c| c.label == label).map(|c| c.value)
    }

    /// Σ weight·value over the components.
    pub fn recombined(&self) -> f64 {
        crate::sum::csum(self.components.iter().map(|c| c.weight * c.value))
    }

    /// |total − recombined| relative to the magnitude of the weighted parts.
    pub fn recombination_error(&self) -> f64 {
        let scale: f64 = self.components.iter().map(|c| (c.weight * c.value).abs()).sum();
        if scale == 0.0 {
            return (self.total - self.recombined()).abs();
        }
        (self.total - self.recombined()).abs() / scale
    }
}

/// Keeps the first `cap` candidates after checking each with `verify`.
fn collect_witnesses<I, V>(candidates: I, cap: usize, verify: V) -> Result<(Vec<Witness>, bool)>
where
    I: IntoIterator<Item = (u64, String)>,
    V: Fn(u64) -> bool,
{
    let mut out = Vec::new();
    let mut truncated = false;
    for (n, event) in candidates {
        if out.len() == cap {
            truncated = true;
            break;
        }
        if !verify(n) {
            return Err(Error::Verification(format!("witness n={n} ({event}) failed re-check")));
        }
        out.push(Witness { n, event, verified: true });
    }
    Ok((out, truncated))
}

/// Number of primes in `(n, n + h]` by trial division.
fn primes_in_window(n: u64, h: u64) -> u64 {
    (n + 1..=n + h).filter(|&m| crate::arith::is_prime(m)).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{theta, von_mangoldt};
    use crate::divisor_sums::lambda_r_interval;

    fn opts() -> DetectorOptions {
        DetectorOptions::default()
    }

    #[test]
    fn first_moment_without_truncation_is_plain_second_moment() {
        let rep = first_moment_gap(2000, 1.0, 1.0).unwrap();
        assert_eq!(rep.component("sum_psi_psiR"), Some(0.0));
        assert_eq!(rep.component("sum_psiR_sq"), Some(0.0));
        assert!((rep.total - rep.component("sum_psi_sq").unwrap()).abs() < 1e-9 * rep.total);
        assert!(rep.recombination_error() < 1e-9);
    }

    #[test]
    fn components_recombine() {
        let reps = vec![
            first_moment_gap(5000, 1.0, 8.0).unwrap(),
            mollified_moment(5000, 1.0, 8.0, 0.5, 3.0, &opts()).unwrap(),
            moment_form(5000, 1.0, 8.0, 0.5, &[1.0, -0.5, 0.25]).unwrap(),
            gpy_form(3000, 6, 2, 1, 1, 20.0, &opts()).unwrap(),
            gs_single_tuple(&Tuple::new(vec![0, 2, 6]).unwrap(), 1, 1, 3000, 20.0, &opts()).unwrap(),
            heathbrown_q(&[LinearForm { a: 1, b: 0 }, LinearForm { a: 1, b: 2 }], 1.0 / 14.0, 3000, 30.0, &opts()).unwrap(),
        ];
        for rep in reps {
            assert!(rep.recombination_error() < 1e-9, "{:?}: {}", rep.form, rep.recombination_error());
        }
    }

    #[test]
    fn single_offset_gpy_sum_reduces_to_short_window_weight() {
        let (n, h, r) = (2000u64, 5u64, 40.0);
        let rep = gpy_form(n, h, 1, 0, 1, r, &opts()).unwrap();
        let lam_r = lambda_r_interval(n, 2 * n + h, r).unwrap();
        let mut prime_part = 0.0;
        for m in n + 1..=2 * n {
            let w: f64 = (1..=h).map(|j| lam_r.get(m + j)).sum();
            let t: f64 = (1..=h).map(|j| theta(m + j)).sum();
            prime_part += t * w * w;
        }
        let got = rep.component("prime_part").unwrap();
        assert!((got - prime_part).abs() < 1e-9 * prime_part, "{got} vs {prime_part}");
    }

    #[test]
    fn mollified_witnesses_hold_two_primes() {
        let n = 20_000u64;
        let c = mean_psi_r(n, 1.0, 10.0).unwrap();
        let rep = mollified_moment(n, 1.0, 10.0, 1.05, c, &opts()).unwrap();
        let h = rep.params.h.unwrap();
        for w in &rep.witnesses {
            let psi: f64 = (w.n + 1..=w.n + h).map(von_mangoldt).sum();
            assert!(psi >= 2.0 * (n as f64).ln() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn heathbrown_witnesses_and_identity() {
        let forms = [LinearForm { a: 1, b: 0 }, LinearForm { a: 1, b: 2 }];
        let rep = heathbrown_q(&forms, 1.0 / 14.0, 10_000, 30.0, &opts()).unwrap();
        assert!(rep.component("Q1_identity_relative_error").unwrap() < 1e-9);
        for w in &rep.witnesses {
            assert!(crate::arith::divisor_count(w.n) + crate::arith::divisor_count(w.n + 2) < 14);
        }
        if rep.positive {
            assert!(!rep.witnesses.is_empty());
        }
    }

    #[test]
    fn witness_cap_truncates() {
        let forms = [LinearForm { a: 1, b: 0 }];
        let o = DetectorOptions { witness_cap: 3, ..Default::default() };
        let rep = heathbrown_q(&forms, 0.2, 1000, 10.0, &o).unwrap();
        assert!(rep.positive);
        assert_eq!(rep.witnesses.len(), 3);
        assert!(rep.witnesses_truncated);
        assert_eq!(rep.witnesses[0].n, 1);
    }

    #[test]
    fn tuple_cost_guard() {
        let o = DetectorOptions { max_tuples: 10, ..Default::default() };
        assert!(matches!(gpy_form(1000, 10, 3, 1, 1, 10.0, &o), Err(Error::Resource { .. })));
    }
}
