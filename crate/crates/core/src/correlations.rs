//! Empirical correlation sums of Λ, θ and the truncated weights, set against
//! their conjectured or proven main terms where one is known.
//!
//! Ranges: pair, self and tuple-count sums run over `1 <= n <= N`; the
//! short-interval second moment runs over `N < n <= 2N`.

use serde::{Deserialize, Serialize};

use crate::arith::{prime_flags, theta_interval, von_mangoldt_interval};
use crate::divisor_sums::{gpy_weight_interval, lambda_r_interval};
use crate::error::{Error, Result};
use crate::par::{sum_over, sums_over};
use crate::sum::CompensatedSum;
use crate::tuples::{singular_series, Tuple};

/// Truncation tolerance for singular series used as predicted main terms.
pub const PREDICTION_TOL: f64 = 1e-8;
/// Default ceiling on `|H1| + |H2| + ℓ1 + ℓ2`.
pub const DEFAULT_MAX_ORDER: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationKind {
    Pair,
    SelfCorrelation,
    GpyPair,
    GpyTheta,
    HardyLittlewood,
    SecondMoment,
}

/// Where the extra shift `h0` sits relative to the two tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaCase {
    Outside,
    FirstOnly,
    SecondOnly,
    Both,
}

impl ThetaCase {
    pub fn classify(h1: &Tuple, h2: &Tuple, h0: i64) -> ThetaCase {
        match (h1.contains(h0), h2.contains(h0)) {
            (false, false) => ThetaCase::Outside,
            (true, false) => ThetaCase::FirstOnly,
            (false, true) => ThetaCase::SecondOnly,
            (true, true) => ThetaCase::Both,
        }
    }
}

/// One empirical sum with its predicted main term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub label: String,
    pub empirical: f64,
    pub predicted_main: Option<f64>,
    pub ratio: Option<f64>,
}

impl Measurement {
    pub fn new(label: &str, empirical: f64, predicted_main: Option<f64>) -> Self {
        let ratio = predicted_main.filter(|&p| p != 0.0).map(|p| empirical / p);
        Measurement { label: label.to_string(), empirical, predicted_main, ratio }
    }
}

/// Parameters echoed into every report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorrelationParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple1: Option<Tuple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell1: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple2: Option<Tuple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell2: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h0: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<ThetaCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_series: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub kind: CorrelationKind,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub params: CorrelationParams,
    pub empirical: f64,
    pub predicted_main: Option<f64>,
    pub ratio: Option<f64>,
    /// Companion sums reported alongside the primary one.
    pub secondary: Vec<Measurement>,
}

impl CorrelationReport {
    fn new(kind: CorrelationKind, n: u64, r: Option<f64>, params: CorrelationParams, primary: Measurement) -> Self {
        CorrelationReport {
            kind,
            n,
            r,
            params,
            empirical: primary.empirical,
            predicted_main: primary.predicted_main,
            ratio: primary.ratio,
            secondary: Vec::new(),
        }
    }

    /// The primary measurement followed by the secondary ones.
    pub fn measurements(&self) -> Vec<Measurement> {
        let mut v = vec![Measurement {
            label: "primary".into(),
            empirical: self.empirical,
            predicted_main: self.predicted_main,
            ratio: self.ratio,
        }];
        v.extend(self.secondary.iter().cloned());
        v
    }
}

fn pair_tuple(j: i64) -> Tuple {
    Tuple::new(vec![0, j]).expect("nonzero shift")
}

/// Σ_{n ≤ N} Λ_R(n)Λ_R(n+j) and Σ_{n ≤ N} Λ(n)Λ_R(n+j), each against 𝔖({0, j})·N.
pub fn corr_pair(n_max: u64, r: f64, j: i64) -> Result<CorrelationReport> {
    if j == 0 {
        return Err(Error::invalid("shift", "shift 0 is the self-correlation; use corr_self"));
    }
    if !(r >= 1.0) || r > n_max as f64 {
        return Err(Error::invalid("R", format!("need 1 <= R <= N, got R={r}, N={n_max}")));
    }
    if j.unsigned_abs() as f64 > r {
        return Err(Error::invalid("shift", format!("need |j| <= R, got j={j}, R={r}")));
    }
    let top = n_max + j.max(0) as u64;
    let lam_r = lambda_r_interval(0, top, r)?.values;
    let lam = von_mangoldt_interval(0, top);
    // n + j >= 1 keeps the shifted argument in range.
    let first = if j < 0 { j.unsigned_abs() } else { 0 };
    let [s_rr, s_lr] = sums_over(first, n_max, |n| {
        let a = (n - 1) as usize;
        let b = (n as i64 + j - 1) as usize;
        [lam_r[a] * lam_r[b], lam[a] * lam_r[b]]
    });
    let ss = singular_series(&pair_tuple(j), PREDICTION_TOL)?.value;
    let pred = ss * n_max as f64;
    let params = CorrelationParams { shift: Some(j), singular_series: Some(ss), ..Default::default() };
    let mut rep = CorrelationReport::new(
        CorrelationKind::Pair,
        n_max,
        Some(r),
        params,
        Measurement::new("lambda_R*lambda_R", s_rr, Some(pred)),
    );
    rep.secondary.push(Measurement::new("lambda*lambda_R", s_lr, Some(pred)));
    Ok(rep)
}

/// Σ_{n ≤ N} Λ_R(n)² and Σ_{n ≤ N} Λ(n)Λ_R(n), each against N·log R.
pub fn corr_self(n_max: u64, r: f64) -> Result<CorrelationReport> {
    if !(r >= 2.0) || r > n_max as f64 {
        return Err(Error::invalid("R", format!("need 2 <= R <= N, got R={r}, N={n_max}")));
    }
    let lam_r = lambda_r_interval(0, n_max, r)?.values;
    let lam = von_mangoldt_interval(0, n_max);
    let [s_rr, s_lr] = sums_over(0, n_max, |n| {
        let i = (n - 1) as usize;
        [lam_r[i] * lam_r[i], lam[i] * lam_r[i]]
    });
    let pred = n_max as f64 * r.ln();
    let mut rep = CorrelationReport::new(
        CorrelationKind::SelfCorrelation,
        n_max,
        Some(r),
        CorrelationParams::default(),
        Measurement::new("lambda_R^2", s_rr, Some(pred)),
    );
    rep.secondary.push(Measurement::new("lambda*lambda_R", s_lr, Some(pred)));
    Ok(rep)
}

fn check_gpy_params(h1: &Tuple, ell1: u32, h2: &Tuple, ell2: u32, n_max: u64, r: f64, max_order: u32) -> Result<()> {
    if !(r >= 1.0) || r * r > n_max as f64 * (1.0 + 1e-12) {
        return Err(Error::invalid("R", format!("need 1 <= R <= N^(1/2), got R={r}, N={n_max}")));
    }
    let order = (h1.k() + h2.k()) as u32 + ell1 + ell2;
    if order > max_order {
        return Err(Error::invalid("ell", format!("|H1|+|H2|+ell1+ell2 = {order} exceeds {max_order}")));
    }
    Ok(())
}

/// Σ_{n ≤ N} Λ_R(n; H1, ℓ1) Λ_R(n; H2, ℓ2). No main term is attached.
pub fn corr_gpy_pair(h1: &Tuple, ell1: u32, h2: &Tuple, ell2: u32, n_max: u64, r: f64) -> Result<CorrelationReport> {
    check_gpy_params(h1, ell1, h2, ell2, n_max, r, DEFAULT_MAX_ORDER)?;
    let w1 = gpy_weight_interval(h1, ell1, 0, n_max, r, None)?.values;
    let w2 = gpy_weight_interval(h2, ell2, 0, n_max, r, None)?.values;
    let s = sum_over(0, n_max, |n| w1[(n - 1) as usize] * w2[(n - 1) as usize]);
    let params = CorrelationParams {
        tuple1: Some(h1.clone()),
        ell1: Some(ell1),
        tuple2: Some(h2.clone()),
        ell2: Some(ell2),
        ..Default::default()
    };
    Ok(CorrelationReport::new(CorrelationKind::GpyPair, n_max, Some(r), params, Measurement::new("gpy*gpy", s, None)))
}

/// Σ_{n ≤ N} Λ_R(n; H1, ℓ1) Λ_R(n; H2, ℓ2) θ(n + h0), tagged with the
/// position of `h0` relative to the tuples.
pub fn corr_gpy_theta(
    h1: &Tuple,
    ell1: u32,
    h2: &Tuple,
    ell2: u32,
    h0: i64,
    n_max: u64,
    r: f64,
) -> Result<CorrelationReport> {
    check_gpy_params(h1, ell1, h2, ell2, n_max, r, DEFAULT_MAX_ORDER)?;
    let w1 = gpy_weight_interval(h1, ell1, 0, n_max, r, None)?.values;
    let w2 = gpy_weight_interval(h2, ell2, 0, n_max, r, None)?.values;
    let top = (n_max as i64 + h0).max(1) as u64;
    let theta = theta_interval(0, top);
    let s = sum_over(0, n_max, |n| {
        let m = n as i64 + h0;
        if m < 1 {
            return 0.0;
        }
        w1[(n - 1) as usize] * w2[(n - 1) as usize] * theta[(m - 1) as usize]
    });
    let case = ThetaCase::classify(h1, h2, h0);
    let params = CorrelationParams {
        tuple1: Some(h1.clone()),
        ell1: Some(ell1),
        tuple2: Some(h2.clone()),
        ell2: Some(ell2),
        h0: Some(h0),
        case: Some(case),
        ..Default::default()
    };
    Ok(CorrelationReport::new(
        CorrelationKind::GpyTheta,
        n_max,
        Some(r),
        params,
        Measurement::new("gpy*gpy*theta", s, None),
    ))
}

/// Σ_{n ≤ N} Λ(n+h_1)⋯Λ(n+h_k) against 𝔖(H)·N, plus the count of `n ≤ N`
/// with every `n + h_i` prime against 𝔖(H)·Σ_{2<n≤N} (log n)^{−k}.
pub fn hardy_littlewood_count(h: &Tuple, n_max: u64) -> Result<CorrelationReport> {
    if n_max < 10 {
        return Err(Error::invalid("N", "need N >= 10"));
    }
    let hi = *h.offsets().last().unwrap();
    let lo = h.offsets()[0];
    let top = (n_max as i64 + hi).max(1) as u64;
    let lam = von_mangoldt_interval(0, top);
    let prime = prime_flags(0, top);
    let offsets = h.offsets();
    let first = if lo < 0 { lo.unsigned_abs() } else { 0 };
    let [s_lam, s_count] = sums_over(first, n_max, |n| {
        let mut prod = 1.0;
        let mut all_prime = true;
        for &o in offsets {
            let i = (n as i64 + o - 1) as usize;
            prod *= lam[i];
            all_prime &= prime[i];
        }
        [prod, if all_prime { 1.0 } else { 0.0 }]
    });
    let ss = singular_series(h, PREDICTION_TOL)?.value;
    let k = h.k() as i32;
    let density = sum_over(2, n_max, |n| (n as f64).ln().powi(-k));
    let params = CorrelationParams { tuple1: Some(h.clone()), singular_series: Some(ss), ..Default::default() };
    let mut rep = CorrelationReport::new(
        CorrelationKind::HardyLittlewood,
        n_max,
        None,
        params,
        Measurement::new("prod_lambda", s_lam, Some(ss * n_max as f64)),
    );
    rep.secondary.push(Measurement::new("prime_tuple_count", s_count, Some(ss * density)));
    Ok(rep)
}

/// Window length `round(λ log N)` and the realized λ̂ = h / log N.
pub fn window_for(n_max: u64, lambda: f64) -> (u64, f64) {
    let log_n = (n_max as f64).ln();
    let h = (lambda * log_n).round() as u64;
    (h, h as f64 / log_n)
}

/// Σ_{N < n ≤ 2N} (ψ(n+h) − ψ(n))² with `h = round(λ log N)`, against
/// (λ̂ + λ̂²)·N·(log N)².
pub fn second_moment(n_max: u64, lambda: f64) -> Result<CorrelationReport> {
    if !(lambda > 0.0 && lambda <= 10.0) {
        return Err(Error::invalid("lambda", format!("need 0 < lambda <= 10, got {lambda}")));
    }
    if n_max < 2 {
        return Err(Error::invalid("N", "need N >= 2"));
    }
    let (h, lambda_hat) = window_for(n_max, lambda);
    let log_n = (n_max as f64).ln();
    let nf = n_max as f64;
    let params = CorrelationParams { lambda: Some(lambda), lambda_hat: Some(lambda_hat), h: Some(h), ..Default::default() };
    let pred = (lambda_hat + lambda_hat * lambda_hat) * nf * log_n * log_n;
    let (second, first) = if h == 0 {
        (0.0, 0.0)
    } else {
        let lam = von_mangoldt_interval(n_max, 2 * n_max + h);
        let [s2, s1] = sums_over(n_max, 2 * n_max, |n| {
            let w = window(&lam, (n - n_max) as usize, h as usize);
            [w * w, w]
        });
        (s2, s1)
    };
    let mut rep = CorrelationReport::new(
        CorrelationKind::SecondMoment,
        n_max,
        None,
        params,
        Measurement::new("second_moment", second, Some(pred)),
    );
    rep.secondary.push(Measurement::new("first_moment", first, Some(h as f64 * nf)));
    Ok(rep)
}

/// Σ of `table[i .. i+h]`, i.e. the values at `n+1 ..= n+h` when
/// `table[0]` holds `n+1` for `i = 0`.
pub(crate) fn window(table: &[f64], i: usize, h: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in &table[i..i + h] {
        acc.add(x);
    }
    acc.value()
}
