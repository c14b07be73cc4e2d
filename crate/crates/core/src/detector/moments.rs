use super::{collect_witnesses, DetectorForm, DetectorOptions, DetectorParams, DetectorReport};
use crate::arith::{von_mangoldt, von_mangoldt_interval};
use crate::correlations::{window, window_for};
use crate::divisor_sums::{lambda_r_interval, moment_values, MAX_MOMENT_ORDER};
use crate::error::{Error, Result};
use crate::par::sums_over;
use crate::tuples::gallagher_average;

/// ψ(n, h) and ψ_R(n, h) for `N < n <= 2N`.
struct Windows {
    psi: Vec<f64>,
    psi_r: Vec<f64>,
}

fn windows(n_max: u64, h: u64, r: f64) -> Result<Windows> {
    let lam = von_mangoldt_interval(n_max, 2 * n_max + h);
    let lam_r = lambda_r_interval(n_max, 2 * n_max + h, r)?.values;
    let len = n_max as usize;
    let hh = h as usize;
    Ok(Windows {
        psi: (0..len).map(|i| window(&lam, i + 1, hh)).collect(),
        psi_r: (0..len).map(|i| window(&lam_r, i + 1, hh)).collect(),
    })
}

fn check_window(n_max: u64, lambda: f64) -> Result<(u64, f64)> {
    if n_max < 2 {
        return Err(Error::invalid("N", "need N >= 2"));
    }
    if !(lambda > 0.0) {
        return Err(Error::invalid("lambda", "need lambda > 0"));
    }
    let (h, lambda_hat) = window_for(n_max, lambda);
    if h < 1 {
        return Err(Error::invalid("lambda", format!("round(lambda log N) = 0 for lambda={lambda}, N={n_max}")));
    }
    Ok((h, lambda_hat))
}

/// Σ_{N<n≤2N} (ψ(n,h) − ψ_R(n,h))² ≥ 0 expanded into its diagonal and cross
/// pieces, with the lower bound (λ̂/2 + λ̂²)N(log N)² and the single-prime
/// ceiling λ̂N(log N)².
pub fn first_moment_gap(n_max: u64, lambda: f64, r: f64) -> Result<DetectorReport> {
    let (h, lambda_hat) = check_window(n_max, lambda)?;
    if !(r >= 1.0) || r * r > n_max as f64 * (1.0 + 1e-12) {
        return Err(Error::invalid("R", format!("need 1 <= R <= N^(1/2), got {r}")));
    }
    let w = windows(n_max, h, r)?;
    let log_n = (n_max as f64).ln();
    let [a, b, c, total, first] = sums_over(0, n_max, |i| {
        let i = (i - 1) as usize;
        let (p, q) = (w.psi[i], w.psi_r[i]);
        let d = p - q;
        [p * p, p * q, q * q, d * d, p]
    });
    let nf = n_max as f64;
    let params = DetectorParams {
        n: Some(n_max),
        h: Some(h),
        lambda: Some(lambda),
        lambda_hat: Some(lambda_hat),
        big_r: Some(r),
        ..Default::default()
    };
    let mut rep = DetectorReport::new(DetectorForm::FirstMoment, params, total);
    rep.push("sum_psi_sq", a, 1.0);
    rep.push("sum_psi_psiR", b, -2.0);
    rep.push("sum_psiR_sq", c, 1.0);
    // Both cross and diagonal sums are predicted as N(h log R + Σ_{i≠j} 𝔖({i, j})).
    let pair_sum = if h >= 2 { gallagher_average(2, h)?.ordered_sum } else { 0.0 };
    let predicted = nf * (h as f64 * r.ln().max(0.0) + pair_sum);
    rep.push("predicted_cross_and_diagonal", predicted, 0.0);
    let lower = (lambda_hat / 2.0 + lambda_hat * lambda_hat) * nf * log_n * log_n;
    let ceiling = lambda_hat * nf * log_n * log_n;
    rep.push("lower_bound", lower, 0.0);
    rep.push("single_prime_ceiling", ceiling, 0.0);
    rep.push("log_N_times_sum_psi", log_n * first, 0.0);
    rep.flag("contradiction_threshold_crossed", lower > ceiling);
    rep.flag("second_moment_exceeds_single_prime_bound", a > log_n * first);
    rep.positive = total >= 0.0;
    Ok(rep)
}

/// C = mean of ψ_R(n, h) over `N < n <= 2N`.
pub fn mean_psi_r(n_max: u64, lambda: f64, r: f64) -> Result<f64> {
    let (h, _) = check_window(n_max, lambda)?;
    let lam_r = lambda_r_interval(n_max, 2 * n_max + h, r)?.values;
    let [s] = sums_over(0, n_max, |i| [window(&lam_r, i as usize, h as usize)]);
    Ok(s / n_max as f64)
}

/// Σ_{N<n≤2N} (ψ(n,h) − ρ log N)(ψ_R(n,h) − C)².
pub fn mollified_moment(
    n_max: u64,
    lambda: f64,
    r: f64,
    rho: f64,
    c: f64,
    opts: &DetectorOptions,
) -> Result<DetectorReport> {
    let (h, lambda_hat) = check_window(n_max, lambda)?;
    if !(rho >= 0.0) {
        return Err(Error::invalid("rho", "need rho >= 0"));
    }
    if !(c >= 0.0) {
        return Err(Error::invalid("C", "need C >= 0"));
    }
    let w = windows(n_max, h, r)?;
    let log_n = (n_max as f64).ln();
    let [total, prime_part, mass] = sums_over(0, n_max, |i| {
        let i = (i - 1) as usize;
        let q = (w.psi_r[i] - c).powi(2);
        [(w.psi[i] - rho * log_n) * q, w.psi[i] * q, q]
    });
    let params = DetectorParams {
        n: Some(n_max),
        h: Some(h),
        lambda: Some(lambda),
        lambda_hat: Some(lambda_hat),
        big_r: Some(r),
        rho: Some(rho),
        c: Some(c),
        ..Default::default()
    };
    let mut rep = DetectorReport::new(DetectorForm::Mollified, params, total);
    rep.push("prime_part", prime_part, 1.0);
    rep.push("weight_mass", mass, -rho * log_n);
    if rep.positive && rho > 1.0 {
        let threshold = 2.0 * log_n;
        let cands = (0..n_max as usize)
            .filter(|&i| w.psi[i] >= threshold)
            .map(|i| (n_max + 1 + i as u64, "psi(n,h) >= 2 log N".to_string()));
        let (wit, cut) = collect_witnesses(cands, opts.witness_cap, |n| {
            let direct: f64 = (n + 1..=n + h).map(von_mangoldt).sum();
            direct >= threshold * (1.0 - 1e-12)
        })?;
        rep.witnesses = wit;
        rep.witnesses_truncated = cut;
    }
    Ok(rep)
}

/// Σ_{N<n≤2N} (ψ(n,h) − ρ log N)(Σ_j a_j ψ_R^{(j)}(n,h) (log R)^{k−j})² with
/// user-supplied coefficients `a_0 ..= a_k`.
pub fn moment_form(n_max: u64, lambda: f64, r: f64, rho: f64, coefficients: &[f64]) -> Result<DetectorReport> {
    let (h, lambda_hat) = check_window(n_max, lambda)?;
    if coefficients.is_empty() || coefficients.len() > MAX_MOMENT_ORDER as usize + 1 {
        return Err(Error::invalid("coefficients", format!("need 1 to {} coefficients", MAX_MOMENT_ORDER + 1)));
    }
    if !(r > 1.0) {
        return Err(Error::invalid("R", "need R > 1"));
    }
    let k = coefficients.len() - 1;
    let lam = von_mangoldt_interval(n_max, 2 * n_max + h);
    let lam_r = lambda_r_interval(n_max, 2 * n_max + h, r)?.values;
    let log_r = r.ln();
    let count = n_max as usize;
    let moments: Vec<Vec<f64>> = (0..=k as u32).map(|j| moment_values(j, h, &lam_r, log_r, count)).collect();
    let log_n = (n_max as f64).ln();
    let [total, prime_part, mass] = sums_over(0, n_max, |i| {
        let i = (i - 1) as usize;
        let mut poly = 0.0;
        for (j, a) in coefficients.iter().enumerate() {
            poly += a * moments[j][i] * log_r.powi((k - j) as i32);
        }
        let psi = window(&lam, i + 1, h as usize);
        let q = poly * poly;
        [(psi - rho * log_n) * q, psi * q, q]
    });
    let params = DetectorParams {
        n: Some(n_max),
        h: Some(h),
        lambda: Some(lambda),
        lambda_hat: Some(lambda_hat),
        big_r: Some(r),
        rho: Some(rho),
        k: Some(k as u64),
        coefficients: Some(coefficients.to_vec()),
        ..Default::default()
    };
    let mut rep = DetectorReport::new(DetectorForm::MomentForm, params, total);
    rep.push("prime_part", prime_part, 1.0);
    rep.push("weight_mass", mass, -rho * log_n);
    Ok(rep)
}
