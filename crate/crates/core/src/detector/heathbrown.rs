use super::{collect_witnesses, DetectorForm, DetectorOptions, DetectorParams, DetectorReport};
use crate::arith::{divisor_count, factorize, MobiusTable};
use crate::budget::Budget;
use crate::divisor_sums::{gpy_weight_interval_with, selberg_forms_values, LinearForm};
use crate::error::{Error, Result};
use crate::par::sums_over;
use crate::tuples::Tuple;

/// Largest integer `t` with `t < 1/ρ`. When 1/ρ is within 1e-9 of an
/// integer it is treated as that integer, so ρ = 1/14 gives 13. ρ = 0
/// puts no bound on the divisor counts.
pub fn tau_threshold(rho: f64) -> Result<u64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::invalid("rho", "need rho >= 0"));
    }
    if rho == 0.0 {
        return Ok(u64::MAX);
    }
    let inv = 1.0 / rho;
    let near = inv.round();
    let t = if (inv - near).abs() <= 1e-9 { near - 1.0 } else { inv.ceil() - 1.0 };
    Ok(t.max(0.0) as u64)
}

fn check_pairs(pairs: &[LinearForm]) -> Result<()> {
    if pairs.is_empty() {
        return Err(Error::invalid("pairs", "need at least one linear form"));
    }
    for (i, f) in pairs.iter().enumerate() {
        if f.a < 1 {
            return Err(Error::invalid("pairs", format!("form {i} has a = 0")));
        }
        if f.eval(1) < 1 {
            return Err(Error::invalid("pairs", format!("form {i}: a + b = {} < 1", f.eval(1))));
        }
        for g in &pairs[..i] {
            if f.a as i128 * g.b as i128 == g.a as i128 * f.b as i128 {
                return Err(Error::invalid("pairs", format!("forms ({},{}) and ({},{}) are proportional", g.a, g.b, f.a, f.b)));
            }
        }
    }
    Ok(())
}

fn tau_with(table: &MobiusTable, m: u64) -> u64 {
    table.factorize(m).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Q = Σ_{n≤x} (1 − ρ Σ_i τ(a_i n + b_i)) (Σ_{d | Π(n), d ≤ R} λ_d)², split into
/// Q₁ = Σ w² and Q₂ = Σ_i Σ_n τ(a_i n + b_i) w², with Selberg weights
/// λ_d = μ(d)(log(R/d)/log R)^{k+1}.
pub fn heathbrown_q(pairs: &[LinearForm], rho: f64, x: u64, r: f64, opts: &DetectorOptions) -> Result<DetectorReport> {
    check_pairs(pairs)?;
    let t_max = tau_threshold(rho)?;
    if x < 1 {
        return Err(Error::invalid("x", "need x >= 1"));
    }
    if !(r > 1.0) {
        return Err(Error::invalid("R", "need R > 1"));
    }
    let budget = Budget::from_env();
    let k = pairs.len();
    let w = selberg_forms_values(pairs, 0, x, r, &budget)?;
    let top = pairs.iter().map(|f| f.eval(x)).max().unwrap_or(1);
    let top = u64::try_from(top).map_err(|_| Error::invalid("pairs", "form values overflow"))?;
    let table = MobiusTable::sieve_with_budget(top, &budget)?;
    let tau_sum = |n: u64| -> u64 { pairs.iter().map(|f| tau_with(&table, f.eval(n) as u64)).sum() };
    let [q, q1, q2] = sums_over(0, x, |n| {
        let w2 = w[(n - 1) as usize].powi(2);
        let t = tau_sum(n) as f64;
        [(1.0 - rho * t) * w2, w2, t * w2]
    });
    let params = DetectorParams {
        x: Some(x),
        big_r: Some(r),
        rho: Some(rho),
        k: Some(k as u64),
        pairs: Some(pairs.to_vec()),
        ..Default::default()
    };
    let mut rep = DetectorReport::new(DetectorForm::Heathbrown, params, q);
    rep.push("Q1", q1, 1.0);
    rep.push("Q2", q2, -rho);
    rep.push("tau_sum_threshold", t_max as f64, 0.0);

    if pairs.iter().all(|f| f.a == 1) {
        let h = Tuple::new(pairs.iter().map(|f| f.b).collect())?;
        let g = gpy_weight_interval_with(&h, 1, 0, x, r, None, &budget)?;
        let log_r = r.ln();
        let fact: f64 = (1..=k as u64 + 1).map(|i| i as f64).product();
        let scale = (fact / log_r.powi(k as i32 + 1)).powi(2);
        let via_gpy = scale * crate::sum::csum(g.values.iter().map(|v| v * v));
        rep.push("Q1_via_gpy_weights", via_gpy, 0.0);
        rep.push("Q1_identity_relative_error", ((via_gpy - q1) / q1).abs(), 0.0);
    }

    if rep.positive {
        let cands = (1..=x)
            .map(|n| (n, tau_sum(n)))
            .filter(|&(_, t)| t <= t_max)
            .map(|(n, t)| (n, format!("sum of divisor counts = {t}")));
        let (wit, cut) = collect_witnesses(cands, opts.witness_cap, |n| {
            let direct: u64 = pairs.iter().map(|f| divisor_count(f.eval(n) as u64)).sum();
            direct <= t_max
        })?;
        if k == 2 && !wit.is_empty() {
            let omega = |m: u64| factorize(m).len();
            let big_omega = |m: u64| factorize(m).iter().map(|&(_, e)| e as usize).sum::<usize>();
            let holds = |count: &dyn Fn(u64) -> usize| {
                wit.iter().all(|wn| {
                    let a = count(pairs[0].eval(wn.n) as u64);
                    let b = count(pairs[1].eval(wn.n) as u64);
                    a.min(b) <= 2 && a.max(b) <= 3
                })
            };
            rep.flag("two_forms_at_most_2_and_3_distinct_primes", holds(&omega));
            rep.flag("two_forms_at_most_2_and_3_primes_with_multiplicity", holds(&big_omega));
        }
        rep.witnesses = wit;
        rep.witnesses_truncated = cut;
    }
    Ok(rep)
}
