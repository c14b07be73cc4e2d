use super::{collect_witnesses, primes_in_window, DetectorForm, DetectorOptions, DetectorParams, DetectorReport};
use crate::arith::{is_prime, theta_interval, von_mangoldt_interval};
use crate::budget::Budget;
use crate::correlations::window;
use crate::divisor_sums::gpy_weight_interval_with;
use crate::error::{Error, Result};
use crate::par::sums_over;
use crate::tuples::Tuple;

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `f` on every k-subset of `1..=h` in lexicographic order.
fn for_each_subset<F: FnMut(&[i64]) -> Result<()>>(h: u64, k: usize, mut f: F) -> Result<()> {
    let h = h as i64;
    let mut cur: Vec<i64> = (1..=k as i64).collect();
    loop {
        f(&cur)?;
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if cur[i] < h - (k - 1 - i) as i64 {
                break;
            }
            if i == 0 {
                return Ok(());
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Σ_{N<n≤2N} (Σ_{1≤h0≤h} θ(n+h0) − r log 3N) (Σ_H Λ_R(n; H, ℓ))² with the
/// inner sum over all k-subsets `H` of `[1, h]`.
pub fn gpy_form(
    n_max: u64,
    h: u64,
    k: u64,
    ell: u32,
    r: u64,
    big_r: f64,
    opts: &DetectorOptions,
) -> Result<DetectorReport> {
    gpy_form_with(n_max, h, k, ell, r, big_r, opts, &Budget::from_env())
}

#[allow(clippy::too_many_arguments)]
pub fn gpy_form_with(
    n_max: u64,
    h: u64,
    k: u64,
    ell: u32,
    r: u64,
    big_r: f64,
    opts: &DetectorOptions,
    budget: &Budget,
) -> Result<DetectorReport> {
    if n_max < 2 {
        return Err(Error::invalid("N", "need N >= 2"));
    }
    if k < 1 || k > h {
        return Err(Error::invalid("k", format!("need 1 <= k <= h, got k={k}, h={h}")));
    }
    if !(big_r >= 1.0) || big_r * big_r > n_max as f64 * (1.0 + 1e-12) {
        return Err(Error::invalid("R", format!("need 1 <= R <= N^(1/2), got {big_r}")));
    }
    let tuples = binomial(h, k);
    if tuples > opts.max_tuples {
        return Err(Error::Resource { what: "tuple sets in GPY sum", needed: tuples, cap: opts.max_tuples });
    }
    budget.check_cost("GPY sum over tuple sets", tuples.saturating_mul(n_max))?;
    budget.check_mem("GPY weight tables", n_max.saturating_mul(16))?;

    let mut weight = vec![0.0f64; n_max as usize];
    for_each_subset(h, k as usize, |offsets| {
        let t = Tuple::new(offsets.to_vec())?;
        let table = gpy_weight_interval_with(&t, ell, n_max, 2 * n_max, big_r, None, budget)?;
        for (w, v) in weight.iter_mut().zip(&table.values) {
            *w += v;
        }
        Ok(())
    })?;
    let theta = theta_interval(n_max, 2 * n_max + h);
    let penalty = r as f64 * (3.0 * n_max as f64).ln();
    let [total, prime_part, mass] = sums_over(0, n_max, |i| {
        let i = (i - 1) as usize;
        let w2 = weight[i] * weight[i];
        let t = window(&theta, i + 1, h as usize);
        [(t - penalty) * w2, t * w2, w2]
    });
    let params = DetectorParams {
        n: Some(n_max),
        h: Some(h),
        k: Some(k),
        ell: Some(ell),
        r: Some(r),
        big_r: Some(big_r),
        ..Default::default()
    };
    let mut rep = DetectorReport::new(DetectorForm::GpySum, params, total);
    rep.push("prime_part", prime_part, 1.0);
    rep.push("weight_mass", mass, -penalty);
    rep.push("tuple_sets", tuples as f64, 0.0);
    if rep.positive {
        let hh = h as usize;
        let need = r + 1;
        let cands = (0..n_max as usize)
            .filter(|&i| theta[i + 1..=i + hh].iter().filter(|&&x| x > 0.0).count() as u64 >= need)
            .map(|i| (n_max + 1 + i as u64, format!("at least {need} primes in (n, n+{h}]")));
        let (wit, cut) = collect_witnesses(cands, opts.witness_cap, |n| primes_in_window(n, h) >= need)?;
        rep.witnesses = wit;
        rep.witnesses_truncated = cut;
    }
    Ok(rep)
}

/// Σ_{N<n≤2N} (Σ_i Λ(n+h_i) − r log 3N) Λ_R(n; H, ℓ)² for one tuple.
pub fn gs_single_tuple(
    h: &Tuple,
    ell: u32,
    r: u64,
    n_max: u64,
    big_r: f64,
    opts: &DetectorOptions,
) -> Result<DetectorReport> {
    if n_max < 1 {
        return Err(Error::invalid("N", "need N >= 1"));
    }
    let off = h.offsets();
    let (lo, hi) = (off[0], off[off.len() - 1]);
    if (n_max as i64) + lo < 0 {
        return Err(Error::invalid("tuple", format!("n + {lo} is not positive for n just above N={n_max}")));
    }
    let weights = gpy_weight_interval_with(h, ell, n_max, 2 * n_max, big_r, None, &Budget::from_env())?;
    let base = (n_max as i64 + lo) as u64;
    let lam = von_mangoldt_interval(base, (2 * n_max as i64 + hi) as u64);
    let idx = |i: usize, hi_: i64| (i as i64 + hi_ - lo) as usize;
    let penalty = r as f64 * (3.0 * n_max as f64).ln();
    let [total, prime_part, mass] = sums_over(0, n_max, |i| {
        let i = (i - 1) as usize;
        let s: f64 = off.iter().map(|&o| lam[idx(i, o)]).sum();
        let w2 = weights.values[i] * weights.values[i];
        [(s - penalty) * w2, s * w2, w2]
    });
    let params = DetectorParams {
        n: Some(n_max),
        tuple: Some(h.clone()),
        ell: Some(ell),
        r: Some(r),
        big_r: Some(big_r),
        k: Some(h.k() as u64),
        ..Default::default()
    };
    let mut rep = DetectorReport::new(DetectorForm::GsSingle, params, total);
    rep.push("prime_part", prime_part, 1.0);
    rep.push("weight_mass", mass, -penalty);
    if !h.is_admissible() {
        rep.warnings.push(format!("tuple {h} is not admissible"));
    }
    if rep.positive {
        let need = r + 1;
        // Λ > 0 also on prime powers; count primes only.
        let count_primes = |n: u64| off.iter().filter(|&&o| is_prime((n as i64 + o) as u64)).count() as u64;
        let cands = (0..n_max as usize)
            .filter(|&i| off.iter().filter(|&&o| lam[idx(i, o)] > 0.0).count() as u64 >= need)
            .map(|i| n_max + 1 + i as u64)
            .filter(|&n| count_primes(n) >= need)
            .map(|n| (n, format!("at least {need} of n + h_i prime")));
        let (wit, cut) = collect_witnesses(cands, opts.witness_cap, |n| {
            off.iter()
                .filter(|&&o| {
                    let m = (n as i64 + o) as u64;
                    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| m % d != 0)
                })
                .count() as u64
                >= need
        })?;
        rep.witnesses = wit;
        rep.witnesses_truncated = cut;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| {
            seen.push(s.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(50, 4), 230300);
        let mut n = 0;
        for_each_subset(3, 3, |_| {
            n += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(n, 1);
    }
}
