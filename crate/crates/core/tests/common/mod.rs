//! Slow, direct reference implementations used to check the library.
#![allow(dead_code)]

pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn mu(n: u64) -> i64 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn tau(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count() as u64
}

pub fn von_mangoldt(n: u64) -> f64 {
    let f = factor(n);
    if f.len() == 1 {
        (f[0].0 as f64).ln()
    } else {
        0.0
    }
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// Squarefree d <= R whose every prime factor divides some n + h.
fn tuple_divisors(n: u64, h: &[i64], r: f64) -> Vec<(u64, i64)> {
    let d_max = r.floor() as u64;
    (1..=d_max)
        .filter_map(|d| {
            let m = mu(d);
            if m == 0 {
                return None;
            }
            let ok = factor(d)
                .iter()
                .all(|&(p, _)| h.iter().any(|&o| (n as i64 + o).rem_euclid(p as i64) == 0));
            ok.then_some((d, m))
        })
        .collect()
}

pub fn lambda_r(n: u64, r: f64) -> f64 {
    (1..=r.floor() as u64)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mu(d) as f64 * (r / d as f64).ln())
        .sum()
}

/// Σ_{r ≤ R} μ²(r)/φ(r) Σ_{d | (r, n)} d μ(d).
pub fn lambda_lower(n: u64, r: f64) -> f64 {
    let mut s = 0.0;
    for q in 1..=r.floor() as u64 {
        if mu(q) == 0 {
            continue;
        }
        let g = gcd(q, n);
        let inner: i64 = (1..=g).filter(|d| g.is_multiple_of(*d)).map(|d| d as i64 * mu(d)).sum();
        s += inner as f64 / phi(q) as f64;
    }
    s
}

pub fn gpy(n: u64, h: &[i64], ell: u32, r: f64) -> f64 {
    let m = h.len() as u32 + ell;
    tuple_divisors(n, h, r)
        .into_iter()
        .map(|(d, mu)| mu as f64 * (r / d as f64).ln().powi(m as i32))
        .sum::<f64>()
        / factorial(m)
}

pub fn selberg(n: u64, h: &[i64], r: f64) -> f64 {
    let m = h.len() as i32 + 1;
    let lr = r.ln();
    tuple_divisors(n, h, r)
        .into_iter()
        .map(|(d, mu)| mu as f64 * ((r / d as f64).ln() / lr).powi(m))
        .sum()
}

/// Σ over vectors in [1, h]^k of (log R)^{k − |set|} Π_{distinct h'} Λ_R(n + h').
pub fn moment(n: u64, k: u32, h: u64, r: f64) -> f64 {
    let lr = r.ln();
    let vals: Vec<f64> = (1..=h).map(|j| lambda_r(n + j, r)).collect();
    let mut total = 0.0;
    let count = (h as usize).pow(k);
    for mut code in 0..count {
        let mut set = Vec::new();
        for _ in 0..k {
            let j = code % h as usize;
            code /= h as usize;
            if !set.contains(&j) {
                set.push(j);
            }
        }
        let prod: f64 = set.iter().map(|&j| vals[j]).product();
        total += lr.powi(k as i32 - set.len() as i32) * prod;
    }
    total
}

/// Twin pairs (p, p + 2) with p <= n.
pub fn twin_count(n: u64) -> u64 {
    let ps = primes_upto(n + 2);
    ps.windows(2).filter(|w| w[1] - w[0] == 2 && w[0] <= n).count() as u64
}

/// log of 𝔖({0, 2}) over primes up to `limit`, with a bound on the omitted tail.
///
/// Each omitted factor 1 − 1/(p−1)² has |log| <= 1.01/(p−1)², and summing over
/// odd m > limit gives at most 1.01/(2(limit − 2)).
pub fn twin_constant_log(limit: u64) -> (f64, f64) {
    let mut s = 2f64.ln();
    let mut c = 0.0;
    for p in primes_upto(limit).into_iter().skip(1) {
        let x = 1.0 / ((p - 1) as f64 * (p - 1) as f64);
        let y = (-x).ln_1p() - c;
        let t = s + y;
        c = (t - s) - y;
        s = t;
    }
    (s, 1.01 / (2.0 * (limit as f64 - 2.0)))
}

/// 𝔖(H) with exact factors up to `limit`, for checking general tuples.
pub fn singular_series_partial(h: &[i64], limit: u64) -> f64 {
    let k = h.len() as f64;
    let mut log = 0.0;
    for p in primes_upto(limit) {
        let mut seen: Vec<i64> = h.iter().map(|&x| x.rem_euclid(p as i64)).collect();
        seen.sort();
        seen.dedup();
        let nu = seen.len() as f64;
        let pf = p as f64;
        if nu >= pf {
            return 0.0;
        }
        log += (1.0 - nu / pf).ln() - k * (1.0 - 1.0 / pf).ln();
    }
    log.exp()
}

pub fn is_e2(n: u64) -> bool {
    let f = factor(n);
    f.len() == 2 && f.iter().all(|&(_, e)| e == 1)
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// |a − b| <= tol · max(|a|, |b|, scale); `scale` covers values that cancel to ~0.
pub fn close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(scale)
}

pub fn admissible_oracle(h: &[i64]) -> bool {
    primes_upto(h.len() as u64 + 1).into_iter().all(|p| {
        let mut r: Vec<i64> = h.iter().map(|x| x.rem_euclid(p as i64)).collect();
        r.sort();
        r.dedup();
        (r.len() as u64) < p
    })
}

/// Smallest diameter of an admissible k-tuple, by trying every tuple
/// {0, .., d} of each diameter in turn.
pub fn narrowest_oracle(k: usize) -> u64 {
    fn extend(cur: &mut Vec<i64>, next: i64, d: i64, need: usize) -> bool {
        if need == 0 {
            cur.push(d);
            let ok = admissible_oracle(cur);
            cur.pop();
            return ok;
        }
        for x in next..d {
            cur.push(x);
            if extend(cur, x + 1, d, need - 1) {
                return true;
            }
            cur.pop();
        }
        false
    }
    for d in (k as i64 - 1).. {
        if extend(&mut vec![0], 1, d, k - 2) {
            return d as u64;
        }
    }
    unreachable!()
}

/// Interval [lo, hi] certified to contain 𝔖({0, 2}).
///
/// The omitted factors are all below 1, so the partial product is an upper
/// bound. For the lower bound, π(t) < 1.26 t / log t gives
/// Σ_{p>L} 1/p² <= 2 ∫_L^∞ π(t)/t³ dt < 2.52 / (L log L), and each omitted
/// |log(1 − 1/(p−1)²)| is below 1.001/p² once p > 10^4.
pub fn twin_constant_certified(limit: u64) -> (f64, f64) {
    assert!(limit > 10_000);
    let (log, _) = twin_constant_log(limit);
    let l = limit as f64;
    let tail = 1.001 * 2.52 / (l * l.ln());
    ((log - tail).exp(), log.exp())
}
