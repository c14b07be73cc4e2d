use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tuplesieve::divisor_sums::LinearForm;
use tuplesieve::tuples::Tuple;

#[derive(Debug, Parser)]
#[command(
    name = "tuplesieve",
    version,
    about = "Prime-gap experiments: admissible tuples, singular series, \
             truncated divisor sums, correlations and positivity detectors",
    args_override_self = true
)]
pub struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout; the manifest goes to <out>.manifest.json.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Experiment config file (JSON). Command-line flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Memory cap such as 512M or 4G; overrides TUPLESIEVE_MEM_CAP.
    #[arg(long = "mem-cap", global = true)]
    pub mem_cap: Option<String>,
    /// Wall-clock cap in seconds; exceeding it exits with status 3.
    #[arg(long = "time-cap", global = true)]
    pub time_cap: Option<f64>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Admissible tuples and singular series.
    #[command(subcommand)]
    Tuples(TuplesCmd),
    /// Truncated divisor-sum weight tables.
    #[command(subcommand)]
    Sums(SumsCmd),
    /// Correlation sums of truncated divisor sums against their main terms.
    #[command(subcommand)]
    Corr(CorrCmd),
    /// Weighted positivity forms that detect primes in short intervals and tuples.
    #[command(subcommand)]
    Detect(DetectCmd),
    /// Primes in arithmetic progressions.
    #[command(subcommand)]
    Dist(DistCmd),
    /// Products of two distinct primes.
    #[command(subcommand)]
    E2(E2Cmd),
}

#[derive(Debug, Subcommand)]
pub enum TuplesCmd {
    /// Narrowest admissible k-tuple by exhaustive search with residue pruning.
    Narrowest {
        #[arg(long)]
        k: usize,
        /// Largest diameter to search.
        #[arg(long = "max-diameter", default_value_t = 10_000)]
        max_diameter: u64,
    },
    /// Admissibility test: ν_p(H) < p for every prime p.
    Admissible {
        #[arg(long)]
        tuple: Tuple,
    },
    /// Singular series 𝔖(H) = Π_p (1 − ν_p(H)/p)(1 − 1/p)^{−k} with a certified tail bound.
    Singular {
        #[arg(long)]
        tuple: Tuple,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Gallagher average Σ 𝔖(H) over k-subsets of [1, h], against h^k.
    Gallagher {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        h: u64,
    },
    /// Residue count ν_p(H).
    Residues {
        #[arg(long)]
        tuple: Tuple,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Range {
    /// Table covers start < n <= end.
    #[arg(long, default_value_t = 0, value_parser = parse_count)]
    pub start: u64,
    #[arg(long, value_parser = parse_count)]
    pub end: u64,
    /// Truncation level R.
    #[arg(long = "R")]
    pub r: f64,
    /// Write the little-endian binary dump instead of JSON/CSV (needs --out).
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Subcommand)]
pub enum SumsCmd {
    /// Λ_R(n) = Σ_{d|n, d≤R} μ(d) log(R/d).
    Lambda {
        #[command(flatten)]
        range: Range,
    },
    /// Selberg-type λ_R(n) = Σ_{r≤R} μ²(r)/φ(r) Σ_{d|(r,n)} d μ(d).
    LambdaLower {
        #[command(flatten)]
        range: Range,
    },
    /// Λ_R(n; H, ℓ) = (1/(k+ℓ)!) Σ_{d|P_H(n), d≤R} μ(d) log^{k+ℓ}(R/d).
    Gpy {
        #[command(flatten)]
        range: Range,
        #[arg(long)]
        tuple: Tuple,
        #[arg(long, default_value_t = 0)]
        ell: u32,
        /// Zero n whose P_H(n) has a prime factor p <= w.
        #[arg(long)]
        restrict: Option<u64>,
    },
    /// Selberg weight Σ_{d|P_H(n), d≤R} μ(d)(log(R/d)/log R)^{k+1}.
    Selberg {
        #[command(flatten)]
        range: Range,
        #[arg(long)]
        tuple: Tuple,
    },
    /// Moment weight ψ_R^{(k)}(n, h): Σ over vectors in [1,h]^k of (log R)^{k−|set|} Π Λ_R(n+h').
    Moment {
        #[command(flatten)]
        range: Range,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        h: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Sweep {
    /// One or more N (comma separated; 1e6 and 10^6 accepted).
    #[arg(long = "N", value_delimiter = ',', value_parser = parse_count, required = true)]
    pub n: Vec<u64>,
    /// R = N^theta, one or more (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "0.25", conflicts_with = "r")]
    pub theta: Vec<f64>,
    /// Explicit truncation level R (overrides theta).
    #[arg(long = "R")]
    pub r: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CorrCmd {
    /// Σ_{n≤N} Λ_R(n)Λ_R(n+j) and Σ Λ(n)Λ_R(n+j) against 𝔖({0,j})·N.
    Pair {
        #[command(flatten)]
        sweep: Sweep,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        j: i64,
    },
    /// Σ_{n≤N} Λ_R(n)² and Σ Λ(n)Λ_R(n) against N log R.
    #[command(name = "self")]
    SelfCorr {
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Σ_{n≤N} Λ_R(n; H1, ℓ1) Λ_R(n; H2, ℓ2).
    GpyPair {
        #[command(flatten)]
        sweep: Sweep,
        #[arg(long)]
        tuple1: Tuple,
        #[arg(long, default_value_t = 0)]
        ell1: u32,
        #[arg(long)]
        tuple2: Tuple,
        #[arg(long, default_value_t = 0)]
        ell2: u32,
    },
    /// Σ_{n≤N} Λ_R(n; H1, ℓ1) Λ_R(n; H2, ℓ2) θ(n + h0).
    GpyTheta {
        #[command(flatten)]
        sweep: Sweep,
        #[arg(long)]
        tuple1: Tuple,
        #[arg(long, default_value_t = 0)]
        ell1: u32,
        #[arg(long)]
        tuple2: Tuple,
        #[arg(long, default_value_t = 0)]
        ell2: u32,
        #[arg(long, allow_hyphen_values = true)]
        h0: i64,
    },
    /// Σ_{n≤N} Π Λ(n + h_i) against the Hardy–Littlewood prediction 𝔖(H)·N.
    Hl {
        #[arg(long = "N", value_delimiter = ',', value_parser = parse_count, required = true)]
        n: Vec<u64>,
        #[arg(long)]
        tuple: Tuple,
    },
    /// Σ_{N<n≤2N} (ψ(n+h) − ψ(n))² against (λ + λ²)·N(log N)², h = round(λ log N).
    SecondMoment {
        #[arg(long = "N", value_delimiter = ',', value_parser = parse_count, required = true)]
        n: Vec<u64>,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Window {
    #[arg(long = "N", value_parser = parse_count)]
    pub n: u64,
    /// h = round(lambda · log N).
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// R = N^theta.
    #[arg(long, default_value_t = 0.25, conflicts_with = "r")]
    pub theta: f64,
    #[arg(long = "R")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    /// Most witnesses to collect.
    #[arg(long = "witness-cap", default_value_t = tuplesieve::detector::DEFAULT_WITNESS_CAP)]
    pub witness_cap: usize,
    /// Also write witnesses as CSV (n, event, verified).
    #[arg(long)]
    pub witnesses: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DetectCmd {
    /// Σ_{N<n≤2N} (ψ(n,h) − ψ_R(n,h))² ≥ 0 with its cross and diagonal pieces.
    FirstMoment {
        #[command(flatten)]
        window: Window,
    },
    /// Σ_{N<n≤2N} (ψ(n,h) − ρ log N)(ψ_R(n,h) − C)².
    Mollified {
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        rho: f64,
        /// A number, or "mean" for the average of ψ_R(n,h).
        #[arg(long = "C", default_value = "mean")]
        c: String,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// Σ_{N<n≤2N} (Σ_{1≤h0≤h} θ(n+h0) − r log 3N)(Σ_{H⊂[1,h], |H|=k} Λ_R(n; H, ℓ))².
    Gpy {
        #[arg(long = "N", value_parser = parse_count)]
        n: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, default_value_t = 0.25, conflicts_with = "big_r")]
        theta: f64,
        #[arg(long = "R")]
        big_r: Option<f64>,
        #[arg(long = "max-tuples", default_value_t = tuplesieve::detector::DEFAULT_MAX_TUPLES)]
        max_tuples: u64,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// Σ_{N<n≤2N} (Σ_i Λ(n+h_i) − r log 3N) Λ_R(n; H, ℓ)² for a single tuple.
    Gs {
        #[arg(long)]
        tuple: Tuple,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long = "N", value_parser = parse_count)]
        n: u64,
        #[arg(long, default_value_t = 0.25, conflicts_with = "big_r")]
        theta: f64,
        #[arg(long = "R")]
        big_r: Option<f64>,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// Q = Σ_{n≤x} (1 − ρ Σ_i τ(a_i n + b_i))(Σ_{d|Π, d≤R} λ_d)² with Selberg λ_d.
    Heathbrown {
        /// Linear forms a,b separated by ':' as in 1,0:1,2.
        #[arg(long, value_parser = parse_pairs)]
        pairs: Pairs,
        #[arg(long)]
        rho: f64,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        /// Default R = x^{1/4}.
        #[arg(long = "R")]
        r: Option<f64>,
        #[command(flatten)]
        witness: WitnessArgs,
    },
    /// Normalized prime gaps (p_{n+r} − p_n)/log p_n up to a limit.
    Gaps {
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Threshold for the proportion of small normalized gaps.
        #[arg(long, default_value_t = 0.25)]
        c: f64,
    },
    /// Σ_{N<n≤2N} (ψ(n,h) − ρ log N)(Σ_j a_j ψ_R^{(j)}(n,h)(log R)^{k−j})² with given a_j.
    MomentForm {
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        rho: f64,
        /// a_0,...,a_k (k <= 3).
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        coeffs: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum DistCmd {
    /// Θ(N; q, a) = Σ_{p≤N, p≡a (mod q)} log p.
    Theta {
        #[arg(long = "N", value_parser = parse_count)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
    },
    /// Σ_{q≤Q} max_{(a,q)=1} |Θ(N; q, a) − N/φ(q)| at Q = floor(N^α), scaled by (log N)^A / N.
    Probe {
        #[arg(long = "N", value_parser = parse_count)]
        n: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long = "A", default_value_t = 1.0)]
        a: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum E2Cmd {
    /// Histogram of q_{n+r} − q_n over E₂-numbers q_n ≤ limit.
    Gaps {
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pairs(pub Vec<LinearForm>);

/// Accepts 1000000, 1e6 and 10^6.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v = if let Some((b, e)) = s.split_once('^') {
        let b: f64 = b.parse().map_err(|_| format!("bad integer '{s}'"))?;
        let e: f64 = e.parse().map_err(|_| format!("bad integer '{s}'"))?;
        b.powf(e).round()
    } else {
        s.parse::<f64>().map_err(|_| format!("bad integer '{s}'"))?
    };
    if !(v >= 0.0) || v.fract() != 0.0 || v > 1.8e19 {
        return Err(format!("'{s}' is not a nonnegative integer"));
    }
    Ok(v as u64)
}

pub fn parse_pairs(s: &str) -> Result<Pairs, String> {
    s.split(':')
        .map(|p| {
            let (a, b) = p.split_once(',').ok_or_else(|| format!("pair '{p}' is not a,b"))?;
            let a = a.trim().parse().map_err(|_| format!("bad a in '{p}'"))?;
            let b = b.trim().parse().map_err(|_| format!("bad b in '{p}'"))?;
            Ok(LinearForm { a, b })
        })
        .collect::<Result<Vec<_>, String>>()
        .map(Pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn counts_and_pairs() {
        assert_eq!(parse_count("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_count("10^4").unwrap(), 10_000);
        assert_eq!(parse_count("77").unwrap(), 77);
        assert!(parse_count("1.5").is_err());
        assert_eq!(parse_pairs("1,0:1,2").unwrap().0, vec![LinearForm { a: 1, b: 0 }, LinearForm { a: 1, b: 2 }]);
        assert!(parse_pairs("1;0").is_err());
    }
}
