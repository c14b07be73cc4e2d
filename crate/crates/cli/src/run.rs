use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use tuplesieve::correlations::{self, CorrelationReport};
use tuplesieve::detector::{self, DetectorOptions, DetectorReport};
use tuplesieve::distribution::{self, LevelProbeReport};
use tuplesieve::divisor_sums::{self, WeightTable};
use tuplesieve::tuples;
use tuplesieve::{almost_primes, Error};

use crate::args::{Command, CorrCmd, DetectCmd, DistCmd, E2Cmd, Range, SumsCmd, Sweep, TuplesCmd, Window, WitnessArgs};

/// Rows for CSV output; columns are fixed per report kind.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

pub struct Outcome {
    pub report: Value,
    pub table: Table,
    /// Replaces the JSON/CSV body when set.
    pub binary: Option<Vec<u8>>,
    pub side_files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, table: Table) -> anyhow::Result<Self> {
        Ok(Outcome { report: serde_json::to_value(report)?, table, binary: None, side_files: Vec::new() })
    }
}

fn num(x: f64) -> String {
    x.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn usage(field: &'static str, reason: &str) -> anyhow::Error {
    Error::InvalidInput { field, reason: reason.to_string() }.into()
}

pub fn run(cmd: Command, binary_target: bool) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Tuples(c) => run_tuples(c),
        Command::Sums(c) => run_sums(c, binary_target),
        Command::Corr(c) => run_corr(c),
        Command::Detect(c) => run_detect(c),
        Command::Dist(c) => run_dist(c),
        Command::E2(c) => run_e2(c),
    }
}

fn run_tuples(c: TuplesCmd) -> anyhow::Result<Outcome> {
    match c {
        TuplesCmd::Narrowest { k, max_diameter } => {
            let r = tuples::narrowest_admissible(k, max_diameter)?;
            let mut t = Table::new(&["k", "diameter", "offsets", "nodes_visited"]);
            t.row(vec![k.to_string(), r.diameter.to_string(), r.tuple.to_string(), r.nodes_visited.to_string()]);
            Outcome::new(&r, t)
        }
        TuplesCmd::Admissible { tuple } => {
            let ok = tuple.is_admissible();
            let blocking = tuples::first_blocking_prime(&tuple);
            let mut t = Table::new(&["tuple", "admissible", "blocking_prime"]);
            t.row(vec![tuple.to_string(), ok.to_string(), blocking.map(|p| p.to_string()).unwrap_or_default()]);
            Outcome::new(&json!({"tuple": tuple, "admissible": ok, "blocking_prime": blocking}), t)
        }
        TuplesCmd::Singular { tuple, tol } => {
            let v = tuples::singular_series(&tuple, tol)?;
            let mut t = Table::new(&["tuple", "value", "truncation_bound", "cutoff_prime"]);
            t.row(vec![tuple.to_string(), num(v.value), num(v.truncation_bound), v.cutoff_prime.to_string()]);
            Outcome::new(&json!({"tuple": tuple, "singular_series": v}), t)
        }
        TuplesCmd::Gallagher { k, h } => {
            let g = tuples::gallagher_average(k, h)?;
            let mut t = Table::new(&["k", "h", "ordered_sum", "set_sum", "ordered_ratio", "set_ratio", "truncation_bound"]);
            t.row(vec![
                k.to_string(),
                h.to_string(),
                num(g.ordered_sum),
                num(g.set_sum),
                num(g.ordered_ratio),
                num(g.set_ratio),
                num(g.truncation_bound),
            ]);
            Outcome::new(&g, t)
        }
        TuplesCmd::Residues { tuple, p } => {
            if !tuplesieve::arith::is_prime(p) {
                return Err(usage("p", "must be prime"));
            }
            let nu = tuple.residue_count(p);
            let mut t = Table::new(&["tuple", "p", "residue_count"]);
            t.row(vec![tuple.to_string(), p.to_string(), nu.to_string()]);
            Outcome::new(&json!({"tuple": tuple, "p": p, "residue_count": nu}), t)
        }
    }
}

fn run_sums(c: SumsCmd, binary_target: bool) -> anyhow::Result<Outcome> {
    let (range, table): (Range, WeightTable) = match c {
        SumsCmd::Lambda { range } => {
            let t = divisor_sums::lambda_r_interval(range.start, range.end, range.r)?;
            (range, t)
        }
        SumsCmd::LambdaLower { range } => {
            let t = divisor_sums::lambda_lower_r_interval(range.start, range.end, range.r)?;
            (range, t)
        }
        SumsCmd::Gpy { range, tuple, ell, restrict } => {
            let t = divisor_sums::gpy_weight_interval(&tuple, ell, range.start, range.end, range.r, restrict)?;
            (range, t)
        }
        SumsCmd::Selberg { range, tuple } => {
            let t = divisor_sums::selberg_weight_interval(&tuple, range.start, range.end, range.r)?;
            (range, t)
        }
        SumsCmd::Moment { range, k, h } => {
            let t = divisor_sums::moment_weight_interval(k, h, range.start, range.end, range.r)?;
            (range, t)
        }
    };
    let mut rows = Table::new(&["n", "value"]);
    for (n, v) in table.iter() {
        rows.row(vec![n.to_string(), format!("{v:?}")]);
    }
    let mut out = Outcome::new(&table, rows)?;
    if range.binary {
        if !binary_target {
            return Err(usage("binary", "binary output needs --out"));
        }
        let mut buf = Vec::new();
        divisor_sums::write_binary(&table, &mut buf)?;
        out.binary = Some(buf);
    }
    Ok(out)
}

fn truncation_levels(n: u64, sweep: &Sweep) -> Vec<f64> {
    match sweep.r {
        Some(r) => vec![r],
        None => sweep.theta.iter().map(|&t| (n as f64).powf(t)).collect(),
    }
}

fn correlation_table(reports: &[CorrelationReport]) -> anyhow::Result<Outcome> {
    let mut t = Table::new(&["kind", "N", "R", "label", "empirical", "predicted_main", "ratio"]);
    for r in reports {
        let kind = serde_json::to_value(r.kind)?.as_str().unwrap_or_default().to_string();
        for m in r.measurements() {
            t.row(vec![
                kind.clone(),
                r.n.to_string(),
                opt(r.r),
                m.label,
                num(m.empirical),
                opt(m.predicted_main),
                opt(m.ratio),
            ]);
        }
    }
    Outcome::new(&reports, t)
}

fn sweep_each<F>(sweep: &Sweep, f: F) -> anyhow::Result<Vec<CorrelationReport>>
where
    F: Fn(u64, f64) -> tuplesieve::Result<CorrelationReport>,
{
    let mut out = Vec::new();
    for &n in &sweep.n {
        for r in truncation_levels(n, sweep) {
            out.push(f(n, r)?);
        }
    }
    Ok(out)
}

fn run_corr(c: CorrCmd) -> anyhow::Result<Outcome> {
    let reports = match c {
        CorrCmd::Pair { sweep, j } => sweep_each(&sweep, |n, r| correlations::corr_pair(n, r, j))?,
        CorrCmd::SelfCorr { sweep } => sweep_each(&sweep, correlations::corr_self)?,
        CorrCmd::GpyPair { sweep, tuple1, ell1, tuple2, ell2 } => {
            sweep_each(&sweep, |n, r| correlations::corr_gpy_pair(&tuple1, ell1, &tuple2, ell2, n, r))?
        }
        CorrCmd::GpyTheta { sweep, tuple1, ell1, tuple2, ell2, h0 } => sweep_each(&sweep, |n, r| {
            correlations::corr_gpy_theta(&tuple1, ell1, &tuple2, ell2, h0, n, r)
        })?,
        CorrCmd::Hl { n, tuple } => {
            n.iter().map(|&n| correlations::hardy_littlewood_count(&tuple, n)).collect::<Result<Vec<_>, _>>()?
        }
        CorrCmd::SecondMoment { n, lambda } => {
            n.iter().map(|&n| correlations::second_moment(n, lambda)).collect::<Result<Vec<_>, _>>()?
        }
    };
    correlation_table(&reports)
}

fn level(n: u64, theta: f64, r: Option<f64>) -> f64 {
    r.unwrap_or_else(|| (n as f64).powf(theta))
}

fn window_r(w: &Window) -> f64 {
    level(w.n, w.theta, w.r)
}

fn options(w: &WitnessArgs) -> DetectorOptions {
    DetectorOptions { witness_cap: w.witness_cap, ..Default::default() }
}

fn detector_outcome(rep: DetectorReport, witnesses: Option<&WitnessArgs>) -> anyhow::Result<Outcome> {
    let form = serde_json::to_value(rep.form)?.as_str().unwrap_or_default().to_string();
    let mut t = Table::new(&["form", "label", "value", "weight"]);
    t.row(vec![form.clone(), "total".into(), num(rep.total), String::new()]);
    for c in &rep.components {
        t.row(vec![form.clone(), c.label.clone(), num(c.value), num(c.weight)]);
    }
    for (label, v) in &rep.flags {
        t.row(vec![form.clone(), label.clone(), v.to_string(), String::new()]);
    }
    let mut out = Outcome::new(&rep, t)?;
    if let Some(path) = witnesses.and_then(|w| w.witnesses.clone()) {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["n", "event", "verified"])?;
        for w in &rep.witnesses {
            wtr.write_record([w.n.to_string(), w.event.clone(), w.verified.to_string()])?;
        }
        out.side_files.push((path, wtr.into_inner()?));
    }
    Ok(out)
}

fn run_detect(c: DetectCmd) -> anyhow::Result<Outcome> {
    match c {
        DetectCmd::FirstMoment { window } => {
            let rep = detector::first_moment_gap(window.n, window.lambda, window_r(&window))?;
            detector_outcome(rep, None)
        }
        DetectCmd::Mollified { window, rho, c, witness } => {
            let r = window_r(&window);
            let c = if c.trim() == "mean" {
                detector::mean_psi_r(window.n, window.lambda, r)?
            } else {
                c.trim().parse().map_err(|_| usage("C", "expected a number or 'mean'"))?
            };
            let rep = detector::mollified_moment(window.n, window.lambda, r, rho, c, &options(&witness))?;
            detector_outcome(rep, Some(&witness))
        }
        DetectCmd::Gpy { n, h, k, ell, r, theta, big_r, max_tuples, witness } => {
            let opts = DetectorOptions { max_tuples, ..options(&witness) };
            let rep = detector::gpy_form(n, h, k, ell, r, level(n, theta, big_r), &opts)?;
            detector_outcome(rep, Some(&witness))
        }
        DetectCmd::Gs { tuple, ell, r, n, theta, big_r, witness } => {
            let rep = detector::gs_single_tuple(&tuple, ell, r, n, level(n, theta, big_r), &options(&witness))?;
            detector_outcome(rep, Some(&witness))
        }
        DetectCmd::Heathbrown { pairs, rho, x, r, witness } => {
            let r = r.unwrap_or_else(|| (x as f64).powf(0.25));
            let rep = detector::heathbrown_q(&pairs.0, rho, x, r, &options(&witness))?;
            detector_outcome(rep, Some(&witness))
        }
        DetectCmd::Gaps { limit, r, c } => {
            let scan = detector::gap_scan(limit, r)?;
            let mut t = Table::new(&["p", "q", "normalized"]);
            for g in &scan.gaps {
                t.row(vec![g.p.to_string(), g.q.to_string(), num(g.normalized)]);
            }
            let report = json!({
                "limit": scan.limit,
                "r": scan.r,
                "count": scan.gaps.len(),
                "min_normalized": scan.min_normalized,
                "min_gap": scan.min_gap,
                "threshold": c,
                "proportion_below": scan.proportion_below(c),
                "gaps": scan.gaps,
            });
            Outcome::new(&report, t)
        }
        DetectCmd::MomentForm { window, rho, coeffs } => {
            let rep = detector::moment_form(window.n, window.lambda, window_r(&window), rho, &coeffs)?;
            detector_outcome(rep, None)
        }
    }
}

fn probe_table(reports: &[LevelProbeReport]) -> Table {
    let mut t = Table::new(&["alpha", "Q", "total", "normalized"]);
    for r in reports {
        t.row(vec![opt(r.alpha), r.q_max.to_string(), num(r.total), num(r.normalized)]);
    }
    t
}

fn run_dist(c: DistCmd) -> anyhow::Result<Outcome> {
    match c {
        DistCmd::Theta { n, q, a } => {
            let v = distribution::theta_progression(n, q, a)?;
            let mut t = Table::new(&["N", "q", "a", "theta"]);
            t.row(vec![n.to_string(), q.to_string(), a.to_string(), num(v)]);
            Outcome::new(&json!({"N": n, "q": q, "a": a, "theta": v}), t)
        }
        DistCmd::Probe { n, alphas, a } => {
            let reps = distribution::level_probe(n, &alphas, a)?;
            let t = probe_table(&reps);
            Outcome::new(&reps, t)
        }
    }
}

fn run_e2(c: E2Cmd) -> anyhow::Result<Outcome> {
    match c {
        E2Cmd::Gaps { limit, r } => {
            let s = almost_primes::e2_gap_stats(limit, r)?;
            let mut t = Table::new(&["gap", "count"]);
            for (g, n) in &s.histogram {
                t.row(vec![g.to_string(), n.to_string()]);
            }
            Outcome::new(&s, t)
        }
    }
}
