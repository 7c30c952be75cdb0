//! Monte Carlo experiments with CSV reports.
//!
//! Every trial draws its randomness from `derive_trial_seed(master, index)`,
//! trials run on a rayon pool, and rows are emitted in trial order, so the
//! CSV output is a pure function of the parameters.
//!
//! CSV layout (`schema=1`):
//!
//! ```text
//! # schema=1
//! # experiment=<name>
//! # param <key>=<value>
//! <column header>
//! <rows...>
//! # summary <key>=<value>
//! # check <name>=<pass|fail> <detail>
//! ```

use std::fmt::Write as _;
use std::io::{self, Write};
use std::time::Duration;

use rand::seq::index::sample;
use rayon::prelude::*;
use thiserror::Error;

use crate::detectors::{hitting_times, HittingTimes, RDecisionMode, RSearch};
use crate::digraph::VertexId;
use crate::mappings::{burtin_seed_size, burtin_statistic, cycle_components, sample_mapping};
use crate::process::{
    derive_trial_seed, epsilon, pair_count, rng_from_seed, ColourCount, ProcessConfig, ProcessTrace, TraceStream,
};
use crate::solver::{heuristic_construct, DecisionMode, HeuristicParams};

pub const SCHEMA_VERSION: u32 = 1;

/// z-value for two-sided 95% normal intervals.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, f64)>,
    pub checks: Vec<Check>,
}

impl ExperimentReport {
    fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            params: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    fn stat(&mut self, key: &str, value: f64) {
        self.summary.push((key.to_string(), value));
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn summary_value(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# schema={SCHEMA_VERSION}");
        let _ = writeln!(s, "# experiment={}", self.name);
        for (k, v) in &self.params {
            let _ = writeln!(s, "# param {k}={v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        for (k, v) in &self.summary {
            let _ = writeln!(s, "# summary {k}={}", fmt_f64(*v));
        }
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "fail" };
            let _ = writeln!(s, "# check {}={} {}", c.name, verdict, c.detail);
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }
}

/// Fixed six-decimal formatting used in all numeric output.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.6}")
}

fn fmt_opt(v: Option<usize>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// Normal-approximation 95% half-width of a proportion.
pub fn proportion_half_width(p: f64, trials: usize) -> f64 {
    if trials == 0 {
        return f64::NAN;
    }
    Z95 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Limit of `P(at most one vertex of in-degree zero)` at `m = n(log n + c)`:
/// `(1 + e^{-c}) exp(-e^{-c})`.
pub fn poisson_limit(c: f64) -> f64 {
    let lambda = (-c).exp();
    (1.0 + lambda) * (-lambda).exp()
}

/// Poisson pmf values `P(X = 0..=k_max)`.
pub fn poisson_pmf(lambda: f64, k_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut p = (-lambda).exp();
    for k in 0..=k_max {
        if k > 0 {
            p *= lambda / k as f64;
        }
        out.push(p);
    }
    out
}

/// Total-variation distance between the empirical law of `samples` and
/// Poisson(`lambda`), including the Poisson tail beyond the largest sample.
pub fn tv_distance_to_poisson(samples: &[usize], lambda: f64) -> f64 {
    if samples.is_empty() {
        return f64::NAN;
    }
    let k_max = samples.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0usize; k_max + 1];
    for &s in samples {
        hist[s] += 1;
    }
    let pmf = poisson_pmf(lambda, k_max);
    let t = samples.len() as f64;
    let covered: f64 = pmf.iter().sum();
    let diff: f64 = hist.iter().zip(&pmf).map(|(&h, &p)| (h as f64 / t - p).abs()).sum();
    0.5 * (diff + (1.0 - covered).max(0.0))
}

#[derive(Clone, Copy, Debug)]
pub struct Harness {
    pub master_seed: u64,
    /// `None` uses the available parallelism.
    pub threads: Option<usize>,
}

impl Harness {
    pub fn new(master_seed: u64) -> Self {
        Self {
            master_seed,
            threads: None,
        }
    }

    pub fn with_threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    /// Runs `trial(index, seed)` for every index, results in index order.
    pub fn run<T, F>(&self, trials: usize, trial: F) -> Result<Vec<T>, ExperimentError>
    where
        T: Send,
        F: Fn(usize, u64) -> T + Sync,
    {
        let mut builder = rayon::ThreadPoolBuilder::new().stack_size(64 << 20);
        if let Some(k) = self.threads {
            builder = builder.num_threads(k.max(1));
        }
        let pool = builder.build().map_err(|e| ExperimentError::Pool(e.to_string()))?;
        let master = self.master_seed;
        Ok(pool.install(|| {
            (0..trials)
                .into_par_iter()
                .map(|i| trial(i, derive_trial_seed(master, i as u64)))
                .collect()
        }))
    }
}

// ---------------------------------------------------------------- theorem

#[derive(Clone, Copy, Debug)]
pub struct TheoremParams {
    pub n: usize,
    pub trials: usize,
    pub colours: ColourCount,
    pub r_mode: DecisionMode,
    pub budget: Option<Duration>,
}

#[derive(Clone, Copy, Debug)]
struct TheoremRow {
    seed: u64,
    times: HittingTimes,
    heuristic_at_z: bool,
}

/// Hitting times per trial plus `[m_A = m_Z]`, `[R at m_Z]` and whether the
/// heuristic alone succeeds at `m_Z` rooted at the unique in-degree-zero vertex.
pub fn run_theorem_experiment(h: &Harness, p: &TheoremParams) -> Result<ExperimentReport, ExperimentError> {
    if p.n < 2 {
        return Err(ExperimentError::InvalidParameter("n must be at least 2".into()));
    }
    let search = RSearch {
        mode: p.r_mode,
        budget: p.budget,
        heuristic: HeuristicParams::default(),
    };
    let rows = h.run(p.trials, |_, seed| {
        let mut trace = ProcessTrace::lazy(ProcessConfig::new(p.n, p.colours, seed)).expect("validated");
        let times = hitting_times(&mut trace, &search);
        let g = trace.graph_at(times.m_z);
        let root = g.zero_in_vertices().first().copied().unwrap_or(VertexId(0));
        let heuristic_at_z = heuristic_construct(&g, root, &HeuristicParams::default()).is_ok();
        TheoremRow {
            seed,
            times,
            heuristic_at_z,
        }
    })?;

    let w = p.colours.resolve(p.n);
    let mut rep = ExperimentReport::new(
        "theorem",
        &[
            "trial",
            "seed",
            "m_C",
            "m_Z",
            "m_A",
            "m_R",
            "r_decision_mode",
            "a_eq_z",
            "r_at_z",
            "heuristic_at_z",
        ],
    );
    rep.param("n", p.n);
    rep.param("W", w);
    rep.param("trials", p.trials);
    rep.param("master_seed", h.master_seed);
    rep.param("r_mode", p.r_mode);
    rep.param(
        "budget_ms",
        p.budget.map_or("none".to_string(), |b| b.as_millis().to_string()),
    );
    for (i, r) in rows.iter().enumerate() {
        let t = &r.times;
        let r_at_z = match (t.m_r, t.r_decision_mode) {
            (_, RDecisionMode::Unknown) => "NA",
            (Some(m), _) => flag(m == t.m_z),
            (None, _) => "0",
        };
        rep.rows.push(vec![
            i.to_string(),
            r.seed.to_string(),
            fmt_opt(t.m_c),
            t.m_z.to_string(),
            t.m_a.to_string(),
            fmt_opt(t.m_r),
            t.r_decision_mode.to_string(),
            flag(t.m_a == t.m_z).to_string(),
            r_at_z.to_string(),
            flag(r.heuristic_at_z).to_string(),
        ]);
    }
    summarize_theorem(&mut rep, p.n, p.trials);
    Ok(rep)
}

/// Summary and checks from the emitted rows only.
fn summarize_theorem(rep: &mut ExperimentReport, n: usize, trials: usize) {
    let col = |name: &str| rep.column(name).expect("column");
    let (a, r, hz) = (col("a_eq_z"), col("r_at_z"), col("heuristic_at_z"));
    let count = |c: usize, v: &str| rep.rows.iter().filter(|row| row[c] == v).count();
    let a_eq = count(a, "1");
    let r_yes = count(r, "1");
    let unknown = count(r, "NA");
    let decided = trials - unknown;
    let h_yes = count(hz, "1");
    let ratio = |k: usize, t: usize| if t == 0 { f64::NAN } else { k as f64 / t as f64 };
    let p_a = ratio(a_eq, trials);
    let p_r = ratio(r_yes, decided);
    let p_h = ratio(h_yes, trials);
    let unknown_fraction = ratio(unknown, trials);
    rep.stat("p_a_eq_z", p_a);
    rep.stat("p_a_eq_z_half_width", proportion_half_width(p_a, trials));
    rep.stat("p_r_at_z", p_r);
    rep.stat("p_r_at_z_half_width", proportion_half_width(p_r, decided));
    rep.stat("unknown_count", unknown as f64);
    rep.stat("unknown_fraction", unknown_fraction);
    rep.stat("heuristic_success_rate", p_h);
    rep.stat("heuristic_failure_rate", 1.0 - p_h);

    rep.check(
        "unknown_fraction",
        unknown_fraction < 0.01,
        format!("{} < 0.010000", fmt_f64(unknown_fraction)),
    );
    let threshold = if n >= 100 {
        Some(0.90)
    } else if n >= 50 {
        Some(0.80)
    } else {
        None
    };
    if let Some(t) = threshold {
        rep.check("p_r_at_z", p_r >= t, format!("{} >= {}", fmt_f64(p_r), fmt_f64(t)));
    }
    if n >= 100 {
        rep.check(
            "heuristic_success_rate",
            p_h >= 0.7,
            format!("{} >= {}", fmt_f64(p_h), fmt_f64(0.7)),
        );
    }
}

// ---------------------------------------------------------------- poisson

#[derive(Clone, Copy, Debug)]
pub struct PoissonParams {
    pub n: usize,
    pub c: f64,
    pub trials: usize,
    pub colours: ColourCount,
}

/// `round(n (log n + c))`.
pub fn poisson_step(n: usize, c: f64) -> f64 {
    (n as f64 * ((n as f64).ln() + c)).round()
}

pub fn run_poisson_experiment(h: &Harness, p: &PoissonParams) -> Result<ExperimentReport, ExperimentError> {
    if p.n < 2 {
        return Err(ExperimentError::InvalidParameter("n must be at least 2".into()));
    }
    let m = poisson_step(p.n, p.c);
    if !(0.0..=pair_count(p.n) as f64).contains(&m) {
        return Err(ExperimentError::InvalidParameter(format!(
            "m = {m} outside [0, {}]",
            pair_count(p.n)
        )));
    }
    let m = m as usize;
    let zeros = h.run(p.trials, |_, seed| {
        let cfg = ProcessConfig::new(p.n, p.colours, seed);
        let mut in_deg = vec![0u32; p.n];
        for e in TraceStream::new(&cfg).expect("validated").take(m) {
            in_deg[e.head.index()] += 1;
        }
        (seed, in_deg.iter().filter(|&&d| d == 0).count())
    })?;

    let mut rep = ExperimentReport::new("poisson", &["trial", "seed", "m", "zero_in", "z_holds"]);
    rep.param("n", p.n);
    rep.param("W", p.colours.resolve(p.n));
    rep.param("c", fmt_f64(p.c));
    rep.param("m", m);
    rep.param("trials", p.trials);
    rep.param("master_seed", h.master_seed);
    for (i, &(seed, z)) in zeros.iter().enumerate() {
        rep.rows.push(vec![
            i.to_string(),
            seed.to_string(),
            m.to_string(),
            z.to_string(),
            flag(z <= 1).to_string(),
        ]);
    }
    summarize_poisson(&mut rep, p.c);
    Ok(rep)
}

fn summarize_poisson(rep: &mut ExperimentReport, c: f64) {
    let zc = rep.column("zero_in").expect("column");
    let counts: Vec<usize> = rep.rows.iter().map(|r| r[zc].parse().expect("integer")).collect();
    let t = counts.len();
    let p_z = counts.iter().filter(|&&z| z <= 1).count() as f64 / t as f64;
    let limit = poisson_limit(c);
    let lambda = (-c).exp();
    let tv = tv_distance_to_poisson(&counts, lambda);
    let mean = counts.iter().sum::<usize>() as f64 / t as f64;
    rep.stat("p_z", p_z);
    rep.stat("p_z_limit", limit);
    rep.stat("p_z_abs_error", (p_z - limit).abs());
    rep.stat("p_z_half_width", proportion_half_width(p_z, t));
    rep.stat("mean_zero_in", mean);
    rep.stat("poisson_mean", lambda);
    rep.stat("tv_distance", tv);
    rep.check(
        "p_z_vs_limit",
        (p_z - limit).abs() <= 0.05,
        format!("|{} - {}| <= 0.050000", fmt_f64(p_z), fmt_f64(limit)),
    );
    rep.check("tv_distance", tv <= 0.08, format!("{} <= 0.080000", fmt_f64(tv)));
}

// ---------------------------------------------------------------- coupon

#[derive(Clone, Copy, Debug)]
pub struct CouponParams {
    pub n: usize,
    pub trials: usize,
    pub colours: ColourCount,
}

/// `(n/2) log n`.
pub fn coupon_bound(n: usize) -> f64 {
    n as f64 / 2.0 * (n as f64).ln()
}

pub fn run_coupon_experiment(h: &Harness, p: &CouponParams) -> Result<ExperimentReport, ExperimentError> {
    if p.n < 10 {
        return Err(ExperimentError::InvalidParameter(
            "coupon experiment needs n >= 10 (the bound is below 1 edge for n = 2)".into(),
        ));
    }
    let w = p.colours.resolve(p.n);
    if w + 1 < p.n {
        return Err(ExperimentError::InvalidParameter(format!("W = {w} < n - 1")));
    }
    let bound = coupon_bound(p.n);
    let m_cs = h.run(p.trials, |_, seed| {
        let cfg = ProcessConfig::new(p.n, p.colours, seed);
        let mut seen = vec![false; w];
        let mut distinct = 0;
        for (k, e) in TraceStream::new(&cfg).expect("validated").enumerate() {
            if !seen[e.colour.index()] {
                seen[e.colour.index()] = true;
                distinct += 1;
                if distinct + 1 >= p.n {
                    return (seed, Some(k + 1));
                }
            }
        }
        (seed, None)
    })?;

    let mut rep = ExperimentReport::new("coupon", &["trial", "seed", "m_C", "below_bound"]);
    rep.param("n", p.n);
    rep.param("W", w);
    rep.param("trials", p.trials);
    rep.param("master_seed", h.master_seed);
    rep.param("bound", fmt_f64(bound));
    for (i, &(seed, m_c)) in m_cs.iter().enumerate() {
        let below = m_c.is_some_and(|m| (m as f64) < bound);
        rep.rows.push(vec![
            i.to_string(),
            seed.to_string(),
            fmt_opt(m_c),
            flag(below).to_string(),
        ]);
    }
    let bc = rep.column("below_bound").expect("column");
    let frac = rep.rows.iter().filter(|r| r[bc] == "1").count() as f64 / p.trials.max(1) as f64;
    rep.stat("p_below_bound", frac);
    rep.stat("p_below_bound_half_width", proportion_half_width(frac, p.trials));
    rep.check("p_below_bound", frac >= 0.99, format!("{} >= 0.990000", fmt_f64(frac)));
    Ok(rep)
}

// ---------------------------------------------------------------- degree

#[derive(Clone, Copy, Debug)]
pub struct DegreeParams {
    pub n: usize,
    pub trials: usize,
    /// Random colour subsets per trial.
    pub subsets: usize,
    pub colours: ColourCount,
}

/// `m_- = floor(n (log n - log log n))`, `m_+ = ceil(n (log n + log log n))`.
pub fn window(n: usize) -> (usize, usize) {
    let l = (n as f64).ln();
    let omega = l.ln();
    let lo = (n as f64 * (l - omega)).floor().max(0.0) as usize;
    let hi = (n as f64 * (l + omega)).ceil() as usize;
    let total = pair_count(n) as usize;
    (lo.min(total), hi.min(total))
}

#[derive(Clone, Copy, Debug)]
struct DegreeRow {
    seed: u64,
    max_low: usize,
    max_colour_mult: usize,
    max_incidence: usize,
    max_same_colour: usize,
}

pub fn run_degree_property_experiment(h: &Harness, p: &DegreeParams) -> Result<ExperimentReport, ExperimentError> {
    if p.n < 100 {
        return Err(ExperimentError::InvalidParameter(
            "degree experiment needs n >= 100".into(),
        ));
    }
    let n = p.n;
    let w = p.colours.resolve(n);
    let eps = epsilon(n);
    let ln = (n as f64).ln();
    let subset_size = ((45.0 * eps * n as f64).round() as usize).min(w);
    let low_threshold = 43.0 * eps * ln;
    let low_bound = n as f64 / ln.ln();
    let (m_minus, m_plus) = window(n);

    let rows = h.run(p.trials, |_, seed| {
        let mut trace = ProcessTrace::lazy(ProcessConfig::new(n, p.colours, seed)).expect("validated");
        let edges = trace.prefix(m_plus).to_vec();
        let mut rng = rng_from_seed(derive_trial_seed(seed, 0));
        let mut max_low = 0;
        let mut in_subset = vec![false; w];
        for _ in 0..p.subsets {
            in_subset.iter_mut().for_each(|x| *x = false);
            for c in sample(&mut rng, w, subset_size) {
                in_subset[c] = true;
            }
            let mut deg = vec![0u32; n];
            for e in &edges[..m_minus] {
                if in_subset[e.colour.index()] {
                    deg[e.head.index()] += 1;
                }
            }
            let low = deg.iter().filter(|&&d| d as f64 <= low_threshold).count();
            max_low = max_low.max(low);
        }
        let mut mult = vec![0usize; w];
        let mut incidence = vec![0usize; n];
        let mut per_vertex_colour: std::collections::HashMap<(u32, u32), usize> = Default::default();
        for e in &edges {
            mult[e.colour.index()] += 1;
            for v in [e.tail.0, e.head.0] {
                incidence[v as usize] += 1;
                *per_vertex_colour.entry((v, e.colour.0)).or_default() += 1;
            }
        }
        DegreeRow {
            seed,
            max_low,
            max_colour_mult: mult.into_iter().max().unwrap_or(0),
            max_incidence: incidence.into_iter().max().unwrap_or(0),
            max_same_colour: per_vertex_colour.into_values().max().unwrap_or(0),
        }
    })?;

    let mut rep = ExperimentReport::new(
        "degree",
        &[
            "trial",
            "seed",
            "max_low_degree",
            "max_colour_mult",
            "max_incidence",
            "max_same_colour",
            "low_degree_ok",
            "colour_mult_ok",
            "incidence_ok",
            "same_colour_ok",
        ],
    );
    rep.param("n", n);
    rep.param("W", w);
    rep.param("trials", p.trials);
    rep.param("master_seed", h.master_seed);
    rep.param("subsets", p.subsets);
    rep.param("subset_size", subset_size);
    rep.param("m_minus", m_minus);
    rep.param("m_plus", m_plus);
    rep.param("low_degree_threshold", fmt_f64(low_threshold));
    rep.param("low_degree_bound", fmt_f64(low_bound));
    rep.param("count_bound", fmt_f64(10.0 * ln));
    for (i, r) in rows.iter().enumerate() {
        rep.rows.push(vec![
            i.to_string(),
            r.seed.to_string(),
            r.max_low.to_string(),
            r.max_colour_mult.to_string(),
            r.max_incidence.to_string(),
            r.max_same_colour.to_string(),
            flag(r.max_low as f64 <= low_bound).to_string(),
            flag(r.max_colour_mult as f64 <= 10.0 * ln).to_string(),
            flag(r.max_incidence as f64 <= 10.0 * ln).to_string(),
            flag(r.max_same_colour <= 10).to_string(),
        ]);
    }
    let t = p.trials.max(1) as f64;
    for (stat, column, needed) in [
        ("p_low_degree_ok", "low_degree_ok", 0.95),
        ("p_colour_mult_ok", "colour_mult_ok", 1.0),
        ("p_incidence_ok", "incidence_ok", 1.0),
        ("p_same_colour_ok", "same_colour_ok", 1.0),
    ] {
        let c = rep.column(column).expect("column");
        let frac = rep.rows.iter().filter(|r| r[c] == "1").count() as f64 / t;
        rep.stat(stat, frac);
        rep.check(
            stat,
            frac >= needed,
            format!("{} >= {}", fmt_f64(frac), fmt_f64(needed)),
        );
    }
    Ok(rep)
}

// ---------------------------------------------------------------- mapping

#[derive(Clone, Copy, Debug)]
pub struct MappingParams {
    pub n: usize,
    pub samples: usize,
    pub loopless: bool,
}

pub fn run_mapping_experiment(h: &Harness, p: &MappingParams) -> Result<ExperimentReport, ExperimentError> {
    if p.n < 2 {
        return Err(ExperimentError::InvalidParameter("n must be at least 2".into()));
    }
    let x = burtin_seed_size(p.n);
    let rows = h.run(p.samples, |_, seed| {
        let m = sample_mapping(p.n, p.loopless, seed);
        let comps = cycle_components(&m);
        let largest = comps.iter().map(|c| c.size()).max().unwrap_or(0);
        let mut rng = rng_from_seed(derive_trial_seed(seed, 0));
        let (_, stat) = burtin_statistic(&m, x, &mut rng);
        (m.loop_count(), comps.len(), largest, stat)
    })?;

    let mut rep = ExperimentReport::new(
        "mapping",
        &["sample", "loops", "cycles", "largest_component", "eta_statistic"],
    );
    rep.param("n", p.n);
    rep.param("samples", p.samples);
    rep.param("loopless", p.loopless);
    rep.param("master_seed", h.master_seed);
    rep.param("infected", x);
    for (i, &(loops, cycles, largest, stat)) in rows.iter().enumerate() {
        rep.rows.push(vec![
            i.to_string(),
            loops.to_string(),
            cycles.to_string(),
            largest.to_string(),
            fmt_f64(stat),
        ]);
    }
    summarize_mapping(&mut rep, p.n, p.loopless);
    Ok(rep)
}

fn summarize_mapping(rep: &mut ExperimentReport, n: usize, loopless: bool) {
    let t = rep.rows.len().max(1) as f64;
    let col = |name: &str| rep.column(name).expect("column");
    let (lc, cc, sc) = (col("loops"), col("cycles"), col("eta_statistic"));
    let parse = |r: &Vec<String>, c: usize| r[c].parse::<f64>().expect("number");
    let mean_loops = rep.rows.iter().map(|r| parse(r, lc)).sum::<f64>() / t;
    let total_loops = rep.rows.iter().map(|r| parse(r, lc)).sum::<f64>();
    let mean_cycles = rep.rows.iter().map(|r| parse(r, cc)).sum::<f64>() / t;
    let no_loop = rep.rows.iter().filter(|r| r[lc] == "0").count() as f64 / t;
    let threshold = (n as f64).powf(1.0 / 6.0);
    let below = rep.rows.iter().filter(|r| parse(r, sc) < threshold).count() as f64 / t;
    rep.stat("mean_loops", mean_loops);
    rep.stat("p_no_loop", no_loop);
    rep.stat("p_no_loop_exact", (1.0 - 1.0 / n as f64).powi(n as i32));
    rep.stat("mean_cycles", mean_cycles);
    rep.stat("eta_threshold", threshold);
    rep.stat("p_eta_below_threshold", below);
    if loopless {
        rep.check("no_fixed_points", total_loops == 0.0, format!("{total_loops} == 0"));
    } else {
        rep.check(
            "mean_loops",
            (mean_loops - 1.0).abs() <= 0.05,
            format!("|{} - 1| <= 0.050000", fmt_f64(mean_loops)),
        );
    }
    rep.check(
        "p_eta_below_threshold",
        below >= 0.95,
        format!("{} >= 0.950000", fmt_f64(below)),
    );
}
