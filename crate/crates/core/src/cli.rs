//! Command-line front end for the `rainbow` binary.
//!
//! Vertices and colours are 1-based in all input and output.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use rand::Rng;
use thiserror::Error;

use crate::detectors::{hitting_times, saturate_undefined, RSearch};
use crate::digraph::{ColouredDigraph, VertexId};
use crate::edgelist::{read_edge_list, write_edge_list, EdgeListError};
use crate::experiments::{
    run_coupon_experiment, run_degree_property_experiment, run_mapping_experiment, run_poisson_experiment,
    run_theorem_experiment, CouponParams, DegreeParams, ExperimentError, ExperimentReport, Harness, MappingParams,
    PoissonParams, TheoremParams,
};
use crate::matching::{build_colour_bigraph, find_colour_assignment, find_k_witness};
use crate::process::{pair_count, ColourCount, ProcessConfig, ProcessTrace, DEFAULT_SEED};
use crate::solver::{candidate_roots, decide, DecideOptions, DecisionMode, RainbowDecision, RootChoice};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "random" {
            return Ok(SeedArg::Random);
        }
        s.parse()
            .map(SeedArg::Fixed)
            .map_err(|_| format!("expected an unsigned integer or \"random\", got {s:?}"))
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "rainbow",
    version,
    about = "Randomly coloured random digraph process: hitting times, rainbow arborescences, experiments"
)]
pub struct Cli {
    /// Master seed (unsigned integer), or "random" to draw one and report it on stderr
    #[arg(long, global = true, default_value_t = SeedArg::Fixed(DEFAULT_SEED), value_parser = SeedArg::from_str)]
    seed: SeedArg,
    /// Worker threads for trial-parallel commands (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write results here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Time budget per exact decision in milliseconds
    #[arg(long = "budget-ms", global = true, default_value_t = 10_000)]
    budget_ms: u64,
    #[command(subcommand)]
    command: Command,
}

impl std::fmt::Display for SeedArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeedArg::Fixed(s) => write!(f, "{s}"),
            SeedArg::Random => f.write_str("random"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a process trace and write it as an edge list
    #[command(alias = "export-trace")]
    Simulate(SimulateArgs),
    /// Hitting times of one trace as a CSV row
    HittingTimes(HittingArgs),
    /// Decide whether an edge-list graph has a rainbow arborescence
    Decide(DecideArgs),
    /// Colour assignment for non-root vertices, or a Hall violator
    Assign(AssignArgs),
    /// Random mapping samples as CSV
    Mapping(MappingArgs),
    /// Monte Carlo experiment with CSV output
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Number of vertices
    #[arg(long)]
    n: usize,
    /// Number of colours: an integer or "auto"
    #[arg(long, default_value_t = ColourCount::Auto)]
    colours: ColourCount,
    /// Write only the first M edges (default: all n(n-1))
    #[arg(long)]
    prefix: Option<usize>,
}

#[derive(Args, Debug)]
struct HittingArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = ColourCount::Auto)]
    colours: ColourCount,
    /// Decision procedure for the rainbow event
    #[arg(long = "r-mode", default_value_t = DecisionMode::Exact)]
    r_mode: DecisionMode,
    /// Report undefined m_C and m_R as n(n-1)
    #[arg(long = "undefined-as-last")]
    undefined_as_last: bool,
}

#[derive(Args, Debug)]
struct DecideArgs {
    /// Edge-list file
    #[arg(long)]
    input: PathBuf,
    /// Root vertex (1-based) or "any"
    #[arg(long, default_value = "any")]
    root: String,
    #[arg(long, default_value_t = DecisionMode::Auto)]
    mode: DecisionMode,
    /// Print only the outcome line
    #[arg(long = "no-certificate")]
    no_certificate: bool,
}

#[derive(Args, Debug)]
struct AssignArgs {
    #[arg(long)]
    input: PathBuf,
    /// Root vertex (1-based) or "auto"
    #[arg(long, default_value = "auto")]
    root: String,
}

#[derive(Args, Debug)]
struct MappingArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Forbid fixed points
    #[arg(long)]
    loopless: bool,
    /// Exit with status 2 if a threshold check fails
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExperimentKind {
    Theorem,
    Poisson,
    Coupon,
    Degree,
    Mapping,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    kind: ExperimentKind,
    #[arg(long)]
    n: usize,
    /// Trials (samples for the mapping experiment)
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Offset c in m = n(log n + c) for the poisson experiment
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, default_value_t = ColourCount::Auto)]
    colours: ColourCount,
    #[arg(long = "r-mode", default_value_t = DecisionMode::Exact)]
    r_mode: DecisionMode,
    /// Random colour subsets per trial in the degree experiment
    #[arg(long, default_value_t = 50)]
    subsets: usize,
    /// Loopless mappings in the mapping experiment
    #[arg(long)]
    loopless: bool,
    /// Exit with status 2 if a threshold check fails
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Check(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Check(_) => EXIT_CHECK,
        }
    }

    fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Io(source) => CliError::Io {
                path: "<output>".into(),
                source,
            },
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Full help text of the binary and every subcommand, as printed by `--help`.
pub fn help_text() -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let mut s = cmd.render_long_help().to_string();
    for sub in cmd.get_subcommands_mut() {
        s.push_str(&format!("\n==== {} ====\n", sub.get_name()));
        s.push_str(&sub.render_long_help().to_string());
    }
    s
}

/// Parses `args` (including the program name), runs the command, returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let kind = match e {
                CliError::Usage(_) => "usage",
                CliError::Io { .. } => "io",
                CliError::Check(_) => "check",
            };
            let _ = writeln!(stderr, "error[{kind}]: {e}");
            e.code()
        }
    }
}

fn resolve_seed(seed: SeedArg, stderr: &mut dyn Write) -> u64 {
    match seed {
        SeedArg::Fixed(s) => s,
        SeedArg::Random => {
            let s = rand::rng().random();
            let _ = writeln!(stderr, "seed={s}");
            s
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let seed = resolve_seed(cli.seed, stderr);
    let budget = Some(Duration::from_millis(cli.budget_ms));
    let text = match &cli.command {
        Command::Simulate(a) => simulate(a, seed)?,
        Command::HittingTimes(a) => hitting_times_row(a, seed, budget)?,
        Command::Decide(a) => decide_file(a, budget)?,
        Command::Assign(a) => assign_file(a)?,
        Command::Mapping(a) => {
            let rep = run_mapping_experiment(
                &Harness::new(seed).with_threads(cli.threads),
                &MappingParams {
                    n: a.n,
                    samples: a.samples,
                    loopless: a.loopless,
                },
            )?;
            return emit_report(cli, &rep, a.check, stdout);
        }
        Command::Experiment(a) => {
            let rep = experiment(a, seed, cli.threads, budget)?;
            return emit_report(cli, &rep, a.check, stdout);
        }
    };
    emit(cli.out.as_deref(), text.as_bytes(), stdout)
}

fn emit(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?);
            f.write_all(bytes)
                .and_then(|_| f.flush())
                .map_err(|e| CliError::io(path, e))
        }
        None => stdout.write_all(bytes).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn emit_report(cli: &Cli, rep: &ExperimentReport, check: bool, stdout: &mut dyn Write) -> Result<(), CliError> {
    emit(cli.out.as_deref(), rep.to_csv().as_bytes(), stdout)?;
    if check && !rep.all_checks_pass() {
        let failed: Vec<String> = rep
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        return Err(CliError::Check(format!(
            "threshold check failed: {}",
            failed.join("; ")
        )));
    }
    Ok(())
}

fn process_config(n: usize, colours: ColourCount, seed: u64) -> Result<ProcessConfig, CliError> {
    let cfg = ProcessConfig::new(n, colours, seed);
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn simulate(a: &SimulateArgs, seed: u64) -> Result<String, CliError> {
    let cfg = process_config(a.n, a.colours, seed)?;
    let total = pair_count(a.n) as usize;
    let m = a.prefix.unwrap_or(total);
    if m > total {
        return Err(CliError::Usage(format!("--prefix {m} exceeds n(n-1) = {total}")));
    }
    let w = cfg.colours();
    let mut trace = ProcessTrace::lazy(cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut buf = Vec::new();
    write_edge_list(&mut buf, a.n, w, trace.prefix(m)).map_err(|e| CliError::io("<buffer>", e))?;
    Ok(String::from_utf8(buf).expect("edge lists are ASCII"))
}

fn na(v: Option<usize>) -> String {
    v.map_or_else(|| "NA".into(), |x| x.to_string())
}

fn hitting_times_row(a: &HittingArgs, seed: u64, budget: Option<Duration>) -> Result<String, CliError> {
    let cfg = process_config(a.n, a.colours, seed)?;
    let w = cfg.colours();
    let mut trace = ProcessTrace::lazy(cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut search = RSearch::new(a.r_mode);
    search.budget = budget;
    let mut t = hitting_times(&mut trace, &search);
    if a.undefined_as_last {
        t = saturate_undefined(&t, a.n);
    }
    Ok(format!(
        "n,W,seed,m_C,m_Z,m_A,m_R,r_decision_mode\n{},{},{},{},{},{},{},{}\n",
        a.n,
        w,
        seed,
        na(t.m_c),
        t.m_z,
        t.m_a,
        na(t.m_r),
        t.r_decision_mode
    ))
}

fn load_graph(path: &Path) -> Result<ColouredDigraph, CliError> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    let list = read_edge_list(BufReader::new(f)).map_err(|e| match e {
        EdgeListError::Io(source) => CliError::io(path, source),
        other => CliError::Usage(format!("{}: {other}", path.display())),
    })?;
    list.into_digraph()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_vertex(s: &str, n: usize) -> Result<VertexId, CliError> {
    match s.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(VertexId(v as u32 - 1)),
        _ => Err(CliError::Usage(format!("root must be a vertex in 1..={n}, got {s:?}"))),
    }
}

fn decide_file(a: &DecideArgs, budget: Option<Duration>) -> Result<String, CliError> {
    let g = load_graph(&a.input)?;
    let mut opts = DecideOptions::new(a.mode);
    opts.budget = budget;
    opts.root = match a.root.as_str() {
        "any" => RootChoice::Any,
        s => RootChoice::Fixed(parse_vertex(s, g.vertex_count())?),
    };
    let decision = decide(&g, &opts);
    let mut s = String::new();
    match &decision {
        RainbowDecision::Found { certificate, .. } => {
            s.push_str("RAINBOW ARBORESCENCE FOUND\n");
            if !a.no_certificate {
                s.push_str(&format!("root {}\n", certificate.root.0 + 1));
                for e in certificate.edges() {
                    s.push_str(&format!("{} <- {} {}\n", e.head.0 + 1, e.tail.0 + 1, e.colour.0 + 1));
                }
            }
        }
        RainbowDecision::Absent { .. } => s.push_str("NO RAINBOW ARBORESCENCE\n"),
        RainbowDecision::NotFound(f) => s.push_str(&format!("UNKNOWN heuristic-failed {:?}\n", f.reason)),
        RainbowDecision::Unknown => s.push_str("UNKNOWN\n"),
    }
    Ok(s)
}

fn assign_file(a: &AssignArgs) -> Result<String, CliError> {
    let g = load_graph(&a.input)?;
    let n = g.vertex_count();
    let root = match a.root.as_str() {
        "auto" => candidate_roots(&g).first().copied().unwrap_or(VertexId(0)),
        s => parse_vertex(s, n)?,
    };
    let b = build_colour_bigraph(&g);
    let join = |xs: &mut dyn Iterator<Item = u32>| xs.map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ");
    let mut s = format!("root {}\n", root.0 + 1);
    match find_colour_assignment(&b, root) {
        Ok(assign) => {
            for (v, c) in assign.pairs() {
                s.push_str(&format!("{} -> {}\n", v.0 + 1, c.0 + 1));
            }
        }
        Err(_) => {
            let w = find_k_witness(&b, root).expect("a failed assignment has a Hall violator");
            s.push_str(&format!("HALL VIOLATION k={}\n", w.vertices.len()));
            s.push_str(&format!("S: {}\n", join(&mut w.vertices.iter().map(|v| v.0))));
            s.push_str(&format!("T: {}\n", join(&mut w.colours.iter().map(|c| c.0))));
        }
    }
    Ok(s)
}

fn experiment(
    a: &ExperimentArgs,
    seed: u64,
    threads: Option<usize>,
    budget: Option<Duration>,
) -> Result<ExperimentReport, CliError> {
    let h = Harness::new(seed).with_threads(threads);
    let rep = match a.kind {
        ExperimentKind::Theorem => run_theorem_experiment(
            &h,
            &TheoremParams {
                n: a.n,
                trials: a.trials,
                colours: a.colours,
                r_mode: a.r_mode,
                budget,
            },
        )?,
        ExperimentKind::Poisson => run_poisson_experiment(
            &h,
            &PoissonParams {
                n: a.n,
                c: a.c,
                trials: a.trials,
                colours: a.colours,
            },
        )?,
        ExperimentKind::Coupon => run_coupon_experiment(
            &h,
            &CouponParams {
                n: a.n,
                trials: a.trials,
                colours: a.colours,
            },
        )?,
        ExperimentKind::Degree => run_degree_property_experiment(
            &h,
            &DegreeParams {
                n: a.n,
                trials: a.trials,
                subsets: a.subsets,
                colours: a.colours,
            },
        )?,
        ExperimentKind::Mapping => run_mapping_experiment(
            &h,
            &MappingParams {
                n: a.n,
                samples: a.trials,
                loopless: a.loopless,
            },
        )?,
    };
    Ok(rep)
}
