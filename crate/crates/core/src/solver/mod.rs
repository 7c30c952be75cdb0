//! Rainbow arborescence decisions.
//!
//! Three procedures with different guarantees share one certificate type:
//! the brute-force [`oracle`] (exact, tiny graphs only), the backtracking
//! [`exact`] solver (exact, possibly slow) and the one-sided
//! [`heuristic`]. [`decide`] combines them according to a [`DecisionMode`].

pub mod certificate;
pub mod exact;
pub mod heuristic;
pub mod oracle;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

pub use certificate::ArborescenceCertificate;
pub use exact::{candidate_roots, decide_exact, ExactOutcome, RootChoice};
pub use heuristic::{heuristic_construct, FailureReason, HeuristicFailure, HeuristicParams};
pub use oracle::{brute_force_oracle, TooLarge, ORACLE_LIMIT};

use crate::digraph::ColouredDigraph;

/// Default per-decision time budget for the exact solver.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(10);

/// Number of candidate roots the heuristic tries when the root is free.
const HEURISTIC_ROOT_TRIES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecisionMode {
    Oracle,
    Exact,
    Heuristic,
    /// Heuristic first, exact solver on a miss.
    Auto,
}

impl fmt::Display for DecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecisionMode::Oracle => "oracle",
            DecisionMode::Exact => "exact",
            DecisionMode::Heuristic => "heuristic",
            DecisionMode::Auto => "auto",
        })
    }
}

impl FromStr for DecisionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oracle" => Ok(DecisionMode::Oracle),
            "exact" => Ok(DecisionMode::Exact),
            "heuristic" => Ok(DecisionMode::Heuristic),
            "auto" => Ok(DecisionMode::Auto),
            _ => Err(format!("unknown decision mode {s:?} (oracle|exact|heuristic|auto)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Oracle,
    Exact,
    Heuristic,
    /// Certificate-free shortcut: a necessary condition decided the answer.
    Precheck,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RainbowDecision {
    Found {
        certificate: ArborescenceCertificate,
        by: Solver,
    },
    /// Proven not to exist.
    Absent { by: Solver },
    /// Heuristic did not find one; existence unknown.
    NotFound(HeuristicFailure),
    /// Budget exhausted or oracle refused.
    Unknown,
}

impl RainbowDecision {
    pub fn holds(&self) -> bool {
        matches!(self, RainbowDecision::Found { .. })
    }

    pub fn is_definite(&self) -> bool {
        matches!(self, RainbowDecision::Found { .. } | RainbowDecision::Absent { .. })
    }

    pub fn certificate(&self) -> Option<&ArborescenceCertificate> {
        match self {
            RainbowDecision::Found { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecideOptions {
    pub mode: DecisionMode,
    pub root: RootChoice,
    pub budget: Option<Duration>,
    pub heuristic: HeuristicParams,
}

impl DecideOptions {
    pub fn new(mode: DecisionMode) -> Self {
        Self {
            mode,
            root: RootChoice::Any,
            budget: Some(DEFAULT_BUDGET),
            heuristic: HeuristicParams::default(),
        }
    }
}

fn heuristic_roots(g: &ColouredDigraph, root: RootChoice) -> Vec<crate::digraph::VertexId> {
    match root {
        RootChoice::Fixed(r) => vec![r],
        RootChoice::Any => candidate_roots(g).into_iter().take(HEURISTIC_ROOT_TRIES).collect(),
    }
}

fn run_heuristic(g: &ColouredDigraph, opts: &DecideOptions) -> RainbowDecision {
    let mut last = None;
    for r in heuristic_roots(g, opts.root) {
        match heuristic_construct(g, r, &opts.heuristic) {
            Ok(certificate) => {
                return RainbowDecision::Found {
                    certificate,
                    by: Solver::Heuristic,
                }
            }
            Err(f) => last = Some(f),
        }
    }
    RainbowDecision::NotFound(last.unwrap_or(HeuristicFailure {
        reason: FailureReason::Unrepaired,
        unrepaired_components: 0,
        unattached_vertices: 0,
        spare_colours: 0,
    }))
}

fn run_exact(g: &ColouredDigraph, opts: &DecideOptions) -> RainbowDecision {
    match decide_exact(g, opts.root, opts.budget) {
        ExactOutcome::Found(certificate) => RainbowDecision::Found {
            certificate,
            by: Solver::Exact,
        },
        ExactOutcome::Absent => RainbowDecision::Absent { by: Solver::Exact },
        ExactOutcome::TimedOut => RainbowDecision::Unknown,
    }
}

fn run_oracle(g: &ColouredDigraph, opts: &DecideOptions) -> RainbowDecision {
    let found = match opts.root {
        RootChoice::Any => brute_force_oracle(g),
        RootChoice::Fixed(r) => oracle::brute_force_oracle_rooted(g, r),
    };
    match found {
        Ok(Some(certificate)) => RainbowDecision::Found {
            certificate,
            by: Solver::Oracle,
        },
        Ok(None) => RainbowDecision::Absent { by: Solver::Oracle },
        Err(_) => RainbowDecision::Unknown,
    }
}

/// Whether `g` has a rainbow arborescence (rooted at `opts.root` if fixed).
///
/// Cheap necessary conditions (enough colours, at most one vertex of
/// in-degree zero, an arborescence rooted at an allowed vertex) are checked
/// first in every mode except `Oracle`, which is kept independent.
pub fn decide(g: &ColouredDigraph, opts: &DecideOptions) -> RainbowDecision {
    if opts.mode == DecisionMode::Oracle {
        return run_oracle(g, opts);
    }
    let n = g.vertex_count();
    if n == 0 {
        return RainbowDecision::Absent { by: Solver::Precheck };
    }
    if n > 1 {
        let roots = candidate_roots(g);
        let root_ok = match opts.root {
            RootChoice::Any => !roots.is_empty(),
            RootChoice::Fixed(r) => roots.contains(&r),
        };
        if g.distinct_colours() + 1 < n || g.zero_in_count() > 1 || !root_ok {
            return RainbowDecision::Absent { by: Solver::Precheck };
        }
    }
    match opts.mode {
        DecisionMode::Heuristic => run_heuristic(g, opts),
        DecisionMode::Exact => run_exact(g, opts),
        DecisionMode::Auto => match run_heuristic(g, opts) {
            found @ RainbowDecision::Found { .. } => found,
            _ => run_exact(g, opts),
        },
        DecisionMode::Oracle => unreachable!(),
    }
}
