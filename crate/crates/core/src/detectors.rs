//! Events on a process prefix and their hitting times.
//!
//! * `C`: edges in at least `n - 1` colours
//! * `Z`: at most one vertex of in-degree zero
//! * `A`: some vertex reaches every vertex (spanning arborescence)
//! * `R`: a rainbow spanning arborescence exists
//!
//! All four are monotone in the number of edges: adding edges never breaks
//! a witness. `m_C` and `m_Z` fall out of one streaming pass; `m_A` and
//! `m_R` are located by galloping then bisecting over prefixes.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::digraph::ColouredDigraph;
use crate::process::ProcessTrace;
use crate::solver::{decide, DecideOptions, DecisionMode, HeuristicParams, RainbowDecision, RootChoice, Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    C,
    Z,
    A,
    R,
}

impl FromStr for Event {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C" | "c" => Ok(Event::C),
            "Z" | "z" => Ok(Event::Z),
            "A" | "a" => Ok(Event::A),
            "R" | "r" => Ok(Event::R),
            _ => Err(format!("unknown event {s:?}")),
        }
    }
}

/// How `m_R` was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RDecisionMode {
    Exact,
    HeuristicCertified,
    Unknown,
}

impl fmt::Display for RDecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RDecisionMode::Exact => "exact",
            RDecisionMode::HeuristicCertified => "heuristic-certified",
            RDecisionMode::Unknown => "unknown",
        })
    }
}

/// Hitting times; `None` means the event never occurs (or, for `m_r` with
/// [`RDecisionMode::Unknown`], that it could not be determined).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HittingTimes {
    pub m_c: Option<usize>,
    pub m_z: usize,
    pub m_a: usize,
    pub m_r: Option<usize>,
    pub r_decision_mode: RDecisionMode,
}

impl HittingTimes {
    /// `m_Z <= m_A <= m_R` and `m_C <= m_R` wherever defined (so
    /// `m_R >= max(m_A, m_C) >= m_Z`). `m_C` itself is usually far below
    /// `m_Z`; nothing orders those two.
    pub fn ordering_holds(&self) -> bool {
        let mut ok = self.m_z <= self.m_a;
        if let Some(r) = self.m_r {
            ok &= self.m_a <= r && self.m_c.is_some_and(|c| c <= r);
        }
        ok
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RSearch {
    pub mode: DecisionMode,
    pub budget: Option<Duration>,
    pub heuristic: HeuristicParams,
}

impl RSearch {
    pub fn new(mode: DecisionMode) -> Self {
        Self {
            mode,
            budget: Some(crate::solver::DEFAULT_BUDGET),
            heuristic: HeuristicParams::default(),
        }
    }

    fn options(&self) -> DecideOptions {
        DecideOptions {
            mode: self.mode,
            root: RootChoice::Any,
            budget: self.budget,
            heuristic: self.heuristic,
        }
    }
}

pub fn event_holds(g: &ColouredDigraph, event: Event, search: &RSearch) -> bool {
    let n = g.vertex_count();
    match event {
        Event::C => g.distinct_colours() + 1 >= n,
        Event::Z => g.zero_in_count() <= 1,
        Event::A => n <= 1 || g.has_spanning_arborescence().is_some(),
        Event::R => decide(g, &search.options()).holds(),
    }
}

/// Smallest `m` in `(lo, total]` with `pred(m)`, given `pred(lo)` is false
/// (or `lo` is the start) and `pred` is monotone. Galloping keeps the probed
/// prefixes short when the answer is close to `lo`.
fn first_true<F>(lo: usize, total: usize, mut pred: F) -> Result<Option<usize>, ()>
where
    F: FnMut(usize) -> Result<bool, ()>,
{
    let mut low = lo; // known false (or not yet a candidate)
    let mut step = 1usize;
    let mut high;
    loop {
        high = (low + step).min(total);
        if high <= low {
            return Ok(None);
        }
        if pred(high)? {
            break;
        }
        if high == total {
            return Ok(None);
        }
        low = high;
        step *= 2;
    }
    while high - low > 1 {
        let mid = low + (high - low) / 2;
        if pred(mid)? {
            high = mid;
        } else {
            low = mid;
        }
    }
    Ok(Some(high))
}

/// Computes all four hitting times of `trace`.
pub fn hitting_times(trace: &mut ProcessTrace, search: &RSearch) -> HittingTimes {
    let n = trace.n();
    let total = trace.total_len();
    let mut g = ColouredDigraph::new(n, trace.colours());
    let mut m_c = None;
    let mut m_z = None;
    let mut m = 0;
    while (m_c.is_none() || m_z.is_none()) && m < total {
        let e = trace.edge(m);
        g.add_edge(e).expect("trace edges are distinct");
        m += 1;
        if m_c.is_none() && g.distinct_colours() + 1 >= n {
            m_c = Some(m);
        }
        if m_z.is_none() && g.zero_in_count() <= 1 {
            m_z = Some(m);
        }
    }
    let m_z = m_z.expect("complete digraph has no vertex of in-degree zero");

    let m_a = if trace.graph_at(m_z).has_spanning_arborescence().is_some() {
        m_z
    } else {
        first_true(m_z, total, |k| {
            Ok(trace.graph_at(k).has_spanning_arborescence().is_some())
        })
        .expect("infallible")
        .expect("complete digraph has an arborescence")
    };

    let (m_r, r_decision_mode) = match m_c {
        None => (None, RDecisionMode::Exact),
        Some(m_c) => find_m_r(trace, m_a.max(m_c), search),
    };
    HittingTimes {
        m_c,
        m_z,
        m_a,
        m_r,
        r_decision_mode,
    }
}

fn find_m_r(trace: &mut ProcessTrace, lower: usize, search: &RSearch) -> (Option<usize>, RDecisionMode) {
    let total = trace.total_len();
    let opts = search.options();
    let at_lower = decide(&trace.graph_at(lower), &opts);
    match &at_lower {
        RainbowDecision::Found { by, .. } => {
            let how = if *by == Solver::Heuristic {
                RDecisionMode::HeuristicCertified
            } else {
                RDecisionMode::Exact
            };
            return (Some(lower), how);
        }
        RainbowDecision::Unknown => return (None, RDecisionMode::Unknown),
        RainbowDecision::NotFound(_) => {
            // A one-sided procedure cannot drive a bisection.
            return (None, RDecisionMode::Unknown);
        }
        RainbowDecision::Absent { .. } => {}
    }
    if search.mode == DecisionMode::Heuristic {
        // Precheck-level negatives are exact, but the search itself would
        // need exact negatives at every probe.
        return (None, RDecisionMode::Unknown);
    }
    let found = first_true(lower, total, |k| match decide(&trace.graph_at(k), &opts) {
        RainbowDecision::Found { .. } => Ok(true),
        RainbowDecision::Absent { .. } => Ok(false),
        RainbowDecision::NotFound(_) | RainbowDecision::Unknown => Err(()),
    });
    match found {
        Ok(m_r) => (m_r, RDecisionMode::Exact),
        Err(()) => (None, RDecisionMode::Unknown),
    }
}

/// Replaces undefined `m_C` / `m_R` by `n(n-1)` when they are undefined
/// because colours never suffice (the convention where the process stops
/// at the last step).
pub fn saturate_undefined(times: &HittingTimes, n: usize) -> HittingTimes {
    let last = n * (n - 1);
    let mut out = *times;
    if times.m_c.is_none() {
        out.m_c = Some(last);
        if times.r_decision_mode == RDecisionMode::Exact {
            out.m_r = Some(last);
        }
    }
    out
}
