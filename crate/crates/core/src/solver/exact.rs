//! Complete backtracking search for a rainbow arborescence.
//!
//! The tree grows from a fixed root. Each search node picks a frontier edge
//! (tail in the tree, head outside, colour unused) and branches on taking it
//! or excluding it for the rest of the subtree. Before branching, a vertex
//! left with a single admissible in-edge claims that edge's colour (every
//! other edge of the colour is excluded) and is attached directly once the
//! tail is in the tree. The node is cut if
//!
//! * some outside vertex has no admissible in-edge,
//! * fewer unused colours are available than outside vertices remain,
//! * the outside vertices cannot be matched to distinct available colours, or
//! * some outside vertex is unreachable from the tree over admissible edges.

use std::time::{Duration, Instant};

use super::certificate::ArborescenceCertificate;
use crate::digraph::{forward_closure, ColouredDigraph, VertexId};
use crate::matching::maximum_matching_size;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Found(ArborescenceCertificate),
    Absent,
    TimedOut,
}

impl ExactOutcome {
    pub fn certificate(&self) -> Option<&ArborescenceCertificate> {
        match self {
            ExactOutcome::Found(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootChoice {
    Any,
    Fixed(VertexId),
}

struct Deadline {
    at: Option<Instant>,
    ticks: u32,
    expired: bool,
}

impl Deadline {
    fn new(budget: Option<Duration>) -> Self {
        Self {
            at: budget.map(|b| Instant::now() + b),
            ticks: 0,
            expired: false,
        }
    }

    fn check(&mut self) -> bool {
        if self.expired {
            return true;
        }
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(64) {
            if let Some(at) = self.at {
                self.expired = Instant::now() >= at;
            }
        }
        self.expired
    }
}

#[derive(Clone)]
struct State {
    in_tree: Vec<bool>,
    colour_used: Vec<bool>,
    excluded: Vec<bool>,
    parent: Vec<Option<u32>>,
    size: usize,
}

struct Search<'g> {
    g: &'g ColouredDigraph,
    by_colour: Vec<Vec<u32>>,
    deadline: Deadline,
}

enum Step {
    Found(Vec<Option<u32>>),
    Dead,
    Timeout,
}

impl<'g> Search<'g> {
    #[inline]
    fn admissible(&self, s: &State, idx: u32) -> bool {
        let e = self.g.edge(idx as usize);
        !s.excluded[idx as usize] && !s.colour_used[e.colour.index()]
    }

    fn attach(&self, s: &mut State, idx: u32) {
        let e = self.g.edge(idx as usize);
        let v = e.head.index();
        debug_assert!(s.in_tree[e.tail.index()] && !s.in_tree[v]);
        s.in_tree[v] = true;
        s.colour_used[e.colour.index()] = true;
        s.parent[v] = Some(idx);
        s.size += 1;
    }

    /// Forced attachments and cuts. Returns false on a dead node.
    fn propagate(&self, s: &mut State) -> bool {
        let n = self.g.vertex_count();
        loop {
            let mut changed = false;
            for v in 0..n {
                if s.in_tree[v] {
                    continue;
                }
                let mut count = 0;
                let mut last = 0u32;
                for &i in self.g.in_edge_indices(VertexId(v as u32)) {
                    if self.admissible(s, i) {
                        count += 1;
                        last = i;
                        if count > 1 {
                            break;
                        }
                    }
                }
                if count == 0 {
                    return false;
                }
                if count == 1 {
                    let e = self.g.edge(last as usize);
                    for &j in &self.by_colour[e.colour.index()] {
                        if j != last && !s.excluded[j as usize] {
                            s.excluded[j as usize] = true;
                            changed = true;
                        }
                    }
                    if s.in_tree[e.tail.index()] {
                        self.attach(s, last);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn bounds_hold(&self, s: &State) -> bool {
        let n = self.g.vertex_count();
        let remaining = n - s.size;
        if remaining == 0 {
            return true;
        }
        let w = self.g.colour_count();
        let mut avail = vec![false; w];
        let mut avail_count = 0;
        let mut adj: Vec<Vec<u32>> = Vec::with_capacity(remaining);
        for v in (0..n).filter(|&v| !s.in_tree[v]) {
            let mut cs = Vec::new();
            for &i in self.g.in_edge_indices(VertexId(v as u32)) {
                if self.admissible(s, i) {
                    let c = self.g.edge(i as usize).colour.0;
                    cs.push(c);
                    if !avail[c as usize] {
                        avail[c as usize] = true;
                        avail_count += 1;
                    }
                }
            }
            adj.push(cs);
        }
        if avail_count < remaining {
            return false;
        }
        let reach = forward_closure(n, (0..n).filter(|&v| s.in_tree[v]), |v| {
            self.g
                .out_edge_indices(VertexId(v as u32))
                .iter()
                .filter(|&&i| self.admissible(s, i))
                .map(|&i| self.g.edge(i as usize).head.index())
        });
        if reach.iter().any(|&r| !r) {
            return false;
        }
        maximum_matching_size(&adj, w) == remaining
    }

    /// Frontier edge to branch on: the outside vertex with the fewest
    /// admissible in-edges among those reachable in one step, then its
    /// earliest frontier edge.
    fn pick_branch(&self, s: &State) -> Option<u32> {
        let n = self.g.vertex_count();
        let mut best: Option<(usize, u32)> = None;
        for v in (0..n).filter(|&v| !s.in_tree[v]) {
            let mut total = 0;
            let mut frontier = None;
            for &i in self.g.in_edge_indices(VertexId(v as u32)) {
                if self.admissible(s, i) {
                    total += 1;
                    if frontier.is_none() && s.in_tree[self.g.edge(i as usize).tail.index()] {
                        frontier = Some(i);
                    }
                }
            }
            if let Some(f) = frontier {
                if best.is_none_or(|(t, _)| total < t) {
                    best = Some((total, f));
                }
            }
        }
        best.map(|(_, f)| f)
    }

    fn run(&mut self, mut s: State) -> Step {
        if self.deadline.check() {
            return Step::Timeout;
        }
        if !self.propagate(&mut s) || !self.bounds_hold(&s) {
            return Step::Dead;
        }
        if s.size == self.g.vertex_count() {
            return Step::Found(s.parent);
        }
        let Some(edge) = self.pick_branch(&s) else {
            return Step::Dead;
        };
        let mut take = s.clone();
        self.attach(&mut take, edge);
        match self.run(take) {
            Step::Dead => {}
            other => return other,
        }
        s.excluded[edge as usize] = true;
        self.run(s)
    }
}

/// Candidate roots in search order: members of the unique source component,
/// by increasing in-degree then index. Empty when no arborescence exists.
pub fn candidate_roots(g: &ColouredDigraph) -> Vec<VertexId> {
    let mut roots = g.arborescence_roots();
    roots.sort_by_key(|&v| (g.in_degree(v), v));
    roots
}

/// Exact decision, optionally time-bounded. `TimedOut` is returned only if
/// no root produced a certificate and at least one root ran out of time.
pub fn decide_exact(g: &ColouredDigraph, root: RootChoice, budget: Option<Duration>) -> ExactOutcome {
    let n = g.vertex_count();
    if n == 0 {
        return ExactOutcome::Absent;
    }
    if n == 1 {
        return ExactOutcome::Found(ArborescenceCertificate::new(VertexId(0), vec![None]));
    }
    if g.distinct_colours() + 1 < n || g.zero_in_count() > 1 {
        return ExactOutcome::Absent;
    }
    let mut roots = candidate_roots(g);
    if let RootChoice::Fixed(r) = root {
        roots.retain(|&v| v == r);
    }
    let mut by_colour = vec![Vec::new(); g.colour_count()];
    for (i, e) in g.edges().iter().enumerate() {
        by_colour[e.colour.index()].push(i as u32);
    }
    let mut search = Search {
        g,
        by_colour,
        deadline: Deadline::new(budget),
    };
    let mut timed_out = false;
    for r in roots {
        let mut state = State {
            in_tree: vec![false; n],
            colour_used: vec![false; g.colour_count()],
            excluded: vec![false; g.edge_count()],
            parent: vec![None; n],
            size: 1,
        };
        state.in_tree[r.index()] = true;
        match search.run(state) {
            Step::Found(parents) => {
                let cert = ArborescenceCertificate::from_edge_indices(g, r, &parents);
                assert!(cert.verify(g), "exact solver produced an invalid certificate");
                return ExactOutcome::Found(cert);
            }
            Step::Dead => {}
            Step::Timeout => {
                timed_out = true;
                break;
            }
        }
    }
    if timed_out {
        ExactOutcome::TimedOut
    } else {
        ExactOutcome::Absent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::ColouredEdge;

    fn e(t: u32, h: u32, c: u32) -> ColouredEdge {
        ColouredEdge::new(t, h, c)
    }

    #[test]
    fn too_few_colours_is_absent() {
        let g = ColouredDigraph::from_edges(3, 2, [e(0, 1, 0), e(0, 2, 0), e(1, 2, 0)]).unwrap();
        assert_eq!(decide_exact(&g, RootChoice::Any, None), ExactOutcome::Absent);
    }

    #[test]
    fn star_from_root() {
        let g = ColouredDigraph::from_edges(4, 5, [e(0, 1, 4), e(0, 2, 1), e(0, 3, 2)]).unwrap();
        let out = decide_exact(&g, RootChoice::Any, None);
        let cert = out.certificate().unwrap();
        assert_eq!(cert.root, VertexId(0));
        assert!(cert.verify(&g));
    }

    #[test]
    fn unique_rainbow_tree() {
        // The only rainbow arborescence is 0->1 (c0), 0->3 (c1), 3->2 (c2).
        let g =
            ColouredDigraph::from_edges(4, 3, [e(0, 1, 0), e(1, 2, 0), e(2, 3, 1), e(0, 3, 1), e(3, 2, 2)]).unwrap();
        let out = decide_exact(&g, RootChoice::Any, None);
        assert!(out.certificate().unwrap().verify(&g));
    }

    #[test]
    fn fixed_root_outside_source_component() {
        let g = ColouredDigraph::from_edges(3, 3, [e(0, 1, 0), e(1, 2, 1)]).unwrap();
        assert_eq!(
            decide_exact(&g, RootChoice::Fixed(VertexId(1)), None),
            ExactOutcome::Absent
        );
    }

    #[test]
    fn zero_budget_times_out_or_answers() {
        let g = ColouredDigraph::from_edges(3, 3, [e(0, 1, 0), e(1, 2, 1)]).unwrap();
        let out = decide_exact(&g, RootChoice::Any, Some(Duration::ZERO));
        assert!(matches!(out, ExactOutcome::Found(_) | ExactOutcome::TimedOut));
    }
}
