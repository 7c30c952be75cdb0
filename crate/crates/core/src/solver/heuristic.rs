//! Constructive rainbow arborescence search built around a colour assignment.
//!
//! 1. Match every non-root vertex to its own colour (the mapping colours).
//! 2. Give every non-root vertex one in-edge in its mapping colour, taking
//!    edges whose tail is already hanging off the root whenever possible.
//!    The result is a functional in-digraph: the root's arborescence plus
//!    unicyclic components.
//! 3. Repair: re-parent a vertex of a detached component onto an edge whose
//!    tail is attached and whose colour is either unused (spare pool) or the
//!    colour the vertex is giving up. Cycle vertices are tried first since
//!    they bring the whole component along; smallest components go first.
//! 4. Repeat until everything hangs off the root or no repair applies.
//!
//! Success is always a verified certificate; failure says nothing about
//! existence.

use super::certificate::ArborescenceCertificate;
use crate::digraph::{ColouredDigraph, VertexId};
use crate::matching::{build_colour_bigraph, find_colour_assignment};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeuristicParams {
    /// Fraction of the non-mapping colours made available for repairs.
    pub spare_pool_fraction: f64,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        Self {
            spare_pool_fraction: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureReason {
    /// No colour assignment exists for this root.
    NoAssignment,
    /// Some components could not be reconnected.
    Unrepaired,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicFailure {
    pub reason: FailureReason,
    pub unrepaired_components: usize,
    pub unattached_vertices: usize,
    pub spare_colours: usize,
}

struct Forest {
    parent: Vec<Option<u32>>,
    used: Vec<bool>,
}

/// Component structure of the parent-pointer graph.
struct Layout {
    attached: Vec<bool>,
    /// Detached components: (cycle vertices, other vertices), both ascending.
    components: Vec<(Vec<usize>, Vec<usize>)>,
}

fn layout(g: &ColouredDigraph, root: usize, parent: &[Option<u32>]) -> Layout {
    let n = parent.len();
    const UNSEEN: u32 = u32::MAX;
    const ATTACHED: u32 = u32::MAX - 1;
    const ON_WALK: u32 = u32::MAX - 2;
    // label: UNSEEN, ATTACHED, ON_WALK, or a detached component id.
    let mut label = vec![UNSEEN; n];
    label[root] = ATTACHED;
    let mut components: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut walk = Vec::new();
    for s in 0..n {
        let mut v = s;
        while label[v] == UNSEEN {
            label[v] = ON_WALK;
            walk.push(v);
            v = g.edge(parent[v].expect("non-root has parent") as usize).tail.index();
        }
        let resolved = if label[v] == ON_WALK {
            // New cycle: vertices of the walk from `v` onwards.
            let id = components.len() as u32;
            let pos = walk.iter().position(|&w| w == v).expect("on walk");
            let mut cycle: Vec<usize> = walk[pos..].to_vec();
            cycle.sort_unstable();
            components.push((cycle, Vec::new()));
            for &w in &walk[pos..] {
                label[w] = id;
            }
            walk.truncate(pos);
            id
        } else {
            label[v]
        };
        for w in walk.drain(..) {
            label[w] = resolved;
            if resolved != ATTACHED {
                components[resolved as usize].1.push(w);
            }
        }
    }
    for (_, rest) in &mut components {
        rest.sort_unstable();
    }
    Layout {
        attached: label.iter().map(|&l| l == ATTACHED).collect(),
        components,
    }
}

fn try_reparent(g: &ColouredDigraph, forest: &mut Forest, allowed: &[bool], attached: &[bool], v: usize) -> bool {
    let old = forest.parent[v].map(|i| g.edge(i as usize).colour.index());
    for &i in g.in_edge_indices(VertexId(v as u32)) {
        let e = g.edge(i as usize);
        let c = e.colour.index();
        if !attached[e.tail.index()] || !allowed[c] {
            continue;
        }
        if forest.used[c] && Some(c) != old {
            continue;
        }
        if let Some(o) = old {
            forest.used[o] = false;
        }
        forest.used[c] = true;
        forest.parent[v] = Some(i);
        return true;
    }
    false
}

pub fn heuristic_construct(
    g: &ColouredDigraph,
    root: VertexId,
    params: &HeuristicParams,
) -> Result<ArborescenceCertificate, HeuristicFailure> {
    let n = g.vertex_count();
    let w = g.colour_count();
    let r = root.index();
    if n == 1 {
        return Ok(ArborescenceCertificate::new(root, vec![None]));
    }
    let b = build_colour_bigraph(g);
    let assignment = find_colour_assignment(&b, root).map_err(|f| HeuristicFailure {
        reason: FailureReason::NoAssignment,
        unrepaired_components: 0,
        unattached_vertices: f.unmatched.len(),
        spare_colours: 0,
    })?;

    let mut allowed = vec![false; w];
    for (_, c) in assignment.pairs() {
        allowed[c.index()] = true;
    }
    let non_mapping: Vec<usize> = (0..w).filter(|&c| !allowed[c]).collect();
    let pool = ((params.spare_pool_fraction.clamp(0.0, 1.0) * non_mapping.len() as f64).ceil() as usize)
        .min(non_mapping.len());
    for &c in &non_mapping[..pool] {
        allowed[c] = true;
    }

    // Materialise mapping edges, preferring tails already hanging off the root.
    let mut forest = Forest {
        parent: vec![None; n],
        used: vec![false; w],
    };
    let mut hung = vec![false; n];
    hung[r] = true;
    let mut queue = vec![r];
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for &i in g.out_edge_indices(VertexId(u as u32)) {
            let e = g.edge(i as usize);
            let v = e.head.index();
            if !hung[v] && assignment.colour_of(e.head) == Some(e.colour) {
                hung[v] = true;
                forest.parent[v] = Some(i);
                queue.push(v);
            }
        }
    }
    let fallback = assignment.materialize(g);
    for (v, (slot, fb)) in forest.parent.iter_mut().zip(fallback).enumerate() {
        if v != r && slot.is_none() {
            *slot = fb;
        }
    }
    for (_, c) in assignment.pairs() {
        forest.used[c.index()] = true;
    }

    loop {
        let mut lay = layout(g, r, &forest.parent);
        if lay.components.is_empty() {
            break;
        }
        lay.components.sort_by_key(|(cycle, rest)| {
            (
                cycle.len() + rest.len(),
                cycle[0].min(rest.first().copied().unwrap_or(usize::MAX)),
            )
        });
        let repaired = lay.components.iter().any(|(cycle, rest)| {
            cycle
                .iter()
                .chain(rest.iter())
                .any(|&v| try_reparent(g, &mut forest, &allowed, &lay.attached, v))
        });
        if !repaired {
            let spare = (0..w).filter(|&c| allowed[c] && !forest.used[c]).count();
            return Err(HeuristicFailure {
                reason: FailureReason::Unrepaired,
                unrepaired_components: lay.components.len(),
                unattached_vertices: lay.attached.iter().filter(|&&a| !a).count(),
                spare_colours: spare,
            });
        }
    }

    let cert = ArborescenceCertificate::from_edge_indices(g, root, &forest.parent);
    assert!(cert.verify(g), "heuristic produced an invalid certificate");
    Ok(cert)
}
