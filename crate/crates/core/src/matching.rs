//! Vertex/colour bipartite graph and the colour assignment that gives every
//! non-root vertex its own colour.
//!
//! A vertex `v` is adjacent to colour `c` when some edge into `v` has colour
//! `c`. An assignment for root `u` is a matching saturating `V \ {u}`; when
//! none exists, Hall's condition fails and a k-witness `(S, T)` with
//! `|T| = |S| - 1` and `N(S) ⊆ T` certifies it.

use std::collections::VecDeque;

use crate::digraph::{ColourId, ColouredDigraph, VertexId};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourBipartiteGraph {
    colours: usize,
    adj: Vec<Vec<u32>>,
}

impl ColourBipartiteGraph {
    /// Builds directly from per-vertex colour lists (deduplicated and sorted here).
    pub fn from_adjacency(colours: usize, mut adj: Vec<Vec<u32>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            debug_assert!(list.iter().all(|&c| (c as usize) < colours));
        }
        Self { colours, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn colour_count(&self) -> usize {
        self.colours
    }

    /// Colours adjacent to `v`, ascending.
    pub fn neighbours(&self, v: VertexId) -> &[u32] {
        &self.adj[v.index()]
    }

    /// `N(S)`, ascending.
    pub fn neighbourhood(&self, set: &[VertexId]) -> Vec<ColourId> {
        let mut out: Vec<u32> = set.iter().flat_map(|v| self.adj[v.index()].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out.into_iter().map(ColourId).collect()
    }
}

pub fn build_colour_bigraph(g: &ColouredDigraph) -> ColourBipartiteGraph {
    let adj = (0..g.vertex_count())
        .map(|v| {
            g.in_edge_indices(VertexId(v as u32))
                .iter()
                .map(|&i| g.edge(i as usize).colour.0)
                .collect()
        })
        .collect();
    ColourBipartiteGraph::from_adjacency(g.colour_count(), adj)
}

/// Injective map `V \ {root} -> colours`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourAssignment {
    pub root: VertexId,
    colour_of: Vec<Option<ColourId>>,
}

impl ColourAssignment {
    pub fn colour_of(&self, v: VertexId) -> Option<ColourId> {
        self.colour_of[v.index()]
    }

    /// `(v, f(v))` for every non-root vertex, by vertex index.
    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, ColourId)> + '_ {
        self.colour_of
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| (VertexId(v as u32), c)))
    }

    /// The mapping colours `T`, ascending.
    pub fn mapping_colours(&self) -> Vec<ColourId> {
        let mut t: Vec<_> = self.colour_of.iter().flatten().copied().collect();
        t.sort_unstable();
        t
    }

    /// Chooses, for every non-root `v`, the earliest in-edge of colour `f(v)`.
    /// Returns edge indices into `g`, indexed by vertex (`None` at the root).
    pub fn materialize(&self, g: &ColouredDigraph) -> Vec<Option<u32>> {
        self.colour_of
            .iter()
            .enumerate()
            .map(|(v, c)| {
                c.map(|c| {
                    *g.in_edge_indices(VertexId(v as u32))
                        .iter()
                        .find(|&&i| g.edge(i as usize).colour == c)
                        .expect("assignment colour must appear on an in-edge")
                })
            })
            .collect()
    }

    /// Checks injectivity and that each assigned colour is adjacent.
    pub fn is_valid_for(&self, b: &ColourBipartiteGraph) -> bool {
        let mut seen = vec![false; b.colour_count()];
        for (v, c) in self.colour_of.iter().enumerate() {
            if v == self.root.index() {
                if c.is_some() {
                    return false;
                }
                continue;
            }
            let Some(c) = c else { return false };
            if seen[c.index()] || b.adj[v].binary_search(&c.0).is_err() {
                return false;
            }
            seen[c.index()] = true;
        }
        true
    }
}

/// Hall violator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KWitness {
    pub vertices: Vec<VertexId>,
    pub colours: Vec<ColourId>,
}

impl KWitness {
    /// `|T| = |S| - 1` and `N(S) ⊆ T`.
    pub fn is_valid_for(&self, b: &ColourBipartiteGraph) -> bool {
        if self.vertices.is_empty() || self.colours.len() + 1 != self.vertices.len() {
            return false;
        }
        let nbrs = b.neighbourhood(&self.vertices);
        nbrs.iter().all(|c| self.colours.binary_search(c).is_ok())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentFailure {
    /// Non-root vertices left unmatched by a maximum matching.
    pub unmatched: Vec<VertexId>,
    pub matched: usize,
}

/// Maximum matching of `V \ {root}` into the colours.
#[derive(Clone, Debug)]
struct Matching {
    vertex_match: Vec<u32>,
    colour_match: Vec<u32>,
}

fn maximum_matching(b: &ColourBipartiteGraph, root: VertexId) -> Matching {
    kuhn(&b.adj, b.colours, root.index())
}

/// Size of a maximum matching between `adj.len()` left vertices and
/// `colours` right vertices.
pub fn maximum_matching_size(adj: &[Vec<u32>], colours: usize) -> usize {
    kuhn(adj, colours, usize::MAX)
        .vertex_match
        .iter()
        .filter(|&&c| c != NONE)
        .count()
}

// Kuhn's algorithm with a greedy start; left vertex `skip` is left out.
fn kuhn(adj: &[Vec<u32>], colours: usize, skip: usize) -> Matching {
    let n = adj.len();
    let mut vertex_match = vec![NONE; n];
    let mut colour_match = vec![NONE; colours];

    // Greedy seed.
    for v in 0..n {
        if v == skip {
            continue;
        }
        if let Some(&c) = adj[v].iter().find(|&&c| colour_match[c as usize] == NONE) {
            vertex_match[v] = c;
            colour_match[c as usize] = v as u32;
        }
    }

    // One BFS per free vertex over alternating paths. `scanned_from[c]` is the
    // vertex whose adjacency list first reached colour `c`.
    let mut scanned_from = vec![NONE; colours];
    let mut touched: Vec<u32> = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if s == skip || vertex_match[s] != NONE || adj[s].is_empty() {
            continue;
        }
        queue.clear();
        queue.push_back(s as u32);
        let mut free: Option<(u32, u32)> = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for &c in &adj[v as usize] {
                if scanned_from[c as usize] != NONE {
                    continue;
                }
                scanned_from[c as usize] = v;
                touched.push(c);
                match colour_match[c as usize] {
                    NONE => {
                        free = Some((v, c));
                        break 'bfs;
                    }
                    owner => queue.push_back(owner),
                }
            }
        }
        if let Some((mut v, mut c)) = free {
            loop {
                let previous = vertex_match[v as usize];
                vertex_match[v as usize] = c;
                colour_match[c as usize] = v;
                if v as usize == s {
                    break;
                }
                c = previous;
                v = scanned_from[c as usize];
            }
        }
        for &c in &touched {
            scanned_from[c as usize] = NONE;
        }
        touched.clear();
    }
    Matching {
        vertex_match,
        colour_match,
    }
}

/// Colour assignment for `root`, or the unmatched vertices of a maximum matching.
pub fn find_colour_assignment(b: &ColourBipartiteGraph, root: VertexId) -> Result<ColourAssignment, AssignmentFailure> {
    let m = maximum_matching(b, root);
    let unmatched: Vec<VertexId> = (0..b.vertex_count())
        .filter(|&v| v != root.index() && m.vertex_match[v] == NONE)
        .map(|v| VertexId(v as u32))
        .collect();
    if unmatched.is_empty() {
        let colour_of = m
            .vertex_match
            .iter()
            .map(|&c| (c != NONE).then_some(ColourId(c)))
            .collect();
        Ok(ColourAssignment { root, colour_of })
    } else {
        let matched = m.colour_match.iter().filter(|&&v| v != NONE).count();
        Err(AssignmentFailure { unmatched, matched })
    }
}

/// A k-witness for `V \ {root}`, or `None` exactly when an assignment exists.
///
/// Takes one unmatched vertex of a maximum matching and collects the left
/// vertices reachable from it along alternating paths; their neighbourhood
/// consists of matched colours only, one per reached vertex other than the
/// start, which gives `|N(S)| = |S| - 1`.
pub fn find_k_witness(b: &ColourBipartiteGraph, root: VertexId) -> Option<KWitness> {
    let m = maximum_matching(b, root);
    let start = (0..b.vertex_count()).find(|&v| v != root.index() && m.vertex_match[v] == NONE)?;

    let mut in_s = vec![false; b.vertex_count()];
    let mut in_t = vec![false; b.colours];
    let mut queue = VecDeque::from([start]);
    in_s[start] = true;
    while let Some(v) = queue.pop_front() {
        for &c in &b.adj[v] {
            if in_t[c as usize] {
                continue;
            }
            in_t[c as usize] = true;
            let owner = m.colour_match[c as usize];
            debug_assert_ne!(owner, NONE, "free colour reachable means augmenting path");
            if owner != NONE && !in_s[owner as usize] {
                in_s[owner as usize] = true;
                queue.push_back(owner as usize);
            }
        }
    }
    let mut vertices: Vec<VertexId> = (0..b.vertex_count())
        .filter(|&v| in_s[v])
        .map(|v| VertexId(v as u32))
        .collect();
    let colours: Vec<ColourId> = (0..b.colours)
        .filter(|&c| in_t[c])
        .map(|c| ColourId(c as u32))
        .collect();
    // Dropping vertices keeps N(S) ⊆ T.
    while colours.len() + 1 < vertices.len() {
        let pos = vertices.iter().rposition(|v| v.index() != start).expect("start kept");
        vertices.remove(pos);
    }
    Some(KWitness { vertices, colours })
}
