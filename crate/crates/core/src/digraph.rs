//! Simple coloured digraph with incremental in-degree and colour bookkeeping.
//!
//! Vertices and colours are 0-based. The graph never holds self-loops or
//! parallel edges; edges are kept in insertion (process) order so that
//! tie-breaks elsewhere in the crate can refer to "earliest edge".

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColourId(pub u32);

impl ColourId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ColourId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// A directed edge `tail -> head` carrying one colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColouredEdge {
    pub tail: VertexId,
    pub head: VertexId,
    pub colour: ColourId,
}

impl ColouredEdge {
    pub fn new(tail: u32, head: u32, colour: u32) -> Self {
        Self {
            tail: VertexId(tail),
            head: VertexId(head),
            colour: ColourId(colour),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate edge ({tail}, {head})")]
    DuplicateEdge { tail: u32, head: u32 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("colour {colour} out of range for W = {colours}")]
    ColourOutOfRange { colour: u32, colours: usize },
}

/// Fixed-size bit set used as the `n x n` edge-presence bitmap.
#[derive(Clone, Debug)]
struct BitMatrix {
    n: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let bits = n * n;
        Self {
            n,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    #[inline]
    fn slot(&self, row: usize, col: usize) -> (usize, u64) {
        let bit = row * self.n + col;
        (bit / 64, 1u64 << (bit % 64))
    }

    #[inline]
    fn get(&self, row: usize, col: usize) -> bool {
        let (w, m) = self.slot(row, col);
        self.words[w] & m != 0
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize) {
        let (w, m) = self.slot(row, col);
        self.words[w] |= m;
    }
}

/// Evolving snapshot of the coloured digraph process.
#[derive(Clone, Debug)]
pub struct ColouredDigraph {
    n: usize,
    colours: usize,
    edges: Vec<ColouredEdge>,
    in_edges: Vec<Vec<u32>>,
    out_edges: Vec<Vec<u32>>,
    in_deg: Vec<u32>,
    colour_mult: Vec<u32>,
    zero_in_count: usize,
    distinct_colours: usize,
    present: BitMatrix,
}

impl ColouredDigraph {
    /// Empty graph on `n` vertices with colour palette `0..colours`.
    pub fn new(n: usize, colours: usize) -> Self {
        Self {
            n,
            colours,
            edges: Vec::new(),
            in_edges: vec![Vec::new(); n],
            out_edges: vec![Vec::new(); n],
            in_deg: vec![0; n],
            colour_mult: vec![0; colours],
            zero_in_count: n,
            distinct_colours: 0,
            present: BitMatrix::new(n),
        }
    }

    /// Builds a graph from edges given in process order.
    pub fn from_edges<I>(n: usize, colours: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = ColouredEdge>,
    {
        let mut g = Self::new(n, colours);
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, e: ColouredEdge) -> Result<(), GraphError> {
        let (t, h) = (e.tail.index(), e.head.index());
        for v in [e.tail.0, e.head.0] {
            if v as usize >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        if e.colour.index() >= self.colours {
            return Err(GraphError::ColourOutOfRange {
                colour: e.colour.0,
                colours: self.colours,
            });
        }
        if t == h {
            return Err(GraphError::SelfLoop(e.tail.0));
        }
        if self.present.get(t, h) {
            return Err(GraphError::DuplicateEdge {
                tail: e.tail.0,
                head: e.head.0,
            });
        }
        self.present.set(t, h);
        let idx = self.edges.len() as u32;
        self.edges.push(e);
        self.in_edges[h].push(idx);
        self.out_edges[t].push(idx);
        if self.in_deg[h] == 0 {
            self.zero_in_count -= 1;
        }
        self.in_deg[h] += 1;
        let c = e.colour.index();
        if self.colour_mult[c] == 0 {
            self.distinct_colours += 1;
        }
        self.colour_mult[c] += 1;
        Ok(())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn colour_count(&self) -> usize {
        self.colours
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[ColouredEdge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, idx: usize) -> ColouredEdge {
        self.edges[idx]
    }

    /// Indices (into [`edges`](Self::edges)) of the edges entering `v`, in process order.
    pub fn in_edge_indices(&self, v: VertexId) -> &[u32] {
        &self.in_edges[v.index()]
    }

    /// Indices of the edges leaving `v`, in process order.
    pub fn out_edge_indices(&self, v: VertexId) -> &[u32] {
        &self.out_edges[v.index()]
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_deg[v.index()] as usize
    }

    pub fn in_degrees(&self) -> &[u32] {
        &self.in_deg
    }

    pub fn colour_multiplicities(&self) -> &[u32] {
        &self.colour_mult
    }

    pub fn zero_in_count(&self) -> usize {
        self.zero_in_count
    }

    pub fn distinct_colours(&self) -> usize {
        self.distinct_colours
    }

    pub fn has_edge(&self, tail: VertexId, head: VertexId) -> bool {
        tail.index() < self.n && head.index() < self.n && self.present.get(tail.index(), head.index())
    }

    /// Colour of edge `tail -> head`, if present. Linear in the in-degree of `head`.
    pub fn edge_colour(&self, tail: VertexId, head: VertexId) -> Option<ColourId> {
        if !self.has_edge(tail, head) {
            return None;
        }
        self.in_edges[head.index()]
            .iter()
            .map(|&i| self.edges[i as usize])
            .find(|e| e.tail == tail)
            .map(|e| e.colour)
    }

    /// Vertices with in-degree zero, ascending.
    pub fn zero_in_vertices(&self) -> Vec<VertexId> {
        (0..self.n)
            .filter(|&v| self.in_deg[v] == 0)
            .map(|v| VertexId(v as u32))
            .collect()
    }

    /// Forward closure of `roots`.
    pub fn reachable_from(&self, roots: &[VertexId]) -> Vec<VertexId> {
        let seen = forward_closure(self.n, roots.iter().map(|r| r.index()), |v| {
            self.out_edges[v]
                .iter()
                .map(move |&i| self.edges[i as usize].head.index())
        });
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(v, _)| VertexId(v as u32))
            .collect()
    }

    /// Strongly connected components, as a component id per vertex. Component
    /// ids are assigned in topological order of the condensation (sources first).
    pub fn strongly_connected_components(&self) -> (usize, Vec<u32>) {
        kosaraju(self)
    }

    /// Vertices that reach every vertex: the members of the unique source
    /// component of the condensation, or nothing if there are several sources.
    pub fn arborescence_roots(&self) -> Vec<VertexId> {
        if self.n == 0 {
            return Vec::new();
        }
        let (count, comp) = self.strongly_connected_components();
        let mut has_entry = vec![false; count];
        for e in &self.edges {
            let (a, b) = (comp[e.tail.index()], comp[e.head.index()]);
            if a != b {
                has_entry[b as usize] = true;
            }
        }
        let sources: Vec<usize> = (0..count).filter(|&c| !has_entry[c]).collect();
        if sources.len() != 1 {
            return Vec::new();
        }
        let src = sources[0] as u32;
        (0..self.n)
            .filter(|&v| comp[v] == src)
            .map(|v| VertexId(v as u32))
            .collect()
    }

    /// Whether some vertex reaches all others; returns the lowest such root.
    pub fn has_spanning_arborescence(&self) -> Option<VertexId> {
        self.arborescence_roots().into_iter().next()
    }
}

/// Forward closure over an arbitrary successor function. Returns a visited
/// flag per vertex.
pub fn forward_closure<R, F, I>(n: usize, roots: R, successors: F) -> Vec<bool>
where
    R: IntoIterator<Item = usize>,
    F: Fn(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    for r in roots {
        if !seen[r] {
            seen[r] = true;
            stack.push(r);
        }
    }
    while let Some(v) = stack.pop() {
        for w in successors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

// Iterative Kosaraju. Second pass runs on the reverse graph in decreasing
// finish time, which yields components in topological order.
fn kosaraju(g: &ColouredDigraph) -> (usize, Vec<u32>) {
    let n = g.n;
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for s in 0..n {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        stack.push((s, 0));
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            let outs = &g.out_edges[v];
            if *pos < outs.len() {
                let w = g.edges[outs[*pos] as usize].head.index();
                *pos += 1;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }

    const UNSET: u32 = u32::MAX;
    let mut comp = vec![UNSET; n];
    let mut count = 0u32;
    let mut work = Vec::new();
    for &s in order.iter().rev() {
        if comp[s] != UNSET {
            continue;
        }
        comp[s] = count;
        work.push(s);
        while let Some(v) = work.pop() {
            for &i in &g.in_edges[v] {
                let u = g.edges[i as usize].tail.index();
                if comp[u] == UNSET {
                    comp[u] = count;
                    work.push(u);
                }
            }
        }
        count += 1;
    }
    (count as usize, comp)
}
