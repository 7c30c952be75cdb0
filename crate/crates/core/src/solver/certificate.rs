use crate::digraph::{ColouredDigraph, ColouredEdge, VertexId};

/// Rainbow arborescence witness: a root plus one parent edge per other vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArborescenceCertificate {
    pub root: VertexId,
    parents: Vec<Option<ColouredEdge>>,
}

impl ArborescenceCertificate {
    pub fn new(root: VertexId, parents: Vec<Option<ColouredEdge>>) -> Self {
        Self { root, parents }
    }

    /// From parent edge indices into `g` (as produced by the solvers).
    pub fn from_edge_indices(g: &ColouredDigraph, root: VertexId, parents: &[Option<u32>]) -> Self {
        Self {
            root,
            parents: parents.iter().map(|p| p.map(|i| g.edge(i as usize))).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.parents.len()
    }

    pub fn parent_edge(&self, v: VertexId) -> Option<ColouredEdge> {
        self.parents.get(v.index()).copied().flatten()
    }

    /// Parent edges of all non-root vertices, by head index.
    pub fn edges(&self) -> impl Iterator<Item = ColouredEdge> + '_ {
        self.parents.iter().flatten().copied()
    }

    /// Checks the certificate against `g` in `O(n)` plus edge lookups:
    /// right size, every non-root vertex has exactly one parent edge that
    /// ends at it and exists in `g`, all colours distinct, and following
    /// parents from any vertex reaches the root.
    pub fn verify(&self, g: &ColouredDigraph) -> bool {
        let n = g.vertex_count();
        if self.parents.len() != n || self.root.index() >= n {
            return false;
        }
        let mut colour_seen = vec![false; g.colour_count()];
        for (v, p) in self.parents.iter().enumerate() {
            match p {
                None if v == self.root.index() => {}
                None => return false,
                Some(_) if v == self.root.index() => return false,
                Some(e) => {
                    if e.head.index() != v || e.tail.index() >= n {
                        return false;
                    }
                    if g.edge_colour(e.tail, e.head) != Some(e.colour) {
                        return false;
                    }
                    let c = e.colour.index();
                    if colour_seen[c] {
                        return false;
                    }
                    colour_seen[c] = true;
                }
            }
        }
        // 0 = unvisited, 1 = on current walk, 2 = known to reach the root.
        let mut state = vec![0u8; n];
        state[self.root.index()] = 2;
        let mut walk = Vec::new();
        for s in 0..n {
            let mut v = s;
            while state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                v = self.parents[v].expect("non-root has parent").tail.index();
            }
            if state[v] == 1 {
                return false;
            }
            for w in walk.drain(..) {
                state[w] = 2;
            }
        }
        true
    }
}
