//! Shared generators and independent reference implementations.
#![allow(dead_code)]

use rainbow_core::process::rng_from_seed;
use rainbow_core::{ColouredDigraph, ColouredEdge};
use rand::Rng;

/// Each ordered pair present with probability `p`, uniform colour in `0..w`.
pub fn random_graph(n: usize, w: usize, p: f64, seed: u64) -> ColouredDigraph {
    let mut rng = rng_from_seed(seed);
    let mut g = ColouredDigraph::new(n, w);
    for t in 0..n as u32 {
        for h in 0..n as u32 {
            if t != h && rng.random_bool(p) {
                let c = rng.random_range(0..w as u32);
                g.add_edge(ColouredEdge::new(t, h, c)).unwrap();
            }
        }
    }
    g
}

/// Vertices reachable from `r`, by plain DFS over the edge list.
pub fn reach_count(n: usize, edges: &[ColouredEdge], r: usize) -> usize {
    let mut seen = vec![false; n];
    let mut stack = vec![r];
    seen[r] = true;
    while let Some(u) = stack.pop() {
        for e in edges.iter().filter(|e| e.tail.index() == u) {
            let v = e.head.index();
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.iter().filter(|&&s| s).count()
}

/// Is `chosen` (n-1 edges) a rainbow spanning arborescence? Checked from the
/// definition: distinct colours, one in-edge per non-root vertex, root
/// reaches everything.
pub fn is_rainbow_arborescence(n: usize, chosen: &[ColouredEdge]) -> bool {
    if chosen.len() + 1 != n {
        return false;
    }
    let mut colours: Vec<u32> = chosen.iter().map(|e| e.colour.0).collect();
    colours.sort_unstable();
    colours.dedup();
    if colours.len() != chosen.len() {
        return false;
    }
    let mut indeg = vec![0; n];
    for e in chosen {
        indeg[e.head.index()] += 1;
    }
    let roots: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    if roots.len() != 1 || indeg.iter().any(|&d| d > 1) {
        return false;
    }
    reach_count(n, chosen, roots[0]) == n
}

/// Rainbow arborescence existence by enumerating all (n-1)-subsets of edges.
/// Independent of the crate's solvers; only for very small graphs.
pub fn rainbow_by_subsets(g: &ColouredDigraph) -> bool {
    let n = g.vertex_count();
    if n == 1 {
        return true;
    }
    let edges = g.edges();
    let k = n - 1;
    if edges.len() < k {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let chosen: Vec<ColouredEdge> = idx.iter().map(|&i| edges[i]).collect();
        if is_rainbow_arborescence(n, &chosen) {
            return true;
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] != i + edges.len() - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `ln ln n / ln n`, written out independently of the crate.
pub fn eps_ref(n: f64) -> f64 {
    n.ln().ln() / n.ln()
}

/// Proptest configuration without on-disk failure persistence.
pub fn cases(n: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases: n,
        failure_persistence: None,
        ..Default::default()
    }
}
