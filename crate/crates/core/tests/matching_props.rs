mod common;

use proptest::prelude::*;
use rainbow_core::matching::{build_colour_bigraph, find_colour_assignment, find_k_witness, ColourBipartiteGraph};
use rainbow_core::process::{derive_trial_seed, rng_from_seed};
use rainbow_core::{ColouredDigraph, VertexId};
use rand::Rng;

fn random_bigraph(n: usize, w: usize, density: f64, seed: u64) -> ColourBipartiteGraph {
    let mut rng = rng_from_seed(seed);
    let adj = (0..n)
        .map(|_| (0..w as u32).filter(|_| rng.random_bool(density)).collect())
        .collect();
    ColourBipartiteGraph::from_adjacency(w, adj)
}

/// Injective assignment of colours to `V \ {root}` by exhaustive backtracking.
fn assignment_exists(b: &ColourBipartiteGraph, root: usize) -> bool {
    fn go(b: &ColourBipartiteGraph, order: &[usize], used: &mut Vec<bool>) -> bool {
        let Some((&v, rest)) = order.split_first() else {
            return true;
        };
        for &c in b.neighbours(VertexId(v as u32)) {
            if !used[c as usize] {
                used[c as usize] = true;
                let ok = go(b, rest, used);
                used[c as usize] = false;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    let order: Vec<usize> = (0..b.vertex_count()).filter(|&v| v != root).collect();
    go(b, &order, &mut vec![false; b.colour_count()])
}

/// `N(S)` computed directly from adjacency lists.
fn neighbourhood(b: &ColourBipartiteGraph, s: &[usize]) -> Vec<u32> {
    let mut out: Vec<u32> = s
        .iter()
        .flat_map(|&v| b.neighbours(VertexId(v as u32)).to_vec())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_duality(b: &ColourBipartiteGraph, root: usize) -> Result<(), TestCaseError> {
    let root_id = VertexId(root as u32);
    let assignment = find_colour_assignment(b, root_id);
    let witness = find_k_witness(b, root_id);
    prop_assert!(
        assignment.is_ok() != witness.is_some(),
        "exactly one of assignment / witness"
    );
    prop_assert_eq!(assignment.is_ok(), assignment_exists(b, root));
    if let Ok(a) = &assignment {
        prop_assert!(a.is_valid_for(b));
        let mut used = Vec::new();
        for v in (0..b.vertex_count()).filter(|&v| v != root) {
            let c = a.colour_of(VertexId(v as u32)).expect("every non-root vertex assigned");
            prop_assert!(b.neighbours(VertexId(v as u32)).contains(&c.0));
            used.push(c.0);
        }
        used.sort_unstable();
        used.dedup();
        prop_assert_eq!(used.len(), b.vertex_count() - 1);
    }
    if let Some(w) = &witness {
        let s: Vec<usize> = w.vertices.iter().map(|v| v.index()).collect();
        let t: Vec<u32> = w.colours.iter().map(|c| c.0).collect();
        prop_assert!(!s.contains(&root));
        prop_assert_eq!(t.len() + 1, s.len());
        prop_assert!(neighbourhood(b, &s).iter().all(|c| t.contains(c)));
        prop_assert!(w.is_valid_for(b));
    }
    Ok(())
}

proptest! {
    #![proptest_config(common::cases(1000))]

    #[test]
    fn exactly_one_of_assignment_or_witness(
        n in 2usize..9,
        w in 1usize..10,
        density in 0.0f64..0.6,
        seed: u64,
        root in 0usize..8,
    ) {
        let b = random_bigraph(n, w, density, seed);
        check_duality(&b, root % n)?;
    }

    #[test]
    fn materialized_assignment_is_one_in_edge_each(n in 2usize..9, p in 0.2f64..0.9, seed: u64) {
        let g = common::random_graph(n, 2 * n, p, seed);
        let b = build_colour_bigraph(&g);
        let root = VertexId(0);
        if let Ok(a) = find_colour_assignment(&b, root) {
            let chosen = a.materialize(&g);
            prop_assert!(chosen[0].is_none());
            let mut colours = Vec::new();
            for (v, idx) in chosen.iter().enumerate().skip(1) {
                let e = g.edge(idx.expect("non-root vertex gets an in-edge") as usize);
                prop_assert_eq!(e.head.index(), v);
                prop_assert_eq!(Some(e.colour), a.colour_of(VertexId(v as u32)));
                colours.push(e.colour.0);
            }
            colours.sort_unstable();
            colours.dedup();
            prop_assert_eq!(colours.len(), n - 1);
        }
    }
}

#[test]
fn twenty_graphs_n8_match_exhaustive_assignment() {
    for i in 0..20 {
        let g = common::random_graph(8, 10, 0.25, derive_trial_seed(31, i));
        let b = build_colour_bigraph(&g);
        let root = g.zero_in_vertices().first().map_or(0, |v| v.index());
        assert_eq!(
            find_colour_assignment(&b, VertexId(root as u32)).is_ok(),
            assignment_exists(&b, root),
            "graph {i}"
        );
    }
}

#[test]
fn fifty_unsaturable_witnesses_check_out() {
    let mut found = 0;
    let mut i = 0;
    while found < 50 {
        let n = 3 + (i % 6) as usize;
        let b = random_bigraph(n, n, 0.2, derive_trial_seed(41, i));
        i += 1;
        if find_colour_assignment(&b, VertexId(0)).is_ok() {
            continue;
        }
        found += 1;
        let w = find_k_witness(&b, VertexId(0)).expect("unsaturable");
        let s: Vec<usize> = w.vertices.iter().map(|v| v.index()).collect();
        assert_eq!(w.colours.len() + 1, s.len());
        let t: Vec<u32> = w.colours.iter().map(|c| c.0).collect();
        assert!(neighbourhood(&b, &s).iter().all(|c| t.contains(c)));
    }
}

/// In the digraph: a witness for `S` exists iff `|N(S)| <= |S| - 1` and there
/// are at least `|S| - 1` colours to fill `T`.
fn has_witness(g: &ColouredDigraph, b: &ColourBipartiteGraph, s: &[usize]) -> bool {
    neighbourhood(b, s).len() < s.len() && s.len() - 1 <= g.colour_count()
}

/// Every minimal witness has at least `2(k - 1)` edges from colours of `T`
/// into `S`, by exhaustive enumeration of vertex subsets.
#[test]
fn minimal_witness_edge_bound() {
    let mut minimal_seen = 0;
    let mut big_seen = 0;
    for i in 0..600u64 {
        let n = 3 + (i % 4) as usize;
        let g = common::random_graph(n, 3, 0.35, derive_trial_seed(53, i));
        let b = build_colour_bigraph(&g);
        let others: Vec<usize> = (1..n).collect();
        for mask in 1u32..(1 << others.len()) {
            let s: Vec<usize> = (0..others.len())
                .filter(|&j| mask & (1 << j) != 0)
                .map(|j| others[j])
                .collect();
            if !has_witness(&g, &b, &s) {
                continue;
            }
            let minimal = (1u32..mask).filter(|&sub| sub & mask == sub).all(|sub| {
                let s2: Vec<usize> = (0..others.len())
                    .filter(|&j| sub & (1 << j) != 0)
                    .map(|j| others[j])
                    .collect();
                !has_witness(&g, &b, &s2)
            });
            if !minimal {
                continue;
            }
            minimal_seen += 1;
            let k = s.len();
            big_seen += (k >= 3) as usize;
            let t = neighbourhood(&b, &s);
            assert_eq!(t.len(), k - 1, "minimal witness uses exactly N(S)");
            let incidences = g
                .edges()
                .iter()
                .filter(|e| s.contains(&e.head.index()) && t.contains(&e.colour.0))
                .count();
            assert!(
                incidences >= 2 * (k - 1),
                "k = {k}, incidences = {incidences}, graph {i}"
            );
        }
    }
    assert!(
        minimal_seen > 100 && big_seen > 10,
        "enumeration too thin: {minimal_seen} / {big_seen}"
    );
}
