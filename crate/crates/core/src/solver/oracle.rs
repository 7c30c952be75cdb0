//! Exhaustive reference decision for tiny graphs.

use thiserror::Error;

use super::certificate::ArborescenceCertificate;
use crate::digraph::{ColouredDigraph, VertexId};

/// Largest number of parent-edge selections enumerated for one root.
pub const ORACLE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("brute-force search space too large: {selections} selections for root {root} (limit {ORACLE_LIMIT})")]
pub struct TooLarge {
    pub root: VertexId,
    pub selections: u128,
}

/// Tries every root and every choice of one in-edge per non-root vertex.
///
/// Refuses up front, rather than answering, if any feasible root would need
/// more than [`ORACLE_LIMIT`] selections.
pub fn brute_force_oracle(g: &ColouredDigraph) -> Result<Option<ArborescenceCertificate>, TooLarge> {
    search(g, None)
}

/// Same as [`brute_force_oracle`] with the root fixed.
pub fn brute_force_oracle_rooted(
    g: &ColouredDigraph,
    root: VertexId,
) -> Result<Option<ArborescenceCertificate>, TooLarge> {
    search(g, Some(root.index()))
}

fn search(g: &ColouredDigraph, only_root: Option<usize>) -> Result<Option<ArborescenceCertificate>, TooLarge> {
    let n = g.vertex_count();
    if n == 1 && only_root.is_none_or(|o| o == 0) {
        return Ok(Some(ArborescenceCertificate::new(VertexId(0), vec![None])));
    }
    let mut feasible = Vec::new();
    for r in (0..n).filter(|&r| only_root.is_none_or(|o| o == r)) {
        let mut product: u128 = 1;
        let mut ok = true;
        for v in (0..n).filter(|&v| v != r) {
            let d = g.in_degree(VertexId(v as u32)) as u128;
            if d == 0 {
                ok = false;
                break;
            }
            product = product.saturating_mul(d);
        }
        if !ok {
            continue;
        }
        if product > ORACLE_LIMIT {
            return Err(TooLarge {
                root: VertexId(r as u32),
                selections: product,
            });
        }
        feasible.push(r);
    }

    for r in feasible {
        let others: Vec<usize> = (0..n).filter(|&v| v != r).collect();
        let mut choice = vec![0usize; others.len()];
        loop {
            let parents: Vec<Option<u32>> = (0..n)
                .map(|v| {
                    if v == r {
                        None
                    } else {
                        let k = others.iter().position(|&o| o == v).expect("listed");
                        Some(g.in_edge_indices(VertexId(v as u32))[choice[k]])
                    }
                })
                .collect();
            let cert = ArborescenceCertificate::from_edge_indices(g, VertexId(r as u32), &parents);
            if cert.verify(g) {
                return Ok(Some(cert));
            }
            // Odometer increment.
            let mut k = 0;
            loop {
                if k == others.len() {
                    break;
                }
                choice[k] += 1;
                if choice[k] < g.in_degree(VertexId(others[k] as u32)) {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == others.len() {
                break;
            }
        }
    }
    Ok(None)
}
