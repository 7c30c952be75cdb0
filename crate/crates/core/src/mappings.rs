//! Random mappings viewed as functional in-digraphs: every vertex `v` picks
//! one in-neighbour `in_nbr[v]`, giving the edge `in_nbr[v] -> v`.

use rand::seq::index::sample;
use rand::Rng;

use crate::digraph::forward_closure;
use crate::process::rng_from_seed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomMapping {
    in_nbr: Vec<u32>,
    loopless: bool,
}

impl RandomMapping {
    /// Panics if some entry is out of range, or if `loopless` and a fixed point exists.
    pub fn from_in_neighbours(in_nbr: Vec<u32>, loopless: bool) -> Self {
        let n = in_nbr.len();
        for (v, &u) in in_nbr.iter().enumerate() {
            assert!((u as usize) < n, "in-neighbour out of range");
            assert!(!loopless || u as usize != v, "fixed point in loopless mapping");
        }
        Self { in_nbr, loopless }
    }

    pub fn len(&self) -> usize {
        self.in_nbr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_nbr.is_empty()
    }

    pub fn is_loopless(&self) -> bool {
        self.loopless
    }

    pub fn in_neighbour(&self, v: usize) -> usize {
        self.in_nbr[v] as usize
    }

    pub fn in_neighbours(&self) -> &[u32] {
        &self.in_nbr
    }

    pub fn loop_count(&self) -> usize {
        self.in_nbr
            .iter()
            .enumerate()
            .filter(|&(v, &u)| u as usize == v)
            .count()
    }

    /// Out-neighbour lists (`children[u]` = all `v` with `in_nbr[v] = u`), CSR.
    fn children(&self) -> (Vec<usize>, Vec<u32>) {
        let n = self.len();
        let mut start = vec![0usize; n + 1];
        for &u in &self.in_nbr {
            start[u as usize + 1] += 1;
        }
        for i in 0..n {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut list = vec![0u32; n];
        for (v, &u) in self.in_nbr.iter().enumerate() {
            list[fill[u as usize]] = v as u32;
            fill[u as usize] += 1;
        }
        (start, list)
    }
}

/// Independent uniform in-neighbours; `loopless` excludes `v` itself.
pub fn sample_mapping(n: usize, loopless: bool, seed: u64) -> RandomMapping {
    assert!(!loopless || n >= 2, "loopless mapping needs n >= 2");
    let mut rng = rng_from_seed(seed);
    let in_nbr = (0..n as u32)
        .map(|v| {
            if loopless {
                let u = rng.random_range(0..n as u32 - 1);
                if u >= v {
                    u + 1
                } else {
                    u
                }
            } else {
                rng.random_range(0..n as u32)
            }
        })
        .collect();
    RandomMapping { in_nbr, loopless }
}

/// One weakly connected component: its unique cycle (following edge
/// direction, starting at the smallest cycle vertex) and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingComponent {
    pub cycle: Vec<u32>,
    pub trees: Vec<u32>,
}

impl MappingComponent {
    pub fn size(&self) -> usize {
        self.cycle.len() + self.trees.len()
    }
}

/// Components in order of their smallest cycle vertex. Self-loops are
/// 1-cycles and a pair `u <-> v` is a 2-cycle.
pub fn cycle_components(m: &RandomMapping) -> Vec<MappingComponent> {
    let n = m.len();
    const UNSEEN: u32 = u32::MAX;
    const ON_WALK: u32 = u32::MAX - 1;
    let mut label = vec![UNSEEN; n];
    let mut comps: Vec<MappingComponent> = Vec::new();
    let mut walk = Vec::new();
    for s in 0..n {
        let mut v = s;
        while label[v] == UNSEEN {
            label[v] = ON_WALK;
            walk.push(v);
            v = m.in_neighbour(v);
        }
        let id = if label[v] == ON_WALK {
            let pos = walk.iter().position(|&w| w == v).expect("on walk");
            // Walking in_nbr goes against edge direction; reverse for edge order.
            let mut cycle: Vec<u32> = walk[pos..].iter().rev().map(|&w| w as u32).collect();
            let min_at = cycle
                .iter()
                .enumerate()
                .min_by_key(|&(_, &w)| w)
                .map(|(i, _)| i)
                .unwrap_or(0);
            cycle.rotate_left(min_at);
            let id = comps.len() as u32;
            for &w in &walk[pos..] {
                label[w] = id;
            }
            walk.truncate(pos);
            comps.push(MappingComponent {
                cycle,
                trees: Vec::new(),
            });
            id
        } else {
            label[v]
        };
        for w in walk.drain(..) {
            label[w] = id;
            comps[id as usize].trees.push(w as u32);
        }
    }
    for c in &mut comps {
        c.trees.sort_unstable();
    }
    comps.sort_by_key(|c| c.cycle[0]);
    comps
}

/// Forward closure of `infected` along mapping edges `in_nbr[v] -> v`.
pub fn epidemic_spread(m: &RandomMapping, infected: &[usize]) -> Vec<usize> {
    let (start, list) = m.children();
    let seen = forward_closure(m.len(), infected.iter().copied(), |u| {
        list[start[u]..start[u + 1]].iter().map(|&v| v as usize)
    });
    seen.iter().enumerate().filter(|(_, &s)| s).map(|(v, _)| v).collect()
}

/// Removes the edge into the smallest vertex of every cycle. Returns the
/// resulting parent array (`None` at the new roots), one root per component.
pub fn break_cycles(m: &RandomMapping) -> Vec<Option<u32>> {
    let mut parent: Vec<Option<u32>> = m.in_nbr.iter().map(|&u| Some(u)).collect();
    for c in cycle_components(m) {
        parent[c.cycle[0] as usize] = None;
    }
    parent
}

/// Number of initially infected vertices for the spread statistic: `round(n^{2/3})`.
pub fn burtin_seed_size(n: usize) -> usize {
    ((n as f64).powf(2.0 / 3.0)).round() as usize
}

/// `(x/n)^2 (n - eta)` where `eta` is the size of the forward closure of `x`
/// uniformly chosen vertices. Returns `(eta, statistic)`.
pub fn burtin_statistic<R: Rng + ?Sized>(m: &RandomMapping, x: usize, rng: &mut R) -> (usize, f64) {
    let n = m.len();
    let infected: Vec<usize> = sample(rng, n, x.min(n)).into_vec();
    let eta = epidemic_spread(m, &infected).len();
    let ratio = x as f64 / n as f64;
    (eta, ratio * ratio * (n - eta) as f64)
}
