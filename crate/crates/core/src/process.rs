//! Seeded generation of the coloured random digraph process and of the
//! static `D(n, p)` model.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded through
//! [`SeedableRng::seed_from_u64`]. A trace draws, for step `k`, first the
//! swap position of a Fisher-Yates shuffle over the `n(n-1)` ordered pairs
//! and then the edge colour. Because the draws are strictly sequential, a
//! prefix produced lazily is identical to the same prefix of a fully
//! materialised trace.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::digraph::{ColouredDigraph, ColouredEdge, VertexId};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED_C0DE_0001;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProcessError {
    #[error("need at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("colour count must be at least 1")]
    NoColours,
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
}

/// SplitMix64 finaliser (Stafford variant 13).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: `mix64(mix64(master + GAMMA * (index + 1)))`.
///
/// For a fixed master seed this is a bijection of `index`, so distinct
/// trials never share a seed.
pub fn derive_trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    let z = master_seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(trial_index.wrapping_add(1)));
    mix64(mix64(z))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `log log n / log n`, natural logarithms.
pub fn epsilon(n: usize) -> f64 {
    let l = (n as f64).ln();
    l.ln() / l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColourCount {
    Auto,
    Fixed(usize),
}

impl ColourCount {
    /// `Auto` becomes `round((1 + 50 eps(n)) n)`, rounded half up. For `n = 2`
    /// the formula is negative, so the result is clamped to at least `n - 1`.
    pub fn resolve(self, n: usize) -> usize {
        match self {
            ColourCount::Fixed(w) => w,
            ColourCount::Auto => {
                let raw = ((1.0 + 50.0 * epsilon(n)) * n as f64 + 0.5).floor();
                let floor = n.saturating_sub(1).max(1);
                if raw.is_finite() && raw >= floor as f64 {
                    raw as usize
                } else {
                    floor
                }
            }
        }
    }
}

impl fmt::Display for ColourCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColourCount::Auto => f.write_str("auto"),
            ColourCount::Fixed(w) => write!(f, "{w}"),
        }
    }
}

impl FromStr for ColourCount {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(ColourCount::Auto);
        }
        s.parse::<usize>()
            .map(ColourCount::Fixed)
            .map_err(|_| format!("expected an integer or `auto`, got {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProcessConfig {
    pub n: usize,
    pub colour_count: ColourCount,
    pub master_seed: u64,
}

impl ProcessConfig {
    pub fn new(n: usize, colour_count: ColourCount, master_seed: u64) -> Self {
        Self {
            n,
            colour_count,
            master_seed,
        }
    }

    pub fn colours(&self) -> usize {
        self.colour_count.resolve(self.n)
    }

    pub fn validate(&self) -> Result<(), ProcessError> {
        if self.n < 2 {
            return Err(ProcessError::TooFewVertices(self.n));
        }
        if self.colours() == 0 {
            return Err(ProcessError::NoColours);
        }
        Ok(())
    }
}

/// Number of ordered pairs `n(n-1)`.
#[inline]
pub fn pair_count(n: usize) -> u64 {
    n as u64 * (n as u64).saturating_sub(1)
}

/// Maps a pair index in `0..n(n-1)` to `(tail, head)`, `tail != head`,
/// in lexicographic order.
#[inline]
pub fn decode_pair(n: usize, idx: u64) -> (u32, u32) {
    let m = n as u64 - 1;
    let tail = idx / m;
    let r = idx % m;
    let head = if r >= tail { r + 1 } else { r };
    (tail as u32, head as u32)
}

/// Lazy edge source: sparse Fisher-Yates over pair indices.
#[derive(Clone, Debug)]
pub struct TraceStream {
    n: usize,
    colours: u32,
    total: u64,
    next: u64,
    displaced: HashMap<u64, u64>,
    rng: ChaCha8Rng,
}

impl TraceStream {
    pub fn new(config: &ProcessConfig) -> Result<Self, ProcessError> {
        config.validate()?;
        Ok(Self {
            n: config.n,
            colours: config.colours() as u32,
            total: pair_count(config.n),
            next: 0,
            displaced: HashMap::new(),
            rng: rng_from_seed(config.master_seed),
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn emitted(&self) -> u64 {
        self.next
    }
}

impl Iterator for TraceStream {
    type Item = ColouredEdge;

    fn next(&mut self) -> Option<ColouredEdge> {
        if self.next >= self.total {
            return None;
        }
        let k = self.next;
        let j = self.rng.random_range(k..self.total);
        let at_j = self.displaced.get(&j).copied().unwrap_or(j);
        if j != k {
            let at_k = self.displaced.remove(&k).unwrap_or(k);
            self.displaced.insert(j, at_k);
        } else {
            self.displaced.remove(&k);
        }
        self.next += 1;
        let colour = self.rng.random_range(0..self.colours);
        let (tail, head) = decode_pair(self.n, at_j);
        Some(ColouredEdge::new(tail, head, colour))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

/// One trial's randomness: the edge order and colours of the whole process.
/// Edges are generated on demand and cached.
#[derive(Clone, Debug)]
pub struct ProcessTrace {
    config: ProcessConfig,
    colours: usize,
    edges: Vec<ColouredEdge>,
    stream: TraceStream,
}

impl ProcessTrace {
    /// Lazy trace; nothing is generated until a prefix is requested.
    pub fn lazy(config: ProcessConfig) -> Result<Self, ProcessError> {
        let stream = TraceStream::new(&config)?;
        Ok(Self {
            colours: config.colours(),
            config,
            edges: Vec::new(),
            stream,
        })
    }

    pub fn config(&self) -> &ProcessConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn colours(&self) -> usize {
        self.colours
    }

    /// `N = n(n-1)`.
    pub fn total_len(&self) -> usize {
        self.stream.total() as usize
    }

    /// First `m` edges (clamped to `N`).
    pub fn prefix(&mut self, m: usize) -> &[ColouredEdge] {
        let m = m.min(self.total_len());
        while self.edges.len() < m {
            let e = self.stream.next().expect("stream shorter than n(n-1)");
            self.edges.push(e);
        }
        &self.edges[..m]
    }

    /// Edge number `k` (0-based step index).
    pub fn edge(&mut self, k: usize) -> ColouredEdge {
        self.prefix(k + 1)[k]
    }

    pub fn materialize(&mut self) -> &[ColouredEdge] {
        let total = self.total_len();
        self.prefix(total)
    }

    /// Already-generated edges.
    pub fn generated(&self) -> &[ColouredEdge] {
        &self.edges
    }

    /// The digraph `D(n, m)` formed by the first `m` edges.
    pub fn graph_at(&mut self, m: usize) -> ColouredDigraph {
        let (n, w) = (self.n(), self.colours);
        let edges = self.prefix(m).iter().copied();
        ColouredDigraph::from_edges(n, w, edges).expect("trace edges are distinct and in range")
    }
}

/// Fully materialised trace.
pub fn generate_trace(config: ProcessConfig) -> Result<ProcessTrace, ProcessError> {
    let mut trace = ProcessTrace::lazy(config)?;
    trace.materialize();
    Ok(trace)
}

/// Static model: every ordered pair independently with probability `p`,
/// present edges coloured uniformly from `0..colours`.
pub fn sample_dnp(n: usize, p: f64, colours: usize, seed: u64) -> Result<ColouredDigraph, ProcessError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(ProcessError::InvalidProbability(p));
    }
    if colours == 0 {
        return Err(ProcessError::NoColours);
    }
    let mut g = ColouredDigraph::new(n, colours);
    if n < 2 || p == 0.0 {
        return Ok(g);
    }
    let mut rng = rng_from_seed(seed);
    let total = pair_count(n);
    let push = |g: &mut ColouredDigraph, idx: u64, rng: &mut ChaCha8Rng| {
        let (t, h) = decode_pair(n, idx);
        let c = rng.random_range(0..colours as u32);
        g.add_edge(ColouredEdge::new(t, h, c)).expect("each pair visited once");
    };
    if p == 1.0 {
        for idx in 0..total {
            push(&mut g, idx, &mut rng);
        }
        return Ok(g);
    }
    // Geometric skipping: gaps between successes are Geometric(p).
    let log_q = (1.0 - p).ln();
    let mut idx: u64 = 0;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        let skip = (u.ln() / log_q).floor();
        if !skip.is_finite() || skip >= (total - idx) as f64 {
            break;
        }
        idx += skip as u64;
        push(&mut g, idx, &mut rng);
        idx += 1;
        if idx >= total {
            break;
        }
    }
    Ok(g)
}

/// Convenience: vertex ids `0..n`.
pub fn vertices(n: usize) -> impl Iterator<Item = VertexId> {
    (0..n as u32).map(VertexId)
}
