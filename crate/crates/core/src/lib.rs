//! Randomly edge-coloured random digraph process.
//!
//! Edges of the complete digraph arrive in uniform random order, each with an
//! independent uniform colour. The crate computes hitting times of the
//! natural events along the process (enough colours, at most one source,
//! spanning arborescence, rainbow spanning arborescence), decides and
//! certifies rainbow arborescences, and runs the Monte Carlo experiments
//! around them.

pub mod cli;
pub mod detectors;
pub mod digraph;
pub mod edgelist;
pub mod experiments;
pub mod mappings;
pub mod matching;
pub mod process;
pub mod solver;

pub use digraph::{ColourId, ColouredDigraph, ColouredEdge, GraphError, VertexId};
pub use process::{ColourCount, ProcessConfig, ProcessTrace};
