//! Plain-text edge list: a header line `n W` followed by one `tail head colour`
//! line per edge in process order. Indices are 1-based on disk. Blank lines
//! and lines starting with `#` are skipped.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::digraph::{ColouredDigraph, ColouredEdge, GraphError};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("missing header line `n W`")]
    MissingHeader,
}

/// Parsed edge list, still 0-based in memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub colours: usize,
    pub edges: Vec<ColouredEdge>,
}

impl EdgeList {
    pub fn into_digraph(self) -> Result<ColouredDigraph, GraphError> {
        ColouredDigraph::from_edges(self.n, self.colours, self.edges)
    }
}

fn parse_fields<const K: usize>(line: &str, lineno: usize) -> Result<[u64; K], EdgeListError> {
    let mut out = [0u64; K];
    let mut it = line.split_whitespace();
    for slot in out.iter_mut() {
        let tok = it.next().ok_or_else(|| EdgeListError::Parse {
            line: lineno,
            msg: format!("expected {K} fields"),
        })?;
        *slot = tok.parse().map_err(|_| EdgeListError::Parse {
            line: lineno,
            msg: format!("not a non-negative integer: {tok:?}"),
        })?;
    }
    if it.next().is_some() {
        return Err(EdgeListError::Parse {
            line: lineno,
            msg: format!("expected {K} fields"),
        });
    }
    Ok(out)
}

fn one_based(v: u64, lineno: usize, what: &str) -> Result<u32, EdgeListError> {
    if v == 0 || v > u32::MAX as u64 {
        return Err(EdgeListError::Parse {
            line: lineno,
            msg: format!("{what} index {v} is not 1-based"),
        });
    }
    Ok((v - 1) as u32)
}

/// Reads and validates an edge list (duplicates, self-loops and ranges are checked).
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<EdgeList, EdgeListError> {
    let mut header: Option<(usize, usize)> = None;
    let mut check: Option<ColouredDigraph> = None;
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match header {
            None => {
                let [n, w] = parse_fields::<2>(trimmed, lineno)?;
                header = Some((n as usize, w as usize));
                check = Some(ColouredDigraph::new(n as usize, w as usize));
            }
            Some(_) => {
                let [t, h, c] = parse_fields::<3>(trimmed, lineno)?;
                let e = ColouredEdge::new(
                    one_based(t, lineno, "tail")?,
                    one_based(h, lineno, "head")?,
                    one_based(c, lineno, "colour")?,
                );
                check
                    .as_mut()
                    .expect("header parsed")
                    .add_edge(e)
                    .map_err(|source| EdgeListError::Graph { line: lineno, source })?;
                edges.push(e);
            }
        }
    }
    let (n, colours) = header.ok_or(EdgeListError::MissingHeader)?;
    Ok(EdgeList { n, colours, edges })
}

pub fn write_edge_list<W: Write>(mut w: W, n: usize, colours: usize, edges: &[ColouredEdge]) -> io::Result<()> {
    writeln!(w, "{n} {colours}")?;
    for e in edges {
        writeln!(w, "{} {} {}", e.tail.0 + 1, e.head.0 + 1, e.colour.0 + 1)?;
    }
    Ok(())
}
