//! Compact undirected graphs with sorted adjacency lists.
//!
//! Vertices are dense ids `0..n`; the original ids from a parsed edge list
//! are retained in a side table. Self-loops and repeated edges are dropped
//! during construction and counted, never errors.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Undirected simple graph in CSR form. Neighbor lists are sorted ascending.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<u32>,
    original_ids: Vec<u64>,
    dropped_edges: u64,
}

impl Graph {
    /// Builds a graph on vertices `0..n` from an edge list. Endpoints must be
    /// `< n`; self-loops and duplicates are dropped and counted.
    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Result<Graph> {
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
        }
        let original_ids = (0..n as u64).collect();
        Ok(Self::build(n as usize, edges.to_vec(), original_ids, 0))
    }

    /// Reads the whitespace-separated edge-list format: lines starting with
    /// `#` are comments, every other non-blank line is `u v` with
    /// non-negative integer ids. Ids are compacted to `0..n` in order of
    /// first appearance; the original ids stay available via
    /// [`Graph::original_id`].
    pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
        let mut compact: HashMap<u64, u32> = HashMap::new();
        let mut original_ids: Vec<u64> = Vec::new();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut dropped = 0u64;

        let mut intern = |id: u64, original_ids: &mut Vec<u64>| -> u32 {
            *compact.entry(id).or_insert_with(|| {
                original_ids.push(id);
                (original_ids.len() - 1) as u32
            })
        };

        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let (a, b) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("expected two ids, got {trimmed:?}"),
                    })
                }
            };
            let parse = |s: &str| -> Result<u64> {
                s.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid vertex id {s:?}"),
                })
            };
            let u = intern(parse(a)?, &mut original_ids);
            let v = intern(parse(b)?, &mut original_ids);
            if u == v {
                dropped += 1;
            } else {
                edges.push((u, v));
            }
        }
        let n = original_ids.len();
        Ok(Self::build(n, edges, original_ids, dropped))
    }

    fn build(
        n: usize,
        mut edges: Vec<(u32, u32)>,
        original_ids: Vec<u64>,
        dropped_so_far: u64,
    ) -> Graph {
        let mut dropped = dropped_so_far;
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.retain(|&(u, v)| {
            if u == v {
                dropped += 1;
                false
            } else {
                true
            }
        });
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        dropped += (before - edges.len()) as u64;

        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut adj = vec![0u32; acc];
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        for &(u, v) in &edges {
            adj[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            adj[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        // Edges were sorted by (min, max), so each list is already ascending
        // except for the interleaving of the two endpoint roles.
        for v in 0..n {
            adj[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            offsets,
            adj,
            original_ids,
            dropped_edges: dropped,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn original_id(&self, v: u32) -> u64 {
        self.original_ids[v as usize]
    }

    /// Lines dropped during construction (self-loops plus repeated edges).
    pub fn dropped_edges(&self) -> u64 {
        self.dropped_edges
    }

    /// Number of edges with both endpoints in `s`, by exact counting.
    pub fn induced_edge_count(&self, s: &VertexSet) -> Result<u64> {
        let n = self.n();
        let mut member = vec![false; n];
        for &v in s.members() {
            if v as usize >= n {
                return Err(Error::Domain(format!(
                    "vertex {v} is outside this graph (n = {n})"
                )));
            }
            member[v as usize] = true;
        }
        let mut count = 0u64;
        for &v in s.members() {
            for &u in self.neighbors(v) {
                if u > v && member[u as usize] {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Induced density as an exact integer pair `(edges, |s|)`.
    pub fn density_ratio(&self, s: &VertexSet) -> Result<(u64, u64)> {
        if s.is_empty() {
            return Err(Error::Domain("density of an empty vertex set".into()));
        }
        Ok((self.induced_edge_count(s)?, s.len() as u64))
    }

    /// Induced density `|E(S)| / |S|` converted to `f64` for reporting.
    pub fn density(&self, s: &VertexSet) -> Result<f64> {
        let (e, k) = self.density_ratio(s)?;
        Ok(e as f64 / k as f64)
    }

    /// Writes the edge list back out, one `u v` line per edge in ascending
    /// order of compact ids, using original ids. Parsing the output yields a
    /// graph with identical structure and id map.
    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> Result<()> {
        for v in 0..self.n() as u32 {
            for &u in self.neighbors(v) {
                if u > v {
                    writeln!(w, "{} {}", self.original_id(v), self.original_id(u))?;
                }
            }
        }
        Ok(())
    }

    /// Writes the `compact original` id map, one line per vertex.
    pub fn write_id_map<W: Write>(&self, w: &mut W) -> Result<()> {
        for (compact, original) in self.original_ids.iter().enumerate() {
            writeln!(w, "{compact} {original}")?;
        }
        Ok(())
    }

    pub fn summary(&self, id_map_file: &str) -> GraphSummary {
        GraphSummary {
            n: self.n(),
            m: self.m(),
            dropped_edges: self.dropped_edges,
            id_map_file: id_map_file.to_string(),
        }
    }

    /// Structural equality: same vertex count, adjacency, and id map.
    /// The dropped-line counter is construction metadata and not compared.
    pub fn same_structure(&self, other: &Graph) -> bool {
        self.offsets == other.offsets
            && self.adj == other.adj
            && self.original_ids == other.original_ids
    }
}

/// Companion metadata for a parsed graph, serialized as one JSON line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub dropped_edges: u64,
    pub id_map_file: String,
}

impl GraphSummary {
    pub fn write_sidecar<W: Write>(&self, w: &mut W) -> Result<()> {
        let line = serde_json::to_string(self)
            .map_err(|e| Error::State(format!("sidecar serialization failed: {e}")))?;
        writeln!(w, "{line}")?;
        Ok(())
    }
}

/// Sorted set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<u32>,
}

impl VertexSet {
    /// Sorts and deduplicates the given ids.
    pub fn new(mut ids: Vec<u32>) -> VertexSet {
        ids.sort_unstable();
        ids.dedup();
        VertexSet { members: ids }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Outcome of one private densest-subgraph run: the chosen subset, its exact
/// density in the input graph, and the separately released noisy density.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub subset: VertexSet,
    pub true_density: f64,
    pub noisy_density: f64,
}
