//! Synthetic instance generators. All take explicit seeds and reproduce
//! bit-identical graphs across platforms.

use std::collections::HashSet;

use densedp_core::{Error, Graph, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A k-clique on a uniformly random k-subset of `0..n`; every other vertex
/// is isolated. The densest subgraph is the clique, density `(k - 1) / 2`.
pub fn gen_planted_clique(n: u32, k: u32, seed: u64) -> Result<Graph> {
    if k > n {
        return Err(Error::Domain(format!(
            "clique size {k} exceeds vertex count {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Partial Fisher-Yates: the first k entries become the members.
    let mut ids: Vec<u32> = (0..n).collect();
    for i in 0..k as usize {
        let j = rng.random_range(i..n as usize);
        ids.swap(i, j);
    }
    let members = &ids[..k as usize];
    let mut edges = Vec::with_capacity(k as usize * (k as usize).saturating_sub(1) / 2);
    for i in 0..k as usize {
        for j in (i + 1)..k as usize {
            edges.push((members[i], members[j]));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Two disjoint cliques with no cross edges: K_{k1} on `0..k1` and K_{k2}
/// on `k1..k1+k2`. Exercises tie-breaking when `k1 == k2`.
pub fn gen_two_cliques(k1: u32, k2: u32) -> Result<Graph> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::Domain(format!(
            "clique sizes must be at least 1, got {k1} and {k2}"
        )));
    }
    let mut edges = Vec::new();
    for i in 0..k1 {
        for j in (i + 1)..k1 {
            edges.push((i, j));
        }
    }
    for i in 0..k2 {
        for j in (i + 1)..k2 {
            edges.push((k1 + i, k1 + j));
        }
    }
    Graph::from_edges(k1 + k2, &edges)
}

/// Uniform random graph with exactly `m` distinct edges.
pub fn gen_gnm(n: u32, m: usize, seed: u64) -> Result<Graph> {
    let pairs = n as u64 * (n as u64 - 1) / 2;
    if m as u64 > pairs {
        return Err(Error::Domain(format!(
            "{m} edges requested but only {pairs} vertex pairs exist"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let key = ((u.min(v) as u64) << 32) | u.max(v) as u64;
        if seen.insert(key) {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Erdős–Rényi graph: each pair independently present with probability `p`.
/// Quadratic in `n`; intended for small test instances.
pub fn gen_gnp(n: u32, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "edge probability must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}
