//! Non-private reference solvers: exhaustive search, greedy peeling, and a
//! randomized-response baseline that privatizes the whole edge set up front.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;

use crate::graph::{DensityReport, Graph, VertexSet};
use crate::noise::GeomParam;
use crate::{Error, Result};

/// Largest vertex count `exact_densest_bruteforce` accepts.
pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 22;

/// Exhaustive densest subset by enumerating all `2^n - 1` candidates with an
/// incremental edge-count table. Ties resolve to the lexicographically
/// smallest member list. Refuses graphs with more than
/// [`BRUTE_FORCE_VERTEX_LIMIT`] vertices.
pub fn exact_densest_bruteforce(g: &Graph) -> Result<(VertexSet, f64)> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Domain("empty graph".into()));
    }
    if n > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(Error::Domain(format!(
            "exhaustive search handles at most {BRUTE_FORCE_VERTEX_LIMIT} vertices, got {n}"
        )));
    }
    let masks: Vec<u32> = (0..n as u32)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &u| acc | (1 << u)))
        .collect();
    let size = 1usize << n;
    let mut edge_count = vec![0u32; size];
    for s in 1..size {
        let v = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        edge_count[s] = edge_count[rest] + (masks[v] & rest as u32).count_ones();
    }
    let (mut best_mask, mut best_e, mut best_k) = (1usize, edge_count[1] as u64, 1u64);
    for s in 2..size {
        let e = edge_count[s] as u64;
        let k = s.count_ones() as u64;
        // e/k > best_e/best_k via cross-multiplication, exact in u64.
        let denser = e * best_k > best_e * k;
        if denser || (e * best_k == best_e * k && lex_less(s as u32, best_mask as u32)) {
            best_mask = s;
            best_e = e;
            best_k = k;
        }
    }
    let members = (0..n as u32).filter(|&v| best_mask >> v & 1 == 1).collect();
    Ok((VertexSet::new(members), best_e as f64 / best_k as f64))
}

/// True when mask `a`'s ascending member list precedes mask `b`'s
/// lexicographically.
fn lex_less(mut a: u32, mut b: u32) -> bool {
    loop {
        match (a == 0, b == 0) {
            (true, exhausted_b) => return !exhausted_b,
            (false, true) => return false,
            _ => {
                let (i, j) = (a.trailing_zeros(), b.trailing_zeros());
                if i != j {
                    return i < j;
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}

/// Greedy peeling: repeatedly delete a vertex of minimum residual degree
/// (lowest id on ties) and return the densest of the n intermediate sets,
/// the first such set on exact ties. Deterministic, and always within a
/// factor 2 of the optimum.
pub fn charikar_peel(g: &Graph) -> Result<(VertexSet, f64)> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Domain("empty graph".into()));
    }
    let mut deg: Vec<i64> = (0..n as u32).map(|v| g.degree(v) as i64).collect();
    let mut heap: BinaryHeap<Reverse<(i64, u32)>> =
        (0..n as u32).map(|v| Reverse((deg[v as usize], v))).collect();
    let mut in_s = vec![true; n];
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut cur_e = g.m() as u64;
    let mut cur_k = n as u64;
    let (mut best_e, mut best_k, mut best_idx) = (cur_e, cur_k, 0usize);
    for step in 0..n {
        let v = loop {
            let Reverse((d, v)) = heap.pop().expect("every live vertex has a heap entry");
            if in_s[v as usize] && deg[v as usize] == d {
                break v;
            }
        };
        if cur_e * best_k > best_e * cur_k {
            best_e = cur_e;
            best_k = cur_k;
            best_idx = step;
        }
        in_s[v as usize] = false;
        order.push(v);
        cur_e -= deg[v as usize] as u64;
        cur_k -= 1;
        for &u in g.neighbors(v) {
            if in_s[u as usize] {
                deg[u as usize] -= 1;
                heap.push(Reverse((deg[u as usize], u)));
            }
        }
    }
    let set = VertexSet::new(order[best_idx..].to_vec());
    Ok((set, best_e as f64 / best_k as f64))
}

/// Probability that randomized response flips one potential edge:
/// `1 / (1 + exp(epsilon))`.
pub fn rr_flip_probability(epsilon: f64) -> f64 {
    1.0 / (1.0 + epsilon.exp())
}

/// Randomized-response baseline: flip every vertex pair independently with
/// probability `1 / (1 + exp(epsilon))`, peel the flipped graph, and report
/// the chosen subset together with its density in the *original* graph and
/// a separately noised density estimate. Flipping costs `epsilon` and the
/// density release another `epsilon`.
pub fn randomized_response_densest<R: Rng + ?Sized>(
    g: &Graph,
    epsilon: f64,
    rng: &mut R,
) -> Result<DensityReport> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::Domain(format!(
            "epsilon must be finite and positive, got {epsilon}"
        )));
    }
    let p = rr_flip_probability(epsilon);
    let release = Some(GeomParam::from_epsilon(epsilon)?);
    rr_densest_inner(g, p, release, rng)
}

/// The `epsilon -> infinity` limit: no flips, no release noise. The result
/// coincides with [`charikar_peel`]. Validation aid; the output is not
/// private.
pub fn randomized_response_densest_noiseless(g: &Graph) -> Result<DensityReport> {
    rr_densest_inner(g, 0.0, None, &mut crate::noise::NoRng)
}

fn rr_densest_inner<R: Rng + ?Sized>(
    g: &Graph,
    flip_p: f64,
    release: Option<GeomParam>,
    rng: &mut R,
) -> Result<DensityReport> {
    if g.n() == 0 {
        return Err(Error::Domain("empty graph".into()));
    }
    let flipped = flip_graph(g, flip_p, rng);
    let (subset, _) = charikar_peel(&flipped)?;
    let e_true = g.induced_edge_count(&subset)?;
    let k = subset.len() as u64;
    let noise = match release {
        Some(p) => p.sample(rng),
        None => 0,
    };
    Ok(DensityReport {
        true_density: e_true as f64 / k as f64,
        noisy_density: (e_true as i64 + noise) as f64 / k as f64,
        subset,
    })
}

/// XORs an independent Bernoulli(p) mask over all vertex pairs into the edge
/// set. Runs in time proportional to the flip count, not the pair count.
fn flip_graph<R: Rng + ?Sized>(g: &Graph, p: f64, rng: &mut R) -> Graph {
    let n = g.n() as u32;
    if p <= 0.0 {
        let mut edges = Vec::with_capacity(g.m());
        for v in 0..n {
            for &u in g.neighbors(v) {
                if u > v {
                    edges.push((v, u));
                }
            }
        }
        return Graph::from_edges(n, &edges).expect("endpoints are in range");
    }
    let ln_keep = (-p).ln_1p();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut flips: Vec<u32> = Vec::new();
    for i in 0..n {
        // Skip-sample the flipped columns j in (i, n).
        flips.clear();
        let span = (n - i - 1) as u64;
        let mut pos = 0u64;
        loop {
            let u: f64 = rng.random();
            let gap = if u <= 0.0 { 0 } else { (u.ln() / ln_keep).floor() as u64 };
            pos += gap;
            if pos >= span {
                break;
            }
            flips.push(i + 1 + pos as u32);
            pos += 1;
        }
        // Symmetric difference with the existing neighbors above i.
        let row = g.neighbors(i);
        let start = row.partition_point(|&u| u <= i);
        let (mut a, mut b) = (start, 0usize);
        while a < row.len() || b < flips.len() {
            if a < row.len() && (b == flips.len() || row[a] < flips[b]) {
                edges.push((i, row[a]));
                a += 1;
            } else if b < flips.len() && (a == row.len() || flips[b] < row[a]) {
                edges.push((i, flips[b]));
                b += 1;
            } else {
                a += 1;
                b += 1;
            }
        }
    }
    Graph::from_edges(n, &edges).expect("endpoints are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn clique_pair(k1: u32, k2: u32) -> Graph {
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
        Graph::from_edges(k1 + k2, &edges).unwrap()
    }

    #[test]
    fn exact_on_a_star_keeps_the_whole_graph() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let (set, d) = exact_densest_bruteforce(&g).unwrap();
        assert_eq!(set.members(), &[0, 1, 2, 3, 4]);
        assert_eq!(d, 0.8);
    }

    #[test]
    fn exact_prefers_the_larger_clique() {
        let g = clique_pair(4, 3);
        let (set, d) = exact_densest_bruteforce(&g).unwrap();
        assert_eq!(set.members(), &[0, 1, 2, 3]);
        assert_eq!(d, 1.5);
    }

    #[test]
    fn exact_breaks_density_ties_lexicographically() {
        // Two disjoint edges: {0,1}, {2,3}, and {0,1,2,3} all have density 1/2.
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let (set, d) = exact_densest_bruteforce(&g).unwrap();
        assert_eq!(set.members(), &[0, 1]);
        assert_eq!(d, 0.5);
    }

    #[test]
    fn exact_refuses_large_graphs_by_name() {
        let g = Graph::from_edges(23, &[(0, 1)]).unwrap();
        let msg = exact_densest_bruteforce(&g).unwrap_err().to_string();
        assert!(msg.contains("22"), "{msg}");
    }

    #[test]
    fn peel_finds_cliques() {
        let k5 = clique_pair(5, 0);
        let (set, d) = charikar_peel(&k5).unwrap();
        assert_eq!(set.members(), &[0, 1, 2, 3, 4]);
        assert_eq!(d, 2.0);

        let (set, d) = charikar_peel(&clique_pair(4, 3)).unwrap();
        assert_eq!(set.members(), &[0, 1, 2, 3]);
        assert_eq!(d, 1.5);
    }

    #[test]
    fn peel_is_deterministic() {
        let g = clique_pair(6, 5);
        let (s1, d1) = charikar_peel(&g).unwrap();
        let (s2, d2) = charikar_peel(&g).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(d1, d2);
    }

    #[test]
    fn rejects_empty_graphs() {
        let g = Graph::from_edges(0, &[]).unwrap();
        assert!(exact_densest_bruteforce(&g).is_err());
        assert!(charikar_peel(&g).is_err());
        assert!(randomized_response_densest_noiseless(&g).is_err());
    }

    #[test]
    fn flip_probability_values() {
        let p = rr_flip_probability(1.0);
        assert!((p - 0.268941).abs() < 1e-6);
        assert!(rr_flip_probability(50.0) < 1e-20);
    }

    #[test]
    fn rr_noiseless_equals_peel() {
        let g = clique_pair(5, 4);
        let (peel_set, peel_d) = charikar_peel(&g).unwrap();
        let report = randomized_response_densest_noiseless(&g).unwrap();
        assert_eq!(report.subset, peel_set);
        assert_eq!(report.true_density, peel_d);
        assert_eq!(report.noisy_density, peel_d);
    }

    #[test]
    fn rr_with_huge_epsilon_degenerates_to_peel() {
        let g = clique_pair(5, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (peel_set, _) = charikar_peel(&g).unwrap();
        let report = randomized_response_densest(&g, 60.0, &mut rng).unwrap();
        assert_eq!(report.subset, peel_set);
    }

    #[test]
    fn flip_count_matches_binomial_on_an_empty_graph() {
        let n = 60u32;
        let g = Graph::from_edges(n, &[]).unwrap();
        let p = 0.25f64;
        let pairs = (n * (n - 1) / 2) as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut total = 0f64;
        let reps = 30;
        for _ in 0..reps {
            total += flip_graph(&g, p, &mut rng).m() as f64;
        }
        let mean = total / reps as f64;
        let expect = pairs * p;
        let std_of_mean = (pairs * p * (1.0 - p) / reps as f64).sqrt();
        assert!(
            (mean - expect).abs() < 6.0 * std_of_mean,
            "mean flips {mean} vs {expect}"
        );
    }

    #[test]
    fn flipping_twice_complement_structure() {
        // With p ~ 0 nothing flips; the graph comes back structurally equal.
        let g = clique_pair(4, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let back = flip_graph(&g, 1e-12, &mut rng);
        assert!(back.same_structure(&g));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn peel_is_within_factor_two_of_exact(
            n in 2u32..12,
            raw in proptest::collection::vec((0u32..12, 0u32..12), 1..40),
        ) {
            let edges: Vec<(u32, u32)> = raw.into_iter()
                .map(|(u, v)| (u % n, v % n))
                .collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            let (_, exact) = exact_densest_bruteforce(&g).unwrap();
            let (_, greedy) = charikar_peel(&g).unwrap();
            prop_assert!(greedy * 2.0 >= exact - 1e-12);
            prop_assert!(greedy <= exact + 1e-12);
        }
    }
}
