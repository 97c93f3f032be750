//! Seeded synthetic graph generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `0 -> 1 -> ... -> n-1`.
pub fn chain(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

/// Random DAG: each pair `i < j` gets the edge `i -> j` with probability `p`.
pub fn random_dag(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must be in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges))
}

/// Uniform directed graph with exactly `m` distinct edges and no self-loops.
///
/// Panics if `m > n * (n - 1)`; see [`erdos_renyi_checked`].
pub fn erdos_renyi(n: usize, m: usize, seed: u64) -> Graph {
    erdos_renyi_checked(n, m, seed).expect("edge count fits")
}

pub fn erdos_renyi_checked(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let max = n.saturating_mul(n.saturating_sub(1));
    if m > max {
        return Err(Error::InvalidParameter(format!("{m} edges do not fit in {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m);
    if m * 2 > max {
        // dense: sample from the full pair list
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        all.shuffle(&mut rng);
        all.truncate(m);
        all.sort_unstable();
        edges = all;
    } else {
        let mut seen = HashSet::with_capacity(m);
        while edges.len() < m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && seen.insert((u, v)) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges))
}

/// Preferential attachment. Vertices `0..deg` form the seed; every later
/// vertex links to `deg` distinct earlier vertices chosen proportionally to
/// degree, oriented new -> old, so `m = deg * (n - deg)`.
pub fn barabasi_albert(n: usize, deg: usize, seed: u64) -> Graph {
    barabasi_albert_checked(n, deg, seed).expect("valid attachment degree")
}

pub fn barabasi_albert_checked(n: usize, deg: usize, seed: u64) -> Result<Graph> {
    if deg == 0 || deg >= n {
        return Err(Error::InvalidParameter(format!(
            "attachment degree must be in 1..{n}, got {deg}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(deg * (n - deg));
    // each vertex appears once per incident edge
    let mut repeated: Vec<usize> = Vec::with_capacity(2 * deg * n);
    let mut targets: Vec<usize> = (0..deg).collect();
    let mut picked = HashSet::with_capacity(deg);
    for v in deg..n {
        for &t in &targets {
            edges.push((v, t));
            repeated.push(t);
            repeated.push(v);
        }
        picked.clear();
        targets.clear();
        while targets.len() < deg {
            let t = repeated[rng.gen_range(0..repeated.len())];
            if picked.insert(t) {
                targets.push(t);
            }
        }
    }
    Ok(Graph::from_edges(n, &edges))
}

/// `m` edges drawn uniformly with replacement, self-loops allowed.
pub fn random_multigraph(n: usize, m: usize, seed: u64) -> Graph {
    assert!(n > 0 || m == 0, "edges need vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    Graph::from_edges(n, &edges)
}

pub fn star(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Chain,
    Dag,
    ErdosRenyi,
    BarabasiAlbert,
    Tiny,
    Multigraph,
}

#[derive(Clone, Debug)]
pub struct CorpusGraph {
    pub name: String,
    pub family: Family,
    pub graph: Graph,
}

/// Fixed-seed collection of 54 graphs used by the property and acceptance
/// suites. With `large` false the 10k-vertex members are left out.
pub fn corpus(large: bool) -> Vec<CorpusGraph> {
    let mut out = Vec::new();
    let mut push = |name: String, family: Family, graph: Graph| out.push(CorpusGraph { name, family, graph });
    for n in [10, 100, 1000] {
        push(format!("chain-{n}"), Family::Chain, chain(n));
    }
    for (i, (n, p)) in [
        (50, 0.1),
        (50, 0.3),
        (200, 0.05),
        (200, 0.02),
        (500, 0.01),
        (1000, 0.005),
        (1000, 0.01),
        (2000, 0.002),
    ]
    .into_iter()
    .enumerate()
    {
        let g = random_dag(n, p, 100 + i as u64).expect("valid probability");
        push(format!("dag-{n}-{p}"), Family::Dag, g);
    }
    for seed in 0..5 {
        push(
            format!("er-50-200-s{seed}"),
            Family::ErdosRenyi,
            erdos_renyi(50, 200, seed),
        );
    }
    for seed in 0..5 {
        push(
            format!("er-1000-5000-s{seed}"),
            Family::ErdosRenyi,
            erdos_renyi(1000, 5000, seed),
        );
    }
    for seed in 0..3 {
        push(
            format!("ba-1000-3-s{seed}"),
            Family::BarabasiAlbert,
            barabasi_albert(1000, 3, seed),
        );
    }
    if large {
        for seed in 0..2 {
            push(
                format!("er-10000-50000-s{seed}"),
                Family::ErdosRenyi,
                erdos_renyi(10_000, 50_000, seed),
            );
        }
        for seed in 0..2 {
            push(
                format!("ba-10000-4-s{seed}"),
                Family::BarabasiAlbert,
                barabasi_albert(10_000, 4, seed),
            );
        }
    }
    push("two-cycle".into(), Family::Tiny, cycle(2));
    push("three-cycle".into(), Family::Tiny, cycle(3));
    push("cycle-50".into(), Family::Tiny, cycle(50));
    push("star-100".into(), Family::Tiny, star(100));
    push("single".into(), Family::Tiny, Graph::from_edges(1, &[]));
    push(
        "loop-and-pair".into(),
        Family::Tiny,
        Graph::from_edges(2, &[(0, 0), (0, 1), (0, 1), (1, 0)]),
    );
    for seed in 0..20 {
        let n = 5 + 15 * (seed as usize % 7);
        let g = random_multigraph(n, 4 * n, 500 + seed);
        push(format!("multi-{n}-s{seed}"), Family::Multigraph, g);
    }
    out
}
