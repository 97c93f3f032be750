//! Comparison orderers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gograph::{gograph_order, GoGraphConfig};
use crate::graph::Graph;
use crate::order::Ordering;

pub fn identity_order(graph: &Graph) -> Ordering {
    Ordering::identity(graph.n())
}

pub fn random_order(graph: &Graph, seed: u64) -> Ordering {
    let mut seq: Vec<usize> = (0..graph.n()).collect();
    seq.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ordering::from_seq(seq).expect("shuffle is a permutation")
}

/// Total degree descending, ties by id.
pub fn degree_sort_order(graph: &Graph) -> Ordering {
    let mut seq: Vec<usize> = (0..graph.n()).collect();
    seq.sort_by_key(|&v| (Reverse(graph.degree(v)), v));
    Ordering::from_seq(seq).expect("sorted ids form a permutation")
}

/// Vertices whose total degree exceeds the mean, ascending id.
pub fn hubs_above_mean(graph: &Graph) -> Vec<usize> {
    let n = graph.n();
    if n == 0 {
        return Vec::new();
    }
    // degree > 2m/n without floating point
    (0..n).filter(|&v| graph.degree(v) * n > 2 * graph.m()).collect()
}

fn hubs_then_rest(graph: &Graph, hubs: Vec<usize>) -> Ordering {
    let mut is_hub = vec![false; graph.n()];
    for &h in &hubs {
        is_hub[h] = true;
    }
    let mut seq = hubs;
    seq.extend((0..graph.n()).filter(|&v| !is_hub[v]));
    Ordering::from_seq(seq).expect("hubs and rest partition the vertices")
}

/// Above-mean hubs first by descending degree, everything else in id order.
pub fn hub_sort_order(graph: &Graph) -> Ordering {
    let mut hubs = hubs_above_mean(graph);
    hubs.sort_by_key(|&v| (Reverse(graph.degree(v)), v));
    hubs_then_rest(graph, hubs)
}

/// Above-mean hubs first in id order, everything else in id order.
pub fn hub_cluster_order(graph: &Graph) -> Ordering {
    hubs_then_rest(graph, hubs_above_mean(graph))
}

/// Kahn's algorithm, always emitting the smallest ready id.
pub fn topological_order(graph: &Graph) -> Result<Ordering> {
    let n = graph.n();
    let mut indeg: Vec<usize> = (0..n).map(|v| graph.in_degree(v)).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut seq = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        seq.push(u);
        for &v in graph.out_neighbors(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if seq.len() < n {
        // every leftover vertex has a leftover in-neighbour; walking back
        // must revisit something, and the first revisit lies on a cycle
        let start = (0..n).find(|&v| indeg[v] > 0).expect("leftover vertex");
        let mut seen = vec![false; n];
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = *graph
                .in_neighbors(v)
                .iter()
                .find(|&&u| indeg[u] > 0)
                .expect("leftover in-neighbour");
        }
        return Err(Error::Cyclic { vertex: graph.label(v) });
    }
    Ok(Ordering::from_seq(seq).expect("Kahn emits each vertex once"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Identity,
    Random,
    DegSort,
    HubSort,
    HubCluster,
    Topo,
    GoGraph,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Identity,
        Method::Random,
        Method::DegSort,
        Method::HubSort,
        Method::HubCluster,
        Method::Topo,
        Method::GoGraph,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Identity => "identity",
            Method::Random => "random",
            Method::DegSort => "degsort",
            Method::HubSort => "hubsort",
            Method::HubCluster => "hubcluster",
            Method::Topo => "topo",
            Method::GoGraph => "gograph",
        }
    }

    pub fn order(self, graph: &Graph, params: &MethodParams) -> Result<Ordering> {
        Ok(match self {
            Method::Identity => identity_order(graph),
            Method::Random => random_order(graph, params.seed),
            Method::DegSort => degree_sort_order(graph),
            Method::HubSort => hub_sort_order(graph),
            Method::HubCluster => hub_cluster_order(graph),
            Method::Topo => topological_order(graph)?,
            Method::GoGraph => gograph_order(graph, &params.gograph)?,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MethodParams {
    pub seed: u64,
    pub gograph: GoGraphConfig,
}
