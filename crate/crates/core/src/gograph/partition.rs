//! Hub extraction and community partitioning of the residual graph.

use std::collections::VecDeque;

use crate::graph::Graph;

/// Label-propagation sweep cap.
pub const MAX_LP_SWEEPS: usize = 20;

#[derive(Clone, Debug)]
pub struct HubSplit {
    /// Hub vertices in original ids, in selection order (highest degree first).
    pub hubs: Vec<usize>,
    /// Vertices left without edges once hubs are removed, ascending.
    pub isolated: Vec<usize>,
    /// Graph on the remaining vertices.
    pub residual: Graph,
    /// `residual_map[local] = original`.
    pub residual_map: Vec<usize>,
}

/// Number of hubs for a graph of `n` vertices.
pub fn hub_count(n: usize, hub_fraction: f64) -> usize {
    // the small slack keeps e.g. 0.002 * 1000 from rounding up to 3
    let k = (hub_fraction * n as f64 - 1e-9).ceil().max(0.0) as usize;
    k.min(n)
}

/// Picks the `ceil(fraction * n)` highest-degree vertices (ties: larger
/// out-degree, then lower id) and separates the vertices they leave isolated.
pub fn extract_hubs(graph: &Graph, hub_fraction: f64) -> HubSplit {
    let n = graph.n();
    let k = hub_count(n, hub_fraction);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by(|&a, &b| {
        graph
            .degree(b)
            .cmp(&graph.degree(a))
            .then(graph.out_degree(b).cmp(&graph.out_degree(a)))
            .then(a.cmp(&b))
    });
    let hubs: Vec<usize> = by_degree[..k].to_vec();

    let mut removed = vec![false; n];
    for &h in &hubs {
        removed[h] = true;
    }
    let (after_hubs, map) = graph.subgraph_without(&removed);
    let isolated_local: Vec<bool> = (0..after_hubs.n()).map(|v| after_hubs.degree(v) == 0).collect();
    let isolated: Vec<usize> = (0..after_hubs.n())
        .filter(|&v| isolated_local[v])
        .map(|v| map[v])
        .collect();
    let (residual, inner) = after_hubs.subgraph_without(&isolated_local);
    let residual_map = inner.iter().map(|&v| map[v]).collect();
    HubSplit {
        hubs,
        isolated,
        residual,
        residual_map,
    }
}

/// Undirected neighbour list with multiplicity, self-loops dropped.
fn undirected_neighbors(graph: &Graph, v: usize) -> impl Iterator<Item = usize> + '_ {
    graph
        .out_neighbors(v)
        .iter()
        .chain(graph.in_neighbors(v))
        .copied()
        .filter(move |&u| u != v)
}

/// Most frequent value in `labels` (ties: smallest). `labels` is sorted in place.
fn plurality(labels: &mut [usize]) -> Option<usize> {
    labels.sort_unstable();
    let mut best: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < labels.len() {
        let mut j = i;
        while j < labels.len() && labels[j] == labels[i] {
            j += 1;
        }
        if best.is_none_or(|(_, c)| j - i > c) {
            best = Some((labels[i], j - i));
        }
        i = j;
    }
    best.map(|(l, _)| l)
}

/// Synchronous label propagation on the undirected view.
///
/// Each vertex adopts the most frequent label among its neighbours and
/// itself, ties to the smaller label. Counting the vertex's own label damps
/// the two-colour oscillation that plain synchronous updates fall into on
/// bipartite pieces.
pub fn label_propagation(graph: &Graph) -> Vec<usize> {
    let n = graph.n();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut next = labels.clone();
    let mut buf = Vec::new();
    for _ in 0..MAX_LP_SWEEPS {
        let mut changed = false;
        for v in 0..n {
            buf.clear();
            buf.push(labels[v]);
            buf.extend(undirected_neighbors(graph, v).map(|u| labels[u]));
            let l = plurality(&mut buf).unwrap_or(labels[v]);
            changed |= l != labels[v];
            next[v] = l;
        }
        std::mem::swap(&mut labels, &mut next);
        if !changed {
            break;
        }
    }
    labels
}

#[derive(Clone, Debug)]
pub struct PartitionResult {
    /// Part id of every vertex.
    pub assignment: Vec<usize>,
    /// Members of each part, ascending. Parts are numbered by their smallest
    /// member.
    pub parts: Vec<Vec<usize>>,
}

impl PartitionResult {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> usize {
        self.parts.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Splits the vertices of `graph` into communities of at most
/// `max_part_size` vertices.
pub fn partition_remaining(graph: &Graph, max_part_size: usize) -> PartitionResult {
    assert!(max_part_size >= 1, "max_part_size must be positive");
    let n = graph.n();
    let mut labels = label_propagation(graph);

    // fold singletons into their best-connected neighbouring community
    let mut size = vec![0usize; n];
    for &l in &labels {
        size[l] += 1;
    }
    let mut buf = Vec::new();
    for v in 0..n {
        if size[labels[v]] != 1 {
            continue;
        }
        buf.clear();
        buf.extend(
            undirected_neighbors(graph, v)
                .map(|u| labels[u])
                .filter(|&l| l != labels[v]),
        );
        if let Some(l) = plurality(&mut buf) {
            size[labels[v]] -= 1;
            labels[v] = l;
            size[l] += 1;
        }
    }

    let mut communities: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for (v, &l) in labels.iter().enumerate() {
        if slot[l] == usize::MAX {
            slot[l] = communities.len();
            communities.push(Vec::new());
        }
        communities[slot[l]].push(v);
    }

    let mut parts = Vec::new();
    for members in communities {
        if members.len() <= max_part_size {
            parts.push(members);
        } else {
            parts.extend(bfs_chunks(graph, &members, max_part_size));
        }
    }
    parts.sort_by_key(|p| p[0]);

    let mut assignment = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            assignment[v] = i;
        }
    }
    PartitionResult { assignment, parts }
}

/// Breadth-first traversal of the community (restarting at the lowest
/// unvisited id), cut into consecutive chunks of `cap` vertices.
fn bfs_chunks(graph: &Graph, members: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut inside = std::collections::HashSet::with_capacity(members.len());
    inside.extend(members.iter().copied());
    let mut seen = std::collections::HashSet::with_capacity(members.len());
    let mut sequence = Vec::with_capacity(members.len());
    let mut queue = VecDeque::new();
    let mut nb = Vec::new();
    for &start in members {
        if !seen.insert(start) {
            continue;
        }
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            sequence.push(u);
            nb.clear();
            nb.extend(undirected_neighbors(graph, u).filter(|w| inside.contains(w)));
            nb.sort_unstable();
            nb.dedup();
            for &w in &nb {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    sequence
        .chunks(cap)
        .map(|c| {
            let mut c = c.to_vec();
            c.sort_unstable();
            c
        })
        .collect()
}
