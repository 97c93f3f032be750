//! Immutable directed multigraph in compressed adjacency form.
//!
//! Both the out-view and the in-view are stored, each sorted by neighbour id
//! then weight. Vertex ids are dense `0..n`; the original (file) id of every
//! vertex is kept in `labels` so orders can be written back in the caller's
//! id space. Parallel edges and self-loops are retained.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Parsed edge multiset with ids already densified.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    /// `labels[dense] = original id`.
    pub labels: Vec<u64>,
    /// True if any line carried an explicit weight.
    pub weighted: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    /// Weight given to two-column lines.
    pub default_weight: f64,
    /// Accept `#`-prefixed comment lines.
    pub allow_comments: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            default_weight: 1.0,
            allow_comments: true,
        }
    }
}

fn parse_id(token: &str, line: usize) -> Result<u64> {
    if token.starts_with('-') {
        return Err(Error::Parse {
            line,
            message: format!("negative vertex id `{token}`"),
        });
    }
    token.parse::<u64>().map_err(|_| Error::Parse {
        line,
        message: format!("invalid vertex id `{token}`"),
    })
}

/// Reads a whitespace-separated `u v [w]` edge list.
///
/// Ids are remapped to `0..n` in order of first appearance. Blank lines are
/// skipped. Line numbers in errors are 1-based.
pub fn parse_edge_list<R: BufRead>(reader: R, options: &ParseOptions) -> Result<EdgeList> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut weighted = false;

    let mut dense = |id: u64, labels: &mut Vec<u64>| -> usize {
        *index.entry(id).or_insert_with(|| {
            labels.push(id);
            labels.len() - 1
        })
    };

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if options.allow_comments {
                continue;
            }
            return Err(Error::Parse {
                line: line_no,
                message: "comment lines are not allowed".into(),
            });
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `u v` or `u v w`, found {} fields", tokens.len()),
            });
        }
        let u = parse_id(tokens[0], line_no)?;
        let v = parse_id(tokens[1], line_no)?;
        let w = if tokens.len() == 3 {
            weighted = true;
            let w: f64 = tokens[2].parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid weight `{}`", tokens[2]),
            })?;
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("weight must be finite and positive, found {w}"),
                });
            }
            w
        } else {
            options.default_weight
        };
        let du = dense(u, &mut labels);
        let dv = dense(v, &mut labels);
        edges.push((du, dv, w));
    }

    Ok(EdgeList {
        n: labels.len(),
        edges,
        labels,
        weighted,
    })
}

pub fn parse_edge_list_str(text: &str, options: &ParseOptions) -> Result<EdgeList> {
    parse_edge_list(text.as_bytes(), options)
}

/// Per-vertex degree counts plus global summaries.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeStats {
    pub in_degree: Vec<usize>,
    pub out_degree: Vec<usize>,
    pub total_degree: Vec<usize>,
    pub max_degree: usize,
    pub mean_degree: f64,
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    out_weights: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
    in_weights: Vec<f64>,
    out_weight_sums: Vec<f64>,
    weighted: bool,
    labels: Vec<u64>,
}

fn compress(n: usize, mut edges: Vec<(usize, usize, f64)>) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    edges.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    let mut offsets = vec![0usize; n + 1];
    for &(u, _, _) in &edges {
        offsets[u + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let targets = edges.iter().map(|e| e.1).collect();
    let weights = edges.iter().map(|e| e.2).collect();
    (offsets, targets, weights)
}

impl Graph {
    /// Builds both adjacency views from a dense edge multiset.
    pub fn build(list: EdgeList) -> Graph {
        let EdgeList {
            n,
            edges,
            labels,
            weighted,
        } = list;
        assert_eq!(labels.len(), n, "one label per vertex");
        for &(u, v, w) in &edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            assert!(w.is_finite() && w > 0.0, "edge ({u}, {v}) has invalid weight {w}");
        }
        let reversed: Vec<_> = edges.iter().map(|&(u, v, w)| (v, u, w)).collect();
        let (out_offsets, out_targets, out_weights) = compress(n, edges);
        let (in_offsets, in_sources, in_weights) = compress(n, reversed);
        let out_weight_sums = (0..n)
            .map(|u| out_weights[out_offsets[u]..out_offsets[u + 1]].iter().sum())
            .collect();
        Graph {
            n,
            out_offsets,
            out_targets,
            out_weights,
            in_offsets,
            in_sources,
            in_weights,
            out_weight_sums,
            weighted,
            labels,
        }
    }

    /// Unit-weight graph with identity labels.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let edges = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Graph::build(EdgeList {
            n,
            edges,
            labels: (0..n as u64).collect(),
            weighted: false,
        })
    }

    /// Weighted graph with identity labels.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
        Graph::build(EdgeList {
            n,
            edges: edges.to_vec(),
            labels: (0..n as u64).collect(),
            weighted: true,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.out_targets.len()
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    /// Original id → dense id lookup table.
    pub fn label_index(&self) -> HashMap<u64, usize> {
        self.labels.iter().enumerate().map(|(v, &l)| (l, v)).collect()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn out_weights(&self, v: usize) -> &[f64] {
        &self.out_weights[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn in_weights(&self, v: usize) -> &[f64] {
        &self.in_weights[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.out_neighbors(v)
            .iter()
            .copied()
            .zip(self.out_weights(v).iter().copied())
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.in_neighbors(v)
            .iter()
            .copied()
            .zip(self.in_weights(v).iter().copied())
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    /// Sum of outgoing edge weights of `v`.
    pub fn out_weight_sum(&self, v: usize) -> f64 {
        self.out_weight_sums[v]
    }

    /// All edges as `(u, v, w)` in source order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |u| self.out_edges(u).map(move |(v, w)| (u, v, w)))
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let in_degree: Vec<usize> = (0..self.n).map(|v| self.in_degree(v)).collect();
        let out_degree: Vec<usize> = (0..self.n).map(|v| self.out_degree(v)).collect();
        let total_degree: Vec<usize> = in_degree.iter().zip(&out_degree).map(|(a, b)| a + b).collect();
        let max_degree = total_degree.iter().copied().max().unwrap_or(0);
        let mean_degree = if self.n == 0 {
            0.0
        } else {
            total_degree.iter().sum::<usize>() as f64 / self.n as f64
        };
        DegreeStats {
            in_degree,
            out_degree,
            total_degree,
            max_degree,
            mean_degree,
        }
    }

    /// Graph induced on the vertices *not* flagged in `removed`.
    ///
    /// Returns the subgraph and `id_map[new] = old`.
    pub fn subgraph_without(&self, removed: &[bool]) -> (Graph, Vec<usize>) {
        assert_eq!(removed.len(), self.n);
        let keep: Vec<usize> = (0..self.n).filter(|&v| !removed[v]).collect();
        self.induced_subgraph(&keep)
    }

    /// Graph induced on `keep` (ascending ids expected but not required).
    ///
    /// Local id `i` corresponds to `keep[i]`; the returned map is `keep` itself.
    pub fn induced_subgraph(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for &u in keep {
            for (v, w) in self.out_edges(u) {
                if local[v] != usize::MAX {
                    edges.push((local[u], local[v], w));
                }
            }
        }
        let labels = keep.iter().map(|&v| self.labels[v]).collect();
        let g = Graph::build(EdgeList {
            n: keep.len(),
            edges,
            labels,
            weighted: self.weighted,
        });
        (g, keep.to_vec())
    }

    /// Same topology with every weight replaced by a seeded uniform integer
    /// in `[1, 10]`.
    pub fn with_random_weights(&self, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = self
            .edges()
            .map(|(u, v, _)| (u, v, rng.gen_range(1..=10) as f64))
            .collect();
        Graph::build(EdgeList {
            n: self.n,
            edges,
            labels: self.labels.clone(),
            weighted: true,
        })
    }

    /// Writes one `u v` (or `u v w` for weighted graphs) line per edge using
    /// original ids.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v, w) in self.edges() {
            if self.weighted {
                writeln!(out, "{} {} {}", self.labels[u], self.labels[v], w)?;
            } else {
                writeln!(out, "{} {}", self.labels[u], self.labels[v])?;
            }
        }
        Ok(())
    }

    /// Edge multiset in original ids, sorted. Two graphs with equal results
    /// describe the same labelled multigraph.
    pub fn labeled_edges(&self) -> Vec<(u64, u64, f64)> {
        let mut edges: Vec<_> = self
            .edges()
            .map(|(u, v, w)| (self.labels[u], self.labels[v], w))
            .collect();
        edges.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.total_cmp(&b.2)));
        edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<EdgeList> {
        parse_edge_list_str(text, &ParseOptions::default())
    }

    #[test]
    fn parses_minimal_chain() {
        let list = parse("0 1\n1 2\n").unwrap();
        assert_eq!(list.n, 3);
        assert_eq!(list.edges, vec![(0, 1, 1.0), (1, 2, 1.0)]);
        assert!(!list.weighted);
    }

    #[test]
    fn densifies_sparse_ids_in_first_appearance_order() {
        let list = parse("# c\n5 7 2.5\n").unwrap();
        assert_eq!(list.n, 2);
        assert_eq!(list.edges, vec![(0, 1, 2.5)]);
        assert_eq!(list.labels, vec![5, 7]);
        assert!(list.weighted);
    }

    #[test]
    fn keeps_self_loops_and_duplicates() {
        let list = parse("0 0\n0 1\n0 1\n").unwrap();
        assert_eq!(list.edges, vec![(0, 0, 1.0), (0, 1, 1.0), (0, 1, 1.0)]);
        let g = Graph::build(list);
        assert_eq!(g.m(), 3);
        assert_eq!(g.out_degree(0), 3);
        assert_eq!(g.in_degree(0), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse("0 1\n1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("0 1\n\n-3 1\n") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("negative"));
            }
            other => panic!("unexpected {other:?}"),
        }
        for bad in [
            "0 1 0\n",
            "0 1 -2\n",
            "0 1 inf\n",
            "0 1 NaN\n",
            "0 1 x\n",
            "a b\n",
            "0 1 2 3\n",
        ] {
            assert!(matches!(parse(bad), Err(Error::Parse { line: 1, .. })), "{bad:?}");
        }
    }

    #[test]
    fn comments_can_be_rejected() {
        let opts = ParseOptions {
            allow_comments: false,
            ..Default::default()
        };
        assert!(matches!(
            parse_edge_list_str("# hi\n0 1\n", &opts),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn builds_both_views() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(g.out_edges(0).collect::<Vec<_>>(), vec![(1, 1.0)]);
        assert_eq!(g.in_edges(2).collect::<Vec<_>>(), vec![(1, 1.0)]);
        assert_eq!(g.in_degree(0), 0);
    }

    #[test]
    fn empty_graph() {
        let g = Graph::from_edges(0, &[]);
        assert_eq!((g.n(), g.m()), (0, 0));
        let s = g.degree_stats();
        assert_eq!(s.max_degree, 0);
        assert_eq!(s.mean_degree, 0.0);
    }

    #[test]
    fn parallel_edges_counted() {
        let g = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        assert_eq!(g.out_degree(0), 2);
        assert_eq!(g.in_neighbors(1), &[0, 0]);
    }

    #[test]
    fn adjacency_sorted_by_neighbor_then_weight() {
        let g = Graph::from_weighted_edges(3, &[(0, 2, 1.0), (0, 1, 5.0), (0, 1, 2.0)]);
        assert_eq!(g.out_neighbors(0), &[1, 1, 2]);
        assert_eq!(g.out_weights(0), &[2.0, 5.0, 1.0]);
        assert_eq!(g.out_weight_sum(0), 8.0);
    }

    #[test]
    fn degree_stats_examples() {
        let chain = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let s = chain.degree_stats();
        assert_eq!(s.out_degree, vec![1, 1, 0]);
        assert_eq!(s.in_degree, vec![0, 1, 1]);

        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let s = star.degree_stats();
        assert_eq!(s.out_degree[0], 5);
        assert_eq!(s.max_degree, 5);
        assert!((s.mean_degree - 10.0 / 6.0).abs() < 1e-12);

        let looped = Graph::from_edges(1, &[(0, 0)]);
        let s = looped.degree_stats();
        assert_eq!((s.in_degree[0], s.out_degree[0]), (1, 1));
    }

    #[test]
    fn subgraph_without_middle_of_chain() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let (sub, map) = g.subgraph_without(&[false, true, false]);
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.m(), 0);
        assert_eq!(map, vec![0, 2]);
        assert_eq!(sub.labels(), &[0, 2]);
    }

    #[test]
    fn subgraph_without_nothing_is_identity() {
        let g = Graph::from_weighted_edges(4, &[(0, 1, 2.0), (1, 2, 1.0), (3, 0, 4.0), (2, 2, 1.0)]);
        let (sub, map) = g.subgraph_without(&[false; 4]);
        assert_eq!(map, vec![0, 1, 2, 3]);
        assert_eq!(sub.labeled_edges(), g.labeled_edges());
    }

    #[test]
    fn random_weights_are_seeded_integers() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let a = g.with_random_weights(7);
        let b = g.with_random_weights(7);
        assert_eq!(a.labeled_edges(), b.labeled_edges());
        for (_, _, w) in a.edges() {
            assert!((1.0..=10.0).contains(&w) && w.fract() == 0.0);
        }
    }

    #[test]
    fn edge_list_round_trip_by_label() {
        let text = "10 3 2\n3 7 1.5\n7 10 4\n3 3 1\n10 3 2\n";
        let g = Graph::build(parse(text).unwrap());
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let back = Graph::build(parse(std::str::from_utf8(&buf).unwrap()).unwrap());
        assert_eq!(back.labeled_edges(), g.labeled_edges());
    }
}
