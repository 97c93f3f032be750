//! Positive-edge metric over processing orders, plus exhaustive oracles.
//!
//! An edge `(u, v)` is positive under an order when `p(u) < p(v)`: its source
//! has already been updated by the time the destination is processed in an
//! in-place sweep. The metric `M` is the number of positive edges, counted per
//! edge instance. Self-loops are neither positive nor negative and are left
//! out of the denominator of `ratio`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algos::AlgorithmSpec;
use crate::engine::{run_async, EngineConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::order::Ordering;

/// Largest graph accepted by [`brute_force_best_order`].
pub const BEST_ORDER_CAP: usize = 10;
/// Largest graph accepted by [`brute_force_min_rounds`].
pub const MIN_ROUNDS_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Positive,
    Negative,
    SelfLoop,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub m_value: u64,
    pub positive: u64,
    pub negative: u64,
    pub skipped_self_loops: u64,
    pub edges_considered: u64,
    /// `m_value / edges_considered`; 1.0 when no edge is considered.
    pub ratio: f64,
}

impl MetricReport {
    fn from_counts(positive: u64, negative: u64, self_loops: u64) -> MetricReport {
        let considered = positive + negative;
        MetricReport {
            m_value: positive,
            positive,
            negative,
            skipped_self_loops: self_loops,
            edges_considered: considered,
            ratio: if considered == 0 {
                1.0
            } else {
                positive as f64 / considered as f64
            },
        }
    }
}

fn check_cover(graph: &Graph, order: &Ordering) -> Result<()> {
    if graph.n() != order.len() {
        return Err(Error::SizeMismatch {
            order: order.len(),
            graph: graph.n(),
        });
    }
    Ok(())
}

pub fn classify_edge(order: &Ordering, u: usize, v: usize) -> Result<EdgeClass> {
    let n = order.len();
    for x in [u, v] {
        if x >= n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    Ok(if u == v {
        EdgeClass::SelfLoop
    } else if order.position(u) < order.position(v) {
        EdgeClass::Positive
    } else {
        EdgeClass::Negative
    })
}

pub fn evaluate_m(graph: &Graph, order: &Ordering) -> Result<MetricReport> {
    check_cover(graph, order)?;
    let pos = order.pos();
    let (mut positive, mut negative, mut loops) = (0u64, 0u64, 0u64);
    for u in 0..graph.n() {
        let pu = pos[u];
        for &v in graph.out_neighbors(u) {
            if u == v {
                loops += 1;
            } else if pu < pos[v] {
                positive += 1;
            } else {
                negative += 1;
            }
        }
    }
    Ok(MetricReport::from_counts(positive, negative, loops))
}

/// Weighted metric for contracted graphs whose edge weights are edge counts.
///
/// Every count in the report is a weight sum.
pub fn evaluate_weighted_m(graph: &Graph, order: &Ordering) -> Result<MetricReport> {
    check_cover(graph, order)?;
    let pos = order.pos();
    let (mut positive, mut negative, mut loops) = (0u64, 0u64, 0u64);
    for (u, v, w) in graph.edges() {
        if w.fract() != 0.0 || w < 1.0 {
            return Err(Error::NonIntegerWeight { u, v, weight: w });
        }
        let w = w as u64;
        if u == v {
            loops += w;
        } else if pos[u] < pos[v] {
            positive += w;
        } else {
            negative += w;
        }
    }
    Ok(MetricReport::from_counts(positive, negative, loops))
}

/// Rearranges `seq` into the next permutation in lexicographic order.
/// Returns false (leaving `seq` sorted ascending) after the last one.
pub(crate) fn next_permutation(seq: &mut [usize]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        seq.reverse();
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}

/// Runs `score` over every permutation that starts with `first`, in
/// lexicographic order, keeping the earliest maximum.
fn best_with_prefix<F>(n: usize, first: usize, mut score: F) -> Option<(Vec<usize>, i64)>
where
    F: FnMut(&[usize]) -> Option<i64>,
{
    let mut rest: Vec<usize> = (0..n).filter(|&v| v != first).collect();
    let mut seq = Vec::with_capacity(n);
    let mut best: Option<(Vec<usize>, i64)> = None;
    loop {
        seq.clear();
        seq.push(first);
        seq.extend_from_slice(&rest);
        if let Some(s) = score(&seq) {
            if best.as_ref().is_none_or(|(_, b)| s > *b) {
                best = Some((seq.clone(), s));
            }
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    best
}

/// Splits the permutation space by first slot across workers. Reducing in
/// first-slot order keeps the lexicographically smallest maximiser.
fn exhaustive_best<F>(n: usize, score: F) -> Option<(Vec<usize>, i64)>
where
    F: Fn(&[usize]) -> Option<i64> + Sync,
{
    if n == 0 {
        return score(&[]).map(|s| (Vec::new(), s));
    }
    let per_first: Vec<Option<(Vec<usize>, i64)>> = (0..n)
        .into_par_iter()
        .map(|first| best_with_prefix(n, first, &score))
        .collect();
    let mut best: Option<(Vec<usize>, i64)> = None;
    for cand in per_first.into_iter().flatten() {
        if best.as_ref().is_none_or(|(_, b)| cand.1 > *b) {
            best = Some(cand);
        }
    }
    best
}

/// Exhaustive maximiser of `M` over all `n!` orders (`n <= 10`).
///
/// Ties go to the lexicographically smallest sequence.
pub fn brute_force_best_order(graph: &Graph) -> Result<(Ordering, u64)> {
    let n = graph.n();
    if n > BEST_ORDER_CAP {
        return Err(Error::TooLarge { n, cap: BEST_ORDER_CAP });
    }
    let edges: Vec<(usize, usize)> = graph
        .edges()
        .filter(|&(u, v, _)| u != v)
        .map(|(u, v, _)| (u, v))
        .collect();
    let (seq, best) = exhaustive_best(n, |seq| {
        let mut pos = [0usize; BEST_ORDER_CAP];
        for (i, &v) in seq.iter().enumerate() {
            pos[v] = i;
        }
        Some(edges.iter().filter(|&&(u, v)| pos[u] < pos[v]).count() as i64)
    })
    .expect("at least one permutation");
    Ok((Ordering::from_seq(seq)?, best as u64))
}

/// Exhaustive minimiser of async changing sweeps over all orders (`n <= 8`).
///
/// Orders whose run does not converge within `config.max_sweeps` are
/// ignored. Ties go to the lexicographically smallest sequence.
pub fn brute_force_min_rounds(
    graph: &Graph,
    algorithm: &dyn AlgorithmSpec,
    config: &EngineConfig,
) -> Result<(Ordering, usize)> {
    let n = graph.n();
    if n > MIN_ROUNDS_CAP {
        return Err(Error::TooLarge { n, cap: MIN_ROUNDS_CAP });
    }
    let best = exhaustive_best(n, |seq| {
        let order = Ordering::from_seq(seq.to_vec()).ok()?;
        let report = run_async(graph, &order, algorithm, config).ok()?;
        report.converged.then(|| -(report.changing_sweeps as i64))
    });
    match best {
        Some((seq, neg)) => Ok((Ordering::from_seq(seq)?, (-neg) as usize)),
        None => Err(Error::InvalidParameter(format!(
            "no order converged within {} sweeps",
            config.max_sweeps
        ))),
    }
}
