//! Monotone vertex-update rules driven by the engine.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// How the engine decides that a sweep changed something.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChangeCriterion {
    /// Any state differing from its previous value is a change; converged
    /// once a sweep changes nothing.
    Exact,
    /// Converged once the sweep's summed absolute change drops below epsilon.
    SumBelowEpsilon,
}

/// Direction in which states move from their initial values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    NonIncreasing,
    NonDecreasing,
}

/// A per-vertex update `x_v = F(states of IN(v))`, non-decreasing in every
/// in-neighbour argument.
///
/// `update` reads neighbour states from `states`; the engine decides whether
/// that slice holds the previous sweep (sync) or the live vector (async).
pub trait AlgorithmSpec: Sync {
    fn name(&self) -> &'static str;

    /// Checks parameters that depend on the graph (e.g. source in range).
    fn validate(&self, graph: &Graph) -> Result<()>;

    fn init(&self, graph: &Graph) -> Vec<f64>;

    fn update(&self, graph: &Graph, v: usize, states: &[f64]) -> f64;

    fn criterion(&self) -> ChangeCriterion;

    fn direction(&self) -> Direction;
}

fn check_source(source: usize, graph: &Graph) -> Result<()> {
    if source >= graph.n() {
        return Err(Error::VertexOutOfRange {
            vertex: source,
            n: graph.n(),
        });
    }
    Ok(())
}

fn check_unit_interval(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must lie in (0, 1), got {value}"
        )));
    }
    Ok(())
}

/// `x_v = (1 - d) + d * sum_{u in IN(v)} x_u / |OUT(u)|`, zero-initialised.
#[derive(Clone, Copy, Debug)]
pub struct PageRank {
    damping: f64,
}

impl PageRank {
    pub fn new(damping: f64) -> Result<PageRank> {
        check_unit_interval("damping", damping)?;
        Ok(PageRank { damping })
    }

    pub fn damping(&self) -> f64 {
        self.damping
    }
}

impl AlgorithmSpec for PageRank {
    fn name(&self) -> &'static str {
        "pagerank"
    }

    fn validate(&self, _graph: &Graph) -> Result<()> {
        Ok(())
    }

    fn init(&self, graph: &Graph) -> Vec<f64> {
        vec![0.0; graph.n()]
    }

    fn update(&self, graph: &Graph, v: usize, states: &[f64]) -> f64 {
        let sum: f64 = graph
            .in_neighbors(v)
            .iter()
            .map(|&u| states[u] / graph.out_degree(u) as f64)
            .sum();
        (1.0 - self.damping) + self.damping * sum
    }

    fn criterion(&self) -> ChangeCriterion {
        ChangeCriterion::SumBelowEpsilon
    }

    fn direction(&self) -> Direction {
        Direction::NonDecreasing
    }
}

/// `x_v = min(x_v, min_u x_u + w(u, v))` from a single source.
#[derive(Clone, Copy, Debug)]
pub struct Sssp {
    source: usize,
}

impl Sssp {
    pub fn new(source: usize) -> Sssp {
        Sssp { source }
    }
}

fn relax<I: Iterator<Item = (usize, f64)>>(current: f64, incoming: I, states: &[f64]) -> f64 {
    incoming.fold(current, |best, (u, w)| best.min(states[u] + w))
}

impl AlgorithmSpec for Sssp {
    fn name(&self) -> &'static str {
        "sssp"
    }

    fn validate(&self, graph: &Graph) -> Result<()> {
        check_source(self.source, graph)
    }

    fn init(&self, graph: &Graph) -> Vec<f64> {
        let mut x = vec![f64::INFINITY; graph.n()];
        x[self.source] = 0.0;
        x
    }

    fn update(&self, graph: &Graph, v: usize, states: &[f64]) -> f64 {
        relax(states[v], graph.in_edges(v), states)
    }

    fn criterion(&self) -> ChangeCriterion {
        ChangeCriterion::Exact
    }

    fn direction(&self) -> Direction {
        Direction::NonIncreasing
    }
}

/// Hop distance: SSSP with every weight taken as 1.
#[derive(Clone, Copy, Debug)]
pub struct Bfs {
    source: usize,
}

impl Bfs {
    pub fn new(source: usize) -> Bfs {
        Bfs { source }
    }
}

impl AlgorithmSpec for Bfs {
    fn name(&self) -> &'static str {
        "bfs"
    }

    fn validate(&self, graph: &Graph) -> Result<()> {
        check_source(self.source, graph)
    }

    fn init(&self, graph: &Graph) -> Vec<f64> {
        let mut x = vec![f64::INFINITY; graph.n()];
        x[self.source] = 0.0;
        x
    }

    fn update(&self, graph: &Graph, v: usize, states: &[f64]) -> f64 {
        relax(states[v], graph.in_neighbors(v).iter().map(|&u| (u, 1.0)), states)
    }

    fn criterion(&self) -> ChangeCriterion {
        ChangeCriterion::Exact
    }

    fn direction(&self) -> Direction {
        Direction::NonIncreasing
    }
}

/// Penalized hitting probability towards a pinned source:
/// `x_s = 1`, otherwise `x_v = c * sum_{(u,v)} w(u,v) / W_out(u) * x_u`.
#[derive(Clone, Copy, Debug)]
pub struct Php {
    source: usize,
    penalty: f64,
}

impl Php {
    pub fn new(source: usize, penalty: f64) -> Result<Php> {
        check_unit_interval("penalty", penalty)?;
        Ok(Php { source, penalty })
    }
}

impl AlgorithmSpec for Php {
    fn name(&self) -> &'static str {
        "php"
    }

    fn validate(&self, graph: &Graph) -> Result<()> {
        check_source(self.source, graph)
    }

    fn init(&self, graph: &Graph) -> Vec<f64> {
        let mut x = vec![0.0; graph.n()];
        x[self.source] = 1.0;
        x
    }

    fn update(&self, graph: &Graph, v: usize, states: &[f64]) -> f64 {
        if v == self.source {
            return 1.0;
        }
        let sum: f64 = graph
            .in_edges(v)
            .map(|(u, w)| w / graph.out_weight_sum(u) * states[u])
            .sum();
        self.penalty * sum
    }

    fn criterion(&self) -> ChangeCriterion {
        ChangeCriterion::SumBelowEpsilon
    }

    fn direction(&self) -> Direction {
        Direction::NonDecreasing
    }
}

/// Algorithm selector used by the command line and the benchmark matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgoKind {
    PageRank,
    Sssp,
    Bfs,
    Php,
}

#[derive(Clone, Copy, Debug)]
pub struct AlgoParams {
    pub damping: f64,
    pub penalty: f64,
    pub source: usize,
}

impl Default for AlgoParams {
    fn default() -> Self {
        AlgoParams {
            damping: 0.85,
            penalty: 0.85,
            source: 0,
        }
    }
}

impl AlgoKind {
    pub const ALL: [AlgoKind; 4] = [AlgoKind::PageRank, AlgoKind::Sssp, AlgoKind::Bfs, AlgoKind::Php];

    pub fn build(self, params: &AlgoParams) -> Result<Box<dyn AlgorithmSpec>> {
        Ok(match self {
            AlgoKind::PageRank => Box::new(PageRank::new(params.damping)?),
            AlgoKind::Sssp => Box::new(Sssp::new(params.source)),
            AlgoKind::Bfs => Box::new(Bfs::new(params.source)),
            AlgoKind::Php => Box::new(Php::new(params.source, params.penalty)?),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlgoKind::PageRank => "pagerank",
            AlgoKind::Sssp => "sssp",
            AlgoKind::Bfs => "bfs",
            AlgoKind::Php => "php",
        }
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgoKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pagerank" => Ok(AlgoKind::PageRank),
            "sssp" => Ok(AlgoKind::Sssp),
            "bfs" => Ok(AlgoKind::Bfs),
            "php" => Ok(AlgoKind::Php),
            other => Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parameter_ranges() {
        assert!(PageRank::new(0.0).is_err());
        assert!(PageRank::new(1.0).is_err());
        assert!(PageRank::new(f64::NAN).is_err());
        assert!(Php::new(0, 1.5).is_err());
        let g = Graph::from_edges(2, &[(0, 1)]);
        assert!(Sssp::new(2).validate(&g).is_err());
        assert!(Php::new(5, 0.5).unwrap().validate(&g).is_err());
    }

    #[test]
    fn pagerank_isolated_vertex_is_teleport() {
        let g = Graph::from_edges(1, &[]);
        let pr = PageRank::new(0.85).unwrap();
        assert!((pr.update(&g, 0, &[0.0]) - 0.15).abs() < 1e-15);
    }

    #[test]
    fn php_single_step_from_source() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let php = Php::new(0, 0.85).unwrap();
        let x = php.init(&g);
        assert_eq!(x, vec![1.0, 0.0]);
        assert!((php.update(&g, 1, &x) - 0.85).abs() < 1e-15);
        assert_eq!(php.update(&g, 0, &[0.3, 0.9]), 1.0);
    }

    #[test]
    fn kind_parsing() {
        for k in AlgoKind::ALL {
            assert_eq!(k.as_str().parse::<AlgoKind>().unwrap(), k);
        }
        assert!("katz".parse::<AlgoKind>().is_err());
    }

    /// Raising one in-neighbour state never lowers the output.
    #[test]
    fn monotonicity_probe() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..300 {
            let n = rng.gen_range(2..=8);
            let edges: Vec<(usize, usize, f64)> = (0..rng.gen_range(1..=3 * n))
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(1..=5) as f64))
                .collect();
            let g = Graph::from_weighted_edges(n, &edges);
            let specs: Vec<Box<dyn AlgorithmSpec>> = vec![
                Box::new(PageRank::new(0.85).unwrap()),
                Box::new(Sssp::new(0)),
                Box::new(Bfs::new(0)),
                Box::new(Php::new(0, 0.85).unwrap()),
            ];
            for spec in &specs {
                let states: Vec<f64> = (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.2) {
                            f64::INFINITY
                        } else {
                            rng.gen_range(0.0..5.0)
                        }
                    })
                    .map(|x| {
                        if spec.criterion() == ChangeCriterion::Exact {
                            x
                        } else {
                            x.min(4.0)
                        }
                    })
                    .collect();
                for v in 0..n {
                    for &u in g.in_neighbors(v) {
                        if u == v {
                            continue;
                        }
                        let base = spec.update(&g, v, &states);
                        let mut raised = states.clone();
                        raised[u] = if raised[u].is_finite() {
                            raised[u] + rng.gen_range(0.0..3.0)
                        } else {
                            raised[u]
                        };
                        let up = spec.update(&g, v, &raised);
                        assert!(up >= base, "{} trial {trial}: raising x_{u} lowered x_{v}", spec.name());
                    }
                }
            }
        }
    }

    #[test]
    fn bfs_equals_sssp_on_unit_weights() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let x = vec![0.0, 1.0, f64::INFINITY, 7.0];
        for v in 0..4 {
            assert_eq!(Bfs::new(0).update(&g, v, &x), Sssp::new(0).update(&g, v, &x));
        }
    }
}
