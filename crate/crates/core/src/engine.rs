//! Synchronous (Jacobi) and asynchronous in-order (Gauss-Seidel) sweeps.
//!
//! A sweep visits every vertex once. In sync mode each update reads the
//! previous sweep's vector; in async mode updates are written in place, so an
//! in-neighbour processed earlier in the same sweep contributes its fresh
//! value. `changing_sweeps` counts sweeps that changed something; the sweep
//! that detects convergence is counted only in `total_sweeps`.

use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algos::{AlgorithmSpec, ChangeCriterion};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::order::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sync,
    Async,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sync" => Ok(Mode::Sync),
            "async" => Ok(Mode::Async),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub mode: Mode,
    /// Threshold on the summed absolute change for sum-criterion algorithms.
    pub epsilon: f64,
    pub max_sweeps: usize,
    /// Record per-sweep state sums, distances and timestamps.
    pub trace: bool,
    /// Measure wall time. Off makes reports byte-reproducible.
    pub timing: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mode: Mode::Async,
            epsilon: 1e-6,
            max_sweeps: 10_000,
            trace: false,
            timing: false,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidParameter("max_sweeps must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub mode: Mode,
    pub changing_sweeps: usize,
    pub total_sweeps: usize,
    pub converged: bool,
    /// Unreachable vertices of path algorithms serialise as `null`.
    pub final_states: Vec<f64>,
    /// Per sweep: number of changed vertices (exact criterion) or summed
    /// absolute change (sum criterion).
    pub residual_trace: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist_trace: Option<Vec<f64>>,
    /// Cumulative seconds at the end of each sweep.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_times: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl RunReport {
    /// CSV rows `sweep,residual,dist,wall_time` (one per sweep).
    pub fn write_trace_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "sweep,residual,dist,wall_time")?;
        for (i, r) in self.residual_trace.iter().enumerate() {
            let dist = self.dist_trace.as_ref().map_or(f64::NAN, |d| d[i]);
            let t = self.sweep_times.as_ref().map_or(0.0, |t| t[i]);
            writeln!(out, "{},{},{},{}", i + 1, r, dist, t)?;
        }
        Ok(())
    }
}

/// `|sum x* - sum x_t|` over vertices whose reference state is finite.
///
/// Infinite when some such vertex is still infinite in `states`.
pub fn distance_to_convergence(reference: &[f64], states: &[f64]) -> f64 {
    assert_eq!(reference.len(), states.len());
    let mut ref_sum = 0.0;
    let mut sum = 0.0;
    for (&r, &x) in reference.iter().zip(states) {
        if !r.is_finite() {
            continue;
        }
        if !x.is_finite() {
            return f64::INFINITY;
        }
        ref_sum += r;
        sum += x;
    }
    (ref_sum - sum).abs()
}

pub fn run_sync(graph: &Graph, algorithm: &dyn AlgorithmSpec, config: &EngineConfig) -> Result<RunReport> {
    let visit: Vec<usize> = (0..graph.n()).collect();
    drive(graph, algorithm, config, Mode::Sync, &visit, &mut |_, _| {})
}

/// Sync run with an explicit vertex visit order. Results do not depend on it.
pub fn run_sync_visiting(
    graph: &Graph,
    algorithm: &dyn AlgorithmSpec,
    config: &EngineConfig,
    visit: &Ordering,
    observer: &mut dyn FnMut(usize, &[f64]),
) -> Result<RunReport> {
    check_cover(graph, visit)?;
    drive(graph, algorithm, config, Mode::Sync, visit.seq(), observer)
}

pub fn run_async(
    graph: &Graph,
    order: &Ordering,
    algorithm: &dyn AlgorithmSpec,
    config: &EngineConfig,
) -> Result<RunReport> {
    run_async_observed(graph, order, algorithm, config, &mut |_, _| {})
}

/// Async run calling `observer(sweep, states)` after every sweep.
pub fn run_async_observed(
    graph: &Graph,
    order: &Ordering,
    algorithm: &dyn AlgorithmSpec,
    config: &EngineConfig,
    observer: &mut dyn FnMut(usize, &[f64]),
) -> Result<RunReport> {
    check_cover(graph, order)?;
    drive(graph, algorithm, config, Mode::Async, order.seq(), observer)
}

/// Dispatches on `config.mode`; async requires an order.
pub fn run(
    graph: &Graph,
    order: Option<&Ordering>,
    algorithm: &dyn AlgorithmSpec,
    config: &EngineConfig,
) -> Result<RunReport> {
    match config.mode {
        Mode::Sync => run_sync(graph, algorithm, config),
        Mode::Async => {
            let order = order.ok_or_else(|| Error::InvalidParameter("async mode requires an order".into()))?;
            run_async(graph, order, algorithm, config)
        }
    }
}

fn check_cover(graph: &Graph, order: &Ordering) -> Result<()> {
    if order.len() != graph.n() {
        return Err(Error::SizeMismatch {
            order: order.len(),
            graph: graph.n(),
        });
    }
    Ok(())
}

fn drive(
    graph: &Graph,
    algorithm: &dyn AlgorithmSpec,
    config: &EngineConfig,
    mode: Mode,
    visit: &[usize],
    observer: &mut dyn FnMut(usize, &[f64]),
) -> Result<RunReport> {
    config.validate()?;
    algorithm.validate(graph)?;
    let start = config.timing.then(Instant::now);
    let criterion = algorithm.criterion();
    let n = graph.n();

    let mut x = algorithm.init(graph);
    let mut next = x.clone();
    let mut delta = vec![0.0f64; n];
    let mut residuals = Vec::new();
    // (sum of finite states, number of finite states) after each sweep
    let mut sums: Vec<(f64, usize)> = Vec::new();
    let mut times = Vec::new();
    let mut changing = 0;
    let mut total = 0;
    let mut converged = false;

    for sweep in 1..=config.max_sweeps {
        total = sweep;
        let mut changed = 0usize;
        for &v in visit {
            let old = x[v];
            let new = algorithm.update(graph, v, &x);
            if new.is_nan() || (new.is_infinite() && criterion == ChangeCriterion::SumBelowEpsilon) {
                return Err(Error::NonFinite { vertex: v, sweep });
            }
            if new != old {
                changed += 1;
                delta[v] = if old.is_finite() && new.is_finite() {
                    (new - old).abs()
                } else {
                    0.0
                };
            } else {
                delta[v] = 0.0;
            }
            match mode {
                Mode::Async => x[v] = new,
                Mode::Sync => next[v] = new,
            }
        }
        if mode == Mode::Sync {
            std::mem::swap(&mut x, &mut next);
        }
        // summed in vertex-id order so sync results ignore the visit order
        let residual = match criterion {
            ChangeCriterion::Exact => changed as f64,
            ChangeCriterion::SumBelowEpsilon => delta.iter().sum(),
        };
        residuals.push(residual);
        if config.trace {
            let finite = x.iter().filter(|s| s.is_finite());
            sums.push((finite.clone().sum(), finite.count()));
            times.push(start.map_or(0.0, |s| s.elapsed().as_secs_f64()));
        }
        observer(sweep, &x);

        let still_changing = match criterion {
            ChangeCriterion::Exact => changed > 0,
            ChangeCriterion::SumBelowEpsilon => residual >= config.epsilon,
        };
        if !still_changing {
            converged = true;
            break;
        }
        changing += 1;
    }

    let dist_trace = config.trace.then(|| {
        let final_finite = x.iter().filter(|s| s.is_finite());
        let final_sum: f64 = final_finite.clone().sum();
        let final_count = final_finite.count();
        sums.iter()
            .map(|&(s, c)| {
                if c < final_count {
                    f64::INFINITY
                } else {
                    (final_sum - s).abs()
                }
            })
            .collect()
    });

    Ok(RunReport {
        algorithm: algorithm.name().to_string(),
        mode,
        changing_sweeps: changing,
        total_sweeps: total,
        converged,
        final_states: x,
        residual_trace: residuals,
        dist_trace,
        sweep_times: (config.trace && config.timing).then_some(times),
        wall_time: start.map(|s| s.elapsed().as_secs_f64()),
    })
}
