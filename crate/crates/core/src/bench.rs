//! Method-by-algorithm benchmark matrices and small-graph oracle reports.

use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algos::{AlgoKind, AlgoParams};
use crate::baselines::{Method, MethodParams};
use crate::engine::{run_async, EngineConfig, Mode};
use crate::error::{Error, Result};
use crate::gograph::gograph_order;
use crate::graph::Graph;
use crate::metric::{brute_force_best_order, brute_force_min_rounds, evaluate_m};
use crate::order::Ordering;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub algos: Vec<AlgoKind>,
    pub algo_params: AlgoParams,
    pub method_params: MethodParams,
    /// Mode is forced to async.
    pub engine: EngineConfig,
    pub timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            methods: Method::ALL.to_vec(),
            algos: AlgoKind::ALL.to_vec(),
            algo_params: AlgoParams::default(),
            method_params: MethodParams::default(),
            engine: EngineConfig::default(),
            timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchCell {
    pub changing_sweeps: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub method: String,
    pub m_value: u64,
    pub ratio: f64,
    /// One cell per algorithm, in [`BenchMatrix::algos`] order.
    pub cells: Vec<BenchCell>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skipped {
    pub method: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Correlation {
    pub algo: String,
    /// `None` when fewer than two rows or a constant column.
    pub spearman: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchMatrix {
    pub algos: Vec<String>,
    /// Sorted by `m_value` ascending; ties keep method-list order.
    pub rows: Vec<BenchRow>,
    /// Methods that do not apply to the input (topological order on a cyclic
    /// graph).
    pub skipped: Vec<Skipped>,
    pub correlations: Vec<Correlation>,
}

impl BenchMatrix {
    pub fn row(&self, method: Method) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.method == method.as_str())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let timing = self.rows.iter().any(|r| r.cells.iter().any(|c| c.wall_time.is_some()));
        let mut header = vec!["method".to_string(), "m_value".into(), "ratio".into()];
        for a in &self.algos {
            header.push(format!("{a}_sweeps"));
            header.push(format!("{a}_converged"));
            if timing {
                header.push(format!("{a}_time"));
            }
        }
        writeln!(out, "{}", header.join(","))?;
        for r in &self.rows {
            let mut fields = vec![r.method.clone(), r.m_value.to_string(), format!("{:.6}", r.ratio)];
            for c in &r.cells {
                fields.push(c.changing_sweeps.to_string());
                fields.push(c.converged.to_string());
                if timing {
                    fields.push(format!("{:.6}", c.wall_time.unwrap_or(f64::NAN)));
                }
            }
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (Pearson over average ranks).
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let (rx, ry) = (average_ranks(xs), average_ranks(ys));
    let mean = (n as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (dx, dy) = (rx[i] - mean, ry[i] - mean);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

pub fn run_bench(graph: &Graph, config: &BenchConfig) -> Result<BenchMatrix> {
    let engine = EngineConfig {
        mode: Mode::Async,
        trace: false,
        timing: false,
        ..config.engine.clone()
    };
    engine.validate()?;
    let specs = config
        .algos
        .iter()
        .map(|a| a.build(&config.algo_params))
        .collect::<Result<Vec<_>>>()?;
    for s in &specs {
        s.validate(graph)?;
    }

    let orders: Vec<(Method, Result<Ordering>)> = config
        .methods
        .par_iter()
        .map(|&m| (m, m.order(graph, &config.method_params)))
        .collect();
    let mut skipped = Vec::new();
    let mut ordered = Vec::new();
    for (m, o) in orders {
        match o {
            Ok(o) => ordered.push((m, o)),
            Err(e @ Error::Cyclic { .. }) => skipped.push(Skipped {
                method: m.as_str().into(),
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }

    let cells: Vec<Vec<BenchCell>> = ordered
        .par_iter()
        .map(|(_, order)| {
            specs
                .par_iter()
                .map(|spec| {
                    let start = Instant::now();
                    let r = run_async(graph, order, spec.as_ref(), &engine)?;
                    Ok(BenchCell {
                        changing_sweeps: r.changing_sweeps,
                        converged: r.converged,
                        wall_time: config.timing.then(|| start.elapsed().as_secs_f64()),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(ordered.len());
    for ((m, order), cells) in ordered.iter().zip(cells) {
        let metric = evaluate_m(graph, order)?;
        rows.push(BenchRow {
            method: m.as_str().into(),
            m_value: metric.m_value,
            ratio: metric.ratio,
            cells,
        });
    }
    rows.sort_by_key(|r| r.m_value);

    let ms: Vec<f64> = rows.iter().map(|r| r.m_value as f64).collect();
    let correlations = config
        .algos
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let sweeps: Vec<f64> = rows.iter().map(|r| r.cells[i].changing_sweeps as f64).collect();
            Correlation {
                algo: a.as_str().into(),
                spearman: spearman(&ms, &sweeps),
            }
        })
        .collect();

    Ok(BenchMatrix {
        algos: config.algos.iter().map(|a| a.as_str().to_string()).collect(),
        rows,
        skipped,
        correlations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    /// Maximum positive-edge count.
    MOpt,
    /// Minimum async changing sweeps for one algorithm.
    RoundsOpt,
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m-opt" => Ok(OracleKind::MOpt),
            "rounds-opt" => Ok(OracleKind::RoundsOpt),
            other => Err(Error::InvalidParameter(format!("unknown oracle kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algo: Option<String>,
    /// Original vertex ids.
    pub best_order: Vec<u64>,
    pub best_value: u64,
    pub gograph_order: Vec<u64>,
    pub gograph_value: u64,
    /// `|best - gograph|`; zero when the reordering is optimal.
    pub gap: u64,
}

pub fn run_oracle(
    graph: &Graph,
    kind: OracleKind,
    algo: AlgoKind,
    algo_params: &AlgoParams,
    engine: &EngineConfig,
    params: &MethodParams,
) -> Result<OracleReport> {
    let labels = |o: &Ordering| o.seq().iter().map(|&v| graph.label(v)).collect::<Vec<_>>();
    let ours = gograph_order(graph, &params.gograph)?;
    let (best, best_value, ours_value, algo_name) = match kind {
        OracleKind::MOpt => {
            let (best, value) = brute_force_best_order(graph)?;
            (best, value, evaluate_m(graph, &ours)?.m_value, None)
        }
        OracleKind::RoundsOpt => {
            let engine = EngineConfig {
                mode: Mode::Async,
                trace: false,
                timing: false,
                ..engine.clone()
            };
            let spec = algo.build(algo_params)?;
            spec.validate(graph)?;
            let (best, rounds) = brute_force_min_rounds(graph, spec.as_ref(), &engine)?;
            let ours_rounds = run_async(graph, &ours, spec.as_ref(), &engine)?.changing_sweeps;
            (best, rounds as u64, ours_rounds as u64, Some(algo.as_str().to_string()))
        }
    };
    Ok(OracleReport {
        kind: match kind {
            OracleKind::MOpt => "m-opt".into(),
            OracleKind::RoundsOpt => "rounds-opt".into(),
        },
        algo: algo_name,
        best_order: labels(&best),
        best_value,
        gograph_order: labels(&ours),
        gograph_value: ours_value,
        gap: best_value.abs_diff(ours_value),
    })
}
