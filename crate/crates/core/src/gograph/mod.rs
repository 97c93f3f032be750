//! Divide-and-conquer reordering that maximises the number of positive edges.
//!
//! The pipeline pulls out the highest-degree vertices, partitions the rest
//! into communities, orders every community and the contracted community
//! graph by greedy optimal insertion, concatenates the communities, and
//! finally inserts the hubs and the vertices they left isolated.

mod builder;
mod partition;

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

pub use builder::{Insertion, InsertionEvent, Link, OrderBuilder, Phase};
pub use partition::{
    extract_hubs, hub_count, label_propagation, partition_remaining, HubSplit, PartitionResult, MAX_LP_SWEEPS,
};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metric::evaluate_m;
use crate::order::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GoGraphConfig {
    pub hub_fraction: f64,
    pub max_part_size: usize,
    /// Record and check every insertion.
    pub audit: bool,
}

impl Default for GoGraphConfig {
    fn default() -> Self {
        GoGraphConfig {
            hub_fraction: 0.002,
            max_part_size: 1024,
            audit: false,
        }
    }
}

impl GoGraphConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.hub_fraction) {
            return Err(Error::InvalidParameter(format!(
                "hub fraction must be in [0, 1), got {}",
                self.hub_fraction
            )));
        }
        if self.max_part_size == 0 {
            return Err(Error::InvalidParameter("max part size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Links of `v` for insertion; plain graphs count edge instances, weighted
/// (contracted) graphs use their integer weights.
fn links_of(graph: &Graph, v: usize, use_weights: bool) -> Vec<Link> {
    let weight = |w: f64| if use_weights { w as u64 } else { 1 };
    let mut links = Vec::with_capacity(graph.degree(v));
    links.extend(
        graph
            .out_edges(v)
            .filter(|&(u, _)| u != v)
            .map(|(u, w)| Link::out(u, weight(w))),
    );
    links.extend(
        graph
            .in_edges(v)
            .filter(|&(u, _)| u != v)
            .map(|(u, w)| Link::inc(u, weight(w))),
    );
    links
}

#[derive(Clone, Debug)]
pub struct LocalOrder {
    pub order: Ordering,
    /// Val of every vertex when its ordering finished.
    pub vals: Vec<f64>,
    pub renormalizations: usize,
    pub events: Vec<InsertionEvent>,
}

/// Orders one graph by seeded BFS plus optimal insertion.
///
/// Seeds have minimum in-degree (ties: larger out-minus-in, then lower id).
/// When a vertex is expanded its undiscovered undirected neighbours are
/// queued by out-minus-in descending, then id.
pub fn order_subgraph(graph: &Graph, use_weights: bool, audit: Option<Phase>) -> LocalOrder {
    let n = graph.n();
    let skew = |v: usize| graph.out_degree(v) as i64 - graph.in_degree(v) as i64;
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by_key(|&v| (graph.in_degree(v), -skew(v), v));

    let mut builder = match audit {
        Some(phase) => OrderBuilder::with_audit(n, phase),
        None => OrderBuilder::new(n),
    };
    let mut discovered = vec![false; n];
    let mut queue = VecDeque::new();
    let mut nb = Vec::new();
    for &seed in &seeds {
        if discovered[seed] {
            continue;
        }
        discovered[seed] = true;
        queue.push_back(seed);
        while let Some(v) = queue.pop_front() {
            builder.insert_optimal(v, &links_of(graph, v, use_weights));
            nb.clear();
            nb.extend(
                graph
                    .out_neighbors(v)
                    .iter()
                    .chain(graph.in_neighbors(v))
                    .copied()
                    .filter(|&u| !discovered[u]),
            );
            nb.sort_unstable_by_key(|&u| (-skew(u), u));
            nb.dedup();
            for &u in &nb {
                discovered[u] = true;
                queue.push_back(u);
            }
        }
    }
    let order = builder.finalize().expect("every vertex is visited");
    let vals = (0..n).map(|v| builder.val(v).expect("placed")).collect();
    LocalOrder {
        order,
        vals,
        renormalizations: builder.renormalizations(),
        events: builder.take_events(),
    }
}

/// Contracted graph with one vertex per part.
#[derive(Clone, Debug)]
pub struct SuperGraph {
    /// `w(i, j)` = number of residual edges from part `i` to part `j`.
    pub graph: Graph,
}

impl SuperGraph {
    pub fn total_weight(&self) -> u64 {
        self.graph.edges().map(|(_, _, w)| w as u64).sum()
    }
}

pub fn build_super_graph(partition: &PartitionResult, residual: &Graph) -> SuperGraph {
    let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (u, v, _) in residual.edges() {
        let (a, b) = (partition.assignment[u], partition.assignment[v]);
        if a != b {
            *weights.entry((a, b)).or_default() += 1;
        }
    }
    let edges: Vec<_> = weights.into_iter().map(|((a, b), w)| (a, b, w as f64)).collect();
    SuperGraph {
        graph: Graph::from_weighted_edges(partition.len(), &edges),
    }
}

/// Orders the contracted graph with weighted insertion.
pub fn order_supers(supers: &SuperGraph, audit: bool) -> LocalOrder {
    order_subgraph(&supers.graph, true, audit.then_some(Phase::Super))
}

/// Concatenates the parts in super order, each part keeping its local order.
///
/// Returns `(member, global val)` pairs in final order; vals are consecutive
/// integers so every part occupies a contiguous range.
pub fn flatten_global_vals(
    super_order: &Ordering,
    local_orders: &[Ordering],
    parts: &[Vec<usize>],
) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(parts.iter().map(Vec::len).sum());
    for &p in super_order.seq() {
        for &local in local_orders[p].seq() {
            let val = out.len() as f64;
            out.push((parts[p][local], val));
        }
    }
    out
}

/// Inserts a hub or isolated vertex using its full adjacency in `graph`.
pub fn insert_external(builder: &mut OrderBuilder, graph: &Graph, v: usize) -> Insertion {
    builder.insert_optimal(v, &links_of(graph, v, false))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PhaseCount {
    pub positive: u64,
    pub considered: u64,
}

impl PhaseCount {
    fn add(&mut self, positive: u64, considered: u64) {
        self.positive += positive;
        self.considered += considered;
    }
}

/// Summary of one pipeline run. The positive counts of the three phases add
/// up to the final metric.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub m: usize,
    pub hub_count: usize,
    pub isolated_count: usize,
    pub residual_vertices: usize,
    pub residual_edges: usize,
    pub part_count: usize,
    pub largest_part: usize,
    pub super_edges: usize,
    pub renormalizations: usize,
    pub intra: PhaseCount,
    pub inter: PhaseCount,
    pub external: PhaseCount,
    pub total: PhaseCount,
}

#[derive(Clone, Debug)]
pub struct GoGraphResult {
    pub order: Ordering,
    pub report: PipelineReport,
    /// Empty unless auditing. Subgraph events use part-local ids, super
    /// events part ids, hub and isolated events original ids.
    pub events: Vec<InsertionEvent>,
}

impl GoGraphResult {
    pub fn half_bound_violations(&self) -> usize {
        self.events.iter().filter(|e| !e.satisfies_half_bound()).count()
    }
}

pub fn reorder(graph: &Graph, config: &GoGraphConfig) -> Result<GoGraphResult> {
    config.validate()?;
    let audit = config.audit;
    let split = extract_hubs(graph, config.hub_fraction);
    let residual = &split.residual;
    let partition = partition_remaining(residual, config.max_part_size);

    let locals: Vec<(LocalOrder, PhaseCount)> = partition
        .parts
        .par_iter()
        .map(|members| {
            let (sub, _) = residual.induced_subgraph(members);
            let local = order_subgraph(&sub, false, audit.then_some(Phase::Subgraph));
            let r = evaluate_m(&sub, &local.order).expect("local order matches part");
            let count = PhaseCount {
                positive: r.m_value,
                considered: r.edges_considered,
            };
            (local, count)
        })
        .collect();

    let supers = build_super_graph(&partition, residual);
    let super_order = order_supers(&supers, audit);
    let mut inter = PhaseCount::default();
    for (a, b, w) in supers.graph.edges() {
        let w = w as u64;
        inter.add(
            if super_order.order.position(a) < super_order.order.position(b) {
                w
            } else {
                0
            },
            w,
        );
    }

    let local_orders: Vec<Ordering> = locals.iter().map(|(l, _)| l.order.clone()).collect();
    let flat = flatten_global_vals(&super_order.order, &local_orders, &partition.parts);

    let mut builder = if audit {
        OrderBuilder::with_audit(graph.n(), Phase::Hub)
    } else {
        OrderBuilder::new(graph.n())
    };
    for (rv, val) in flat {
        builder.place(split.residual_map[rv], val);
    }

    let mut external = PhaseCount::default();
    let mut hubs = split.hubs.clone();
    hubs.sort_by_key(|&h| (graph.degree(h), h));
    for h in hubs {
        let ins = insert_external(&mut builder, graph, h);
        external.add(ins.positive, ins.incident);
    }
    builder.set_phase(Phase::Isolated);
    for &v in &split.isolated {
        let ins = insert_external(&mut builder, graph, v);
        external.add(ins.positive, ins.incident);
    }
    let order = builder.finalize()?;

    let mut intra = PhaseCount::default();
    let mut events = Vec::new();
    let mut renormalizations = super_order.renormalizations + builder.renormalizations();
    for (local, count) in locals {
        intra.add(count.positive, count.considered);
        renormalizations += local.renormalizations;
        events.extend(local.events);
    }
    events.extend(super_order.events);
    events.extend(builder.take_events());

    let mut total = intra;
    total.add(
        inter.positive + external.positive,
        inter.considered + external.considered,
    );
    let report = PipelineReport {
        n: graph.n(),
        m: graph.m(),
        hub_count: split.hubs.len(),
        isolated_count: split.isolated.len(),
        residual_vertices: residual.n(),
        residual_edges: residual.m(),
        part_count: partition.len(),
        largest_part: partition.largest(),
        super_edges: supers.graph.m(),
        renormalizations,
        intra,
        inter,
        external,
        total,
    };
    Ok(GoGraphResult { order, report, events })
}

/// [`reorder`] keeping only the order.
pub fn gograph_order(graph: &Graph, config: &GoGraphConfig) -> Result<Ordering> {
    reorder(graph, config).map(|r| r.order)
}
