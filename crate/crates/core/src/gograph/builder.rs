//! Incremental order construction with fractional ranks.
//!
//! Every placed vertex carries a `val`; the current order is the placed set
//! sorted by `(val, tick)` where `tick` is the insertion counter. A new vertex
//! is dropped into the gap between its placed neighbours that maximises the
//! number of positive incident edges. Positions relative to non-neighbours do
//! not affect the metric, so only the `|N_v| + 1` neighbour-delimited gaps are
//! candidates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::Ordering;

/// One adjacency entry of the vertex being inserted.
///
/// `out_weight` counts `v -> neighbor` edges, `in_weight` counts
/// `neighbor -> v` edges. Repeated entries for the same neighbour add up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Link {
    pub neighbor: usize,
    pub out_weight: u64,
    pub in_weight: u64,
}

impl Link {
    pub fn out(neighbor: usize, weight: u64) -> Link {
        Link {
            neighbor,
            out_weight: weight,
            in_weight: 0,
        }
    }

    pub fn inc(neighbor: usize, weight: u64) -> Link {
        Link {
            neighbor,
            out_weight: 0,
            in_weight: weight,
        }
    }
}

/// Result of one optimal insertion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Insertion {
    pub val: f64,
    /// Total weight of edges between the vertex and already-placed vertices.
    pub incident: u64,
    /// Weight of those edges that are positive at the chosen position.
    pub positive: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Subgraph,
    Super,
    Hub,
    Isolated,
}

/// Audit record of one insertion, recounted from the final placement rather
/// than taken from the gap sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionEvent {
    pub phase: Phase,
    pub vertex: usize,
    pub incident: u64,
    pub positive: u64,
}

impl InsertionEvent {
    /// At least half of the incident weight must be positive.
    pub fn satisfies_half_bound(&self) -> bool {
        2 * self.positive >= self.incident
    }
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    val: f64,
    tick: u64,
    vertex: usize,
    out_weight: u64,
    in_weight: u64,
}

#[derive(Clone, Debug)]
pub struct OrderBuilder {
    vals: Vec<f64>,
    ticks: Vec<u64>,
    placed: Vec<usize>,
    next_tick: u64,
    max_val: f64,
    renormalizations: usize,
    audit: Option<(Phase, Vec<InsertionEvent>)>,
}

impl OrderBuilder {
    pub fn new(n: usize) -> OrderBuilder {
        OrderBuilder {
            vals: vec![f64::NAN; n],
            ticks: vec![u64::MAX; n],
            placed: Vec::with_capacity(n),
            next_tick: 0,
            max_val: f64::NEG_INFINITY,
            renormalizations: 0,
            audit: None,
        }
    }

    /// Records an [`InsertionEvent`] for every optimal insertion.
    pub fn with_audit(n: usize, phase: Phase) -> OrderBuilder {
        let mut b = OrderBuilder::new(n);
        b.audit = Some((phase, Vec::new()));
        b
    }

    pub fn set_phase(&mut self, phase: Phase) {
        if let Some((p, _)) = &mut self.audit {
            *p = phase;
        }
    }

    pub fn capacity(&self) -> usize {
        self.vals.len()
    }

    pub fn len(&self) -> usize {
        self.placed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placed.is_empty()
    }

    pub fn is_placed(&self, v: usize) -> bool {
        self.ticks[v] != u64::MAX
    }

    pub fn val(&self, v: usize) -> Option<f64> {
        self.is_placed(v).then(|| self.vals[v])
    }

    pub fn renormalizations(&self) -> usize {
        self.renormalizations
    }

    pub fn events(&self) -> &[InsertionEvent] {
        self.audit.as_ref().map_or(&[], |(_, e)| e.as_slice())
    }

    pub fn take_events(&mut self) -> Vec<InsertionEvent> {
        self.audit.as_mut().map_or_else(Vec::new, |(_, e)| std::mem::take(e))
    }

    fn precedes(&self, a: usize, b: usize) -> bool {
        (self.vals[a], self.ticks[a]) < (self.vals[b], self.ticks[b])
    }

    /// Places `v` at an explicit `val`.
    pub fn place(&mut self, v: usize, val: f64) {
        assert!(!self.is_placed(v), "vertex {v} placed twice");
        assert!(val.is_finite(), "val must be finite");
        self.vals[v] = val;
        self.ticks[v] = self.next_tick;
        self.next_tick += 1;
        self.placed.push(v);
        if val > self.max_val {
            self.max_val = val;
        }
    }

    /// Placed vertices in current order.
    pub fn current_order(&self) -> Vec<usize> {
        let mut seq = self.placed.clone();
        seq.sort_by(|&a, &b| {
            self.vals[a]
                .total_cmp(&self.vals[b])
                .then(self.ticks[a].cmp(&self.ticks[b]))
        });
        seq
    }

    /// Re-ranks all placed vertices to consecutive integers, keeping order.
    pub fn renormalize(&mut self) {
        let seq = self.current_order();
        for (rank, &v) in seq.iter().enumerate() {
            self.vals[v] = rank as f64;
        }
        self.max_val = seq.len() as f64 - 1.0;
        self.renormalizations += 1;
    }

    fn placed_neighbors(&self, v: usize, links: &[Link]) -> Vec<Candidate> {
        let mut nb: Vec<Candidate> = links
            .iter()
            .filter(|l| l.neighbor != v && self.is_placed(l.neighbor))
            .map(|l| Candidate {
                val: self.vals[l.neighbor],
                tick: self.ticks[l.neighbor],
                vertex: l.neighbor,
                out_weight: l.out_weight,
                in_weight: l.in_weight,
            })
            .collect();
        nb.sort_by(|a, b| a.val.total_cmp(&b.val).then(a.tick.cmp(&b.tick)));
        // fold repeated entries of one neighbour into a single crossing
        nb.dedup_by(|later, kept| {
            if later.vertex == kept.vertex {
                kept.out_weight += later.out_weight;
                kept.in_weight += later.in_weight;
                true
            } else {
                false
            }
        });
        nb
    }

    /// Chooses the val that maximises positive incident edges for `v`
    /// without placing it.
    ///
    /// Sweeping from the head, `pe` starts at the outgoing weight to placed
    /// neighbours; passing an out-neighbour subtracts its weight and passing
    /// an in-neighbour adds it. The earliest gap with the maximum wins.
    pub fn get_opt_val(&mut self, v: usize, links: &[Link]) -> Insertion {
        let nb = self.placed_neighbors(v, links);
        let out_total: u64 = nb.iter().map(|c| c.out_weight).sum();
        let in_total: u64 = nb.iter().map(|c| c.in_weight).sum();

        let mut pe = out_total as i64;
        let mut best = pe;
        let mut gap = 0;
        for (i, c) in nb.iter().enumerate() {
            pe += c.in_weight as i64 - c.out_weight as i64;
            if pe > best {
                best = pe;
                gap = i + 1;
            }
        }

        let val = if nb.is_empty() {
            if self.is_empty() {
                0.0
            } else {
                self.max_val + 1.0
            }
        } else if gap == 0 {
            nb[0].val - 1.0
        } else if gap == nb.len() {
            nb[gap - 1].val + 1.0
        } else {
            let (lo, hi) = (nb[gap - 1].val, nb[gap].val);
            let mid = (lo + hi) / 2.0;
            if lo < mid && mid < hi {
                mid
            } else {
                // gap exhausted (or equal vals): re-rank and retry
                self.renormalize();
                return self.get_opt_val(v, links);
            }
        };
        Insertion {
            val,
            incident: out_total + in_total,
            positive: best as u64,
        }
    }

    /// [`get_opt_val`](Self::get_opt_val) followed by placement.
    pub fn insert_optimal(&mut self, v: usize, links: &[Link]) -> Insertion {
        let ins = self.get_opt_val(v, links);
        self.place(v, ins.val);
        if self.audit.is_some() {
            let event = self.recount(v, links);
            debug_assert_eq!(event.positive, ins.positive, "sweep disagrees with placement for {v}");
            debug_assert!(event.satisfies_half_bound(), "half bound violated at {v}: {event:?}");
            if let Some((_, events)) = &mut self.audit {
                events.push(event);
            }
        }
        ins
    }

    fn recount(&self, v: usize, links: &[Link]) -> InsertionEvent {
        let (mut incident, mut positive) = (0, 0);
        for l in links {
            if l.neighbor == v || !self.is_placed(l.neighbor) {
                continue;
            }
            incident += l.out_weight + l.in_weight;
            if self.precedes(v, l.neighbor) {
                positive += l.out_weight;
            } else {
                positive += l.in_weight;
            }
        }
        InsertionEvent {
            phase: self.audit.as_ref().map_or(Phase::Subgraph, |(p, _)| *p),
            vertex: v,
            incident,
            positive,
        }
    }

    /// Sorts by `(val, tick)` into an [`Ordering`]; all vertices must be placed.
    pub fn finalize(&self) -> Result<Ordering> {
        if self.placed.len() != self.vals.len() {
            return Err(Error::InvalidOrder(format!(
                "{} of {} vertices placed",
                self.placed.len(),
                self.vals.len()
            )));
        }
        Ordering::from_seq(self.current_order())
    }
}
