//! Processing orders: a permutation of the vertices with its inverse.

use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `seq[i]` is the vertex processed at slot `i`; `pos[v]` is the slot of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordering {
    seq: Vec<usize>,
    pos: Vec<usize>,
}

impl Ordering {
    /// Validates that `seq` is a permutation of `0..seq.len()`.
    pub fn from_seq(seq: Vec<usize>) -> Result<Ordering> {
        let n = seq.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in seq.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidOrder(format!("vertex {v} out of range 0..{n}")));
            }
            if pos[v] != usize::MAX {
                return Err(Error::InvalidOrder(format!("vertex {v} appears twice")));
            }
            pos[v] = i;
        }
        Ok(Ordering { seq, pos })
    }

    pub fn identity(n: usize) -> Ordering {
        Ordering {
            seq: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    pub fn pos(&self) -> &[usize] {
        &self.pos
    }

    /// Ordinal number of `v`.
    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn vertex_at(&self, slot: usize) -> usize {
        self.seq[slot]
    }

    pub fn reverse(&self) -> Ordering {
        let n = self.seq.len();
        let seq: Vec<usize> = self.seq.iter().rev().copied().collect();
        let pos = self.pos.iter().map(|&p| n - 1 - p).collect();
        Ordering { seq, pos }
    }

    pub fn into_seq(self) -> Vec<usize> {
        self.seq
    }

    /// Writes one original vertex id per line, slot order.
    pub fn write_to<W: Write>(&self, graph: &Graph, mut out: W) -> io::Result<()> {
        for &v in &self.seq {
            writeln!(out, "{}", graph.label(v))?;
        }
        Ok(())
    }

    /// Reads an order file written by [`Ordering::write_to`], mapping original
    /// ids back to the graph's dense ids.
    pub fn read_from<R: BufRead>(graph: &Graph, reader: R) -> Result<Ordering> {
        let index = graph.label_index();
        let mut seq = Vec::with_capacity(graph.n());
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let id: u64 = t.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("invalid vertex id `{t}`"),
            })?;
            let v = *index.get(&id).ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("vertex {id} is not in the graph"),
            })?;
            seq.push(v);
        }
        if seq.len() != graph.n() {
            return Err(Error::SizeMismatch {
                order: seq.len(),
                graph: graph.n(),
            });
        }
        Ordering::from_seq(seq)
    }
}
