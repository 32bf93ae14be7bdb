//! Elementary statistics: average outdegree, dangling nodes, degree histogram.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::CsrGraph;
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub num_nodes: u64,
    pub num_arcs: u64,
    /// `num_arcs / num_nodes`, 0 for the empty graph.
    pub avg_outdegree: f64,
    /// Nodes with outdegree exactly 0. A node whose only arc is a self-loop is
    /// not dangling.
    pub dangling_count: u64,
    /// `dangling_count / num_nodes` as a fraction (not a percentage).
    pub dangling_fraction: f64,
    pub outdegree_histogram: BTreeMap<u64, u64>,
}

impl StatsSummary {
    pub fn dangling_percent(&self) -> f64 {
        100.0 * self.dangling_fraction
    }
}

pub fn compute_stats(g: &CsrGraph) -> StatsSummary {
    let n = g.num_nodes();
    let partial = par::map_chunks(n, |range| {
        let mut hist = BTreeMap::new();
        for u in range {
            *hist.entry(g.outdegree(u) as u64).or_insert(0u64) += 1;
        }
        hist
    });
    let mut outdegree_histogram = BTreeMap::new();
    for hist in partial {
        for (d, c) in hist {
            *outdegree_histogram.entry(d).or_insert(0) += c;
        }
    }
    let dangling_count = outdegree_histogram.get(&0).copied().unwrap_or(0);
    let num_arcs = g.num_arcs();
    let (avg_outdegree, dangling_fraction) = if n == 0 {
        (0.0, 0.0)
    } else {
        (num_arcs as f64 / n as f64, dangling_count as f64 / n as f64)
    };
    StatsSummary {
        num_nodes: n as u64,
        num_arcs,
        avg_outdegree,
        dangling_count,
        dangling_fraction,
        outdegree_histogram,
    }
}
