//! Strongly connected components and the terminal/bucket/core classification.
//!
//! Component ids follow the order in which Tarjan's algorithm completes
//! components, which is a reverse topological order of the condensation: for
//! every arc `u → v` crossing components, `component_of[v] < component_of[u]`.
//! Sinks of the component DAG therefore get the smallest ids.
//!
//! A *terminal* component has no arc leaving it. A *bucket* is a terminal
//! component that contains at least one arc, i.e. anything but a dangling
//! node on its own. A single node with a self-loop is a bucket.

use std::sync::atomic::{AtomicBool, Ordering};

use serde::{Deserialize, Serialize};

use crate::graph::{CsrGraph, EdgeList, NodeId};
use crate::par;
use crate::{Error, Result};

const UNVISITED: u32 = u32::MAX;

/// Output of the SCC pass alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    pub component_of: Vec<u32>,
    pub component_sizes: Vec<u64>,
}

impl SccPartition {
    pub fn num_components(&self) -> usize {
        self.component_sizes.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentInfo {
    pub component_of: Vec<u32>,
    pub component_sizes: Vec<u64>,
    pub terminal: Vec<bool>,
    pub bucket: Vec<bool>,
    /// Largest component, lowest id on ties; `None` only for the empty graph.
    pub core_component: Option<u32>,
    pub bucket_node_fraction: f64,
}

/// Compact figures for rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub scc_count: u64,
    pub terminal_count: u64,
    pub bucket_count: u64,
    pub bucket_nodes: u64,
    pub bucket_fraction: f64,
    pub core_size: u64,
    pub core_is_terminal: bool,
}

impl ComponentInfo {
    pub fn num_components(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn is_bucket_node(&self, node: usize) -> bool {
        self.bucket[self.component_of[node] as usize]
    }

    pub fn core_size(&self) -> u64 {
        self.core_component
            .map_or(0, |c| self.component_sizes[c as usize])
    }

    pub fn summary(&self) -> ComponentSummary {
        let bucket_nodes = self
            .component_sizes
            .iter()
            .zip(&self.bucket)
            .filter(|(_, &b)| b)
            .map(|(&s, _)| s)
            .sum();
        ComponentSummary {
            scc_count: self.num_components() as u64,
            terminal_count: self.terminal.iter().filter(|&&t| t).count() as u64,
            bucket_count: self.bucket.iter().filter(|&&b| b).count() as u64,
            bucket_nodes,
            bucket_fraction: self.bucket_node_fraction,
            core_size: self.core_size(),
            core_is_terminal: self
                .core_component
                .is_some_and(|c| self.terminal[c as usize]),
        }
    }
}

/// Iterative Tarjan. Uses an explicit DFS stack, so path-shaped graphs with
/// tens of millions of nodes are fine.
pub fn strongly_connected_components(g: &CsrGraph) -> SccPartition {
    let n = g.num_nodes();
    let offsets = g.offsets();
    let succ = g.successor_array();

    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut component_of = vec![UNVISITED; n];
    let mut component_sizes = Vec::new();
    let mut stack: Vec<NodeId> = Vec::new();
    // (node, position of the next arc to explore)
    let mut dfs: Vec<(NodeId, u64)> = Vec::new();
    let mut counter = 0u32;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root as NodeId);
        dfs.push((root as NodeId, offsets[root]));

        while let Some(top) = dfs.last_mut() {
            let v = top.0 as usize;
            if top.1 < offsets[v + 1] {
                let w = succ[top.1 as usize] as usize;
                top.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w as NodeId);
                    dfs.push((w as NodeId, offsets[w]));
                } else if component_of[w] == UNVISITED {
                    // w is still on the Tarjan stack
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            dfs.pop();
            if low[v] == index[v] {
                let id = component_sizes.len() as u32;
                let mut size = 0u64;
                loop {
                    let w = stack.pop().expect("tarjan stack underflow") as usize;
                    component_of[w] = id;
                    size += 1;
                    if w == v {
                        break;
                    }
                }
                component_sizes.push(size);
            }
            if let Some(parent) = dfs.last() {
                let p = parent.0 as usize;
                low[p] = low[p].min(low[v]);
            }
        }
    }
    SccPartition {
        component_of,
        component_sizes,
    }
}

/// Marks terminal and bucket components and picks the core component.
pub fn condense_and_classify(g: &CsrGraph, scc: &SccPartition) -> Result<ComponentInfo> {
    let n = g.num_nodes();
    if scc.component_of.len() != n {
        return Err(Error::contract(format!(
            "component assignment covers {} nodes, graph has {n}",
            scc.component_of.len()
        )));
    }
    let total: u64 = scc.component_sizes.iter().sum();
    if total != n as u64 {
        return Err(Error::contract(format!(
            "component sizes sum to {total}, graph has {n} nodes"
        )));
    }
    let k = scc.num_components();
    let leaves: Vec<AtomicBool> = (0..k).map(|_| AtomicBool::new(false)).collect();
    let has_arc: Vec<AtomicBool> = (0..k).map(|_| AtomicBool::new(false)).collect();
    par::map_chunks(n, |range| {
        for u in range {
            let cu = scc.component_of[u] as usize;
            for &v in g.successors(u) {
                if scc.component_of[v as usize] as usize == cu {
                    has_arc[cu].store(true, Ordering::Relaxed);
                } else {
                    leaves[cu].store(true, Ordering::Relaxed);
                }
            }
        }
    });
    let terminal: Vec<bool> = leaves.iter().map(|l| !l.load(Ordering::Relaxed)).collect();
    let bucket: Vec<bool> = terminal
        .iter()
        .zip(&has_arc)
        .map(|(&t, a)| t && a.load(Ordering::Relaxed))
        .collect();

    let mut core_component = None;
    let mut best = 0u64;
    for (c, &size) in scc.component_sizes.iter().enumerate() {
        if size > best {
            best = size;
            core_component = Some(c as u32);
        }
    }
    let bucket_nodes: u64 = scc
        .component_sizes
        .iter()
        .zip(&bucket)
        .filter(|(_, &b)| b)
        .map(|(&s, _)| s)
        .sum();
    let bucket_node_fraction = if n == 0 {
        0.0
    } else {
        bucket_nodes as f64 / n as f64
    };
    Ok(ComponentInfo {
        component_of: scc.component_of.clone(),
        component_sizes: scc.component_sizes.clone(),
        terminal,
        bucket,
        core_component,
        bucket_node_fraction,
    })
}

/// SCCs plus classification in one call.
pub fn analyze(g: &CsrGraph) -> ComponentInfo {
    let scc = strongly_connected_components(g);
    condense_and_classify(g, &scc).expect("partition computed from the same graph")
}

/// The component DAG: one node per component, an arc between two components
/// iff some original arc crosses them.
pub fn condensation(g: &CsrGraph, scc: &SccPartition) -> Result<CsrGraph> {
    if scc.component_of.len() != g.num_nodes() {
        return Err(Error::contract("partition does not match graph"));
    }
    let edges = g
        .arcs()
        .map(|(u, v)| (scc.component_of[u as usize], scc.component_of[v as usize]))
        .filter(|(a, b)| a != b)
        .collect();
    CsrGraph::from_edges(&EdgeList::new(edges, Some(scc.num_components())))
}
