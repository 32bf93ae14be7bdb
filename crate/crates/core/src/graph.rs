//! Immutable compressed sparse-row directed graphs.

use crate::par;
use crate::{Error, Result};

/// Dense 0-based node identifier.
pub type NodeId = u32;

/// Largest node count representable with [`NodeId`] ids.
pub const MAX_NODES: usize = NodeId::MAX as usize + 1;

/// A stream of arcs, as produced by the parsers, before any normalization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub edges: Vec<(NodeId, NodeId)>,
    /// Node count fixed by the source (file header or matrix dimension).
    pub declared_nodes: Option<usize>,
}

impl EdgeList {
    pub fn new(edges: Vec<(NodeId, NodeId)>, declared_nodes: Option<usize>) -> Self {
        EdgeList {
            edges,
            declared_nodes,
        }
    }

    /// Swaps source and target of every arc.
    pub fn reversed(mut self) -> Self {
        for e in &mut self.edges {
            *e = (e.1, e.0);
        }
        self
    }
}

/// Directed 0/1 adjacency pattern in CSR layout.
///
/// Rows are sorted strictly ascending, so there are no parallel arcs; self-loops
/// are kept. Arc offsets are 64-bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrGraph {
    offsets: Vec<u64>,
    successors: Vec<NodeId>,
}

impl CsrGraph {
    /// Graph with `num_nodes` nodes and no arcs.
    pub fn empty(num_nodes: usize) -> Self {
        CsrGraph {
            offsets: vec![0; num_nodes + 1],
            successors: Vec::new(),
        }
    }

    /// Builds a graph from already-normalized CSR arrays, checking every invariant.
    pub fn from_parts(offsets: Vec<u64>, successors: Vec<NodeId>) -> Result<Self> {
        let g = CsrGraph {
            offsets,
            successors,
        };
        g.check_invariants()?;
        Ok(g)
    }

    /// Collapses duplicate arcs and sorts rows. The node count is the declared
    /// one when present, otherwise one more than the largest id seen.
    pub fn from_edges(list: &EdgeList) -> Result<Self> {
        let num_nodes = match list.declared_nodes {
            Some(declared) => {
                if declared > MAX_NODES {
                    return Err(Error::contract(format!(
                        "declared node count {declared} exceeds the 32-bit id space"
                    )));
                }
                if let Some((index, &(s, t))) = list
                    .edges
                    .iter()
                    .enumerate()
                    .find(|(_, &(s, t))| s as usize >= declared || t as usize >= declared)
                {
                    return Err(Error::MalformedEdge {
                        index,
                        source_node: s as u64,
                        target: t as u64,
                        declared: declared as u64,
                    });
                }
                declared
            }
            None => list
                .edges
                .iter()
                .map(|&(s, t)| s.max(t) as usize + 1)
                .max()
                .unwrap_or(0),
        };

        let mut offsets = vec![0u64; num_nodes + 1];
        for &(s, _) in &list.edges {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..num_nodes {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets[..num_nodes].to_vec();
        let mut successors = vec![0 as NodeId; list.edges.len()];
        for &(s, t) in &list.edges {
            let slot = &mut cursor[s as usize];
            successors[*slot as usize] = t;
            *slot += 1;
        }
        drop(cursor);
        Ok(Self::normalize_rows(offsets, successors))
    }

    pub(crate) fn from_parts_unchecked(offsets: Vec<u64>, successors: Vec<NodeId>) -> Self {
        debug_assert!(CsrGraph { offsets: offsets.clone(), successors: successors.clone() }
            .check_invariants()
            .is_ok());
        CsrGraph {
            offsets,
            successors,
        }
    }

    /// Sorts and deduplicates every row of raw CSR arrays, then compacts them.
    pub(crate) fn normalize_rows(mut offsets: Vec<u64>, mut successors: Vec<NodeId>) -> Self {
        let num_nodes = offsets.len() - 1;
        let mut lengths = vec![0u64; num_nodes];
        for_each_row_mut(&offsets, &mut successors, &mut lengths, |_, row, len| {
            row.sort_unstable();
            let mut kept = 0;
            for j in 0..row.len() {
                if kept == 0 || row[j] != row[kept - 1] {
                    row[kept] = row[j];
                    kept += 1;
                }
            }
            *len = kept as u64;
        });

        let mut write = 0usize;
        for i in 0..num_nodes {
            let start = offsets[i] as usize;
            let len = lengths[i] as usize;
            successors.copy_within(start..start + len, write);
            offsets[i] = write as u64;
            write += len;
        }
        offsets[num_nodes] = write as u64;
        successors.truncate(write);
        successors.shrink_to_fit();
        CsrGraph {
            offsets,
            successors,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_arcs(&self) -> u64 {
        self.successors.len() as u64
    }

    #[inline]
    pub fn successors(&self, node: usize) -> &[NodeId] {
        &self.successors[self.offsets[node] as usize..self.offsets[node + 1] as usize]
    }

    #[inline]
    pub fn outdegree(&self, node: usize) -> usize {
        (self.offsets[node + 1] - self.offsets[node]) as usize
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn successor_array(&self) -> &[NodeId] {
        &self.successors
    }

    /// All arcs in row-major order.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.num_nodes())
            .flat_map(move |u| self.successors(u).iter().map(move |&v| (u as NodeId, v)))
    }

    pub fn to_edge_list(&self) -> EdgeList {
        EdgeList::new(self.arcs().collect(), Some(self.num_nodes()))
    }

    /// The graph with every arc reversed. Rows come out sorted because sources
    /// are scattered in increasing order.
    pub fn transpose(&self) -> CsrGraph {
        let n = self.num_nodes();
        let mut offsets = vec![0u64; n + 1];
        for &v in &self.successors {
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets[..n].to_vec();
        let mut successors = vec![0 as NodeId; self.successors.len()];
        for u in 0..n {
            for &v in self.successors(u) {
                let slot = &mut cursor[v as usize];
                successors[*slot as usize] = u as NodeId;
                *slot += 1;
            }
        }
        CsrGraph {
            offsets,
            successors,
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        let n = self.offsets.len().checked_sub(1).ok_or_else(|| {
            Error::contract("offsets must have num_nodes + 1 entries")
        })?;
        if self.offsets[0] != 0 {
            return Err(Error::contract("offsets[0] must be 0"));
        }
        if self.offsets[n] != self.successors.len() as u64 {
            return Err(Error::contract("offsets[num_nodes] must equal the arc count"));
        }
        for u in 0..n {
            if self.offsets[u] > self.offsets[u + 1] {
                return Err(Error::contract(format!("offsets decrease at node {u}")));
            }
            let row = self.successors(u);
            if row.iter().any(|&v| v as usize >= n) {
                return Err(Error::contract(format!("row {u} has an out-of-range successor")));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::contract(format!("row {u} is not strictly ascending")));
            }
        }
        Ok(())
    }
}

/// Calls `f(row_index, row, &mut state[row_index])` on every row of a CSR
/// arc array, processing chunks of rows in parallel.
pub(crate) fn for_each_row_mut<S, F>(offsets: &[u64], arcs: &mut [NodeId], state: &mut [S], f: F)
where
    S: Send,
    F: Fn(usize, &mut [NodeId], &mut S) + Sync,
{
    let num_nodes = offsets.len() - 1;
    let mut pieces: Vec<(usize, &mut [NodeId], &mut [S])> = Vec::new();
    let mut rest_arcs = arcs;
    let mut rest_state = state;
    let mut row = 0;
    while row < num_nodes {
        let end = (row + par::CHUNK).min(num_nodes);
        let span = (offsets[end] - offsets[row]) as usize;
        let (a, tail) = std::mem::take(&mut rest_arcs).split_at_mut(span);
        let (st, stail) = std::mem::take(&mut rest_state).split_at_mut(end - row);
        pieces.push((row, a, st));
        rest_arcs = tail;
        rest_state = stail;
        row = end;
    }
    par::for_each_mut(&mut pieces, |(first, a, st)| {
        let base = offsets[*first];
        for (k, s) in st.iter_mut().enumerate() {
            let lo = (offsets[*first + k] - base) as usize;
            let hi = (offsets[*first + k + 1] - base) as usize;
            f(*first + k, &mut a[lo..hi], s);
        }
    });
}

/// Convenience wrapper around [`CsrGraph::from_edges`].
pub fn build_from_edges(list: &EdgeList) -> Result<CsrGraph> {
    CsrGraph::from_edges(list)
}
