//! Reordering nodes by the reflected Gray code of their adjacency rows.
//!
//! Each row is read as a bit string with column 0 as the most significant
//! bit, and rows are sorted by their rank in the binary reflected Gray code.
//! Similar rows end up close together without any external labels.

use std::cmp::Ordering;
use std::io::{BufRead, BufWriter, Write};

use crate::graph::{CsrGraph, NodeId};
use crate::par;
use crate::{Error, Result};

/// Compares two sorted successor lists by reflected Gray rank.
///
/// Scans both lists in merged order. At the first column `c` set in exactly
/// one row, with `p` shared ones before it, the row without `c` comes first
/// when `p` is even and the row with `c` comes first when `p` is odd.
pub fn gray_compare(a: &[NodeId], b: &[NodeId]) -> Ordering {
    debug_assert!(a.windows(2).all(|w| w[0] < w[1]), "row is not strictly ascending");
    debug_assert!(b.windows(2).all(|w| w[0] < w[1]), "row is not strictly ascending");
    let (mut i, mut j) = (0, 0);
    let mut odd = false;
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(&x), Some(&y)) if x == y => {
                odd = !odd;
                i += 1;
                j += 1;
            }
            // a holds the 1 at the first differing column
            (Some(&x), Some(&y)) if x < y => return if odd { Ordering::Less } else { Ordering::Greater },
            (Some(_), None) => return if odd { Ordering::Less } else { Ordering::Greater },
            // b holds it
            _ => return if odd { Ordering::Greater } else { Ordering::Less },
        }
    }
}

/// A relabeling of nodes: `forward[old] = new`, `backward[new] = old`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodePermutation {
    forward: Vec<NodeId>,
    backward: Vec<NodeId>,
}

impl NodePermutation {
    pub fn identity(n: usize) -> Self {
        let ids: Vec<NodeId> = (0..n as NodeId).collect();
        NodePermutation {
            forward: ids.clone(),
            backward: ids,
        }
    }

    /// Builds from the new-to-old map, checking it is a bijection.
    pub fn from_backward(backward: Vec<NodeId>) -> Result<Self> {
        let forward = invert(&backward)?;
        Ok(NodePermutation { forward, backward })
    }

    pub fn from_forward(forward: Vec<NodeId>) -> Result<Self> {
        let backward = invert(&forward)?;
        Ok(NodePermutation { forward, backward })
    }

    pub fn forward(&self) -> &[NodeId] {
        &self.forward
    }

    pub fn backward(&self) -> &[NodeId] {
        &self.backward
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn inverse(&self) -> NodePermutation {
        NodePermutation {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// One decimal per line; line `i` holds `forward[i]`.
    pub fn write<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = BufWriter::new(writer);
        for f in &self.forward {
            writeln!(out, "{f}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut forward = Vec::new();
        for (k, line) in reader.lines().enumerate() {
            let line = line?;
            let id = line
                .trim()
                .parse::<NodeId>()
                .map_err(|_| Error::parse(k + 1, format!("'{line}' is not a node id")))?;
            forward.push(id);
        }
        Self::from_forward(forward)
    }
}

fn invert(map: &[NodeId]) -> Result<Vec<NodeId>> {
    let n = map.len();
    let mut inv = vec![NodeId::MAX; n];
    for (i, &m) in map.iter().enumerate() {
        let m = m as usize;
        if m >= n || inv[m] != NodeId::MAX {
            return Err(Error::contract(format!("not a permutation of 0..{n}: entry {i} = {m}")));
        }
        inv[m] = i as NodeId;
    }
    Ok(inv)
}

/// Stable sort of node ids by [`gray_compare`] on their successor rows.
pub fn gray_permutation(g: &CsrGraph) -> NodePermutation {
    let mut order: Vec<NodeId> = (0..g.num_nodes() as NodeId).collect();
    par::stable_sort_by(&mut order, |&a, &b| {
        gray_compare(g.successors(a as usize), g.successors(b as usize))
    });
    NodePermutation::from_backward(order).expect("sorted ids form a permutation")
}

/// Relabels `g`: arc `u → v` becomes `forward[u] → forward[v]`.
pub fn apply_permutation(g: &CsrGraph, p: &NodePermutation) -> Result<CsrGraph> {
    let n = g.num_nodes();
    if p.len() != n {
        return Err(Error::contract(format!(
            "permutation has {} entries, graph has {n} nodes",
            p.len()
        )));
    }
    let mut offsets = vec![0u64; n + 1];
    for new in 0..n {
        offsets[new + 1] = offsets[new] + g.outdegree(p.backward[new] as usize) as u64;
    }
    let mut successors = vec![0 as NodeId; g.num_arcs() as usize];
    let mut unit = vec![(); n];
    crate::graph::for_each_row_mut(&offsets, &mut successors, &mut unit, |new, row, _| {
        let old = p.backward[new] as usize;
        for (slot, &v) in row.iter_mut().zip(g.successors(old)) {
            *slot = p.forward[v as usize];
        }
        row.sort_unstable();
    });
    Ok(CsrGraph::from_parts_unchecked(offsets, successors))
}
