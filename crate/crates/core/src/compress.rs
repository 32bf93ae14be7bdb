//! A bits-per-link cost model for adjacency lists: gap coding plus copying
//! from one of the previous `window` rows, everything charged in Elias γ.
//!
//! No bitstream is produced; the model only counts bits. For node `i` with
//! sorted successors `S`:
//!
//! * outdegree: γ(|S| + 1);
//! * then, if `S` is non-empty, the cheaper of
//!   * *absolute*: selector γ(1), the first successor as a signed gap from `i`
//!     (zig-zag: 2(s−i) if s ≥ i, else 2(i−s)−1, charged γ(ν+1)), and each
//!     following successor as γ(gap);
//!   * *reference* to row `j = i − r`, 1 ≤ r ≤ window, `S_j` non-empty:
//!     selector γ(r + 1), one mask bit per element of `S_j`, γ(e + 1) for the
//!     number `e` of extras `S \ S_j`, and the extras coded as an absolute list.
//!
//! Absolute values are not comparable with production codecs (which use ζ
//! codes, intervals and reference chains); orderings and trends are.

use serde::{Deserialize, Serialize};

use crate::graph::{CsrGraph, NodeId};
use crate::grayorder::{apply_permutation, gray_permutation};
use crate::par;
use crate::{Error, Result};

pub const DEFAULT_WINDOW: usize = 7;
pub const MAX_WINDOW: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressionParams {
    pub window: usize,
}

impl Default for CompressionParams {
    fn default() -> Self {
        CompressionParams {
            window: DEFAULT_WINDOW,
        }
    }
}

impl CompressionParams {
    pub fn with_window(window: usize) -> Result<Self> {
        if window > MAX_WINDOW {
            return Err(Error::contract(format!("window {window} exceeds {MAX_WINDOW}")));
        }
        Ok(CompressionParams { window })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionEstimate {
    pub total_bits: u64,
    pub num_arcs: u64,
    pub bits_per_link: f64,
    pub per_node_bits: Option<Vec<u64>>,
}

/// Length of the Elias γ code of `x ≥ 1`: 2⌊log₂x⌋ + 1.
#[inline]
pub fn gamma_len(x: u64) -> u64 {
    debug_assert!(x >= 1);
    2 * (63 - x.leading_zeros() as u64) + 1
}

#[inline]
fn first_gap_len(node: u64, first: u64) -> u64 {
    let nu = if first >= node {
        2 * (first - node)
    } else {
        2 * (node - first) - 1
    };
    gamma_len(nu + 1)
}

fn absolute_len(node: u64, list: &[NodeId]) -> u64 {
    let Some((&first, rest)) = list.split_first() else {
        return 0;
    };
    let mut bits = first_gap_len(node, first as u64);
    let mut prev = first;
    for &s in rest {
        bits += gamma_len((s - prev) as u64);
        prev = s;
    }
    bits
}

/// Cost of coding `succ` by reference to `reference`, excluding outdegree.
fn reference_len(node: u64, distance: u64, succ: &[NodeId], reference: &[NodeId]) -> u64 {
    let mut extras = 0u64;
    let mut extra_bits = 0u64;
    let mut prev: Option<NodeId> = None;
    let mut k = 0;
    for &s in succ {
        while k < reference.len() && reference[k] < s {
            k += 1;
        }
        if k < reference.len() && reference[k] == s {
            continue;
        }
        extras += 1;
        extra_bits += match prev {
            None => first_gap_len(node, s as u64),
            Some(p) => gamma_len((s - p) as u64),
        };
        prev = Some(s);
    }
    gamma_len(distance + 1) + reference.len() as u64 + gamma_len(extras + 1) + extra_bits
}

/// Model bits spent on node `i`.
pub fn node_bits(g: &CsrGraph, node: usize, window: usize) -> u64 {
    let succ = g.successors(node);
    let degree_bits = gamma_len(succ.len() as u64 + 1);
    if succ.is_empty() {
        return degree_bits;
    }
    let i = node as u64;
    let mut best = gamma_len(1) + absolute_len(i, succ);
    for j in node.saturating_sub(window)..node {
        let reference = g.successors(j);
        if reference.is_empty() {
            continue;
        }
        best = best.min(reference_len(i, (node - j) as u64, succ, reference));
    }
    degree_bits + best
}

fn estimate(g: &CsrGraph, params: CompressionParams, breakdown: bool) -> Result<CompressionEstimate> {
    if params.window > MAX_WINDOW {
        return Err(Error::contract(format!("window {} exceeds {MAX_WINDOW}", params.window)));
    }
    let num_arcs = g.num_arcs();
    if num_arcs == 0 {
        return Err(Error::UndefinedMeasure("bits per link of a graph without arcs".into()));
    }
    let n = g.num_nodes();
    let (total_bits, per_node_bits) = if breakdown {
        let mut per = vec![0u64; n];
        par::fill(&mut per, |u| node_bits(g, u, params.window));
        (per.iter().sum(), Some(per))
    } else {
        let partial = par::map_chunks(n, |r| r.map(|u| node_bits(g, u, params.window)).sum::<u64>());
        (partial.into_iter().sum(), None)
    };
    Ok(CompressionEstimate {
        total_bits,
        num_arcs,
        bits_per_link: total_bits as f64 / num_arcs as f64,
        per_node_bits,
    })
}

pub fn bits_per_link(g: &CsrGraph, params: CompressionParams) -> Result<CompressionEstimate> {
    estimate(g, params, false)
}

pub fn bits_per_link_with_breakdown(g: &CsrGraph, params: CompressionParams) -> Result<CompressionEstimate> {
    estimate(g, params, true)
}

/// Bits per link in the natural order and after Gray reordering.
pub fn compare_orderings(g: &CsrGraph, params: CompressionParams) -> Result<(f64, f64)> {
    let natural = bits_per_link(g, params)?.bits_per_link;
    let gray = apply_permutation(g, &gray_permutation(g))?;
    Ok((natural, bits_per_link(&gray, params)?.bits_per_link))
}
