//! Seeded synthetic graphs.
//!
//! All generators draw from `ChaCha8Rng::seed_from_u64(seed)` (rand_chacha
//! 0.9) and consume the stream in a fixed order, so a seed determines the
//! graph on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::graph::{CsrGraph, NodeId, MAX_NODES};
use crate::{Error, Result};

/// Half-width of the window successors are drawn from in the copy model.
pub const LOCALITY: usize = 1000;
/// Probability that a copied successor is replaced by a uniform node.
pub const MUTATION_PROB: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CopyModelParams {
    pub nodes: usize,
    /// Mean outdegree before dangling/bucket injection (minimum outdegree is 1).
    pub out_mean: f64,
    pub copy_prob: f64,
    pub dangling_target: f64,
    pub bucket_target: f64,
    pub seed: u64,
}

impl CopyModelParams {
    pub fn validate(&self) -> Result<()> {
        if self.nodes > MAX_NODES {
            return Err(Error::contract("node count exceeds the 32-bit id space"));
        }
        if !(self.out_mean > 0.0 && self.out_mean.is_finite()) {
            return Err(Error::contract("out_mean must be positive"));
        }
        for (name, p) in [
            ("copy_prob", self.copy_prob),
            ("dangling_target", self.dangling_target),
            ("bucket_target", self.bucket_target),
        ] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::contract(format!("{name} = {p} outside [0, 1)")));
            }
        }
        if self.dangling_target + self.bucket_target >= 1.0 {
            return Err(Error::contract("dangling_target + bucket_target must be below 1"));
        }
        Ok(())
    }
}

/// Copy-model graph with a controlled share of dangling and bucket nodes.
///
/// Node `i` either copies the list of a uniformly chosen earlier node (with
/// probability `copy_prob`, each entry mutated with probability 0.1) or draws
/// `1 + Geometric` successors uniformly within ±[`LOCALITY`] of `i`. Then a
/// random `dangling_target` share of nodes loses all out-arcs, and a disjoint
/// `bucket_target` share is paired into 2-cycles (a leftover odd node gets a
/// self-loop), each losing every other out-arc.
pub fn generate_copy_model(p: &CopyModelParams) -> Result<CsrGraph> {
    p.validate()?;
    let n = p.nodes;
    if n == 0 {
        return Ok(CsrGraph::empty(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let extra = Geometric::new((1.0 / p.out_mean).min(1.0))
        .map_err(|e| Error::contract(format!("bad out_mean: {e}")))?;

    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0u64);
    let mut arcs: Vec<NodeId> = Vec::with_capacity((n as f64 * p.out_mean) as usize);
    for i in 0..n {
        if i > 0 && rng.random_bool(p.copy_prob) {
            let proto = rng.random_range(0..i);
            let (lo, hi) = (offsets[proto] as usize, offsets[proto + 1] as usize);
            for k in lo..hi {
                let t = if rng.random_bool(MUTATION_PROB) {
                    rng.random_range(0..n) as NodeId
                } else {
                    arcs[k]
                };
                arcs.push(t);
            }
        } else {
            let degree = 1 + extra.sample(&mut rng);
            let lo = i.saturating_sub(LOCALITY);
            let hi = (i + LOCALITY).min(n - 1);
            for _ in 0..degree {
                arcs.push(rng.random_range(lo..=hi) as NodeId);
            }
        }
        offsets.push(arcs.len() as u64);
    }

    let num_dangling = (p.dangling_target * n as f64).round() as usize;
    let num_bucket = ((p.bucket_target * n as f64).round() as usize).min(n - num_dangling);
    let mut ids: Vec<NodeId> = (0..n as NodeId).collect();
    for k in 0..num_dangling + num_bucket {
        let j = rng.random_range(k..n);
        ids.swap(k, j);
    }
    // 0 = keep, 1 = dangling, 2 = bucket with partner
    let mut role = vec![0u8; n];
    let mut partner = vec![0 as NodeId; n];
    for &u in &ids[..num_dangling] {
        role[u as usize] = 1;
    }
    let bucket_ids = &ids[num_dangling..num_dangling + num_bucket];
    for pair in bucket_ids.chunks(2) {
        let (a, b) = (pair[0], *pair.get(1).unwrap_or(&pair[0]));
        role[a as usize] = 2;
        role[b as usize] = 2;
        partner[a as usize] = b;
        partner[b as usize] = a;
    }

    let mut final_offsets = Vec::with_capacity(n + 1);
    final_offsets.push(0u64);
    let mut final_arcs = Vec::with_capacity(arcs.len());
    for u in 0..n {
        match role[u] {
            0 => final_arcs.extend_from_slice(&arcs[offsets[u] as usize..offsets[u + 1] as usize]),
            1 => {}
            _ => final_arcs.push(partner[u]),
        }
        final_offsets.push(final_arcs.len() as u64);
    }
    drop(arcs);
    Ok(CsrGraph::normalize_rows(final_offsets, final_arcs))
}

/// Uniform random graph with exactly `arcs` distinct arcs (self-loops allowed).
pub fn generate_er(nodes: usize, arcs: u64, seed: u64) -> Result<CsrGraph> {
    if nodes > MAX_NODES {
        return Err(Error::contract("node count exceeds the 32-bit id space"));
    }
    let capacity = (nodes as u128) * (nodes as u128);
    if arcs as u128 > capacity {
        return Err(Error::contract(format!(
            "{arcs} arcs do not fit in a {nodes}-node graph"
        )));
    }
    if arcs == 0 {
        return Ok(CsrGraph::empty(nodes));
    }
    let n = nodes as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys: Vec<u64> = Vec::with_capacity(arcs as usize);
    while (keys.len() as u64) < arcs {
        let missing = arcs - keys.len() as u64;
        for _ in 0..missing {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            keys.push(u * n + v);
        }
        keys.sort_unstable();
        keys.dedup();
    }
    let mut offsets = vec![0u64; nodes + 1];
    for &k in &keys {
        offsets[(k / n) as usize + 1] += 1;
    }
    for i in 0..nodes {
        offsets[i + 1] += offsets[i];
    }
    let successors = keys.iter().map(|&k| (k % n) as NodeId).collect();
    Ok(CsrGraph::from_parts_unchecked(offsets, successors))
}
