//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use webaudit::{CsrGraph, EdgeList};

pub fn graph(n: usize, arcs: &[(u32, u32)]) -> CsrGraph {
    CsrGraph::from_edges(&EdgeList::new(arcs.to_vec(), Some(n))).unwrap()
}

/// Random graph with `n` nodes where each node is dangling with probability
/// `dangling` and otherwise gets 1..=max_out random successors.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, dangling: f64, max_out: usize) -> CsrGraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        if rng.random_bool(dangling) {
            continue;
        }
        let d = rng.random_range(1..=max_out);
        for _ in 0..d {
            arcs.push((u as u32, rng.random_range(0..n) as u32));
        }
    }
    graph(n, &arcs)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Patch {
    Strong,
    Weak,
}

/// Dense fixed point: builds the explicit n×n Google matrix
/// G = α(P + d·wᵀ) + (1−α)·1·vᵀ and powers x ← xG until it stops moving.
pub fn dense_pagerank(g: &CsrGraph, alpha: f64, v: &[f64], patch: Patch) -> Vec<f64> {
    let n = g.num_nodes();
    let uniform = vec![1.0 / n as f64; n];
    let w = match patch {
        Patch::Strong => v,
        Patch::Weak => &uniform[..],
    };
    let mut m = vec![vec![0.0f64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        let succ = g.successors(i);
        for (j, cell) in row.iter_mut().enumerate() {
            let link = if succ.is_empty() {
                w[j]
            } else if succ.contains(&(j as u32)) {
                1.0 / succ.len() as f64
            } else {
                0.0
            };
            *cell = alpha * link + (1.0 - alpha) * v[j];
        }
    }
    let mut x = v.to_vec();
    for _ in 0..100_000 {
        let mut next = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                next[j] += x[i] * m[i][j];
            }
        }
        let delta: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if delta < 1e-15 {
            break;
        }
    }
    x
}

/// Solves y(I − αP̄) = (1−α)v by Gaussian elimination with partial pivoting,
/// P̄ having zero rows at dangling nodes.
pub fn dense_pseudorank(g: &CsrGraph, alpha: f64, v: &[f64]) -> Vec<f64> {
    let n = g.num_nodes();
    // Solve Aᵀ yᵀ = bᵀ with A = I − αP̄.
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 1.0;
        row[n] = (1.0 - alpha) * v[i];
    }
    for j in 0..n {
        let succ = g.successors(j);
        for &k in succ {
            a[k as usize][j] -= alpha / succ.len() as f64;
        }
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| a[p][col].abs().partial_cmp(&a[q][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// SCC partition by transitive closure (Floyd–Warshall on booleans):
/// label[u] = smallest v with u ⇄ v.
pub fn closure_partition(g: &CsrGraph) -> Vec<usize> {
    let n = g.num_nodes();
    let mut reach = vec![vec![false; n]; n];
    for (u, row) in reach.iter_mut().enumerate() {
        row[u] = true;
        for &v in g.successors(u) {
            row[v as usize] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n)
        .map(|u| (0..n).find(|&v| reach[u][v] && reach[v][u]).unwrap())
        .collect()
}

/// Canonical form of a component assignment: each node labeled by the
/// smallest node in its class.
pub fn canonical(component_of: &[u32]) -> Vec<usize> {
    let mut first = std::collections::HashMap::new();
    for (u, &c) in component_of.iter().enumerate() {
        first.entry(c).or_insert(u);
    }
    component_of.iter().map(|c| first[c]).collect()
}

/// Gray rank of a row over `width` columns (column 0 = most significant bit):
/// the unique r with B = r XOR (r >> 1).
pub fn gray_rank(row: &[u32], width: u32) -> u32 {
    let b: u32 = row.iter().map(|&c| 1u32 << (width - 1 - c)).sum();
    let mut r = 0;
    for k in 0..width {
        let prefix = b >> (width - 1 - k);
        r = (r << 1) | (prefix.count_ones() & 1);
    }
    r
}

pub fn row_of(mask: u32, width: u32) -> Vec<u32> {
    (0..width).filter(|&c| mask & (1 << (width - 1 - c)) != 0).collect()
}

/// Straight transcription of the bit-cost model on owned sets, used to
/// cross-check the optimized costing.
pub fn model_bits(g: &CsrGraph, window: usize) -> u64 {
    fn gamma(x: u64) -> u64 {
        let mut bits = 0;
        let mut y = x;
        while y > 1 {
            y /= 2;
            bits += 1;
        }
        2 * bits + 1
    }
    fn absolute(i: u64, list: &[u32]) -> u64 {
        let mut total = 0;
        for (k, &s) in list.iter().enumerate() {
            let s = s as u64;
            total += if k == 0 {
                let nu = if s >= i { 2 * (s - i) } else { 2 * (i - s) - 1 };
                gamma(nu + 1)
            } else {
                gamma(s - list[k - 1] as u64)
            };
        }
        total
    }
    let mut total = 0;
    for i in 0..g.num_nodes() {
        let s = g.successors(i);
        total += gamma(s.len() as u64 + 1);
        if s.is_empty() {
            continue;
        }
        let mut best = gamma(1) + absolute(i as u64, s);
        for j in i.saturating_sub(window)..i {
            let sj = g.successors(j);
            if sj.is_empty() {
                continue;
            }
            let extras: Vec<u32> = s.iter().copied().filter(|x| !sj.contains(x)).collect();
            let cost = gamma((i - j) as u64 + 1)
                + sj.len() as u64
                + gamma(extras.len() as u64 + 1)
                + absolute(i as u64, &extras);
            best = best.min(cost);
        }
        total += best;
    }
    total
}

/// Peak resident set size of this process, in bytes (Linux only).
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// Reorders rows only (column ids untouched): row `k` of the result is row
/// `backward[k]` of `g`. Rows sorted this way are already in Gray order.
pub fn rows_reordered(g: &CsrGraph, backward: &[u32]) -> CsrGraph {
    let arcs: Vec<(u32, u32)> = backward
        .iter()
        .enumerate()
        .flat_map(|(k, &old)| g.successors(old as usize).iter().map(move |&v| (k as u32, v)))
        .collect();
    graph(g.num_nodes(), &arcs)
}
