//! PageRank by power iteration, under both dangling-node patches, plus the
//! unpatched linear-system variant ("pseudorank").
//!
//! With *P̄* the row-normalized adjacency matrix (zero rows for dangling
//! nodes), **v** the preference vector and α the damping factor, one step is
//!
//! > **x**′ = α **x** *P̄* + α (Σ_{dangling j} *xⱼ*) **w** + (1 − α) **v**
//!
//! where **w** = **v** for the strongly preferential patch, **w** = **1**/*n*
//! for the weakly preferential one, and **w** = **0** for the linear system
//! **y** = α **y** *P̄* + (1 − α) **v**. The last one leaks the rank that
//! reaches dangling nodes, so Σ**y** < 1 whenever dangling nodes are reachable,
//! and **y**/Σ**y** is the strongly preferential PageRank. A stopping threshold
//! on ‖**y**′ − **y**‖₁ is thus relative to a vector of norm Σ**y**, not 1; the
//! result carries that norm so callers can rescale.
//!
//! The iteration pulls contributions along the transposed graph: each node's
//! new value is a sum over its predecessors in a fixed order, and every global
//! reduction uses the fixed chunking of [`crate::par`]. Results are
//! bit-identical for any thread count.

use std::io::{BufRead, BufWriter, Write};

use serde::{Deserialize, Serialize};

use crate::components::ComponentInfo;
use crate::graph::{CsrGraph, NodeId};
use crate::par;
use crate::{Error, Result};

/// Iteration cap applied to each point of an α sweep.
pub const SWEEP_MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DanglingStrategy {
    /// Dangling rank is redistributed along the preference vector.
    StronglyPreferential,
    /// Dangling rank is redistributed uniformly.
    WeaklyPreferential,
    /// No patch: solve the linear system with zero dangling rows.
    LinearSystem,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Preference {
    Uniform,
    Vector(Vec<f64>),
}

impl Preference {
    fn validate(&self, n: usize) -> Result<()> {
        if let Preference::Vector(v) = self {
            if v.len() != n {
                return Err(Error::contract(format!(
                    "preference vector has {} entries, graph has {n} nodes",
                    v.len()
                )));
            }
            if v.iter().any(|&x| x < 0.0 || !x.is_finite()) {
                return Err(Error::contract("preference entries must be finite and non-negative"));
            }
            let sum = kahan_sum(v);
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::contract(format!("preference sums to {sum}, not 1")));
            }
        }
        Ok(())
    }

    #[inline]
    fn at(&self, i: usize, uniform: f64) -> f64 {
        match self {
            Preference::Uniform => uniform,
            Preference::Vector(v) => v[i],
        }
    }
}

fn kahan_sum(v: &[f64]) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for &x in v {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankConfig {
    pub alpha: f64,
    pub preference: Preference,
    pub dangling: DanglingStrategy,
    /// Threshold on the L1 norm of the difference between successive iterates.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig::new(0.85, 1e-8)
    }
}

impl PageRankConfig {
    /// Strongly preferential, uniform preference and the default iteration cap.
    pub fn new(alpha: f64, tolerance: f64) -> Self {
        PageRankConfig {
            alpha,
            preference: Preference::Uniform,
            dangling: DanglingStrategy::StronglyPreferential,
            tolerance,
            max_iterations: default_max_iterations(alpha, tolerance),
        }
    }

    pub fn with_dangling(mut self, dangling: DanglingStrategy) -> Self {
        self.dangling = dangling;
        self
    }

    pub fn with_preference(mut self, preference: Preference) -> Self {
        self.preference = preference;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::contract(format!("alpha {} outside [0, 1)", self.alpha)));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::contract("tolerance must be positive"));
        }
        if n == 0 {
            return Err(Error::contract("PageRank of an empty graph is undefined"));
        }
        self.preference.validate(n)
    }
}

/// `10·⌈log(tolerance)/log(α)⌉`, the number of steps after which α^k drops
/// below the tolerance, times ten. Never less than 10.
pub fn default_max_iterations(alpha: f64, tolerance: f64) -> usize {
    let steps = (tolerance.ln() / alpha.ln()).ceil();
    if steps.is_finite() && steps > 1.0 {
        (10.0 * steps).min(usize::MAX as f64 / 2.0) as usize
    } else {
        10
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PageRankResult {
    pub ranks: Vec<f64>,
    pub iterations: usize,
    pub final_residual: f64,
    /// Σ ranks: 1 for the Markov-chain patches, at most 1 for the linear system.
    pub l1_norm: f64,
    pub converged: bool,
}

impl PageRankResult {
    /// Residual relative to the norm of the rank vector; equals
    /// `final_residual` for the stochastic strategies.
    pub fn scaled_residual(&self) -> f64 {
        if self.l1_norm > 0.0 {
            self.final_residual / self.l1_norm
        } else {
            self.final_residual
        }
    }

    pub fn normalized(&self) -> Vec<f64> {
        self.ranks.iter().map(|&r| r / self.l1_norm).collect()
    }
}

/// The pull-side view of a graph needed by the solver: the transpose, inverse
/// outdegrees and the list of dangling nodes.
#[derive(Debug, Clone)]
pub struct RankOperator {
    transpose: CsrGraph,
    inv_outdegree: Vec<f64>,
    dangling: Vec<NodeId>,
}

impl RankOperator {
    pub fn from_graph(g: &CsrGraph) -> Self {
        Self::from_transpose(g.transpose())
    }

    /// Builds the operator from the already transposed graph, so callers that
    /// load arcs reversed never hold the forward graph in memory.
    pub fn from_transpose(transpose: CsrGraph) -> Self {
        let n = transpose.num_nodes();
        let mut outdegree = vec![0u32; n];
        for &u in transpose.successor_array() {
            outdegree[u as usize] += 1;
        }
        let dangling = (0..n)
            .filter(|&u| outdegree[u] == 0)
            .map(|u| u as NodeId)
            .collect();
        let inv_outdegree = outdegree
            .into_iter()
            .map(|d| if d == 0 { 0.0 } else { 1.0 / d as f64 })
            .collect();
        RankOperator {
            transpose,
            inv_outdegree,
            dangling,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.transpose.num_nodes()
    }

    pub fn dangling_nodes(&self) -> &[NodeId] {
        &self.dangling
    }

    /// Runs the configured strategy, calling `observer(k, x)` on the start
    /// vector (`k = 0`) and after each step.
    pub fn run_observed<F>(&self, cfg: &PageRankConfig, mut observer: F) -> Result<PageRankResult>
    where
        F: FnMut(usize, &[f64]),
    {
        let n = self.num_nodes();
        cfg.validate(n)?;
        let alpha = cfg.alpha;
        let uniform = 1.0 / n as f64;
        let pref = &cfg.preference;
        let dangling_to_pref = cfg.dangling == DanglingStrategy::StronglyPreferential;
        let patched = cfg.dangling != DanglingStrategy::LinearSystem;

        let mut x: Vec<f64> = (0..n).map(|i| pref.at(i, uniform)).collect();
        let mut next = vec![0.0f64; n];
        observer(0, &x);

        let offsets = self.transpose.offsets();
        let preds = self.transpose.successor_array();
        let inv = &self.inv_outdegree;

        let mut iterations = 0;
        let mut residual = f64::INFINITY;
        let mut converged = false;
        while iterations < cfg.max_iterations {
            let dangling_mass = if patched {
                let d = &self.dangling;
                let xr = &x;
                par::chunked_sum(d.len(), |r| d[r].iter().map(|&j| xr[j as usize]).sum())
            } else {
                0.0
            };
            let xr = &x;
            par::fill(&mut next, |i| {
                let mut sum = 0.0;
                for &j in &preds[offsets[i] as usize..offsets[i + 1] as usize] {
                    sum += xr[j as usize] * inv[j as usize];
                }
                let w = if !patched {
                    0.0
                } else if dangling_to_pref {
                    pref.at(i, uniform)
                } else {
                    uniform
                };
                alpha * sum + alpha * dangling_mass * w + (1.0 - alpha) * pref.at(i, uniform)
            });
            let nr = &next;
            residual = par::chunked_sum(n, |r| {
                r.map(|i| (nr[i] - xr[i]).abs()).sum()
            });
            std::mem::swap(&mut x, &mut next);
            iterations += 1;
            observer(iterations, &x);
            if residual <= cfg.tolerance {
                converged = true;
                break;
            }
        }
        let xr = &x;
        let l1_norm = par::chunked_sum(n, |r| xr[r].iter().sum());
        Ok(PageRankResult {
            ranks: x,
            iterations,
            final_residual: residual,
            l1_norm,
            converged,
        })
    }

    pub fn run(&self, cfg: &PageRankConfig) -> Result<PageRankResult> {
        self.run_observed(cfg, |_, _| {})
    }
}

/// Markov-chain PageRank; `cfg.dangling` must be one of the two patches.
pub fn pagerank_power(g: &CsrGraph, cfg: &PageRankConfig) -> Result<PageRankResult> {
    if cfg.dangling == DanglingStrategy::LinearSystem {
        return Err(Error::contract(
            "pagerank_power needs a dangling patch; use pseudorank_linear for the linear system",
        ));
    }
    RankOperator::from_graph(g).run(cfg)
}

/// Solves `y = α·y·P̄ + (1−α)·v` with zero dangling rows. `l1_norm` carries Σy.
pub fn pseudorank_linear(
    g: &CsrGraph,
    alpha: f64,
    preference: &Preference,
    tolerance: f64,
    max_iterations: usize,
) -> Result<PageRankResult> {
    let cfg = PageRankConfig {
        alpha,
        preference: preference.clone(),
        dangling: DanglingStrategy::LinearSystem,
        tolerance,
        max_iterations,
    };
    RankOperator::from_graph(g).run(&cfg)
}

/// Any of the three strategies.
pub fn pagerank(g: &CsrGraph, cfg: &PageRankConfig) -> Result<PageRankResult> {
    RankOperator::from_graph(g).run(cfg)
}

/// Checks that the normalized pseudorank equals strongly preferential PageRank
/// within `tolerance` (max-norm) and returns the scale factor `1/Σy`.
pub fn verify_scale_factor(
    g: &CsrGraph,
    alpha: f64,
    preference: &Preference,
    tolerance: f64,
) -> Result<f64> {
    let op = RankOperator::from_graph(g);
    // The L1 error after stopping is at most α/(1−α) times the last step.
    let inner = (tolerance * (1.0 - alpha) / 10.0).max(1e-15);
    let cap = default_max_iterations(alpha, inner).max(1000);
    let base = PageRankConfig::new(alpha, inner)
        .with_preference(preference.clone())
        .with_max_iterations(cap);
    let x = op.run(&base)?;
    let y = op.run(&base.clone().with_dangling(DanglingStrategy::LinearSystem))?;
    if y.l1_norm.is_nan() || y.l1_norm <= 0.0 {
        return Err(Error::PropertyViolation("pseudorank has zero norm".into()));
    }
    let gap = x
        .ranks
        .iter()
        .zip(&y.ranks)
        .map(|(&a, &b)| (a - b / y.l1_norm).abs())
        .fold(0.0, f64::max);
    if gap > tolerance {
        return Err(Error::PropertyViolation(format!(
            "normalized pseudorank differs from PageRank by {gap:e} > {tolerance:e}"
        )));
    }
    Ok(1.0 / y.l1_norm)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha: f64,
    pub bucket_mass: f64,
    pub core_mass: f64,
    pub non_bucket_mass: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Strongly preferential PageRank for each α, reporting the rank mass held by
/// bucket nodes and by the core component.
///
/// The stopping threshold is scaled by `1 − α`: near α = 1 the step size
/// underestimates the distance to the fixed point by roughly that factor.
/// Each point is capped at [`SWEEP_MAX_ITERATIONS`] steps.
pub fn alpha_sweep_bucket_mass(
    g: &CsrGraph,
    components: &ComponentInfo,
    alphas: &[f64],
    preference: &Preference,
    tolerance: f64,
) -> Result<Vec<SweepPoint>> {
    let n = g.num_nodes();
    if components.component_of.len() != n {
        return Err(Error::contract("component info does not match the graph"));
    }
    let op = RankOperator::from_graph(g);
    let mut out = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let tol = tolerance * (1.0 - alpha);
        let cfg = PageRankConfig::new(alpha, tol)
            .with_preference(preference.clone())
            .with_max_iterations(default_max_iterations(alpha, tol).min(SWEEP_MAX_ITERATIONS));
        let res = op.run(&cfg)?;
        let ranks = &res.ranks;
        let bucket_mass = par::chunked_sum(n, |r| {
            r.filter(|&u| components.is_bucket_node(u)).map(|u| ranks[u]).sum()
        });
        let non_bucket_mass = par::chunked_sum(n, |r| {
            r.filter(|&u| !components.is_bucket_node(u)).map(|u| ranks[u]).sum()
        });
        let core_mass = match components.core_component {
            Some(core) => par::chunked_sum(n, |r| {
                r.filter(|&u| components.component_of[u] == core).map(|u| ranks[u]).sum()
            }),
            None => 0.0,
        };
        out.push(SweepPoint {
            alpha,
            bucket_mass,
            core_mass,
            non_bucket_mass,
            iterations: res.iterations,
            converged: res.converged,
        });
    }
    Ok(out)
}

/// `node<TAB>rank` lines, ranks with 17 significant digits.
pub fn write_ranks_tsv<W: Write>(ranks: &[f64], writer: W) -> Result<()> {
    let mut out = BufWriter::new(writer);
    for (i, r) in ranks.iter().enumerate() {
        writeln!(out, "{i}\t{r:.16e}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_ranks_tsv<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut ranks = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let (node, rank) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(k + 1, "expected node<TAB>rank"))?;
        if node.parse::<usize>().ok() != Some(k) {
            return Err(Error::parse(k + 1, format!("expected node {k}, found '{node}'")));
        }
        ranks.push(
            rank.parse()
                .map_err(|_| Error::parse(k + 1, format!("'{rank}' is not a number")))?,
        );
    }
    Ok(ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeList;

    fn graph(n: usize, arcs: &[(u32, u32)]) -> CsrGraph {
        CsrGraph::from_edges(&EdgeList::new(arcs.to_vec(), Some(n))).unwrap()
    }

    #[test]
    fn single_self_loop() {
        for alpha in [0.0, 0.5, 0.85, 0.99] {
            let r = pagerank_power(&graph(1, &[(0, 0)]), &PageRankConfig::new(alpha, 1e-12)).unwrap();
            assert!((r.ranks[0] - 1.0).abs() < 1e-15);
            assert!(r.converged);
        }
    }

    #[test]
    fn two_isolated_nodes() {
        let r = pagerank_power(&CsrGraph::empty(2), &PageRankConfig::new(0.85, 1e-12)).unwrap();
        assert_eq!(r.ranks, vec![0.5, 0.5]);
    }

    #[test]
    fn pseudorank_two_nodes() {
        // y = 0.5 y Ā + 0.5 v, v = (1/2, 1/2), Ā = [[0,1],[0,0]]:
        // y0 = 1/4, y1 = 0.5 y0 + 1/4 = 3/8.
        let g = graph(2, &[(0, 1)]);
        let y = pseudorank_linear(&g, 0.5, &Preference::Uniform, 1e-15, 1000).unwrap();
        assert!((y.ranks[0] - 0.25).abs() < 1e-14);
        assert!((y.ranks[1] - 0.375).abs() < 1e-14);
        assert!((y.l1_norm - 0.625).abs() < 1e-14);
        let s = verify_scale_factor(&g, 0.5, &Preference::Uniform, 1e-12).unwrap();
        assert!((s - 1.6).abs() < 1e-12);
        let x = pagerank_power(&g, &PageRankConfig::new(0.5, 1e-15)).unwrap();
        assert!((x.ranks[0] - 0.4).abs() < 1e-13 && (x.ranks[1] - 0.6).abs() < 1e-13);
    }

    #[test]
    fn pseudorank_without_dangling_is_stochastic() {
        let g = graph(2, &[(0, 1), (1, 0)]);
        let y = pseudorank_linear(&g, 0.85, &Preference::Uniform, 1e-14, 10_000).unwrap();
        assert!((y.l1_norm - 1.0).abs() < 1e-9);
        assert!((y.ranks[0] - 0.5).abs() < 1e-12);
        assert!((verify_scale_factor(&g, 0.85, &Preference::Uniform, 1e-9).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn linear_strategy_rejected_by_power() {
        let cfg = PageRankConfig::default().with_dangling(DanglingStrategy::LinearSystem);
        assert!(matches!(pagerank_power(&graph(1, &[]), &cfg), Err(Error::Contract(_))));
    }

    #[test]
    fn config_validation() {
        let g = graph(2, &[(0, 1)]);
        assert!(pagerank_power(&g, &PageRankConfig::new(1.0, 1e-8)).is_err());
        assert!(pagerank_power(&g, &PageRankConfig::new(-0.1, 1e-8)).is_err());
        assert!(pagerank_power(&g, &PageRankConfig::new(0.5, 0.0)).is_err());
        let bad = PageRankConfig::new(0.5, 1e-8).with_preference(Preference::Vector(vec![0.6, 0.6]));
        assert!(pagerank_power(&g, &bad).is_err());
        let short = PageRankConfig::new(0.5, 1e-8).with_preference(Preference::Vector(vec![1.0]));
        assert!(pagerank_power(&g, &short).is_err());
        assert!(pagerank_power(&CsrGraph::empty(0), &PageRankConfig::default()).is_err());
    }

    #[test]
    fn non_convergence_is_reported() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let cfg = PageRankConfig::new(0.85, 1e-15)
            .with_preference(Preference::Vector(vec![1.0, 0.0, 0.0]))
            .with_max_iterations(3);
        let r = pagerank_power(&g, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
        assert!(r.final_residual > 1e-15);
    }

    #[test]
    fn weak_and_strong_differ_with_skewed_preference() {
        let g = graph(3, &[(0, 1)]);
        let v = Preference::Vector(vec![1.0, 0.0, 0.0]);
        let strong = pagerank_power(&g, &PageRankConfig::new(0.85, 1e-14).with_preference(v.clone())).unwrap();
        let weak = pagerank_power(
            &g,
            &PageRankConfig::new(0.85, 1e-14)
                .with_preference(v)
                .with_dangling(DanglingStrategy::WeaklyPreferential),
        )
        .unwrap();
        assert!((strong.l1_norm - 1.0).abs() < 1e-12 && (weak.l1_norm - 1.0).abs() < 1e-12);
        assert!(strong.ranks[2] < 1e-15);
        assert!(weak.ranks[2] > 0.01);
    }

    #[test]
    fn default_iteration_cap() {
        assert_eq!(default_max_iterations(0.85, 1e-8), 10 * 114);
        assert_eq!(default_max_iterations(0.0, 1e-8), 10);
    }

    #[test]
    fn sweep_concentrates_in_bucket() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 1)]);
        let info = crate::components::analyze(&g);
        let alphas = [0.5, 0.85, 0.99, 0.9999];
        let pts = alpha_sweep_bucket_mass(&g, &info, &alphas, &Preference::Uniform, 1e-10).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].bucket_mass > w[0].bucket_mass);
        }
        // node 0 has no predecessors, so its rank is (1 − α)/3
        for p in &pts {
            assert!((p.non_bucket_mass - (1.0 - p.alpha) / 3.0).abs() < 1e-9, "{p:?}");
        }
        assert!(pts[3].bucket_mass > 0.99);
    }

    #[test]
    fn tsv_round_trip() {
        let ranks = vec![0.25, 0.375, 1.0 / 3.0, 1e-300];
        let mut buf = Vec::new();
        write_ranks_tsv(&ranks, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("0\t2.5000000000000000e-1\n"));
        assert_eq!(read_ranks_tsv(&buf[..]).unwrap(), ranks);
    }
}
