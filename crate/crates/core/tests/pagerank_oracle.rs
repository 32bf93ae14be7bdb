mod common;

use common::*;
use proptest::prelude::*;
use webaudit::grayorder::{apply_permutation, NodePermutation};
use webaudit::pagerank::*;

#[test]
fn four_node_fixture_matches_dense_fixed_point() {
    let g = graph(4, &[(0, 1), (0, 2), (1, 2), (2, 0)]);
    let v = vec![0.25; 4];
    let expect = dense_pagerank(&g, 0.85, &v, Patch::Strong);
    let got = pagerank_power(&g, &PageRankConfig::new(0.85, 1e-14)).unwrap();
    assert!(max_diff(&got.ranks, &expect) < 1e-10, "{:?} vs {expect:?}", got.ranks);
}

#[test]
fn pseudorank_matches_direct_solve() {
    let mut r = rng(11);
    for _ in 0..20 {
        let n = r.random_range(2..40);
        let g = random_graph(&mut r, n, 0.3, 4);
        let v = vec![1.0 / n as f64; n];
        let y = pseudorank_linear(&g, 0.85, &Preference::Uniform, 1e-15, 100_000).unwrap();
        let expect = dense_pseudorank(&g, 0.85, &v);
        assert!(max_diff(&y.ranks, &expect) < 1e-12);
        let has_dangling = (0..n).any(|u| g.outdegree(u) == 0);
        if has_dangling {
            assert!(y.l1_norm < 1.0);
        } else {
            assert!((y.l1_norm - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn iterates_stay_stochastic() {
    let mut r = rng(5);
    let g = random_graph(&mut r, 150, 0.2, 6);
    let op = RankOperator::from_graph(&g);
    for strategy in [DanglingStrategy::StronglyPreferential, DanglingStrategy::WeaklyPreferential] {
        let cfg = PageRankConfig::new(0.9, 1e-12).with_dangling(strategy);
        let mut worst = 0.0f64;
        let res = op
            .run_observed(&cfg, |_, x| {
                worst = worst.max((x.iter().sum::<f64>() - 1.0).abs());
            })
            .unwrap();
        assert!(worst <= 1e-9, "drift {worst}");
        assert!(res.converged && res.final_residual <= 1e-12);
    }
}

#[test]
fn strategies_agree_without_dangling_nodes() {
    let mut r = rng(8);
    let g = random_graph(&mut r, 120, 0.0, 5);
    let a = pagerank(&g, &PageRankConfig::new(0.85, 1e-14)).unwrap();
    let b = pagerank(&g, &PageRankConfig::new(0.85, 1e-14).with_dangling(DanglingStrategy::WeaklyPreferential)).unwrap();
    let c = pagerank(&g, &PageRankConfig::new(0.85, 1e-14).with_dangling(DanglingStrategy::LinearSystem)).unwrap();
    assert!(max_diff(&a.ranks, &b.ranks) < 1e-9);
    assert!(max_diff(&a.ranks, &c.ranks) < 1e-9);
}

#[test]
fn non_uniform_preference_matches_oracle() {
    let mut r = rng(21);
    let g = random_graph(&mut r, 30, 0.25, 3);
    let raw: Vec<f64> = (0..30).map(|_| r.random_range(0.0..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let v: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let v = {
        // renormalize so the sum is within 1e-12
        let s: f64 = v.iter().sum();
        v.iter().map(|x| x / s).collect::<Vec<_>>()
    };
    for (patch, strategy) in [
        (Patch::Strong, DanglingStrategy::StronglyPreferential),
        (Patch::Weak, DanglingStrategy::WeaklyPreferential),
    ] {
        let cfg = PageRankConfig::new(0.85, 1e-14)
            .with_dangling(strategy)
            .with_preference(Preference::Vector(v.clone()));
        let got = pagerank_power(&g, &cfg).unwrap();
        assert!(max_diff(&got.ranks, &dense_pagerank(&g, 0.85, &v, patch)) < 1e-10);
    }
}

use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn permutation_equivariance(seed in any::<u64>(), n in 2usize..60) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.2, 4);
        let mut order: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            order.swap(i, r.random_range(0..=i));
        }
        let p = NodePermutation::from_forward(order).unwrap();
        let h = apply_permutation(&g, &p).unwrap();
        let cfg = PageRankConfig::new(0.85, 1e-13);
        let x = pagerank_power(&g, &cfg).unwrap().ranks;
        let y = pagerank_power(&h, &cfg).unwrap().ranks;
        for u in 0..n {
            prop_assert!((x[u] - y[p.forward()[u] as usize]).abs() <= 1e-12);
        }
    }
}
