//! Cross-route consistency checks: every numerical path is validated here
//! against an independent oracle (RK4 time-stepping vs bisection solvers,
//! BFS graph distances vs the contour metric, occupation vs sampling
//! histograms, streamed censuses vs materialized trees).

use rand::Rng;
use treelab_core::excursion::{
    canonical_offspring_law, contour_path, gw_tree_conditioned_height,
    gw_tree_conditioned_height_truncated, normalized_brownian_excursion, rw_positive_excursion,
    stream_level_census, DiscreteTree, GwBudget,
};
use treelab_core::tree::{level_set_scan_weighted, TreeIndex};
use treelab_core::verify::stats;
use treelab_core::{BranchingMechanism, SeedSpec};

/// Fixed-step RK4 for v' = γ - c·v^α from v(0) = λ.
fn rk4_flow(mech: &BranchingMechanism, gamma: f64, lambda: f64, t: f64, h: f64) -> f64 {
    let f = |v: f64| gamma - mech.psi(v);
    let steps = (t / h).round() as usize;
    let h = t / steps as f64;
    let mut v: f64 = lambda;
    for _ in 0..steps {
        let k1 = f(v);
        let k2 = f(v + 0.5 * h * k1);
        let k3 = f(v + 0.5 * h * k2);
        let k4 = f(v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    v
}

#[test]
fn solvers_match_rk4_time_stepping() {
    for &(alpha, gamma, t) in &[(1.5, 1.0, 1.0), (2.0, 2.0, 0.8), (1.3, 0.5, 1.5)] {
        let mech = BranchingMechanism::stable(alpha).unwrap();
        let v0 = mech.v0(gamma, t).unwrap();
        let rk = rk4_flow(&mech, gamma, 0.0, t, 1e-4);
        assert!((v0 - rk).abs() < 1e-8, "v0 {v0} vs rk4 {rk}");

        // v_inf: integrate from the asymptotic start near the blow-up
        let t0 = 1e-6;
        let start = ((alpha - 1.0) * t0).powf(-1.0 / (alpha - 1.0));
        let vi = mech.v_inf(gamma, t).unwrap();
        let rk = rk4_flow(&mech, gamma, start, t - t0, 1e-4);
        assert!((vi - rk).abs() < 1e-6, "v_inf {vi} vs rk4 {rk}");

        // joint flow from a positive start
        let vj = mech.v_joint(gamma, 2.0, t).unwrap();
        let rk = rk4_flow(&mech, gamma, 2.0, t, 1e-4);
        assert!((vj - rk).abs() < 1e-8, "v_joint {vj} vs rk4 {rk}");
    }
}

#[test]
fn excursion_max_matches_known_mean() {
    // E[max of the normalized excursion] = sqrt(pi/2); the discrete walk
    // carries an O(n^-1/2) deficit, covered by the documented allowance.
    let n_steps = 10_000;
    let reps = 10_000;
    let maxima: Vec<f64> = (0..reps)
        .map(|k| {
            normalized_brownian_excursion(n_steps, SeedSpec::new(77, k))
                .unwrap()
                .max_value()
        })
        .collect();
    let mean = stats::mean(&maxima);
    let se = stats::batch_means_se(&maxima, 30);
    let target = (std::f64::consts::PI / 2.0).sqrt();
    let discretization_allowance = 0.006;
    assert!(
        (mean - target).abs() < 3.0 * se + discretization_allowance,
        "E[max] = {mean:.5} vs {target:.5} (se {se:.5})"
    );
}

#[test]
fn mass_point_depth_matches_occupation_histogram() {
    // the depth of a mass-random vertex is distributed as the path's
    // occupation measure of heights: compare histograms on one path
    let path = normalized_brownian_excursion(1 << 14, SeedSpec::new(3, 5)).unwrap();
    let idx = TreeIndex::build_index(path);
    let height = idx.height();
    let bins = 20;
    let mut occupation = vec![0f64; bins];
    for &v in idx.path().values() {
        let b = ((v / height * bins as f64) as usize).min(bins - 1);
        occupation[b] += 1.0;
    }
    let total: f64 = occupation.iter().sum();
    let mut rng = SeedSpec::new(3, 6).rng();
    let n = 100_000;
    let mut sampled = vec![0f64; bins];
    for _ in 0..n {
        let i = idx.sample_mass_point(&mut rng);
        let v = idx.path().values()[i];
        let b = ((v / height * bins as f64) as usize).min(bins - 1);
        sampled[b] += 1.0;
    }
    let mut chi2 = 0.0;
    for b in 0..bins {
        let expected = occupation[b] / total * n as f64;
        if expected > 5.0 {
            chi2 += (sampled[b] - expected).powi(2) / expected;
        }
    }
    // 19 dof, 0.1% critical value ~ 43.8
    assert!(chi2 < 43.8, "chi2 = {chi2}");
}

#[test]
fn contour_metric_equals_bfs_graph_distance() {
    // d_e between first-visit times equals edge_len times the graph distance
    let law = canonical_offspring_law(1.7).unwrap();
    let mut checked = 0;
    for k in 0..50u64 {
        let s = gw_tree_conditioned_height(&law, 3, GwBudget::default(), SeedSpec::new(9, k))
            .unwrap();
        if s.tree.len() > 200 {
            continue;
        }
        let tree = &s.tree;
        let path = contour_path(tree, 1.0, 1.0).unwrap();
        let idx = TreeIndex::build_index(path);
        let first_visit = first_visits(tree);
        // BFS-free oracle: distance via depths and LCA by parent walking
        let mut rng = SeedSpec::new(9, 1000 + k).rng();
        for _ in 0..40 {
            let u = rng.gen_range(0..tree.len());
            let v = rng.gen_range(0..tree.len());
            let d_graph = graph_distance(tree, u, v);
            let d_path = idx.dist_idx(first_visit[u], first_visit[v]);
            assert!(
                (d_graph as f64 - d_path).abs() < 1e-9,
                "graph {d_graph} vs contour {d_path}"
            );
            checked += 1;
        }
    }
    assert!(checked > 500, "too few small trees checked ({checked})");
}

fn first_visits(tree: &DiscreteTree) -> Vec<usize> {
    let depths = tree.depths();
    let mut fv = vec![0usize; tree.len()];
    let mut pos = 0usize;
    for v in 1..tree.len() {
        pos += depths[v - 1] as usize + 2 - depths[v] as usize;
        fv[v] = pos;
    }
    fv
}

fn graph_distance(tree: &DiscreteTree, mut u: usize, mut v: usize) -> u32 {
    let depths = tree.depths();
    let parent = tree.parent();
    let mut d = 0;
    while depths[u] > depths[v] {
        u = parent[u] as usize;
        d += 1;
    }
    while depths[v] > depths[u] {
        v = parent[v] as usize;
        d += 1;
    }
    while u != v {
        u = parent[u] as usize;
        v = parent[v] as usize;
        d += 2;
    }
    d
}

#[test]
fn streamed_census_matches_materialized_tree() {
    let law = canonical_offspring_law(1.5).unwrap();
    let budget = GwBudget::default();
    for k in 0..20u64 {
        let seed = SeedSpec::new(31, k);
        let level = 12u32;
        let cap = 20u32;
        // same stream, same DFS draw order: identical trees
        let census = stream_level_census(&law, level, cap, budget, seed).unwrap();
        let tree = gw_tree_conditioned_height_truncated(&law, level, Some(cap), budget, seed)
            .unwrap()
            .tree;
        let n = level as f64;
        let path = contour_path(&tree, 1.0 / n, 1.0).unwrap();
        let atoms =
            level_set_scan_weighted(&path, 1.0 - 0.5 / n, 0.25 / n, 1.0).unwrap();
        assert_eq!(census.count as usize, atoms.len(), "level population");
        let scan_gaps: Vec<u32> = atoms
            .gap_min
            .iter()
            .map(|g| (g * n).round() as u32)
            .collect();
        assert_eq!(census.gap_min_depth, scan_gaps, "meet depths");
    }
}

#[test]
fn crossing_visits_mean_two_smoke() {
    // light version of the crossing identity for the excursion sampler
    let mut total = 0.0;
    let reps = 3000;
    for k in 0..reps {
        let e = rw_positive_excursion(SeedSpec::new(12, k), 1 << 20).unwrap();
        total += e.iter().filter(|&&v| v == 3).count() as f64;
    }
    let mean = total / reps as f64;
    assert!((mean - 2.0).abs() < 0.25, "mean visits to level 3 = {mean}");
}

#[test]
fn batch_means_matches_bootstrap_on_experiment_output() {
    // the suite's error bars: batch means within 20% of a bootstrap
    let mut rng = SeedSpec::new(40, 0).rng();
    let values: Vec<f64> = (0..5000)
        .map(|_| {
            let u: f64 = rng.gen();
            (-u.ln()).powf(1.2)
        })
        .collect();
    let se_batch = stats::batch_means_se(&values, 30);
    let se_boot = stats::bootstrap_se(&values, 500, &mut rng);
    assert!(
        (se_batch - se_boot).abs() / se_boot < 0.2,
        "batch {se_batch} vs bootstrap {se_boot}"
    );
}
