//! Monte Carlo verification suite: one named experiment per distributional
//! identity, each returning structured pass/fail reports against the
//! analytic layer or a documented oracle.
//!
//! Experiments are deterministic functions of the master seed; replicates
//! run on disjoint ChaCha streams and reductions happen in replicate order,
//! so results are byte-identical across thread counts. Exact identities
//! (the radial-transform law, the downcrossing exponential, the crossing
//! identity) get tight tolerances; scaling-limit identities (branching
//! process limit, ball-mass laws) get `max(3·SE, 10%)` with a two-resolution
//! bias note, separating Monte Carlo noise from discretization bias.

pub mod calibrate;
mod experiments;
pub mod report;
pub mod stats;

pub use calibrate::{calibrate_kappa, KappaFit, CALIBRATED_KAPPA};
pub use experiments::*;
pub use report::{summary_json, to_jsonl, CheckKind, ExperimentReport, Provenance, Verdict};

use crate::seed::SeedSpec;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),
    #[error("under-resolved: {0}")]
    UnderResolved(String),
    #[error("no level atoms found; increase tree count or atom resolution")]
    EmptyPool,
    #[error("population exceeded the safety cap during branching simulation")]
    PopulationExplosion,
    #[error("{0}")]
    BadInput(String),
    #[error(transparent)]
    Excursion(#[from] crate::excursion::ExcursionError),
    #[error(transparent)]
    Analytic(#[from] crate::analytic::AnalyticError),
    #[error(transparent)]
    Tree(#[from] crate::tree::TreeError),
    #[error(transparent)]
    Hausdorff(#[from] crate::hausdorff::HausdorffError),
}

type Result<T> = std::result::Result<T, VerifyError>;

/// Experiment names, in suite order. Stream ids are allocated from the
/// position in this table, so adding experiments at the end never reseeds
/// existing ones.
pub const EXPERIMENT_NAMES: [&str; 8] = [
    "pitman",
    "downcrossing",
    "ray_knight",
    "crossing_identity",
    "pointed_ball",
    "level_ball",
    "small_mass_tail",
    "ct_occupation",
];

/// Per-experiment sample sizes. Defaults are acceptance-grade; `smoke()` is
/// a fast profile for determinism and plumbing tests.
#[derive(Debug, Clone)]
pub struct SuiteSizes {
    pub pitman_samples: usize,
    pub pitman_dx: f64,
    pub down_samples: usize,
    pub down_dx: f64,
    pub down_a: f64,
    pub down_eps: f64,
    pub rk_x: f64,
    pub rk_t: f64,
    pub rk_lambda: f64,
    pub rk_n_scale: u32,
    pub rk_reps: usize,
    pub cross_levels: usize,
    pub cross_reps: usize,
    pub cross_max_len: usize,
    pub pb_eps: f64,
    pub pb_trees: usize,
    pub pb_points: usize,
    pub pb_n_scale: u32,
    pub pb_stride: usize,
    pub lb_lambda: f64,
    pub lb_eps: f64,
    pub lb_trees: usize,
    pub lb_n_scale: u32,
    /// optional (n_scale, n_trees) for the coarse-resolution bias note
    pub lb_bias_scale: Option<(u32, usize)>,
    pub sm_gammas: Vec<f64>,
    pub sm_gamma_max: f64,
    pub sm_trees: usize,
    pub sm_n_scale: u32,
    pub ct_samples: usize,
    pub ct_rel_step: f64,
    pub max_attempts: u64,
    pub max_vertices: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            pitman_samples: 100_000,
            pitman_dx: 1e-3,
            down_samples: 10_000,
            down_dx: 2.5e-4,
            down_a: 1.0,
            down_eps: 0.4,
            rk_x: 1.0,
            rk_t: 1.0,
            rk_lambda: 1.0,
            rk_n_scale: 200,
            rk_reps: 2000,
            cross_levels: 20,
            cross_reps: 10_000,
            cross_max_len: 1_000_000,
            pb_eps: 1.0,
            pb_trees: 1000,
            pb_points: 1000,
            pb_n_scale: 150,
            pb_stride: 4,
            lb_lambda: 1.0,
            lb_eps: 1.0,
            lb_trees: 400,
            lb_n_scale: 100,
            lb_bias_scale: Some((50, 60)),
            sm_gammas: vec![0.5, 2.0, 5.0],
            sm_gamma_max: 1e6,
            sm_trees: 400,
            sm_n_scale: 200,
            ct_samples: 48,
            ct_rel_step: 0.02,
            max_attempts: 200_000,
            max_vertices: 20_000_000,
        }
    }
}

impl SuiteSizes {
    /// Small sizes for determinism/plumbing tests; statistically meaningless.
    pub fn smoke() -> Self {
        Self {
            pitman_samples: 2000,
            pitman_dx: 2e-3,
            down_samples: 800,
            down_dx: 2e-3,
            rk_n_scale: 50,
            rk_reps: 300,
            cross_reps: 1500,
            pb_trees: 60,
            pb_points: 120,
            pb_n_scale: 60,
            lb_trees: 40,
            lb_n_scale: 40,
            lb_bias_scale: Some((20, 12)),
            sm_trees: 60,
            sm_n_scale: 60,
            ct_samples: 12,
            ..Self::default()
        }
    }
}

/// Suite-level configuration: the tree experiments run at `alpha` with the
/// canonical-limit mechanism `c = 1/alpha`; the Brownian-path experiments
/// are parameter-free.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub alpha: f64,
    pub master_seed: u64,
    pub sizes: SuiteSizes,
}

impl SuiteConfig {
    pub fn new(alpha: f64, master_seed: u64) -> Self {
        Self {
            alpha,
            master_seed,
            sizes: SuiteSizes::default(),
        }
    }
}

/// Run all experiments (or the named subset, in suite order). An unknown
/// name is a usage error. Wall-clock runtimes are attached to the reports
/// in memory only.
pub fn run_suite(cfg: &SuiteConfig, only: &[String]) -> Result<Vec<ExperimentReport>> {
    for name in only {
        if !EXPERIMENT_NAMES.contains(&name.as_str()) {
            return Err(VerifyError::UnknownExperiment(name.clone()));
        }
    }
    let selected = |name: &str| only.is_empty() || only.iter().any(|n| n == name);
    let mut reports = Vec::new();
    for (i, &name) in EXPERIMENT_NAMES.iter().enumerate() {
        if !selected(name) {
            continue;
        }
        let seed = SeedSpec::new(cfg.master_seed, (i as u64 + 1) << 32);
        let t0 = std::time::Instant::now();
        let mut batch = run_experiment(name, cfg, seed)?;
        let dt = t0.elapsed().as_secs_f64();
        for r in &mut batch {
            r.runtime_secs = dt;
        }
        reports.extend(batch);
    }
    Ok(reports)
}

fn run_experiment(name: &str, cfg: &SuiteConfig, seed: SeedSpec) -> Result<Vec<ExperimentReport>> {
    let s = &cfg.sizes;
    match name {
        "pitman" => verify_pitman(s.pitman_samples, s.pitman_dx, seed),
        "downcrossing" => {
            verify_downcrossing_exponential(s.down_a, s.down_eps, s.down_samples, s.down_dx, seed)
        }
        "ray_knight" => verify_ray_knight(
            cfg.alpha,
            s.rk_x,
            s.rk_t,
            s.rk_lambda,
            s.rk_n_scale,
            s.rk_reps,
            seed,
        ),
        "crossing_identity" => {
            verify_crossing_identity(s.cross_levels, s.cross_reps, s.cross_max_len, seed)
        }
        "pointed_ball" => verify_pointed_ball_law(
            cfg.alpha,
            &PointedBallParams {
                eps: s.pb_eps,
                n_trees: s.pb_trees,
                n_points: s.pb_points,
                n_scale: s.pb_n_scale,
                stride: s.pb_stride,
                max_attempts: s.max_attempts,
                max_vertices: s.max_vertices,
            },
            seed,
        ),
        "level_ball" => verify_level_ball_law(
            cfg.alpha,
            &LevelBallParams {
                lambda: s.lb_lambda,
                eps: s.lb_eps,
                n_trees: s.lb_trees,
                n_scale: s.lb_n_scale,
                bias_scale: s.lb_bias_scale,
                max_attempts: s.max_attempts,
                max_vertices: s.max_vertices,
            },
            seed,
        ),
        "small_mass_tail" => verify_small_mass_tail(
            cfg.alpha,
            &s.sm_gammas,
            s.sm_gamma_max,
            s.sm_trees,
            s.sm_n_scale,
            s.max_attempts,
            s.max_vertices,
            seed,
        ),
        "ct_occupation" => verify_ct_occupation(s.ct_samples, s.ct_rel_step, seed),
        other => Err(VerifyError::UnknownExperiment(other.to_string())),
    }
}
