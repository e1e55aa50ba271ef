//! Batch front-end: experiment configuration, seeding, execution, and
//! emission of machine-readable results and plot-ready curves.
//!
//! Exit codes: 0 all checks pass, 1 any experiment failure (or runtime
//! error), 2 usage error. Worker count affects wall time only; results are
//! identical for any worker count and any rerun with the same seed.

mod config;
mod emit;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use config::{EffectiveConfig, GaugeSpec};
use std::path::PathBuf;
use std::process::ExitCode;
use treelab_core::excursion::{ito_excursion_above_height, normalized_brownian_excursion, GwBudget};
use treelab_core::hausdorff::{self, ConjectureEnsemble, DensityMeasure};
use treelab_core::tree::{dump_path, TreeIndex};
use treelab_core::verify::{self, SuiteConfig};
use treelab_core::{BranchingMechanism, SeedSpec};

#[derive(Parser)]
#[command(name = "treelab", version, about = "Excursion-coded random tree laboratory")]
struct Cli {
    #[command(flatten)]
    globals: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Stability index in (1, 2]
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Mechanism constant (analytic commands; tree experiments use 1/alpha)
    #[arg(long, global = true)]
    c: Option<f64>,
    /// Master seed; every output is a pure function of it
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores); never changes results
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Scale of simulated trees / path steps
    #[arg(long, global = true)]
    n_scale: Option<u32>,
    /// Replicates / tree count
    #[arg(long, global = true)]
    n_reps: Option<usize>,
    /// Sampled points per scan
    #[arg(long, global = true)]
    n_points: Option<usize>,
    /// Brownian time step
    #[arg(long, global = true)]
    dx: Option<f64>,
    /// Output file path
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Flat key=value config file; flags override file values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one excursion path and write it as a binary path file
    Simulate {
        /// brownian | stable
        #[arg(long, default_value = "brownian")]
        kind: String,
    },
    /// Run the verification suite (JSONL reports + JSON summary)
    Verify {
        /// Comma-separated experiment names (default: all)
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Use the fast smoke-test sizes
        #[arg(long)]
        smoke: bool,
    },
    /// Density-ratio table μ(B(x,2^-n))/g(2^-n) as CSV
    Density {
        /// brownian | stable
        #[arg(long, default_value = "brownian")]
        kind: String,
        /// mass | level
        #[arg(long, default_value = "mass")]
        measure: String,
        /// Level height for the level measure
        #[arg(long, default_value_t = 0.5)]
        level: f64,
        /// Atom survival margin for the level measure
        #[arg(long, default_value_t = 0.05)]
        eps_atom: f64,
        /// Gauge: brownian-mass | brownian-level | stable-mass:u |
        /// stable-level:u | generic:a,b,d
        #[arg(long, default_value = "brownian-mass")]
        gauge: String,
        #[arg(long, default_value_t = 6)]
        n_lo: i32,
        #[arg(long, default_value_t = 10)]
        n_hi: i32,
        /// Ball-mass subsampling stride
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Covering-sum curves S_n(u) over an ensemble of stable trees, as CSV
    Conjecture {
        /// Comma-separated log-log exponents u
        #[arg(long, value_delimiter = ',', default_value = "-1,0,1,2,4")]
        u_grid: Vec<f64>,
        #[arg(long, default_value_t = 6)]
        n_lo: i32,
        #[arg(long, default_value_t = 7)]
        n_hi: i32,
        /// Crossing resolution factor (2^-n >= factor·max_step)
        #[arg(long, default_value_t = 4.0)]
        resolution_factor: f64,
    },
    /// Re-measure the population-process scale constant κ
    Calibrate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::resolve(&cli.globals) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("usage error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build();
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli.command, &cfg)) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Returns whether every check passed (non-verify commands always pass).
fn run(command: &Command, cfg: &EffectiveConfig) -> Result<bool> {
    match command {
        Command::Simulate { kind } => {
            let mech = BranchingMechanism::new(cfg.alpha, cfg.c)?;
            let seed = SeedSpec::new(cfg.seed, 0);
            let path = match kind.as_str() {
                "brownian" => {
                    let steps = (cfg.n_scale as usize).max(2) & !1usize;
                    normalized_brownian_excursion(steps, seed)?
                }
                "stable" => {
                    ito_excursion_above_height(
                        &BranchingMechanism::canonical_limit(cfg.alpha)?,
                        1.0,
                        cfg.n_scale,
                        budget(cfg),
                        seed,
                    )?
                    .path
                }
                other => bail!("unknown path kind '{other}' (brownian | stable)"),
            };
            let out = cfg.require_out()?;
            let mut file = std::fs::File::create(&out)
                .with_context(|| format!("creating {}", out.display()))?;
            dump_path(&mut file, &path, &mech)?;
            eprintln!(
                "wrote {} ({} samples, duration {:.6})",
                out.display(),
                path.len(),
                path.duration()
            );
            Ok(true)
        }
        Command::Verify { only, smoke } => {
            let mut suite = SuiteConfig::new(cfg.alpha, cfg.seed);
            if *smoke {
                suite.sizes = verify::SuiteSizes::smoke();
            }
            if let Some(n) = cfg.n_scale_set {
                suite.sizes.rk_n_scale = n;
                suite.sizes.lb_n_scale = n;
                suite.sizes.pb_n_scale = n;
            }
            if let Some(r) = cfg.n_reps_set {
                suite.sizes.rk_reps = r;
                suite.sizes.cross_reps = r.max(1000);
            }
            if let Some(p) = cfg.n_points_set {
                suite.sizes.pb_points = p;
            }
            if let Some(dx) = cfg.dx_set {
                suite.sizes.pitman_dx = dx;
                suite.sizes.down_dx = dx;
            }
            let reports = verify::run_suite(&suite, only)?;
            for r in &reports {
                eprintln!(
                    "{:<32} {:>9} statistic {:.6} target {:.6} tol {:.2e} [{:.2}s]",
                    r.name,
                    match r.verdict {
                        verify::Verdict::Pass => "PASS",
                        verify::Verdict::Fail => "FAIL",
                    },
                    r.statistic,
                    r.target,
                    r.tolerance,
                    r.runtime_secs,
                );
            }
            let all_pass = reports.iter().all(|r| r.passed());
            if let Some(out) = &cfg.out {
                emit::write_jsonl(out, &reports, cfg)?;
                let summary = out.with_extension("summary.json");
                emit::write_summary(&summary, &reports, cfg)?;
                eprintln!("wrote {} and {}", out.display(), summary.display());
            }
            Ok(all_pass)
        }
        Command::Density {
            kind,
            measure,
            level,
            eps_atom,
            gauge,
            n_lo,
            n_hi,
            stride,
        } => {
            let gauge_spec: GaugeSpec = gauge.parse().map_err(|e: String| anyhow::anyhow!(e))?;
            let g = gauge_spec.build(cfg.alpha)?;
            let seed = SeedSpec::new(cfg.seed, 0);
            let mech = BranchingMechanism::canonical_limit(cfg.alpha)?;
            let path = match kind.as_str() {
                "brownian" => {
                    let steps = (cfg.n_scale as usize).max(2) & !1usize;
                    normalized_brownian_excursion(steps, seed)?
                }
                "stable" => {
                    ito_excursion_above_height(&mech, 1.0, cfg.n_scale, budget(cfg), seed)?.path
                }
                other => bail!("unknown path kind '{other}'"),
            };
            let idx = TreeIndex::build_index(path);
            let mut rng = SeedSpec::new(cfg.seed, 1).rng();
            let stats = match measure.as_str() {
                "mass" => {
                    let points: Vec<usize> =
                        (0..cfg.n_points).map(|_| idx.sample_mass_point(&mut rng)).collect();
                    hausdorff::density_scan(
                        &idx,
                        &DensityMeasure::Mass { stride: *stride },
                        &points,
                        &g,
                        *n_lo..=*n_hi,
                    )?
                }
                "level" => {
                    let atoms = idx.level_set(&mech, *level, *eps_atom)?;
                    if atoms.is_empty() {
                        bail!("no level atoms at a = {level}; lower the level or eps_atom");
                    }
                    let points: Vec<usize> = (0..cfg.n_points)
                        .map(|_| atoms.sample_level_point(&mut rng).expect("nonempty"))
                        .collect();
                    hausdorff::density_scan(
                        &idx,
                        &DensityMeasure::Level { atoms: &atoms },
                        &points,
                        &g,
                        *n_lo..=*n_hi,
                    )?
                }
                other => bail!("unknown measure '{other}' (mass | level)"),
            };
            let out = cfg.require_out()?;
            emit::write_density_csv(&out, &stats, cfg)?;
            eprintln!("wrote {}", out.display());
            Ok(true)
        }
        Command::Conjecture {
            u_grid,
            n_lo,
            n_hi,
            resolution_factor,
        } => {
            let mech = BranchingMechanism::canonical_limit(cfg.alpha)?;
            let ens = ConjectureEnsemble {
                n_scale: cfg.n_scale,
                c_height: 1.0,
                n_trees: cfg.n_reps,
                budget: budget(cfg),
                seed: SeedSpec::new(cfg.seed, 0),
                resolution_factor: *resolution_factor,
            };
            let rows = hausdorff::conjecture_scan(&mech, u_grid, *n_lo..=*n_hi, &ens)?;
            let out = cfg.require_out()?;
            emit::write_conjecture_csv(&out, &rows, cfg)?;
            eprintln!("wrote {}", out.display());
            Ok(true)
        }
        Command::Calibrate => {
            let fit = verify::calibrate_kappa(
                cfg.alpha,
                cfg.n_scale.min(100),
                cfg.n_reps,
                SeedSpec::new(cfg.seed, 0),
            )?;
            println!(
                "{}",
                serde_json::json!({
                    "kappa": fit.kappa,
                    "objective": fit.objective,
                    "stored_constant": verify::CALIBRATED_KAPPA,
                })
            );
            Ok(true)
        }
    }
}

fn budget(_cfg: &EffectiveConfig) -> GwBudget {
    GwBudget {
        max_vertices: 20_000_000,
        max_attempts: 200_000,
    }
}
