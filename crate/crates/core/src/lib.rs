//! Simulation and numerical-verification laboratory for excursion-coded
//! random trees.
//!
//! A nonnegative path `e` on `[0, ζ]` codes a rooted metric tree through
//! `d_e(s,t) = e(s) + e(t) - 2·min e on [s,t]`. This crate generates such
//! paths (Brownian excursions via Vervaat's transform, contour functions of
//! critical Galton-Watson trees with a stable offspring law, Pitman-type
//! transforms), indexes them for O(1) distance queries, measures balls and
//! level sets, builds stopping-time coverings for gauge-measure scans, and
//! checks the whole stack against closed-form branching-process formulas in
//! a deterministic, seed-addressed Monte Carlo suite.
//!
//! Modules:
//! - [`analytic`]: closed forms and integral-equation solvers for the
//!   branching mechanism `ψ(u) = c·u^α`, plus gauge functions.
//! - [`excursion`]: random path and random tree generators.
//! - [`tree`]: the excursion-coded metric-measure tree (RMQ index, balls,
//!   level sets, sampling, binary path files).
//! - [`hausdorff`]: crossing-time coverings, covering sums, density scans,
//!   and measure-comparison bounds.
//! - [`verify`]: named Monte Carlo experiments returning structured
//!   pass/fail reports.

pub mod analytic;
pub mod excursion;
pub mod hausdorff;
pub mod seed;
pub mod tree;
pub mod verify;

pub use analytic::{BranchingMechanism, GaugeFunction};
pub use excursion::ExcursionPath;
pub use seed::SeedSpec;
pub use tree::TreeIndex;

/// Ordered map over `0..n`: parallel when the `parallel` feature is on,
/// sequential otherwise. Results are collected in index order either way, so
/// downstream reductions are independent of scheduling and worker count.
pub fn ordered_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}
