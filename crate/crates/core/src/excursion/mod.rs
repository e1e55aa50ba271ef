//! Random path and random tree generators.
//!
//! All generators are deterministic functions of a [`SeedSpec`]. Paths are
//! nonnegative excursions pinned to zero at both ends; trees come either
//! from excursion codings (Brownian case) or from critical Galton-Watson
//! trees with the canonical stable offspring law (see [`offspring`]).

mod offspring;

pub use offspring::{
    canonical_offspring_law, contour_path, discrete_height_survival, gw_tree_conditioned_height,
    gw_tree_conditioned_height_truncated, ito_excursion_above_height, ito_excursion_truncated,
    stream_level_census, DiscreteTree, GwBudget, GwTreeSample, ItoSample, LevelCensus,
    OffspringLaw,
};

use crate::seed::SeedSpec;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExcursionError {
    #[error("invalid excursion path: {0}")]
    InvalidPath(String),
    #[error("n_steps must be even and >= 2, got {0}")]
    BadStepCount(usize),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("alpha must lie in (1, 2], got {0}")]
    InvalidAlpha(f64),
    #[error("sampling budget exhausted after {attempts} attempts ({rejected_size} aborted for size)")]
    BudgetExhausted { attempts: u64, rejected_size: u64 },
}

type Result<T> = std::result::Result<T, ExcursionError>;

/// A nonnegative path sampled on a uniform grid, zero at both ends.
///
/// The continuous object it stands for is the linear interpolation of
/// `values` with spacing `dt`; tree queries treat it that way.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcursionPath {
    values: Vec<f64>,
    dt: f64,
    max_value: f64,
    max_step: f64,
}

impl ExcursionPath {
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(ExcursionError::NonPositive {
                name: "dt",
                value: dt,
            });
        }
        if values.len() < 2 {
            return Err(ExcursionError::InvalidPath(format!(
                "need at least 2 samples, got {}",
                values.len()
            )));
        }
        if values[0] != 0.0 || *values.last().unwrap() != 0.0 {
            return Err(ExcursionError::InvalidPath(
                "endpoints must be exactly 0".to_string(),
            ));
        }
        let mut max_value = 0.0f64;
        let mut max_step = 0.0f64;
        for (i, &v) in values.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(ExcursionError::InvalidPath(format!(
                    "value {v} at index {i} is negative or non-finite"
                )));
            }
            max_value = max_value.max(v);
            if i > 0 {
                max_step = max_step.max((v - values[i - 1]).abs());
            }
        }
        Ok(Self {
            values,
            dt,
            max_value,
            max_step,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of grid samples (always at least 2).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// `(len - 1) · dt`.
    pub fn duration(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.dt
    }

    /// Height of the coded tree.
    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    /// Largest one-step increment; the value resolution of the grid.
    pub fn max_step(&self) -> f64 {
        self.max_step
    }

    /// Path value at real time `t ∈ [0, duration]` by linear interpolation.
    pub fn value_at(&self, t: f64) -> f64 {
        let x = (t / self.dt).clamp(0.0, (self.values.len() - 1) as f64);
        let i = x.floor() as usize;
        if i + 1 >= self.values.len() {
            return self.values[self.values.len() - 1];
        }
        let frac = x - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// Simple ±1 random-walk bridge: partial sums of a uniformly shuffled
/// multiset of `n/2` up-steps and `n/2` down-steps. Length `n + 1`,
/// pinned to 0 at both ends.
pub fn random_walk_bridge<R: Rng>(n_steps: usize, rng: &mut R) -> Vec<i32> {
    debug_assert!(n_steps >= 2 && n_steps % 2 == 0);
    let mut steps: Vec<i32> = std::iter::repeat(1)
        .take(n_steps / 2)
        .chain(std::iter::repeat(-1).take(n_steps / 2))
        .collect();
    steps.shuffle(rng);
    let mut path = Vec::with_capacity(n_steps + 1);
    let mut s = 0;
    path.push(0);
    for st in steps {
        s += st;
        path.push(s);
    }
    path
}

/// Cyclic shift of a bridge at its first minimum: the increments are
/// re-read starting from the argmin, which turns the bridge into a
/// nonnegative excursion with the same increment multiset.
pub fn vervaat_shift(bridge: &[i32]) -> Vec<i32> {
    let n = bridge.len() - 1;
    debug_assert!(n >= 1 && bridge[0] == 0 && bridge[n] == 0);
    let mut m = 0;
    for (i, &b) in bridge.iter().enumerate().take(n) {
        if b < bridge[m] {
            m = i;
        }
    }
    let bm = bridge[m];
    (0..=n).map(|i| bridge[(m + i) % n] - bm).collect()
}

/// Discrete approximation of the normalized Brownian excursion: a ±1
/// random-walk bridge of `n_steps` steps, Vervaat-shifted at its argmin,
/// values scaled by `n_steps^{-1/2}`, grid spacing `1/n_steps` (duration 1).
pub fn normalized_brownian_excursion(n_steps: usize, seed: SeedSpec) -> Result<ExcursionPath> {
    if n_steps < 2 || n_steps % 2 != 0 {
        return Err(ExcursionError::BadStepCount(n_steps));
    }
    let mut rng = seed.rng();
    let bridge = random_walk_bridge(n_steps, &mut rng);
    let exc = vervaat_shift(&bridge);
    let scale = (n_steps as f64).sqrt().recip();
    let values: Vec<f64> = exc.into_iter().map(|v| v as f64 * scale).collect();
    ExcursionPath::new(values, 1.0 / n_steps as f64)
}

/// A Brownian path together with its `R = a + B - 2·min` transform.
#[derive(Debug, Clone)]
pub struct PitmanPath {
    /// Brownian samples starting at `a` (stopped at 0 when `a > 0`).
    pub bm: Vec<f64>,
    /// `R_t = a + B_t - 2·I_t`, `I` the running minimum of `bm`. `R_0 = 0`,
    /// `R ≥ 0` pathwise; for `a = 0` this is the transform whose law is the
    /// modulus of a three-dimensional Brownian motion from the origin.
    pub bessel: Vec<f64>,
    pub dt: f64,
    /// True when the Brownian path hit 0 before the horizon (`a > 0` only).
    pub killed: bool,
}

/// Simulate Brownian motion from `a` with Gaussian increments of variance
/// `dx` per step, until it hits 0 (when `a > 0`) or reaches `horizon`, and
/// return it with its `a + B - 2I` transform.
pub fn pitman_path(a: f64, horizon: f64, dx: f64, seed: SeedSpec) -> Result<PitmanPath> {
    if !(dx > 0.0) {
        return Err(ExcursionError::NonPositive {
            name: "dx",
            value: dx,
        });
    }
    if !(horizon > 0.0) {
        return Err(ExcursionError::NonPositive {
            name: "horizon",
            value: horizon,
        });
    }
    if a < 0.0 {
        return Err(ExcursionError::InvalidPath(format!(
            "start level must be nonnegative, got {a}"
        )));
    }
    let mut rng = seed.rng();
    let steps = (horizon / dx).ceil() as usize;
    let sd = dx.sqrt();
    let mut bm = Vec::with_capacity(steps + 1);
    let mut bessel = Vec::with_capacity(steps + 1);
    let mut b = a;
    let mut min = a;
    let mut killed = false;
    bm.push(b);
    bessel.push(0.0);
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        b += sd * z;
        if a > 0.0 && b <= 0.0 {
            // stopped at 0: record the absorption sample exactly at 0
            bm.push(0.0);
            bessel.push(a);
            killed = true;
            break;
        }
        min = min.min(b);
        bm.push(b);
        bessel.push(a + b - 2.0 * min);
    }
    Ok(PitmanPath {
        bm,
        bessel,
        dt: dx,
        killed,
    })
}

/// Max attempts for rejection samplers before reporting budget exhaustion.
pub const RETRY_CAP: u64 = 10_000;

/// One attempted positive excursion: walk from 1 absorbed at 0, `None` if
/// it exceeds `max_len` samples first.
pub fn rw_positive_excursion_once<R: Rng>(rng: &mut R, max_len: usize) -> Option<Vec<i64>> {
    let mut path = vec![0i64, 1];
    let mut pos = 1i64;
    loop {
        pos += if rng.gen::<bool>() { 1 } else { -1 };
        path.push(pos);
        if pos == 0 {
            return Some(path);
        }
        if path.len() >= max_len {
            return None;
        }
    }
}

/// Positive excursion of simple random walk: `0, 1, ...` absorbed at the
/// first return to 0, rejected (and retried) if it exceeds `max_len`
/// samples. The shortest excursion `[0, 1, 0]` has probability 1/2.
pub fn rw_positive_excursion(seed: SeedSpec, max_len: usize) -> Result<Vec<i64>> {
    if max_len < 2 {
        return Err(ExcursionError::NonPositive {
            name: "max_len",
            value: max_len as f64,
        });
    }
    let mut rng = seed.rng();
    let mut rejected = 0u64;
    for _ in 0..RETRY_CAP {
        match rw_positive_excursion_once(&mut rng, max_len) {
            Some(path) => return Ok(path),
            None => rejected += 1,
        }
    }
    Err(ExcursionError::BudgetExhausted {
        attempts: RETRY_CAP,
        rejected_size: rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(k: u64) -> SeedSpec {
        SeedSpec::new(42, k)
    }

    #[test]
    fn path_invariants_enforced() {
        assert!(ExcursionPath::new(vec![0.0, 1.0, 0.0], 0.5).is_ok());
        assert!(ExcursionPath::new(vec![0.0], 0.5).is_err());
        assert!(ExcursionPath::new(vec![0.1, 1.0, 0.0], 0.5).is_err());
        assert!(ExcursionPath::new(vec![0.0, -0.1, 0.0], 0.5).is_err());
        assert!(ExcursionPath::new(vec![0.0, 1.0, 0.0], 0.0).is_err());
        assert!(ExcursionPath::new(vec![0.0, f64::NAN, 0.0], 1.0).is_err());
    }

    #[test]
    fn value_interpolation() {
        let p = ExcursionPath::new(vec![0.0, 1.0, 0.0], 1.0).unwrap();
        assert_eq!(p.value_at(0.5), 0.5);
        assert_eq!(p.value_at(1.0), 1.0);
        assert_eq!(p.value_at(1.5), 0.5);
        assert_eq!(p.duration(), 2.0);
        assert_eq!(p.max_value(), 1.0);
        assert_eq!(p.max_step(), 1.0);
    }

    #[test]
    fn two_step_excursion_is_the_single_tent() {
        let p = normalized_brownian_excursion(2, seed(0)).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.values()[0], 0.0);
        assert_eq!(p.values()[2], 0.0);
        assert!((p.values()[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((p.duration() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn excursion_is_nonnegative_and_pinned() {
        for k in 0..20 {
            let p = normalized_brownian_excursion(256, seed(k)).unwrap();
            assert_eq!(p.values()[0], 0.0);
            assert_eq!(*p.values().last().unwrap(), 0.0);
            assert!(p.values().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn vervaat_preserves_increment_multiset() {
        let mut rng = seed(3).rng();
        for _ in 0..50 {
            let bridge = random_walk_bridge(64, &mut rng);
            let exc = vervaat_shift(&bridge);
            let mut inc_b: Vec<i32> = bridge.windows(2).map(|w| w[1] - w[0]).collect();
            let mut inc_e: Vec<i32> = exc.windows(2).map(|w| w[1] - w[0]).collect();
            inc_b.sort_unstable();
            inc_e.sort_unstable();
            assert_eq!(inc_b, inc_e);
            assert!(exc.iter().all(|&v| v >= 0));
        }
    }

    #[test]
    fn excursion_determinism() {
        let a = normalized_brownian_excursion(512, seed(9)).unwrap();
        let b = normalized_brownian_excursion(512, seed(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_odd_or_tiny_step_counts() {
        assert!(normalized_brownian_excursion(0, seed(0)).is_err());
        assert!(normalized_brownian_excursion(7, seed(0)).is_err());
    }

    #[test]
    fn pitman_transform_invariants() {
        let p = pitman_path(0.0, 1.0, 1e-3, seed(1)).unwrap();
        assert_eq!(p.bessel[0], 0.0);
        assert!(!p.killed);
        // R_t >= B_t - I_t >= 0 pathwise
        let mut min = f64::INFINITY;
        for (i, &b) in p.bm.iter().enumerate() {
            min = min.min(b);
            assert!(p.bessel[i] >= b - min - 1e-12);
            assert!(p.bessel[i] >= -1e-12);
        }
    }

    #[test]
    fn pitman_kill_at_zero() {
        // from a low start, most paths die before the horizon
        let mut killed = 0;
        for k in 0..10 {
            let p = pitman_path(0.05, 10.0, 1e-3, seed(k)).unwrap();
            if p.killed {
                killed += 1;
                assert_eq!(*p.bm.last().unwrap(), 0.0);
            }
        }
        assert!(killed >= 8, "only {killed}/10 paths absorbed");
        assert!(pitman_path(1.0, 1.0, 0.0, seed(0)).is_err());
    }

    #[test]
    fn rw_excursion_shape() {
        for k in 0..50 {
            let e = rw_positive_excursion(seed(k), 1 << 20).unwrap();
            assert_eq!(e[0], 0);
            assert_eq!(*e.last().unwrap(), 0);
            assert!(e[1..e.len() - 1].iter().all(|&v| v >= 1));
        }
    }

    #[test]
    fn rw_excursion_shortest_has_probability_half() {
        let n = 10_000;
        let mut count = 0;
        for k in 0..n {
            let e = rw_positive_excursion(seed(1000 + k), 1 << 20).unwrap();
            if e.len() == 3 {
                count += 1;
            }
        }
        let frac = count as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.02, "frac = {frac}");
    }
}
