//! Gauge-measure machinery: crossing-time coverings, covering sums, density
//! scans, and the two-sided measure-comparison bounds.
//!
//! Coverings come from the dyadic crossing construction: from a base value,
//! record the successive times at which the path moves by exactly `2^{-n}`;
//! consecutive crossing intervals cover the whole time axis and each one
//! codes a tree piece of diameter at most `4·2^{-n}`. Crossings are detected
//! at grid resolution and refined by linear interpolation, which is exact
//! for the piecewise-linear path model, so the `4·2^{-n}` bound is asserted,
//! not assumed. Element diameters are computed exactly by the two-sweep
//! farthest-point method rather than bounded.
//!
//! Density scans tabulate `μ(B(x, 2^{-n}))/g(2^{-n})` for sampled points and
//! a range of `n`; the comparison bounds turn an everywhere-bounded density
//! table into measure bounds with constants `(2c)^{-1}` and `2c³` from the
//! doubling constant `c` of the gauge.

use crate::analytic::{BranchingMechanism, GaugeFunction};
use crate::excursion::{ito_excursion_above_height, ExcursionPath, GwBudget};
use crate::seed::SeedSpec;
use crate::tree::{LevelSetAtoms, TreeIndex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HausdorffError {
    #[error("2^-{n} is below the path resolution cap ({cap:.3e}); use a coarser scale")]
    ResolutionCap { n: i32, cap: f64 },
    #[error("covering element diameter {diam:.6e} outside gauge domain (r_max {r_max:.6e})")]
    DiameterOutsideGauge { diam: f64, r_max: f64 },
    #[error("{0}")]
    BadInput(String),
    #[error(transparent)]
    Analytic(#[from] crate::analytic::AnalyticError),
    #[error(transparent)]
    Excursion(#[from] crate::excursion::ExcursionError),
    #[error(transparent)]
    Tree(#[from] crate::tree::TreeError),
}

type Result<T> = std::result::Result<T, HausdorffError>;

/// Default ratio between the crossing scale `2^{-n}` and the path's largest
/// one-step increment. Below this the discrete path no longer resolves the
/// crossing statistics faithfully.
pub const DEFAULT_RESOLUTION_FACTOR: f64 = 16.0;

/// Successive times at which the path moves by exactly `2^{-n}` from its
/// value at the previous crossing; `times[0] = 0` with base value 0.
#[derive(Debug, Clone)]
pub struct CrossingTimes {
    pub n: i32,
    /// `2^{-n}`
    pub h: f64,
    pub times: Vec<f64>,
    /// base value at each crossing time, in units of `h`
    pub levels: Vec<i64>,
}

impl CrossingTimes {
    /// Number of crossings after the initial time.
    pub fn count(&self) -> usize {
        self.times.len() - 1
    }
}

fn check_resolution(path: &ExcursionPath, n: i32, factor: f64) -> Result<f64> {
    let h = (-n as f64).exp2();
    let cap = factor * path.max_step();
    if h < cap {
        return Err(HausdorffError::ResolutionCap { n, cap });
    }
    Ok(h)
}

/// Crossing times of `idx` at scale `2^{-n}`, requiring
/// `2^{-n} ≥ factor·max_step`. With `factor > 1` at most one crossing can
/// occur per grid cell, so interpolation refinement is exact for the
/// polyline path.
pub fn crossing_times_with_factor(
    idx: &TreeIndex,
    n: i32,
    factor: f64,
) -> Result<CrossingTimes> {
    let path = idx.path();
    let h = check_resolution(path, n, factor)?;
    let v = path.values();
    let dt = path.dt();
    let mut times = vec![0.0];
    let mut levels = vec![0i64];
    let mut base_j = 0i64;
    let mut prev_t = 0.0;
    let mut prev_v = v[0];
    for (i, &vi) in v.iter().enumerate().skip(1) {
        let ti = i as f64 * dt;
        let dev = vi - base_j as f64 * h;
        if dev.abs() >= h {
            let dir = if dev > 0.0 { 1 } else { -1 };
            let target = (base_j + dir) as f64 * h;
            let t_star = if (vi - prev_v).abs() > 0.0 {
                prev_t + (ti - prev_t) * (target - prev_v) / (vi - prev_v)
            } else {
                ti
            };
            base_j += dir;
            times.push(t_star);
            levels.push(base_j);
        }
        prev_t = ti;
        prev_v = vi;
    }
    Ok(CrossingTimes {
        n,
        h,
        times,
        levels,
    })
}

/// [`crossing_times_with_factor`] at the default resolution factor.
pub fn crossing_times(idx: &TreeIndex, n: i32) -> Result<CrossingTimes> {
    crossing_times_with_factor(idx, n, DEFAULT_RESOLUTION_FACTOR)
}

/// One element of a covering: a time interval and the exact tree diameter
/// of the piece it codes.
#[derive(Debug, Clone, Copy)]
pub struct CoverElement {
    pub start: f64,
    pub end: f64,
    pub diameter: f64,
}

/// A covering of (part of) the tree by crossing-time intervals at dyadic
/// scale `2^{-n}`.
#[derive(Debug, Clone)]
pub struct Covering {
    pub scale_n: i32,
    pub elements: Vec<CoverElement>,
}

impl Covering {
    /// Do the elements cover every grid time of `path` (optionally only
    /// those whose value lies in `band`)?
    pub fn covers_grid(&self, path: &ExcursionPath, band: Option<(f64, f64)>) -> bool {
        let dt = path.dt();
        'outer: for (i, &v) in path.values().iter().enumerate() {
            if let Some((lo, hi)) = band {
                if v < lo || v > hi {
                    continue;
                }
            }
            let t = i as f64 * dt;
            for e in &self.elements {
                if t >= e.start - 1e-12 && t <= e.end + 1e-12 {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

/// Farthest point of the coded piece `[t0, t1]` from the point coded by
/// `t_ref ∈ [t0, t1]`, by two running-minimum sweeps over grid candidates
/// plus the interpolated endpoints. Returns `(distance, time)`.
fn farthest_from(path: &ExcursionPath, t_ref: f64, t0: f64, t1: f64) -> (f64, f64) {
    let v = path.values();
    let dt = path.dt();
    let e_ref = path.value_at(t_ref);
    let mut best = (0.0f64, t_ref);
    let mut consider = |d: f64, t: f64| {
        if d > best.0 {
            best = (d, t);
        }
    };
    // rightward sweep over grid points in (t_ref, t1], then the endpoint t1
    let mut m = e_ref;
    let i_start = (t_ref / dt).ceil() as usize;
    let i_end = ((t1 / dt).floor() as usize).min(v.len() - 1);
    let mut i = i_start;
    while i <= i_end {
        let t = i as f64 * dt;
        if t > t1 {
            break;
        }
        m = m.min(v[i]);
        consider(e_ref + v[i] - 2.0 * m, t);
        i += 1;
    }
    let e1 = path.value_at(t1);
    m = m.min(e1);
    consider(e_ref + e1 - 2.0 * m, t1);
    // leftward sweep over grid points [t0, t_ref), then the endpoint t0
    let mut m = e_ref;
    let j_end = (t0 / dt).ceil() as usize;
    let j_start = (t_ref / dt).floor() as usize;
    let mut j = j_start as i64;
    while j >= j_end as i64 {
        let t = j as f64 * dt;
        if t >= t0 && t <= t_ref {
            m = m.min(v[j as usize]);
            consider(e_ref + v[j as usize] - 2.0 * m, t);
        }
        j -= 1;
    }
    let e0 = path.value_at(t0);
    m = m.min(e0);
    consider(e_ref + e0 - 2.0 * m, t0);
    best
}

/// Exact tree diameter of the piece coded by `[t0, t1]`: farthest point
/// from `t0`, then farthest from that point.
pub fn interval_diameter(path: &ExcursionPath, t0: f64, t1: f64) -> f64 {
    if t1 <= t0 {
        return 0.0;
    }
    let (_, s_star) = farthest_from(path, t0, t0, t1);
    farthest_from(path, s_star, t0, t1).0
}

/// Covering by consecutive crossing intervals (plus the tail interval up to
/// the duration), optionally filtered to elements whose base value lies in
/// `band`. Every element's diameter is computed exactly and asserted
/// `≤ 4·2^{-n}`.
pub fn crossing_covering(
    idx: &TreeIndex,
    n: i32,
    band: Option<(f64, f64)>,
) -> Result<Covering> {
    crossing_covering_with_factor(idx, n, band, DEFAULT_RESOLUTION_FACTOR)
}

/// [`crossing_covering`] with an explicit resolution factor (scans on
/// genuinely discrete trees use a smaller factor; the bound stays exact).
pub fn crossing_covering_with_factor(
    idx: &TreeIndex,
    n: i32,
    band: Option<(f64, f64)>,
    factor: f64,
) -> Result<Covering> {
    let crossings = crossing_times_with_factor(idx, n, factor)?;
    let path = idx.path();
    let h = crossings.h;
    let mut elements = Vec::with_capacity(crossings.times.len());
    let bound = 4.0 * h * (1.0 + 1e-9);
    for k in 0..crossings.times.len() {
        let start = crossings.times[k];
        let end = if k + 1 < crossings.times.len() {
            crossings.times[k + 1]
        } else {
            path.duration()
        };
        if let Some((lo, hi)) = band {
            let base = crossings.levels[k] as f64 * h;
            if base < lo || base > hi {
                continue;
            }
        }
        let diameter = interval_diameter(path, start, end);
        assert!(
            diameter <= bound,
            "covering diameter {diameter} exceeds 4·2^-{n} = {bound}"
        );
        elements.push(CoverElement {
            start,
            end,
            diameter,
        });
    }
    Ok(Covering {
        scale_n: n,
        elements,
    })
}

/// Level-set covering at height `a`: alternating stopping times
/// `T_{2k}` (hit `a`) and `T_{2k+1}` (move `2^{-n}` away from `a`), elements
/// `[T_{2k}, T_{2k+1}]`.
pub fn level_crossing_covering(idx: &TreeIndex, a: f64, n: i32) -> Result<Covering> {
    let path = idx.path();
    let h = check_resolution(path, n, DEFAULT_RESOLUTION_FACTOR)?;
    if !(h < a) {
        return Err(HausdorffError::BadInput(format!(
            "need 2^-n < a, got h = {h}, a = {a}"
        )));
    }
    let v = path.values();
    let dt = path.dt();
    let mut elements = Vec::new();
    let bound = 4.0 * h * (1.0 + 1e-9);
    let mut waiting_for_hit = true;
    let mut open_start = 0.0f64;
    let mut prev_t = 0.0;
    let mut prev_v = v[0];
    for (i, &vi) in v.iter().enumerate().skip(1) {
        let ti = i as f64 * dt;
        if waiting_for_hit {
            if (prev_v - a) * (vi - a) <= 0.0 && (prev_v != vi || vi == a) {
                // crossed (or touched) the level
                let t_star = if vi == prev_v {
                    ti
                } else {
                    prev_t + (ti - prev_t) * (a - prev_v) / (vi - prev_v)
                };
                open_start = t_star;
                waiting_for_hit = false;
                // fall through: the same cell cannot also deviate by h
            }
        } else if (vi - a).abs() >= h {
            let target = if vi > a { a + h } else { a - h };
            let t_star = if vi == prev_v {
                ti
            } else {
                prev_t + (ti - prev_t) * (target - prev_v) / (vi - prev_v)
            };
            let diameter = interval_diameter(path, open_start, t_star);
            assert!(
                diameter <= bound,
                "level covering diameter {diameter} exceeds {bound}"
            );
            elements.push(CoverElement {
                start: open_start,
                end: t_star,
                diameter,
            });
            waiting_for_hit = true;
        }
        prev_t = ti;
        prev_v = vi;
    }
    Ok(Covering {
        scale_n: n,
        elements,
    })
}

/// `Σ g(diam)` over elements with positive diameter. Errors if any positive
/// diameter falls outside the gauge's domain.
pub fn covering_sum(cov: &Covering, gauge: &GaugeFunction) -> Result<f64> {
    let mut sum = 0.0;
    for e in &cov.elements {
        if e.diameter <= 0.0 {
            continue;
        }
        if e.diameter >= gauge.r_max() {
            return Err(HausdorffError::DiameterOutsideGauge {
                diam: e.diameter,
                r_max: gauge.r_max(),
            });
        }
        sum += gauge.eval(e.diameter)?;
    }
    Ok(sum)
}

/// Which measure a density scan reads.
pub enum DensityMeasure<'a> {
    /// Mass measure; `points` are grid indices, balls measured with the
    /// given subsampling stride.
    Mass { stride: usize },
    /// Level measure; `points` are indices into `atoms`.
    Level { atoms: &'a LevelSetAtoms },
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DensityQuantiles {
    pub n: i32,
    pub median: f64,
    pub q90: f64,
    pub max: f64,
}

/// Ratio table `μ(B(x, 2^{-n}))/g(2^{-n})` over sampled points and scales.
#[derive(Debug, Clone)]
pub struct DensityStats {
    pub n_values: Vec<i32>,
    /// sampled point ids (grid indices or atom indices)
    pub point_ids: Vec<usize>,
    /// `ratios[p][k]` for point `p` at `n_values[k]`
    pub ratios: Vec<Vec<f64>>,
    pub quantiles: Vec<DensityQuantiles>,
}

impl DensityStats {
    /// Empirical limsup proxy for one point: max over the largest
    /// `min(3, len)` scales.
    pub fn limsup_proxy(&self, point: usize) -> f64 {
        let row = &self.ratios[point];
        let take = row.len().min(3);
        row[row.len() - take..]
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Tabulate `μ(B(x, 2^{-n}))/g(2^{-n})` for each sampled point and each `n`
/// in `n_range`, with per-`n` median/90%/max quantiles.
pub fn density_scan(
    idx: &TreeIndex,
    measure: &DensityMeasure<'_>,
    points: &[usize],
    gauge: &GaugeFunction,
    n_range: std::ops::RangeInclusive<i32>,
) -> Result<DensityStats> {
    if points.is_empty() {
        return Err(HausdorffError::BadInput("no points sampled".to_string()));
    }
    let n_values: Vec<i32> = n_range.collect();
    if n_values.is_empty() {
        return Err(HausdorffError::BadInput("empty n range".to_string()));
    }
    let mut ratios = vec![Vec::with_capacity(n_values.len()); points.len()];
    for &n in &n_values {
        let r = (-n as f64).exp2();
        let g = gauge.eval(r)?;
        for (p, &pt) in points.iter().enumerate() {
            let mu = match measure {
                DensityMeasure::Mass { stride } => idx.mass_ball(pt, r, *stride),
                DensityMeasure::Level { atoms } => atoms.ball_weight(pt, r),
            };
            ratios[p].push(mu / g);
        }
    }
    let mut quantiles = Vec::with_capacity(n_values.len());
    for (k, &n) in n_values.iter().enumerate() {
        let mut col: Vec<f64> = ratios.iter().map(|row| row[k]).collect();
        col.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q = |f: f64| col[((col.len() - 1) as f64 * f).round() as usize];
        quantiles.push(DensityQuantiles {
            n,
            median: q(0.5),
            q90: q(0.9),
            max: *col.last().unwrap(),
        });
    }
    Ok(DensityStats {
        n_values,
        point_ids: points.to_vec(),
        ratios,
        quantiles,
    })
}

/// Measure-comparison bounds from a density table: if every point's limsup
/// proxy is `≤ threshold`, the gauge measure is at least
/// `(2c)^{-1}·threshold^{-1}·total_mass`; if every proxy is `≥ threshold`,
/// it is at most `2c³·threshold^{-1}·total_mass`. Either side may be absent.
pub fn hausdorff_bounds(
    stats: &DensityStats,
    total_mass: f64,
    c_g: f64,
    threshold: f64,
) -> Result<(Option<f64>, Option<f64>)> {
    if stats.ratios.is_empty() {
        return Err(HausdorffError::BadInput("empty density table".to_string()));
    }
    if !(c_g > 1.0) || !(threshold > 0.0) {
        return Err(HausdorffError::BadInput(format!(
            "need c_g > 1 and threshold > 0, got {c_g}, {threshold}"
        )));
    }
    let proxies: Vec<f64> = (0..stats.ratios.len())
        .map(|p| stats.limsup_proxy(p))
        .collect();
    let lower = if proxies.iter().all(|&x| x <= threshold) {
        Some(total_mass / (2.0 * c_g * threshold))
    } else {
        None
    };
    let upper = if proxies.iter().all(|&x| x >= threshold) {
        Some(2.0 * c_g.powi(3) * total_mass / threshold)
    } else {
        None
    };
    Ok((lower, upper))
}

/// Ensemble parameters for [`conjecture_scan`].
#[derive(Debug, Clone, Copy)]
pub struct ConjectureEnsemble {
    pub n_scale: u32,
    pub c_height: f64,
    pub n_trees: usize,
    pub budget: GwBudget,
    pub seed: SeedSpec,
    /// crossing resolution factor (the scan works on genuinely discrete
    /// trees, so factors below the default are meaningful)
    pub resolution_factor: f64,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ConjectureRow {
    pub u: f64,
    pub n: i32,
    /// ensemble mean of `Σ h_u(diam)` over the crossing covering at scale n
    pub covering_sum: f64,
    /// whether `Σ_n g(2^{-n})^{-(α-1)}` converges for this `u`
    /// (iff `u·(α-1) > 1` for this gauge family)
    pub series_converges: bool,
}

/// Covering-sum curves `S_n(u)` over an ensemble of simulated stable trees,
/// with the analytic convergence indicator of the associated series. Output
/// is exploratory data; no verdict is attached.
pub fn conjecture_scan(
    mech: &BranchingMechanism,
    u_grid: &[f64],
    n_range: std::ops::RangeInclusive<i32>,
    ens: &ConjectureEnsemble,
) -> Result<Vec<ConjectureRow>> {
    let alpha = mech.alpha();
    if !(alpha < 2.0) {
        return Err(HausdorffError::BadInput(
            "conjecture scans need 1 < alpha < 2".to_string(),
        ));
    }
    let n_values: Vec<i32> = n_range.collect();
    if n_values.is_empty() || u_grid.is_empty() || ens.n_trees == 0 {
        return Err(HausdorffError::BadInput("empty scan grid".to_string()));
    }
    let gauges: Vec<GaugeFunction> = u_grid
        .iter()
        .map(|&u| GaugeFunction::stable_mass(alpha, u))
        .collect::<std::result::Result<_, _>>()?;
    // sums[u][n] accumulated over trees
    let mut sums = vec![vec![0.0f64; n_values.len()]; u_grid.len()];
    for tree_i in 0..ens.n_trees {
        let sample = ito_excursion_above_height(
            mech,
            ens.c_height,
            ens.n_scale,
            ens.budget,
            ens.seed.substream(tree_i as u64),
        )?;
        let idx = TreeIndex::build_index(sample.path);
        for (k, &n) in n_values.iter().enumerate() {
            let cov = crossing_covering_with_factor(&idx, n, None, ens.resolution_factor)?;
            for (j, g) in gauges.iter().enumerate() {
                sums[j][k] += covering_sum(&cov, g)?;
            }
        }
    }
    let mut rows = Vec::with_capacity(u_grid.len() * n_values.len());
    for (j, &u) in u_grid.iter().enumerate() {
        let converges = u * (alpha - 1.0) > 1.0;
        for (k, &n) in n_values.iter().enumerate() {
            rows.push(ConjectureRow {
                u,
                n,
                covering_sum: sums[j][k] / ens.n_trees as f64,
                series_converges: converges,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excursion::normalized_brownian_excursion;

    /// Exact dyadic tent: height `2^{-1}`, slope ±1, duration 1, grid
    /// `2^{-k}`; all sample values are exact binary fractions.
    fn dyadic_tent(k: u32) -> ExcursionPath {
        let half = 1usize << (k - 1);
        let dt = (k as f64 * -1.0).exp2();
        let mut v: Vec<f64> = (0..=half).map(|i| i as f64 * dt).collect();
        v.extend((0..half).rev().map(|i| i as f64 * dt));
        ExcursionPath::new(v, dt).unwrap()
    }

    /// Tent of height 1 over duration 2 with an exact dyadic grid.
    fn unit_tent(k: u32) -> ExcursionPath {
        let n = 1usize << k;
        let dt = (k as f64 * -1.0).exp2();
        let mut v: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();
        v.extend((0..n).rev().map(|i| i as f64 * dt));
        ExcursionPath::new(v, dt).unwrap()
    }

    #[test]
    fn tent_crossings_at_scale_one() {
        // height-1 tent at n = 0: up-cross at the apex, down-cross at the end
        let idx = TreeIndex::build_index(unit_tent(8));
        let c = crossing_times(&idx, 0).unwrap();
        assert_eq!(c.count(), 2);
        assert_eq!(c.levels, vec![0, 1, 0]);
        assert!((c.times[1] - 1.0).abs() < 1e-12);
        assert!((c.times[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_count_lower_bound() {
        // a path of height 1 must climb through every dyadic level
        let idx = TreeIndex::build_index(unit_tent(10));
        for n in 0..=4 {
            let c = crossing_times(&idx, n).unwrap();
            assert!(c.count() >= 1 << n);
        }
    }

    #[test]
    fn resolution_cap_enforced() {
        let idx = TreeIndex::build_index(unit_tent(8)); // max_step = 2^-8
        assert!(crossing_times(&idx, 8).is_err());
        assert!(crossing_times(&idx, 4).is_ok());
        assert!(crossing_times_with_factor(&idx, 6, 2.0).is_ok());
    }

    #[test]
    fn covering_covers_everything_and_respects_bound() {
        let idx = TreeIndex::build_index(unit_tent(10));
        let cov = crossing_covering(&idx, 1, None).unwrap();
        assert!(cov.covers_grid(idx.path(), None));
        for e in &cov.elements {
            assert!(e.diameter <= 4.0 * 0.5 + 1e-12);
        }
        // band filter keeps only elements whose base value lies in the band
        let cov = crossing_covering(&idx, 2, Some((0.5, 1.0))).unwrap();
        assert!(!cov.elements.is_empty());
        assert!(cov.covers_grid(idx.path(), Some((0.6, 0.9))));
    }

    #[test]
    fn brownian_covering_diameters_within_bound() {
        // max_step = 2^-9, so the default factor 16 admits n <= 5
        let path = normalized_brownian_excursion(1 << 18, SeedSpec::new(21, 0)).unwrap();
        let idx = TreeIndex::build_index(path);
        for n in 2..=5 {
            let cov = crossing_covering(&idx, n, None).unwrap();
            let h = (-n as f64).exp2();
            for e in &cov.elements {
                assert!(e.diameter <= 4.0 * h * (1.0 + 1e-9));
            }
            assert!(cov.covers_grid(idx.path(), None));
        }
    }

    #[test]
    fn tent_covering_sum_recovers_length() {
        // dyadic tent = segment of length 1/2, double-covered by crossing
        // intervals: Σ diam = 1 at every exact scale.
        let idx = TreeIndex::build_index(dyadic_tent(16));
        let gauge = GaugeFunction::generic(1.0, 0.0, 0.0).unwrap();
        for n in [4, 8, 12] {
            let cov = crossing_covering(&idx, n, None).unwrap();
            let s = covering_sum(&cov, &gauge).unwrap();
            assert!((s - 1.0).abs() < 0.02, "n={n}: sum = {s}");
        }
    }

    #[test]
    fn level_covering_on_tent() {
        // tent of height 1, level a = 0.5, n = 2: one element per passage
        // through the level (up and down), each of diameter ≤ 4·2^-n
        let idx = TreeIndex::build_index(unit_tent(10));
        let cov = level_crossing_covering(&idx, 0.5, 2).unwrap();
        assert_eq!(cov.elements.len(), 2);
        for e in &cov.elements {
            assert!(e.diameter <= 1.0 + 1e-12);
        }
        // the two level-set times 0.5 and 1.5 are covered
        assert!(cov
            .elements
            .iter()
            .any(|e| e.start <= 0.5 && 0.5 <= e.end + 1e-9));
        assert!(cov
            .elements
            .iter()
            .any(|e| e.start <= 1.5 + 1e-9 && 1.5 <= e.end + 1e-9));
        // above the height: empty
        let cov = level_crossing_covering(&idx, 1.5, 2).unwrap();
        assert!(cov.elements.is_empty());
        // h >= a rejected
        assert!(level_crossing_covering(&idx, 0.1, 2).is_err());
    }

    #[test]
    fn covering_sum_domain_guard() {
        let idx = TreeIndex::build_index(unit_tent(10));
        let cov = crossing_covering(&idx, 1, None).unwrap(); // diameters ~ 1
        let gauge = GaugeFunction::brownian_mass(); // r_max ~ 0.066
        assert!(matches!(
            covering_sum(&cov, &gauge),
            Err(HausdorffError::DiameterOutsideGauge { .. })
        ));
        // empty covering sums to zero
        let empty = Covering {
            scale_n: 3,
            elements: vec![],
        };
        assert_eq!(covering_sum(&empty, &gauge).unwrap(), 0.0);
    }

    #[test]
    fn interval_diameter_on_known_pieces() {
        let path = unit_tent(10);
        // whole tent: the two farthest points are the apex and either end
        assert!((interval_diameter(&path, 0.0, 2.0) - 1.0).abs() < 1e-12);
        // one flank codes a segment of length 1/2... the [0, 1] piece is a
        // segment of length 1 (root to apex)
        assert!((interval_diameter(&path, 0.0, 1.0) - 1.0).abs() < 1e-12);
        assert!((interval_diameter(&path, 0.5, 1.0) - 0.5).abs() < 1e-12);
        // both flanks around the apex code the same segment
        assert!((interval_diameter(&path, 0.5, 1.5) - 0.5).abs() < 1e-12);
        assert_eq!(interval_diameter(&path, 0.7, 0.7), 0.0);
    }

    #[test]
    fn density_scan_self_normalizing_ratios_constant() {
        // on the dyadic tent the ball around the apex has mass exactly 2ε,
        // so with gauge r the ratios are constant (= 2) across n
        let idx = TreeIndex::build_index(dyadic_tent(14));
        let apex = idx.path().len() / 2;
        let gauge = GaugeFunction::generic(1.0, 0.0, 0.0).unwrap();
        let stats = density_scan(
            &idx,
            &DensityMeasure::Mass { stride: 1 },
            &[apex],
            &gauge,
            3..=6,
        )
        .unwrap();
        for q in &stats.quantiles {
            assert!((q.median - 2.0).abs() < 0.05, "n={}: {}", q.n, q.median);
        }
        assert!((stats.limsup_proxy(0) - 2.0).abs() < 0.05);
    }

    #[test]
    fn density_scan_rejects_empty_inputs() {
        let idx = TreeIndex::build_index(dyadic_tent(6));
        let gauge = GaugeFunction::generic(1.0, 0.0, 0.0).unwrap();
        assert!(density_scan(
            &idx,
            &DensityMeasure::Mass { stride: 1 },
            &[],
            &gauge,
            3..=4
        )
        .is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 5..=3;
        assert!(density_scan(
            &idx,
            &DensityMeasure::Mass { stride: 1 },
            &[1],
            &gauge,
            empty
        )
        .is_err());
    }

    #[test]
    fn bounds_reproduce_comparison_constants() {
        // all ratios ≡ 1, c_g = 4, total = 1  ⟹  lower 1/8, upper 128
        let stats = DensityStats {
            n_values: vec![4, 5, 6],
            point_ids: vec![0, 1],
            ratios: vec![vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]],
            quantiles: vec![],
        };
        let (lo, hi) = hausdorff_bounds(&stats, 1.0, 4.0, 1.0).unwrap();
        assert_eq!(lo, Some(0.125));
        assert_eq!(hi, Some(128.0));
        // threshold 2 halves the lower bound
        let (lo2, _) = hausdorff_bounds(&stats, 1.0, 4.0, 2.0).unwrap();
        assert_eq!(lo2, Some(0.0625));
        // mixed ratios give a one-sided (or empty) answer
        let stats = DensityStats {
            n_values: vec![4, 5, 6],
            point_ids: vec![0, 1],
            ratios: vec![vec![0.5, 0.5, 0.5], vec![3.0, 3.0, 3.0]],
            quantiles: vec![],
        };
        let (lo, hi) = hausdorff_bounds(&stats, 1.0, 4.0, 1.0).unwrap();
        assert_eq!(lo, None);
        assert_eq!(hi, None);
        assert!(hausdorff_bounds(&stats, 1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn series_indicator_and_scan_shape() {
        let mech = BranchingMechanism::canonical_limit(1.5).unwrap();
        let ens = ConjectureEnsemble {
            n_scale: 128,
            c_height: 1.0,
            n_trees: 2,
            budget: GwBudget {
                max_attempts: 100_000,
                ..GwBudget::default()
            },
            seed: SeedSpec::new(5, 0),
            resolution_factor: 2.0,
        };
        let rows = conjecture_scan(&mech, &[0.0, 4.0], 6..=6, &ens).unwrap();
        // u·(α-1): 0 diverges, 4·0.5 = 2 converges
        assert!(!rows.iter().find(|r| r.u == 0.0).unwrap().series_converges);
        assert!(rows.iter().find(|r| r.u == 4.0).unwrap().series_converges);
        // below e^{-e} the log-log factor exceeds 1, so h_u (hence S_n(u))
        // is nondecreasing in u on the admissible diameter range
        let s0 = rows.iter().find(|r| r.u == 0.0).unwrap().covering_sum;
        let s4 = rows.iter().find(|r| r.u == 4.0).unwrap().covering_sum;
        assert!(s4 >= s0 && s0 > 0.0, "s0 = {s0}, s4 = {s4}");
    }
}
