//! The excursion-coded metric-measure tree.
//!
//! A path `e` codes a tree through the pseudometric
//! `d_e(s,t) = e(s) + e(t) - 2·m_e(s,t)`, `m_e` the path minimum between `s`
//! and `t`. [`TreeIndex`] wraps a path with a sparse-table minimum index so
//! `d_e` is O(1) per pair; sweeping queries (ball masses, interval
//! diameters) use running minima instead, which costs the same and walks the
//! array sequentially.
//!
//! Measures: the mass measure is the grid measure `dt·#{samples}` (the image
//! of Lebesgue measure at grid resolution); the level measure at height `a`
//! puts weight `1/v(ε)` on the entry time of every excursion above `a` that
//! climbs `ε` higher, `v` the analytic height tail for the tree's mechanism.

mod io;
mod rmq;

pub use io::{load_path, dump_path, TreeIoError};
pub use rmq::SparseTable;

use crate::analytic::BranchingMechanism;
use crate::excursion::ExcursionPath;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("time {0} outside [0, {1}]")]
    TimeOutOfRange(f64, f64),
    #[error("level {a} not inside (0, height {height})")]
    LevelOutOfRange { a: f64, height: f64 },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("empty atom set")]
    EmptyAtoms,
    #[error(transparent)]
    Analytic(#[from] crate::analytic::AnalyticError),
}

type Result<T> = std::result::Result<T, TreeError>;

/// Immutable RMQ-indexed view of an excursion path.
pub struct TreeIndex {
    path: ExcursionPath,
    rmq: SparseTable,
}

impl TreeIndex {
    /// O(L log L) construction; all subsequent min queries are O(1).
    pub fn build_index(path: ExcursionPath) -> Self {
        let rmq = SparseTable::new(path.values());
        Self { path, rmq }
    }

    pub fn path(&self) -> &ExcursionPath {
        &self.path
    }

    pub fn height(&self) -> f64 {
        self.path.max_value()
    }

    pub fn duration(&self) -> f64 {
        self.path.duration()
    }

    /// Grid minimum on the inclusive index range.
    #[inline]
    pub fn min_idx(&self, i: usize, j: usize) -> f64 {
        let (l, r) = (i.min(j), i.max(j));
        self.path.values()[self.rmq.argmin(self.path.values(), l, r)]
    }

    /// Tree distance between two grid indices.
    #[inline]
    pub fn dist_idx(&self, i: usize, j: usize) -> f64 {
        let v = self.path.values();
        v[i] + v[j] - 2.0 * self.min_idx(i, j)
    }

    /// Path minimum `m_e(s,t)` between two real times, on the interpolated
    /// path.
    pub fn min_on(&self, s: f64, t: f64) -> Result<f64> {
        let dur = self.path.duration();
        for &x in &[s, t] {
            if !(0.0..=dur * (1.0 + 1e-12)).contains(&x) {
                return Err(TreeError::TimeOutOfRange(x, dur));
            }
        }
        let (lo, hi) = (s.min(t), s.max(t));
        let dt = self.path.dt();
        let mut m = self.path.value_at(lo).min(self.path.value_at(hi));
        let i0 = (lo / dt).ceil() as usize;
        let i1 = ((hi / dt).floor() as usize).min(self.path.len() - 1);
        if i0 <= i1 {
            m = m.min(self.min_idx(i0, i1));
        }
        Ok(m)
    }

    /// `d_e(s,t) = e(s) + e(t) - 2·m_e(s,t)` for real times; symmetric,
    /// zero exactly when the two times code the same tree point.
    pub fn dist(&self, s: f64, t: f64) -> Result<f64> {
        let m = self.min_on(s, t)?;
        Ok(self.path.value_at(s) + self.path.value_at(t) - 2.0 * m)
    }

    /// Mass of the ball of radius `eps` around the point coded by grid
    /// index `center`: `dt·stride·#{strided grid times within distance eps}`.
    ///
    /// Delegates to [`mass_ball_scan`]; `stride = 1` is exact at grid
    /// resolution, larger strides trade an error of at most `stride·dt` per
    /// ball-boundary crossing for an L/stride scan.
    pub fn mass_ball(&self, center: usize, eps: f64, stride: usize) -> f64 {
        mass_ball_scan(&self.path, center, eps, stride)
    }

    /// Level-set atoms at height `a` with survival margin `eps`, weighted by
    /// `1/v(eps)` for this mechanism.
    pub fn level_set(
        &self,
        mech: &BranchingMechanism,
        a: f64,
        eps: f64,
    ) -> Result<LevelSetAtoms> {
        level_set_scan(&self.path, mech, a, eps)
    }

    /// Local-time mass of the ball of radius `eps` around `atoms[center]`,
    /// i.e. the summed weight of atoms `t` with `m_e(center, t) ≥ a - eps/2`
    /// (equivalent to `d_e ≤ eps` on the level set).
    pub fn local_time_ball(&self, atoms: &LevelSetAtoms, center: usize, eps: f64) -> f64 {
        atoms.ball_weight(center, eps)
    }

    /// Excursions of the path above level `a` whose height above `a`
    /// exceeds `min_height`, shifted to start and end at 0, left to right.
    pub fn subtrees_above(&self, a: f64, min_height: f64) -> Vec<ExcursionPath> {
        subtrees_above_scan(&self.path, a, min_height)
    }

    /// A mass-measure-random vertex: a uniform grid index.
    pub fn sample_mass_point<R: Rng>(&self, rng: &mut R) -> usize {
        rng.gen_range(0..self.path.len())
    }
}

/// Ball mass around `center` by a running-minimum sweep (no index needed).
pub fn mass_ball_scan(path: &ExcursionPath, center: usize, eps: f64, stride: usize) -> f64 {
    assert!(stride >= 1);
    let v = path.values();
    let vc = v[center];
    let mut count = 0u64;
    // rightward sweep including the center itself
    let mut min = f64::INFINITY;
    let mut i = center;
    loop {
        min = min.min(v[i]);
        if vc + v[i] - 2.0 * min <= eps {
            count += 1;
        }
        i += stride;
        if i >= v.len() {
            break;
        }
    }
    // leftward sweep, excluding the center
    let mut min = vc;
    let mut i = center;
    while i >= stride {
        i -= stride;
        min = min.min(v[i]);
        if vc + v[i] - 2.0 * min <= eps {
            count += 1;
        }
    }
    path.dt() * stride as f64 * count as f64
}

/// Atoms of the level measure at height `a`: one entry time per excursion
/// above `a` that reaches `a + eps`, each carrying weight `1/v(eps)`.
///
/// `gap_min[i]` is the path minimum between atoms `i` and `i+1`, so the
/// tree distance between two atoms is `2a - 2·min(gap_min[i..j])` without
/// any index lookup.
#[derive(Debug, Clone)]
pub struct LevelSetAtoms {
    pub level: f64,
    pub eps: f64,
    /// common atom weight `1/v(eps)`
    pub weight: f64,
    /// grid indices of the entry times
    pub atom_idx: Vec<usize>,
    /// path minimum between consecutive atoms (`len = atoms - 1`)
    pub gap_min: Vec<f64>,
    dt: f64,
}

impl LevelSetAtoms {
    /// Assemble from parts, for callers that computed entry positions and
    /// gap minima by other means (e.g. streaming tree traversals).
    pub fn from_parts(
        level: f64,
        eps: f64,
        weight: f64,
        atom_idx: Vec<usize>,
        gap_min: Vec<f64>,
        dt: f64,
    ) -> Self {
        assert!(gap_min.len() + 1 == atom_idx.len() || atom_idx.is_empty());
        Self {
            level,
            eps,
            weight,
            atom_idx,
            gap_min,
            dt,
        }
    }

    pub fn len(&self) -> usize {
        self.atom_idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atom_idx.is_empty()
    }

    /// Total level-measure weight carried by the atoms.
    pub fn total_weight(&self) -> f64 {
        self.weight * self.atom_idx.len() as f64
    }

    pub fn atom_time(&self, i: usize) -> f64 {
        self.atom_idx[i] as f64 * self.dt
    }

    /// `m_e` between atoms `i` and `j`.
    pub fn meet_level(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.level;
        }
        let (l, r) = (i.min(j), i.max(j));
        self.gap_min[l..r].iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Summed weight of atoms within tree distance `eps` of atom `center`,
    /// through the meet criterion `m_e ≥ level - eps/2`.
    pub fn ball_weight(&self, center: usize, eps: f64) -> f64 {
        let cut = self.level - 0.5 * eps;
        let mut count = 1u64; // the center belongs to its own ball
        let mut m = f64::INFINITY;
        for g in &self.gap_min[center..] {
            m = m.min(*g);
            if m >= cut {
                count += 1;
            } else {
                break;
            }
        }
        let mut m = f64::INFINITY;
        for g in self.gap_min[..center].iter().rev() {
            m = m.min(*g);
            if m >= cut {
                count += 1;
            } else {
                break;
            }
        }
        self.weight * count as f64
    }

    /// A level-measure-random atom index (atoms carry equal weight).
    pub fn sample_level_point<R: Rng>(&self, rng: &mut R) -> Result<usize> {
        if self.atom_idx.is_empty() {
            return Err(TreeError::EmptyAtoms);
        }
        Ok(rng.gen_range(0..self.atom_idx.len()))
    }
}

/// Linear-scan construction of [`LevelSetAtoms`]; one pass, no index.
pub fn level_set_scan(
    path: &ExcursionPath,
    mech: &BranchingMechanism,
    a: f64,
    eps: f64,
) -> Result<LevelSetAtoms> {
    let weight = 1.0 / mech.height_tail(eps)?;
    level_set_scan_weighted(path, a, eps, weight)
}

/// [`level_set_scan`] with an explicit atom weight, for callers that carry
/// their own discrete normalization of the level measure.
pub fn level_set_scan_weighted(
    path: &ExcursionPath,
    a: f64,
    eps: f64,
    weight: f64,
) -> Result<LevelSetAtoms> {
    if !(eps > 0.0) {
        return Err(TreeError::NonPositive {
            name: "eps",
            value: eps,
        });
    }
    if !(a > 0.0) {
        return Err(TreeError::NonPositive { name: "a", value: a });
    }
    let v = path.values();
    let mut atom_idx = Vec::new();
    let mut gap_min = Vec::new();
    let mut running_min = f64::INFINITY; // min since the previous atom
    let mut entry: Option<usize> = None; // start of the current excursion above a
    let mut reaches = false;
    for (i, &x) in v.iter().enumerate() {
        if entry.is_none() {
            if x > a {
                entry = Some(i);
                reaches = x >= a + eps;
            } else {
                running_min = running_min.min(x);
            }
        } else {
            if x >= a + eps {
                reaches = true;
            }
            if x <= a {
                // excursion closed
                if reaches {
                    if !atom_idx.is_empty() {
                        gap_min.push(running_min);
                    }
                    atom_idx.push(entry.unwrap());
                    running_min = x;
                } else {
                    running_min = running_min.min(x);
                }
                entry = None;
                reaches = false;
            }
        }
        if entry.is_none() {
            running_min = running_min.min(x);
        }
    }
    Ok(LevelSetAtoms {
        level: a,
        eps,
        weight,
        atom_idx,
        gap_min,
        dt: path.dt(),
    })
}

/// Excursions of the path strictly above `a` with height above `a`
/// exceeding `min_height`, shifted to 0 at both ends.
pub fn subtrees_above_scan(path: &ExcursionPath, a: f64, min_height: f64) -> Vec<ExcursionPath> {
    let v = path.values();
    let mut out = Vec::new();
    let mut entry: Option<usize> = None;
    for (i, &x) in v.iter().enumerate() {
        if entry.is_none() {
            if x > a {
                entry = Some(i);
            }
        } else if x <= a {
            let s = entry.unwrap();
            let mut vals = Vec::with_capacity(i - s + 2);
            vals.push(0.0);
            let mut max = 0.0f64;
            for &y in &v[s..i] {
                let shifted = y - a;
                max = max.max(shifted);
                vals.push(shifted);
            }
            vals.push(0.0);
            if max > min_height {
                if let Ok(p) = ExcursionPath::new(vals, path.dt()) {
                    out.push(p);
                }
            }
            entry = None;
        }
    }
    out
}
