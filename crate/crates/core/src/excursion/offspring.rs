//! The canonical stable offspring law, conditioned Galton-Watson sampling,
//! and contour coding.
//!
//! The offspring distribution has generating function
//! `f(s) = s + (1-s)^α/α`: exactly critical, `p₀ = 1/α`, `p₁ = 0`, and for
//! `k ≥ 2` the positive coefficients `p_k = |binom(α,k)|/α`, which satisfy
//! `p_{k+1} = p_k·(k-α)/(k+1)` and have a stable tail of index α. Its
//! rescaled population process converges to the branching process with
//! mechanism `ψ(u) = u^α/α`, so analytic comparisons use the mechanism
//! constant `c = 1/α` with no further calibration factor.
//!
//! Sampling is inverse-CDF over a cumulative table up to `K = 10^6` with an
//! index-α Pareto inversion for the tail beyond `K`; the exact tail mass and
//! tail mean have closed forms (`|binom(α-1,K)|/α` and `|binom(α-2,K-1)|`)
//! by telescoping, which the constructor uses to keep the table consistent
//! to float precision.

use super::{ExcursionError, ExcursionPath};
use crate::analytic::BranchingMechanism;
use crate::seed::SeedSpec;
use rand::Rng;

type Result<T> = std::result::Result<T, ExcursionError>;

/// Truncation point of the cumulative table for `α < 2`.
pub const OFFSPRING_TABLE_LEN: usize = 1_000_000;

/// How many leading table entries are scanned linearly before falling back
/// to binary search; the head carries almost all of the mass.
const HEAD_SCAN: usize = 16;

/// Critical offspring law with generating function `f(s) = s + (1-s)^α/α`.
#[derive(Debug, Clone)]
pub struct OffspringLaw {
    alpha: f64,
    /// cumulative probabilities `P(ξ ≤ k)` for `k = 0..cum.len()-1`
    cum: Vec<f64>,
    /// exact mass beyond the table, `|binom(α-1, K)|/α`
    tail_mass: f64,
    /// exact mean carried by the tail, `|binom(α-2, K-1)|`
    tail_mean: f64,
    /// `Σ_{k≤K} k·p_k`, compensated-summed at construction
    table_mean: f64,
}

/// Build the canonical law for `α ∈ (1, 2]`. At `α = 2` this is the binary
/// law `p₀ = p₂ = 1/2`; below 2 the table runs to [`OFFSPRING_TABLE_LEN`].
pub fn canonical_offspring_law(alpha: f64) -> Result<OffspringLaw> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(ExcursionError::InvalidAlpha(alpha));
    }
    if alpha == 2.0 {
        return Ok(OffspringLaw {
            alpha,
            cum: vec![0.5, 0.5, 1.0],
            tail_mass: 0.0,
            tail_mean: 0.0,
            table_mean: 1.0,
        });
    }
    let k_max = OFFSPRING_TABLE_LEN;
    let mut cum = Vec::with_capacity(k_max + 1);
    let p0 = 1.0 / alpha;
    cum.push(p0);
    cum.push(p0); // p₁ = 0
    let mut p = (alpha - 1.0) / 2.0; // p₂
    // compensated sums: the α near 1 tables accumulate 10^6 tiny terms
    let mut acc = p0 + p;
    let mut acc_c = 0.0f64;
    let mut mean = 2.0 * p;
    let mut mean_c = 0.0f64;
    cum.push(acc);
    let kahan = |s: &mut f64, c: &mut f64, x: f64| {
        let y = x - *c;
        let t = *s + y;
        *c = (t - *s) - y;
        *s = t;
    };
    for k in 2..k_max {
        p *= (k as f64 - alpha) / (k as f64 + 1.0);
        kahan(&mut acc, &mut acc_c, p);
        kahan(&mut mean, &mut mean_c, (k + 1) as f64 * p);
        cum.push(acc);
    }
    // Exact tail mass |binom(α-1, K)|/α = (α-1)/α · Π_{j=2}^{K} (j-α)/j and
    // tail mean |binom(α-2, K-1)| = (2-α) · Π_{j=2}^{K-1} (j+1-α)/j, by the
    // alternating-binomial telescopes for Σ p_k and Σ k·p_k.
    let mut tail_mass = (alpha - 1.0) / alpha;
    for j in 2..=k_max {
        tail_mass *= (j as f64 - alpha) / j as f64;
    }
    let mut tail_mean = 2.0 - alpha;
    for j in 2..=(k_max - 1) {
        tail_mean *= (j as f64 + 1.0 - alpha) / j as f64;
    }
    Ok(OffspringLaw {
        alpha,
        cum,
        tail_mass,
        tail_mean,
        table_mean: mean,
    })
}

impl OffspringLaw {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `p_k` for `k` within the table.
    pub fn prob(&self, k: usize) -> f64 {
        if k >= self.cum.len() {
            return f64::NAN;
        }
        if k == 0 {
            self.cum[0]
        } else {
            self.cum[k] - self.cum[k - 1]
        }
    }

    /// Exact probability mass beyond the table.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// Exact contribution `Σ_{k>K} k·p_k` of the tail to the mean.
    pub fn tail_mean(&self) -> f64 {
        self.tail_mean
    }

    /// Mean carried by the table, `Σ_{k≤K} k·p_k`; criticality means
    /// `table_mean() + tail_mean() = 1`.
    pub fn table_mean(&self) -> f64 {
        self.table_mean
    }

    /// Draw one offspring count.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.gen();
        let head = self.cum.len().min(HEAD_SCAN);
        for (k, &c) in self.cum.iter().enumerate().take(head) {
            if u <= c {
                return k as u64;
            }
        }
        let threshold = *self.cum.last().unwrap();
        if u <= threshold || self.tail_mass == 0.0 {
            return self.cum.partition_point(|&c| c < u) as u64;
        }
        // Pareto inversion of the index-α tail beyond the table:
        // P(ξ > k) = tail_mass · (k/K)^{-α} for k ≥ K.
        let k = OFFSPRING_TABLE_LEN as f64 * (self.tail_mass / (1.0 - u)).powf(1.0 / self.alpha);
        k.ceil() as u64
    }
}

/// Rooted tree in depth-first order. `parent[0] = u32::MAX` marks the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteTree {
    parent: Vec<u32>,
    depth: Vec<u32>,
    height: u32,
}

impl DiscreteTree {
    pub fn from_parents(parent: Vec<u32>, depth: Vec<u32>) -> Result<Self> {
        if parent.is_empty() || parent.len() != depth.len() {
            return Err(ExcursionError::InvalidPath(
                "parent/depth arrays empty or mismatched".to_string(),
            ));
        }
        if parent[0] != u32::MAX || depth[0] != 0 {
            return Err(ExcursionError::InvalidPath(
                "vertex 0 must be the root".to_string(),
            ));
        }
        let mut height = 0;
        for v in 1..parent.len() {
            let p = parent[v] as usize;
            if p >= v || depth[v] != depth[p] + 1 {
                return Err(ExcursionError::InvalidPath(format!(
                    "vertex {v} has inconsistent parent/depth"
                )));
            }
            height = height.max(depth[v]);
        }
        Ok(Self {
            parent,
            depth,
            height,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self) -> &[u32] {
        &self.parent
    }

    /// Depths in depth-first (preorder) vertex order.
    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn edge_count(&self) -> usize {
        self.parent.len() - 1
    }
}

/// Vertex/attempt budget for the rejection samplers. Exhaustion is a
/// reported error, never a silent truncation.
#[derive(Debug, Clone, Copy)]
pub struct GwBudget {
    pub max_vertices: usize,
    pub max_attempts: u64,
}

impl Default for GwBudget {
    fn default() -> Self {
        Self {
            max_vertices: 10_000_000,
            max_attempts: 10_000,
        }
    }
}

/// One accepted conditioned tree plus sampling bookkeeping.
#[derive(Debug, Clone)]
pub struct GwTreeSample {
    pub tree: DiscreteTree,
    /// total attempts including the accepted one
    pub attempts: u64,
    /// attempts aborted for exceeding the vertex budget
    pub size_rejections: u64,
}

/// Sample one unconditioned critical GW tree in preorder; `None` when the
/// vertex budget is exceeded. `depth_cap` stops generation below that depth
/// (vertices at the cap get no children), which leaves the tree above the
/// cap untouched.
fn sample_gw_tree<R: Rng>(
    law: &OffspringLaw,
    rng: &mut R,
    max_vertices: usize,
    depth_cap: Option<u32>,
) -> Option<DiscreteTree> {
    let mut parent = vec![u32::MAX];
    let mut depth = vec![0u32];
    let mut height = 0u32;
    // stack of (vertex, children still to emit)
    let mut stack = Vec::new();
    let root_children = law.sample(rng);
    if root_children > 0 {
        stack.push((0u32, root_children));
    }
    while let Some((v, remaining)) = stack.pop() {
        if remaining > 1 {
            stack.push((v, remaining - 1));
        }
        let w = parent.len() as u32;
        if parent.len() >= max_vertices {
            return None;
        }
        let d = depth[v as usize] + 1;
        parent.push(v);
        depth.push(d);
        height = height.max(d);
        let capped = depth_cap.map_or(false, |cap| d >= cap);
        if !capped {
            let kids = law.sample(rng);
            if kids > 0 {
                stack.push((w, kids));
            }
        }
    }
    Some(DiscreteTree {
        parent,
        depth,
        height,
    })
}

/// Rejection-sample a critical GW tree conditioned on `height ≥ min_height`.
pub fn gw_tree_conditioned_height(
    law: &OffspringLaw,
    min_height: u32,
    budget: GwBudget,
    seed: SeedSpec,
) -> Result<GwTreeSample> {
    gw_tree_conditioned_height_truncated(law, min_height, None, budget, seed)
}

/// Same conditioning, but generation stops below `depth_cap` (which must be
/// at least `min_height`). Level sets and masses at depths below the cap are
/// unaffected; only the invisible part above is dropped.
pub fn gw_tree_conditioned_height_truncated(
    law: &OffspringLaw,
    min_height: u32,
    depth_cap: Option<u32>,
    budget: GwBudget,
    seed: SeedSpec,
) -> Result<GwTreeSample> {
    if min_height < 1 {
        return Err(ExcursionError::NonPositive {
            name: "min_height",
            value: min_height as f64,
        });
    }
    if let Some(cap) = depth_cap {
        assert!(cap >= min_height, "depth cap below the conditioning height");
    }
    let mut rng = seed.rng();
    let mut size_rejections = 0u64;
    for attempt in 1..=budget.max_attempts {
        match sample_gw_tree(law, &mut rng, budget.max_vertices, depth_cap) {
            None => size_rejections += 1,
            Some(tree) => {
                if tree.height() >= min_height {
                    return Ok(GwTreeSample {
                        tree,
                        attempts: attempt,
                        size_rejections,
                    });
                }
            }
        }
    }
    Err(ExcursionError::BudgetExhausted {
        attempts: budget.max_attempts,
        rejected_size: size_rejections,
    })
}

/// Depth-first contour function of a tree: `2·edges` unit steps, each
/// changing the height by `±edge_len`, sampled every `step_dt` time units.
/// The coded tree's graph distance equals the path metric on first-visit
/// times.
pub fn contour_path(tree: &DiscreteTree, edge_len: f64, step_dt: f64) -> Result<ExcursionPath> {
    if edge_len <= 0.0 {
        return Err(ExcursionError::NonPositive {
            name: "edge_len",
            value: edge_len,
        });
    }
    if tree.edge_count() == 0 {
        return Err(ExcursionError::InvalidPath(
            "tree has no edges; the contour would be a single point".to_string(),
        ));
    }
    let depths = tree.depths();
    let mut contour: Vec<u32> = Vec::with_capacity(2 * tree.edge_count() + 1);
    contour.push(0);
    for i in 1..depths.len() {
        let mut cur = contour[contour.len() - 1];
        // climb down to one above the next vertex's depth, then step to it
        while cur + 1 > depths[i] {
            cur -= 1;
            contour.push(cur);
        }
        contour.push(depths[i]);
    }
    let mut cur = contour[contour.len() - 1];
    while cur > 0 {
        cur -= 1;
        contour.push(cur);
    }
    debug_assert_eq!(contour.len(), 2 * tree.edge_count() + 1);
    let values: Vec<f64> = contour.into_iter().map(|d| d as f64 * edge_len).collect();
    ExcursionPath::new(values, step_dt)
}

/// A scaled conditioned tree path plus sampling bookkeeping.
#[derive(Debug, Clone)]
pub struct ItoSample {
    pub path: ExcursionPath,
    pub attempts: u64,
    pub size_rejections: u64,
}

/// Contour path of a GW tree conditioned to reach height `c_height` after
/// scaling: edge length `1/n`, conditioning height `⌈c_height·n⌉`, grid
/// spacing `1/(2·n^{α/(α-1)})`. The coded tree approximates the law of the
/// stable tree conditioned on `H > c_height`, with mechanism constant
/// `c = 1/α`.
pub fn ito_excursion_above_height(
    mech: &BranchingMechanism,
    c_height: f64,
    n: u32,
    budget: GwBudget,
    seed: SeedSpec,
) -> Result<ItoSample> {
    ito_excursion_truncated(mech, c_height, n, None, budget, seed)
}

/// Same law, truncated above `max_height` (tree-height units). Statistics
/// that only look below `max_height` are unchanged.
pub fn ito_excursion_truncated(
    mech: &BranchingMechanism,
    c_height: f64,
    n: u32,
    max_height: Option<f64>,
    budget: GwBudget,
    seed: SeedSpec,
) -> Result<ItoSample> {
    if !(c_height > 0.0) {
        return Err(ExcursionError::NonPositive {
            name: "c_height",
            value: c_height,
        });
    }
    let alpha = mech.alpha();
    let n_eff = n as f64;
    let min_height = (c_height * n_eff).ceil() as u32;
    if min_height < 1 {
        return Err(ExcursionError::NonPositive {
            name: "c_height*n",
            value: c_height * n_eff,
        });
    }
    let law = canonical_offspring_law(alpha)?;
    let depth_cap = max_height.map(|h| ((h * n_eff).ceil() as u32).max(min_height));
    let sample = gw_tree_conditioned_height_truncated(&law, min_height, depth_cap, budget, seed)?;
    let step_dt = 0.5 * n_eff.powf(-alpha / (alpha - 1.0));
    let path = contour_path(&sample.tree, 1.0 / n_eff, step_dt)?;
    Ok(ItoSample {
        path,
        attempts: sample.attempts,
        size_rejections: sample.size_rejections,
    })
}


/// Depth-`level` census of one conditioned GW tree, streamed without
/// materializing the tree: the vertex count at the level, and for each
/// consecutive pair of level vertices (in depth-first order) the depth of
/// their meet — which is the minimum of the contour between their first
/// visits, so tree distances on the level need nothing else.
#[derive(Debug, Clone)]
pub struct LevelCensus {
    /// vertices at the census level
    pub count: u64,
    /// meet depth of consecutive level vertices (`len = count - 1`)
    pub gap_min_depth: Vec<u32>,
    pub total_vertices: u64,
    pub attempts: u64,
    pub size_rejections: u64,
}

/// Stream one tree's census; `None` when the vertex budget is exceeded.
fn stream_census_once<R: Rng>(
    law: &OffspringLaw,
    level: u32,
    depth_cap: u32,
    max_vertices: u64,
    rng: &mut R,
) -> Option<(u64, Vec<u32>, u64)> {
    debug_assert!(depth_cap >= level && level >= 1);
    let mut stack: Vec<(u32, u64)> = Vec::new();
    let root_kids = law.sample(rng);
    if root_kids > 0 {
        stack.push((0, root_kids));
    }
    let mut vertices = 1u64;
    let mut count = 0u64;
    let mut gap_min = Vec::new();
    let mut min_since = 0u32;
    while let Some((vd, remaining)) = stack.pop() {
        // the walk climbs back to depth vd before descending again
        min_since = min_since.min(vd);
        if remaining > 1 {
            stack.push((vd, remaining - 1));
        }
        let d = vd + 1;
        vertices += 1;
        if vertices > max_vertices {
            return None;
        }
        if d == level {
            if count > 0 {
                gap_min.push(min_since);
            }
            count += 1;
            min_since = d;
        }
        if d < depth_cap {
            let kids = law.sample(rng);
            if kids > 0 {
                stack.push((d, kids));
            }
        }
    }
    Some((count, gap_min, vertices))
}

/// Rejection-sample a level census conditioned on the level being populated
/// (equivalently `height >= level`).
pub fn stream_level_census(
    law: &OffspringLaw,
    level: u32,
    depth_cap: u32,
    budget: GwBudget,
    seed: SeedSpec,
) -> Result<LevelCensus> {
    if level < 1 {
        return Err(ExcursionError::NonPositive {
            name: "level",
            value: level as f64,
        });
    }
    let mut rng = seed.rng();
    let mut size_rejections = 0u64;
    for attempt in 1..=budget.max_attempts {
        match stream_census_once(law, level, depth_cap, budget.max_vertices as u64, &mut rng) {
            None => size_rejections += 1,
            Some((count, gap_min, total)) => {
                if count > 0 {
                    return Ok(LevelCensus {
                        count,
                        gap_min_depth: gap_min,
                        total_vertices: total,
                        attempts: attempt,
                        size_rejections,
                    });
                }
            }
        }
    }
    Err(ExcursionError::BudgetExhausted {
        attempts: budget.max_attempts,
        rejected_size: size_rejections,
    })
}

/// Exact survival probability `P(height >= generations)` of the canonical
/// critical GW tree: the generating-function iterate
/// `w_{k+1} = w_k - w_k^α/α` from `w_0 = 1`, computed directly. Height
/// tails of the discrete tree are strongly pre-asymptotic for α near 1, so
/// finite-n normalizations use this instead of the limiting power law.
pub fn discrete_height_survival(alpha: f64, generations: u32) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(ExcursionError::InvalidAlpha(alpha));
    }
    let mut w = 1.0f64;
    for _ in 0..generations {
        w -= w.powf(alpha) / alpha;
    }
    Ok(w)
}
