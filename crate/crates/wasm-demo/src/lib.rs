//! Browser demo bindings: three interactive views over the core library.
//!
//! Each export returns a JSON string (plain `JSON.parse` on the JS side, no
//! framework): an excursion sampler, the branching-process solver curves,
//! and a density-ratio scan. Everything is seed-addressed and deterministic,
//! so the page reproduces exactly what the CLI would compute.

use treelab_core::excursion::{
    ito_excursion_above_height, normalized_brownian_excursion, GwBudget,
};
use treelab_core::hausdorff::{density_scan, DensityMeasure};
use treelab_core::tree::TreeIndex;
use treelab_core::{BranchingMechanism, ExcursionPath, GaugeFunction, SeedSpec};
use wasm_bindgen::prelude::*;

fn err_json(e: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": e.to_string() }).to_string()
}

fn sample_path(kind: &str, alpha: f64, size: u32, seed: u64) -> Result<ExcursionPath, String> {
    let spec = SeedSpec::new(seed, 0);
    match kind {
        "brownian" => {
            let steps = ((size as usize).max(2)) & !1usize;
            normalized_brownian_excursion(steps, spec).map_err(|e| e.to_string())
        }
        "stable" => {
            let mech = BranchingMechanism::canonical_limit(alpha).map_err(|e| e.to_string())?;
            let budget = GwBudget {
                max_vertices: 2_000_000,
                max_attempts: 50_000,
            };
            ito_excursion_above_height(&mech, 1.0, size, budget, spec)
                .map(|s| s.path)
                .map_err(|e| e.to_string())
        }
        other => Err(format!("unknown kind '{other}'")),
    }
}

/// Sample one excursion and return `{dt, duration, height, values}` with the
/// path downsampled to at most `max_points` for plotting (local maxima are
/// kept so peaks survive the decimation).
#[wasm_bindgen]
pub fn excursion_json(kind: &str, alpha: f64, size: u32, seed: u64, max_points: usize) -> String {
    let path = match sample_path(kind, alpha, size, seed) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let v = path.values();
    let stride = (v.len() / max_points.max(16)).max(1);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let end = (i + stride).min(v.len());
        // keep the bucket max to preserve the profile
        let (mut bi, mut bv) = (i, v[i]);
        for (j, &x) in v.iter().enumerate().take(end).skip(i) {
            if x > bv {
                bi = j;
                bv = x;
            }
        }
        xs.push(bi as f64 * path.dt());
        ys.push(bv);
        i = end;
    }
    if *ys.last().unwrap() != 0.0 {
        xs.push(path.duration());
        ys.push(0.0);
    }
    serde_json::json!({
        "dt": path.dt(),
        "duration": path.duration(),
        "height": path.max_value(),
        "times": xs,
        "values": ys,
    })
    .to_string()
}

/// Solver curves over `t ∈ (0, t_max]`: the Laplace exponent `u_t(λ)`, the
/// rising flow `v⁰_t(γ)`, the falling envelope `v^∞_t(γ)` and the fixed
/// point `(γ/c)^{1/α}` they squeeze.
#[wasm_bindgen]
pub fn solver_curves_json(alpha: f64, c: f64, gamma: f64, lambda: f64, t_max: f64, points: usize) -> String {
    let mech = match BranchingMechanism::new(alpha, c) {
        Ok(m) => m,
        Err(e) => return err_json(e),
    };
    if !(t_max > 0.0) || points < 2 {
        return err_json("need t_max > 0 and at least 2 points");
    }
    let mut ts = Vec::with_capacity(points);
    let mut u = Vec::with_capacity(points);
    let mut v0 = Vec::with_capacity(points);
    let mut vinf = Vec::with_capacity(points);
    for i in 1..=points {
        let t = t_max * i as f64 / points as f64;
        ts.push(t);
        u.push(mech.csbp_laplace(t, lambda).unwrap_or(f64::NAN));
        v0.push(mech.v0(gamma, t).unwrap_or(f64::NAN));
        vinf.push(mech.v_inf(gamma, t).unwrap_or(f64::NAN));
    }
    serde_json::json!({
        "t": ts,
        "csbp_laplace": u,
        "v0": v0,
        "v_inf": vinf,
        "fixed_point": mech.fixed_point(gamma),
    })
    .to_string()
}

/// Density-ratio scan `μ(B(x, 2^{-n}))/g(2^{-n})` on one simulated tree:
/// per-`n` median/90%/max over sampled vertices, plus the per-point table.
#[wasm_bindgen]
pub fn density_scan_json(
    kind: &str,
    alpha: f64,
    size: u32,
    seed: u64,
    n_lo: i32,
    n_hi: i32,
    n_points: usize,
) -> String {
    let path = match sample_path(kind, alpha, size, seed) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let gauge = if kind == "brownian" {
        GaugeFunction::brownian_mass()
    } else {
        match GaugeFunction::stable_mass(alpha, 0.0) {
            Ok(g) => g,
            Err(e) => return err_json(e),
        }
    };
    let idx = TreeIndex::build_index(path);
    let mut rng = SeedSpec::new(seed, 1).rng();
    let points: Vec<usize> = (0..n_points.clamp(4, 256))
        .map(|_| idx.sample_mass_point(&mut rng))
        .collect();
    let stats = match density_scan(
        &idx,
        &DensityMeasure::Mass { stride: 1 },
        &points,
        &gauge,
        n_lo..=n_hi,
    ) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    serde_json::json!({
        "n": stats.n_values,
        "median": stats.quantiles.iter().map(|q| q.median).collect::<Vec<_>>(),
        "q90": stats.quantiles.iter().map(|q| q.q90).collect::<Vec<_>>(),
        "max": stats.quantiles.iter().map(|q| q.max).collect::<Vec<_>>(),
        "ratios": stats.ratios,
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_return_valid_json() {
        let s = excursion_json("brownian", 2.0, 4096, 7, 256);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v.get("error").is_none(), "{s}");
        assert!(v["height"].as_f64().unwrap() > 0.0);

        let s = solver_curves_json(1.5, 1.0, 1.0, 1.0, 2.0, 32);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v.get("error").is_none());
        assert_eq!(v["t"].as_array().unwrap().len(), 32);

        let s = density_scan_json("brownian", 2.0, 1 << 14, 3, 4, 6, 16);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v.get("error").is_none(), "{s}");

        let s = excursion_json("nope", 2.0, 128, 0, 64);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v.get("error").is_some());
    }
}
