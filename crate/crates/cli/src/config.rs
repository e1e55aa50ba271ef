//! Configuration resolution: defaults < config file < command-line flags.
//!
//! The config file is one flat `key = value` table (a TOML subset: no
//! sections, `#` comments). Unknown keys are usage errors. The effective
//! configuration is echoed into every output file in the same key=value
//! form, so parsing an echoed header reproduces the run.

use crate::GlobalArgs;
use anyhow::{bail, Result};
use std::path::PathBuf;
use treelab_core::GaugeFunction;

#[derive(Debug, Clone)]
pub struct EffectiveConfig {
    pub alpha: f64,
    pub c: f64,
    pub seed: u64,
    pub workers: usize,
    pub n_scale: u32,
    pub n_reps: usize,
    pub n_points: usize,
    pub dx: f64,
    pub out: Option<PathBuf>,
    // which size-ish fields were explicitly set (file or flag); experiments
    // keep their own defaults otherwise
    pub n_scale_set: Option<u32>,
    pub n_reps_set: Option<usize>,
    pub n_points_set: Option<usize>,
    pub dx_set: Option<f64>,
}

pub const DEFAULT_ALPHA: f64 = 2.0;
pub const DEFAULT_C: f64 = 1.0;
pub const DEFAULT_N_SCALE: u32 = 200;
pub const DEFAULT_N_REPS: usize = 2000;
pub const DEFAULT_N_POINTS: usize = 1000;
pub const DEFAULT_DX: f64 = 1e-3;

#[derive(Default)]
struct FileValues {
    alpha: Option<f64>,
    c: Option<f64>,
    seed: Option<u64>,
    workers: Option<usize>,
    n_scale: Option<u32>,
    n_reps: Option<usize>,
    n_points: Option<usize>,
    dx: Option<f64>,
    out: Option<PathBuf>,
}

fn parse_file(text: &str) -> Result<FileValues> {
    let mut v = FileValues::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key = value, got '{raw}'", lineno + 1);
        };
        let key = key.trim();
        let value = value.trim().trim_matches('"');
        let parse_err = |what: &str| anyhow::anyhow!("config key '{key}': invalid {what} '{value}'");
        match key {
            "alpha" => v.alpha = Some(value.parse().map_err(|_| parse_err("number"))?),
            "c" => v.c = Some(value.parse().map_err(|_| parse_err("number"))?),
            "seed" => v.seed = Some(value.parse().map_err(|_| parse_err("integer"))?),
            "workers" => v.workers = Some(value.parse().map_err(|_| parse_err("integer"))?),
            "n_scale" => v.n_scale = Some(value.parse().map_err(|_| parse_err("integer"))?),
            "n_reps" => v.n_reps = Some(value.parse().map_err(|_| parse_err("integer"))?),
            "n_points" => v.n_points = Some(value.parse().map_err(|_| parse_err("integer"))?),
            "dx" => v.dx = Some(value.parse().map_err(|_| parse_err("number"))?),
            "out" => v.out = Some(PathBuf::from(value)),
            other => bail!("unknown config key '{other}'"),
        }
    }
    Ok(v)
}

pub fn resolve(args: &GlobalArgs) -> Result<EffectiveConfig> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| anyhow::anyhow!("config file {}: {e}", path.display()))?;
            parse_file(&text)?
        }
        None => FileValues::default(),
    };
    let alpha = args.alpha.or(file.alpha).unwrap_or(DEFAULT_ALPHA);
    let c = args.c.or(file.c).unwrap_or(DEFAULT_C);
    if !(alpha > 1.0 && alpha <= 2.0) {
        bail!("alpha must lie in (1, 2], got {alpha}");
    }
    if !(c > 0.0 && c.is_finite()) {
        bail!("c must be positive, got {c}");
    }
    let n_scale_set = args.n_scale.or(file.n_scale);
    let n_reps_set = args.n_reps.or(file.n_reps);
    let n_points_set = args.n_points.or(file.n_points);
    let dx_set = args.dx.or(file.dx);
    let n_scale = n_scale_set.unwrap_or(DEFAULT_N_SCALE);
    let n_reps = n_reps_set.unwrap_or(DEFAULT_N_REPS);
    let n_points = n_points_set.unwrap_or(DEFAULT_N_POINTS);
    let dx = dx_set.unwrap_or(DEFAULT_DX);
    if n_scale == 0 || n_reps == 0 || n_points == 0 {
        bail!("sizes must be positive");
    }
    if !(dx > 0.0 && dx < 1.0) {
        bail!("dx must lie in (0, 1), got {dx}");
    }
    Ok(EffectiveConfig {
        alpha,
        c,
        seed: args.seed.or(file.seed).unwrap_or(0),
        workers: args.workers.or(file.workers).unwrap_or(0),
        n_scale,
        n_reps,
        n_points,
        dx,
        out: args.out.clone().or(file.out),
        n_scale_set,
        n_reps_set,
        n_points_set,
        dx_set,
    })
}

impl EffectiveConfig {
    pub fn require_out(&self) -> Result<PathBuf> {
        self.out
            .clone()
            .ok_or_else(|| anyhow::anyhow!("this command writes a file; pass --out PATH"))
    }

    /// Canonical key=value echo (round-trips through the config parser).
    pub fn echo(&self) -> String {
        format!(
            "alpha={} c={} seed={} workers={} n_scale={} n_reps={} n_points={} dx={}",
            self.alpha,
            self.c,
            self.seed,
            self.workers,
            self.n_scale,
            self.n_reps,
            self.n_points,
            self.dx
        )
    }

    /// FNV-1a hash of the canonical echo, as stable hex.
    pub fn hash(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.echo().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// A gauge named on the command line.
pub enum GaugeSpec {
    BrownianMass,
    BrownianLevel,
    StableMass(f64),
    StableLevel(f64),
    Generic(f64, f64, f64),
}

impl std::str::FromStr for GaugeSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let num = |txt: &str| {
            txt.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number '{txt}' in gauge spec '{s}'"))
        };
        match (head, rest) {
            ("brownian-mass", None) => Ok(GaugeSpec::BrownianMass),
            ("brownian-level", None) => Ok(GaugeSpec::BrownianLevel),
            ("stable-mass", Some(u)) => Ok(GaugeSpec::StableMass(num(u)?)),
            ("stable-level", Some(u)) => Ok(GaugeSpec::StableLevel(num(u)?)),
            ("generic", Some(abd)) => {
                let parts: Vec<&str> = abd.split(',').collect();
                if parts.len() != 3 {
                    return Err(format!("generic gauge needs a,b,d in '{s}'"));
                }
                Ok(GaugeSpec::Generic(num(parts[0])?, num(parts[1])?, num(parts[2])?))
            }
            _ => Err(format!(
                "unknown gauge '{s}' (brownian-mass | brownian-level | stable-mass:u | stable-level:u | generic:a,b,d)"
            )),
        }
    }
}

impl GaugeSpec {
    pub fn build(&self, alpha: f64) -> Result<GaugeFunction> {
        let g = match self {
            GaugeSpec::BrownianMass => GaugeFunction::brownian_mass(),
            GaugeSpec::BrownianLevel => GaugeFunction::brownian_level(),
            GaugeSpec::StableMass(u) => GaugeFunction::stable_mass(alpha, *u)?,
            GaugeSpec::StableLevel(u) => GaugeFunction::stable_level(alpha, *u)?,
            GaugeSpec::Generic(a, b, d) => GaugeFunction::generic(*a, *b, *d)?,
        };
        Ok(g)
    }
}
