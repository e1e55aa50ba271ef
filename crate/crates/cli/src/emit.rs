//! Output emission: JSONL reports, summary JSON, and plot-ready CSV.
//!
//! Every file starts with a header line carrying the tool version, the
//! config hash, the master seed and the full effective config echo, so an
//! output file identifies the run that produced it and the echo re-parses
//! to the same configuration. Identical runs produce identical bytes.

use crate::config::EffectiveConfig;
use anyhow::{bail, Context, Result};
use std::io::Write;
use std::path::Path;
use treelab_core::hausdorff::{ConjectureRow, DensityStats};
use treelab_core::verify::{summary_json, to_jsonl, ExperimentReport};

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn header_comment(cfg: &EffectiveConfig) -> String {
    format!(
        "# treelab {VERSION} hash={} seed={} {}\n",
        cfg.hash(),
        cfg.seed,
        cfg.echo()
    )
}

fn create(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))
}

pub fn write_jsonl(path: &Path, reports: &[ExperimentReport], cfg: &EffectiveConfig) -> Result<()> {
    if reports.is_empty() {
        bail!("no reports to write; refusing to create {}", path.display());
    }
    let mut f = create(path)?;
    let header = serde_json::json!({
        "tool": "treelab",
        "version": VERSION,
        "config_hash": cfg.hash(),
        "master_seed": cfg.seed,
        "config": cfg.echo(),
    });
    writeln!(f, "{header}").with_context(|| path.display().to_string())?;
    f.write_all(to_jsonl(reports).as_bytes())
        .with_context(|| path.display().to_string())?;
    Ok(())
}

pub fn write_summary(
    path: &Path,
    reports: &[ExperimentReport],
    cfg: &EffectiveConfig,
) -> Result<()> {
    if reports.is_empty() {
        bail!("no reports to write; refusing to create {}", path.display());
    }
    let mut f = create(path)?;
    f.write_all(summary_json(reports, VERSION, &cfg.hash(), cfg.seed).as_bytes())
        .with_context(|| path.display().to_string())?;
    f.write_all(b"\n").ok();
    Ok(())
}

/// Columns: point_id, n, ratio.
pub fn write_density_csv(path: &Path, stats: &DensityStats, cfg: &EffectiveConfig) -> Result<()> {
    if stats.ratios.is_empty() {
        bail!("empty density table; refusing to create {}", path.display());
    }
    let mut f = create(path)?;
    f.write_all(header_comment(cfg).as_bytes())?;
    writeln!(f, "point_id,n,ratio")?;
    for (p, row) in stats.ratios.iter().enumerate() {
        for (k, ratio) in row.iter().enumerate() {
            writeln!(f, "{},{},{}", stats.point_ids[p], stats.n_values[k], ratio)?;
        }
    }
    Ok(())
}

/// Columns: u, n, covering_sum, series_converges.
pub fn write_conjecture_csv(
    path: &Path,
    rows: &[ConjectureRow],
    cfg: &EffectiveConfig,
) -> Result<()> {
    if rows.is_empty() {
        bail!("empty scan; refusing to create {}", path.display());
    }
    let mut f = create(path)?;
    f.write_all(header_comment(cfg).as_bytes())?;
    writeln!(f, "u,n,covering_sum,series_converges")?;
    for r in rows {
        writeln!(f, "{},{},{},{}", r.u, r.n, r.covering_sum, r.series_converges)?;
    }
    Ok(())
}
