//! Batch screening: one scalar summary per dataset, ranked so the largest
//! normalized deviations surface first for drill-down.

use crate::errors::{AppError, Result};
use crate::io::{load_dataset, LoadOptions};
use cumdev_core::{cumulative_curve_with, summary_stats, SigmaMode, SummaryStats};
use std::cmp::Ordering;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub struct ScreenRow {
    pub path: String,
    pub outcome: std::result::Result<ScreenStats, String>,
}

#[derive(Debug)]
pub struct ScreenStats {
    pub stats: SummaryStats,
    pub flagged: bool,
}

/// Reads a manifest (one CSV path per line; blank lines and `#` comments
/// skipped), summarizes every dataset, and sorts rows by descending
/// normalized Kuiper statistic. Per-dataset failures land in the report
/// instead of aborting the batch; they sort last, after rows whose noise
/// scale is zero.
pub fn run_screen(
    manifest: &Path,
    options: &LoadOptions,
    sigma_mode: SigmaMode,
    threshold: f64,
) -> Result<Vec<ScreenRow>> {
    let body = std::fs::read_to_string(manifest)
        .map_err(|e| AppError::Data(format!("{}: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or_else(|| Path::new(""));
    let mut rows = Vec::new();
    for line in body.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let path = base.join(PathBuf::from(line));
        let outcome = load_dataset(&path, options)
            .map(|dataset| {
                let curve = cumulative_curve_with(&dataset, sigma_mode);
                let stats = summary_stats(&curve);
                let flagged = stats.d_normalized.is_some_and(|d| d > threshold);
                ScreenStats { stats, flagged }
            })
            .map_err(|e| e.to_string());
        rows.push(ScreenRow {
            path: line.to_string(),
            outcome,
        });
    }
    rows.sort_by(|a, b| rank(a).partial_cmp(&rank(b)).unwrap_or(Ordering::Equal));
    Ok(rows)
}

/// Sort key: larger normalized Kuiper first, then undefined-sigma rows,
/// then failures; ties keep manifest order (the sort is stable).
fn rank(row: &ScreenRow) -> (u8, f64) {
    match &row.outcome {
        Ok(screen) => match screen.stats.d_normalized {
            Some(d) => (0, -d),
            None => (1, 0.0),
        },
        Err(_) => (2, 0.0),
    }
}
