//! Benchmark harness: run the scene x method matrix through a
//! down-then-up roundtrip and report Table-style quality metrics against
//! the pristine scene.
//!
//! The ground truth is degraded by the configured scale factor with each
//! method, restored to the original grid with the same method, and
//! compared to the pristine raster. Cells run in parallel; rows are
//! emitted in configuration order, so the CSV is a pure function of the
//! config file.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use rayon::prelude::*;
use regrid_core::kernels::BoundaryPolicy;
use regrid_core::metrics;
use regrid_core::raster::{synth_scene, write_pgm, Raster};
use regrid_core::resampler::run;
use regrid_core::GridTransform;

use crate::config::BenchConfig;

pub const CSV_HEADER: &str =
    "scene,method,correlation,entropy_deviation,avg_diff_error,max_diff,signed_mean,error";

/// One completed benchmark cell.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub scene: String,
    pub method: String,
    pub correlation: Option<f64>,
    pub entropy_deviation: Option<f64>,
    pub avg_diff_error: Option<f64>,
    pub max_diff: Option<f64>,
    pub signed_mean: Option<f64>,
    pub error: Option<String>,
}

impl CellResult {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }

    fn csv_row(&self) -> String {
        let num = |v: &Option<f64>| match v {
            Some(x) => format_fixed(*x),
            None => String::new(),
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.scene,
            self.method,
            num(&self.correlation),
            num(&self.entropy_deviation),
            num(&self.avg_diff_error),
            num(&self.max_diff),
            num(&self.signed_mean),
            self.error.as_deref().unwrap_or("")
        )
    }
}

/// Locale-independent fixed formatting: dot separator, 4 decimals, no
/// negative zero.
fn format_fixed(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.4}")
}

#[derive(Debug)]
pub struct BenchOutcome {
    pub csv: String,
    pub markdown: String,
    pub failed_cells: usize,
    pub csv_path: PathBuf,
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '-' })
        .collect()
}

fn run_cell(cfg: &BenchConfig, scene_idx: usize, method_idx: usize) -> Result<(CellResult, Raster)> {
    let scene = &cfg.scenes[scene_idx];
    let method = &cfg.methods[method_idx];
    let truth = synth_scene(&scene.spec)?;
    let n = scene.spec.size;
    let s = cfg.scale as f64;
    let down_dims = n.div_ceil(cfg.scale).max(2);

    let down = run(
        &truth,
        &GridTransform::scale(s),
        down_dims,
        down_dims,
        &method.spec,
        BoundaryPolicy::Mirror,
    )?;
    let up = run(
        &down,
        &GridTransform::scale(1.0 / s),
        n,
        n,
        &method.spec,
        BoundaryPolicy::Mirror,
    )?;

    let entropy_deviation = metrics::entropy_deviation(&up, &truth, cfg.bins)?;
    let avg = metrics::avg_diff_error(&up, &truth)?;
    let diff = metrics::diff_map(&up, &truth)?;
    let max_diff = diff.data().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let signed_mean = diff.data().iter().sum::<f64>() / diff.len() as f64;
    let (correlation, error) = match metrics::correlation(&up, &truth) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };

    Ok((
        CellResult {
            scene: scene.label.clone(),
            method: method.label.clone(),
            correlation,
            entropy_deviation: Some(entropy_deviation),
            avg_diff_error: Some(avg),
            max_diff: Some(max_diff),
            signed_mean: Some(signed_mean),
            error,
        },
        up,
    ))
}

/// Runs the whole matrix, writes `report.csv` plus one output raster per
/// cell into the output directory, and returns the buffered report.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome> {
    fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("creating output dir {}", cfg.output_dir.display()))?;

    let cells: Vec<(usize, usize)> = (0..cfg.scenes.len())
        .flat_map(|s| (0..cfg.methods.len()).map(move |m| (s, m)))
        .collect();

    let results: Vec<CellResult> = cells
        .par_iter()
        .map(|&(s, m)| match run_cell(cfg, s, m) {
            Ok((cell, raster)) => {
                let name = format!(
                    "{}__{}.pgm",
                    sanitize(&cfg.scenes[s].label),
                    sanitize(&cfg.methods[m].label)
                );
                let path = cfg.output_dir.join(name);
                let bytes = write_pgm(&raster.clamped(), 255)
                    .expect("clamped raster always serializes");
                match fs::write(&path, bytes) {
                    Ok(()) => cell,
                    Err(e) => CellResult {
                        error: Some(format!("writing {}: {e}", path.display())),
                        ..cell
                    },
                }
            }
            Err(e) => CellResult {
                scene: cfg.scenes[s].label.clone(),
                method: cfg.methods[m].label.clone(),
                correlation: None,
                entropy_deviation: None,
                avg_diff_error: None,
                max_diff: None,
                signed_mean: None,
                error: Some(format!("{e:#}")),
            },
        })
        .collect();

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in &results {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }

    let csv_path = cfg.output_dir.join("report.csv");
    fs::write(&csv_path, &csv).with_context(|| format!("writing {}", csv_path.display()))?;

    Ok(BenchOutcome {
        markdown: render_markdown(&results),
        failed_cells: results.iter().filter(|r| r.failed()).count(),
        csv,
        csv_path,
    })
}

/// Table-style text rendering of the metric columns.
pub fn render_markdown(results: &[CellResult]) -> String {
    let mut out = String::new();
    out.push_str("| scene | method | correlation | entropy deviation | avg diff error |\n");
    out.push_str("|---|---|---|---|---|\n");
    for r in results {
        let cell = |v: &Option<f64>| match v {
            Some(x) => format_fixed(*x),
            None => "n/a".to_owned(),
        };
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            r.scene,
            r.method,
            cell(&r.correlation),
            cell(&r.entropy_deviation),
            cell(&r.avg_diff_error)
        ));
    }
    out
}
