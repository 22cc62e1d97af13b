//! Resampling quality metrics: per-pixel difference maps, mean absolute
//! difference, histogram entropy deviation, and Pearson correlation.
//!
//! All reductions run through fixed-order pairwise summation, so results
//! do not depend on thread count or accumulation luck.

use crate::error::{Error, Result};
use crate::raster::Raster;

/// Fixed-order pairwise (cascade) summation.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

fn check_dims(a: &Raster, b: &Raster) -> Result<()> {
    if !a.same_dims(b) {
        return Err(Error::dims(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    Ok(())
}

/// Per-pixel signed difference `interp - truth`.
pub fn diff_map(interp: &Raster, truth: &Raster) -> Result<Raster> {
    interp.zip(truth, |a, b| a - b)
}

/// Mean absolute per-pixel difference.
pub fn avg_diff_error(interp: &Raster, truth: &Raster) -> Result<f64> {
    let d = diff_map(interp, truth)?;
    let abs: Vec<f64> = d.data().iter().map(|v| v.abs()).collect();
    Ok(pairwise_sum(&abs) / abs.len() as f64)
}

/// Shannon entropy (bits) of a `bins`-bin histogram over [0, 1]. Values
/// outside [0, 1] count toward the edge bins; empty bins contribute zero.
pub fn entropy(r: &Raster, bins: usize) -> Result<f64> {
    if bins < 2 {
        return Err(Error::arg(format!("bins = {bins}, need at least 2")));
    }
    let mut counts = vec![0u64; bins];
    let scale = bins as f64;
    for &v in r.data() {
        let b = ((v * scale) as isize).clamp(0, bins as isize - 1) as usize;
        counts[b] += 1;
    }
    let n = r.len() as f64;
    let mut h = 0.0;
    for &c in &counts {
        if c > 0 {
            let p = c as f64 / n;
            h -= p * p.log2();
        }
    }
    Ok(h)
}

/// Absolute difference of the two rasters' histogram entropies.
pub fn entropy_deviation(a: &Raster, b: &Raster, bins: usize) -> Result<f64> {
    Ok((entropy(a, bins)? - entropy(b, bins)?).abs())
}

/// Pearson product-moment correlation. A constant raster has no defined
/// correlation; that case is an explicit error rather than a silent 0.
pub fn correlation(a: &Raster, b: &Raster) -> Result<f64> {
    check_dims(a, b)?;
    let n = a.len() as f64;
    let mean_a = pairwise_sum(a.data()) / n;
    let mean_b = pairwise_sum(b.data()) / n;

    let da: Vec<f64> = a.data().iter().map(|&v| v - mean_a).collect();
    let db: Vec<f64> = b.data().iter().map(|&v| v - mean_b).collect();
    let var_a = pairwise_sum(&da.iter().map(|v| v * v).collect::<Vec<_>>());
    let var_b = pairwise_sum(&db.iter().map(|v| v * v).collect::<Vec<_>>());
    if var_a == 0.0 {
        return Err(Error::ZeroVariance("first"));
    }
    if var_b == 0.0 {
        return Err(Error::ZeroVariance("second"));
    }
    let cov = pairwise_sum(&da.iter().zip(&db).map(|(x, y)| x * y).collect::<Vec<_>>());
    Ok((cov / (var_a.sqrt() * var_b.sqrt())).clamp(-1.0, 1.0))
}

/// One row of the benchmark table: everything measured for a single
/// (method, image) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub method_id: String,
    pub correlation: f64,
    pub entropy_src: f64,
    pub entropy_out: f64,
    /// `|entropy_src - entropy_out|`, in bits.
    pub entropy_deviation: f64,
    /// Mean absolute difference in normalized intensity.
    pub avg_diff_error: f64,
    pub max_diff: f64,
    /// Signed mean difference, exported alongside for transparency.
    pub signed_mean_diff: f64,
}

impl MetricsReport {
    /// Table cells in report order: method, correlation, entropy
    /// deviation, average difference error.
    pub fn row_cells(&self) -> [String; 4] {
        [
            self.method_id.clone(),
            format!("{:.4}", self.correlation),
            format!("{:.4}", self.entropy_deviation),
            format!("{:.4}", self.avg_diff_error),
        ]
    }
}

/// Assembles the full metric set for one interpolant against its ground
/// truth. Fails when correlation is undefined (constant input).
pub fn report(interp: &Raster, truth: &Raster, method_id: &str, bins: usize) -> Result<MetricsReport> {
    check_dims(interp, truth)?;
    let d = diff_map(interp, truth)?;
    let abs: Vec<f64> = d.data().iter().map(|v| v.abs()).collect();
    let entropy_src = entropy(truth, bins)?;
    let entropy_out = entropy(interp, bins)?;
    Ok(MetricsReport {
        method_id: method_id.to_owned(),
        correlation: correlation(interp, truth)?,
        entropy_src,
        entropy_out,
        entropy_deviation: (entropy_src - entropy_out).abs(),
        avg_diff_error: pairwise_sum(&abs) / abs.len() as f64,
        max_diff: abs.iter().fold(0.0, |m, &v| m.max(v)),
        signed_mean_diff: pairwise_sum(d.data()) / d.len() as f64,
    })
}
