//! Contextual analysis driving adaptive kernel selection: local contrast,
//! cellular-neural-network dynamics, the HSIC dependence measure, and the
//! per-pixel kernel-choice map they produce.

mod cnn;
mod hsic;

pub use cnn::{cnn_run, saturate, CnnRun, CnnTemplate};
pub use hsic::{hsic, median_bandwidth, select_samples, SampleSet, Samples};

use crate::error::{Error, Result};
use crate::kernels::mirror_index;
use crate::raster::Raster;

/// Per-pixel blend weights in [0, 1]: 1 keeps detail sharp (nearest
/// neighbor), 0 favors the smooth cubic branch.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionMap {
    weights: Raster,
}

impl SelectionMap {
    pub fn new(weights: Raster) -> Result<Self> {
        if weights.data().iter().any(|&w| !(0.0..=1.0).contains(&w)) {
            return Err(Error::arg("selection weights must lie in [0, 1]"));
        }
        Ok(SelectionMap { weights })
    }

    pub fn all_sharp(width: usize, height: usize) -> Self {
        SelectionMap {
            weights: Raster::filled(width, height, 1.0),
        }
    }

    pub fn all_smooth(width: usize, height: usize) -> Self {
        SelectionMap {
            weights: Raster::zeros(width, height),
        }
    }

    pub fn weights(&self) -> &Raster {
        &self.weights
    }
}

/// Local contrast: per-pixel standard deviation of an odd square window
/// (mirror boundaries), normalized by the global intensity range so the
/// map is invariant to affine intensity rescaling. A flat raster maps to
/// all zeros.
pub fn contrast_map(r: &Raster, window: usize) -> Result<Raster> {
    if window.is_multiple_of(2) || window < 3 {
        return Err(Error::arg(format!("window {window} must be odd and >= 3")));
    }
    let (w, h) = r.dims();
    let half = (window / 2) as isize;
    let count = (window * window) as f64;
    let (lo, hi) = r.min_max();
    let range = if hi > lo { hi - lo } else { 1.0 };

    let data = r.data();
    let out = Raster::from_fn(w, h, |row, col| {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for dr in -half..=half {
            let rr = mirror_index(row as isize + dr, h);
            let base = rr * w;
            for dc in -half..=half {
                let cc = mirror_index(col as isize + dc, w);
                let v = data[base + cc];
                sum += v;
                sum_sq += v * v;
            }
        }
        let mean = sum / count;
        let var = (sum_sq / count - mean * mean).max(0.0);
        var.sqrt() / range
    });
    Ok(out)
}

/// Affine rescale of a raster onto [-1, 1] over its own min/max range.
/// A flat raster maps to all -1 (featureless end).
fn rescale_signed(r: &Raster) -> Raster {
    let (lo, hi) = r.min_max();
    if hi > lo {
        let s = 2.0 / (hi - lo);
        r.map(|v| (v - lo) * s - 1.0)
    } else {
        Raster::filled(r.width(), r.height(), -1.0)
    }
}

/// Builds the per-pixel kernel-selection map: contrast analysis feeds the
/// cellular network as its input (and initial state), converged outputs
/// map to weights via `w = (y + 1) / 2`, and `threshold` binarizes them.
/// The endpoints saturate: threshold 0 selects the sharp branch
/// everywhere, threshold 1 the smooth branch everywhere.
pub fn selection_map(
    r: &Raster,
    template: &CnnTemplate,
    window: usize,
    threshold: f64,
) -> Result<SelectionMap> {
    if !threshold.is_finite() || !(0.0..=1.0).contains(&threshold) {
        return Err(Error::arg(format!("threshold {threshold} outside [0, 1]")));
    }
    if threshold == 0.0 {
        return Ok(SelectionMap::all_sharp(r.width(), r.height()));
    }
    if threshold == 1.0 {
        return Ok(SelectionMap::all_smooth(r.width(), r.height()));
    }

    let contrast = contrast_map(r, window)?;
    let input = rescale_signed(&contrast);
    let run = cnn_run(template, &input, &input)?;
    let weights = run
        .outputs
        .map(|y| if (y + 1.0) / 2.0 >= threshold { 1.0 } else { 0.0 });
    SelectionMap::new(weights)
}
