//! Resampling front door: classical single-kernel resampling, the
//! pyramid-hybrid scheme (nearest neighbor on the finest band, cubic
//! interpolation on deeper levels), and contextually adaptive blending
//! driven by a selection map.

use rayon::prelude::*;

use crate::context::{selection_map, CnnTemplate, SelectionMap};
use crate::error::{Error, Result};
use crate::kernels::{resample, sample, BoundaryPolicy, KernelSpec};
use crate::pyramid::{build, reconstruct, LaplacianPyramid};
use crate::raster::{GridTransform, Raster};

/// Which resampling method to run.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodSpec {
    /// One interpolation kernel everywhere.
    Classic(KernelSpec),
    /// Laplacian-pyramid hybrid with the given depth.
    HybridPyramid { levels: usize },
    /// Per-pixel blend between nearest neighbor and cubic convolution,
    /// driven by a cellular-network selection map.
    Adaptive {
        template: CnnTemplate,
        window: usize,
        threshold: f64,
    },
}

impl MethodSpec {
    pub fn hybrid(levels: usize) -> Self {
        MethodSpec::HybridPyramid { levels }
    }

    pub fn adaptive_default() -> Self {
        MethodSpec::Adaptive {
            template: CnnTemplate::contrast_selector(),
            window: 3,
            threshold: 0.5,
        }
    }
}

/// Runs the selected method over the affine grid transform.
pub fn run(
    r: &Raster,
    t: &GridTransform,
    out_w: usize,
    out_h: usize,
    method: &MethodSpec,
    bp: BoundaryPolicy,
) -> Result<Raster> {
    match method {
        MethodSpec::Classic(spec) => resample(r, t, out_w, out_h, *spec, bp),
        MethodSpec::HybridPyramid { levels } => hybrid_resample(r, t, out_w, out_h, *levels, bp),
        MethodSpec::Adaptive {
            template,
            window,
            threshold,
        } => {
            let sel = selection_map(r, template, *window, *threshold)?;
            adaptive_resample(r, t, out_w, out_h, &sel, bp)
        }
    }
}

/// Ceil-halving dimension chain `(w, h)` for levels `0..=levels`.
fn dims_chain(w: usize, h: usize, levels: usize) -> Vec<(usize, usize)> {
    let mut chain = Vec::with_capacity(levels + 1);
    let (mut cw, mut ch) = (w, h);
    chain.push((cw, ch));
    for _ in 0..levels {
        cw = cw.div_ceil(2);
        ch = ch.div_ceil(2);
        chain.push((cw, ch));
    }
    chain
}

/// The transform seen by pyramid level `k`: output level-k pixels map
/// through the full-resolution transform scaled by `2^k` on both sides.
/// For an affine map only the translation terms change.
fn level_transform(t: &GridTransform, k: usize) -> GridTransform {
    let s = (1u64 << k) as f64;
    GridTransform {
        a: t.a,
        b: t.b,
        c: t.c / s,
        d: t.d,
        e: t.e,
        f: t.f / s,
    }
}

/// Pyramid-hybrid resampling: decompose the source, warp the finest band
/// with nearest neighbor (preserving local contrast carried by sub-pixel
/// detail), warp deeper bands and the residual with the interpolating
/// cubic, then invert the pyramid on the output grid. Because every
/// per-level kernel is interpolating, the identity transform reproduces
/// the input up to reconstruction rounding.
pub fn hybrid_resample(
    r: &Raster,
    t: &GridTransform,
    out_w: usize,
    out_h: usize,
    levels: usize,
    bp: BoundaryPolicy,
) -> Result<Raster> {
    t.validate()?;
    if out_w == 0 || out_h == 0 {
        return Err(Error::dims(format!("output dimensions {out_w}x{out_h}")));
    }
    let src = build(r, levels)?;
    let chain = dims_chain(out_w, out_h, levels);

    let mut out_bands = Vec::with_capacity(levels);
    for (k, band) in src.bands().iter().enumerate() {
        let spec = if k == 0 {
            KernelSpec::NearestNeighbor
        } else {
            KernelSpec::cubic_convolution()
        };
        let tk = level_transform(t, k);
        let (w, h) = chain[k];
        out_bands.push(resample(band, &tk, w, h, spec, bp)?);
    }
    let t_res = level_transform(t, levels);
    let (w, h) = chain[levels];
    let out_residual = resample(src.residual(), &t_res, w, h, KernelSpec::cubic_convolution(), bp)?;

    let out_pyr = LaplacianPyramid::from_parts(out_bands, out_residual)?;
    reconstruct(&out_pyr)
}

/// Blends nearest-neighbor and cubic-convolution samples per output
/// pixel: `out = w*nn + (1-w)*cc`, with the weight field sampled
/// bilinearly at the source coordinates. The output always lies between
/// the two branch values.
pub fn adaptive_resample(
    r: &Raster,
    t: &GridTransform,
    out_w: usize,
    out_h: usize,
    sel: &SelectionMap,
    bp: BoundaryPolicy,
) -> Result<Raster> {
    t.validate()?;
    if !r.same_dims(sel.weights()) {
        return Err(Error::dims(format!(
            "selection map {}x{} vs raster {}x{}",
            sel.weights().width(),
            sel.weights().height(),
            r.width(),
            r.height()
        )));
    }
    if out_w == 0 || out_h == 0 {
        return Err(Error::dims(format!("output dimensions {out_w}x{out_h}")));
    }

    let sharp = KernelSpec::NearestNeighbor;
    let smooth = KernelSpec::cubic_convolution();
    let weights = sel.weights();

    let mut data = vec![0.0; out_w * out_h];
    data.par_chunks_mut(out_w).enumerate().for_each(|(j, row)| {
        let yj = j as f64;
        for (i, out) in row.iter_mut().enumerate() {
            let (sx, sy) = t.apply(i as f64, yj);
            let w = sample(weights, sx, sy, KernelSpec::Bilinear, BoundaryPolicy::Mirror)
                .clamp(0.0, 1.0);
            let nn = sample(r, sx, sy, sharp, bp);
            let cc = sample(r, sx, sy, smooth, bp);
            *out = w * nn + (1.0 - w) * cc;
        }
    });
    Raster::new(out_w, out_h, data)
}
