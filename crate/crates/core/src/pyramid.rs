//! Gaussian/Laplacian pyramid construction and inversion.
//!
//! The generating kernel is the classic 5-tap blur (0.05, 0.25, 0.40,
//! 0.25, 0.05), i.e. generating parameter 0.4, with mirror boundaries.
//! Odd dimensions halve with ceil semantics; each band stores the target
//! dimensions implicitly, so reconstruction is unambiguous.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::mirror_index;
use crate::raster::Raster;

const BLUR: [f64; 5] = [0.05, 0.25, 0.40, 0.25, 0.05];

/// Band-pass level stack plus the low-pass residual.
///
/// `bands[0]` has the source dimensions; each deeper level halves with
/// ceil semantics, and the residual matches one halving below the last
/// band. Band values are signed; nothing here clamps.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianPyramid {
    bands: Vec<Raster>,
    residual: Raster,
}

impl LaplacianPyramid {
    /// Assembles a pyramid from parts, validating the dimension chain.
    pub fn from_parts(bands: Vec<Raster>, residual: Raster) -> Result<Self> {
        if bands.is_empty() {
            return Err(Error::arg("pyramid needs at least one band"));
        }
        for k in 0..bands.len() {
            let (w, h) = bands[k].dims();
            let next = if k + 1 < bands.len() {
                bands[k + 1].dims()
            } else {
                residual.dims()
            };
            let want = (w.div_ceil(2), h.div_ceil(2));
            if next != want {
                return Err(Error::dims(format!(
                    "level {} is {}x{}, expected {}x{} below {w}x{h}",
                    k + 1,
                    next.0,
                    next.1,
                    want.0,
                    want.1
                )));
            }
        }
        Ok(LaplacianPyramid { bands, residual })
    }

    pub fn levels(&self) -> usize {
        self.bands.len()
    }

    pub fn bands(&self) -> &[Raster] {
        &self.bands
    }

    pub fn residual(&self) -> &Raster {
        &self.residual
    }

    pub fn into_parts(self) -> (Vec<Raster>, Raster) {
        (self.bands, self.residual)
    }
}

/// Blur + decimate along one axis: `out[k] = sum_m BLUR[m] * in[2k + m - 2]`.
/// `src` is indexed with `stride` so the same code serves rows and columns.
fn reduce_axis(src: &[f64], n: usize, stride: usize, out: &mut [f64]) {
    let half = n.div_ceil(2);
    debug_assert_eq!(out.len(), half);
    for (k, out_v) in out.iter_mut().enumerate() {
        let center = 2 * k as isize;
        let mut acc = 0.0;
        for (m, &w) in BLUR.iter().enumerate() {
            let idx = mirror_index(center + m as isize - 2, n);
            acc += w * src[idx * stride];
        }
        *out_v = acc;
    }
}

/// Zero-insert upsample + doubled-tap blur along one axis, from `n`
/// samples to `target` (either `2n - 1` or `2n`).
fn expand_axis(src: &[f64], n: usize, stride: usize, target: usize, out: &mut [f64]) {
    debug_assert_eq!(out.len(), target);
    for (i, out_v) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (m, &w) in BLUR.iter().enumerate() {
            let j = i as isize - (m as isize - 2);
            if j % 2 == 0 {
                let idx = mirror_index(j / 2, n);
                acc += w * src[idx * stride];
            }
        }
        *out_v = 2.0 * acc;
    }
}

/// One pyramid REDUCE step: separable 5-tap blur, decimate by two per
/// axis, ceil-halved output dimensions.
pub fn reduce(r: &Raster) -> Result<Raster> {
    let (w, h) = r.dims();
    if w < 2 || h < 2 {
        return Err(Error::dims(format!("cannot reduce a {w}x{h} raster")));
    }
    let half_w = w.div_ceil(2);
    let half_h = h.div_ceil(2);

    // Horizontal pass.
    let mut rows = vec![0.0; half_w * h];
    rows.par_chunks_mut(half_w)
        .zip(r.data().par_chunks(w))
        .for_each(|(out_row, in_row)| reduce_axis(in_row, w, 1, out_row));

    // Vertical pass over columns of the intermediate.
    let mut data = vec![0.0; half_w * half_h];
    let mut cols: Vec<Vec<f64>> = vec![vec![0.0; half_h]; half_w];
    cols.par_iter_mut().enumerate().for_each(|(c, col)| {
        reduce_axis(&rows[c..], h, half_w, col);
    });
    for (c, col) in cols.iter().enumerate() {
        for (k, &v) in col.iter().enumerate() {
            data[k * half_w + c] = v;
        }
    }
    Raster::new(half_w, half_h, data)
}

/// One pyramid EXPAND step to the given target dimensions, which must be
/// `2n - 1` or `2n` per axis.
pub fn expand(r: &Raster, target_w: usize, target_h: usize) -> Result<Raster> {
    let (w, h) = r.dims();
    for (t, n, axis) in [(target_w, w, "width"), (target_h, h, "height")] {
        if t != 2 * n && t != 2 * n - 1 {
            return Err(Error::dims(format!(
                "expand target {axis} {t} not in {{{}, {}}}",
                2 * n - 1,
                2 * n
            )));
        }
    }

    // Horizontal pass.
    let mut rows = vec![0.0; target_w * h];
    rows.par_chunks_mut(target_w)
        .zip(r.data().par_chunks(w))
        .for_each(|(out_row, in_row)| expand_axis(in_row, w, 1, target_w, out_row));

    // Vertical pass.
    let mut data = vec![0.0; target_w * target_h];
    let mut cols: Vec<Vec<f64>> = vec![vec![0.0; target_h]; target_w];
    cols.par_iter_mut().enumerate().for_each(|(c, col)| {
        expand_axis(&rows[c..], h, target_w, target_h, col);
    });
    for (c, col) in cols.iter().enumerate() {
        for (k, &v) in col.iter().enumerate() {
            data[k * target_w + c] = v;
        }
    }
    Raster::new(target_w, target_h, data)
}

/// Builds a `levels`-deep Laplacian pyramid: each band is the difference
/// between a Gaussian level and the expansion of the next one, and the
/// residual is the deepest Gaussian level.
pub fn build(r: &Raster, levels: usize) -> Result<LaplacianPyramid> {
    if levels == 0 {
        return Err(Error::arg("pyramid depth must be at least 1"));
    }
    // Every Gaussian level that gets reduced must be at least 2x2.
    let (mut cw, mut ch) = r.dims();
    for _ in 0..levels {
        if cw < 2 || ch < 2 {
            return Err(Error::TooManyLevels {
                requested: levels,
                width: r.width(),
                height: r.height(),
            });
        }
        cw = cw.div_ceil(2);
        ch = ch.div_ceil(2);
    }

    let mut bands = Vec::with_capacity(levels);
    let mut current = r.clone();
    for _ in 0..levels {
        let next = reduce(&current)?;
        let up = expand(&next, current.width(), current.height())?;
        bands.push(current.zip(&up, |g, e| g - e)?);
        current = next;
    }
    LaplacianPyramid::from_parts(bands, current)
}

/// Inverts [`build`]: starting from the residual, expand and add each
/// band top-down. Exact up to floating-point rounding.
pub fn reconstruct(p: &LaplacianPyramid) -> Result<Raster> {
    let mut current = p.residual.clone();
    for band in p.bands.iter().rev() {
        let up = expand(&current, band.width(), band.height())?;
        current = band.zip(&up, |b, e| b + e)?;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_raster(w: usize, h: usize, seed: u64) -> Raster {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Raster::from_fn(w, h, |_, _| rng.random::<f64>())
    }

    /// Naive full-2D reduce: 5x5 outer-product blur at even coordinates.
    fn brute_reduce(r: &Raster) -> Raster {
        let (w, h) = r.dims();
        Raster::from_fn(w.div_ceil(2), h.div_ceil(2), |out_r, out_c| {
            let mut acc = 0.0;
            for (dy, &wy) in BLUR.iter().enumerate() {
                for (dx, &wx) in BLUR.iter().enumerate() {
                    let rr = mirror_index(2 * out_r as isize + dy as isize - 2, h);
                    let cc = mirror_index(2 * out_c as isize + dx as isize - 2, w);
                    acc += wy * wx * r.get(rr, cc);
                }
            }
            acc
        })
    }

    /// Naive full-2D expand: zero-insert then 5x5 blur with 4x gain.
    fn brute_expand(r: &Raster, tw: usize, th: usize) -> Raster {
        let (w, h) = r.dims();
        Raster::from_fn(tw, th, |out_r, out_c| {
            let mut acc = 0.0;
            for (dy, &wy) in BLUR.iter().enumerate() {
                for (dx, &wx) in BLUR.iter().enumerate() {
                    let jy = out_r as isize - (dy as isize - 2);
                    let jx = out_c as isize - (dx as isize - 2);
                    if jy % 2 == 0 && jx % 2 == 0 {
                        let rr = mirror_index(jy / 2, h);
                        let cc = mirror_index(jx / 2, w);
                        acc += wy * wx * r.get(rr, cc);
                    }
                }
            }
            4.0 * acc
        })
    }

    #[test]
    fn reduce_preserves_constants() {
        let r = Raster::filled(9, 6, 0.42);
        let out = reduce(&r).unwrap();
        assert_eq!(out.dims(), (5, 3));
        for &v in out.data() {
            assert!((v - 0.42).abs() < 1e-15);
        }
    }

    #[test]
    fn reduce_matches_brute_force_on_ramp() {
        let r = Raster::from_fn(4, 4, |_, c| c as f64 / 3.0);
        let got = reduce(&r).unwrap();
        let want = brute_reduce(&r);
        assert_eq!(got.dims(), (2, 2));
        assert!(got.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn reduce_matches_brute_force_on_random() {
        for &(w, h) in &[(5, 5), (8, 3), (7, 10), (16, 16)] {
            let r = random_raster(w, h, w as u64 * 31 + h as u64);
            let got = reduce(&r).unwrap();
            let want = brute_reduce(&r);
            assert!(
                got.max_abs_diff(&want).unwrap() < 1e-12,
                "reduce {w}x{h} mismatch"
            );
        }
    }

    #[test]
    fn reduce_uses_ceil_dimensions() {
        assert_eq!(reduce(&Raster::zeros(5, 5)).unwrap().dims(), (3, 3));
    }

    #[test]
    fn reduce_rejects_tiny_rasters() {
        assert!(reduce(&Raster::zeros(1, 4)).is_err());
    }

    #[test]
    fn expand_preserves_constants() {
        let r = Raster::filled(3, 4, 0.8);
        for dims in [(5, 7), (6, 8), (5, 8)] {
            let out = expand(&r, dims.0, dims.1).unwrap();
            assert_eq!(out.dims(), dims);
            for &v in out.data() {
                assert!((v - 0.8).abs() < 1e-15, "target {dims:?}");
            }
        }
    }

    #[test]
    fn expand_rejects_bad_targets() {
        let r = Raster::zeros(3, 3);
        assert!(expand(&r, 7, 6).is_err());
        assert!(expand(&r, 4, 5).is_err());
    }

    #[test]
    fn expand_impulse_matches_brute_force() {
        let r = Raster::from_fn(2, 2, |row, col| if row == 0 && col == 0 { 1.0 } else { 0.0 });
        let got = expand(&r, 4, 4).unwrap();
        let want = brute_expand(&r, 4, 4);
        assert!(got.max_abs_diff(&want).unwrap() < 1e-14);
    }

    #[test]
    fn expand_matches_brute_force_on_random() {
        for &(w, h, tw, th) in &[(3, 5, 6, 9), (4, 4, 7, 8), (6, 2, 11, 4)] {
            let r = random_raster(w, h, 100 + w as u64);
            let got = expand(&r, tw, th).unwrap();
            let want = brute_expand(&r, tw, th);
            assert!(
                got.max_abs_diff(&want).unwrap() < 1e-12,
                "expand {w}x{h} -> {tw}x{th}"
            );
        }
    }

    #[test]
    fn expand_of_reduced_constant_is_constant() {
        let r = Raster::filled(8, 8, 0.3);
        let down = reduce(&r).unwrap();
        let up = expand(&down, 8, 8).unwrap();
        for &v in up.data() {
            assert!((v - 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_image_bands_are_zero() {
        let p = build(&Raster::filled(16, 16, 0.6), 3).unwrap();
        for band in p.bands() {
            for &v in band.data() {
                assert!(v.abs() < 1e-15);
            }
        }
        for &v in p.residual().data() {
            assert!((v - 0.6).abs() < 1e-14);
        }
    }

    #[test]
    fn single_level_matches_definition() {
        let r = random_raster(12, 9, 2);
        let p = build(&r, 1).unwrap();
        assert_eq!(p.levels(), 1);
        let g1 = reduce(&r).unwrap();
        let want_band = r.zip(&expand(&g1, 12, 9).unwrap(), |a, b| a - b).unwrap();
        assert!(p.bands()[0].max_abs_diff(&want_band).unwrap() < 1e-15);
        assert!(p.residual().max_abs_diff(&g1).unwrap() < 1e-15);
    }

    #[test]
    fn build_matches_independent_pyramid_oracle() {
        // Re-derive the whole pyramid from the brute-force reduce/expand.
        let r = random_raster(32, 32, 9);
        let p = build(&r, 3).unwrap();
        let mut current = r;
        for k in 0..3 {
            let next = brute_reduce(&current);
            let up = brute_expand(&next, current.width(), current.height());
            let band = current.zip(&up, |g, e| g - e).unwrap();
            assert!(
                p.bands()[k].max_abs_diff(&band).unwrap() < 1e-9,
                "band {k} deviates from oracle"
            );
            current = next;
        }
        assert!(p.residual().max_abs_diff(&current).unwrap() < 1e-9);
    }

    #[test]
    fn build_rejects_excessive_depth() {
        let r = Raster::zeros(8, 8);
        assert!(build(&r, 3).is_ok()); // 8 -> 4 -> 2 -> 1
        assert!(matches!(
            build(&r, 4),
            Err(Error::TooManyLevels { .. })
        ));
    }

    #[test]
    fn perfect_reconstruction_including_odd_dims() {
        for &(w, h, k) in &[(16, 16, 1), (17, 31, 3), (33, 20, 4), (9, 13, 2)] {
            let r = random_raster(w, h, w as u64 * 7 + h as u64 + k as u64);
            let p = build(&r, k).unwrap();
            let back = reconstruct(&p).unwrap();
            let err = back.max_abs_diff(&r).unwrap();
            assert!(err <= 1e-5, "{w}x{h} K={k}: err {err}");
        }
    }

    #[test]
    fn reconstruct_zero_bands_is_expand_chain_of_residual() {
        let residual = random_raster(4, 4, 21);
        let bands = vec![Raster::zeros(13, 15), Raster::zeros(7, 8)];
        let p = LaplacianPyramid::from_parts(bands, residual.clone()).unwrap();
        let got = reconstruct(&p).unwrap();
        let want = expand(&expand(&residual, 7, 8).unwrap(), 13, 15).unwrap();
        assert!(got.max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn reconstruction_is_linear_in_scale() {
        let r = random_raster(24, 18, 4);
        let p = build(&r, 2).unwrap();
        let (bands, residual) = p.clone().into_parts();
        let scaled = LaplacianPyramid::from_parts(
            bands.iter().map(|b| b.map(|v| 3.0 * v)).collect(),
            residual.map(|v| 3.0 * v),
        )
        .unwrap();
        let a = reconstruct(&p).unwrap().map(|v| 3.0 * v);
        let b = reconstruct(&scaled).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
    }

    #[test]
    fn from_parts_rejects_inconsistent_dims() {
        let bands = vec![Raster::zeros(8, 8)];
        let residual = Raster::zeros(3, 4);
        assert!(LaplacianPyramid::from_parts(bands, residual).is_err());
    }
}
