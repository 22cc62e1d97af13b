//! Interpolation kernel weight functions and the separable affine-grid
//! resampling engine shared by every method.
//!
//! All kernels are evaluated as 1D weight functions of the signed offset
//! (in source pixels) between the sample coordinate and a source pixel
//! center; 2D sampling is the separable product. Per-phase taps are
//! renormalized to sum to one, which keeps constants exactly constant
//! even for the truncated windowed-sinc kernel.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::raster::{GridTransform, Raster};

/// Interpolation kernel selector plus shape parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// 1-tap nearest neighbor; ties at a fractional offset of exactly 0.5
    /// resolve toward the lower index.
    NearestNeighbor,
    /// 2-tap linear interpolator.
    Bilinear,
    /// 4-tap piecewise-cubic interpolator with shape parameter `a` in [-1, 0).
    CubicConvolution { a: f64 },
    /// 16-tap sinc interpolator damped by a Kaiser window of shape `beta`.
    KaiserSinc16 { beta: f64 },
    /// 4-tap cubic B-spline. A smoothing kernel: it does not reproduce
    /// stored samples at integer coordinates.
    CubicBSpline,
}

impl KernelSpec {
    /// Standard cubic-convolution shape delivering third-order accuracy.
    pub const DEFAULT_CUBIC_A: f64 = -0.5;
    /// Default Kaiser window shape.
    pub const DEFAULT_KAISER_BETA: f64 = 4.0;

    pub fn cubic_convolution() -> Self {
        KernelSpec::CubicConvolution {
            a: Self::DEFAULT_CUBIC_A,
        }
    }

    pub fn kaiser_sinc16() -> Self {
        KernelSpec::KaiserSinc16 {
            beta: Self::DEFAULT_KAISER_BETA,
        }
    }

    /// Half-width of the kernel support, in source pixels.
    pub fn support(&self) -> f64 {
        match self {
            KernelSpec::NearestNeighbor => 0.5,
            KernelSpec::Bilinear => 1.0,
            KernelSpec::CubicConvolution { .. } | KernelSpec::CubicBSpline => 2.0,
            KernelSpec::KaiserSinc16 { .. } => 8.0,
        }
    }

    /// Number of taps contributing at a generic fractional phase.
    pub fn tap_count(&self) -> usize {
        match self {
            KernelSpec::NearestNeighbor => 1,
            KernelSpec::Bilinear => 2,
            KernelSpec::CubicConvolution { .. } | KernelSpec::CubicBSpline => 4,
            KernelSpec::KaiserSinc16 { .. } => 16,
        }
    }

    /// True for kernels that reproduce stored samples at integer
    /// coordinates (everything except the B-spline smoother).
    pub fn is_interpolating(&self) -> bool {
        !matches!(self, KernelSpec::CubicBSpline)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::CubicConvolution { a } if !a.is_finite() || !(-1.0..0.0).contains(&a) => {
                Err(Error::arg(format!("cubic-convolution shape a = {a} outside [-1, 0)")))
            }
            KernelSpec::KaiserSinc16 { beta } if !beta.is_finite() || beta <= 0.0 => {
                Err(Error::arg(format!("Kaiser beta = {beta} must be > 0")))
            }
            _ => Ok(()),
        }
    }
}

/// Edge handling for source coordinates outside the raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Reflect about edge pixel centers: index -1 maps to 1.
    #[default]
    Mirror,
    /// Repeat edge values.
    Clamp,
}

impl BoundaryPolicy {
    #[inline]
    pub(crate) fn resolve(&self, idx: isize, n: usize) -> usize {
        match self {
            BoundaryPolicy::Mirror => mirror_index(idx, n),
            BoundaryPolicy::Clamp => idx.clamp(0, n as isize - 1) as usize,
        }
    }
}

/// Reflects an index about the edge pixel centers (period `2(n-1)`).
#[inline]
pub(crate) fn mirror_index(idx: isize, n: usize) -> usize {
    debug_assert!(n >= 1);
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut m = idx.rem_euclid(period);
    if m >= n as isize {
        m = period - m;
    }
    m as usize
}

fn normalized_sinc(t: f64) -> f64 {
    if t == 0.0 {
        1.0
    } else if t.fract() == 0.0 {
        // Exact zero at nonzero integers; sin(pi*t) would leave rounding dust.
        0.0
    } else {
        let p = PI * t;
        p.sin() / p
    }
}

/// Modified Bessel function of the first kind, order zero, by power series.
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

fn kaiser_window(u: f64, beta: f64) -> f64 {
    if u.abs() > 1.0 {
        return 0.0;
    }
    bessel_i0(beta * (1.0 - u * u).sqrt()) / bessel_i0(beta)
}

/// Kernel weight at signed offset `t` (source pixels). Zero outside the
/// support; even-symmetric except the documented nearest-neighbor tie.
pub fn weight(spec: KernelSpec, t: f64) -> f64 {
    debug_assert!(spec.validate().is_ok());
    match spec {
        KernelSpec::NearestNeighbor => {
            // Half-open cell (-0.5, 0.5]: the tie at offset 0.5 keeps the
            // lower source index.
            if t > -0.5 && t <= 0.5 {
                1.0
            } else {
                0.0
            }
        }
        KernelSpec::Bilinear => {
            let at = t.abs();
            if at < 1.0 {
                1.0 - at
            } else {
                0.0
            }
        }
        KernelSpec::CubicConvolution { a } => {
            let at = t.abs();
            if at < 1.0 {
                ((a + 2.0) * at - (a + 3.0)) * at * at + 1.0
            } else if at < 2.0 {
                ((a * at - 5.0 * a) * at + 8.0 * a) * at - 4.0 * a
            } else {
                0.0
            }
        }
        KernelSpec::KaiserSinc16 { beta } => {
            let at = t.abs();
            if at < 8.0 {
                normalized_sinc(t) * kaiser_window(t / 8.0, beta)
            } else {
                0.0
            }
        }
        KernelSpec::CubicBSpline => {
            let at = t.abs();
            if at < 1.0 {
                (0.5 * at - 1.0) * at * at + 2.0 / 3.0
            } else if at < 2.0 {
                let d = 2.0 - at;
                d * d * d / 6.0
            } else {
                0.0
            }
        }
    }
}

pub(crate) const MAX_TAPS: usize = 16;

/// One axis worth of resampling taps: weights for consecutive source
/// indices beginning at `floor(coord) + start`.
#[derive(Debug, Clone, Copy)]
pub struct TapSet {
    start: isize,
    taps: [f64; MAX_TAPS],
    len: usize,
}

impl TapSet {
    #[inline]
    pub fn start(&self) -> isize {
        self.start
    }

    #[inline]
    pub fn taps(&self) -> &[f64] {
        &self.taps[..self.len]
    }
}

/// Taps for a fractional `phase` in [0, 1), renormalized to sum to one.
pub fn weights_1d(spec: KernelSpec, phase: f64) -> TapSet {
    debug_assert!((0.0..1.0).contains(&phase), "phase {phase} outside [0,1)");
    let mut taps = [0.0; MAX_TAPS];

    if let KernelSpec::NearestNeighbor = spec {
        taps[0] = 1.0;
        // Offset 0.5 resolves to the lower index.
        let start = if phase <= 0.5 { 0 } else { 1 };
        return TapSet { start, taps, len: 1 };
    }

    let half = spec.support() as isize; // 1, 2, or 8
    let start = 1 - half;
    let len = spec.tap_count();
    let mut sum = 0.0;
    for (j, tap) in taps[..len].iter_mut().enumerate() {
        let offset = phase - (start + j as isize) as f64;
        let w = weight(spec, offset);
        *tap = w;
        sum += w;
    }
    for tap in &mut taps[..len] {
        *tap /= sum;
    }
    TapSet { start, taps, len }
}

/// Point-samples the raster at real source coordinates `(x, y)` by
/// separable kernel evaluation. The boundary policy makes every
/// coordinate valid; `x` and `y` must be finite.
pub fn sample(r: &Raster, x: f64, y: f64, spec: KernelSpec, bp: BoundaryPolicy) -> f64 {
    assert!(x.is_finite() && y.is_finite(), "sample coordinates must be finite");
    let ix = x.floor();
    let iy = y.floor();
    let hx = weights_1d(spec, x - ix);
    let vy = weights_1d(spec, y - iy);
    let ix = ix as isize;
    let iy = iy as isize;

    let (w, h) = r.dims();
    let data = r.data();
    let mut acc = 0.0;
    for (j, &wy) in vy.taps().iter().enumerate() {
        if wy == 0.0 {
            continue;
        }
        let row = bp.resolve(iy + vy.start() + j as isize, h);
        let base = row * w;
        let mut row_acc = 0.0;
        for (i, &wx) in hx.taps().iter().enumerate() {
            let col = bp.resolve(ix + hx.start() + i as isize, w);
            row_acc += wx * data[base + col];
        }
        acc += wy * row_acc;
    }
    acc
}

/// Resamples onto a `out_w` x `out_h` grid through the affine transform
/// `t` (output pixel coordinates to source coordinates). Output rows are
/// computed in parallel; results are bitwise independent of thread count.
pub fn resample(
    r: &Raster,
    t: &GridTransform,
    out_w: usize,
    out_h: usize,
    spec: KernelSpec,
    bp: BoundaryPolicy,
) -> Result<Raster> {
    t.validate()?;
    spec.validate()?;
    if out_w == 0 || out_h == 0 {
        return Err(Error::dims(format!("output dimensions {out_w}x{out_h}")));
    }

    let mut data = vec![0.0; out_w * out_h];
    data.par_chunks_mut(out_w).enumerate().for_each(|(j, row)| {
        let yj = j as f64;
        for (i, out) in row.iter_mut().enumerate() {
            let (sx, sy) = t.apply(i as f64, yj);
            *out = sample(r, sx, sy, spec, bp);
        }
    });
    Raster::new(out_w, out_h, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_specs() -> Vec<KernelSpec> {
        vec![
            KernelSpec::NearestNeighbor,
            KernelSpec::Bilinear,
            KernelSpec::cubic_convolution(),
            KernelSpec::kaiser_sinc16(),
            KernelSpec::CubicBSpline,
        ]
    }

    fn random_raster(w: usize, h: usize, seed: u64) -> Raster {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Raster::from_fn(w, h, |_, _| rng.random::<f64>())
    }

    #[test]
    fn bilinear_midpoint() {
        assert_eq!(weight(KernelSpec::Bilinear, 0.5), 0.5);
        assert_eq!(weight(KernelSpec::Bilinear, -0.5), 0.5);
    }

    #[test]
    fn cubic_convolution_closed_form_values() {
        let cc = KernelSpec::cubic_convolution();
        assert!((weight(cc, 0.5) - 0.5625).abs() < 1e-15);
        assert!((weight(cc, 1.5) - (-0.0625)).abs() < 1e-15);
        assert_eq!(weight(cc, 0.0), 1.0);
        assert_eq!(weight(cc, 1.0), 0.0);
        assert_eq!(weight(cc, 2.0), 0.0);
    }

    #[test]
    fn cubic_convolution_matches_scripted_polynomial() {
        // Independent evaluation of the two-piece closed form.
        let oracle = |a: f64, t: f64| -> f64 {
            let s = t.abs();
            if s < 1.0 {
                (a + 2.0) * s.powi(3) - (a + 3.0) * s.powi(2) + 1.0
            } else if s < 2.0 {
                a * s.powi(3) - 5.0 * a * s.powi(2) + 8.0 * a * s - 4.0 * a
            } else {
                0.0
            }
        };
        for &a in &[-1.0, -0.75, -0.5, -0.1] {
            let spec = KernelSpec::CubicConvolution { a };
            for i in 0..500 {
                let t = -2.5 + i as f64 * 0.01;
                assert!((weight(spec, t) - oracle(a, t)).abs() < 1e-14, "a={a} t={t}");
            }
        }
    }

    #[test]
    fn kaiser_sinc_is_exact_at_integers() {
        let kd = KernelSpec::kaiser_sinc16();
        assert_eq!(weight(kd, 0.0), 1.0);
        for n in 1..=7 {
            assert_eq!(weight(kd, n as f64), 0.0, "sinc zero at {n}");
            assert_eq!(weight(kd, -(n as f64)), 0.0);
        }
        assert_eq!(weight(kd, 8.0), 0.0);
    }

    #[test]
    fn bspline_values() {
        let b = KernelSpec::CubicBSpline;
        assert!((weight(b, 0.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((weight(b, 1.0) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(weight(b, 2.0), 0.0);
    }

    #[test]
    fn weights_are_even_symmetric() {
        for spec in all_specs() {
            for i in 0..800 {
                let t = 0.013 + i as f64 * 0.011; // avoids the NN tie at 0.5
                let (a, b) = (weight(spec, t), weight(spec, -t));
                assert!(
                    (a - b).abs() < 1e-15,
                    "{spec:?} asymmetric at t={t}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn support_is_compact() {
        for spec in all_specs() {
            let s = spec.support();
            for i in 1..100 {
                let t = s + i as f64 * 0.1;
                assert_eq!(weight(spec, t), 0.0, "{spec:?} at {t}");
                assert_eq!(weight(spec, -t), 0.0, "{spec:?} at {}", -t);
            }
        }
    }

    #[test]
    fn nearest_neighbor_tie_keeps_lower_index() {
        let ts = weights_1d(KernelSpec::NearestNeighbor, 0.5);
        assert_eq!(ts.start(), 0);
        let ts = weights_1d(KernelSpec::NearestNeighbor, 0.5 + 1e-9);
        assert_eq!(ts.start(), 1);
    }

    #[test]
    fn bilinear_taps() {
        let ts = weights_1d(KernelSpec::Bilinear, 0.25);
        assert_eq!(ts.start(), 0);
        assert_eq!(ts.taps(), &[0.75, 0.25]);
    }

    #[test]
    fn cubic_taps_at_zero_phase_are_unit_impulse() {
        let ts = weights_1d(KernelSpec::cubic_convolution(), 0.0);
        assert_eq!(ts.start(), -1);
        assert_eq!(ts.taps(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn kaiser_taps_sum_to_one() {
        let ts = weights_1d(KernelSpec::kaiser_sinc16(), 0.5);
        assert_eq!(ts.taps().len(), 16);
        let sum: f64 = ts.taps().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn partition_of_unity_across_phases() {
        for spec in all_specs() {
            for k in 0..1000 {
                let phase = k as f64 / 1000.0;
                let sum: f64 = weights_1d(spec, phase).taps().iter().sum();
                assert!(
                    (sum - 1.0).abs() <= 1e-12,
                    "{spec:?} phase {phase}: sum {sum}"
                );
            }
        }
    }

    #[test]
    fn constant_raster_sampled_anywhere_is_constant() {
        let r = Raster::filled(9, 7, 0.37);
        for spec in all_specs() {
            for &(x, y) in &[(0.0, 0.0), (4.3, 2.9), (-1.7, 8.4), (8.0, 6.0), (0.5, 0.5)] {
                for bp in [BoundaryPolicy::Mirror, BoundaryPolicy::Clamp] {
                    let v = sample(&r, x, y, spec, bp);
                    assert!((v - 0.37).abs() < 1e-12, "{spec:?} at ({x},{y}): {v}");
                }
            }
        }
    }

    #[test]
    fn bilinear_reproduces_ramp_exactly() {
        let r = Raster::from_fn(16, 4, |_, c| c as f64 / 15.0);
        let v = sample(&r, 2.3, 1.0, KernelSpec::Bilinear, BoundaryPolicy::Mirror);
        assert!((v - 2.3 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn cubic_reproduces_affine_surface_in_interior() {
        let surface = |x: f64, y: f64| 0.12 + 0.031 * x - 0.017 * y;
        let r = Raster::from_fn(16, 16, |row, col| surface(col as f64, row as f64));
        for spec in [KernelSpec::Bilinear, KernelSpec::cubic_convolution()] {
            for &(x, y) in &[(3.25, 4.75), (7.5, 7.1), (5.999, 3.001)] {
                let v = sample(&r, x, y, spec, BoundaryPolicy::Mirror);
                assert!(
                    (v - surface(x, y)).abs() < 1e-12,
                    "{spec:?} at ({x},{y}): {v} vs {}",
                    surface(x, y)
                );
            }
        }
    }

    #[test]
    fn impulse_row_tap_straddle_matches_normalized_tap() {
        // Impulse at column 8 of a 1x17 row; sampling 1.5 pixels away
        // picks up the corresponding cubic tap.
        let r = Raster::from_fn(17, 1, |_, c| if c == 8 { 1.0 } else { 0.0 });
        let v = sample(&r, 9.5, 0.0, KernelSpec::cubic_convolution(), BoundaryPolicy::Mirror);
        assert!((v - (-0.0625)).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn sample_at_integers_returns_stored_values_for_interpolating_kernels() {
        let r = random_raster(24, 24, 11);
        for spec in all_specs() {
            if !spec.is_interpolating() {
                continue;
            }
            let margin = spec.support().ceil() as usize;
            for y in margin..24 - margin {
                for x in margin..24 - margin {
                    let v = sample(&r, x as f64, y as f64, spec, BoundaryPolicy::Mirror);
                    assert!(
                        (v - r.get(y, x)).abs() <= 1e-9,
                        "{spec:?} at ({x},{y})"
                    );
                }
            }
        }
    }

    /// Direct 2D evaluation over every source pixel with outer-product
    /// weights; independent of the tap-window machinery. Valid when the
    /// support window stays inside the raster.
    fn brute_force_sample(r: &Raster, x: f64, y: f64, spec: KernelSpec) -> f64 {
        let mut acc = 0.0;
        let mut wsum = 0.0;
        for row in 0..r.height() {
            for col in 0..r.width() {
                let w = weight(spec, y - row as f64) * weight(spec, x - col as f64);
                acc += w * r.get(row, col);
                wsum += w;
            }
        }
        acc / wsum
    }

    #[test]
    fn separable_sampling_matches_brute_force_2d() {
        let r = random_raster(16, 16, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for spec in all_specs() {
            for _ in 0..24 {
                let x = 7.0 + rng.random::<f64>();
                let y = 7.0 + rng.random::<f64>();
                let got = sample(&r, x, y, spec, BoundaryPolicy::Mirror);
                let want = brute_force_sample(&r, x, y, spec);
                assert!(
                    (got - want).abs() <= 1e-9,
                    "{spec:?} at ({x},{y}): {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn mirror_boundary_reflects_about_edge_centers() {
        assert_eq!(mirror_index(-1, 5), 1);
        assert_eq!(mirror_index(-2, 5), 2);
        assert_eq!(mirror_index(5, 5), 3);
        assert_eq!(mirror_index(6, 5), 2);
        assert_eq!(mirror_index(8, 5), 0);
        assert_eq!(mirror_index(-9, 5), 1);
        assert_eq!(mirror_index(3, 1), 0);
    }

    #[test]
    fn clamp_boundary_repeats_edges() {
        let bp = BoundaryPolicy::Clamp;
        assert_eq!(bp.resolve(-3, 4), 0);
        assert_eq!(bp.resolve(9, 4), 3);
        assert_eq!(bp.resolve(2, 4), 2);
    }

    #[test]
    fn resample_identity_is_bit_exact_for_interpolating_kernels() {
        let r = random_raster(20, 14, 3);
        let id = GridTransform::identity();
        for spec in all_specs() {
            if !spec.is_interpolating() {
                continue;
            }
            let out = resample(&r, &id, 20, 14, spec, BoundaryPolicy::Mirror).unwrap();
            assert_eq!(out, r, "{spec:?} identity");
        }
    }

    #[test]
    fn resample_translation_shifts_ramp() {
        let r = Raster::from_fn(16, 8, |_, c| c as f64 / 15.0);
        let t = GridTransform::translation(1.0, 0.0);
        let out = resample(&r, &t, 16, 8, KernelSpec::Bilinear, BoundaryPolicy::Clamp).unwrap();
        for row in 0..8 {
            for col in 0..15 {
                assert!(
                    (out.get(row, col) - (col + 1) as f64 / 15.0).abs() < 1e-12,
                    "({row},{col})"
                );
            }
        }
    }

    #[test]
    fn resample_rejects_singular_transform() {
        let r = Raster::zeros(4, 4);
        let t = GridTransform {
            a: 1.0,
            b: 1.0,
            c: 0.0,
            d: 1.0,
            e: 1.0,
            f: 0.0,
        };
        assert!(matches!(
            resample(&r, &t, 4, 4, KernelSpec::Bilinear, BoundaryPolicy::Mirror),
            Err(Error::SingularTransform)
        ));
    }

    #[test]
    fn invalid_kernel_parameters_are_rejected() {
        assert!(KernelSpec::CubicConvolution { a: 0.5 }.validate().is_err());
        assert!(KernelSpec::CubicConvolution { a: -1.0 }.validate().is_ok());
        assert!(KernelSpec::KaiserSinc16 { beta: 0.0 }.validate().is_err());
    }

    proptest! {
        #[test]
        fn prop_partition_of_unity(phase in 0.0f64..1.0) {
            for spec in all_specs() {
                let sum: f64 = weights_1d(spec, phase).taps().iter().sum();
                prop_assert!((sum - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn prop_mirror_index_in_range(idx in -1000isize..1000, n in 1usize..64) {
            let m = mirror_index(idx, n);
            prop_assert!(m < n);
            // Reflection is an involution on the first period.
            if n > 1 {
                let period = 2 * (n as isize - 1);
                prop_assert_eq!(mirror_index(idx + period, n), m);
            }
        }
    }
}
