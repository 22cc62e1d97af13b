//! Synthetic ground-truth scenes for resampling benchmarks.
//!
//! Every scene is a pure function of its `SceneSpec`; stochastic kinds
//! draw from a ChaCha8 stream seeded with `spec.seed`, so outputs are
//! reproducible across builds and platforms.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use super::Raster;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SceneKind {
    /// Uniform raster at the `contrast` value.
    Constant,
    /// Horizontal intensity ramp, `value(r, c) = c / (width - 1)`.
    Ramp,
    /// Per-pixel parity checkerboard at `0.5 +/- contrast/2`.
    Checkerboard,
    /// One-pixel-wide lines whose intensity differs from the flat
    /// background by exactly `contrast`.
    ThinLines,
    /// Isolated single bright pixels on a flat background.
    PointTargets,
    /// Ramp background with seeded lines and point targets on top.
    Mixed,
}

impl SceneKind {
    pub const ALL: [SceneKind; 6] = [
        SceneKind::Constant,
        SceneKind::Ramp,
        SceneKind::Checkerboard,
        SceneKind::ThinLines,
        SceneKind::PointTargets,
        SceneKind::Mixed,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SceneKind::Constant => "constant",
            SceneKind::Ramp => "ramp",
            SceneKind::Checkerboard => "checkerboard",
            SceneKind::ThinLines => "thin-lines",
            SceneKind::PointTargets => "point-targets",
            SceneKind::Mixed => "mixed",
        }
    }
}

impl fmt::Display for SceneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SceneKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SceneKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::arg(format!("unknown scene kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneSpec {
    pub kind: SceneKind,
    pub size: usize,
    pub contrast: f64,
    pub seed: u64,
}

impl SceneSpec {
    pub fn new(kind: SceneKind, size: usize, contrast: f64, seed: u64) -> Result<Self> {
        let spec = SceneSpec {
            kind,
            size,
            contrast,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.size < 8 {
            return Err(Error::arg(format!("scene size {} < 8", self.size)));
        }
        if !self.contrast.is_finite() || !(0.0..=1.0).contains(&self.contrast) {
            return Err(Error::arg(format!("contrast {} outside [0, 1]", self.contrast)));
        }
        Ok(())
    }
}

/// A rendered scene plus the metadata benchmarks need: which pixels carry
/// the small high-contrast features, and the flat background level when
/// one exists.
#[derive(Debug, Clone)]
pub struct Scene {
    pub raster: Raster,
    /// Row-major mask of feature pixels (lines, point targets), when the
    /// kind has any.
    pub feature_mask: Option<Vec<bool>>,
    /// Flat background intensity for kinds built on one.
    pub background: Option<f64>,
}

/// Renders the raster alone. See [`render_scene`] for feature metadata.
pub fn synth_scene(spec: &SceneSpec) -> Result<Raster> {
    Ok(render_scene(spec)?.raster)
}

pub fn render_scene(spec: &SceneSpec) -> Result<Scene> {
    spec.validate()?;
    let n = spec.size;
    let contrast = spec.contrast;
    match spec.kind {
        SceneKind::Constant => Ok(Scene {
            raster: Raster::filled(n, n, contrast),
            feature_mask: None,
            background: Some(contrast),
        }),
        SceneKind::Ramp => {
            let denom = (n - 1) as f64;
            Ok(Scene {
                raster: Raster::from_fn(n, n, |_r, c| c as f64 / denom),
                feature_mask: None,
                background: None,
            })
        }
        SceneKind::Checkerboard => {
            let lo = 0.5 - contrast / 2.0;
            let hi = 0.5 + contrast / 2.0;
            Ok(Scene {
                raster: Raster::from_fn(n, n, |r, c| if (r + c) % 2 == 0 { lo } else { hi }),
                feature_mask: None,
                background: None,
            })
        }
        SceneKind::ThinLines => Ok(render_thin_lines(spec)),
        SceneKind::PointTargets => Ok(render_point_targets(spec)),
        SceneKind::Mixed => Ok(render_mixed(spec)),
    }
}

/// Greedily picks up to `count` positions from `lo..hi`, each at least
/// `gap` away from every previously accepted one, in seeded shuffle order.
fn pick_separated(rng: &mut ChaCha8Rng, lo: usize, hi: usize, count: usize, gap: usize) -> Vec<usize> {
    let mut candidates: Vec<usize> = (lo..hi).collect();
    candidates.shuffle(rng);
    let mut picked: Vec<usize> = Vec::with_capacity(count);
    for p in candidates {
        if picked.len() >= count {
            break;
        }
        if picked.iter().all(|&q| p.abs_diff(q) >= gap) {
            picked.push(p);
        }
    }
    picked
}

fn render_thin_lines(spec: &SceneSpec) -> Scene {
    let n = spec.size;
    let bg = (1.0 - spec.contrast) / 2.0;
    let line = bg + spec.contrast;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // Axis-aligned lines plus 45-degree diagonals; the diagonals are the
    // features whose single-pixel staircase decimation mangles hardest.
    let axis = (n * 3 / 64).max(2);
    let diagonal = (n * 2 / 64).max(1);
    let vertical = pick_separated(&mut rng, 2, n - 2, axis.div_ceil(2), 5);
    let horizontal = pick_separated(&mut rng, 2, n - 2, axis / 2, 5);
    let diag_starts = pick_separated(&mut rng, 2, n - 2, diagonal, 5);

    let mut data = vec![bg; n * n];
    let mut mask = vec![false; n * n];
    let mut stamp = |r: usize, c: usize| {
        data[r * n + c] = line;
        mask[r * n + c] = true;
    };
    for &c in &vertical {
        for r in 0..n {
            stamp(r, c);
        }
    }
    for &r in &horizontal {
        for c in 0..n {
            stamp(r, c);
        }
    }
    for &c0 in &diag_starts {
        for r in 0..n {
            stamp(r, (c0 + r) % n);
        }
    }
    Scene {
        raster: Raster::new(n, n, data).expect("thin-lines values are finite"),
        feature_mask: Some(mask),
        background: Some(bg),
    }
}

fn render_point_targets(spec: &SceneSpec) -> Scene {
    let n = spec.size;
    let bg = (1.0 - spec.contrast) / 2.0;
    let peak = bg + spec.contrast;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let count = (n * n / 256).max(3);
    let mut points: Vec<(usize, usize)> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while points.len() < count && attempts < 200 * count {
        attempts += 1;
        let r = rng.random_range(2..n - 2);
        let c = rng.random_range(2..n - 2);
        if points
            .iter()
            .all(|&(pr, pc)| pr.abs_diff(r).max(pc.abs_diff(c)) >= 3)
        {
            points.push((r, c));
        }
    }

    let mut data = vec![bg; n * n];
    let mut mask = vec![false; n * n];
    for &(r, c) in &points {
        data[r * n + c] = peak;
        mask[r * n + c] = true;
    }
    Scene {
        raster: Raster::new(n, n, data).expect("point-target values are finite"),
        feature_mask: Some(mask),
        background: Some(bg),
    }
}

fn render_mixed(spec: &SceneSpec) -> Scene {
    let n = spec.size;
    let contrast = spec.contrast;
    let denom = (n - 1) as f64;
    let base = |c: usize| 0.25 + 0.5 * c as f64 / denom;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut data: Vec<f64> = (0..n * n).map(|i| base(i % n)).collect();
    let mut mask = vec![false; n * n];
    let stamp = |r: usize, c: usize, data: &mut Vec<f64>, mask: &mut Vec<bool>| {
        let b = base(c);
        let sign = if b < 0.5 { 1.0 } else { -1.0 };
        data[r * n + c] = (b + sign * contrast).clamp(0.0, 1.0);
        mask[r * n + c] = true;
    };

    for &c in &pick_separated(&mut rng, 2, n - 2, (n / 32).max(1), 3) {
        for r in 0..n {
            stamp(r, c, &mut data, &mut mask);
        }
    }
    for &r in &pick_separated(&mut rng, 2, n - 2, (n / 32).max(1), 3) {
        for c in 0..n {
            stamp(r, c, &mut data, &mut mask);
        }
    }
    let points = (n * n / 512).max(2);
    for _ in 0..points {
        let r = rng.random_range(2..n - 2);
        let c = rng.random_range(2..n - 2);
        stamp(r, c, &mut data, &mut mask);
    }

    Scene {
        raster: Raster::new(n, n, data).expect("mixed values are finite"),
        feature_mask: Some(mask),
        background: None,
    }
}
