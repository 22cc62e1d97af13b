//! Core raster data model: a row-major grid of finite scalar intensities,
//! the affine grid transform used by every resampler, file I/O, and
//! synthetic benchmark scenes.

mod pgm;
mod rsf;
mod scene;

pub use pgm::{read_pgm, write_pgm};
pub use rsf::{read_f32, write_f32};
pub use scene::{render_scene, synth_scene, Scene, SceneKind, SceneSpec};

use crate::error::{Error, Result};

/// A single-band raster. Values are dimensionless intensities, normalized
/// to [0, 1] on file ingest; intermediate products (pyramid bands,
/// difference maps) may hold any finite value, including negatives.
///
/// Layout is row-major with the origin at the top-left pixel; pixel centers
/// sit at integer coordinates (x = column, y = row). Rasters are immutable
/// after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Raster {
    /// Builds a raster from row-major data. Rejects empty dimensions,
    /// length mismatches, and non-finite values.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::dims(format!("raster dimensions {width}x{height}")));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::dims(format!("raster size {width}x{height} overflows")))?;
        if data.len() != expected {
            return Err(Error::dims(format!(
                "data length {} != {width}x{height} = {expected}",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Raster {
            width,
            height,
            data,
        })
    }

    /// Builds a raster by evaluating `f(row, col)` at every pixel.
    /// Panics if `f` produces a non-finite value.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Raster::new(width, height, data).expect("generator produced invalid raster")
    }

    /// Constant-valued raster.
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Raster::new(width, height, vec![value; width * height])
            .expect("constant raster must be finite and non-empty")
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Raster::filled(width, height, 0.0)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Value at (row, col). Panics when out of bounds.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.height && col < self.width);
        self.data[row * self.width + col]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn same_dims(&self, other: &Raster) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Elementwise map into a new raster. Panics on non-finite results.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Raster {
        let data: Vec<f64> = self.data.iter().map(|&v| f(v)).collect();
        Raster::new(self.width, self.height, data).expect("map produced invalid raster")
    }

    /// Elementwise combination of two equally sized rasters.
    pub fn zip(&self, other: &Raster, f: impl Fn(f64, f64) -> f64) -> Result<Raster> {
        if !self.same_dims(other) {
            return Err(Error::dims(format!(
                "{}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        let data: Vec<f64> = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Raster::new(self.width, self.height, data)
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.data {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Values clamped into [0, 1]; used at export boundaries only.
    pub fn clamped(&self) -> Raster {
        self.map(|v| v.clamp(0.0, 1.0))
    }

    pub fn max_abs_diff(&self, other: &Raster) -> Result<f64> {
        let d = self.zip(other, |a, b| (a - b).abs())?;
        Ok(d.min_max().1)
    }
}

/// Affine map from output pixel coordinates to source coordinates:
/// `x_src = a*x_out + b*y_out + c`, `y_src = d*x_out + e*y_out + f`.
/// Units are source pixels per output pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridTransform {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl GridTransform {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self> {
        let t = GridTransform { a, b, c, d, e, f };
        t.validate()?;
        Ok(t)
    }

    pub fn identity() -> Self {
        GridTransform {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            e: 1.0,
            f: 0.0,
        }
    }

    /// Uniform scale: output pixel i maps to source coordinate `s*i`.
    pub fn scale(s: f64) -> Self {
        GridTransform {
            a: s,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            e: s,
            f: 0.0,
        }
    }

    pub fn translation(dx: f64, dy: f64) -> Self {
        GridTransform {
            a: 1.0,
            b: 0.0,
            c: dx,
            d: 0.0,
            e: 1.0,
            f: dy,
        }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.e - self.b * self.d
    }

    pub fn validate(&self) -> Result<()> {
        let coeffs = [self.a, self.b, self.c, self.d, self.e, self.f];
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::arg("grid transform coefficients must be finite"));
        }
        if self.determinant() == 0.0 {
            return Err(Error::SingularTransform);
        }
        Ok(())
    }

    /// Maps output pixel coordinates to source coordinates.
    #[inline]
    pub fn apply(&self, x_out: f64, y_out: f64) -> (f64, f64) {
        (
            self.a * x_out + self.b * y_out + self.c,
            self.d * x_out + self.e * y_out + self.f,
        )
    }
}
