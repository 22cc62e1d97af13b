//! Raster resampling library built around three ideas: classical
//! interpolation kernels behind one separable engine, a Laplacian-pyramid
//! hybrid that applies nearest neighbor to the finest detail band and a
//! cubic B-spline to coarser structure, and per-pixel kernel selection
//! driven by local contrast through Chua-Yang cellular-network dynamics.
//! Quality metrics (correlation, entropy deviation, difference error)
//! and synthetic benchmark scenes round out the toolkit.
//!
//! Everything operates on a single domain type, [`raster::Raster`]:
//! row-major, finite f64 intensities, normalized to [0, 1] at file
//! ingest. All operations are pure; row-level parallelism never changes
//! results.

pub mod context;
pub mod error;
pub mod kernels;
pub mod metrics;
pub mod pyramid;
pub mod raster;
pub mod resampler;

pub use error::{Error, Result};
pub use raster::{GridTransform, Raster};
