//! Library side of the `regrid` CLI: config parsing, the benchmark
//! engine, and raster file helpers, kept separate from argument handling
//! so integration tests can drive them directly.

pub mod bench;
pub mod config;

use std::path::Path;

use anyhow::{bail, Context, Result};
use regrid_core::raster::{read_f32, read_pgm, write_f32, write_pgm, Raster};

/// Reads a raster, picking the format from the file extension
/// (`.pgm` / `.rsf`).
pub fn read_raster(path: &Path) -> Result<Raster> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let raster = match extension(path)? {
        "pgm" => read_pgm(&bytes),
        "rsf" => read_f32(&bytes),
        _ => unreachable!(),
    };
    raster.with_context(|| format!("parsing {}", path.display()))
}

/// Writes a raster, picking the format from the file extension. PGM
/// output is clamped to [0, 1] and quantized; RSF keeps raw values.
pub fn write_raster(path: &Path, r: &Raster) -> Result<()> {
    let bytes = match extension(path)? {
        "pgm" => write_pgm(&r.clamped(), 255)?,
        "rsf" => write_f32(r)?,
        _ => unreachable!(),
    };
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn extension(path: &Path) -> Result<&'static str> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("pgm") => Ok("pgm"),
        Some("rsf") => Ok("rsf"),
        other => bail!(
            "unsupported raster extension {:?} for {} (use .pgm or .rsf)",
            other.unwrap_or(""),
            path.display()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let r = Raster::from_fn(5, 4, |row, col| (row as f64 * 0.25 + col as f64 * 0.125) % 1.0);

        let rsf = dir.path().join("a.rsf");
        write_raster(&rsf, &r).unwrap();
        let back = read_raster(&rsf).unwrap();
        assert_eq!(back.dims(), (5, 4));

        let pgm = dir.path().join("a.pgm");
        write_raster(&pgm, &r).unwrap();
        let back = read_raster(&pgm).unwrap();
        assert!(back.max_abs_diff(&r).unwrap() <= 1.0 / 510.0);

        assert!(write_raster(&dir.path().join("a.png"), &r).is_err());
    }
}
