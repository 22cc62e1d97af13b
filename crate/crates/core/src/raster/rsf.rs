//! RSF1: a minimal lossless float raster container.
//!
//! Layout: magic `RSF1`, then width and height as 4-byte little-endian
//! unsigned integers, then `width*height` 4-byte little-endian IEEE-754
//! values in row-major order. Raster intensities are held in f64 in
//! memory, so writing narrows to f32; a read/modify/write cycle of an
//! existing file is byte-exact, and values already representable in f32
//! survive a write/read round trip bit-for-bit.

use super::Raster;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"RSF1";
const HEADER_LEN: usize = 12;

/// Parses an RSF1 byte stream.
pub fn read_f32(bytes: &[u8]) -> Result<Raster> {
    if bytes.len() < 4 {
        return Err(Error::parse(0, "stream too short for RSF1 magic"));
    }
    if &bytes[..4] != MAGIC {
        if &bytes[..3] == b"RSF" {
            return Err(Error::UnsupportedVersion {
                found: String::from_utf8_lossy(&bytes[..4]).into_owned(),
                expected: "RSF1".to_owned(),
            });
        }
        return Err(Error::parse(0, format!("bad magic {:?}", String::from_utf8_lossy(&bytes[..4]))));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::parse(bytes.len(), "truncated RSF1 header"));
    }
    let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    if width == 0 || height == 0 {
        return Err(Error::parse(4, format!("degenerate dimensions {width}x{height}")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse(4, "pixel count overflows"))?;
    let needed = count
        .checked_mul(4)
        .ok_or_else(|| Error::parse(4, "payload size overflows"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != needed {
        return Err(Error::parse(
            HEADER_LEN + payload.len().min(needed),
            format!("payload is {} bytes, expected {needed}", payload.len()),
        ));
    }
    let mut data = Vec::with_capacity(count);
    for (i, chunk) in payload.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(Error::NonFinite(i));
        }
        data.push(f64::from(v));
    }
    Raster::new(width, height, data)
}

/// Serializes a raster as RSF1, narrowing each value to f32.
pub fn write_f32(r: &Raster) -> Result<Vec<u8>> {
    let width = u32::try_from(r.width())
        .map_err(|_| Error::arg(format!("width {} exceeds u32", r.width())))?;
    let height = u32::try_from(r.height())
        .map_err(|_| Error::arg(format!("height {} exceeds u32", r.height())))?;
    let mut out = Vec::with_capacity(HEADER_LEN + r.len() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&width.to_le_bytes());
    out.extend_from_slice(&height.to_le_bytes());
    for &v in r.data() {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    Ok(out)
}
