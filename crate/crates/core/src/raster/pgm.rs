//! PGM (portable graymap) reader and writer.
//!
//! Reads both the binary (P5) and ASCII (P2) variants with maxval up to
//! 65535; 16-bit binary samples are big-endian per the Netpbm convention.
//! Intensities are normalized to [0, 1] by division by maxval. The writer
//! always emits P5 with a fixed header layout (`P5\n<w> <h>\n<maxval>\n`)
//! so output is byte-for-byte deterministic.

use super::Raster;
use crate::error::{Error, Result};

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Scanner { bytes, pos: 0 }
    }

    /// Skips whitespace and `#` comments (comment runs to end of line).
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next_uint(&mut self, what: &str) -> Result<u64> {
        self.skip_separators();
        let start = self.pos;
        if start >= self.bytes.len() {
            return Err(Error::parse(start, format!("missing {what}")));
        }
        let mut value: u64 = 0;
        let mut digits = 0usize;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(self.bytes[self.pos] - b'0')))
                .ok_or_else(|| Error::parse(start, format!("{what} overflows")))?;
            self.pos += 1;
            digits += 1;
        }
        if digits == 0 {
            return Err(Error::parse(
                self.pos,
                format!("expected digit in {what}, found {:?}", self.bytes[self.pos] as char),
            ));
        }
        Ok(value)
    }
}

/// Parses a P5 or P2 PGM byte stream into a normalized raster.
/// Pixel (row r, col c) lands at `data[r*width + c]`.
pub fn read_pgm(bytes: &[u8]) -> Result<Raster> {
    if bytes.len() < 2 {
        return Err(Error::parse(0, "stream too short for PGM magic"));
    }
    let binary = match &bytes[..2] {
        b"P5" => true,
        b"P2" => false,
        other => {
            return Err(Error::parse(
                0,
                format!("bad magic {:?}, expected P5 or P2", String::from_utf8_lossy(other)),
            ))
        }
    };

    let mut sc = Scanner::new(bytes);
    sc.pos = 2;
    let width = sc.next_uint("width")? as usize;
    let height = sc.next_uint("height")? as usize;
    let maxval_at = {
        sc.skip_separators();
        sc.pos
    };
    let maxval = sc.next_uint("maxval")?;
    if maxval == 0 {
        return Err(Error::parse(maxval_at, "maxval 0 is not allowed"));
    }
    if maxval > 65535 {
        return Err(Error::parse(maxval_at, format!("maxval {maxval} > 65535")));
    }
    if width == 0 || height == 0 {
        return Err(Error::parse(2, format!("degenerate dimensions {width}x{height}")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse(2, "pixel count overflows"))?;
    let maxval_f = maxval as f64;

    let mut data = Vec::with_capacity(count);
    if binary {
        // Exactly one whitespace byte separates maxval from the payload.
        if sc.pos >= bytes.len() || !bytes[sc.pos].is_ascii_whitespace() {
            return Err(Error::parse(sc.pos, "missing whitespace before P5 payload"));
        }
        let payload = &bytes[sc.pos + 1..];
        let bytes_per = if maxval < 256 { 1 } else { 2 };
        let needed = count * bytes_per;
        if payload.len() < needed {
            return Err(Error::parse(
                sc.pos + 1 + payload.len(),
                format!("truncated payload: need {needed} bytes, have {}", payload.len()),
            ));
        }
        if bytes_per == 1 {
            for &b in &payload[..count] {
                data.push(f64::from(b) / maxval_f);
            }
        } else {
            for chunk in payload[..needed].chunks_exact(2) {
                let v = u16::from_be_bytes([chunk[0], chunk[1]]);
                if u64::from(v) > maxval {
                    return Err(Error::parse(sc.pos, format!("sample {v} exceeds maxval {maxval}")));
                }
                data.push(f64::from(v) / maxval_f);
            }
        }
    } else {
        for _ in 0..count {
            let at = sc.pos;
            let v = sc.next_uint("P2 sample")?;
            if v > maxval {
                return Err(Error::parse(at, format!("sample {v} exceeds maxval {maxval}")));
            }
            data.push(v as f64 / maxval_f);
        }
    }
    Raster::new(width, height, data)
}

/// Serializes a raster as binary PGM (P5). Values are clamped to [0, 1]
/// and quantized to `maxval` steps with round-to-nearest, so a write/read
/// round trip is exact up to `1/(2*maxval)`.
pub fn write_pgm(r: &Raster, maxval: u32) -> Result<Vec<u8>> {
    if maxval != 255 && maxval != 65535 {
        return Err(Error::arg(format!("maxval must be 255 or 65535, got {maxval}")));
    }
    let mut out = Vec::with_capacity(32 + r.len() * if maxval == 255 { 1 } else { 2 });
    out.extend_from_slice(format!("P5\n{} {}\n{}\n", r.width(), r.height(), maxval).as_bytes());
    let m = f64::from(maxval);
    for &v in r.data() {
        let q = (v.clamp(0.0, 1.0) * m).round() as u32;
        if maxval == 255 {
            out.push(q as u8);
        } else {
            out.extend_from_slice(&(q as u16).to_be_bytes());
        }
    }
    Ok(out)
}
