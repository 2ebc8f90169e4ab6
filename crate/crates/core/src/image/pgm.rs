//! Netpbm PGM reader (P2 ASCII and P5 binary) and P5 writer.

use super::GrayImage;
use crate::error::{Error, Result};

/// Sample depth for PGM export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmMaxval {
    Eight,
    Sixteen,
}

impl PgmMaxval {
    pub fn value(self) -> u32 {
        match self {
            PgmMaxval::Eight => 255,
            PgmMaxval::Sixteen => 65535,
        }
    }

    pub fn from_value(maxval: u32) -> Result<Self> {
        match maxval {
            255 => Ok(PgmMaxval::Eight),
            65535 => Ok(PgmMaxval::Sixteen),
            other => Err(Error::Parameter(format!(
                "PGM export maxval must be 255 or 65535, got {other}"
            ))),
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn unsigned(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: u64 = 0;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            value = value * 10 + u64::from(self.bytes[self.pos] - b'0');
            if value > u64::from(u32::MAX) {
                return Err(Error::parse(start, format!("{what} is too large")));
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(if self.pos >= self.bytes.len() {
                Error::parse(start, format!("unexpected end of data, expected {what}"))
            } else {
                Error::parse(start, format!("expected {what}"))
            });
        }
        if self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            return Err(Error::parse(
                self.pos,
                format!("unexpected byte after {what}"),
            ));
        }
        Ok(value as u32)
    }
}

/// Parses a P2 or P5 PGM. Sample values are returned verbatim, without rescaling.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 {
        return Err(Error::parse(0, "file too short for PGM magic"));
    }
    let ascii = match &bytes[..2] {
        b"P2" => true,
        b"P5" => false,
        _ => return Err(Error::parse(0, "unsupported magic, expected P2 or P5")),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let cols = cur.unsigned("width")? as usize;
    let rows = cur.unsigned("height")? as usize;
    let maxval_pos = cur.pos;
    let maxval = cur.unsigned("maxval")?;
    if cols == 0 || rows == 0 {
        return Err(Error::parse(2, format!("zero-sized image {cols}x{rows}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::parse(
            maxval_pos,
            format!("maxval {maxval} outside 1..=65535"),
        ));
    }
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::parse(2, "image dimensions overflow"))?;

    let mut pixels = Vec::with_capacity(count);
    if ascii {
        for _ in 0..count {
            let at = {
                cur.skip_whitespace_and_comments();
                cur.pos
            };
            let v = cur.unsigned("sample")?;
            if v > maxval {
                return Err(Error::parse(
                    at,
                    format!("sample {v} exceeds maxval {maxval}"),
                ));
            }
            pixels.push(f64::from(v));
        }
    } else {
        // exactly one whitespace byte separates maxval from the raster
        if cur.pos >= bytes.len() {
            return Err(Error::parse(cur.pos, "missing raster"));
        }
        let start = cur.pos + 1;
        let width = if maxval < 256 { 1 } else { 2 };
        let needed = count * width;
        if bytes.len() - start < needed {
            return Err(Error::parse(
                bytes.len(),
                format!(
                    "truncated raster: need {needed} bytes, have {}",
                    bytes.len() - start
                ),
            ));
        }
        for (i, chunk) in bytes[start..start + needed].chunks_exact(width).enumerate() {
            let v = if width == 1 {
                u32::from(chunk[0])
            } else {
                u32::from(u16::from_be_bytes([chunk[0], chunk[1]]))
            };
            if v > maxval {
                return Err(Error::parse(
                    start + i * width,
                    format!("sample {v} exceeds maxval {maxval}"),
                ));
            }
            pixels.push(f64::from(v));
        }
    }
    GrayImage::new(rows, cols, pixels)
}

/// Encodes as binary P5. Pixels are clamped to `[0, maxval]` and rounded half away from zero.
pub fn write_pgm(img: &GrayImage, maxval: PgmMaxval) -> Vec<u8> {
    let max = maxval.value();
    let mut out = format!("P5\n{} {}\n{}\n", img.cols(), img.rows(), max).into_bytes();
    let quantize = |p: f64| p.clamp(0.0, f64::from(max)).round() as u32;
    match maxval {
        PgmMaxval::Eight => out.extend(img.pixels().iter().map(|&p| quantize(p) as u8)),
        PgmMaxval::Sixteen => {
            for &p in img.pixels() {
                out.extend_from_slice(&(quantize(p) as u16).to_be_bytes());
            }
        }
    }
    out
}
