//! DSPK lossless raw format: `b"DSPK"`, u32 LE rows, u32 LE cols, then rows*cols f64 LE.

use super::GrayImage;
use crate::error::{Error, Result};

pub const RAW_MAGIC: &[u8; 4] = b"DSPK";
const HEADER_LEN: usize = 12;

pub fn write_raw(img: &GrayImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * img.len());
    out.extend_from_slice(RAW_MAGIC);
    out.extend_from_slice(&(img.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(img.cols() as u32).to_le_bytes());
    for &p in img.pixels() {
        out.extend_from_slice(&p.to_le_bytes());
    }
    out
}

pub fn read_raw(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 4 || &bytes[..4] != RAW_MAGIC {
        return Err(Error::parse(0, "bad magic, expected DSPK"));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::parse(bytes.len(), "truncated DSPK header"));
    }
    let rows = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| Error::parse(4, "dimensions overflow"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(Error::parse(
            HEADER_LEN,
            format!(
                "{rows}x{cols} image needs {expected} payload bytes, found {}",
                payload.len()
            ),
        ));
    }
    let pixels = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    GrayImage::new(rows, cols, pixels).map_err(|e| match e {
        Error::Domain(m) => Error::parse(HEADER_LEN, m),
        other => other,
    })
}
