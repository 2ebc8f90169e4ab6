//! Orthonormal 2-D Haar (Daubechies-1) analysis and synthesis.
//!
//! Each level splits non-overlapping 2x2 blocks `[[a, b], [c, d]]` into
//!
//! ```text
//! LL = (a + b + c + d) / 2     HL = (a - b + c - d) / 2
//! LH = (a + b - c - d) / 2     HH = (a - b - c + d) / 2
//! ```
//!
//! HL is the column difference (horizontal detail), LH the row difference (vertical detail)
//! and HH the diagonal. Odd dimensions are padded by replicating the last row/column before
//! splitting; the unpadded size of every level is recorded so synthesis crops back exactly.
//! Padding makes the boundary non-orthonormal on odd sizes, so energy is only preserved
//! for dimensions divisible by `2^levels`.

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::par;

/// Which of the three detail orientations a subband holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Orientation {
    Hl,
    Lh,
    Hh,
}

impl Orientation {
    pub const ALL: [Orientation; 3] = [Orientation::Hl, Orientation::Lh, Orientation::Hh];

    pub fn name(self) -> &'static str {
        match self {
            Orientation::Hl => "HL",
            Orientation::Lh => "LH",
            Orientation::Hh => "HH",
        }
    }
}

/// Detail subbands of one decomposition level.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailLevel {
    pub hl: GrayImage,
    pub lh: GrayImage,
    pub hh: GrayImage,
    /// Unpadded size of the image that was split at this level.
    pub parent_rows: usize,
    pub parent_cols: usize,
}

impl DetailLevel {
    pub fn band(&self, orientation: Orientation) -> &GrayImage {
        match orientation {
            Orientation::Hl => &self.hl,
            Orientation::Lh => &self.lh,
            Orientation::Hh => &self.hh,
        }
    }

    pub fn band_mut(&mut self, orientation: Orientation) -> &mut GrayImage {
        match orientation {
            Orientation::Hl => &mut self.hl,
            Orientation::Lh => &mut self.lh,
            Orientation::Hh => &mut self.hh,
        }
    }
}

/// Multi-level decomposition. `details[0]` is the finest level.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition {
    pub approx: GrayImage,
    pub details: Vec<DetailLevel>,
    pub original_rows: usize,
    pub original_cols: usize,
}

impl WaveletDecomposition {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Finest diagonal subband, the usual input to noise estimation.
    pub fn finest_hh(&self) -> &GrayImage {
        &self.details[0].hh
    }

    /// Total number of coefficients across all subbands.
    pub fn coefficient_count(&self) -> usize {
        self.approx.len()
            + self
                .details
                .iter()
                .map(|d| d.hl.len() + d.lh.len() + d.hh.len())
                .sum::<usize>()
    }

    /// Sum of squares of every coefficient.
    pub fn energy(&self) -> f64 {
        let sq = |img: &GrayImage| img.pixels().iter().map(|v| v * v).collect::<Vec<_>>();
        let mut all = sq(&self.approx);
        for d in &self.details {
            all.extend(sq(&d.hl));
            all.extend(sq(&d.lh));
            all.extend(sq(&d.hh));
        }
        crate::image::compensated_sum(all)
    }
}

pub fn decompose(img: &GrayImage, levels: usize) -> Result<WaveletDecomposition> {
    if levels == 0 {
        return Err(Error::Parameter(
            "decomposition needs at least one level".into(),
        ));
    }
    let mut details = Vec::with_capacity(levels);
    let mut current = img.clone();
    for level in 1..=levels {
        if current.rows() < 2 || current.cols() < 2 {
            return Err(Error::Dimension(format!(
                "cannot split level {level}: {}x{} input is smaller than 2x2 \
                 ({}x{} image, {levels} levels requested)",
                current.rows(),
                current.cols(),
                img.rows(),
                img.cols()
            )));
        }
        let (ll, detail) = split(&current)?;
        details.push(detail);
        current = ll;
    }
    Ok(WaveletDecomposition {
        approx: current,
        details,
        original_rows: img.rows(),
        original_cols: img.cols(),
    })
}

fn split(parent: &GrayImage) -> Result<(GrayImage, DetailLevel)> {
    let (pr, pc) = (parent.rows(), parent.cols());
    let (hr, hc) = (pr.div_ceil(2), pc.div_ceil(2));
    // row-major planes: LL, HL, LH, HH interleaved per output row
    let mut planes = vec![0.0; 4 * hr * hc];
    par::fill_rows(&mut planes, 4 * hc, |r, out| {
        let r0 = 2 * r;
        let r1 = (2 * r + 1).min(pr - 1);
        for c in 0..hc {
            let c0 = 2 * c;
            let c1 = (2 * c + 1).min(pc - 1);
            let a = parent.get(r0, c0);
            let b = parent.get(r0, c1);
            let cc = parent.get(r1, c0);
            let d = parent.get(r1, c1);
            out[c] = (a + b + cc + d) / 2.0;
            out[hc + c] = (a - b + cc - d) / 2.0;
            out[2 * hc + c] = (a + b - cc - d) / 2.0;
            out[3 * hc + c] = (a - b - cc + d) / 2.0;
        }
    });
    let mut bands: [Vec<f64>; 4] = Default::default();
    for band in bands.iter_mut() {
        band.reserve(hr * hc);
    }
    for row in planes.chunks_exact(4 * hc) {
        for (k, band) in bands.iter_mut().enumerate() {
            band.extend_from_slice(&row[k * hc..(k + 1) * hc]);
        }
    }
    let [ll, hl, lh, hh] = bands;
    Ok((
        GrayImage::new(hr, hc, ll)?,
        DetailLevel {
            hl: GrayImage::new(hr, hc, hl)?,
            lh: GrayImage::new(hr, hc, lh)?,
            hh: GrayImage::new(hr, hc, hh)?,
            parent_rows: pr,
            parent_cols: pc,
        },
    ))
}

pub fn reconstruct(dec: &WaveletDecomposition) -> Result<GrayImage> {
    if dec.details.is_empty() {
        return Err(Error::Structure("no detail levels".into()));
    }
    let finest = &dec.details[0];
    if finest.parent_rows != dec.original_rows || finest.parent_cols != dec.original_cols {
        return Err(Error::Structure(format!(
            "finest level parent {}x{} does not match original {}x{}",
            finest.parent_rows, finest.parent_cols, dec.original_rows, dec.original_cols
        )));
    }
    let mut current = dec.approx.clone();
    for (i, level) in dec.details.iter().enumerate().rev() {
        if i + 1 < dec.details.len() {
            let coarser = &dec.details[i + 1];
            if (coarser.parent_rows, coarser.parent_cols) != (level.hl.rows(), level.hl.cols()) {
                return Err(Error::Structure(format!(
                    "level {} parent {}x{} does not match level {} subbands {}x{}",
                    i + 2,
                    coarser.parent_rows,
                    coarser.parent_cols,
                    i + 1,
                    level.hl.rows(),
                    level.hl.cols()
                )));
            }
        }
        current = merge(&current, level, i + 1)?;
    }
    Ok(current)
}

fn merge(ll: &GrayImage, level: &DetailLevel, index: usize) -> Result<GrayImage> {
    let (hr, hc) = (ll.rows(), ll.cols());
    for (name, band) in [("HL", &level.hl), ("LH", &level.lh), ("HH", &level.hh)] {
        if band.rows() != hr || band.cols() != hc {
            return Err(Error::Structure(format!(
                "level {index} {name} is {}x{}, approximation is {hr}x{hc}",
                band.rows(),
                band.cols()
            )));
        }
    }
    let (pr, pc) = (level.parent_rows, level.parent_cols);
    if pr.div_ceil(2) != hr || pc.div_ceil(2) != hc || pr == 0 || pc == 0 {
        return Err(Error::Structure(format!(
            "level {index} subbands {hr}x{hc} cannot come from a {pr}x{pc} parent"
        )));
    }
    let mut out = vec![0.0; pr * pc];
    par::fill_rows(&mut out, pc, |r, row| {
        let br = r / 2;
        let bottom = r % 2 == 1;
        for (c, px) in row.iter_mut().enumerate() {
            let bc = c / 2;
            let right = c % 2 == 1;
            let s = ll.get(br, bc);
            let h = level.hl.get(br, bc);
            let v = level.lh.get(br, bc);
            let d = level.hh.get(br, bc);
            *px = match (bottom, right) {
                (false, false) => (s + h + v + d) / 2.0,
                (false, true) => (s - h + v - d) / 2.0,
                (true, false) => (s + h - v - d) / 2.0,
                (true, true) => (s - h - v + d) / 2.0,
            };
        }
    });
    GrayImage::new(pr, pc, out)
}
