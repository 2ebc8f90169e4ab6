//! Despeckling quality metrics: NMV/NV/NSD, MSD, blocked ENL, deflection ratio and
//! Pratt's figure of merit over Sobel edges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{compensated_sum, stats_of, GrayImage};
use crate::par;

/// Default ENL tile side.
pub const ENL_BLOCK: usize = 25;
/// Default FOM distance penalty.
pub const FOM_ALPHA: f64 = 1.0 / 9.0;

/// Mean square difference between the speckled and despeckled images.
pub fn msd(speckled: &GrayImage, despeckled: &GrayImage) -> Result<f64> {
    speckled.ensure_same_shape(despeckled, "MSD")?;
    let sq = speckled
        .pixels()
        .iter()
        .zip(despeckled.pixels())
        .map(|(a, b)| (a - b) * (a - b));
    Ok(compensated_sum(sq) / speckled.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnlEstimate {
    /// Mean of per-block `NMV^2 / NSD^2`; `+inf` when no block qualified.
    pub enl: f64,
    pub blocks_used: usize,
}

/// Tiles the image with non-overlapping `block x block` windows (ragged remainder dropped)
/// and averages `NMV^2 / NSD^2` over blocks with non-negligible deviation.
pub fn enl_blocked(img: &GrayImage, block: usize) -> Result<EnlEstimate> {
    if block == 0 {
        return Err(Error::Parameter("ENL block size must be positive".into()));
    }
    if img.rows() < block || img.cols() < block {
        return Err(Error::Dimension(format!(
            "{}x{} image is smaller than one {block}x{block} ENL block",
            img.rows(),
            img.cols()
        )));
    }
    let (br, bc) = (img.rows() / block, img.cols() / block);
    let per_block = par::map_range(br * bc, |k| {
        let (r0, c0) = ((k / bc) * block, (k % bc) * block);
        let mut values = Vec::with_capacity(block * block);
        for r in r0..r0 + block {
            values.extend_from_slice(&img.row(r)[c0..c0 + block]);
        }
        let s = stats_of(&values);
        let eps = 1e-9 * s.mean.abs() + 1e-12;
        (s.std > eps).then(|| s.mean * s.mean / s.variance)
    });
    let used: Vec<f64> = per_block.into_iter().flatten().collect();
    let enl = if used.is_empty() {
        f64::INFINITY
    } else {
        compensated_sum(used.iter().copied()) / used.len() as f64
    };
    Ok(EnlEstimate {
        enl,
        blocks_used: used.len(),
    })
}

/// Summand applied to each z-score in the deflection ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DrVariant {
    /// Mean z-score, exactly as the ratio is usually printed. Cancels to ~0.
    #[default]
    Plain,
    Abs,
    Square,
}

impl DrVariant {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "plain" => Ok(DrVariant::Plain),
            "abs" => Ok(DrVariant::Abs),
            "square" => Ok(DrVariant::Square),
            other => Err(Error::Parameter(format!(
                "unknown DR variant '{other}' (expected plain, abs or square)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DrVariant::Plain => "plain",
            DrVariant::Abs => "abs",
            DrVariant::Square => "square",
        }
    }
}

/// Deflection ratio `(1 / RC) sum((I_d - NMV) / NSD)`.
pub fn deflection_ratio(img: &GrayImage, variant: DrVariant) -> Result<f64> {
    let s = img.stats();
    if s.std <= 0.0 {
        return Err(Error::UndefinedMetric(
            "deflection ratio needs a non-constant image (NSD = 0)".into(),
        ));
    }
    let z = img.pixels().iter().map(|&p| {
        let z = (p - s.mean) / s.std;
        match variant {
            DrVariant::Plain => z,
            DrVariant::Abs => z.abs(),
            DrVariant::Square => z * z,
        }
    });
    Ok(compensated_sum(z) / img.len() as f64)
}

/// Binary edge mask, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    rows: usize,
    cols: usize,
    mask: Vec<bool>,
}

impl EdgeMap {
    pub fn new(rows: usize, cols: usize, mask: Vec<bool>) -> Result<Self> {
        if rows * cols != mask.len() || rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "edge map {rows}x{cols} with {} entries",
                mask.len()
            )));
        }
        Ok(Self { rows, cols, mask })
    }

    pub fn empty(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![false; rows * cols])
    }

    /// Non-zero pixels are edges.
    pub fn from_image(img: &GrayImage) -> Self {
        Self {
            rows: img.rows(),
            cols: img.cols(),
            mask: img.pixels().iter().map(|&p| p != 0.0).collect(),
        }
    }

    /// Edges as 1.0, background as 0.0.
    pub fn to_image(&self) -> GrayImage {
        let px = self
            .mask
            .iter()
            .map(|&e| if e { 1.0 } else { 0.0 })
            .collect();
        GrayImage::new(self.rows, self.cols, px).expect("edge map dimensions are valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.mask[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, edge: bool) {
        self.mask[row * self.cols + col] = edge;
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&e| e).count()
    }

    /// Edge coordinates in row-major order.
    pub fn points(&self) -> Vec<(i64, i64)> {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &e)| e)
            .map(|(i, _)| ((i / self.cols) as i64, (i % self.cols) as i64))
            .collect()
    }
}

/// Sobel gradient magnitude (edge-replicated borders) thresholded strictly.
pub fn detect_edges(img: &GrayImage, threshold: f64) -> Result<EdgeMap> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::Parameter(format!(
            "edge threshold must be positive, got {threshold}"
        )));
    }
    let mut magnitude = vec![0.0; img.len()];
    par::fill_rows(&mut magnitude, img.cols(), |r, row| {
        let r = r as isize;
        for (c, m) in row.iter_mut().enumerate() {
            let c = c as isize;
            let p = |dr: isize, dc: isize| img.get_clamped(r + dr, c + dc);
            let gx = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
            let gy = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
            *m = (gx * gx + gy * gy).sqrt();
        }
    });
    EdgeMap::new(
        img.rows(),
        img.cols(),
        magnitude.into_iter().map(|m| m > threshold).collect(),
    )
}

/// Pratt's figure of merit
/// `(1 / max(N_detected, N_ideal)) sum_i 1 / (1 + alpha d_i^2)`,
/// with `d_i` the exact Euclidean distance to the nearest ideal edge pixel.
pub fn pratt_fom(detected: &EdgeMap, ideal: &EdgeMap, alpha: f64) -> Result<f64> {
    if detected.rows != ideal.rows || detected.cols != ideal.cols {
        return Err(Error::Dimension(format!(
            "FOM edge maps {}x{} vs {}x{}",
            detected.rows, detected.cols, ideal.rows, ideal.cols
        )));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("FOM alpha {alpha}")));
    }
    let ideal_pts = ideal.points();
    if ideal_pts.is_empty() {
        return Err(Error::Parameter("ideal edge map has no edge pixels".into()));
    }
    let detected_pts = detected.points();
    if detected_pts.is_empty() {
        return Ok(0.0);
    }
    let terms = par::map_slice(&detected_pts, |&(r, c)| {
        let mut best = i64::MAX;
        for &(ir, ic) in &ideal_pts {
            let d2 = (r - ir) * (r - ir) + (c - ic) * (c - ic);
            if d2 < best {
                best = d2;
                if best == 0 {
                    break;
                }
            }
        }
        1.0 / (1.0 + alpha * best as f64)
    });
    let norm = detected_pts.len().max(ideal_pts.len()) as f64;
    Ok(compensated_sum(terms) / norm)
}

/// Knobs shared by every report row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSettings {
    pub edge_threshold: f64,
    pub enl_block: usize,
    pub fom_alpha: f64,
    pub dr_variant: DrVariant,
}

impl Default for MetricSettings {
    fn default() -> Self {
        Self {
            edge_threshold: 120.0,
            enl_block: ENL_BLOCK,
            fom_alpha: FOM_ALPHA,
            dr_variant: DrVariant::Plain,
        }
    }
}

/// All assessment values for one despeckled image. NMV, NV and NSD describe the
/// despeckled image itself; MSD compares it against the speckled input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub method: String,
    pub seed: Option<u64>,
    pub msd: f64,
    pub nmv: f64,
    pub nv: f64,
    pub nsd: f64,
    pub enl: f64,
    pub enl_blocks: usize,
    pub dr: f64,
    pub fom: f64,
    pub detected_edges: usize,
    pub ideal_edges: usize,
}

pub fn build_report(
    speckled: &GrayImage,
    despeckled: &GrayImage,
    ideal_edges: &EdgeMap,
    settings: &MetricSettings,
    method: &str,
    seed: Option<u64>,
) -> Result<MetricsReport> {
    speckled.ensure_same_shape(despeckled, "report images")?;
    if ideal_edges.rows() != despeckled.rows() || ideal_edges.cols() != despeckled.cols() {
        return Err(Error::Dimension(format!(
            "ideal edge map {}x{} vs image {}x{}",
            ideal_edges.rows(),
            ideal_edges.cols(),
            despeckled.rows(),
            despeckled.cols()
        )));
    }
    let s = despeckled.stats();
    let enl = enl_blocked(despeckled, settings.enl_block)?;
    let dr = deflection_ratio(despeckled, settings.dr_variant)?;
    let detected = detect_edges(despeckled, settings.edge_threshold)?;
    let fom = pratt_fom(&detected, ideal_edges, settings.fom_alpha)?;
    Ok(MetricsReport {
        method: method.to_string(),
        seed,
        msd: msd(speckled, despeckled)?,
        nmv: s.mean,
        nv: s.variance,
        nsd: s.std,
        enl: enl.enl,
        enl_blocks: enl.blocks_used,
        dr,
        fom,
        detected_edges: detected.count(),
        ideal_edges: ideal_edges.count(),
    })
}
