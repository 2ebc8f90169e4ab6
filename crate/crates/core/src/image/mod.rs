//! Grayscale image value type, pixel statistics and file formats.

mod pgm;
mod raw;

pub use pgm::{read_pgm, write_pgm, PgmMaxval};
pub use raw::{read_raw, write_raw, RAW_MAGIC};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Dense row-major grid of finite real intensities.
///
/// Pixels are kept as `f64` whatever the on-disk depth: wavelet coefficients and the
/// additive noise image are signed reals.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

/// Population mean, variance and standard deviation of an image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelStats {
    pub mean: f64,
    pub variance: f64,
    pub std: f64,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "image must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if rows.checked_mul(cols) != Some(pixels.len()) {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} image needs {} pixels, got {}",
                rows.saturating_mul(cols),
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|p| !p.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite pixel {} at ({}, {})",
                pixels[i],
                i / cols,
                i % cols
            )));
        }
        Ok(Self { rows, cols, pixels })
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows.saturating_mul(cols)])
    }

    /// Builds an image by evaluating `f(row, col)` for every pixel.
    pub fn from_fn<F>(rows: usize, cols: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> f64 + Sync + Send,
    {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "image must be at least 1x1, got {rows}x{cols}"
            )));
        }
        let mut pixels = vec![0.0; rows * cols];
        par::fill_rows(&mut pixels, cols, |r, row| {
            for (c, p) in row.iter_mut().enumerate() {
                *p = f(r, c);
            }
        });
        Self::new(rows, cols, pixels)
    }

    /// Builds an image from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let pixels = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::new(rows.len(), cols, pixels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false; images have at least one pixel.
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.cols + col]
    }

    /// Pixel lookup with edge replication for out-of-range coordinates.
    #[inline]
    pub fn get_clamped(&self, row: isize, col: isize) -> f64 {
        let r = row.clamp(0, self.rows as isize - 1) as usize;
        let c = col.clamp(0, self.cols as isize - 1) as usize;
        self.pixels[r * self.cols + c]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.pixels[row * self.cols..(row + 1) * self.cols]
    }

    pub fn same_shape(&self, other: &GrayImage) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub(crate) fn ensure_same_shape(&self, other: &GrayImage, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn map<F>(&self, mut f: F) -> Result<GrayImage>
    where
        F: FnMut(f64) -> f64,
    {
        Self::new(
            self.rows,
            self.cols,
            self.pixels.iter().map(|&p| f(p)).collect(),
        )
    }

    pub fn zip_map<F>(&self, other: &GrayImage, mut f: F) -> Result<GrayImage>
    where
        F: FnMut(f64, f64) -> f64,
    {
        self.ensure_same_shape(other, "pixel-wise operation")?;
        let pixels = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.rows, self.cols, pixels)
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.pixels
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
                (lo.min(p), hi.max(p))
            })
    }

    pub fn stats(&self) -> PixelStats {
        stats_of(&self.pixels)
    }

    /// Copies the `rows x cols` window whose top-left corner is `(row, col)`.
    pub fn crop(&self, row: usize, col: usize, rows: usize, cols: usize) -> Result<GrayImage> {
        if row + rows > self.rows || col + cols > self.cols {
            return Err(Error::Dimension(format!(
                "crop {rows}x{cols} at ({row}, {col}) exceeds {}x{}",
                self.rows, self.cols
            )));
        }
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in row..row + rows {
            pixels.extend_from_slice(&self.row(r)[col..col + cols]);
        }
        Self::new(rows, cols, pixels)
    }
}

/// Population statistics of a sample: variance divides by the count, not count - 1.
pub fn stats_of(values: &[f64]) -> PixelStats {
    let n = values.len() as f64;
    if values.is_empty() {
        return PixelStats {
            mean: 0.0,
            variance: 0.0,
            std: 0.0,
        };
    }
    let mean = compensated_sum(values.iter().copied()) / n;
    let variance = compensated_sum(values.iter().map(|&v| (v - mean) * (v - mean))) / n;
    PixelStats {
        mean,
        variance,
        std: variance.sqrt(),
    }
}

/// Neumaier-compensated summation in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_variance(img: &GrayImage) -> f64 {
        let n = img.len() as f64;
        let mut mean = 0.0;
        for r in 0..img.rows() {
            for c in 0..img.cols() {
                mean += img.get(r, c);
            }
        }
        mean /= n;
        let mut acc = 0.0;
        for r in 0..img.rows() {
            for c in 0..img.cols() {
                acc += (img.get(r, c) - mean).powi(2);
            }
        }
        acc / n
    }

    #[test]
    fn stats_hand_examples() {
        let s = GrayImage::from_rows(&[[1.0, 3.0], [5.0, 7.0]])
            .unwrap()
            .stats();
        assert_eq!(s.mean, 4.0);
        assert_eq!(s.variance, 5.0);
        assert!((s.std - 2.2360679).abs() < 1e-7);

        let s = GrayImage::from_rows(&[[0.0, 0.0], [0.0, 4.0]])
            .unwrap()
            .stats();
        assert_eq!(s.mean, 1.0);
        assert_eq!(s.variance, 3.0);

        let s = GrayImage::filled(5, 3, 12.5).unwrap().stats();
        assert_eq!(s.mean, 12.5);
        assert_eq!(s.variance, 0.0);
    }

    #[test]
    fn rejects_bad_shapes_and_non_finite() {
        assert!(matches!(
            GrayImage::new(0, 3, vec![]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            GrayImage::new(2, 2, vec![1.0; 3]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            GrayImage::new(1, 2, vec![1.0, f64::NAN]),
            Err(Error::Domain(_))
        ));
        assert!(GrayImage::from_rows(&[vec![1.0, 2.0], vec![3.0]]).is_err());
    }

    #[test]
    fn clamped_access_replicates_edges() {
        let img = GrayImage::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(img.get_clamped(-1, -1), 1.0);
        assert_eq!(img.get_clamped(5, 0), 3.0);
        assert_eq!(img.get_clamped(1, 9), 4.0);
    }

    #[test]
    fn crop_extracts_window() {
        let img = GrayImage::from_fn(4, 4, |r, c| (r * 4 + c) as f64).unwrap();
        let w = img.crop(1, 2, 2, 2).unwrap();
        assert_eq!(w.pixels(), &[6.0, 7.0, 10.0, 11.0]);
        assert!(img.crop(3, 3, 2, 1).is_err());
    }

    proptest::proptest! {
        #[test]
        fn variance_matches_naive_loop(
            rows in 1usize..12,
            cols in 1usize..12,
            seed in proptest::collection::vec(-1e3f64..1e3, 144),
        ) {
            let img = GrayImage::from_fn(rows, cols, |r, c| seed[r * 12 + c]).unwrap();
            let s = img.stats();
            let oracle = naive_variance(&img);
            proptest::prop_assert!(s.variance >= 0.0);
            proptest::prop_assert!((s.variance - oracle).abs() <= 1e-12 * oracle + 1e-9);
            proptest::prop_assert!((s.std - s.variance.sqrt()).abs() <= 1e-12 * s.std.max(1e-300));
        }
    }
}
