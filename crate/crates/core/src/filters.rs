//! Spatial reference filters: median and Lee. Borders use edge replication.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::par;

/// Square odd window; side 3, 5 or 7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct WindowSpec(usize);

impl WindowSpec {
    pub fn new(side: usize) -> Result<Self> {
        match side {
            3 | 5 | 7 => Ok(Self(side)),
            other => Err(Error::Parameter(format!(
                "window side must be 3, 5 or 7, got {other}"
            ))),
        }
    }

    pub fn side(self) -> usize {
        self.0
    }

    fn radius(self) -> isize {
        (self.0 / 2) as isize
    }
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self(3)
    }
}

impl TryFrom<usize> for WindowSpec {
    type Error = Error;
    fn try_from(side: usize) -> Result<Self> {
        Self::new(side)
    }
}

impl From<WindowSpec> for usize {
    fn from(w: WindowSpec) -> usize {
        w.0
    }
}

fn gather(img: &GrayImage, r: usize, c: usize, radius: isize, buf: &mut Vec<f64>) {
    buf.clear();
    for dr in -radius..=radius {
        for dc in -radius..=radius {
            buf.push(img.get_clamped(r as isize + dr, c as isize + dc));
        }
    }
}

pub fn median_filter(img: &GrayImage, win: WindowSpec) -> Result<GrayImage> {
    let radius = win.radius();
    let mid = win.side() * win.side() / 2;
    let mut out = vec![0.0; img.len()];
    par::fill_rows(&mut out, img.cols(), |r, row| {
        let mut buf = Vec::with_capacity(win.side() * win.side());
        for (c, px) in row.iter_mut().enumerate() {
            gather(img, r, c, radius, &mut buf);
            let (_, m, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
            *px = *m;
        }
    });
    GrayImage::new(img.rows(), img.cols(), out)
}

/// Lee local-statistics filter: `m + k (x - m)` with `k = max(v - noise_var, 0) / v`.
pub fn lee_filter(img: &GrayImage, win: WindowSpec, noise_var: f64) -> Result<GrayImage> {
    if !(noise_var >= 0.0 && noise_var.is_finite()) {
        return Err(Error::Parameter(format!(
            "noise variance must be finite and >= 0, got {noise_var}"
        )));
    }
    let radius = win.radius();
    let n = (win.side() * win.side()) as f64;
    let mut out = vec![0.0; img.len()];
    par::fill_rows(&mut out, img.cols(), |r, row| {
        let mut buf = Vec::with_capacity(win.side() * win.side());
        for (c, px) in row.iter_mut().enumerate() {
            gather(img, r, c, radius, &mut buf);
            if buf.iter().all(|&v| v == buf[0]) {
                *px = buf[0];
                continue;
            }
            let mean = buf.iter().sum::<f64>() / n;
            let var = buf.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let k = if var > 0.0 {
                (var - noise_var).max(0.0) / var
            } else {
                0.0
            };
            *px = mean + k * (img.get(r, c) - mean);
        }
    });
    GrayImage::new(img.rows(), img.cols(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn window_validation() {
        assert!(WindowSpec::new(3).is_ok());
        assert!(WindowSpec::new(7).is_ok());
        for bad in [0, 1, 2, 4, 9] {
            assert!(WindowSpec::new(bad).is_err());
        }
    }

    #[test]
    fn median_picks_middle_value() {
        let img =
            GrayImage::from_rows(&[[1.0, 2.0, 3.0], [4.0, 100.0, 6.0], [7.0, 8.0, 9.0]]).unwrap();
        let out = median_filter(&img, WindowSpec::new(3).unwrap()).unwrap();
        assert_eq!(out.get(1, 1), 6.0);
    }

    #[test]
    fn median_removes_isolated_impulse() {
        let mut px = vec![0.0; 49];
        px[24] = 255.0;
        let img = GrayImage::new(7, 7, px).unwrap();
        let out = median_filter(&img, WindowSpec::new(3).unwrap()).unwrap();
        assert!(out.pixels().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn lee_limits() {
        let w = WindowSpec::new(3).unwrap();
        let flat = GrayImage::filled(5, 5, 42.0).unwrap();
        assert_eq!(lee_filter(&flat, w, 10.0).unwrap(), flat);

        let img = GrayImage::from_fn(6, 6, |r, c| ((r * 7 + c * 3) % 11) as f64).unwrap();
        let out = lee_filter(&img, w, 0.0).unwrap();
        for (a, b) in out.pixels().iter().zip(img.pixels()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lee_half_gain_at_twice_noise_variance() {
        let img =
            GrayImage::from_rows(&[[0.0, 0.0, 0.0], [0.0, 9.0, 0.0], [0.0, 0.0, 0.0]]).unwrap();
        // centre window: mean 1, population variance (81 - 9 * 1) / 9 = 8
        let out = lee_filter(&img, WindowSpec::new(3).unwrap(), 4.0).unwrap();
        assert!((out.get(1, 1) - 5.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn filter_invariants(
            rows in 1usize..10,
            cols in 1usize..10,
            values in proptest::collection::vec(0.0f64..255.0, 100),
            side in prop_oneof![Just(3usize), Just(5), Just(7)],
            noise_var in 0.0f64..500.0,
        ) {
            let img = GrayImage::from_fn(rows, cols, |r, c| values[r * 10 + c]).unwrap();
            let win = WindowSpec::new(side).unwrap();
            let med = median_filter(&img, win).unwrap();
            prop_assert!(med.pixels().iter().all(|v| img.pixels().contains(v)));

            let lee = lee_filter(&img, win, noise_var).unwrap();
            let radius = (side / 2) as isize;
            for r in 0..rows {
                for c in 0..cols {
                    let mut buf = Vec::new();
                    gather(&img, r, c, radius, &mut buf);
                    let mean = buf.iter().sum::<f64>() / buf.len() as f64;
                    let x = img.get(r, c);
                    let (lo, hi) = if mean < x { (mean, x) } else { (x, mean) };
                    let v = lee.get(r, c);
                    prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
                }
            }
        }

        #[test]
        fn constant_images_preserved(v in -1e3f64..1e3, side in prop_oneof![Just(3usize), Just(5), Just(7)]) {
            let img = GrayImage::filled(9, 6, v).unwrap();
            let win = WindowSpec::new(side).unwrap();
            prop_assert_eq!(median_filter(&img, win).unwrap(), img.clone());
            prop_assert_eq!(lee_filter(&img, win, 3.0).unwrap(), img);
        }
    }
}
