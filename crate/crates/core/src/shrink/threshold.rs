//! Noise estimation and data-driven threshold selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{stats_of, GrayImage};

/// Normal-consistency constant of the median absolute deviation.
pub const MAD_NORMAL_SCALE: f64 = 0.6745;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMethod {
    MadHh,
    UserSupplied,
}

/// Noise standard deviation in the wavelet-coefficient domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseEstimate {
    pub sigma_n: f64,
    pub method: NoiseMethod,
}

impl NoiseEstimate {
    pub fn user(sigma_n: f64) -> Result<Self> {
        if !sigma_n.is_finite() || sigma_n < 0.0 {
            return Err(Error::Parameter(format!(
                "sigma_n must be finite and non-negative, got {sigma_n}"
            )));
        }
        Ok(Self {
            sigma_n,
            method: NoiseMethod::UserSupplied,
        })
    }

    pub fn variance(&self) -> f64 {
        self.sigma_n * self.sigma_n
    }
}

/// Robust estimate `median(|hh|) / 0.6745` from the finest diagonal subband.
pub fn estimate_sigma_n(hh: &GrayImage) -> NoiseEstimate {
    NoiseEstimate {
        sigma_n: median_abs(hh.pixels()) / MAD_NORMAL_SCALE,
        method: NoiseMethod::MadHh,
    }
}

fn median_abs(values: &[f64]) -> f64 {
    let mut abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let n = abs.len();
    if n == 0 {
        return 0.0;
    }
    let mid = n / 2;
    let (lower, upper, _) = abs.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (below + upper) / 2.0
    }
}

/// Threshold selection rules for detail subbands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdRule {
    /// Universal threshold `sigma_n * sqrt(2 ln M)`.
    Visu,
    /// Minimiser of Stein's unbiased risk estimate for soft thresholding.
    Sure,
    /// `sigma_n^2 / sigma_x` with a signal std estimated from the subband.
    Bayes,
    /// `beta * sigma_n^2 / sigma_y` with `beta = sqrt(ln(M / J))`.
    Normal,
}

/// Global quantities some rules need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdContext {
    /// Total number of wavelet coefficients (all subbands).
    pub total_coefficients: usize,
    pub levels: usize,
}

pub fn universal_threshold(sigma_n: f64, count: f64) -> f64 {
    sigma_n * (2.0 * count.ln()).max(0.0).sqrt()
}

/// Signal std implied by a subband: `sqrt(max(var(subband) - sigma_n^2, 0))`.
pub fn signal_std(subband: &[f64], sigma_n: f64) -> f64 {
    (stats_of(subband).variance - sigma_n * sigma_n)
        .max(0.0)
        .sqrt()
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn select_threshold(
    rule: ThresholdRule,
    subband: &[f64],
    sigma_n: f64,
    ctx: ThresholdContext,
) -> Result<f64> {
    if !sigma_n.is_finite() || sigma_n < 0.0 {
        return Err(Error::Parameter(format!("invalid sigma_n {sigma_n}")));
    }
    if ctx.total_coefficients == 0 || ctx.levels == 0 {
        return Err(Error::Parameter(
            "threshold context needs at least one coefficient and one level".into(),
        ));
    }
    let tau = match rule {
        ThresholdRule::Visu => universal_threshold(sigma_n, ctx.total_coefficients as f64),
        ThresholdRule::Sure => sure_threshold(subband, sigma_n),
        ThresholdRule::Bayes => {
            let sx = signal_std(subband, sigma_n);
            if sx > 0.0 {
                sigma_n * sigma_n / sx
            } else {
                max_abs(subband)
            }
        }
        ThresholdRule::Normal => {
            let sy = stats_of(subband).std;
            if sy > 0.0 {
                let ratio = ctx.total_coefficients as f64 / ctx.levels as f64;
                let beta = ratio.ln().max(0.0).sqrt();
                beta * sigma_n * sigma_n / sy
            } else {
                max_abs(subband)
            }
        }
    };
    Ok(tau)
}

/// SURE risk of soft thresholding at `tau`:
/// `M sigma^2 - 2 sigma^2 #{|y| <= tau} + sum(min(|y|, tau)^2)`.
pub fn sure_risk(subband: &[f64], sigma_n: f64, tau: f64) -> f64 {
    let s2 = sigma_n * sigma_n;
    let m = subband.len() as f64;
    let inside = subband.iter().filter(|y| y.abs() <= tau).count() as f64;
    let clipped: f64 = subband.iter().map(|y| y.abs().min(tau).powi(2)).sum();
    m * s2 - 2.0 * s2 * inside + clipped
}

/// Minimiser of [`sure_risk`] over `{0} ∪ {|y_i|}`; ties go to the smaller threshold.
pub fn sure_threshold(subband: &[f64], sigma_n: f64) -> f64 {
    let mut abs: Vec<f64> = subband.iter().map(|y| y.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let s2 = sigma_n * sigma_n;
    let m = abs.len() as f64;

    // risk(0): only exact zeros count as inside
    let zeros = abs.iter().take_while(|&&a| a == 0.0).count();
    let mut best_tau = 0.0;
    let mut best_risk = m * s2 - 2.0 * s2 * zeros as f64;

    let mut prefix_sq = 0.0;
    let mut i = 0;
    while i < abs.len() {
        let t = abs[i];
        // fold in the whole tie group so the count covers every |y| <= t
        let mut j = i;
        while j < abs.len() && abs[j] == t {
            prefix_sq += t * t;
            j += 1;
        }
        let risk = m * s2 - 2.0 * s2 * j as f64 + prefix_sq + (abs.len() - j) as f64 * t * t;
        if risk < best_risk {
            best_risk = risk;
            best_tau = t;
        }
        i = j;
    }
    best_tau
}
