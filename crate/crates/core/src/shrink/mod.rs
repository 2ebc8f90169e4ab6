//! Wavelet-coefficient estimators and their application to detail subbands.

mod kalman;
mod operators;
mod threshold;

pub use kalman::{
    analytic_iterations, kalman_shrink_coefficient, InitialCovariance, InitialEstimate,
    KalmanEstimate, KalmanSchedule, KalmanShrinkConfig,
};
pub use operators::{hard, linear_gaussian_gain, linear_gaussian_shrink, semisoft, soft};
pub use threshold::{
    estimate_sigma_n, select_threshold, signal_std, sure_risk, sure_threshold, universal_threshold,
    NoiseEstimate, NoiseMethod, ThresholdContext, ThresholdRule, MAD_NORMAL_SCALE,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{stats_of, GrayImage};
use crate::par;
use crate::wavelet::{Orientation, WaveletDecomposition};

/// Shape of the thresholding nonlinearity used with the universal threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    Hard,
    Soft,
    /// Semi-soft with knees at `tau` and `2 tau`.
    SemiSoft,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShrinkMethod {
    Hard { tau: f64 },
    Soft { tau: f64 },
    SemiSoft { lower: f64, upper: f64 },
    Visu { mode: ThresholdMode },
    Sure,
    Bayes,
    Normal,
    LinearGaussian,
    Kalman(KalmanShrinkConfig),
}

impl ShrinkMethod {
    pub fn validate(&self) -> Result<()> {
        let check_tau = |t: f64, what: &str| {
            if t.is_finite() && t >= 0.0 {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{what} must be finite and >= 0, got {t}"
                )))
            }
        };
        match *self {
            ShrinkMethod::Hard { tau } | ShrinkMethod::Soft { tau } => check_tau(tau, "tau"),
            ShrinkMethod::SemiSoft { lower, upper } => {
                check_tau(lower, "lower threshold")?;
                check_tau(upper, "upper threshold")?;
                if lower < upper {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!(
                        "semisoft needs lower < upper, got {lower} >= {upper}"
                    )))
                }
            }
            ShrinkMethod::Kalman(cfg) => cfg.validate(),
            _ => Ok(()),
        }
    }

    /// CLI / report name.
    pub fn name(&self) -> &'static str {
        match self {
            ShrinkMethod::Hard { .. } => "hard",
            ShrinkMethod::Soft { .. } => "soft",
            ShrinkMethod::SemiSoft { .. } => "semisoft",
            ShrinkMethod::Visu {
                mode: ThresholdMode::Hard,
            } => "visu-hard",
            ShrinkMethod::Visu {
                mode: ThresholdMode::Soft,
            } => "visu-soft",
            ShrinkMethod::Visu {
                mode: ThresholdMode::SemiSoft,
            } => "visu-semisoft",
            ShrinkMethod::Sure => "sure",
            ShrinkMethod::Bayes => "bayes",
            ShrinkMethod::Normal => "normal",
            ShrinkMethod::LinearGaussian => "linear-gauss",
            ShrinkMethod::Kalman(_) => "kalman",
        }
    }
}

/// What was done to one detail subband.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubbandSummary {
    /// 1-based decomposition level.
    pub level: usize,
    pub orientation: Orientation,
    /// Threshold, where the method has one.
    pub threshold: Option<f64>,
    /// Linear gain, for the linear-Gaussian and Kalman estimators.
    pub gain: Option<f64>,
    pub kalman_iterations: Option<usize>,
    pub kalman_p0: Option<f64>,
    pub kalman_p_terminal: Option<f64>,
    /// True when the subband was left untouched (all zeros or noise-free Kalman).
    pub passthrough: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShrinkOutcome {
    pub decomposition: WaveletDecomposition,
    pub subbands: Vec<SubbandSummary>,
}

/// Applies `method` to every detail subband of `dec`; the approximation is copied as-is.
pub fn apply_shrinkage(
    dec: &WaveletDecomposition,
    method: &ShrinkMethod,
    noise: &NoiseEstimate,
) -> Result<ShrinkOutcome> {
    method.validate()?;
    if !noise.sigma_n.is_finite() || noise.sigma_n < 0.0 {
        return Err(Error::Parameter(format!(
            "invalid sigma_n {}",
            noise.sigma_n
        )));
    }
    let ctx = ThresholdContext {
        total_coefficients: dec.coefficient_count(),
        levels: dec.levels(),
    };
    let jobs: Vec<(usize, Orientation)> = (0..dec.levels())
        .flat_map(|l| Orientation::ALL.into_iter().map(move |o| (l, o)))
        .collect();
    let results = par::map_slice(&jobs, |&(l, o)| {
        shrink_subband(dec.details[l].band(o), method, noise.sigma_n, ctx).map(
            |(band, mut summary)| {
                summary.level = l + 1;
                summary.orientation = o;
                (band, summary)
            },
        )
    });

    let mut out = dec.clone();
    let mut subbands = Vec::with_capacity(jobs.len());
    for (&(l, o), result) in jobs.iter().zip(results) {
        let (band, summary) = result?;
        *out.details[l].band_mut(o) = band;
        subbands.push(summary);
    }
    Ok(ShrinkOutcome {
        decomposition: out,
        subbands,
    })
}

fn blank_summary() -> SubbandSummary {
    SubbandSummary {
        level: 0,
        orientation: Orientation::Hh,
        threshold: None,
        gain: None,
        kalman_iterations: None,
        kalman_p0: None,
        kalman_p_terminal: None,
        passthrough: false,
    }
}

fn shrink_subband(
    band: &GrayImage,
    method: &ShrinkMethod,
    sigma_n: f64,
    ctx: ThresholdContext,
) -> Result<(GrayImage, SubbandSummary)> {
    let mut summary = blank_summary();
    let coeffs = band.pixels();
    if coeffs.iter().all(|&c| c == 0.0) {
        summary.passthrough = true;
        return Ok((band.clone(), summary));
    }
    let noise_var = sigma_n * sigma_n;
    let thresholded = |tau: f64, f: &dyn Fn(f64, f64) -> f64| band.map(|y| f(y, tau));

    let shrunk = match method {
        ShrinkMethod::Hard { tau } => {
            summary.threshold = Some(*tau);
            thresholded(*tau, &hard)?
        }
        ShrinkMethod::Soft { tau } => {
            summary.threshold = Some(*tau);
            thresholded(*tau, &soft)?
        }
        ShrinkMethod::SemiSoft { lower, upper } => {
            summary.threshold = Some(*lower);
            band.map(|y| semisoft(y, *lower, *upper))?
        }
        ShrinkMethod::Visu { mode } => {
            let tau = select_threshold(ThresholdRule::Visu, coeffs, sigma_n, ctx)?;
            summary.threshold = Some(tau);
            match mode {
                ThresholdMode::Hard => thresholded(tau, &hard)?,
                ThresholdMode::Soft => thresholded(tau, &soft)?,
                // a zero threshold would make both knees coincide; it means "keep everything"
                ThresholdMode::SemiSoft if tau > 0.0 => {
                    band.map(|y| semisoft(y, tau, 2.0 * tau))?
                }
                ThresholdMode::SemiSoft => band.clone(),
            }
        }
        ShrinkMethod::Sure | ShrinkMethod::Bayes | ShrinkMethod::Normal => {
            let rule = match method {
                ShrinkMethod::Sure => ThresholdRule::Sure,
                ShrinkMethod::Bayes => ThresholdRule::Bayes,
                _ => ThresholdRule::Normal,
            };
            let tau = select_threshold(rule, coeffs, sigma_n, ctx)?;
            summary.threshold = Some(tau);
            thresholded(tau, &soft)?
        }
        ShrinkMethod::LinearGaussian => {
            let sx = signal_std(coeffs, sigma_n);
            let gain = linear_gaussian_gain(sx * sx, noise_var);
            summary.gain = Some(gain);
            band.map(|y| gain * y)?
        }
        ShrinkMethod::Kalman(cfg) => {
            if noise_var == 0.0 {
                summary.passthrough = true;
                summary.gain = Some(1.0);
                return Ok((band.clone(), summary));
            }
            let var = stats_of(coeffs).variance;
            let p0 = cfg.initial_covariance(var, noise_var);
            let schedule = KalmanSchedule::new(
                noise_var,
                p0,
                cfg.final_covariance(noise_var),
                cfg.max_iters,
            )?;
            let w0 = cfg.initial_estimate();
            summary.gain = Some(schedule.net_gain());
            summary.kalman_iterations = Some(schedule.iterations());
            summary.kalman_p0 = Some(p0);
            summary.kalman_p_terminal = Some(schedule.p_terminal);
            let mut px = vec![0.0; coeffs.len()];
            par::fill_rows(&mut px, band.cols(), |r, row| {
                for (out, &y) in row.iter_mut().zip(band.row(r)) {
                    *out = schedule.apply(y, w0);
                }
            });
            GrayImage::new(band.rows(), band.cols(), px)?
        }
    };
    Ok((shrunk, summary))
}
