//! End-to-end despeckling: wavelet shrinkage or a spatial filter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{lee_filter, median_filter, WindowSpec};
use crate::image::GrayImage;
use crate::shrink::{
    apply_shrinkage, estimate_sigma_n, NoiseEstimate, ShrinkMethod, SubbandSummary, ThresholdMode,
};
use crate::wavelet::{decompose, reconstruct};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Despeckler {
    Wavelet { method: ShrinkMethod },
    Median { window: WindowSpec },
    Lee { window: WindowSpec },
}

impl Despeckler {
    pub fn name(&self) -> &'static str {
        match self {
            Despeckler::Wavelet { method } => method.name(),
            Despeckler::Median { .. } => "median",
            Despeckler::Lee { .. } => "lee",
        }
    }

    /// Row label in comparison tables.
    pub fn label(&self) -> &'static str {
        match self {
            Despeckler::Median { .. } => "Median",
            Despeckler::Lee { .. } => "Lee",
            Despeckler::Wavelet { method } => match method {
                ShrinkMethod::Hard { .. } => "Hard threshold",
                ShrinkMethod::Soft { .. } => "Soft threshold",
                ShrinkMethod::SemiSoft { .. } => "Semi-soft threshold",
                ShrinkMethod::Visu {
                    mode: ThresholdMode::Hard,
                } => "VisuShrink (HT)",
                ShrinkMethod::Visu {
                    mode: ThresholdMode::Soft,
                } => "VisuShrink (ST)",
                ShrinkMethod::Visu {
                    mode: ThresholdMode::SemiSoft,
                } => "VisuShrink (SST)",
                ShrinkMethod::Sure => "SureShrink",
                ShrinkMethod::Bayes => "BayesShrink",
                ShrinkMethod::Normal => "NormalShrink",
                ShrinkMethod::LinearGaussian => "LinearGaussShrink",
                ShrinkMethod::Kalman(_) => "KalmanShrink",
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DespeckleOptions {
    pub levels: usize,
    /// Overrides the MAD noise estimate when set.
    pub sigma_n: Option<f64>,
}

impl Default for DespeckleOptions {
    fn default() -> Self {
        Self {
            levels: 1,
            sigma_n: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Despeckled {
    pub image: GrayImage,
    /// Noise estimate used, when the method needs one (not for the median filter).
    pub noise: Option<NoiseEstimate>,
    /// Per-subband record for wavelet methods.
    pub subbands: Vec<SubbandSummary>,
}

fn noise_estimate(img: &GrayImage, opts: &DespeckleOptions) -> Result<NoiseEstimate> {
    match opts.sigma_n {
        Some(s) => NoiseEstimate::user(s),
        None => {
            let dec = decompose(img, 1)?;
            Ok(estimate_sigma_n(dec.finest_hh()))
        }
    }
}

pub fn despeckle(
    img: &GrayImage,
    despeckler: &Despeckler,
    opts: &DespeckleOptions,
) -> Result<Despeckled> {
    match despeckler {
        Despeckler::Median { window } => Ok(Despeckled {
            image: median_filter(img, *window)?,
            noise: None,
            subbands: Vec::new(),
        }),
        Despeckler::Lee { window } => {
            let noise = noise_estimate(img, opts)?;
            Ok(Despeckled {
                image: lee_filter(img, *window, noise.variance())?,
                noise: Some(noise),
                subbands: Vec::new(),
            })
        }
        Despeckler::Wavelet { method } => {
            if opts.levels == 0 {
                return Err(Error::Parameter("levels must be at least 1".into()));
            }
            let dec = decompose(img, opts.levels)?;
            let noise = match opts.sigma_n {
                Some(s) => NoiseEstimate::user(s)?,
                None => estimate_sigma_n(dec.finest_hh()),
            };
            let shrunk = apply_shrinkage(&dec, method, &noise)?;
            Ok(Despeckled {
                image: reconstruct(&shrunk.decomposition)?,
                noise: Some(noise),
                subbands: shrunk.subbands,
            })
        }
    }
}
