//! Comparison sweep: speckle a clean scene once, run every registered despeckler and
//! score each output.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::filters::WindowSpec;
use crate::image::GrayImage;
use crate::metrics::{build_report, EdgeMap, MetricSettings, MetricsReport};
use crate::par;
use crate::pipeline::{despeckle, DespeckleOptions, Despeckler};
use crate::shrink::{KalmanShrinkConfig, ShrinkMethod, ThresholdMode};
use crate::speckle::{apply_speckle, SpeckleSpec};

pub const NOISY_LABEL: &str = "Original noisy image";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub speckle: SpeckleSpec,
    pub options: DespeckleOptions,
    pub window: WindowSpec,
    pub kalman: KalmanShrinkConfig,
    pub metrics: MetricSettings,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            speckle: SpeckleSpec::gamma(4, 42),
            options: DespeckleOptions::default(),
            window: WindowSpec::default(),
            kalman: KalmanShrinkConfig::default(),
            metrics: MetricSettings::default(),
        }
    }
}

/// Registered despecklers in report order.
pub fn registered_methods(cfg: &BenchConfig) -> Vec<Despeckler> {
    let wavelet = |method| Despeckler::Wavelet { method };
    vec![
        Despeckler::Lee { window: cfg.window },
        Despeckler::Median { window: cfg.window },
        wavelet(ShrinkMethod::Visu {
            mode: ThresholdMode::Hard,
        }),
        wavelet(ShrinkMethod::Visu {
            mode: ThresholdMode::Soft,
        }),
        wavelet(ShrinkMethod::Visu {
            mode: ThresholdMode::SemiSoft,
        }),
        wavelet(ShrinkMethod::Sure),
        wavelet(ShrinkMethod::Normal),
        wavelet(ShrinkMethod::Bayes),
        wavelet(ShrinkMethod::LinearGaussian),
        wavelet(ShrinkMethod::Kalman(cfg.kalman)),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub label: String,
    /// CLI method name, or `noisy` for the reference row.
    pub method: String,
    /// The speckled input itself; its MSD is not meaningful.
    pub is_reference: bool,
    /// Metrics, or the error message that stopped this row.
    pub outcome: std::result::Result<MetricsReport, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutcome {
    pub noisy: GrayImage,
    pub rows: Vec<BenchRow>,
}

/// Scores an already speckled image against `methods`, reference row first.
pub fn score_methods(
    noisy: &GrayImage,
    ideal: &EdgeMap,
    methods: &[Despeckler],
    cfg: &BenchConfig,
) -> Vec<BenchRow> {
    let seed = Some(cfg.speckle.seed);
    let reference = BenchRow {
        label: NOISY_LABEL.to_string(),
        method: "noisy".to_string(),
        is_reference: true,
        outcome: build_report(noisy, noisy, ideal, &cfg.metrics, "noisy", seed)
            .map_err(|e| e.to_string()),
    };
    let rows = par::map_slice(methods, |d| {
        let outcome = despeckle(noisy, d, &cfg.options)
            .and_then(|out| build_report(noisy, &out.image, ideal, &cfg.metrics, d.name(), seed))
            .map_err(|e| e.to_string());
        BenchRow {
            label: d.label().to_string(),
            method: d.name().to_string(),
            is_reference: false,
            outcome,
        }
    });
    std::iter::once(reference).chain(rows).collect()
}

pub fn run_bench(clean: &GrayImage, ideal: &EdgeMap, cfg: &BenchConfig) -> Result<BenchOutcome> {
    let (noisy, _) = apply_speckle(clean, &cfg.speckle)?;
    let rows = score_methods(&noisy, ideal, &registered_methods(cfg), cfg);
    Ok(BenchOutcome { noisy, rows })
}
