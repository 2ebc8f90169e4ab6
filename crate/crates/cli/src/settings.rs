//! Resolved run configuration: defaults, overlaid by a JSON config file, overlaid by flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use despeckle::bench::BenchConfig;
use despeckle::filters::WindowSpec;
use despeckle::metrics::{DrVariant, MetricSettings, ENL_BLOCK, FOM_ALPHA};
use despeckle::pipeline::{DespeckleOptions, Despeckler};
use despeckle::shrink::{KalmanShrinkConfig, ShrinkMethod, ThresholdMode};
use despeckle::speckle::{SpeckleFamily, SpeckleSpec};

use crate::error::{CliError, CliResult};

/// Every tunable, with its default. Field names double as JSON config keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub family: String,
    pub looks: u32,
    pub seed: u64,
    pub method: String,
    pub levels: usize,
    pub tau: Option<f64>,
    pub tau2: Option<f64>,
    pub window: usize,
    pub sigma_n: Option<f64>,
    pub p_final_ratio: f64,
    pub p0_floor_eps: f64,
    pub max_iters: usize,
    pub edge_threshold: f64,
    pub enl_block: usize,
    pub fom_alpha: f64,
    pub dr_variant: String,
    pub format: String,
    pub maxval: u32,
    pub phantom_size: usize,
}

impl Default for Settings {
    fn default() -> Self {
        let kalman = KalmanShrinkConfig::default();
        let metrics = MetricSettings::default();
        Self {
            family: "gamma".into(),
            looks: 4,
            seed: 42,
            method: "kalman".into(),
            levels: 1,
            tau: None,
            tau2: None,
            window: 3,
            sigma_n: None,
            p_final_ratio: kalman.p_final_ratio,
            p0_floor_eps: kalman.epsilon,
            max_iters: kalman.max_iters,
            edge_threshold: metrics.edge_threshold,
            enl_block: ENL_BLOCK,
            fom_alpha: FOM_ALPHA,
            dr_variant: "plain".into(),
            format: "csv".into(),
            maxval: 65535,
            phantom_size: 256,
        }
    }
}

impl Settings {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("settings serialize")
    }

    pub fn speckle(&self) -> CliResult<SpeckleSpec> {
        let spec = SpeckleSpec {
            family: SpeckleFamily::from_cli_name(&self.family)?,
            looks: self.looks,
            seed: self.seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn window(&self) -> CliResult<WindowSpec> {
        Ok(WindowSpec::new(self.window)?)
    }

    pub fn kalman(&self) -> CliResult<KalmanShrinkConfig> {
        let cfg = KalmanShrinkConfig {
            epsilon: self.p0_floor_eps,
            p_final_ratio: self.p_final_ratio,
            max_iters: self.max_iters,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn options(&self) -> DespeckleOptions {
        DespeckleOptions {
            levels: self.levels,
            sigma_n: self.sigma_n,
        }
    }

    pub fn metrics(&self) -> CliResult<MetricSettings> {
        Ok(MetricSettings {
            edge_threshold: self.edge_threshold,
            enl_block: self.enl_block,
            fom_alpha: self.fom_alpha,
            dr_variant: DrVariant::from_name(&self.dr_variant)?,
        })
    }

    fn require_tau(&self) -> CliResult<f64> {
        self.tau
            .ok_or_else(|| CliError::Usage(format!("method '{}' needs --tau", self.method)))
    }

    pub fn despeckler(&self) -> CliResult<Despeckler> {
        let wavelet = |method: ShrinkMethod| -> CliResult<Despeckler> {
            method.validate()?;
            Ok(Despeckler::Wavelet { method })
        };
        match self.method.as_str() {
            "median" => Ok(Despeckler::Median {
                window: self.window()?,
            }),
            "lee" => Ok(Despeckler::Lee {
                window: self.window()?,
            }),
            "hard" => wavelet(ShrinkMethod::Hard {
                tau: self.require_tau()?,
            }),
            "soft" => wavelet(ShrinkMethod::Soft {
                tau: self.require_tau()?,
            }),
            "semisoft" => {
                let lower = self.require_tau()?;
                let upper = self
                    .tau2
                    .ok_or_else(|| CliError::Usage("method 'semisoft' needs --tau2".into()))?;
                wavelet(ShrinkMethod::SemiSoft { lower, upper })
            }
            "visu-hard" => wavelet(ShrinkMethod::Visu {
                mode: ThresholdMode::Hard,
            }),
            "visu-soft" => wavelet(ShrinkMethod::Visu {
                mode: ThresholdMode::Soft,
            }),
            "visu-semisoft" => wavelet(ShrinkMethod::Visu {
                mode: ThresholdMode::SemiSoft,
            }),
            "sure" => wavelet(ShrinkMethod::Sure),
            "bayes" => wavelet(ShrinkMethod::Bayes),
            "normal" => wavelet(ShrinkMethod::Normal),
            "linear-gauss" => wavelet(ShrinkMethod::LinearGaussian),
            "kalman" => wavelet(ShrinkMethod::Kalman(self.kalman()?)),
            other => Err(CliError::Usage(format!("unknown method '{other}'"))),
        }
    }

    pub fn bench(&self) -> CliResult<BenchConfig> {
        Ok(BenchConfig {
            speckle: self.speckle()?,
            options: self.options(),
            window: self.window()?,
            kalman: self.kalman()?,
            metrics: self.metrics()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_config_keeps_defaults() {
        let s: Settings = serde_json::from_str(r#"{"looks": 9, "method": "bayes"}"#).unwrap();
        assert_eq!(s.looks, 9);
        assert_eq!(s.method, "bayes");
        assert_eq!(s.seed, 42);
        assert!(serde_json::from_str::<Settings>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn every_method_name_resolves() {
        let mut s = Settings {
            tau: Some(1.0),
            tau2: Some(2.0),
            ..Default::default()
        };
        for name in [
            "median",
            "lee",
            "hard",
            "soft",
            "semisoft",
            "visu-hard",
            "visu-soft",
            "visu-semisoft",
            "sure",
            "bayes",
            "normal",
            "linear-gauss",
            "kalman",
        ] {
            s.method = name.into();
            assert_eq!(s.despeckler().unwrap().name(), name);
        }
        s.method = "frost".into();
        assert!(s.despeckler().is_err());
    }

    #[test]
    fn threshold_methods_need_tau() {
        let s = Settings {
            method: "soft".into(),
            ..Default::default()
        };
        assert!(matches!(s.despeckler(), Err(CliError::Usage(_))));
    }
}
