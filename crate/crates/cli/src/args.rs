use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::settings::Settings;

#[derive(Debug, Parser)]
#[command(
    name = "despeckle",
    version,
    about = "Wavelet-domain despeckling toolkit"
)]
pub struct Cli {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply a clean image by synthetic speckle.
    Speckle(SpeckleCmd),
    /// Despeckle an image with a wavelet estimator or spatial filter.
    Despeckle(DespeckleCmd),
    /// Score one despeckled image against its speckled input.
    Metrics(MetricsCmd),
    /// Speckle a scene once and compare every registered method.
    Bench(BenchCmd),
    /// Convert between PGM and DSPK raw.
    Convert(ConvertCmd),
    /// Write the synthetic test scene and its ideal edge map.
    Phantom(PhantomCmd),
}

#[derive(Debug, Args, Default)]
pub struct SpeckleFlags {
    /// Speckle family: rayleigh, exp or gamma.
    #[arg(long)]
    pub family: Option<String>,
    /// Number of looks for gamma speckle.
    #[arg(long)]
    pub looks: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl SpeckleFlags {
    pub fn apply(&self, s: &mut Settings) {
        if let Some(v) = &self.family {
            s.family = v.clone();
        }
        if let Some(v) = self.looks {
            s.looks = v;
        }
        if let Some(v) = self.seed {
            s.seed = v;
        }
    }
}

#[derive(Debug, Args, Default)]
pub struct MethodFlags {
    /// hard, soft, semisoft, visu-hard, visu-soft, visu-semisoft, sure, bayes, normal,
    /// linear-gauss, kalman, median or lee.
    #[arg(long)]
    pub method: Option<String>,
    /// Wavelet decomposition levels.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Threshold for hard/soft, lower knee for semisoft.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Upper knee for semisoft.
    #[arg(long)]
    pub tau2: Option<f64>,
    /// Spatial filter window side: 3, 5 or 7.
    #[arg(long)]
    pub window: Option<usize>,
    /// Noise std override (skips the MAD estimate).
    #[arg(long)]
    pub sigma_n: Option<f64>,
    /// Kalman stop covariance as a fraction of sigma_n^2.
    #[arg(long)]
    pub p_final_ratio: Option<f64>,
    /// Kalman initial-covariance floor as a fraction of sigma_n^2.
    #[arg(long)]
    pub p0_floor_eps: Option<f64>,
    /// Kalman iteration cap.
    #[arg(long)]
    pub max_iters: Option<usize>,
}

impl MethodFlags {
    pub fn apply(&self, s: &mut Settings) {
        if let Some(v) = &self.method {
            s.method = v.clone();
        }
        if let Some(v) = self.levels {
            s.levels = v;
        }
        if self.tau.is_some() {
            s.tau = self.tau;
        }
        if self.tau2.is_some() {
            s.tau2 = self.tau2;
        }
        if let Some(v) = self.window {
            s.window = v;
        }
        if self.sigma_n.is_some() {
            s.sigma_n = self.sigma_n;
        }
        if let Some(v) = self.p_final_ratio {
            s.p_final_ratio = v;
        }
        if let Some(v) = self.p0_floor_eps {
            s.p0_floor_eps = v;
        }
        if let Some(v) = self.max_iters {
            s.max_iters = v;
        }
    }
}

#[derive(Debug, Args, Default)]
pub struct MetricFlags {
    /// Sobel magnitude threshold for FOM edge detection.
    #[arg(long)]
    pub edge_threshold: Option<f64>,
    /// ENL tile side.
    #[arg(long)]
    pub enl_block: Option<usize>,
    /// FOM distance penalty.
    #[arg(long)]
    pub fom_alpha: Option<f64>,
    /// Deflection ratio summand: plain, abs or square.
    #[arg(long)]
    pub dr_variant: Option<String>,
    /// Report format for stdout: csv or md.
    #[arg(long)]
    pub format: Option<String>,
}

impl MetricFlags {
    pub fn apply(&self, s: &mut Settings) {
        if let Some(v) = self.edge_threshold {
            s.edge_threshold = v;
        }
        if let Some(v) = self.enl_block {
            s.enl_block = v;
        }
        if let Some(v) = self.fom_alpha {
            s.fom_alpha = v;
        }
        if let Some(v) = &self.dr_variant {
            s.dr_variant = v.clone();
        }
        if let Some(v) = &self.format {
            s.format = v.clone();
        }
    }
}

#[derive(Debug, Args)]
pub struct SpeckleCmd {
    /// Clean input image (PGM or DSPK).
    #[arg(short, long)]
    pub input: PathBuf,
    /// Noisy output; `.pgm` writes PGM, anything else DSPK raw.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Additional PGM copy of the output.
    #[arg(long)]
    pub pgm: Option<PathBuf>,
    /// PGM export depth: 255 or 65535.
    #[arg(long)]
    pub maxval: Option<u32>,
    #[command(flatten)]
    pub speckle: SpeckleFlags,
}

#[derive(Debug, Args)]
pub struct DespeckleCmd {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub pgm: Option<PathBuf>,
    #[arg(long)]
    pub maxval: Option<u32>,
    #[command(flatten)]
    pub method: MethodFlags,
}

#[derive(Debug, Args)]
pub struct MetricsCmd {
    /// Speckled (noisy) image.
    #[arg(long)]
    pub speckled: PathBuf,
    /// Despeckled image.
    #[arg(long)]
    pub despeckled: PathBuf,
    /// Ideal edge map; non-zero pixels are edges.
    #[arg(long)]
    pub edges: PathBuf,
    /// Row label.
    #[arg(long, default_value = "despeckled")]
    pub label: String,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Print full-precision numbers.
    #[arg(long)]
    pub full_precision: bool,
    #[command(flatten)]
    pub metrics: MetricFlags,
}

#[derive(Debug, Args)]
pub struct BenchCmd {
    /// Clean reference scene; the built-in phantom is used when absent.
    #[arg(long, requires = "edges")]
    pub clean: Option<PathBuf>,
    /// Ideal edge map for `--clean`.
    #[arg(long, requires = "clean")]
    pub edges: Option<PathBuf>,
    /// Phantom side length.
    #[arg(long)]
    pub phantom_size: Option<usize>,
    /// Directory for bench.csv, bench_full.csv, bench.md and bench.config.json.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub speckle: SpeckleFlags,
    #[command(flatten)]
    pub method: MethodFlags,
    #[command(flatten)]
    pub metrics: MetricFlags,
}

#[derive(Debug, Args)]
pub struct ConvertCmd {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub maxval: Option<u32>,
}

#[derive(Debug, Args)]
pub struct PhantomCmd {
    #[arg(long)]
    pub size: Option<usize>,
    /// Clean scene output.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Ideal edge map output (1 = edge, 0 = background).
    #[arg(long)]
    pub edges_output: PathBuf,
    #[arg(long)]
    pub maxval: Option<u32>,
}
