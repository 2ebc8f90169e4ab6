//! Unit-mean speckle synthesis and the multiplicative to additive noise conversion.
//!
//! Random numbers come from ChaCha8 keyed by `ChaCha8Rng::seed_from_u64(seed)`, with the
//! ChaCha stream id set to the image row. Each row therefore owns an independent,
//! addressable stream, and fields can be generated row-parallel with bit-identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::par;

/// Marginal distribution of the speckle field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeckleFamily {
    /// Single-look amplitude: Rayleigh with scale `sqrt(2 / pi)`.
    RayleighAmplitude,
    /// Single-look intensity: exponential with rate 1.
    ExponentialIntensity,
    /// Multi-look intensity: gamma with shape `L`, scale `1 / L`.
    GammaMultilook,
}

impl SpeckleFamily {
    /// CLI name: `rayleigh`, `exp` or `gamma`.
    pub fn cli_name(self) -> &'static str {
        match self {
            SpeckleFamily::RayleighAmplitude => "rayleigh",
            SpeckleFamily::ExponentialIntensity => "exp",
            SpeckleFamily::GammaMultilook => "gamma",
        }
    }

    pub fn from_cli_name(name: &str) -> Result<Self> {
        match name {
            "rayleigh" => Ok(SpeckleFamily::RayleighAmplitude),
            "exp" => Ok(SpeckleFamily::ExponentialIntensity),
            "gamma" => Ok(SpeckleFamily::GammaMultilook),
            other => Err(Error::Parameter(format!(
                "unknown speckle family '{other}' (expected rayleigh, exp or gamma)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeckleSpec {
    pub family: SpeckleFamily,
    /// Number of looks; only used by the gamma family.
    pub looks: u32,
    pub seed: u64,
}

impl SpeckleSpec {
    pub fn gamma(looks: u32, seed: u64) -> Self {
        Self {
            family: SpeckleFamily::GammaMultilook,
            looks,
            seed,
        }
    }

    pub fn exponential(seed: u64) -> Self {
        Self {
            family: SpeckleFamily::ExponentialIntensity,
            looks: 1,
            seed,
        }
    }

    pub fn rayleigh(seed: u64) -> Self {
        Self {
            family: SpeckleFamily::RayleighAmplitude,
            looks: 1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.family == SpeckleFamily::GammaMultilook && self.looks < 1 {
            return Err(Error::Parameter("gamma speckle needs looks >= 1".into()));
        }
        Ok(())
    }

    /// Analytic variance of the unit-mean field.
    pub fn variance(&self) -> f64 {
        match self.family {
            SpeckleFamily::RayleighAmplitude => 4.0 / std::f64::consts::PI - 1.0,
            SpeckleFamily::ExponentialIntensity => 1.0,
            SpeckleFamily::GammaMultilook => 1.0 / f64::from(self.looks),
        }
    }
}

enum Sampler {
    Rayleigh(f64),
    Exponential,
    Gamma(Gamma<f64>),
}

impl Sampler {
    fn new(spec: &SpeckleSpec) -> Result<Self> {
        spec.validate()?;
        Ok(match spec.family {
            SpeckleFamily::RayleighAmplitude => {
                Sampler::Rayleigh((2.0 / std::f64::consts::PI).sqrt())
            }
            SpeckleFamily::ExponentialIntensity => Sampler::Exponential,
            SpeckleFamily::GammaMultilook => {
                let l = f64::from(spec.looks);
                Sampler::Gamma(Gamma::new(l, 1.0 / l).map_err(|e| Error::Parameter(e.to_string()))?)
            }
        })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Sampler::Rayleigh(scale) => {
                // inverse CDF; 1 - u lies in (0, 1]
                let u: f64 = rng.random();
                scale * (-2.0 * (1.0 - u).ln()).sqrt()
            }
            Sampler::Exponential => Exp1.sample(rng),
            Sampler::Gamma(g) => g.sample(rng),
        }
    }
}

/// Draws an i.i.d. unit-mean speckle field. Deterministic in `(spec, rows, cols)`.
pub fn sample_speckle(spec: &SpeckleSpec, rows: usize, cols: usize) -> Result<GrayImage> {
    let sampler = Sampler::new(spec)?;
    if rows == 0 || cols == 0 {
        return Err(Error::Dimension(format!("speckle field {rows}x{cols}")));
    }
    let base = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut field = vec![0.0; rows * cols];
    par::fill_rows(&mut field, cols, |r, row| {
        let mut rng = base.clone();
        rng.set_stream(r as u64);
        for px in row.iter_mut() {
            *px = sampler.sample(&mut rng);
        }
    });
    GrayImage::new(rows, cols, field)
}

/// Multiplies a non-negative clean image by a fresh speckle field.
///
/// Returns `(noisy, speckle)` with `noisy = clean * speckle` pixel-wise.
pub fn apply_speckle(clean: &GrayImage, spec: &SpeckleSpec) -> Result<(GrayImage, GrayImage)> {
    if let Some(i) = clean.pixels().iter().position(|&p| p < 0.0) {
        return Err(Error::Domain(format!(
            "clean image has negative pixel {} at ({}, {})",
            clean.pixels()[i],
            i / clean.cols(),
            i % clean.cols()
        )));
    }
    let speckle = sample_speckle(spec, clean.rows(), clean.cols())?;
    let noisy = clean.zip_map(&speckle, |i, s| i * s)?;
    Ok((noisy, speckle))
}

/// Signal-dependent additive noise `N = I * (S - 1)`, so that `I + N` reproduces `I * S`.
pub fn additive_noise(clean: &GrayImage, speckle: &GrayImage) -> Result<GrayImage> {
    clean.ensure_same_shape(speckle, "additive noise")?;
    clean.zip_map(speckle, |i, s| i * (s - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(img: &GrayImage) -> (f64, f64) {
        let s = img.stats();
        (s.mean, s.variance)
    }

    #[test]
    fn gamma_four_looks_moments() {
        let field = sample_speckle(&SpeckleSpec::gamma(4, 11), 1000, 1000).unwrap();
        let (m, v) = moments(&field);
        assert!((m - 1.0).abs() < 0.01, "mean {m}");
        assert!((v - 0.25).abs() < 0.03 * 0.25, "variance {v}");
        assert!(field.pixels().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn rayleigh_mean_is_one() {
        let field = sample_speckle(&SpeckleSpec::rayleigh(5), 1000, 1000).unwrap();
        let (m, v) = moments(&field);
        assert!((m - 1.0).abs() < 0.01);
        let analytic = 4.0 / std::f64::consts::PI - 1.0;
        assert!((v - analytic).abs() < 0.03 * analytic);
    }

    #[test]
    fn single_look_gamma_matches_exponential_distribution() {
        let g = sample_speckle(&SpeckleSpec::gamma(1, 9), 500, 500).unwrap();
        let e = sample_speckle(&SpeckleSpec::exponential(9), 500, 500).unwrap();
        // compare empirical CDFs against 1 - exp(-x) at a few quantiles
        for field in [&g, &e] {
            let n = field.len() as f64;
            for x in [0.1, 0.5, 1.0, 2.0, 4.0] {
                let frac = field.pixels().iter().filter(|&&p| p <= x).count() as f64 / n;
                assert!(
                    (frac - (1.0 - (-x).exp())).abs() < 0.005,
                    "x={x} frac={frac}"
                );
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = SpeckleSpec::gamma(3, 1234);
        let a = sample_speckle(&spec, 37, 29).unwrap();
        let b = sample_speckle(&spec, 37, 29).unwrap();
        assert_eq!(a, b);
        let c = sample_speckle(&SpeckleSpec::gamma(3, 1235), 37, 29).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rows_are_independent_of_image_height() {
        // row r is always drawn from stream r, so a taller field extends a shorter one
        let spec = SpeckleSpec::exponential(77);
        let short = sample_speckle(&spec, 3, 10).unwrap();
        let tall = sample_speckle(&spec, 6, 10).unwrap();
        assert_eq!(short.pixels(), &tall.pixels()[..30]);
    }

    #[test]
    fn rejects_zero_looks_and_negative_pixels() {
        assert!(matches!(
            sample_speckle(&SpeckleSpec::gamma(0, 1), 2, 2),
            Err(Error::Parameter(_))
        ));
        let clean = GrayImage::from_rows(&[[1.0, -0.5]]).unwrap();
        assert!(matches!(
            apply_speckle(&clean, &SpeckleSpec::exponential(1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zero_image_stays_zero() {
        let clean = GrayImage::filled(16, 16, 0.0).unwrap();
        let (noisy, _) = apply_speckle(&clean, &SpeckleSpec::rayleigh(3)).unwrap();
        assert!(noisy.pixels().iter().all(|&p| p == 0.0));
    }

    #[test]
    fn flat_image_moments() {
        let clean = GrayImage::filled(512, 512, 100.0).unwrap();
        let (noisy, speckle) = apply_speckle(&clean, &SpeckleSpec::gamma(4, 21)).unwrap();
        let s = noisy.stats();
        assert!((s.mean - 100.0).abs() < 1.0);
        assert!((s.std - 50.0).abs() < 1.5);
        for ((n, c), sp) in noisy
            .pixels()
            .iter()
            .zip(clean.pixels())
            .zip(speckle.pixels())
        {
            assert_eq!(*n, c * sp);
        }
    }

    #[test]
    fn additive_noise_examples() {
        let clean = GrayImage::from_rows(&[[2.0]]).unwrap();
        let s = GrayImage::from_rows(&[[1.5]]).unwrap();
        let n = additive_noise(&clean, &s).unwrap();
        assert_eq!(n.pixels(), &[1.0]);
        assert_eq!(clean.get(0, 0) + n.get(0, 0), 3.0);

        let ones = GrayImage::filled(4, 4, 1.0).unwrap();
        let clean = GrayImage::from_fn(4, 4, |r, c| (r + c) as f64).unwrap();
        assert!(additive_noise(&clean, &ones)
            .unwrap()
            .pixels()
            .iter()
            .all(|&v| v == 0.0));
        assert!(additive_noise(&clean, &GrayImage::filled(2, 2, 1.0).unwrap()).is_err());
    }

    proptest::proptest! {
        #[test]
        fn additive_identity_holds(seed in 0u64..500, looks in 1u32..8) {
            let clean = GrayImage::from_fn(16, 16, |r, c| ((r * 31 + c * 17 + seed as usize) % 200) as f64).unwrap();
            let (noisy, speckle) = apply_speckle(&clean, &SpeckleSpec::gamma(looks, seed)).unwrap();
            let n = additive_noise(&clean, &speckle).unwrap();
            for ((i, nn), is) in clean.pixels().iter().zip(n.pixels()).zip(noisy.pixels()) {
                proptest::prop_assert!((i + nn - is).abs() <= 1e-12 * is.abs().max(1.0));
            }
        }
    }
}
