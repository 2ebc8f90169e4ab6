//! Kalman gain-recursion shrinkage.
//!
//! The coefficient is modelled as a static state (`w_{t+1} = w_t`) observed through one
//! noisy measurement `y`, which is reused at every step. Per step:
//!
//! ```text
//! K_t     = P_t / (P_t + sigma_n^2)
//! w_{t+1} = w_t + K_t (y - w_t)
//! P_{t+1} = (1 - K_t) P_t
//! ```
//!
//! iterating while `P_t > P_final` and `t < max_iters`. The gain sequence does not depend
//! on `y`, so a whole subband shares one [`KalmanSchedule`]. With `w_0 = 0` the recursion
//! telescopes to `w_t = (1 - P_t / P_0) y`, a linear shrink whose strength is set by where
//! the covariance stops.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Initial state estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitialEstimate {
    /// Detail coefficients are zero-mean.
    #[default]
    Zero,
}

/// Initial error covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitialCovariance {
    /// `max(var(subband) - sigma_n^2, epsilon * sigma_n^2)`.
    #[default]
    SubbandSignalVariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KalmanShrinkConfig {
    pub w0_policy: InitialEstimate,
    pub p0_policy: InitialCovariance,
    /// Floor of `P_0` as a fraction of `sigma_n^2`.
    pub epsilon: f64,
    /// Stop covariance as a fraction of `sigma_n^2`.
    pub p_final_ratio: f64,
    pub max_iters: usize,
}

impl Default for KalmanShrinkConfig {
    fn default() -> Self {
        Self {
            w0_policy: InitialEstimate::Zero,
            p0_policy: InitialCovariance::SubbandSignalVariance,
            epsilon: 1e-3,
            p_final_ratio: 0.01,
            max_iters: 10_000,
        }
    }
}

impl KalmanShrinkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_final_ratio > 0.0 && self.p_final_ratio < 1.0) {
            return Err(Error::Parameter(format!(
                "p_final_ratio must lie in (0, 1), got {}",
                self.p_final_ratio
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Parameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Parameter("max_iters must be at least 1".into()));
        }
        Ok(())
    }

    /// `P_0` for a subband with the given variance.
    pub fn initial_covariance(&self, subband_variance: f64, noise_var: f64) -> f64 {
        match self.p0_policy {
            InitialCovariance::SubbandSignalVariance => {
                (subband_variance - noise_var).max(self.epsilon * noise_var)
            }
        }
    }

    pub fn initial_estimate(&self) -> f64 {
        match self.w0_policy {
            InitialEstimate::Zero => 0.0,
        }
    }

    pub fn final_covariance(&self, noise_var: f64) -> f64 {
        self.p_final_ratio * noise_var
    }
}

/// Gain sequence `K_0 .. K_{T-1}` and terminal covariance `P_T` for one subband.
#[derive(Debug, Clone, PartialEq)]
pub struct KalmanSchedule {
    pub gains: Vec<f64>,
    pub p_initial: f64,
    pub p_terminal: f64,
}

impl KalmanSchedule {
    pub fn new(noise_var: f64, p0: f64, p_final: f64, max_iters: usize) -> Result<Self> {
        if !(noise_var >= 0.0 && noise_var.is_finite()) {
            return Err(Error::Parameter(format!("noise variance {noise_var}")));
        }
        if !(p0 >= 0.0 && p0.is_finite()) {
            return Err(Error::Parameter(format!("initial covariance {p0}")));
        }
        if p_final.is_nan() || p_final <= 0.0 {
            return Err(Error::Parameter(format!(
                "final covariance must be positive, got {p_final}"
            )));
        }
        let mut gains = Vec::new();
        let mut p = p0;
        while p > p_final && gains.len() < max_iters {
            let k = p / (p + noise_var);
            gains.push(k);
            p *= 1.0 - k;
        }
        Ok(Self {
            gains,
            p_initial: p0,
            p_terminal: p,
        })
    }

    pub fn iterations(&self) -> usize {
        self.gains.len()
    }

    /// Runs the estimate update for one measurement.
    #[inline]
    pub fn apply(&self, y: f64, w0: f64) -> f64 {
        self.gains.iter().fold(w0, |w, k| w + k * (y - w))
    }

    /// Net gain `1 - P_T / P_0` of the zero-initialised recursion.
    pub fn net_gain(&self) -> f64 {
        if self.p_initial > 0.0 {
            1.0 - self.p_terminal / self.p_initial
        } else {
            0.0
        }
    }
}

/// Result of shrinking a single coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KalmanEstimate {
    pub estimate: f64,
    pub iterations: usize,
    pub p_terminal: f64,
}

pub fn kalman_shrink_coefficient(
    y: f64,
    noise_var: f64,
    p0: f64,
    w0: f64,
    p_final: f64,
    max_iters: usize,
) -> Result<KalmanEstimate> {
    let schedule = KalmanSchedule::new(noise_var, p0, p_final, max_iters)?;
    Ok(KalmanEstimate {
        estimate: schedule.apply(y, w0),
        iterations: schedule.iterations(),
        p_terminal: schedule.p_terminal,
    })
}

/// Analytic iteration count `ceil((P_0 / P_final - 1) sigma_n^2 / P_0)`, clamped to
/// `[0, max_iters]`. Undefined (None) when `P_0 == 0` or `sigma_n^2 == 0`.
pub fn analytic_iterations(noise_var: f64, p0: f64, p_final: f64, max_iters: usize) -> Option<f64> {
    if p0 <= 0.0 || noise_var <= 0.0 {
        return None;
    }
    let t = ((p0 / p_final - 1.0) * noise_var / p0).max(0.0);
    Some(t.min(max_iters as f64))
}
