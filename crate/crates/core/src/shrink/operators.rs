//! Scalar shrinkage operators.

/// Soft thresholding: `sign(y) * max(|y| - tau, 0)`.
#[inline]
pub fn soft(y: f64, tau: f64) -> f64 {
    let m = y.abs() - tau;
    if m > 0.0 {
        m.copysign(y)
    } else {
        0.0
    }
}

/// Hard thresholding: keeps `y` when `|y| > tau`.
#[inline]
pub fn hard(y: f64, tau: f64) -> f64 {
    if y.abs() > tau {
        y
    } else {
        0.0
    }
}

/// Semi-soft (firm) thresholding with `0 <= lower < upper`.
///
/// Zero below `lower`, identity above `upper`, linear ramp from 0 to `upper` in between.
#[inline]
pub fn semisoft(y: f64, lower: f64, upper: f64) -> f64 {
    let a = y.abs();
    if a <= lower {
        0.0
    } else if a <= upper {
        (upper * (a - lower) / (upper - lower)).copysign(y)
    } else {
        y
    }
}

/// Gain of the Gaussian-prior MAP estimate, `sx2 / (sx2 + sn2)`; zero when both vanish.
#[inline]
pub fn linear_gaussian_gain(signal_var: f64, noise_var: f64) -> f64 {
    let total = signal_var + noise_var;
    if total > 0.0 {
        signal_var / total
    } else {
        0.0
    }
}

/// MAP estimate under a zero-mean Gaussian prior with std `sigma_x` and Gaussian noise
/// with std `sigma_n`.
#[inline]
pub fn linear_gaussian_shrink(y: f64, sigma_x: f64, sigma_n: f64) -> f64 {
    linear_gaussian_gain(sigma_x * sigma_x, sigma_n * sigma_n) * y
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn soft_examples() {
        assert_eq!(soft(5.0, 2.0), 3.0);
        assert_eq!(soft(-5.0, 2.0), -3.0);
        assert_eq!(soft(1.5, 2.0), 0.0);
        for y in [-3.5, 0.0, 1e-9, 42.0] {
            assert_eq!(soft(y, 0.0), y);
        }
    }

    #[test]
    fn hard_examples() {
        assert_eq!(hard(5.0, 2.0), 5.0);
        assert_eq!(hard(1.5, 2.0), 0.0);
        assert_eq!(hard(-3.0, 2.0), -3.0);
        assert_eq!(hard(2.0, 2.0), 0.0);
    }

    #[test]
    fn semisoft_boundaries() {
        assert_eq!(semisoft(4.0, 0.0, 4.0), 4.0);
        assert_eq!(semisoft(2.0, 0.0, 4.0), 2.0);
        assert_eq!(semisoft(1.0, 1.0, 3.0), 0.0);
        assert_eq!(semisoft(2.0, 1.0, 3.0), 1.5);
        assert_eq!(semisoft(-2.0, 1.0, 3.0), -1.5);
        assert_eq!(semisoft(3.0, 1.0, 3.0), 3.0);
        // continuity at the upper knee
        let below = semisoft(3.0 - 1e-9, 1.0, 3.0);
        assert!((below - 3.0).abs() < 1e-8);
    }

    #[test]
    fn linear_gaussian_examples() {
        assert!((linear_gaussian_shrink(4.0, 3f64.sqrt(), 1.0) - 3.0).abs() < 1e-12);
        assert_eq!(linear_gaussian_gain(3.0, 1.0) * 4.0, 3.0);
        assert_eq!(linear_gaussian_shrink(7.0, 2.0, 0.0), 7.0);
        assert_eq!(linear_gaussian_shrink(7.0, 0.0, 2.0), 0.0);
        assert_eq!(linear_gaussian_shrink(7.0, 0.0, 0.0), 0.0);
    }

    proptest! {
        #[test]
        fn operators_shrink_toward_zero(y in -1e3f64..1e3, t1 in 0.0f64..50.0, dt in 1e-6f64..50.0) {
            let t2 = t1 + dt;
            for out in [soft(y, t1), hard(y, t1), semisoft(y, t1, t2)] {
                prop_assert!(out.abs() <= y.abs());
                prop_assert!(out == 0.0 || out.signum() == y.signum());
            }
        }

        #[test]
        fn operators_monotone(a in -1e3f64..1e3, b in -1e3f64..1e3, t1 in 0.0f64..50.0, dt in 1e-6f64..50.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let t2 = t1 + dt;
            prop_assert!(soft(lo, t1) <= soft(hi, t1));
            prop_assert!(hard(lo, t1) <= hard(hi, t1));
            prop_assert!(semisoft(lo, t1, t2) <= semisoft(hi, t1, t2));
            prop_assert!((soft(a, t1) - soft(b, t1)).abs() <= (a - b).abs() + 1e-12);
        }

        #[test]
        fn gaussian_gain_in_unit_interval(sx in 0.0f64..1e3, sn in 0.0f64..1e3, y in -1e3f64..1e3) {
            let g = linear_gaussian_gain(sx * sx, sn * sn);
            prop_assert!((0.0..=1.0).contains(&g));
            prop_assert_eq!(linear_gaussian_shrink(y, sx, sn), g * y);
        }
    }
}
