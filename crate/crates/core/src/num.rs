//! Small numeric helpers shared across modules.

/// Relative tolerance used when a floating-point ratio is meant to be an
/// exact integer (e.g. `0.2 / 0.1` evaluating to `2.0000000000000004`).
const INT_TOL: f64 = 1e-9;

/// Ceiling that forgives floating-point noise around exact integers:
/// values within `1e-9` (relative) of an integer round to it instead of
/// being pushed up a whole step.
#[inline]
pub fn tolerant_ceil(x: f64) -> f64 {
    let nearest = x.round();
    if (x - nearest).abs() <= INT_TOL * x.abs().max(1.0) {
        nearest
    } else {
        x.ceil()
    }
}

/// Mean and standard error of a sample.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    assert!(n >= 1, "mean of empty sample");
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

/// Unbiased sample variance.
pub fn variance(values: &[f64]) -> f64 {
    let n = values.len();
    assert!(n >= 2, "variance needs at least two samples");
    let mean = values.iter().sum::<f64>() / n as f64;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tolerant_ceil_forgives_fp_noise() {
        assert_eq!(tolerant_ceil(0.2 / 0.1), 2.0); // raw ratio is 2.0000000000000004
        assert_eq!(tolerant_ceil(0.15 / 0.1), 2.0);
        assert_eq!(tolerant_ceil(2.5), 3.0);
        assert_eq!(tolerant_ceil(3.0), 3.0);
        // fractions beyond the relative window still ceil...
        assert_eq!(tolerant_ceil(1.0e6 + 0.4), 1.0e6 + 1.0);
        // ...while at large magnitudes the window itself grows
        assert_eq!(tolerant_ceil(5.0e8 + 0.1), 5.0e8);
    }

    #[test]
    fn mean_stderr_basics() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0]);
        assert_relative_eq!(m, 2.0);
        assert_relative_eq!(se, (1.0f64 / 3.0).sqrt());
    }
}
