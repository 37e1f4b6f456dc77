//! Small statistics helpers shared by losses, metrics, and oracles.
//!
//! Variances and covariances are population-normalized (divide by `n`);
//! Pearson correlation is invariant to that choice as long as it is applied
//! consistently, which this module guarantees by being the single home for
//! these kernels.

use crate::scalar::{lit, Scalar};

pub fn mean<S: Scalar>(xs: &[S]) -> S {
    if xs.is_empty() {
        return S::zero();
    }
    let sum = xs.iter().fold(S::zero(), |acc, &x| acc + x);
    sum / lit(xs.len() as f64)
}

/// Population variance (divides by `n`).
pub fn variance<S: Scalar>(xs: &[S]) -> S {
    if xs.is_empty() {
        return S::zero();
    }
    let m = mean(xs);
    let sum = xs
        .iter()
        .fold(S::zero(), |acc, &x| acc + (x - m) * (x - m));
    sum / lit(xs.len() as f64)
}

/// Sample variance (divides by `n - 1`).
pub fn sample_variance<S: Scalar>(xs: &[S]) -> S {
    if xs.len() < 2 {
        return S::zero();
    }
    let m = mean(xs);
    let sum = xs
        .iter()
        .fold(S::zero(), |acc, &x| acc + (x - m) * (x - m));
    sum / lit((xs.len() - 1) as f64)
}

/// Population covariance of two equal-length slices.
pub fn covariance<S: Scalar>(xs: &[S], ys: &[S]) -> S {
    debug_assert_eq!(xs.len(), ys.len());
    if xs.is_empty() {
        return S::zero();
    }
    let mx = mean(xs);
    let my = mean(ys);
    let sum = xs
        .iter()
        .zip(ys)
        .fold(S::zero(), |acc, (&x, &y)| acc + (x - mx) * (y - my));
    sum / lit(xs.len() as f64)
}

/// Pearson correlation; `None` when either input has zero variance.
pub fn pearson<S: Scalar>(xs: &[S], ys: &[S]) -> Option<S> {
    let vx = variance(xs);
    let vy = variance(ys);
    if vx <= S::zero() || vy <= S::zero() {
        return None;
    }
    Some(covariance(xs, ys) / (vx.sqrt() * vy.sqrt()))
}

/// Standard error of the mean, `sample_std / sqrt(n)`.
pub fn standard_error<S: Scalar>(xs: &[S]) -> S {
    if xs.len() < 2 {
        return S::zero();
    }
    (sample_variance(xs) / lit(xs.len() as f64)).sqrt()
}

/// Median of a slice (averages the two central order statistics for even `n`).
pub fn median<S: Scalar>(xs: &[S]) -> S {
    assert!(!xs.is_empty(), "median of empty slice");
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value in median"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / lit(2.0)
    }
}

/// Empirical quantile with linear interpolation between order statistics
/// (the common "type 7" rule: index `p * (n - 1)` into the sorted sample).
pub fn quantile<S: Scalar>(sorted: &[S], p: f64) -> S {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]), "input must be sorted");
    let p = p.clamp(0.0, 1.0);
    let pos = p * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 >= sorted.len() {
        sorted[sorted.len() - 1]
    } else {
        sorted[i] * lit(1.0 - frac) + sorted[i + 1] * lit(frac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pearson_reference_value() {
        // frozen reference: cov = 0.5, sd_w = sqrt(1.25), sd_m = 0.5
        let w = [1.0, 2.0, 3.0, 4.0];
        let m = [0.0, 0.0, 1.0, 1.0];
        let r = pearson(&w, &m).unwrap();
        assert_relative_eq!(r, 0.894_427_190_999_915_9, max_relative = 1e-12);
    }

    #[test]
    fn pearson_degenerate_is_none() {
        assert!(pearson(&[1.0, 1.0, 1.0], &[0.0, 1.0, 0.0]).is_none());
        assert!(pearson(&[0.0, 1.0, 0.0], &[2.0, 2.0, 2.0]).is_none());
    }

    #[test]
    fn quantile_interpolates() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        assert_relative_eq!(quantile(&xs, 0.5), 1.5);
        assert_relative_eq!(quantile(&xs, 0.0), 0.0);
        assert_relative_eq!(quantile(&xs, 1.0), 3.0);
    }

    #[test]
    fn median_even_odd() {
        assert_relative_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_relative_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
