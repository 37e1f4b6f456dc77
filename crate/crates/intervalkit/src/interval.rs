//! Canonicalized interval batches and coverage targets.
//!
//! Networks emit two unordered raw outputs per example; which head acts as
//! which bound may differ per example. [`canonicalize`] resolves the pair to
//! `(min, max)` so downstream metrics never see crossing bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Per-example ordered interval bounds, `lower[i] <= upper[i]` for all `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBatch<S> {
    lower: Vec<S>,
    upper: Vec<S>,
}

impl<S: Scalar> IntervalBatch<S> {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[S] {
        &self.lower
    }

    pub fn upper(&self) -> &[S] {
        &self.upper
    }

    pub fn bounds(&self, i: usize) -> (S, S) {
        (self.lower[i], self.upper[i])
    }

    /// Interval widths, all nonnegative by construction.
    pub fn widths(&self) -> Vec<S> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| u - l)
            .collect()
    }

    /// Closed-interval coverage indicators against `targets` (0 or 1).
    pub fn coverage_indicators(&self, targets: &[S]) -> Result<Vec<S>> {
        if targets.len() != self.len() {
            return Err(Error::shape(format!(
                "coverage indicators: {} intervals vs {} targets",
                self.len(),
                targets.len()
            )));
        }
        Ok(self
            .lower
            .iter()
            .zip(&self.upper)
            .zip(targets)
            .map(|((&l, &u), &y)| if l <= y && y <= u { S::one() } else { S::zero() })
            .collect())
    }
}

/// Order raw output pairs element-wise into `(min, max)`.
///
/// Pure and idempotent; swapping the two arguments yields the same batch.
pub fn canonicalize<S: Scalar>(raw_a: &[S], raw_b: &[S]) -> Result<IntervalBatch<S>> {
    if raw_a.len() != raw_b.len() {
        return Err(Error::shape(format!(
            "canonicalize: raw output lengths differ ({} vs {})",
            raw_a.len(),
            raw_b.len()
        )));
    }
    let mut lower = Vec::with_capacity(raw_a.len());
    let mut upper = Vec::with_capacity(raw_a.len());
    for (&a, &b) in raw_a.iter().zip(raw_b) {
        lower.push(a.min(b));
        upper.push(a.max(b));
    }
    Ok(IntervalBatch { lower, upper })
}

/// Training-time coverage target, with the width-penalty bias correction.
///
/// The width-penalized loss biases realized coverage down by `2 * lambda`,
/// so training at `alpha_hat = alpha + 2 * lambda` restores coverage `alpha`.
/// When that correction leaves `(0, 1]` the target is clamped just below 1
/// and flagged; that regime has no coverage guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageTarget {
    pub alpha: f64,
    pub alpha_hat: f64,
    pub clamped: bool,
}

impl CoverageTarget {
    const CLAMP: f64 = 1.0 - 1e-6;

    /// Plain target: `alpha_hat == alpha`.
    pub fn plain(alpha: f64) -> Result<Self> {
        Self::validate_alpha(alpha)?;
        Ok(Self {
            alpha,
            alpha_hat: alpha,
            clamped: false,
        })
    }

    /// Width-penalty corrected target, `alpha_hat = alpha + 2 * lambda`.
    pub fn width_corrected(alpha: f64, lambda: f64) -> Result<Self> {
        Self::validate_alpha(alpha)?;
        if lambda < 0.0 {
            return Err(Error::config(format!("lambda must be >= 0, got {lambda}")));
        }
        let raw = alpha + 2.0 * lambda;
        let (alpha_hat, clamped) = if raw > 1.0 {
            (Self::CLAMP, true)
        } else {
            (raw, false)
        };
        Ok(Self {
            alpha,
            alpha_hat,
            clamped,
        })
    }

    fn validate_alpha(alpha: f64) -> Result<()> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::config(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        Ok(())
    }

    pub fn alpha_hat_as<S: Scalar>(&self) -> S {
        lit(self.alpha_hat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_ordered_input() {
        let b = canonicalize(&[0.0], &[1.0]).unwrap();
        assert_eq!(b.lower(), &[0.0]);
        assert_eq!(b.upper(), &[1.0]);
    }

    #[test]
    fn canonicalize_swapped_input() {
        let b = canonicalize(&[1.0], &[0.0]).unwrap();
        assert_eq!(b.lower(), &[0.0]);
        assert_eq!(b.upper(), &[1.0]);
    }

    #[test]
    fn canonicalize_elementwise() {
        let b = canonicalize(&[2.0, 0.0], &[1.0, 3.0]).unwrap();
        assert_eq!(b.lower(), &[1.0, 0.0]);
        assert_eq!(b.upper(), &[2.0, 3.0]);
    }

    #[test]
    fn canonicalize_length_mismatch_errors() {
        assert!(matches!(
            canonicalize(&[0.0], &[1.0, 2.0]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn canonicalize_works_in_f32() {
        let b = canonicalize(&[2.0f32], &[1.0f32]).unwrap();
        assert_eq!(b.bounds(0), (1.0f32, 2.0f32));
    }

    #[test]
    fn coverage_target_correction_and_clamp() {
        let t = CoverageTarget::width_corrected(0.8, 0.05).unwrap();
        assert_eq!(t.alpha_hat, 0.9);
        assert!(!t.clamped);

        // alpha + 2 lambda == 1 exactly is still a valid target
        let t = CoverageTarget::width_corrected(0.8, 0.1).unwrap();
        assert_eq!(t.alpha_hat, 1.0);
        assert!(!t.clamped);

        let t = CoverageTarget::width_corrected(0.9, 0.1).unwrap();
        assert!(t.clamped);
        assert!(t.alpha_hat < 1.0 && t.alpha_hat > 0.999);
    }

    #[test]
    fn coverage_target_rejects_bad_alpha() {
        assert!(CoverageTarget::plain(0.0).is_err());
        assert!(CoverageTarget::plain(1.0).is_err());
        assert!(CoverageTarget::width_corrected(0.5, -0.1).is_err());
    }
}
