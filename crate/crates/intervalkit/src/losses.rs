//! Interval losses and their analytic gradients.
//!
//! Pointwise losses (pinball, quantile-pair, Winkler, relaxed and
//! width-penalized relaxed losses) are pure functions of one example; the
//! batch losses (orthogonality-regularized relaxed loss, direct interval
//! regression) need batch statistics and only exist at batch level.
//!
//! Everything here accepts *raw*, possibly unordered output pairs. The
//! relaxed family is permutation invariant by construction; the others order
//! internally where the formula requires it. Sign conventions for gradients
//! follow the product rewrite `L = (y - mu1)(y - mu2)(alpha - I)`:
//! at a kink (`y` exactly on a bound, i.e. the product is zero) the
//! subgradient from the `kappa >= 0` branch is used, treating the boundary
//! point as not covered. The batch coverage vector `m`, in contrast, uses
//! the closed-interval convention shared with the metrics module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::CoverageTarget;
use crate::scalar::{lit, Scalar};
use crate::stats;
use crate::Real;

/// Loss family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LossFamily {
    /// Relaxed quantile regression on the product `(y - mu1)(y - mu2)`.
    Rqr,
    /// RQR plus a squared-width penalty, trained at the corrected target.
    RqrW,
    /// RQR plus a batch orthogonality penalty on width-coverage correlation.
    RqrO,
    /// Classic pinball pair at the symmetric quantiles.
    QrPinball,
    /// Single-head pinball conditioned on the quantile input.
    SqrPinball,
    /// Winkler interval score.
    Winkler,
    /// Direct interval regression (captured width + coverage deficit).
    Ir,
}

/// Full loss configuration as carried by checkpoints and experiment configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossConfig {
    pub family: LossFamily,
    /// Target coverage probability in (0, 1).
    pub alpha: Real,
    /// Penalty weight for RqrW / RqrO / Ir; 0 is permitted everywhere.
    #[serde(default)]
    pub lambda: Real,
    /// Quantile probability for single-quantile pinball.
    #[serde(default = "default_quantile")]
    pub quantile: Real,
    /// Square the Ir coverage-deficit term (the original formulation);
    /// `false` evaluates the deficit linearly.
    #[serde(default)]
    pub ir_squared_deficit: bool,
    /// Sigmoid sharpness for the Ir coverage-deficit term during training;
    /// `None` keeps the exact indicator (which has zero gradient a.e.).
    #[serde(default)]
    pub ir_softness: Option<Real>,
}

fn default_quantile() -> Real {
    0.5
}

impl LossConfig {
    pub fn new(family: LossFamily, alpha: Real) -> Self {
        Self {
            family,
            alpha,
            lambda: 0.0,
            quantile: 0.5,
            ir_squared_deficit: false,
            ir_softness: None,
        }
    }

    pub fn with_lambda(mut self, lambda: Real) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_quantile(mut self, q: Real) -> Self {
        self.quantile = q;
        self
    }

    /// Training-time coverage target (corrected for RqrW, plain otherwise).
    pub fn coverage_target(&self) -> Result<CoverageTarget> {
        match self.family {
            LossFamily::RqrW => CoverageTarget::width_corrected(self.alpha, self.lambda),
            _ => CoverageTarget::plain(self.alpha),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.lambda < 0.0 {
            return Err(Error::config(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if !(self.quantile > 0.0 && self.quantile < 1.0) {
            return Err(Error::config(format!(
                "quantile must lie in (0, 1), got {}",
                self.quantile
            )));
        }
        Ok(())
    }
}

/// Count of covered points in a batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchCoverageStats {
    pub n: usize,
    pub c: usize,
}

impl BatchCoverageStats {
    /// Closed-interval coverage count over raw (unordered) output pairs.
    pub fn from_raw<S: Scalar>(raw_a: &[S], raw_b: &[S], ys: &[S]) -> Self {
        let c = raw_a
            .iter()
            .zip(raw_b)
            .zip(ys)
            .filter(|((&a, &b), &y)| a.min(b) <= y && y <= a.max(b))
            .count();
        Self { n: ys.len(), c }
    }
}

/// Width and coverage-indicator vectors for one batch.
#[derive(Debug, Clone)]
pub struct WidthCoverageVectors<S> {
    pub w: Vec<S>,
    pub m: Vec<S>,
}

impl<S: Scalar> WidthCoverageVectors<S> {
    /// Widths `|a - b|` and closed-interval coverage indicators.
    pub fn from_raw(raw_a: &[S], raw_b: &[S], ys: &[S]) -> Result<Self> {
        if raw_a.len() != raw_b.len() || raw_a.len() != ys.len() {
            return Err(Error::shape(format!(
                "width/coverage vectors: lengths {} / {} / {}",
                raw_a.len(),
                raw_b.len(),
                ys.len()
            )));
        }
        let w = raw_a
            .iter()
            .zip(raw_b)
            .map(|(&a, &b)| (a - b).abs())
            .collect();
        let m = raw_a
            .iter()
            .zip(raw_b)
            .zip(ys)
            .map(|((&a, &b), &y)| {
                if a.min(b) <= y && y <= a.max(b) {
                    S::one()
                } else {
                    S::zero()
                }
            })
            .collect();
        Ok(Self { w, m })
    }
}

/// Per-example gradient with respect to the two raw outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradPair<S> {
    pub d_mu1: S,
    pub d_mu2: S,
}

// ---------------------------------------------------------------------------
// pointwise losses
// ---------------------------------------------------------------------------

/// Pinball (quantile) loss at quantile probability `q`.
pub fn pinball<S: Scalar>(mu: S, y: S, q: S) -> S {
    let r = y - mu;
    if r >= S::zero() {
        q * r
    } else {
        (q - S::one()) * r
    }
}

/// Derivative of the pinball loss in `mu`; at `y == mu` the `y - mu >= 0`
/// branch is used.
pub fn pinball_grad<S: Scalar>(mu: S, y: S, q: S) -> S {
    if y - mu >= S::zero() {
        -q
    } else {
        S::one() - q
    }
}

/// Quantile-pair loss: pinball at `(1-alpha)/2` on the first output plus
/// pinball at `1-(1-alpha)/2` on the second.
pub fn qr_loss<S: Scalar>(mu1: S, mu2: S, y: S, alpha: S) -> S {
    let half = lit::<S>(0.5);
    let q_lo = (S::one() - alpha) * half;
    let q_hi = S::one() - q_lo;
    pinball(mu1, y, q_lo) + pinball(mu2, y, q_hi)
}

pub fn qr_grad<S: Scalar>(mu1: S, mu2: S, y: S, alpha: S) -> GradPair<S> {
    let half = lit::<S>(0.5);
    let q_lo = (S::one() - alpha) * half;
    let q_hi = S::one() - q_lo;
    GradPair {
        d_mu1: pinball_grad(mu1, y, q_lo),
        d_mu2: pinball_grad(mu2, y, q_hi),
    }
}

/// Winkler interval score at miscoverage level `a` (coverage `1 - a`).
/// Expects ordered bounds `mu1 <= mu2`.
pub fn winkler_score<S: Scalar>(mu1: S, mu2: S, y: S, a: S) -> S {
    let two_over_a = lit::<S>(2.0) / a;
    let mut score = mu2 - mu1;
    if y <= mu1 {
        score = score + two_over_a * (mu1 - y);
    }
    if y >= mu2 {
        score = score + two_over_a * (y - mu2);
    }
    score
}

pub fn winkler_grad<S: Scalar>(mu1: S, mu2: S, y: S, a: S) -> GradPair<S> {
    let two_over_a = lit::<S>(2.0) / a;
    let d_mu1 = if y <= mu1 {
        -S::one() + two_over_a
    } else {
        -S::one()
    };
    let d_mu2 = if y >= mu2 {
        S::one() - two_over_a
    } else {
        S::one()
    };
    GradPair { d_mu1, d_mu2 }
}

/// Relaxed quantile regression loss,
/// `alpha * kappa` if `kappa >= 0` else `(alpha - 1) * kappa`, with
/// `kappa = (y - mu1)(y - mu2)`. Permutation invariant in the two outputs.
pub fn rqr_loss<S: Scalar>(mu1: S, mu2: S, y: S, alpha: S) -> S {
    let kappa = (y - mu1) * (y - mu2);
    if kappa >= S::zero() {
        alpha * kappa
    } else {
        (alpha - S::one()) * kappa
    }
}

/// Gradients of [`rqr_loss`]: `dL/dmu1 = -(y - mu2)(alpha - I)` and
/// symmetrically for `mu2`, where `I = 1` iff `kappa < 0`.
pub fn rqr_grad<S: Scalar>(mu1: S, mu2: S, y: S, alpha: S) -> GradPair<S> {
    let kappa = (y - mu1) * (y - mu2);
    let coeff = if kappa >= S::zero() {
        alpha
    } else {
        alpha - S::one()
    };
    GradPair {
        d_mu1: -(y - mu2) * coeff,
        d_mu2: -(y - mu1) * coeff,
    }
}

/// Width-penalized relaxed loss evaluated at the (already corrected)
/// training target `alpha_hat`; reduces exactly to [`rqr_loss`] at
/// `lambda == 0`.
pub fn rqr_w_loss<S: Scalar>(mu1: S, mu2: S, y: S, alpha_hat: S, lambda: S) -> S {
    let w = mu2 - mu1;
    rqr_loss(mu1, mu2, y, alpha_hat) + lambda * w * w / lit(2.0)
}

pub fn rqr_w_grad<S: Scalar>(mu1: S, mu2: S, y: S, alpha_hat: S, lambda: S) -> GradPair<S> {
    let base = rqr_grad(mu1, mu2, y, alpha_hat);
    let w = mu2 - mu1;
    GradPair {
        d_mu1: base.d_mu1 - lambda * w,
        d_mu2: base.d_mu2 + lambda * w,
    }
}

// ---------------------------------------------------------------------------
// batch losses
// ---------------------------------------------------------------------------

/// Penalty value plus a flag for batches where it is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyValue<S> {
    pub value: S,
    /// Zero variance in widths or coverage indicators: no correlation is
    /// defined and the penalty reports 0.
    pub degenerate: bool,
}

/// Absolute Pearson correlation between widths and coverage indicators.
pub fn orthogonality_penalty<S: Scalar>(vectors: &WidthCoverageVectors<S>) -> PenaltyValue<S> {
    match stats::pearson(&vectors.w, &vectors.m) {
        Some(r) => PenaltyValue {
            value: r.abs(),
            degenerate: false,
        },
        None => PenaltyValue {
            value: S::zero(),
            degenerate: true,
        },
    }
}

/// Orthogonality-regularized relaxed loss over a batch: mean RQR plus
/// `gamma` times the width-coverage penalty computed on this batch.
pub fn rqr_o_loss<S: Scalar>(
    raw_a: &[S],
    raw_b: &[S],
    ys: &[S],
    alpha: S,
    gamma: S,
) -> Result<PenaltyValue<S>> {
    if ys.len() < 2 {
        return Err(Error::config(format!(
            "rqr_o_loss needs a batch of at least 2, got {}",
            ys.len()
        )));
    }
    let vectors = WidthCoverageVectors::from_raw(raw_a, raw_b, ys)?;
    let n = lit::<S>(ys.len() as f64);
    let mean_rqr = raw_a
        .iter()
        .zip(raw_b)
        .zip(ys)
        .fold(S::zero(), |acc, ((&a, &b), &y)| {
            acc + rqr_loss(a, b, y, alpha)
        })
        / n;
    let penalty = orthogonality_penalty(&vectors);
    Ok(PenaltyValue {
        value: mean_rqr + gamma * penalty.value,
        degenerate: penalty.degenerate,
    })
}

/// Direct interval regression loss over a batch:
/// mean of the captured-width term `(n/c) * w_i * I_i` plus the
/// coverage-deficit penalty `lambda * n / (alpha (1 - alpha)) * max(0, alpha - c/n)`.
/// An empty covered set contributes a zero captured-width term.
pub fn ir_loss<S: Scalar>(
    raw_a: &[S],
    raw_b: &[S],
    ys: &[S],
    alpha: S,
    lambda: S,
    squared_deficit: bool,
) -> Result<S> {
    if ys.is_empty() {
        return Err(Error::config("ir_loss needs a non-empty batch".to_string()));
    }
    if raw_a.len() != raw_b.len() || raw_a.len() != ys.len() {
        return Err(Error::shape("ir_loss: mismatched batch lengths".to_string()));
    }
    let stats = BatchCoverageStats::from_raw(raw_a, raw_b, ys);
    let n = lit::<S>(stats.n as f64);
    let captured = if stats.c == 0 {
        S::zero()
    } else {
        let c = lit::<S>(stats.c as f64);
        let sum = raw_a
            .iter()
            .zip(raw_b)
            .zip(ys)
            .fold(S::zero(), |acc, ((&a, &b), &y)| {
                let (lo, hi) = (a.min(b), a.max(b));
                if lo <= y && y <= hi {
                    acc + (hi - lo)
                } else {
                    acc
                }
            });
        (n / c) * sum / n
    };
    let coverage = lit::<S>(stats.c as f64) / n;
    let deficit = (alpha - coverage).max(S::zero());
    let deficit = if squared_deficit {
        deficit * deficit
    } else {
        deficit
    };
    let penalty = lambda * n / (alpha * (S::one() - alpha)) * deficit;
    Ok(captured + penalty)
}

/// Ir loss with a sigmoid-relaxed coverage count in the deficit term, so the
/// penalty has usable gradients during training. The captured-width term and
/// the reported value keep the hard count.
pub fn ir_loss_soft<S: Scalar>(
    raw_a: &[S],
    raw_b: &[S],
    ys: &[S],
    alpha: S,
    lambda: S,
    squared_deficit: bool,
    sharpness: S,
) -> Result<S> {
    if ys.is_empty() {
        return Err(Error::config("ir_loss needs a non-empty batch".to_string()));
    }
    let stats = BatchCoverageStats::from_raw(raw_a, raw_b, ys);
    let n = lit::<S>(stats.n as f64);
    let captured = if stats.c == 0 {
        S::zero()
    } else {
        let c = lit::<S>(stats.c as f64);
        let sum = raw_a
            .iter()
            .zip(raw_b)
            .zip(ys)
            .fold(S::zero(), |acc, ((&a, &b), &y)| {
                let (lo, hi) = (a.min(b), a.max(b));
                if lo <= y && y <= hi {
                    acc + (hi - lo)
                } else {
                    acc
                }
            });
        (n / c) * sum / n
    };
    let c_soft = soft_coverage_count(raw_a, raw_b, ys, sharpness);
    let deficit = (alpha - c_soft / n).max(S::zero());
    let deficit = if squared_deficit {
        deficit * deficit
    } else {
        deficit
    };
    Ok(captured + lambda * n / (alpha * (S::one() - alpha)) * deficit)
}

fn sigmoid<S: Scalar>(x: S) -> S {
    S::one() / (S::one() + (-x).exp())
}

fn soft_coverage_count<S: Scalar>(raw_a: &[S], raw_b: &[S], ys: &[S], sharpness: S) -> S {
    raw_a
        .iter()
        .zip(raw_b)
        .zip(ys)
        .fold(S::zero(), |acc, ((&a, &b), &y)| {
            let (lo, hi) = (a.min(b), a.max(b));
            acc + sigmoid(sharpness * (y - lo)) * sigmoid(sharpness * (hi - y))
        })
}

// ---------------------------------------------------------------------------
// batch objective dispatch (what the training loop differentiates)
// ---------------------------------------------------------------------------

/// Batch objective value for a two-output model. Pointwise families are
/// averaged over the batch; Ir and RqrO evaluate their batch formulas.
pub fn batch_loss<S: Scalar>(
    config: &LossConfig,
    raw_a: &[S],
    raw_b: &[S],
    ys: &[S],
) -> Result<S> {
    config.validate()?;
    if raw_a.len() != raw_b.len() || raw_a.len() != ys.len() {
        return Err(Error::shape("batch_loss: mismatched batch lengths".to_string()));
    }
    let alpha = lit::<S>(config.alpha);
    let lambda = lit::<S>(config.lambda);
    let n = lit::<S>(ys.len() as f64);
    match config.family {
        LossFamily::Rqr => Ok(fold3(raw_a, raw_b, ys, |a, b, y| rqr_loss(a, b, y, alpha)) / n),
        LossFamily::RqrW => {
            let alpha_hat: S = config.coverage_target()?.alpha_hat_as();
            Ok(fold3(raw_a, raw_b, ys, |a, b, y| {
                rqr_w_loss(a, b, y, alpha_hat, lambda)
            }) / n)
        }
        LossFamily::QrPinball => Ok(fold3(raw_a, raw_b, ys, |a, b, y| qr_loss(a, b, y, alpha)) / n),
        LossFamily::Winkler => {
            let a_level = S::one() - alpha;
            Ok(fold3(raw_a, raw_b, ys, |lo, hi, y| {
                winkler_score(lo.min(hi), lo.max(hi), y, a_level)
            }) / n)
        }
        LossFamily::SqrPinball => {
            let q = lit::<S>(config.quantile);
            Ok(raw_a
                .iter()
                .zip(ys)
                .fold(S::zero(), |acc, (&mu, &y)| acc + pinball(mu, y, q))
                / n)
        }
        LossFamily::RqrO => Ok(rqr_o_loss(raw_a, raw_b, ys, alpha, lambda)?.value),
        LossFamily::Ir => match config.ir_softness {
            Some(s) => ir_loss_soft(
                raw_a,
                raw_b,
                ys,
                alpha,
                lambda,
                config.ir_squared_deficit,
                lit(s),
            ),
            None => ir_loss(raw_a, raw_b, ys, alpha, lambda, config.ir_squared_deficit),
        },
    }
}

/// Gradients of [`batch_loss`] with respect to every raw output, in the same
/// layout as the inputs. This is what backpropagation consumes.
pub fn batch_output_gradients<S: Scalar>(
    config: &LossConfig,
    raw_a: &[S],
    raw_b: &[S],
    ys: &[S],
) -> Result<(Vec<S>, Vec<S>)> {
    config.validate()?;
    if raw_a.len() != raw_b.len() || raw_a.len() != ys.len() {
        return Err(Error::shape(
            "batch_output_gradients: mismatched batch lengths".to_string(),
        ));
    }
    let n = ys.len();
    let inv_n = lit::<S>(1.0 / n as f64);
    let alpha = lit::<S>(config.alpha);
    let lambda = lit::<S>(config.lambda);
    let mut da = vec![S::zero(); n];
    let mut db = vec![S::zero(); n];

    let mut per_example = |f: &dyn Fn(S, S, S) -> GradPair<S>| {
        for i in 0..n {
            let g = f(raw_a[i], raw_b[i], ys[i]);
            da[i] = g.d_mu1 * inv_n;
            db[i] = g.d_mu2 * inv_n;
        }
    };

    match config.family {
        LossFamily::Rqr => per_example(&|a, b, y| rqr_grad(a, b, y, alpha)),
        LossFamily::RqrW => {
            let alpha_hat: S = config.coverage_target()?.alpha_hat_as();
            per_example(&|a, b, y| rqr_w_grad(a, b, y, alpha_hat, lambda));
        }
        LossFamily::QrPinball => per_example(&|a, b, y| qr_grad(a, b, y, alpha)),
        LossFamily::Winkler => {
            let a_level = S::one() - alpha;
            for i in 0..n {
                let (a, b) = (raw_a[i], raw_b[i]);
                let g = winkler_grad(a.min(b), a.max(b), ys[i], a_level);
                let (ga, gb) = route_ordered_grad(a, b, g.d_mu1, g.d_mu2);
                da[i] = ga * inv_n;
                db[i] = gb * inv_n;
            }
        }
        LossFamily::SqrPinball => {
            let q = lit::<S>(config.quantile);
            for i in 0..n {
                da[i] = pinball_grad(raw_a[i], ys[i], q) * inv_n;
                db[i] = S::zero();
            }
        }
        LossFamily::RqrO => {
            rqr_o_gradients(raw_a, raw_b, ys, alpha, lambda, &mut da, &mut db)?;
        }
        LossFamily::Ir => {
            ir_gradients(config, raw_a, raw_b, ys, &mut da, &mut db)?;
        }
    }
    Ok((da, db))
}

/// Map gradients computed for ordered bounds `(lo, hi)` back onto the raw
/// pair `(a, b)`. Ties route `lo` to `a`.
fn route_ordered_grad<S: Scalar>(a: S, b: S, d_lo: S, d_hi: S) -> (S, S) {
    if a <= b {
        (d_lo, d_hi)
    } else {
        (d_hi, d_lo)
    }
}

fn rqr_o_gradients<S: Scalar>(
    raw_a: &[S],
    raw_b: &[S],
    ys: &[S],
    alpha: S,
    gamma: S,
    da: &mut [S],
    db: &mut [S],
) -> Result<()> {
    let n = ys.len();
    if n < 2 {
        return Err(Error::config(format!(
            "rqr_o gradients need a batch of at least 2, got {n}"
        )));
    }
    let inv_n = lit::<S>(1.0 / n as f64);
    for i in 0..n {
        let g = rqr_grad(raw_a[i], raw_b[i], ys[i], alpha);
        da[i] = g.d_mu1 * inv_n;
        db[i] = g.d_mu2 * inv_n;
    }
    let vectors = WidthCoverageVectors::from_raw(raw_a, raw_b, ys)?;
    let var_w = stats::variance(&vectors.w);
    let var_m = stats::variance(&vectors.m);
    if var_w <= S::zero() || var_m <= S::zero() {
        return Ok(()); // degenerate batch: penalty is 0 with zero gradient
    }
    let cov = stats::covariance(&vectors.w, &vectors.m);
    let sd_w = var_w.sqrt();
    let sd_m = var_m.sqrt();
    let r = cov / (sd_w * sd_m);
    let sign = if r >= S::zero() { S::one() } else { -S::one() };
    let mean_w = stats::mean(&vectors.w);
    let mean_m = stats::mean(&vectors.m);
    // d|r|/dw_i = sign(r)/(n sd_w sd_m) * [(m_i - mean_m) - (cov/var_w)(w_i - mean_w)]
    let scale = sign * gamma / (lit::<S>(n as f64) * sd_w * sd_m);
    for i in 0..n {
        let d_w = scale * ((vectors.m[i] - mean_m) - (cov / var_w) * (vectors.w[i] - mean_w));
        // w_i = hi - lo: route d/d_hi = +d_w, d/d_lo = -d_w
        let (ga, gb) = route_ordered_grad(raw_a[i], raw_b[i], -d_w, d_w);
        da[i] = da[i] + ga;
        db[i] = db[i] + gb;
    }
    Ok(())
}

fn ir_gradients<S: Scalar>(
    config: &LossConfig,
    raw_a: &[S],
    raw_b: &[S],
    ys: &[S],
    da: &mut [S],
    db: &mut [S],
) -> Result<()> {
    let n = ys.len();
    if n == 0 {
        return Err(Error::config("ir gradients need a non-empty batch".to_string()));
    }
    let alpha = lit::<S>(config.alpha);
    let lambda = lit::<S>(config.lambda);
    let n_s = lit::<S>(n as f64);
    let stats = BatchCoverageStats::from_raw(raw_a, raw_b, ys);
    // captured-width term: d/d_hi_i = I_i / c, d/d_lo_i = -I_i / c
    // (the counts are locally constant away from kinks)
    if stats.c > 0 {
        let c = lit::<S>(stats.c as f64);
        for i in 0..n {
            let (a, b) = (raw_a[i], raw_b[i]);
            let (lo, hi) = (a.min(b), a.max(b));
            if lo <= ys[i] && ys[i] <= hi {
                let (ga, gb) = route_ordered_grad(a, b, -S::one() / c, S::one() / c);
                da[i] = ga;
                db[i] = gb;
            }
        }
    }
    // deficit term: zero gradient a.e. for the exact indicator; sigmoid
    // relaxation supplies the widening force when configured
    if let Some(s) = config.ir_softness {
        let s = lit::<S>(s);
        let c_soft = soft_coverage_count(raw_a, raw_b, ys, s);
        let deficit = alpha - c_soft / n_s;
        if deficit > S::zero() {
            let outer = if config.ir_squared_deficit {
                lit::<S>(2.0) * deficit
            } else {
                S::one()
            };
            let coeff = lambda * n_s / (alpha * (S::one() - alpha)) * outer / n_s;
            for i in 0..n {
                let (a, b) = (raw_a[i], raw_b[i]);
                let (lo, hi) = (a.min(b), a.max(b));
                let s_lo = sigmoid(s * (ys[i] - lo));
                let s_hi = sigmoid(s * (hi - ys[i]));
                // dk/d_lo = -s sig'(s(y-lo)) s_hi ; dk/d_hi = s s_lo sig'(s(hi-y))
                let dk_dlo = -s * s_lo * (S::one() - s_lo) * s_hi;
                let dk_dhi = s * s_lo * s_hi * (S::one() - s_hi);
                let (ga, gb) = route_ordered_grad(a, b, -coeff * dk_dlo, -coeff * dk_dhi);
                da[i] = da[i] + ga;
                db[i] = db[i] + gb;
            }
        }
    }
    Ok(())
}

fn fold3<S: Scalar>(xs: &[S], ys: &[S], zs: &[S], f: impl Fn(S, S, S) -> S) -> S {
    xs.iter()
        .zip(ys)
        .zip(zs)
        .fold(S::zero(), |acc, ((&x, &y), &z)| acc + f(x, y, z))
}
