//! Posterior sampling for the Pareto parameter pair under the prior family
//! pi(kappa, alpha) proportional to alpha^(-k) / kappa.
//!
//! With n observations summarized by the MLE pair, the shape posterior is
//! Erlang with integer shape n - k and rate n / alpha_ref, where alpha_ref is
//! the plain shape MLE or its truncated variant. Conditional on a shape draw
//! alpha_t, the scale posterior has CDF (x / kappa_hat)^(n alpha_t) on
//! (0, kappa_hat], so a uniform u on (0, 1] maps to
//! kappa_hat * u^(1 / (n alpha_t)).
//!
//! A sampled mean is infinite exactly when alpha_t <= 1; in that case no
//! scale draw is consumed. All operations accept injected draws alongside
//! the stream-based entry points so decision logic can be tested
//! deterministically.

use thiserror::Error;

use crate::distributions::{ErlangParams, RngStream};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PosteriorError {
    #[error("posterior needs at least one observation, got n = 0")]
    NoObservations,
    #[error("kappa_hat must be finite and positive, got {0}")]
    InvalidKappaHat(f64),
    #[error("alpha_ref must be finite and positive, got {0} (degenerate shape estimate)")]
    DegenerateAlphaRef(f64),
    #[error("prior exponent k = {k} leaves no posterior mass at n = {n} (need n - k >= 1)")]
    ShapeUnderflow { n: u64, k: i64 },
}

/// Everything the posterior of one arm depends on: observation count,
/// the scale MLE, the reference shape, and the prior exponent k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorInputs {
    n: u64,
    kappa_hat: f64,
    alpha_ref: f64,
    k: i64,
}

impl PosteriorInputs {
    pub fn new(n: u64, kappa_hat: f64, alpha_ref: f64, k: i64) -> Result<Self, PosteriorError> {
        if n == 0 {
            return Err(PosteriorError::NoObservations);
        }
        if !kappa_hat.is_finite() || kappa_hat <= 0.0 {
            return Err(PosteriorError::InvalidKappaHat(kappa_hat));
        }
        if !alpha_ref.is_finite() || alpha_ref <= 0.0 {
            return Err(PosteriorError::DegenerateAlphaRef(alpha_ref));
        }
        if (n as i64) - k < 1 {
            return Err(PosteriorError::ShapeUnderflow { n, k });
        }
        Ok(PosteriorInputs { n, kappa_hat, alpha_ref, k })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn kappa_hat(&self) -> f64 {
        self.kappa_hat
    }

    pub fn alpha_ref(&self) -> f64 {
        self.alpha_ref
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// Marginal posterior of the shape: Erlang(n - k, n / alpha_ref).
    pub fn shape_posterior(&self) -> ErlangParams {
        ErlangParams::new((self.n as i64 - self.k) as u64, self.n as f64 / self.alpha_ref)
            .expect("validated by constructor")
    }
}

/// Draws a posterior shape sample alpha_t.
pub fn sample_alpha(inputs: &PosteriorInputs, rng: &mut RngStream) -> f64 {
    inputs.shape_posterior().sample(rng)
}

/// Maps a uniform draw u in (0, 1] to a scale sample conditional on alpha_t:
/// `kappa_hat * u^(1 / (n alpha_t))`. The output lies in (0, kappa_hat],
/// with kappa_hat attained at u = 1.
pub fn kappa_from_uniform(inputs: &PosteriorInputs, alpha_t: f64, u: f64) -> f64 {
    debug_assert!(alpha_t > 0.0);
    debug_assert!(u > 0.0 && u <= 1.0);
    inputs.kappa_hat * u.powf(1.0 / (inputs.n as f64 * alpha_t))
}

/// Draws a posterior scale sample conditional on an already drawn alpha_t.
pub fn sample_kappa(inputs: &PosteriorInputs, alpha_t: f64, rng: &mut RngStream) -> f64 {
    kappa_from_uniform(inputs, alpha_t, rng.uniform_open_closed())
}

/// One joint posterior draw of (shape, scale, mean).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSample {
    /// The shape draw alpha_t.
    pub alpha: f64,
    /// The scale draw; `None` when the mean is infinite and no scale draw
    /// was consumed.
    pub kappa: Option<f64>,
    /// Sampled mean, `+inf` exactly when alpha_t <= 1.
    pub mean: f64,
}

/// Draws a posterior mean sample: shape first, then, only if the shape
/// exceeds 1, a scale draw; the mean is `kappa_t alpha_t / (alpha_t - 1)`.
pub fn sample_mean(inputs: &PosteriorInputs, rng: &mut RngStream) -> MeanSample {
    let alpha = sample_alpha(inputs, rng);
    if alpha <= 1.0 {
        MeanSample { alpha, kappa: None, mean: f64::INFINITY }
    } else {
        let kappa = sample_kappa(inputs, alpha, rng);
        MeanSample { alpha, kappa: Some(kappa), mean: kappa * alpha / (alpha - 1.0) }
    }
}

/// Deterministic variant of [`sample_mean`] with both draws injected. The
/// uniform is only consumed (and only meaningful) when alpha_t > 1.
pub fn mean_from_draws(inputs: &PosteriorInputs, alpha_t: f64, u: f64) -> MeanSample {
    if alpha_t <= 1.0 {
        MeanSample { alpha: alpha_t, kappa: None, mean: f64::INFINITY }
    } else {
        let kappa = kappa_from_uniform(inputs, alpha_t, u);
        MeanSample { alpha: alpha_t, kappa: Some(kappa), mean: kappa * alpha_t / (alpha_t - 1.0) }
    }
}
