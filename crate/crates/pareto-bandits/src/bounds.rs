//! Asymptotic regret analysis for Pareto bandit models: the minimum KL
//! divergence from an arm to the set of models that would make it optimal,
//! the induced logarithmic regret lower bound, and the constants of the
//! finite-time upper bound.
//!
//! For a suboptimal arm with parameters (kappa, alpha) and best mean mu_star,
//! the divergence infimum over confusing parameter pairs (scale at most
//! kappa, mean above mu_star) has the closed form
//!
//! ```text
//! kl_inf = log(alpha (mu_star - kappa) / mu_star) + mu_star / (alpha (mu_star - kappa)) - 1
//! ```
//!
//! attained on the boundary where the scale is kept at kappa and the shape is
//! pushed to the largest value whose mean still reaches mu_star. A grid
//! oracle that searches the two-dimensional constraint set numerically is
//! provided as an independent check; it converges to the closed form from
//! above.

use thiserror::Error;

use crate::distributions::{DistributionError, ParetoParams};
use crate::special::{self, SpecialError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("arm {arm}: shape must exceed 1 for a finite mean, got {alpha}")]
    InfiniteMeanArm { arm: usize, alpha: f64 },
    #[error("model needs at least one arm")]
    EmptyModel,
    #[error("arm index {arm} out of range for {num_arms} arms")]
    ArmOutOfRange { arm: usize, num_arms: usize },
    #[error("analysis requires a unique optimal arm; arms {first} and {second} tie at mean {mean}")]
    TiedOptimum { first: usize, second: usize, mean: f64 },
    #[error("mu_star = {mu_star} is below the arm mean {mean}")]
    MuStarBelowMean { mu_star: f64, mean: f64 },
    #[error("mu_star = {mu_star} must exceed the arm scale {kappa}")]
    MuStarNotAboveScale { mu_star: f64, kappa: f64 },
    #[error("grid resolution must be at least 16, got {0}")]
    GridTooCoarse(usize),
    #[error("horizon must be at least 1")]
    EmptyHorizon,
    #[error("arm {arm} is the optimal arm; analysis constants exist only for suboptimal arms")]
    ArmNotSuboptimal { arm: usize },
    #[error("eps = {eps} is not in the admissible range (0, {limit}) for arm {arm}")]
    EpsOutOfRange { arm: usize, eps: f64, limit: f64 },
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// A bandit model: one Pareto reward distribution per arm, all with finite
/// means. Construction tolerates tied optimal means (simulation does not
/// care); the analysis operations reject ties explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditModel {
    arms: Vec<ParetoParams>,
    means: Vec<f64>,
    optimal: usize,
}

impl BanditModel {
    pub fn new(arms: Vec<ParetoParams>) -> Result<Self, BoundsError> {
        if arms.is_empty() {
            return Err(BoundsError::EmptyModel);
        }
        for (i, p) in arms.iter().enumerate() {
            if p.alpha() <= 1.0 {
                return Err(BoundsError::InfiniteMeanArm { arm: i, alpha: p.alpha() });
            }
        }
        let means: Vec<f64> = arms.iter().map(|p| p.mean()).collect();
        let optimal = means
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.partial_cmp(b).unwrap().then(j.cmp(i)))
            .map(|(i, _)| i)
            .unwrap();
        Ok(BanditModel { arms, means, optimal })
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn arms(&self) -> &[ParetoParams] {
        &self.arms
    }

    pub fn arm(&self, arm: usize) -> Result<&ParetoParams, BoundsError> {
        self.arms.get(arm).ok_or(BoundsError::ArmOutOfRange {
            arm,
            num_arms: self.arms.len(),
        })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn mean(&self, arm: usize) -> Result<f64, BoundsError> {
        self.arm(arm).map(|_| self.means[arm])
    }

    /// Lowest index attaining the maximal mean.
    pub fn optimal_arm(&self) -> usize {
        self.optimal
    }

    pub fn optimal_mean(&self) -> f64 {
        self.means[self.optimal]
    }

    /// Suboptimality gap of an arm, `Delta_a = mu_star - mu_a`.
    pub fn gap(&self, arm: usize) -> Result<f64, BoundsError> {
        self.mean(arm).map(|m| self.optimal_mean() - m)
    }

    /// Half-gap `delta_a = Delta_a / 2`; for the optimal arm this is the
    /// smallest half-gap among the others.
    pub fn half_gap(&self, arm: usize) -> Result<f64, BoundsError> {
        if arm == self.optimal {
            self.require_unique_optimum()?;
            let min_gap = (0..self.num_arms())
                .filter(|&a| a != self.optimal)
                .map(|a| self.means[self.optimal] - self.means[a])
                .fold(f64::INFINITY, f64::min);
            Ok(min_gap / 2.0)
        } else {
            self.gap(arm).map(|g| g / 2.0)
        }
    }

    pub fn has_unique_optimum(&self) -> bool {
        self.means
            .iter()
            .enumerate()
            .all(|(i, &m)| i == self.optimal || m < self.means[self.optimal])
    }

    pub fn require_unique_optimum(&self) -> Result<(), BoundsError> {
        for (i, &m) in self.means.iter().enumerate() {
            if i != self.optimal && m == self.means[self.optimal] {
                return Err(BoundsError::TiedOptimum {
                    first: self.optimal.min(i),
                    second: self.optimal.max(i),
                    mean: m,
                });
            }
        }
        Ok(())
    }
}

// The negated comparisons are deliberate: they send NaN down the error path,
// which a flipped `<=` / `<` would silently accept.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn validate_target(arm: &ParetoParams, mu_star: f64) -> Result<(), BoundsError> {
    if !(mu_star > arm.kappa()) {
        return Err(BoundsError::MuStarNotAboveScale { mu_star, kappa: arm.kappa() });
    }
    if !(mu_star >= arm.mean()) {
        return Err(BoundsError::MuStarBelowMean { mu_star, mean: arm.mean() });
    }
    Ok(())
}

/// Closed-form divergence infimum to the confusing set for an arm with
/// parameters `arm` against a best mean `mu_star`:
/// `log(alpha (mu_star - kappa) / mu_star) + mu_star / (alpha (mu_star - kappa)) - 1`.
///
/// Zero exactly when `mu_star` equals the arm's own mean.
pub fn kl_inf(arm: &ParetoParams, mu_star: f64) -> Result<f64, BoundsError> {
    validate_target(arm, mu_star)?;
    let x = arm.alpha() * (mu_star - arm.kappa()) / mu_star;
    Ok(x.ln() + 1.0 / x - 1.0)
}

/// Largest shape whose mean at scale `kappa / c` still reaches `mu`:
/// `h(c) = c mu / (c mu - kappa)`.
pub fn shape_ceiling(arm: &ParetoParams, mu: f64, c: f64) -> f64 {
    let cm = c * mu;
    cm / (cm - arm.kappa())
}

/// Divergence from the arm to the model with scale `kappa / c` and shape
/// `alpha_c`, in the (shape, scale-ratio) parameterization:
/// `g(alpha_c, c) = log(alpha / alpha_c) + alpha_c log c + alpha_c / alpha - 1`.
pub fn kl_at_scale(arm: &ParetoParams, alpha_c: f64, c: f64) -> f64 {
    (arm.alpha() / alpha_c).ln() + alpha_c * c.ln() + alpha_c / arm.alpha() - 1.0
}

/// Numerical infimum of the divergence over the confusing set, by log-spaced
/// grid search over (scale ratio, shape) with local refinement. Every
/// evaluated point is feasible, so the result converges to [`kl_inf`] from
/// above as the resolution grows.
pub fn kl_inf_oracle(
    arm: &ParetoParams,
    mu_star: f64,
    grid_resolution: usize,
) -> Result<f64, BoundsError> {
    validate_target(arm, mu_star)?;
    if grid_resolution < 16 {
        return Err(BoundsError::GridTooCoarse(grid_resolution));
    }
    // The open mean constraint is closed off at mu_star + 1e-9; the shape
    // range at scale ratio c is then (0, shape_ceiling(arm, mu_eff, c)].
    let mu_eff = mu_star + 1e-9;
    // Scale ratios beyond C_MAX cannot host the infimum: minimizing the
    // shape-dependent terms alone gives a divergence of at least
    // log(alpha) + log(log(c)), already above the feasible candidate
    // (shape 1, scale kappa) worth log(alpha) + 1/alpha - 1.
    const C_MAX: f64 = 4.0;
    const ALPHA_FLOOR: f64 = 1e-3;
    let per_axis = (grid_resolution as f64).sqrt().ceil() as usize;

    let eval = |c: f64, alpha_c: f64| kl_at_scale(arm, alpha_c, c);

    let mut best = (1.0, shape_ceiling(arm, mu_eff, 1.0), f64::INFINITY);
    let consider = |c: f64, a: f64, v: f64, best: &mut (f64, f64, f64)| {
        if v < best.2 {
            *best = (c, a, v);
        }
    };
    // Base pass over the full box.
    for i in 0..per_axis {
        let fc = i as f64 / (per_axis - 1) as f64;
        let c = (fc * C_MAX.ln()).exp();
        let a_hi = shape_ceiling(arm, mu_eff, c);
        for j in 0..per_axis {
            let fa = j as f64 / (per_axis - 1) as f64;
            let a = a_hi * (ALPHA_FLOOR.ln() * (1.0 - fa)).exp();
            consider(c, a, eval(c, a), &mut best);
        }
    }
    // Refinement: shrink a log-space window around the incumbent, clamping
    // to the feasible box so the boundary optimum stays reachable.
    let mut half_width = C_MAX.ln() / (per_axis - 1) as f64 * 2.0;
    const REFINE_POINTS: usize = 9;
    while half_width > 1e-14 {
        let (c0, a0, _) = best;
        for i in 0..REFINE_POINTS {
            let fc = i as f64 / (REFINE_POINTS - 1) as f64;
            let c = (c0.ln() + half_width * (2.0 * fc - 1.0)).exp().clamp(1.0, C_MAX);
            let a_hi = shape_ceiling(arm, mu_eff, c);
            for j in 0..REFINE_POINTS {
                let fa = j as f64 / (REFINE_POINTS - 1) as f64;
                let a = (a0.ln() + half_width * (2.0 * fa - 1.0))
                    .exp()
                    .clamp(ALPHA_FLOOR * a_hi, a_hi);
                consider(c, a, eval(c, a), &mut best);
            }
        }
        half_width *= 0.5;
    }
    Ok(best.2)
}

/// The scale ratio at which the boundary divergence curve levels off,
/// `c* = exp(W(-(kappa / mu_star) e^(1/alpha - 1)) + 1 - 1/alpha)`, always
/// at least 1. It satisfies the stationarity identity
/// `shape_ceiling(c*) = alpha / (1 + alpha log c*)`.
pub fn c_star(arm: &ParetoParams, mu_star: f64) -> Result<f64, BoundsError> {
    validate_target(arm, mu_star)?;
    let alpha = arm.alpha();
    let w_arg = -(arm.kappa() / mu_star) * (1.0 / alpha - 1.0).exp();
    let w = special::lambert_w0(w_arg)?;
    Ok((w + 1.0 - 1.0 / alpha).exp())
}

/// Coefficient of `log t` in the asymptotic regret lower bound:
/// the sum over suboptimal arms of `gap / kl_inf`.
pub fn lower_bound_slope(model: &BanditModel) -> Result<f64, BoundsError> {
    model.require_unique_optimum()?;
    let mu_star = model.optimal_mean();
    let mut slope = 0.0;
    for a in 0..model.num_arms() {
        if a == model.optimal_arm() {
            continue;
        }
        slope += model.gap(a)? / kl_inf(model.arm(a)?, mu_star)?;
    }
    Ok(slope)
}

/// The asymptotic lower bound curve `t -> slope * log t` evaluated at every
/// round 1..=horizon. Starts at zero; identically zero for a single arm.
pub fn lower_bound_curve(model: &BanditModel, horizon: u64) -> Result<Vec<(u64, f64)>, BoundsError> {
    if horizon < 1 {
        return Err(BoundsError::EmptyHorizon);
    }
    let slope = lower_bound_slope(model)?;
    Ok((1..=horizon).map(|t| (t, slope * (t as f64).ln())).collect())
}

/// Constants of the finite-time analysis for one suboptimal arm at
/// perturbation size `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConstants {
    /// Largest admissible perturbation for this arm.
    pub eps_max: f64,
    /// Lower deviation bound for the shape estimate, `eps alpha^2 / (1 + eps alpha)`.
    pub eps_lower: f64,
    /// Upper deviation bound, `eps alpha^2 (kappa + 1) / (kappa - eps alpha (kappa + 1))`.
    pub eps_upper: f64,
    /// Shape tilt `eta` toward the confusing boundary.
    pub eta: f64,
    /// Elimination exponent `D_k(eps)`; converges to the arm's [`kl_inf`]
    /// as eps tends to zero.
    pub d_k: f64,
}

/// Computes the analysis constants for `arm` under prior exponent `k`.
/// Rejects `eps` outside `(0, eps_max)`.
pub fn analysis_constants(
    model: &BanditModel,
    arm: usize,
    k: i32,
    eps: f64,
) -> Result<AnalysisConstants, BoundsError> {
    model.require_unique_optimum()?;
    if arm == model.optimal_arm() {
        return Err(BoundsError::ArmNotSuboptimal { arm });
    }
    let p = *model.arm(arm)?;
    let (kappa, alpha, mu) = (p.kappa(), p.alpha(), model.mean(arm)?);
    let mu_star = model.optimal_mean();
    let delta = model.gap(arm)?;
    let half = model.half_gap(arm)?;

    let eps_max = {
        let first = kappa / (alpha * (kappa + 1.0))
            * (kappa * half / (mu * (mu + half - kappa) + kappa * half));
        let second = kappa * half / (mu * (1.0 + mu + half));
        first.min(second)
    };
    if !(eps > 0.0 && eps < eps_max) {
        return Err(BoundsError::EpsOutOfRange { arm, eps, limit: eps_max });
    }

    let eps_lower = eps * alpha * alpha / (1.0 + eps * alpha);
    let eps_upper = eps * alpha * alpha * (kappa + 1.0) / (kappa - eps * alpha * (kappa + 1.0));
    let eta = (kappa * (delta - eps) - eps * mu) / ((mu - kappa) * (mu_star - kappa - 2.0 * eps));
    let stages = (k.max(0) as f64) + 1.0;
    let drift = stages * eps * (alpha - eta);
    let z = 1.0 - eta / alpha + drift;
    let d_k = -z.ln() - eta / alpha + drift;

    Ok(AnalysisConstants { eps_max, eps_lower, eps_upper, eta, d_k })
}
