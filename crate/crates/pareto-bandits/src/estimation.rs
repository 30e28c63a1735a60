//! Streaming sufficient statistics and maximum likelihood estimation for
//! Pareto rewards.
//!
//! The pair (min of the rewards, sum of their logs) is sufficient: the scale
//! MLE is the sample minimum and the shape MLE is
//! `n / (sum_log - n log min)`. Both updates are O(1) per observation.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimationError {
    #[error("rewards must be finite and positive, got {0}")]
    InvalidReward(f64),
    #[error("mle requires at least 2 observations, have {0}")]
    InsufficientSamples(u64),
}

/// Per-arm observation statistics, updated one reward at a time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ArmState {
    count: u64,
    min_reward: f64,
    sum_log: f64,
}

impl ArmState {
    pub fn new() -> Self {
        ArmState {
            count: 0,
            min_reward: f64::INFINITY,
            sum_log: 0.0,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Sample minimum; infinite before the first observation.
    pub fn min_reward(&self) -> f64 {
        self.min_reward
    }

    pub fn sum_log(&self) -> f64 {
        self.sum_log
    }

    pub fn update(&mut self, reward: f64) -> Result<(), EstimationError> {
        if !reward.is_finite() || reward <= 0.0 {
            return Err(EstimationError::InvalidReward(reward));
        }
        self.count += 1;
        self.min_reward = self.min_reward.min(reward);
        self.sum_log += reward.ln();
        Ok(())
    }

    /// Joint MLE of (kappa, alpha) from the current statistics.
    ///
    /// `alpha_hat` is `+inf` when the log-spread denominator is zero, which
    /// happens exactly for an all-equal sample; a caller that cannot digest
    /// an infinite shape must truncate or reject it explicitly.
    pub fn mle(&self) -> Result<MleEstimate, EstimationError> {
        if self.count < 2 {
            return Err(EstimationError::InsufficientSamples(self.count));
        }
        let n = self.count as f64;
        let denom = self.sum_log - n * self.min_reward.ln();
        let alpha_hat = if denom > 0.0 { n / denom } else { f64::INFINITY };
        Ok(MleEstimate {
            kappa_hat: self.min_reward,
            alpha_hat,
        })
    }
}

/// Maximum likelihood estimate of the Pareto parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleEstimate {
    pub kappa_hat: f64,
    pub alpha_hat: f64,
}

impl MleEstimate {
    /// Shape estimate clipped at the observation count, `min(n, alpha_hat)`.
    /// Always finite; this is the reference shape used by the truncated
    /// sampling policy.
    pub fn truncated_alpha(&self, n: u64) -> f64 {
        self.alpha_hat.min(n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{ParetoParams, RngStream};

    #[test]
    fn update_rejects_bad_rewards() {
        let mut st = ArmState::new();
        assert!(st.update(0.0).is_err());
        assert!(st.update(-1.0).is_err());
        assert!(st.update(f64::NAN).is_err());
        assert!(st.update(f64::INFINITY).is_err());
        assert_eq!(st.count(), 0);
        assert!(st.update(2.5).is_ok());
        assert_eq!(st.count(), 1);
    }

    #[test]
    fn mle_requires_two_samples() {
        let mut st = ArmState::new();
        assert_eq!(st.mle(), Err(EstimationError::InsufficientSamples(0)));
        st.update(1.0).unwrap();
        assert_eq!(st.mle(), Err(EstimationError::InsufficientSamples(1)));
        st.update(2.0).unwrap();
        assert!(st.mle().is_ok());
    }

    #[test]
    fn mle_hand_computed_values() {
        // Rewards (1, e): kappa_hat = 1, alpha_hat = 2 / (0 + 1 - 2*0) = 2.
        let mut st = ArmState::new();
        st.update(1.0).unwrap();
        st.update(std::f64::consts::E).unwrap();
        let est = st.mle().unwrap();
        assert_eq!(est.kappa_hat, 1.0);
        assert!((est.alpha_hat - 2.0).abs() < 1e-12);

        // Rewards (2, 2e^2, 2e): log spread is 3, so alpha_hat = 1.
        let mut st = ArmState::new();
        for &r in &[2.0, 2.0 * (2.0f64).exp(), 2.0 * (1.0f64).exp()] {
            st.update(r).unwrap();
        }
        let est = st.mle().unwrap();
        assert_eq!(est.kappa_hat, 2.0);
        assert!((est.alpha_hat - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mle_degenerate_all_equal_sample() {
        // Two equal rewards make the denominator exactly zero.
        let mut st = ArmState::new();
        st.update(2.0).unwrap();
        st.update(2.0).unwrap();
        let est = st.mle().unwrap();
        assert_eq!(est.kappa_hat, 2.0);
        assert_eq!(est.alpha_hat, f64::INFINITY);
        // Truncation recovers a finite reference shape.
        assert_eq!(est.truncated_alpha(st.count()), 2.0);
    }

    #[test]
    fn truncation_only_clips_from_above() {
        let est = MleEstimate { kappa_hat: 1.0, alpha_hat: 2.4 };
        assert_eq!(est.truncated_alpha(4), 2.4);
        assert_eq!(est.truncated_alpha(2), 2.0);
        let inf = MleEstimate { kappa_hat: 1.0, alpha_hat: f64::INFINITY };
        assert_eq!(inf.truncated_alpha(4), 4.0);
    }

    #[test]
    fn streaming_equals_batch_exactly() {
        let p = ParetoParams::new(0.8, 1.7).unwrap();
        let mut rng = RngStream::new(11, 0);
        let rewards: Vec<f64> = (0..100_000).map(|_| p.sample(&mut rng)).collect();

        let mut st = ArmState::new();
        for &r in &rewards {
            st.update(r).unwrap();
        }
        // Batch recomputation in the same left-to-right order.
        let batch_min = rewards.iter().copied().fold(f64::INFINITY, f64::min);
        let batch_sum: f64 = rewards.iter().map(|r| r.ln()).sum();
        assert_eq!(st.min_reward(), batch_min);
        assert_eq!(st.sum_log(), batch_sum);
        assert_eq!(st.count(), rewards.len() as u64);
    }

    #[test]
    fn kappa_hat_bounds_scale_from_above() {
        let p = ParetoParams::new(1.3, 1.4).unwrap();
        let mut rng = RngStream::new(3, 2);
        for n in [10usize, 1000] {
            let mut st = ArmState::new();
            for _ in 0..n {
                st.update(p.sample(&mut rng)).unwrap();
            }
            let est = st.mle().unwrap();
            assert!(est.kappa_hat >= p.kappa());
            // kappa_hat - kappa is Exp(n alpha / kappa)-ish: tiny at n = 1000.
            if n == 1000 {
                assert!(est.kappa_hat - p.kappa() < 0.02);
            }
        }
    }

    #[test]
    fn scale_invariance_of_alpha_hat() {
        // Scaling rewards by c > 0 shifts every log by log c and the minimum
        // by the same factor, leaving alpha_hat unchanged up to rounding.
        let p = ParetoParams::new(2.0, 2.5).unwrap();
        let mut rng = RngStream::new(17, 4);
        let rewards: Vec<f64> = (0..500).map(|_| p.sample(&mut rng)).collect();
        let mut plain = ArmState::new();
        let mut scaled = ArmState::new();
        for &r in &rewards {
            plain.update(r).unwrap();
            scaled.update(64.0 * r).unwrap();
        }
        let a = plain.mle().unwrap().alpha_hat;
        let b = scaled.mle().unwrap().alpha_hat;
        assert!((a - b).abs() < 1e-9 * a.abs());
        assert!((scaled.mle().unwrap().kappa_hat - 64.0 * plain.mle().unwrap().kappa_hat).abs() < 1e-12);
    }
}
