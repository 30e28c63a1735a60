//! Monte-Carlo harness: runs policy episodes against a Pareto bandit model
//! and aggregates cumulative pseudo-regret across replications.
//!
//! Seeding scheme: replication `i` of an experiment with base seed `s` draws
//! every random number from `RngStream::new(s, i)` — policy draws first, then
//! the reward draw, within each round. Replications therefore never share
//! state, and [`run_experiment`] produces bitwise-identical aggregates for
//! any worker count: episodes are collected in replication order and reduced
//! sequentially.
//!
//! Checkpoint statistics are the per-round cross-replication mean, sample
//! standard deviation (ddof = 1), and the 0.5%, 99.5%, and 99.95% quantiles
//! with linear interpolation between order statistics.

use std::fmt::Write as _;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bounds::{BanditModel, BoundsError};
use crate::distributions::{RngStream, RNG_IDENTITY};
use crate::policy::{AgentState, PolicyConfig, PolicyError};

/// Quantile levels reported at every checkpoint.
pub const Q_LOW: f64 = 0.005;
pub const Q_HIGH: f64 = 0.995;
pub const Q_TAIL: f64 = 0.9995;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error("fixed-information mode needs exactly 2 arms, model has {num_arms}")]
    FixedInfoArity { num_arms: usize },
    #[error("pinned arm {arm} out of range for {num_arms} arms")]
    PinnedArmOutOfRange { arm: usize, num_arms: usize },
    #[error("horizon {horizon} shorter than the {minimum} initialization rounds")]
    HorizonTooShort { horizon: u64, minimum: u64 },
    #[error("at least one replication required")]
    NoReplications,
    #[error("at least one checkpoint required")]
    NoCheckpoints,
    #[error("checkpoint {checkpoint} outside 1..={horizon}")]
    CheckpointOutOfRange { checkpoint: u64, horizon: u64 },
    #[error("checkpoints must be strictly increasing (violated at position {at})")]
    CheckpointsNotIncreasing { at: usize },
    #[error("parallelism must be at least 1")]
    ZeroParallelism,
    #[error("cannot build worker pool: {0}")]
    ThreadPool(String),
    #[error("quantiles of an empty sample are undefined")]
    EmptyData,
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// How the learner interacts with the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvMode {
    /// All arms unknown; the policy samples every posterior.
    Standard,
    /// Two arms, one of them fully known: the pinned arm contributes its
    /// exact mean to every comparison and needs no posterior.
    FixedInfo { pinned_arm: usize },
}

/// A bandit model together with an interaction mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    model: BanditModel,
    mode: EnvMode,
}

impl Environment {
    pub fn new(model: BanditModel, mode: EnvMode) -> Result<Self, SimulationError> {
        if let EnvMode::FixedInfo { pinned_arm } = mode {
            if model.num_arms() != 2 {
                return Err(SimulationError::FixedInfoArity { num_arms: model.num_arms() });
            }
            if pinned_arm >= 2 {
                return Err(SimulationError::PinnedArmOutOfRange {
                    arm: pinned_arm,
                    num_arms: 2,
                });
            }
        }
        Ok(Environment { model, mode })
    }

    pub fn standard(model: BanditModel) -> Self {
        // Standard mode has no extra constraints.
        Environment { model, mode: EnvMode::Standard }
    }

    pub fn model(&self) -> &BanditModel {
        &self.model
    }

    pub fn mode(&self) -> EnvMode {
        self.mode
    }

    /// Draws one reward from the arm's true distribution (one uniform).
    pub fn draw_reward(&self, arm: usize, rng: &mut RngStream) -> Result<f64, SimulationError> {
        Ok(self.model.arm(arm)?.sample(rng))
    }
}

/// Cumulative pseudo-regret after each round, rounds counted from 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrajectory(Vec<f64>);

impl RegretTrajectory {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn horizon(&self) -> u64 {
        self.0.len() as u64
    }

    /// Regret after round `t` (1-based); `None` outside `1..=horizon`.
    pub fn at_round(&self, t: u64) -> Option<f64> {
        if t == 0 {
            return None;
        }
        self.0.get(t as usize - 1).copied()
    }

    pub fn final_regret(&self) -> f64 {
        *self.0.last().expect("trajectories are never empty")
    }
}

/// One finished episode: the regret path and the pull count per arm.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOutcome {
    pub regret: RegretTrajectory,
    pub pulls: Vec<u64>,
}

fn check_horizon(
    model: &BanditModel,
    policy: &PolicyConfig,
    horizon: u64,
) -> Result<(), SimulationError> {
    let minimum = model.num_arms() as u64 * policy.initial_plays();
    if horizon < minimum {
        return Err(SimulationError::HorizonTooShort { horizon, minimum });
    }
    Ok(())
}

/// Runs one policy episode. The horizon must cover the initialization
/// rounds. Pseudo-regret accrues the mean gap of the chosen arm each round
/// regardless of the realized reward.
pub fn run_episode(
    env: &Environment,
    policy: &PolicyConfig,
    horizon: u64,
    rng: &mut RngStream,
) -> Result<EpisodeOutcome, SimulationError> {
    let model = env.model();
    check_horizon(model, policy, horizon)?;
    let num_arms = model.num_arms();
    let gaps: Vec<f64> = (0..num_arms)
        .map(|a| model.gap(a))
        .collect::<Result<_, _>>()?;

    let mut agent = AgentState::new(num_arms, *policy)?;
    let mut acc = 0.0;
    let mut values = Vec::with_capacity(horizon as usize);
    let mut pulls = vec![0u64; num_arms];
    for _ in 0..horizon {
        let selection = match env.mode() {
            EnvMode::Standard => agent.select(rng)?,
            EnvMode::FixedInfo { pinned_arm } => {
                agent.select_fixed_info(pinned_arm, model.mean(pinned_arm)?, rng)?
            }
        };
        let arm = selection.arm;
        let reward = env.draw_reward(arm, rng)?;
        agent.observe(arm, reward)?;
        acc += gaps[arm];
        values.push(acc);
        pulls[arm] += 1;
    }
    Ok(EpisodeOutcome { regret: RegretTrajectory(values), pulls })
}

/// Round-robin baseline: plays arm `(t - 1) mod K`, ignoring all rewards.
/// Rewards are still drawn so the stream advances like a policy run.
pub fn run_episode_uniform(
    env: &Environment,
    horizon: u64,
    rng: &mut RngStream,
) -> Result<EpisodeOutcome, SimulationError> {
    let model = env.model();
    let num_arms = model.num_arms();
    let gaps: Vec<f64> = (0..num_arms)
        .map(|a| model.gap(a))
        .collect::<Result<_, _>>()?;
    let mut acc = 0.0;
    let mut values = Vec::with_capacity(horizon as usize);
    let mut pulls = vec![0u64; num_arms];
    for t in 1..=horizon {
        let arm = ((t - 1) % num_arms as u64) as usize;
        let _ = env.draw_reward(arm, rng)?;
        acc += gaps[arm];
        values.push(acc);
        pulls[arm] += 1;
    }
    Ok(EpisodeOutcome { regret: RegretTrajectory(values), pulls })
}

/// Degenerate baseline that plays one arm forever. Pseudo-regret depends
/// only on the selections, so no randomness is involved: the trajectory is
/// exactly `gap * t`.
pub fn run_episode_constant(
    env: &Environment,
    arm: usize,
    horizon: u64,
) -> Result<EpisodeOutcome, SimulationError> {
    let gap = env.model().gap(arm)?;
    let mut acc = 0.0;
    let mut values = Vec::with_capacity(horizon as usize);
    for _ in 0..horizon {
        acc += gap;
        values.push(acc);
    }
    let mut pulls = vec![0u64; env.model().num_arms()];
    pulls[arm] = horizon;
    Ok(EpisodeOutcome { regret: RegretTrajectory(values), pulls })
}

/// Cross-replication summary of cumulative regret at one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckpointStats {
    pub round: u64,
    pub mean: f64,
    pub std_dev: f64,
    pub q_low: f64,
    pub q_high: f64,
    pub q_tail: f64,
}

/// Aggregate of a whole experiment, tagged with its configuration
/// fingerprint.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretAggregate {
    pub checkpoints: Vec<CheckpointStats>,
    pub replications: u64,
    pub fingerprint: String,
}

/// Interpolated quantile of `data` at level `p` (linear between order
/// statistics, `h = (n - 1) p`). Uses partial selection instead of a full
/// sort; `data` is reordered in place.
pub fn quantile_in_place(data: &mut [f64], p: f64) -> Result<f64, SimulationError> {
    if data.is_empty() {
        return Err(SimulationError::EmptyData);
    }
    let n = data.len();
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = (h.floor() as usize).min(n - 1);
    let frac = h - lo as f64;
    let (_, low_value, upper) = data.select_nth_unstable_by(lo, f64::total_cmp);
    let low_value = *low_value;
    if frac == 0.0 || upper.is_empty() {
        return Ok(low_value);
    }
    let next = upper.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(low_value + frac * (next - low_value))
}

/// The three reporting quantiles ([`Q_LOW`], [`Q_HIGH`], [`Q_TAIL`]) of a
/// sample.
pub fn quantiles(data: &[f64]) -> Result<(f64, f64, f64), SimulationError> {
    let mut buf = data.to_vec();
    Ok((
        quantile_in_place(&mut buf, Q_LOW)?,
        quantile_in_place(&mut buf, Q_HIGH)?,
        quantile_in_place(&mut buf, Q_TAIL)?,
    ))
}

/// Default reporting grid: geometric with ratio 1.3 (advancing by at least
/// one round), starting at round 1 and always ending exactly at `horizon`.
pub fn geometric_checkpoints(horizon: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut t = 1u64;
    while t < horizon {
        grid.push(t);
        t = (t + 1).max((t as f64 * 1.3).ceil() as u64);
    }
    grid.push(horizon.max(1));
    grid
}

/// Short hex digest of every semantic ingredient of an experiment: RNG
/// identity, model parameters, interaction mode, policy configuration,
/// horizon, replication count, base seed, and checkpoint grid. Worker count
/// and output destinations are deliberately excluded — they cannot change
/// the numbers.
pub fn experiment_fingerprint(
    env: &Environment,
    policy: &PolicyConfig,
    horizon: u64,
    replications: u64,
    base_seed: u64,
    checkpoints: &[u64],
) -> String {
    let mut s = String::from("v1");
    let _ = write!(s, "|rng={RNG_IDENTITY}|arms=");
    for p in env.model().arms() {
        let _ = write!(s, "({:?},{:?})", p.kappa(), p.alpha());
    }
    match env.mode() {
        EnvMode::Standard => s.push_str("|mode=standard"),
        EnvMode::FixedInfo { pinned_arm } => {
            let _ = write!(s, "|mode=fixed-info:{pinned_arm}");
        }
    }
    let _ = write!(
        s,
        "|k={}|truncate={}|tie={:?}|horizon={horizon}|reps={replications}|seed={base_seed}|checkpoints=",
        policy.k(),
        policy.truncate(),
        policy.tie_break(),
    );
    for (i, t) in checkpoints.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{t}");
    }
    let digest = Sha256::digest(s.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn check_checkpoints(checkpoints: &[u64], horizon: u64) -> Result<(), SimulationError> {
    if checkpoints.is_empty() {
        return Err(SimulationError::NoCheckpoints);
    }
    for (i, &c) in checkpoints.iter().enumerate() {
        if c < 1 || c > horizon {
            return Err(SimulationError::CheckpointOutOfRange { checkpoint: c, horizon });
        }
        if i > 0 && c <= checkpoints[i - 1] {
            return Err(SimulationError::CheckpointsNotIncreasing { at: i });
        }
    }
    Ok(())
}

/// Runs `replications` independent episodes on up to `parallelism` worker
/// threads and reduces them, in replication order, to per-checkpoint
/// statistics. The result is a pure function of everything in the
/// fingerprint.
pub fn run_experiment(
    env: &Environment,
    policy: &PolicyConfig,
    horizon: u64,
    replications: u64,
    base_seed: u64,
    checkpoints: &[u64],
    parallelism: usize,
) -> Result<RegretAggregate, SimulationError> {
    if replications < 1 {
        return Err(SimulationError::NoReplications);
    }
    if parallelism < 1 {
        return Err(SimulationError::ZeroParallelism);
    }
    check_horizon(env.model(), policy, horizon)?;
    check_checkpoints(checkpoints, horizon)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| SimulationError::ThreadPool(e.to_string()))?;
    let results: Vec<Result<Vec<f64>, SimulationError>> = pool.install(|| {
        (0..replications)
            .into_par_iter()
            .map(|rep| {
                let mut rng = RngStream::new(base_seed, rep);
                let outcome = run_episode(env, policy, horizon, &mut rng)?;
                Ok(checkpoints
                    .iter()
                    .map(|&t| {
                        outcome
                            .regret
                            .at_round(t)
                            .expect("checkpoints validated against the horizon")
                    })
                    .collect())
            })
            .collect()
    });

    let mut per_rep: Vec<Vec<f64>> = Vec::with_capacity(replications as usize);
    for outcome in results {
        per_rep.push(outcome?);
    }

    let n = per_rep.len();
    let mut stats = Vec::with_capacity(checkpoints.len());
    for (ci, &round) in checkpoints.iter().enumerate() {
        let mut column: Vec<f64> = per_rep.iter().map(|v| v[ci]).collect();
        let mean = column.iter().sum::<f64>() / n as f64;
        let std_dev = if n < 2 {
            0.0
        } else {
            (column.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        let q_low = quantile_in_place(&mut column, Q_LOW)?;
        let q_high = quantile_in_place(&mut column, Q_HIGH)?;
        let q_tail = quantile_in_place(&mut column, Q_TAIL)?;
        stats.push(CheckpointStats { round, mean, std_dev, q_low, q_high, q_tail });
    }
    let fingerprint =
        experiment_fingerprint(env, policy, horizon, replications, base_seed, checkpoints);
    Ok(RegretAggregate { checkpoints: stats, replications, fingerprint })
}
