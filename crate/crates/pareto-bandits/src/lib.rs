//! Thompson sampling for multi-armed bandits with two-parameter Pareto
//! rewards.
//!
//! Everything about a reward distribution `Pa(kappa, alpha)` — scale
//! `kappa > 0`, shape `alpha > 0`, density `alpha kappa^alpha / x^(alpha+1)`
//! on `x >= kappa` — is unknown to the learner, including the scale. The
//! crate provides:
//!
//! * [`distributions`] — Pareto and Erlang primitives on top of a seeded,
//!   stream-indexed generator with a pinned identity ([`RNG_IDENTITY`]);
//! * [`estimation`] — streaming sufficient statistics and the closed-form
//!   maximum-likelihood estimates for both parameters;
//! * [`posterior`] — the hierarchical posterior sampler the policy draws
//!   from (Erlang shape, then a power-law scale below the observed minimum);
//! * [`policy`] — the Thompson sampling agent, its optional shape
//!   truncation, and a replayable draw-by-draw trace of every decision;
//! * [`bounds`] — the divergence infimum to the confusing set in closed
//!   form, a numerical oracle for it, the asymptotic regret lower bound, and
//!   the finite-time analysis constants;
//! * [`simulator`] — a deterministic Monte-Carlo harness whose aggregates
//!   are reproducible bit for bit at any worker count;
//! * [`special`] — the hand-rolled special functions the rest relies on
//!   (log-gamma, regularized incomplete gamma, Lambert W).

pub mod bounds;
pub mod distributions;
pub mod estimation;
pub mod policy;
pub mod posterior;
pub mod simulator;
pub mod special;

pub use bounds::{kl_inf, kl_inf_oracle, lower_bound_curve, BanditModel, BoundsError};
pub use distributions::{ErlangParams, ParetoParams, RngStream, RNG_IDENTITY};
pub use estimation::{ArmState, MleEstimate};
pub use policy::{AgentState, PolicyConfig, Selection, TieBreak};
pub use posterior::PosteriorInputs;
pub use simulator::{
    geometric_checkpoints, run_episode, run_experiment, Environment, EnvMode, RegretAggregate,
};
