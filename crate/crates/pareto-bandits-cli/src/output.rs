//! Output rendering. The CSV layouts below are frozen plotting contracts:
//! a `# fingerprint=<hex>` comment line, one fixed header row, then data
//! rows with floats printed as `{:.16e}` (17 significant digits, enough to
//! round-trip f64 exactly). Regenerating an unchanged configuration yields
//! byte-identical CSV files.
//!
//! The JSON sidecar repeats the effective configuration, the fingerprint,
//! and the RNG identity; its `elapsed_seconds` field is wall-clock time and
//! is the only value in any output that varies between identical runs.

use std::fmt::Write as _;

use serde::Serialize;

use pareto_bandits::distributions::RNG_IDENTITY;
use pareto_bandits::simulator::RegretAggregate;

use crate::config::FileConfig;

pub const REGRET_HEADER: &str = "round,mean,std,q005,q995,q9995";
pub const BOUND_HEADER: &str = "round,bound";

/// Renders a regret aggregate as CSV.
pub fn regret_csv(aggregate: &RegretAggregate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# fingerprint={}", aggregate.fingerprint);
    let _ = writeln!(out, "{REGRET_HEADER}");
    for c in &aggregate.checkpoints {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            c.round, c.mean, c.std_dev, c.q_low, c.q_high, c.q_tail
        );
    }
    out
}

/// Renders a lower-bound curve as CSV under the same fingerprint banner.
pub fn bound_csv(fingerprint: &str, curve: &[(u64, f64)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# fingerprint={fingerprint}");
    let _ = writeln!(out, "{BOUND_HEADER}");
    for &(round, value) in curve {
        let _ = writeln!(out, "{round},{value:.16e}");
    }
    out
}

#[derive(Serialize)]
struct Sidecar<'a> {
    fingerprint: &'a str,
    rng: &'a str,
    jobs: usize,
    elapsed_seconds: f64,
    config: &'a FileConfig,
}

/// Renders the JSON metadata sidecar for a simulation run. `config` must be
/// the effective configuration (after command-line overrides).
pub fn sidecar_json(
    fingerprint: &str,
    config: &FileConfig,
    jobs: usize,
    elapsed_seconds: f64,
) -> String {
    let sidecar = Sidecar { fingerprint, rng: RNG_IDENTITY, jobs, elapsed_seconds, config };
    let mut text = serde_json::to_string_pretty(&sidecar).expect("sidecar serialization");
    text.push('\n');
    text
}
