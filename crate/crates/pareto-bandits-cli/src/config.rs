//! On-disk experiment configuration: a flat TOML schema with arrays for the
//! per-arm Pareto parameters. Arm numbering in this file format and in all
//! human-facing output is 1-based; the library underneath indexes from 0.
//!
//! Schema (all unlisted fields rejected):
//!
//! ```toml
//! kappa = [1.3, 1.2, 1.3, 1.5]   # per-arm scale, finite and positive
//! alpha = [1.4, 1.6, 1.9, 2.0]   # per-arm shape, must exceed 1
//! k = 0                          # prior exponent, |k| <= 64
//! truncate = false               # optional; clamp the shape estimate at n
//! horizon = 20000                # rounds per episode
//! replications = 2000            # independent episodes
//! seed = 20240817                # base seed; episode i uses stream i
//! checkpoints = "geometric"      # optional; or an increasing round list
//! mode = "standard"              # optional; or "fixed-info" (two arms)
//! fixed_arm = 1                  # fixed-info only: 1-based pinned arm
//! output = "out/theta4_k0"       # path stem for the CSV/JSON outputs
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pareto_bandits::bounds::BanditModel;
use pareto_bandits::distributions::ParetoParams;
use pareto_bandits::policy::PolicyConfig;
use pareto_bandits::simulator::{geometric_checkpoints, EnvMode, Environment};

/// Environment variable that redirects the directory part of every output
/// stem, leaving the file name untouched.
pub const OUTDIR_ENV: &str = "PARETO_BANDITS_OUTDIR";

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(String);

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError(message.into())
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum CheckpointSpec {
    /// The name of a built-in grid; only `"geometric"` exists.
    Named(String),
    /// Explicit strictly increasing reporting rounds.
    Explicit(Vec<u64>),
}

impl Default for CheckpointSpec {
    fn default() -> Self {
        CheckpointSpec::Named("geometric".to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
pub enum ModeSpec {
    #[default]
    #[serde(rename = "standard")]
    Standard,
    #[serde(rename = "fixed-info")]
    FixedInfo,
}

/// The experiment configuration exactly as written on disk. Serialization
/// round-trips losslessly, so re-emitting a parsed config preserves its
/// meaning (and its fingerprint).
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kappa: Vec<f64>,
    pub alpha: Vec<f64>,
    pub k: i32,
    #[serde(default)]
    pub truncate: bool,
    pub horizon: u64,
    pub replications: u64,
    pub seed: u64,
    #[serde(default)]
    pub checkpoints: CheckpointSpec,
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_arm: Option<u64>,
    pub output: String,
}

/// Optional command-line overrides layered on top of the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides<'a> {
    pub seed: Option<u64>,
    pub k: Option<i32>,
    pub truncate: Option<bool>,
    pub horizon: Option<u64>,
    pub replications: Option<u64>,
    pub output: Option<&'a str>,
}

/// A validated configuration, ready to run.
#[derive(Debug)]
pub struct ResolvedExperiment {
    pub env: Environment,
    pub policy: PolicyConfig,
    pub checkpoints: Vec<u64>,
    /// Output stem with any directory override applied.
    pub output: PathBuf,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| {
            // The toml error already names the offending field/line.
            ConfigError::new(format!("config parse error: {}", e.message()))
        })
    }

    pub fn apply(&mut self, overrides: &Overrides<'_>) {
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(k) = overrides.k {
            self.k = k;
        }
        if let Some(truncate) = overrides.truncate {
            self.truncate = truncate;
        }
        if let Some(horizon) = overrides.horizon {
            self.horizon = horizon;
        }
        if let Some(replications) = overrides.replications {
            self.replications = replications;
        }
        if let Some(output) = overrides.output {
            self.output = output.to_owned();
        }
    }

    /// Builds the model alone, with 1-based arm numbering in messages.
    pub fn model(&self) -> Result<BanditModel, ConfigError> {
        if self.kappa.is_empty() {
            return Err(ConfigError::new("field `kappa` must list at least one arm"));
        }
        if self.kappa.len() != self.alpha.len() {
            return Err(ConfigError::new(format!(
                "fields `kappa` and `alpha` must have the same length (got {} and {})",
                self.kappa.len(),
                self.alpha.len()
            )));
        }
        let mut arms = Vec::with_capacity(self.kappa.len());
        for (i, (&kappa, &alpha)) in self.kappa.iter().zip(&self.alpha).enumerate() {
            if !(kappa.is_finite() && kappa > 0.0) {
                return Err(ConfigError::new(format!(
                    "field `kappa`, arm {}: scale must be finite and positive (got {kappa})",
                    i + 1
                )));
            }
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(ConfigError::new(format!(
                    "field `alpha`, arm {}: shape must be finite and positive (got {alpha})",
                    i + 1
                )));
            }
            if alpha <= 1.0 {
                return Err(ConfigError::new(format!(
                    "field `alpha`, arm {}: shape must exceed 1 for a finite mean (got {alpha})",
                    i + 1
                )));
            }
            arms.push(
                ParetoParams::new(kappa, alpha)
                    .map_err(|e| ConfigError::new(format!("arm {}: {e}", i + 1)))?,
            );
        }
        BanditModel::new(arms).map_err(|e| ConfigError::new(e.to_string()))
    }

    /// Builds the environment (model plus interaction mode) and the policy,
    /// without the simulation-only horizon and checkpoint checks.
    pub fn environment_and_policy(&self) -> Result<(Environment, PolicyConfig), ConfigError> {
        let model = self.model()?;
        let num_arms = model.num_arms();

        let mode = match self.mode {
            ModeSpec::Standard => {
                if self.fixed_arm.is_some() {
                    return Err(ConfigError::new(
                        "field `fixed_arm` requires mode = \"fixed-info\"",
                    ));
                }
                EnvMode::Standard
            }
            ModeSpec::FixedInfo => {
                if num_arms != 2 {
                    return Err(ConfigError::new(format!(
                        "mode \"fixed-info\" requires exactly 2 arms, field `kappa` lists {num_arms}"
                    )));
                }
                let pinned = self.fixed_arm.ok_or_else(|| {
                    ConfigError::new(
                        "mode \"fixed-info\" requires field `fixed_arm` (the 1-based pinned arm)",
                    )
                })?;
                if !(1..=2).contains(&pinned) {
                    return Err(ConfigError::new(format!(
                        "field `fixed_arm` must be 1 or 2 (got {pinned})"
                    )));
                }
                EnvMode::FixedInfo { pinned_arm: (pinned - 1) as usize }
            }
        };
        let env = Environment::new(model, mode).map_err(|e| ConfigError::new(e.to_string()))?;

        let policy = PolicyConfig::new(self.k, self.truncate)
            .map_err(|e| ConfigError::new(format!("field `k`: {e}")))?;
        Ok((env, policy))
    }

    /// Full validation: model, mode, policy, horizon, checkpoints, output.
    /// `outdir` (from the environment) redirects the output directory.
    pub fn resolve(&self, outdir: Option<&Path>) -> Result<ResolvedExperiment, ConfigError> {
        let (env, policy) = self.environment_and_policy()?;
        let num_arms = env.model().num_arms();

        if self.replications < 1 {
            return Err(ConfigError::new("field `replications` must be at least 1"));
        }
        let minimum = num_arms as u64 * policy.initial_plays();
        if self.horizon < minimum {
            return Err(ConfigError::new(format!(
                "field `horizon` = {} does not cover the {minimum} initialization rounds",
                self.horizon
            )));
        }

        let checkpoints = match &self.checkpoints {
            CheckpointSpec::Named(name) if name == "geometric" => {
                geometric_checkpoints(self.horizon)
            }
            CheckpointSpec::Named(name) => {
                return Err(ConfigError::new(format!(
                    "field `checkpoints` must be \"geometric\" or a round list (got \"{name}\")"
                )));
            }
            CheckpointSpec::Explicit(rounds) => {
                if rounds.is_empty() {
                    return Err(ConfigError::new(
                        "field `checkpoints` must list at least one round",
                    ));
                }
                for (i, &round) in rounds.iter().enumerate() {
                    if round < 1 || round > self.horizon {
                        return Err(ConfigError::new(format!(
                            "field `checkpoints`: round {round} outside 1..={}",
                            self.horizon
                        )));
                    }
                    if i > 0 && round <= rounds[i - 1] {
                        return Err(ConfigError::new(
                            "field `checkpoints` must be strictly increasing",
                        ));
                    }
                }
                rounds.clone()
            }
        };

        if self.output.trim().is_empty() {
            return Err(ConfigError::new("field `output` must be a non-empty path stem"));
        }
        let output = resolve_output(&self.output, outdir);

        Ok(ResolvedExperiment { env, policy, checkpoints, output })
    }
}

/// Applies the output-directory override: the stem's file name moves into
/// `outdir`, everything else is unchanged.
fn resolve_output(stem: &str, outdir: Option<&Path>) -> PathBuf {
    let stem = PathBuf::from(stem);
    match (outdir, stem.file_name()) {
        (Some(dir), Some(name)) => dir.join(name),
        _ => stem,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
kappa = [1.3, 1.2, 1.3, 1.5]
alpha = [1.4, 1.6, 1.9, 2.0]
k = 0
horizon = 200
replications = 4
seed = 7
output = "out/run"
"#;

    #[test]
    fn parses_defaults() {
        let cfg = FileConfig::parse(BASE).unwrap();
        assert!(!cfg.truncate);
        assert_eq!(cfg.checkpoints, CheckpointSpec::default());
        assert_eq!(cfg.mode, ModeSpec::Standard);
        assert_eq!(cfg.fixed_arm, None);
        let resolved = cfg.resolve(None).unwrap();
        assert_eq!(resolved.env.model().num_arms(), 4);
        assert_eq!(*resolved.checkpoints.last().unwrap(), 200);
    }

    #[test]
    fn rejects_unknown_fields_by_name() {
        let err = FileConfig::parse(&format!("{BASE}\nworkers = 3\n")).unwrap_err();
        assert!(err.to_string().contains("workers"), "message: {err}");
    }

    #[test]
    fn rejects_mismatched_arrays() {
        let cfg = FileConfig::parse(&BASE.replace("alpha = [1.4, 1.6, 1.9, 2.0]", "alpha = [1.4]"))
            .unwrap();
        let err = cfg.model().unwrap_err().to_string();
        assert!(err.contains("kappa") && err.contains("alpha"), "message: {err}");
    }

    #[test]
    fn names_offending_arm_one_based() {
        let cfg = FileConfig::parse(&BASE.replace("1.6", "1.0")).unwrap();
        let err = cfg.model().unwrap_err().to_string();
        assert!(err.contains("arm 2") && err.contains("alpha"), "message: {err}");
    }

    #[test]
    fn explicit_checkpoints_validated() {
        let cfg =
            FileConfig::parse(&BASE.replace("seed = 7", "seed = 7\ncheckpoints = [10, 5]")).unwrap();
        let err = cfg.resolve(None).unwrap_err().to_string();
        assert!(err.contains("increasing"), "message: {err}");
        let cfg = FileConfig::parse(&BASE.replace("seed = 7", "seed = 7\ncheckpoints = [10, 500]"))
            .unwrap();
        let err = cfg.resolve(None).unwrap_err().to_string();
        assert!(err.contains("500"), "message: {err}");
    }

    #[test]
    fn fixed_info_constraints() {
        let err = FileConfig::parse(&BASE.replace("seed = 7", "seed = 7\nmode = \"fixed-info\""))
            .unwrap()
            .resolve(None)
            .unwrap_err()
            .to_string();
        assert!(err.contains("exactly 2 arms"), "message: {err}");

        let err = FileConfig::parse(&BASE.replace("seed = 7", "seed = 7\nfixed_arm = 1"))
            .unwrap()
            .resolve(None)
            .unwrap_err()
            .to_string();
        assert!(err.contains("fixed_arm"), "message: {err}");

        let two_arm = BASE
            .replace("kappa = [1.3, 1.2, 1.3, 1.5]", "kappa = [1.0, 1.0]")
            .replace("alpha = [1.4, 1.6, 1.9, 2.0]", "alpha = [1.4, 2.2]")
            .replace("seed = 7", "seed = 7\nmode = \"fixed-info\"");
        let err = FileConfig::parse(&two_arm).unwrap().resolve(None).unwrap_err().to_string();
        assert!(err.contains("requires field `fixed_arm`"), "message: {err}");

        let resolved = FileConfig::parse(&two_arm.replace("seed = 7", "seed = 7\nfixed_arm = 2"))
            .unwrap()
            .resolve(None)
            .unwrap();
        assert_eq!(resolved.env.mode(), EnvMode::FixedInfo { pinned_arm: 1 });
    }

    #[test]
    fn horizon_must_cover_initialization() {
        let cfg = FileConfig::parse(&BASE.replace("horizon = 200", "horizon = 7")).unwrap();
        let err = cfg.resolve(None).unwrap_err().to_string();
        assert!(err.contains("horizon") && err.contains("8"), "message: {err}");
    }

    #[test]
    fn toml_round_trip_is_lossless() {
        let mut cfg = FileConfig::parse(BASE).unwrap();
        cfg.checkpoints = CheckpointSpec::Explicit(vec![1, 50, 200]);
        let text = toml::to_string(&cfg).unwrap();
        let again = FileConfig::parse(&text).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn output_directory_override_keeps_file_name() {
        let cfg = FileConfig::parse(BASE).unwrap();
        let resolved = cfg.resolve(Some(Path::new("/tmp/elsewhere"))).unwrap();
        assert_eq!(resolved.output, PathBuf::from("/tmp/elsewhere/run"));
        let plain = cfg.resolve(None).unwrap();
        assert_eq!(plain.output, PathBuf::from("out/run"));
    }

    #[test]
    fn overrides_layer_on_top() {
        let mut cfg = FileConfig::parse(BASE).unwrap();
        cfg.apply(&Overrides {
            seed: Some(99),
            k: Some(3),
            truncate: Some(true),
            horizon: Some(400),
            replications: Some(2),
            output: Some("elsewhere/stem"),
        });
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.k, 3);
        assert!(cfg.truncate);
        assert_eq!(cfg.horizon, 400);
        assert_eq!(cfg.replications, 2);
        assert_eq!(cfg.output, "elsewhere/stem");
    }
}
