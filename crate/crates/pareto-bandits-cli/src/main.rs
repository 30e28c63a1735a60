//! Command-line front end. Exit codes: 0 on success, 2 for configuration
//! errors (unparsable or invalid config, invalid model, bad flag values),
//! 3 for runtime simulation failures.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use pareto_bandits::bounds::{
    analysis_constants, kl_inf, kl_inf_oracle, lower_bound_curve, BanditModel, BoundsError,
};
use pareto_bandits::simulator::{experiment_fingerprint, geometric_checkpoints, run_experiment};
use pareto_bandits_cli::config::{ConfigError, FileConfig, Overrides, OUTDIR_ENV};
use pareto_bandits_cli::output::{bound_csv, regret_csv, sidecar_json};

/// Oracle grid resolution used by the `klinf` cross-check column.
const ORACLE_RESOLUTION: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "pareto-bandits",
    version,
    about = "Thompson sampling on Pareto bandits: simulation, divergence tables, regret bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a Monte-Carlo regret experiment and write CSV + JSON outputs
    Simulate {
        /// Experiment configuration file (TOML)
        #[arg(long)]
        config: PathBuf,
        /// Worker threads for replications (default 1; does not change results)
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the base seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the prior exponent k
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i32>,
        /// Override the shape-truncation switch
        #[arg(long)]
        truncate: Option<bool>,
        /// Override the horizon
        #[arg(long)]
        horizon: Option<u64>,
        /// Override the replication count
        #[arg(long)]
        replications: Option<u64>,
        /// Override the output path stem
        #[arg(long)]
        output: Option<String>,
    },
    /// Print the per-arm divergence table and the lower-bound slope
    Klinf {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write the asymptotic lower-bound curve slope*log(t) as CSV
    Lowerbound {
        #[arg(long)]
        config: PathBuf,
        /// Number of rounds to tabulate
        #[arg(long)]
        horizon: u64,
    },
    /// Print the finite-time analysis constants per suboptimal arm
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Prior exponent (defaults to the config's k)
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i32>,
        /// Perturbation size; must be inside every arm's admissible range
        #[arg(long)]
        eps: f64,
    },
}

enum CliError {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(CliError::Config(message)) => {
            eprintln!("error: {message}");
            2
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            3
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<(), CliError> {
    let outdir = std::env::var_os(OUTDIR_ENV).map(PathBuf::from);
    match cli.command {
        Cmd::Simulate {
            config,
            jobs,
            seed,
            k,
            truncate,
            horizon,
            replications,
            output,
        } => {
            let overrides = Overrides {
                seed,
                k,
                truncate,
                horizon,
                replications,
                output: output.as_deref(),
            };
            cmd_simulate(&config, jobs, &overrides, outdir.as_deref())
        }
        Cmd::Klinf { config } => cmd_klinf(&config),
        Cmd::Lowerbound { config, horizon } => {
            cmd_lowerbound(&config, horizon, outdir.as_deref())
        }
        Cmd::Analyze { config, k, eps } => cmd_analyze(&config, k, eps),
    }
}

fn cmd_simulate(
    path: &std::path::Path,
    jobs: Option<usize>,
    overrides: &Overrides<'_>,
    outdir: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let mut file = FileConfig::load(path)?;
    file.apply(overrides);
    let resolved = file.resolve(outdir)?;
    let jobs = jobs.unwrap_or(1);
    if jobs == 0 {
        return Err(CliError::Config("option `--jobs` must be at least 1".into()));
    }

    let started = Instant::now();
    let aggregate = run_experiment(
        &resolved.env,
        &resolved.policy,
        file.horizon,
        file.replications,
        file.seed,
        &resolved.checkpoints,
        jobs,
    )
    .map_err(|e| CliError::Runtime(e.to_string()))?;
    let elapsed = started.elapsed().as_secs_f64();

    let csv_path = resolved.output.with_extension("csv");
    let json_path = resolved.output.with_extension("json");
    write_output(&csv_path, &regret_csv(&aggregate))?;
    write_output(
        &json_path,
        &sidecar_json(&aggregate.fingerprint, &file, jobs, elapsed),
    )?;
    println!("fingerprint {}", aggregate.fingerprint);
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn cmd_klinf(path: &std::path::Path) -> Result<(), CliError> {
    let file = FileConfig::load(path)?;
    let model = analysis_ready_model(&file)?;
    let mu_star = model.optimal_mean();
    println!(
        "optimal arm {} (mean {:.6}); divergence to the confusing set per suboptimal arm",
        model.optimal_arm() + 1,
        mu_star
    );
    println!(
        "{:>4} {:>14} {:>14} {:>14} {:>14} {:>14}",
        "arm", "delta", "kl_inf", "delta/kl_inf", "oracle", "|diff|"
    );
    let mut slope = 0.0;
    for arm in 0..model.num_arms() {
        if arm == model.optimal_arm() {
            continue;
        }
        let params = model.arm(arm).map_err(bounds_runtime)?;
        let gap = model.gap(arm).map_err(bounds_runtime)?;
        let closed = kl_inf(params, mu_star).map_err(bounds_runtime)?;
        let oracle =
            kl_inf_oracle(params, mu_star, ORACLE_RESOLUTION).map_err(bounds_runtime)?;
        slope += gap / closed;
        println!(
            "{:>4} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            arm + 1,
            gap,
            closed,
            gap / closed,
            oracle,
            (closed - oracle).abs()
        );
    }
    println!("sum delta/kl_inf = {slope:.6e}");
    Ok(())
}

fn cmd_lowerbound(
    path: &std::path::Path,
    horizon: u64,
    outdir: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let file = FileConfig::load(path)?;
    let model = analysis_ready_model(&file)?;
    if horizon < 1 {
        return Err(CliError::Config("option `--horizon` must be at least 1".into()));
    }
    let curve = lower_bound_curve(&model, horizon).map_err(bounds_runtime)?;

    // Stamp the curve with the fingerprint of the effective experiment it
    // overlays: the file's policy and seed at the requested horizon, on the
    // geometric grid.
    let (env, policy) = file.environment_and_policy()?;
    let fingerprint = experiment_fingerprint(
        &env,
        &policy,
        horizon,
        file.replications,
        file.seed,
        &geometric_checkpoints(horizon),
    );

    let mut stem = outdir
        .and_then(|dir| {
            PathBuf::from(&file.output)
                .file_name()
                .map(|name| dir.join(name))
        })
        .unwrap_or_else(|| PathBuf::from(&file.output));
    let mut name = stem
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "bound".to_owned());
    name.push_str(".lowerbound.csv");
    stem.set_file_name(name);
    write_output(&stem, &bound_csv(&fingerprint, &curve))?;
    println!("fingerprint {fingerprint}");
    println!("wrote {}", stem.display());
    Ok(())
}

fn cmd_analyze(path: &std::path::Path, k: Option<i32>, eps: f64) -> Result<(), CliError> {
    let file = FileConfig::load(path)?;
    let model = analysis_ready_model(&file)?;
    let k = k.unwrap_or(file.k);
    if k.unsigned_abs() > 64 {
        return Err(CliError::Config(format!(
            "option `--k` must lie in [-64, 64] (got {k})"
        )));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(CliError::Config(format!(
            "option `--eps` must be finite and positive (got {eps})"
        )));
    }
    let mu_star = model.optimal_mean();
    println!("analysis constants at k = {k}, eps = {eps:e}");
    println!(
        "{:>4} {:>13} {:>13} {:>13} {:>13} {:>13} {:>13}",
        "arm", "eps_max", "eps_lower", "eps_upper", "eta", "D_k", "D_k-kl_inf"
    );
    for arm in 0..model.num_arms() {
        if arm == model.optimal_arm() {
            continue;
        }
        let constants = analysis_constants(&model, arm, k, eps).map_err(|e| match e {
            BoundsError::EpsOutOfRange { arm, eps, limit } => CliError::Config(format!(
                "option `--eps` = {eps} outside the admissible range (0, {limit:.6e}) for arm {}",
                arm + 1
            )),
            other => bounds_runtime(other),
        })?;
        let target = kl_inf(model.arm(arm).map_err(bounds_runtime)?, mu_star)
            .map_err(bounds_runtime)?;
        println!(
            "{:>4} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e} {:>13.6e}",
            arm + 1,
            constants.eps_max,
            constants.eps_lower,
            constants.eps_upper,
            constants.eta,
            constants.d_k,
            constants.d_k - target
        );
    }
    Ok(())
}

/// Loads the model for the table commands, rejecting degenerate inputs with
/// 1-based arm numbering: a missing suboptimal arm or a tie for the optimum.
fn analysis_ready_model(file: &FileConfig) -> Result<BanditModel, CliError> {
    let model = file.model()?;
    if model.num_arms() < 2 {
        return Err(CliError::Config(
            "no suboptimal arm: the model needs at least two arms".into(),
        ));
    }
    model.require_unique_optimum().map_err(|e| match e {
        BoundsError::TiedOptimum { first, second, mean } => CliError::Config(format!(
            "arms {} and {} tie for the optimum (mean {mean}); analysis needs a unique optimal arm",
            first + 1,
            second + 1
        )),
        other => bounds_runtime(other),
    })?;
    Ok(model)
}

fn bounds_runtime(e: BoundsError) -> CliError {
    CliError::Runtime(e.to_string())
}

fn write_output(path: &std::path::Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                CliError::Runtime(format!("cannot create {}: {e}", parent.display()))
            })?;
        }
    }
    std::fs::write(path, content)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}
