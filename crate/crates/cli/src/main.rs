//! Deterministic command-line pipeline around the multiphase Grover
//! simulator. Exit statuses: 0 success, 1 usage error, 2 numerical or
//! validation failure.

mod commands;
mod config;
mod errors;
mod output;
mod phases;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use errors::{CliError, CliResult};
use grover_multiphase::montecarlo::AcceptanceCriteria;
use grover_multiphase::robustness::DEFAULT_Z_GRID;
use phases::OmegaMode;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "grover-multiphase",
    version,
    about = "Grover search with a multiphase oracle: simulation, Monte Carlo phase filtering, curve fits, and robustness scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Optional JSON config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Success-probability trace for one phase assignment (CSV).
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Database size.
        #[arg(long)]
        n: Option<u64>,
        /// Solution count.
        #[arg(long)]
        m: Option<u64>,
        /// Comma-separated oracle phases (`pi`, `2pi`, `0.5pi`, decimals).
        #[arg(long)]
        phases: Option<String>,
        /// Diffusion phase, or `auto` for the optimal one.
        #[arg(long, default_value = "auto")]
        omega: String,
        /// Iterations to trace (default: 4x the required count).
        #[arg(long)]
        iters: Option<u64>,
        /// Output CSV path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random phase-pair campaign for two solutions (CSV).
    Montecarlo {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u64>,
        /// Number of sampled pairs.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Diffusion phase, or `auto` for the optimal one.
        #[arg(long, default_value = "auto")]
        omega: String,
        /// Acceptance threshold on the peak probability.
        #[arg(long)]
        threshold: Option<f64>,
        /// Iteration budget beyond the reference peak.
        #[arg(long)]
        extra_iterations: Option<u64>,
        /// Horizon multiplier for locating the reference peak.
        #[arg(long)]
        horizon_factor: Option<u64>,
        /// Output CSV path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Superellipse fit of a campaign's accepted upper stripe (JSON).
    FitStripe {
        #[command(flatten)]
        common: Common,
        /// Campaign CSV produced by `montecarlo`.
        #[arg(long)]
        points: PathBuf,
        /// Register size override when the CSV lacks metadata.
        #[arg(long)]
        n: Option<u64>,
        /// Output JSON path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Omega robustness scan for one register size (CSV + JSON).
    Robustness {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u64>,
        /// Scan resolution over [0, 2pi].
        #[arg(long)]
        grid: Option<usize>,
        /// Superellipse exponent override (default: the published growth law).
        #[arg(long)]
        p_phi: Option<f64>,
        /// Scan CSV path (default: `robustness-n<N>.csv` in the output dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record JSON path (default: `robustness-n<N>.json` in the output dir).
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Robustness sweep over register sizes (CSV + growth-law JSON).
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: Option<u64>,
        #[arg(long)]
        to: Option<u64>,
        #[arg(long)]
        step: Option<u64>,
        #[arg(long)]
        grid: Option<usize>,
        /// Sweep CSV path (default: sweep.csv in the output dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Law JSON path (default: sweep-law.json in the output dir).
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Cross-path consistency checks against the full-basis reference.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        /// Random phase draws per check.
        #[arg(long)]
        draws: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate {
            common,
            n,
            m,
            phases,
            omega,
            iters,
            out,
        } => {
            let file = config::load(common.config.as_deref())?;
            let n = require(config::pick_opt(n, file.n), "--n")?;
            let m = config::pick(m, file.m, 1);
            let phase_tokens = match (phases, &file.phases) {
                (Some(raw), _) => phases::parse_phase_list(&raw)?,
                (None, Some(tokens)) => tokens
                    .iter()
                    .map(|t| phases::parse_phase(t))
                    .collect::<CliResult<Vec<_>>>()?,
                (None, None) => {
                    return Err(CliError::Usage("--phases is required".to_string()));
                }
            };
            let omega = resolve_omega(&omega, &file)?;
            commands::simulate::run(&commands::simulate::SimulateArgs {
                n,
                m,
                omega,
                phases: phase_tokens,
                iters: config::pick_opt(iters, file.iters),
                out: out.or(file.out.map(PathBuf::from)),
            })
        }
        Command::Montecarlo {
            common,
            n,
            samples,
            seed,
            omega,
            threshold,
            extra_iterations,
            horizon_factor,
            out,
        } => {
            let file = config::load(common.config.as_deref())?;
            let defaults = AcceptanceCriteria::default();
            let criteria = AcceptanceCriteria {
                p_threshold: config::pick(threshold, file.p_threshold, defaults.p_threshold),
                extra_iterations: config::pick(
                    extra_iterations,
                    file.extra_iterations,
                    defaults.extra_iterations,
                ),
                scan_horizon_factor: config::pick(
                    horizon_factor,
                    file.scan_horizon_factor,
                    defaults.scan_horizon_factor,
                ),
            };
            commands::montecarlo::run(&commands::montecarlo::MontecarloArgs {
                n: require(config::pick_opt(n, file.n), "--n")?,
                samples: config::pick(samples, file.samples, 200_000),
                seed: config::pick(seed, file.seed, 1),
                omega: resolve_omega(&omega, &file)?,
                criteria,
                out: out.or(file.out.map(PathBuf::from)),
            })
        }
        Command::FitStripe {
            common,
            points,
            n,
            out,
        } => {
            let file = config::load(common.config.as_deref())?;
            commands::fit_stripe::run(&commands::fit_stripe::FitStripeArgs {
                points,
                n_override: config::pick_opt(n, file.n),
                out: out.or(file.json_out.map(PathBuf::from)),
            })
        }
        Command::Robustness {
            common,
            n,
            grid,
            p_phi,
            out,
            json_out,
        } => {
            let file = config::load(common.config.as_deref())?;
            let grid = commands::robustness::validate_grid(config::pick(
                grid,
                file.z_grid,
                DEFAULT_Z_GRID,
            ))?;
            commands::robustness::run(&commands::robustness::RobustnessArgs {
                n: require(config::pick_opt(n, file.n), "--n")?,
                grid,
                p_phi: config::pick_opt(p_phi, file.p_phi),
                out: out.or(file.out.map(PathBuf::from)),
                json_out: json_out.or(file.json_out.map(PathBuf::from)),
            })
        }
        Command::Sweep {
            common,
            from,
            to,
            step,
            grid,
            out,
            json_out,
        } => {
            let file = config::load(common.config.as_deref())?;
            let grid = commands::robustness::validate_grid(config::pick(
                grid,
                file.z_grid,
                DEFAULT_Z_GRID,
            ))?;
            commands::sweep::run(&commands::sweep::SweepArgs {
                from: config::pick(from, file.sweep_from, 20),
                to: config::pick(to, file.sweep_to, 775),
                step: config::pick(step, file.sweep_step, 15),
                grid,
                out: out.or(file.out.map(PathBuf::from)),
                json_out: json_out.or(file.json_out.map(PathBuf::from)),
            })
        }
        Command::Validate {
            common,
            n,
            m,
            draws,
            seed,
        } => {
            let file = config::load(common.config.as_deref())?;
            commands::validate::run(&commands::validate::ValidateArgs {
                n: require(config::pick_opt(n, file.n), "--n")?,
                m: config::pick(m, file.m, 2),
                draws: config::pick(draws, file.draws, 20),
                seed: config::pick(seed, file.seed, 7),
            })
        }
    }
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("{flag} is required (flag or config file)")))
}

fn resolve_omega(flag: &str, file: &config::FileConfig) -> CliResult<OmegaMode> {
    // an explicit flag wins; "auto" is the flag default, so a config value
    // fills in only when the flag was left at its default
    if flag != "auto" {
        return phases::parse_omega(flag);
    }
    match &file.omega {
        Some(token) => phases::parse_omega(token),
        None => Ok(OmegaMode::Auto),
    }
}
