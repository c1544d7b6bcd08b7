//! `loqc`: run linear-optics protocols under imperfect detectors, sweep
//! detector parameters, and query loss thresholds.
//!
//! Exit codes: 0 success, 1 simulation failure, 2 unknown protocol or invalid
//! parameter, 3 unwritable output, 4 unreachable threshold target.

mod config;
mod error;
mod input;
mod output;
mod run;
mod simulation;
mod sweep;
mod threshold;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use loqc::analysis::{Mode, DEFAULT_N_MAX};
use loqc::protocols::ProtocolName;

use config::Config;
use error::{CliError, CliResult};
use run::{cmd_run, RunSettings};
use sweep::{cmd_sweep, SweepKind, SweepSettings};

#[derive(Debug, Parser)]
#[command(name = "loqc", version, about = "Linear optical quantum gates with lossy, noisy photon detectors")]
struct Cli {
    /// JSON file supplying defaults for any flag (flags take precedence).
    /// Falls back to the file named by LOQC_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Print the mode mapping of each simulated network to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one protocol and write a JSON report plus its outcome table.
    Run(RunArgs),
    /// Evaluate a protocol or a closed form over a parameter grid, as CSV.
    Sweep(SweepArgs),
    /// Largest detector loss, and the resource size, reaching a target success rate.
    Threshold(ThresholdArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Protocol: ns, cz16, cz4, teleport1, teleportn or czn.
    #[arg(value_name = "PROTOCOL")]
    positional: Option<String>,

    #[arg(long)]
    protocol: Option<String>,

    /// Input state. ns: photon numbers joined by '+' (e.g. 2, 0+2);
    /// teleport1/teleportn: one of 0 1 + -; cz16/cz4/czn: two of them (e.g. 11, +0).
    #[arg(long, allow_hyphen_values = true)]
    input: Option<String>,

    /// Detector inefficiency (probability an arriving photon is not registered).
    #[arg(long)]
    l: Option<String>,

    /// Mean number of spurious counts per detector.
    #[arg(long)]
    g: Option<String>,

    /// Resource size for teleportn and czn (default 1; ignored elsewhere).
    #[arg(long)]
    n: Option<usize>,

    /// Report path; the outcome table is written next to it as <stem>.outcomes.csv.
    /// Default: <protocol>-report.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// A protocol name (l × g surface) or teleport-nc / pf-vs-n (closed forms).
    #[arg(value_name = "KIND")]
    positional: Option<String>,

    #[arg(long)]
    protocol: Option<String>,

    /// Input state, as for `run`.
    #[arg(long, allow_hyphen_values = true)]
    input: Option<String>,

    /// Loss grid: a value, a comma list, or start:stop:count.
    /// Default 0:0.2:21 for protocols, 1e-5:0.2:60 (log) for teleport-nc, 0.01 for pf-vs-n.
    #[arg(long)]
    l: Option<String>,

    /// Noise grid for protocol surfaces, same forms. Default 0:0.2:21.
    #[arg(long)]
    g: Option<String>,

    /// Resource size for teleportn/czn, or the largest n for pf-vs-n
    /// (default: the critical n at each loss).
    #[arg(long)]
    n: Option<usize>,

    /// Closed-form quantity: teleport or cz.
    #[arg(long)]
    mode: Option<String>,

    /// Largest n scanned for critical points.
    #[arg(long)]
    n_max: Option<usize>,

    /// Space start:stop:count grids geometrically.
    #[arg(long)]
    log: bool,

    /// CSV path. Default: <kind>-sweep.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    /// Target success probability in (0, 1).
    #[arg(value_name = "TARGET")]
    positional: Option<f64>,

    #[arg(long)]
    target: Option<f64>,

    /// teleport or cz.
    #[arg(long)]
    mode: Option<String>,

    /// Largest resource size considered.
    #[arg(long)]
    n_max: Option<usize>,

    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Positional and `--flag` forms must agree when both are given.
fn pick<T: PartialEq + std::fmt::Debug>(name: &str, positional: Option<T>, flag: Option<T>) -> CliResult<Option<T>> {
    match (positional, flag) {
        (Some(a), Some(b)) if a != b => Err(CliError::invalid(format!("conflicting {name} values {a:?} and {b:?}"))),
        (a, b) => Ok(b.or(a)),
    }
}

fn parse_mode(cli: Option<String>, config: &Config) -> CliResult<Mode> {
    Ok(cli.or_else(|| config.mode.clone()).map(|m| m.parse::<Mode>()).transpose()?.unwrap_or(Mode::Teleport))
}

fn execute(cli: Cli) -> CliResult<()> {
    let config = Config::load(cli.config.as_deref())?;
    let verbose = cli.verbose || config.verbose.unwrap_or(false);
    if let Some(threads) = cli.threads.or(config.threads) {
        if threads == 0 {
            return Err(CliError::invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::invalid(format!("thread pool: {e}")))?;
    }
    let grid = |cli: Option<String>, cfg: &Option<config::GridValue>| cli.or_else(|| cfg.as_ref().map(|v| v.to_spec()));

    match cli.command {
        Command::Run(args) => {
            let name = pick("protocol", args.positional, args.protocol)?
                .or_else(|| config.protocol.clone())
                .ok_or_else(|| CliError::invalid("no protocol given"))?;
            let protocol: ProtocolName = name.parse()?;
            let settings = RunSettings::resolve(
                protocol,
                args.input.or_else(|| config.input.clone()),
                grid(args.l, &config.l),
                grid(args.g, &config.g),
                args.n.or(config.n),
                args.out.or_else(|| config.out.clone()),
                verbose,
            )?;
            cmd_run(&settings)
        }
        Command::Sweep(args) => {
            let name = pick("sweep kind", args.positional, args.protocol)?
                .or_else(|| config.protocol.clone())
                .ok_or_else(|| CliError::invalid("no protocol or sweep kind given"))?;
            let kind: SweepKind = name.parse()?;
            let n_max = args.n_max.or(config.n_max).unwrap_or(DEFAULT_N_MAX);
            let settings = SweepSettings {
                kind,
                input: args.input.or_else(|| config.input.clone()),
                l: grid(args.l, &config.l),
                g: grid(args.g, &config.g),
                n: args.n.or(config.n),
                mode: parse_mode(args.mode, &config)?,
                n_max,
                log: args.log || config.log.unwrap_or(false),
                out: args.out.or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from(format!("{}-sweep.csv", kind.name()))),
            };
            let rows = cmd_sweep(&settings)?;
            if verbose {
                eprintln!("wrote {rows} rows to {}", settings.out.display());
            }
            Ok(())
        }
        Command::Threshold(args) => {
            let target = pick("target", args.positional, args.target)?
                .or(config.target)
                .ok_or_else(|| CliError::invalid("no target given"))?;
            let mode = parse_mode(args.mode, &config)?;
            let n_max = args.n_max.or(config.n_max).unwrap_or(DEFAULT_N_MAX);
            let out = args.out.or_else(|| config.out.clone());
            let report = threshold::cmd_threshold(target, mode, n_max, out.as_ref())?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("loqc: {e}");
            e.exit_code()
        }
    }
}
