//! Command-line front end: stroboscopic traces, divisibility
//! classification, witness series, and parameter-plane sweeps, with CSV or
//! JSON output suitable for plotting and regression.
//!
//! Exit codes: 0 = computed (any verdict), 1 = bad input, 2 = I/O failure,
//! 3 = internal numerical failure.

mod config;
mod report;

use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};

use config::CommonArgs;

#[derive(Parser)]
#[command(
    name = "strobosim",
    version,
    about = "Stroboscopic beam-splitter collision-model simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stroboscopic trace of the channel coefficient c_L (CSV: L, re_c,
    /// im_c, abs_c; with --delta: coarse-grained n, abs_c_bar)
    Trace(CommonArgs),
    /// Divisibility classification (JSON report with verdict and
    /// violation steps)
    Classify(CommonArgs),
    /// Witness series along the trajectory (CSV: L, value, violation_flag)
    Witness(CommonArgs),
    /// Verdict grid over a parameter plane (CSV long format or JSON; the
    /// extracted boundary polyline goes to --boundary-out)
    Sweep(CommonArgs),
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
            return ExitCode::from(code);
        }
    };

    if let Err(msg) = init_workers() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }

    let result = match cli.command {
        Command::Trace(args) => report::cmd_trace(args),
        Command::Classify(args) => report::cmd_classify(args),
        Command::Witness(args) => report::cmd_witness(args),
        Command::Sweep(args) => report::cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// Honor STROBOSIM_WORKERS for the rayon pool size; unset means the rayon
/// default (one worker per core).
fn init_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var("STROBOSIM_WORKERS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .map_err(|_| format!("STROBOSIM_WORKERS must be a positive integer, got `{raw}`"))?;
    if n == 0 {
        return Err("STROBOSIM_WORKERS must be a positive integer, got `0`".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("cannot size worker pool: {e}"))
}
