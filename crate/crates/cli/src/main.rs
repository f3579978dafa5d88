use std::path::PathBuf;
use std::process::ExitCode;

use alphapred::divergence::{quantum_alpha_divergence, Alpha};
use alphapred::experiments::{
    parse_config_with, parse_state, run, sweep, write_csv, write_csv_file, Overrides, RunOptions,
    RunOutcome, SweepKey, EXIT_OK, EXIT_USAGE,
};
use alphapred::Error;
use clap::{Args, Parser, Subcommand};

/// Certify Bayes optimality of the generalized predictive density operator.
#[derive(Debug, Parser)]
#[command(name = "alphapred", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every check of a scenario and write the result rows as CSV.
    #[command(alias = "run")]
    Verify {
        config: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Repeat the verification for each value of one key (alpha, N or K).
    Sweep {
        config: PathBuf,
        #[arg(long)]
        vary: String,
        /// Comma-separated values.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        values: Vec<f64>,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Print D^(alpha)(a || b) for two density matrices stored as `re,im` pairs.
    Divergence {
        state_a: PathBuf,
        state_b: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
}

#[derive(Debug, Args)]
struct RunFlags {
    /// Seed for the perturbation family.
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; defaults to the config's `output`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Test hook: replace the predictive operator by a deliberately worse one.
    #[arg(long)]
    inject_suboptimal_bayes: bool,
    /// Write 0 for wall times so output is byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
}

impl RunFlags {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            max_dim: self.max_dim,
            output: self.out.clone(),
        }
    }

    fn options(&self) -> RunOptions {
        RunOptions {
            inject_suboptimal_bayes: self.inject_suboptimal_bayes,
            timing: !self.no_timing,
            ..RunOptions::default()
        }
    }
}

fn report(outcome: &RunOutcome, output: Option<&PathBuf>) -> Result<i32, Error> {
    match output {
        Some(path) => write_csv_file(&outcome.rows, path)?,
        None => write_csv(&outcome.rows, std::io::stdout().lock())?,
    }
    for v in outcome.violations() {
        eprintln!("error: {}", v.to_error());
    }
    for (id, r) in &outcome.reports {
        if !r.interpretable() {
            eprintln!("note: {id}: alpha = {} lies outside |alpha| <= 3", r.alpha);
        }
    }
    if outcome.passed() {
        eprintln!(
            "ok: {} alpha blocks, {} rows, all checks passed",
            outcome.reports.len(),
            outcome.rows.len()
        );
    }
    Ok(outcome.exit_code())
}

fn execute(command: Command) -> Result<i32, Error> {
    match command {
        Command::Verify { config, flags } => {
            let config = parse_config_with(&config, &flags.overrides())?;
            let outcome = run(&config, &flags.options())?;
            report(&outcome, config.output.as_ref())
        }
        Command::Sweep {
            config,
            vary,
            values,
            flags,
        } => {
            let key: SweepKey = vary.parse()?;
            let config = parse_config_with(&config, &flags.overrides())?;
            let outcome = sweep(&config, key, &values, &flags.options())?;
            report(&outcome, config.output.as_ref())
        }
        Command::Divergence {
            state_a,
            state_b,
            alpha,
        } => {
            let a = parse_state(&state_a)?;
            let b = parse_state(&state_b)?;
            let d = quantum_alpha_divergence(&a, &b, Alpha::new(alpha)?)?;
            println!("{d:.16e}");
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
