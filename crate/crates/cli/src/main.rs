use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conepdo_cli::{load_config, run_scenario, CliError, RunOptions, ScenarioKind, SCHEMA_REFERENCE, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "conepdo", version, about = "Spectral solvers for model pseudo-differential equations on cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario named in the config.
    Run(RunArgs),
    /// Run the config's convergence sweep and write the CSV table.
    Sweep(RunArgs),
    /// Check the support conditions of the config's factorization.
    ValidateFactor(RunArgs),
    /// Print the schema version and the config reference.
    Schema,
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    /// Directory for report.json, sweep.csv and field dumps.
    #[arg(long, default_value = ".")]
    output: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Leave the timestamp out of the report.
    #[arg(long)]
    no_timestamp: bool,
}

fn execute(args: RunArgs, force: Option<ScenarioKind>) -> Result<i32, CliError> {
    let mut cfg = load_config(&args.config)?;
    match force {
        Some(ScenarioKind::ConvergenceSweep) => {
            cfg.require(&cfg.sweep, "sweep")?;
            cfg.scenario = ScenarioKind::ConvergenceSweep;
        }
        Some(kind) => cfg.scenario = kind,
        None => {}
    }
    let opts = RunOptions {
        output_dir: args.output,
        seed: args.seed,
        threads: args.threads,
        timestamp: !args.no_timestamp,
    };
    let outcome = run_scenario(cfg, &opts)?;
    println!("report: {}", outcome.report_path.display());
    if let Some(p) = &outcome.csv_path {
        println!("table: {}", p.display());
    }
    for f in &outcome.failures {
        eprintln!("tolerance failure: {f}");
    }
    println!("{}", if outcome.pass { "PASS" } else { "FAIL" });
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => execute(a, None),
        Command::Sweep(a) => execute(a, Some(ScenarioKind::ConvergenceSweep)),
        Command::ValidateFactor(a) => execute(a, Some(ScenarioKind::ValidateFactor)),
        Command::Schema => {
            println!("conepdo scenario schema version {SCHEMA_VERSION}\n");
            print!("{SCHEMA_REFERENCE}");
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
