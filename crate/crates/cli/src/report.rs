use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{ScenarioConfig, ScenarioKind, SCHEMA_VERSION};
use crate::error::{CliError, Result};
use crate::scenarios::{dump_field, evaluate, ScenarioResult};
use crate::sweep::{run_sweep, write_csv, SweepResult};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub output_dir: PathBuf,
    /// Overrides the config's seed.
    pub seed: Option<u64>,
    /// Worker threads; the rayon default when absent.
    pub threads: Option<usize>,
    /// Adds a `timestamp` field (seconds since the epoch) to the report.
    pub timestamp: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Results {
    Scenario(ScenarioResult),
    Sweep(SweepResult),
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub scenario: ScenarioKind,
    pub pass: bool,
    pub failures: Vec<String>,
    pub config: ScenarioConfig,
    pub results: Results,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    pub failures: Vec<String>,
    pub report_path: PathBuf,
    pub csv_path: Option<PathBuf>,
}

impl Outcome {
    /// 0 when every tolerance holds, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            3
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.into(), source }
}

/// Runs the configured scenario and writes its report (and sweep table).
pub fn run_scenario(mut cfg: ScenarioConfig, opts: &RunOptions) -> Result<Outcome> {
    if let Some(seed) = opts.seed {
        cfg.seed = Some(seed);
    }
    if cfg.is_randomized() {
        cfg.seed()?;
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    let dir = &opts.output_dir;
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut csv_path = None;
    let (results, failures) = pool.install(|| -> Result<_> {
        if cfg.scenario == ScenarioKind::ConvergenceSweep {
            let (res, failures) = run_sweep(&cfg)?;
            let path = dir.join(&cfg.outputs.sweep_csv);
            write_csv(&path, &res)?;
            csv_path = Some(path);
            Ok((Results::Sweep(res), failures))
        } else {
            let grid = cfg.grid.build()?;
            let ev = evaluate(&cfg, &grid)?;
            if cfg.outputs.dump_fields {
                if let Some((name, field)) = &ev.field {
                    dump_field(dir, name, field)?;
                }
            }
            Ok((Results::Scenario(ev.result), ev.failures))
        }
    })?;

    let timestamp = opts
        .timestamp
        .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool: format!("conepdo {}", env!("CARGO_PKG_VERSION")),
        timestamp,
        scenario: cfg.scenario,
        pass: failures.is_empty(),
        failures: failures.clone(),
        config: cfg.clone(),
        results,
    };
    let report_path = dir.join(&cfg.outputs.report);
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Config(e.to_string()))?;
    text.push('\n');
    std::fs::write(&report_path, text).map_err(io_err(&report_path))?;
    Ok(Outcome { pass: failures.is_empty(), failures, report_path, csv_path })
}
