//! Convergence sweeps over nested grid sizes.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ScenarioConfig, ScenarioKind, SweepConfig};
use crate::error::{CliError, Result};
use crate::scenarios::{evaluate, ScenarioResult};

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub counts: Vec<usize>,
    pub metric: f64,
    pub support_leak: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub apriori_ratio: Option<f64>,
    /// Observed order against the previous row.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub target: ScenarioKind,
    /// Name of the metric column: `route_distance`, `solution_error` or `residual`.
    pub metric: &'static str,
    pub rows: Vec<SweepRow>,
    /// Mean of the per-step orders.
    pub observed_order: f64,
}

/// Checks that there are at least two sizes and each divides the next.
pub fn check_nested(sweep: &SweepConfig, dims: usize) -> Result<()> {
    if sweep.counts.len() < 2 {
        return Err(CliError::Config("a sweep needs at least two grid sizes".into()));
    }
    for c in &sweep.counts {
        if c.len() != dims {
            return Err(CliError::Config(format!("sweep size {c:?} does not have {dims} axes")));
        }
    }
    for w in sweep.counts.windows(2) {
        let nested = w[0].iter().zip(&w[1]).all(|(a, b)| b > a && b % a == 0);
        if !nested {
            return Err(CliError::Config(format!("sweep sizes {:?} and {:?} are not nested", w[0], w[1])));
        }
    }
    Ok(())
}

pub fn run_sweep(cfg: &ScenarioConfig) -> Result<(SweepResult, Vec<String>)> {
    let sweep = cfg.require(&cfg.sweep, "sweep")?;
    check_nested(sweep, cfg.grid.counts.len())?;
    if !matches!(sweep.target, ScenarioKind::ProjectCompare | ScenarioKind::SolveT1) {
        return Err(CliError::Config("sweep.target must be project-compare or solve-t1".into()));
    }
    let mut inner = cfg.clone();
    inner.scenario = sweep.target;
    inner.sweep = None;

    let evaluated: Vec<(f64, f64, Option<f64>, &'static str)> = sweep
        .counts
        .par_iter()
        .map(|counts| {
            let grid = cfg.grid.build_with(counts)?;
            Ok(match evaluate(&inner, &grid)?.result {
                ScenarioResult::ProjectCompare(r) => {
                    (r.max_route_distance, r.support_leak.iter().copied().fold(0.0, f64::max), None, "route_distance")
                }
                ScenarioResult::Solve(r) => match r.max_solution_error {
                    Some(e) => (e, r.max_support_leak, Some(r.apriori_ratio_max), "solution_error"),
                    None => (r.max_residual, r.max_support_leak, Some(r.apriori_ratio_max), "residual"),
                },
                _ => unreachable!("target checked above"),
            })
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<SweepRow> = Vec::with_capacity(evaluated.len());
    for (i, (metric, leak, ratio, _)) in evaluated.iter().enumerate() {
        let order = (i > 0).then(|| {
            let prev = &sweep.counts[i - 1];
            let cur = &sweep.counts[i];
            let refine: f64 = cur.iter().zip(prev).map(|(a, b)| (*a as f64 / *b as f64).ln()).sum::<f64>() / cur.len() as f64;
            (evaluated[i - 1].0 / metric).ln() / refine
        });
        rows.push(SweepRow { counts: sweep.counts[i].clone(), metric: *metric, support_leak: *leak, apriori_ratio: *ratio, order });
    }
    let orders: Vec<f64> = rows.iter().filter_map(|r| r.order).collect();
    let observed_order = orders.iter().sum::<f64>() / orders.len() as f64;

    let mut failures = Vec::new();
    for w in rows.windows(2) {
        if w[1].metric.is_nan() || w[1].metric >= w[0].metric {
            failures.push(format!("metric does not decrease from {:?} to {:?}", w[0].counts, w[1].counts));
        }
    }
    if let Some(min) = sweep.min_order {
        if observed_order.is_nan() || observed_order < min {
            failures.push(format!("observed order {observed_order:.3} is below {min}"));
        }
    }
    Ok((SweepResult { target: sweep.target, metric: evaluated[0].3, rows, observed_order }, failures))
}

fn size_label(counts: &[usize]) -> String {
    counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("x")
}

pub fn write_csv(path: &Path, result: &SweepResult) -> Result<()> {
    let wrap = |source| CliError::Csv { path: path.into(), source };
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    w.write_record(["size", result.metric, "support_leak", "apriori_ratio", "order"]).map_err(wrap)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &result.rows {
        w.write_record([
            size_label(&r.counts),
            r.metric.to_string(),
            r.support_leak.to_string(),
            opt(r.apriori_ratio),
            opt(r.order),
        ])
        .map_err(wrap)?;
    }
    w.write_record(["observed_order".to_owned(), result.observed_order.to_string(), String::new(), String::new(), String::new()])
        .map_err(wrap)?;
    w.flush().map_err(|source| CliError::Io { path: path.into(), source })
}
