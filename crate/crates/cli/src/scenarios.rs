//! Scenario execution. Every ensemble member is computed independently from
//! its own seed, so results do not depend on the thread count.

use std::path::Path;

use conepdo::cones::{bochner_project, interior_indicator, project_space, projector_fourier};
use conepdo::fixtures::{member_seed, random_envelope, rng, EnvelopeParams};
use conepdo::lattice::{io, transform};
use conepdo::solver::{general_solve, solve_cone, support_leak, LayerField};
use conepdo::symbols::{apply_pdo, check_ellipticity, solve_full_space, FactorizationReport, ELLIPTICITY_TOL};
use conepdo::{
    BlockPartition, Complex64, ConeRestricted, ConeSpec, Direction, ExtensionMode, FactorizedSymbol,
    GeneralSolutionParams, Grid, IndexDecomposition, SampledField, Side, SmoothnessVector, SolveReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{DataConfig, DensityConfig, ExtensionConfig, ScenarioConfig, ScenarioKind};
use crate::error::{CliError, Result};

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ScenarioResult {
    ProjectCompare(ProjectCompareResult),
    Solve(SolveResult),
    General(GeneralResult),
    Factor(FactorizationReport),
    FullSpace(FullSpaceResult),
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectCompareResult {
    pub route_distance: Vec<f64>,
    /// Mass fraction of the Fourier-route projection outside the closed cone.
    pub support_leak: Vec<f64>,
    pub max_route_distance: f64,
    pub mean_route_distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveMember {
    #[serde(flatten)]
    pub report: SolveReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_distance: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub decomposition: IndexDecomposition,
    pub members: Vec<SolveMember>,
    pub max_residual: f64,
    pub max_support_leak: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_solution_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_extension_distance: Option<f64>,
    pub apriori_ratio_min: f64,
    pub apriori_ratio_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralResult {
    pub decomposition: IndexDecomposition,
    pub realizations: Vec<SolveMember>,
    /// `‖P_C A(u_r − u_0)‖ / ‖u_r − u_0‖` for `r ≥ 1`, on the open cone.
    pub homogeneous_residual: Vec<f64>,
    pub max_residual: f64,
    pub max_homogeneous_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FullSpaceMember {
    pub ratio: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FullSpaceResult {
    pub c1: f64,
    pub c2: f64,
    pub elliptic: bool,
    pub members: Vec<FullSpaceMember>,
    pub max_ratio: f64,
    pub max_residual: f64,
}

/// Result plus the tolerance checks that failed and an optional field to dump.
pub struct Evaluated {
    pub result: ScenarioResult,
    pub failures: Vec<String>,
    pub field: Option<(String, SampledField)>,
}

fn max(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn check(failures: &mut Vec<String>, what: &str, value: f64, tol: f64) {
    if value.is_nan() || value > tol {
        failures.push(format!("{what} {value:.3e} exceeds {tol:.1e}"));
    }
}

pub fn evaluate(cfg: &ScenarioConfig, grid: &Grid) -> Result<Evaluated> {
    match cfg.scenario {
        ScenarioKind::ProjectCompare => project_compare(cfg, grid),
        ScenarioKind::SolveT1 => solve_t1(cfg, grid),
        ScenarioKind::SolveT2 => solve_t2(cfg, grid),
        ScenarioKind::ValidateFactor => validate_factor(cfg, grid),
        ScenarioKind::FullSpace => full_space(cfg, grid),
        ScenarioKind::ConvergenceSweep => Err(CliError::Config("use the sweep runner for convergence-sweep".into())),
    }
}

fn cone(cfg: &ScenarioConfig, grid: &Grid) -> Result<ConeSpec> {
    let c = cfg.require(&cfg.cone, "cone")?.clone();
    c.validate(grid.partition())?;
    Ok(c)
}

fn vector(cfg: &ScenarioConfig, v: &Option<Vec<f64>>, key: &str, grid: &Grid) -> Result<SmoothnessVector> {
    let s = SmoothnessVector::new(cfg.require(v, key)?.clone());
    s.check(grid.partition(), key)?;
    Ok(s)
}

fn factorization(cfg: &ScenarioConfig, grid: &Grid) -> Result<FactorizedSymbol> {
    let f = cfg.require(&cfg.factorization, "factorization")?;
    let fac = FactorizedSymbol::new(
        f.plus.clone(),
        f.minus.clone(),
        SmoothnessVector::new(f.index.clone()),
        SmoothnessVector::new(f.order.clone()),
        cone(cfg, grid)?,
    );
    fac.check(grid)?;
    Ok(fac)
}

fn extension(ext: &ExtensionConfig) -> Result<ExtensionMode> {
    Ok(match ext {
        ExtensionConfig::Zero => ExtensionMode::Zero,
        ExtensionConfig::Taper { width } => ExtensionMode::Taper { width: *width },
        ExtensionConfig::User { path } => ExtensionMode::User(io::read_field(path)?),
    })
}

/// Space-side input field of ensemble member `i`.
fn input_field(cfg: &ScenarioConfig, grid: &Grid, i: usize) -> Result<SampledField> {
    match cfg.require(&cfg.data, "data")? {
        DataConfig::RandomEnvelope { envelope, .. } => {
            Ok(random_envelope(grid, envelope, &mut rng(member_seed(cfg.seed()?, i as u64))))
        }
        DataConfig::Gaussian { center, width } => {
            if center.len() != grid.dims() {
                return Err(CliError::Config(format!("data.center has {} entries for {} axes", center.len(), grid.dims())));
            }
            Ok(SampledField::from_fn(grid, Side::Space, |x| {
                let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c).powi(2)).sum();
                Complex64::from((-r2 / (width * width)).exp())
            }))
        }
        DataConfig::File { path } => {
            let f = io::read_field(path)?;
            if f.grid() != grid {
                return Err(CliError::Config(format!("{} does not match the configured grid", path.display())));
            }
            f.expect_side(Side::Space)?;
            Ok(f)
        }
    }
}

fn members(cfg: &ScenarioConfig) -> Result<usize> {
    let n = cfg.require(&cfg.data, "data")?.members();
    if n == 0 {
        return Err(CliError::Config("data.members must be at least 1".into()));
    }
    Ok(n)
}

/// The right-hand side and, for manufactured runs, the exact solution.
fn right_hand_side(
    cfg: &ScenarioConfig,
    fac: &FactorizedSymbol,
    f: SampledField,
) -> Result<(ConeRestricted, Option<SampledField>)> {
    if cfg.manufactured {
        let u0 = project_space(&f, &fac.cone)?;
        let au = apply_pdo(&fac.eval(f.grid())?, &u0)?;
        Ok((ConeRestricted::new(&au, &fac.cone)?, Some(u0)))
    } else {
        Ok((ConeRestricted::new(&f, &fac.cone)?, None))
    }
}

fn project_compare(cfg: &ScenarioConfig, grid: &Grid) -> Result<Evaluated> {
    let cone = cone(cfg, grid)?;
    let rows: Vec<(f64, f64, Option<SampledField>)> = (0..members(cfg)?)
        .into_par_iter()
        .map(|i| {
            let ut = transform(&input_field(cfg, grid, i)?, Direction::Forward)?;
            let routed = projector_fourier(&ut, &cone, cfg.projector_mode)?;
            let oracle = bochner_project(&ut, &cone)?;
            let space = transform(&routed, Direction::Inverse)?;
            let leak = support_leak(&space, &cone)?;
            Ok((routed.rel_distance(&oracle)?, leak, (i == 0).then_some(space)))
        })
        .collect::<Result<_>>()?;
    let d: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let result = ProjectCompareResult {
        max_route_distance: max(d.iter().copied()),
        mean_route_distance: d.iter().sum::<f64>() / d.len() as f64,
        support_leak: rows.iter().map(|r| r.1).collect(),
        route_distance: d,
    };
    let mut failures = Vec::new();
    check(&mut failures, "route distance", result.max_route_distance, cfg.tolerances.route_distance);
    let field = rows.into_iter().next().and_then(|r| r.2).map(|f| ("projected".to_owned(), f));
    Ok(Evaluated { result: ScenarioResult::ProjectCompare(result), failures, field })
}

fn solve_t1(cfg: &ScenarioConfig, grid: &Grid) -> Result<Evaluated> {
    let fac = factorization(cfg, grid)?;
    let s = vector(cfg, &cfg.s, "s", grid)?;
    let decomposition = conepdo::symbols::decompose_index(&s, &fac.index)?;
    let ext = extension(&cfg.extension)?;
    let other = cfg.compare_extension.as_ref().map(extension).transpose()?;
    let rows: Vec<(SolveMember, SampledField)> = (0..members(cfg)?)
        .into_par_iter()
        .map(|i| {
            let (v, exact) = right_hand_side(cfg, &fac, input_field(cfg, grid, i)?)?;
            let (u, report) = solve_cone(&fac, &v, &s, &ext)?;
            let solution_error = exact.map(|u0| u.rel_distance(&u0)).transpose()?;
            let extension_distance = match &other {
                Some(e) => Some(solve_cone(&fac, &v, &s, e)?.0.rel_distance(&u)?),
                None => None,
            };
            Ok((SolveMember { report, solution_error, extension_distance }, u))
        })
        .collect::<Result<_>>()?;
    let m: Vec<&SolveMember> = rows.iter().map(|r| &r.0).collect();
    let opt_max = |f: fn(&SolveMember) -> Option<f64>| -> Option<f64> {
        m.iter().map(|x| f(x)).collect::<Option<Vec<f64>>>().map(max)
    };
    let result = SolveResult {
        decomposition,
        max_residual: max(m.iter().map(|x| x.report.residual_rel)),
        max_support_leak: max(m.iter().map(|x| x.report.support_leak)),
        max_solution_error: opt_max(|x| x.solution_error),
        max_extension_distance: opt_max(|x| x.extension_distance),
        apriori_ratio_min: m.iter().map(|x| x.report.apriori_ratio).fold(f64::INFINITY, f64::min),
        apriori_ratio_max: max(m.iter().map(|x| x.report.apriori_ratio)),
        members: m.into_iter().cloned().collect(),
    };
    let t = &cfg.tolerances;
    let mut failures = Vec::new();
    check(&mut failures, "residual", result.max_residual, t.residual);
    check(&mut failures, "support leak", result.max_support_leak, t.support_leak);
    if let Some(e) = result.max_solution_error {
        check(&mut failures, "solution error", e, t.solution_error);
    }
    if let Some(e) = result.max_extension_distance {
        check(&mut failures, "extension distance", e, t.extension_distance);
    }
    let field = rows.into_iter().next().map(|r| ("u".to_owned(), r.1));
    Ok(Evaluated { result: ScenarioResult::Solve(result), failures, field })
}

/// Layer subgrid with nodes at the frequencies `ξ'` of the kept axes, so a
/// space-side random field on it samples directly as a frequency density.
fn layer_density(grid: &Grid, n: &[u32], envelope: &EnvelopeParams, seed: u64) -> Result<LayerField> {
    let kept = LayerField::kept_axes(grid, n);
    let mut r = rng(seed);
    if kept.is_empty() {
        // A single complex amplitude: the envelope's value at the origin.
        let point = conepdo::make_grid(BlockPartition::singletons(1)?, vec![1.0], vec![2])?;
        let sample = random_envelope(&point, envelope, &mut r).values()[[1]];
        return Ok(LayerField::from_fn(grid, n, |_| sample));
    }
    let extents: Vec<f64> = kept
        .iter()
        .map(|&a| std::f64::consts::PI * grid.counts()[a] as f64 / (2.0 * grid.extents()[a]))
        .collect();
    let counts: Vec<usize> = kept.iter().map(|&a| grid.counts()[a]).collect();
    let sub = conepdo::make_grid(BlockPartition::singletons(kept.len())?, extents, counts)?;
    Ok(LayerField::from_values(grid, n, random_envelope(&sub, envelope, &mut r).into_values())?)
}

fn build_layers(
    cfg: &ScenarioConfig,
    grid: &Grid,
    base: &GeneralSolutionParams,
    realization: usize,
) -> Result<GeneralSolutionParams> {
    let n = base.decomposition.n.clone();
    let mut params = base.clone();
    for (k, layer) in cfg.layers.iter().enumerate() {
        let density = match &layer.density {
            DensityConfig::Gaussian { center, width, amplitude } => {
                let kept = LayerField::kept_axes(grid, &n);
                if center.len() != kept.len() {
                    return Err(CliError::Config(format!(
                        "layers[{k}].density.center has {} entries; the layer grid has {} axes",
                        center.len(),
                        kept.len()
                    )));
                }
                let amp = Complex64::new(amplitude[0], amplitude[1]);
                LayerField::from_fn(grid, &n, |xi| {
                    let r2: f64 = xi.iter().zip(center).map(|(a, c)| (a - c).powi(2)).sum();
                    amp * (-r2 / (width * width)).exp()
                })
            }
            DensityConfig::RandomEnvelope { envelope } => {
                let id = (realization * cfg.layers.len() + k) as u64;
                layer_density(grid, &n, envelope, member_seed(cfg.seed()?, id))?
            }
        };
        params = params.with_layer(layer.l.clone(), density)?;
    }
    Ok(params)
}

fn solve_t2(cfg: &ScenarioConfig, grid: &Grid) -> Result<Evaluated> {
    let fac = factorization(cfg, grid)?;
    let s = vector(cfg, &cfg.s, "s", grid)?;
    let base = GeneralSolutionParams::new(grid, &s, &fac.index)?;
    let ext = extension(&cfg.extension)?;
    if cfg.realizations == 0 {
        return Err(CliError::Config("realizations must be at least 1".into()));
    }
    let (v, _) = right_hand_side(cfg, &fac, input_field(cfg, grid, 0)?)?;
    let rows: Vec<(SolveReport, SampledField)> = (0..cfg.realizations)
        .into_par_iter()
        .map(|r| {
            let params = build_layers(cfg, grid, &base, r)?;
            let (u, report) = general_solve(&fac, &v, &s, &params, &ext)?;
            Ok((report, u))
        })
        .collect::<Result<_>>()?;
    let a = fac.eval(grid)?;
    let interior = interior_indicator(&fac.cone, grid)?;
    let homogeneous_residual: Vec<f64> = rows[1..]
        .par_iter()
        .map(|(_, u)| {
            let d = u.sub(&rows[0].1)?;
            let ad = apply_pdo(&a, &d)?.mul(&interior)?;
            let den = d.sum_sq();
            Ok(if den > 0.0 { (ad.sum_sq() / den).sqrt() } else { 0.0 })
        })
        .collect::<Result<_>>()?;
    let result = GeneralResult {
        decomposition: base.decomposition.clone(),
        max_residual: max(rows.iter().map(|r| r.0.residual_rel)),
        max_homogeneous_residual: max(homogeneous_residual.iter().copied()),
        homogeneous_residual,
        realizations: rows
            .iter()
            .map(|r| SolveMember { report: r.0.clone(), solution_error: None, extension_distance: None })
            .collect(),
    };
    let mut failures = Vec::new();
    check(&mut failures, "residual", result.max_residual, cfg.tolerances.residual);
    check(&mut failures, "homogeneous residual", result.max_homogeneous_residual, cfg.tolerances.homogeneous);
    let field = rows.into_iter().next().map(|r| ("u".to_owned(), r.1));
    Ok(Evaluated { result: ScenarioResult::General(result), failures, field })
}

fn validate_factor(cfg: &ScenarioConfig, grid: &Grid) -> Result<Evaluated> {
    let fac = factorization(cfg, grid)?;
    let report = fac.validate(grid, cfg.tolerances.factor_leak, cfg.symbol.as_ref())?;
    let mut failures = Vec::new();
    check(&mut failures, "plus factor leak", report.plus.leak, cfg.tolerances.factor_leak);
    check(&mut failures, "minus factor leak", report.minus.leak, cfg.tolerances.factor_leak);
    if let Some(c) = report.consistency {
        check(&mut failures, "factorization consistency", c, cfg.tolerances.full_space_residual);
    }
    Ok(Evaluated { result: ScenarioResult::Factor(report), failures, field: None })
}

fn full_space(cfg: &ScenarioConfig, grid: &Grid) -> Result<Evaluated> {
    let a = conepdo::symbols::eval_symbol(cfg.require(&cfg.symbol, "symbol")?, grid)?;
    let s = vector(cfg, &cfg.s, "s", grid)?;
    let alpha = vector(cfg, &cfg.alpha, "alpha", grid)?;
    let cert = check_ellipticity(&a, &alpha, ELLIPTICITY_TOL)?;
    let rows: Vec<(FullSpaceMember, SampledField)> = (0..members(cfg)?)
        .into_par_iter()
        .map(|i| {
            let v = input_field(cfg, grid, i)?;
            let sol = solve_full_space(&a, &v, &s, &alpha)?;
            let residual = apply_pdo(&a, &sol.u)?.rel_distance(&v)?;
            Ok((FullSpaceMember { ratio: sol.ratio, residual }, sol.u))
        })
        .collect::<Result<_>>()?;
    let result = FullSpaceResult {
        c1: cert.c1,
        c2: cert.c2,
        elliptic: cert.elliptic,
        max_ratio: max(rows.iter().map(|r| r.0.ratio)),
        max_residual: max(rows.iter().map(|r| r.0.residual)),
        members: rows.iter().map(|r| r.0.clone()).collect(),
    };
    let t = &cfg.tolerances;
    let mut failures = Vec::new();
    check(&mut failures, "residual", result.max_residual, t.full_space_residual);
    check(&mut failures, "a priori ratio", result.max_ratio, 1.0 / result.c1 + t.apriori_slack);
    let field = rows.into_iter().next().map(|r| ("u".to_owned(), r.1));
    Ok(Evaluated { result: ScenarioResult::FullSpace(result), failures, field })
}

pub fn dump_field(dir: &Path, name: &str, field: &SampledField) -> Result<()> {
    Ok(io::write_field(&dir.join(format!("{name}.cpdo")), field)?)
}
