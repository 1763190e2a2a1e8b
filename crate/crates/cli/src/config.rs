//! Scenario configuration. The reference for every key lives in
//! `docs/schema.md` and is printed by `conepdo schema`.

use std::path::{Path, PathBuf};

use conepdo::cones::ProjectorMode;
use conepdo::fixtures::EnvelopeParams;
use conepdo::{BlockPartition, ConeSpec, Grid, SymbolSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    ProjectCompare,
    SolveT1,
    SolveT2,
    ValidateFactor,
    FullSpace,
    ConvergenceSweep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub scenario: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeSpec>,
    #[serde(default)]
    pub projector_mode: ProjectorMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataConfig>,
    /// Treat `data` as an exact solution `u₀` and solve with `v = P_C(A u₀)`.
    #[serde(default)]
    pub manufactured: bool,
    /// Total symbol for `full-space`, or the reference product for `validate-factor`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<FactorizationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default)]
    pub extension: ExtensionConfig,
    /// Second extension whose solution is compared against the first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare_extension: Option<ExtensionConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layers: Vec<LayerConfig>,
    /// Number of independent layer draws in `solve-t2`.
    #[serde(default = "one")]
    pub realizations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub outputs: OutputConfig,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Zero-based axis indices per block.
    pub blocks: Vec<Vec<usize>>,
    pub extents: Vec<f64>,
    pub counts: Vec<usize>,
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        self.build_with(&self.counts)
    }

    pub fn build_with(&self, counts: &[usize]) -> Result<Grid> {
        let partition = BlockPartition::new(self.blocks.clone())?;
        Ok(conepdo::make_grid(partition, self.extents.clone(), counts.to_vec())?)
    }
}

/// Input field of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataConfig {
    /// Seeded ensemble of Gaussian-envelope plane-wave mixtures.
    RandomEnvelope {
        #[serde(default = "one")]
        members: usize,
        #[serde(default)]
        envelope: EnvelopeParams,
    },
    /// `exp(−|x − center|² / width²)`.
    Gaussian { center: Vec<f64>, width: f64 },
    /// A space-side field container.
    File { path: PathBuf },
}

impl DataConfig {
    pub fn members(&self) -> usize {
        match self {
            DataConfig::RandomEnvelope { members, .. } => *members,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationConfig {
    pub plus: SymbolSpec,
    pub minus: SymbolSpec,
    /// Factorization index æ.
    pub index: Vec<f64>,
    /// Total order α.
    pub order: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExtensionConfig {
    #[default]
    Zero,
    Taper { width: f64 },
    User { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerConfig {
    pub l: Vec<u32>,
    pub density: DensityConfig,
}

/// Frequency-side density `c̃_L` on the layer subgrid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensityConfig {
    /// `amplitude · exp(−|ξ' − center|² / width²)`.
    Gaussian {
        center: Vec<f64>,
        width: f64,
        #[serde(default = "unit")]
        amplitude: [f64; 2],
    },
    /// Seeded random envelope drawn afresh for every realization.
    RandomEnvelope {
        #[serde(default)]
        envelope: EnvelopeParams,
    },
}

fn unit() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub target: ScenarioKind,
    /// Nested grid sizes, coarse to fine.
    pub counts: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub route_distance: f64,
    pub residual: f64,
    pub solution_error: f64,
    pub support_leak: f64,
    pub extension_distance: f64,
    pub homogeneous: f64,
    pub factor_leak: f64,
    pub full_space_residual: f64,
    pub apriori_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            route_distance: 5e-2,
            residual: 1e-3,
            solution_error: 1e-3,
            support_leak: 1e-2,
            extension_distance: 1e-3,
            homogeneous: 1e-3,
            factor_leak: conepdo::symbols::SUPPORT_TOL,
            full_space_residual: 1e-12,
            apriori_slack: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub report: String,
    pub sweep_csv: String,
    /// Write the first member's result field as a container.
    pub dump_fields: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { report: "report.json".into(), sweep_csv: "sweep.csv".into(), dump_fields: false }
    }
}

/// Parses a config, reporting the path of the offending key on failure.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "schema_version {} is not supported (expected {SCHEMA_VERSION})",
            cfg.schema_version
        )));
    }
    Ok(cfg)
}

/// Reads a config file; relative paths inside it resolve against its directory.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let mut cfg = parse_config(&text)?;
    if let Some(dir) = path.parent() {
        cfg.resolve_paths(dir);
    }
    Ok(cfg)
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

fn resolve_symbol(base: &Path, s: &mut SymbolSpec) {
    match s {
        SymbolSpec::UserGrid { path } => resolve(base, path),
        SymbolSpec::Product { factors } => factors.iter_mut().for_each(|f| resolve_symbol(base, f)),
        SymbolSpec::Reciprocal { of } => resolve_symbol(base, of),
        _ => {}
    }
}

impl ScenarioConfig {
    pub fn resolve_paths(&mut self, base: &Path) {
        if let Some(DataConfig::File { path }) = &mut self.data {
            resolve(base, path);
        }
        for ext in std::iter::once(&mut self.extension).chain(self.compare_extension.as_mut()) {
            if let ExtensionConfig::User { path } = ext {
                resolve(base, path);
            }
        }
        if let Some(s) = &mut self.symbol {
            resolve_symbol(base, s);
        }
        if let Some(f) = &mut self.factorization {
            resolve_symbol(base, &mut f.plus);
            resolve_symbol(base, &mut f.minus);
        }
    }

    /// Whether any fixture draws random numbers.
    pub fn is_randomized(&self) -> bool {
        matches!(self.data, Some(DataConfig::RandomEnvelope { .. }))
            || self.layers.iter().any(|l| matches!(l.density, DensityConfig::RandomEnvelope { .. }))
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| CliError::Config("`seed` is required when a fixture is randomized".into()))
    }

    pub fn require<'a, T>(&self, value: &'a Option<T>, key: &str) -> Result<&'a T> {
        value.as_ref().ok_or_else(|| {
            CliError::Config(format!("scenario `{}` requires the key `{key}`", self.scenario_name()))
        })
    }

    pub fn scenario_name(&self) -> String {
        serde_json::to_value(self.scenario)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }
}
