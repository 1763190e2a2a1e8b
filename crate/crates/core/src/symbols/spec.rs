use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{io, BlockPartition, Grid, SampledField, Side, SmoothnessVector};

/// Which tube a factor continues into: `Plus` for `A_≠`, `Minus` for `A_=`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorSide {
    #[default]
    Plus,
    Minus,
}

impl FactorSide {
    fn sign(self) -> f64 {
        match self {
            FactorSide::Plus => 1.0,
            FactorSide::Minus => -1.0,
        }
    }
}

fn one() -> f64 {
    1.0
}

/// Declarative description of a symbol `A(ξ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SymbolSpec {
    /// `∏_j (1 + |ξ_{K_j}|)^{γ_j}`.
    WeightPower { gamma: Vec<f64> },
    /// `(ξ_axis + i·shift)^power`.
    ShiftedAxis {
        axis: usize,
        shift: f64,
        #[serde(default = "one")]
        power: f64,
    },
    /// `∏_j (ξ_{k_j} ± i(1 + |ξ'_{K_j}|))^{γ_j}` on the principal branch,
    /// `+` for the plus side.
    HalfspaceEskinFactor {
        gamma: Vec<f64>,
        #[serde(default)]
        side: FactorSide,
    },
    /// `(a²(ξ₂ ± i)² − ξ₁²)^p` on a two-axis block, `p` an integer.
    Cone2dLorentzFactor {
        block: usize,
        a: f64,
        p: i32,
        #[serde(default)]
        side: FactorSide,
    },
    /// Pointwise product of the factors.
    Product { factors: Vec<SymbolSpec> },
    /// Frequency-side samples read from a field container.
    UserGrid { path: PathBuf },
    /// `1 / A(ξ)`.
    Reciprocal { of: Box<SymbolSpec> },
}

fn pow(z: Complex64, e: f64) -> Complex64 {
    if e == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
        z.powi(e as i32)
    } else {
        z.powf(e)
    }
}

impl SymbolSpec {
    /// The symbol `1/A`.
    pub fn reciprocal(&self) -> SymbolSpec {
        match self {
            SymbolSpec::WeightPower { gamma } => SymbolSpec::WeightPower { gamma: gamma.iter().map(|g| -g).collect() },
            SymbolSpec::ShiftedAxis { axis, shift, power } => {
                SymbolSpec::ShiftedAxis { axis: *axis, shift: *shift, power: -power }
            }
            SymbolSpec::HalfspaceEskinFactor { gamma, side } => SymbolSpec::HalfspaceEskinFactor {
                gamma: gamma.iter().map(|g| -g).collect(),
                side: *side,
            },
            SymbolSpec::Cone2dLorentzFactor { block, a, p, side } => {
                SymbolSpec::Cone2dLorentzFactor { block: *block, a: *a, p: -p, side: *side }
            }
            SymbolSpec::Product { factors } => SymbolSpec::Product { factors: factors.iter().map(Self::reciprocal).collect() },
            SymbolSpec::Reciprocal { of } => (**of).clone(),
            SymbolSpec::UserGrid { .. } => SymbolSpec::Reciprocal { of: Box::new(self.clone()) },
        }
    }

    /// Nominal growth order per block, when the kind determines one.
    pub fn nominal_order(&self, partition: &BlockPartition) -> Option<SmoothnessVector> {
        let n = partition.n_blocks();
        match self {
            SymbolSpec::WeightPower { gamma } | SymbolSpec::HalfspaceEskinFactor { gamma, .. } => {
                Some(SmoothnessVector::new(gamma.clone()))
            }
            SymbolSpec::ShiftedAxis { axis, power, .. } => {
                let mut o = SmoothnessVector::zeros(n);
                o.0[partition.block_of_axis(*axis)?] = *power;
                Some(o)
            }
            SymbolSpec::Cone2dLorentzFactor { block, p, .. } => {
                let mut o = SmoothnessVector::zeros(n);
                *o.0.get_mut(*block)? = 2.0 * *p as f64;
                Some(o)
            }
            SymbolSpec::Product { factors } => factors
                .iter()
                .try_fold(SmoothnessVector::zeros(n), |acc, f| Some(&acc + &f.nominal_order(partition)?)),
            SymbolSpec::Reciprocal { of } => Some(-&of.nominal_order(partition)?),
            SymbolSpec::UserGrid { .. } => None,
        }
    }

    fn validate(&self, grid: &Grid) -> Result<()> {
        let partition = grid.partition();
        let n = partition.n_blocks();
        match self {
            SymbolSpec::WeightPower { gamma } | SymbolSpec::HalfspaceEskinFactor { gamma, .. } => {
                if gamma.len() != n {
                    return Err(Error::Symbol(format!("gamma has {} entries for {n} blocks", gamma.len())));
                }
            }
            SymbolSpec::ShiftedAxis { axis, .. } => grid.check_axis(*axis)?,
            SymbolSpec::Cone2dLorentzFactor { block, a, .. } => {
                if *block >= n || partition.block_size(*block) != 2 {
                    return Err(Error::Symbol(format!("block {block} is not a two-axis block")));
                }
                if !(a.is_finite() && *a > 0.0) {
                    return Err(Error::Symbol(format!("Lorentz slope {a} must be positive")));
                }
            }
            SymbolSpec::Product { .. } | SymbolSpec::UserGrid { .. } | SymbolSpec::Reciprocal { .. } => {}
        }
        Ok(())
    }
}

/// Samples `spec` on the frequency grid.
pub fn eval_symbol(spec: &SymbolSpec, grid: &Grid) -> Result<SampledField> {
    spec.validate(grid)?;
    let partition = grid.partition();
    Ok(match spec {
        SymbolSpec::WeightPower { gamma } => crate::lattice::weight(grid, &SmoothnessVector::new(gamma.clone()))?,
        SymbolSpec::ShiftedAxis { axis, shift, power } => SampledField::from_fn(grid, Side::Frequency, |xi| {
            pow(Complex64::new(xi[*axis], *shift), *power)
        }),
        SymbolSpec::HalfspaceEskinFactor { gamma, side } => {
            let sgn = side.sign();
            SampledField::from_fn(grid, Side::Frequency, |xi| {
                let mut v = Complex64::new(1.0, 0.0);
                for (j, &g) in gamma.iter().enumerate() {
                    if g == 0.0 {
                        continue;
                    }
                    let block = partition.block(j);
                    let (last, rest) = block.split_last().expect("nonempty");
                    let r: f64 = rest.iter().map(|&a| xi[a] * xi[a]).sum::<f64>().sqrt();
                    v *= pow(Complex64::new(xi[*last], sgn * (1.0 + r)), g);
                }
                v
            })
        }
        SymbolSpec::Cone2dLorentzFactor { block, a, p, side } => {
            let axes = partition.block(*block);
            let (t, n) = (axes[0], axes[1]);
            let sgn = side.sign();
            SampledField::from_fn(grid, Side::Frequency, |xi| {
                let z = Complex64::new(xi[n], sgn);
                (z * z * (a * a) - xi[t] * xi[t]).powi(*p)
            })
        }
        SymbolSpec::Product { factors } => {
            let mut acc = SampledField::from_fn(grid, Side::Frequency, |_| Complex64::new(1.0, 0.0));
            for f in factors {
                acc = acc.mul(&eval_symbol(f, grid)?)?;
            }
            acc
        }
        SymbolSpec::UserGrid { path } => {
            let f = io::read_field(path)?;
            f.expect_side(Side::Frequency)?;
            if f.grid() != grid {
                return Err(Error::GridMismatch);
            }
            f
        }
        SymbolSpec::Reciprocal { of } => eval_symbol(of, grid)?.map(|v| v.inv()),
    })
}
