use ndarray::Dimension;
use num_complex::Complex64;
use serde::Serialize;

use crate::cones::{ConeSpec, Orientation};
use crate::error::{Error, Result};
use crate::lattice::{transform, BlockPartition, Direction, Grid, SampledField, Side, SmoothnessVector};

use super::{eval_symbol, FactorSide, SymbolSpec};

/// Default leak tolerance for [`validate_factor_support`].
pub const SUPPORT_TOL: f64 = 1e-3;

/// Outcome of the support test for one factor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportReport {
    /// Fraction of `Σ|k|²` on nodes outside the (reflected) closed cone,
    /// where `k = F^{-1}(1/factor)`.
    pub leak: f64,
    pub pass: bool,
    /// Whether the Gaussian frequency mollifier was applied.
    pub mollified: bool,
}

/// Support form of the tube-analyticity condition.
///
/// The inverse transform of a plus factor's reciprocal must live in `C̄`, a
/// minus factor's in `−C̄`. Reciprocals that grow toward the Nyquist shell are
/// first multiplied by `∏ exp(−½(ξ_i/σ_i)²)` with `σ_i` a quarter of the
/// Nyquist frequency; decaying or bounded reciprocals are used as they are.
pub fn validate_factor_support(factor: &SampledField, cone: &ConeSpec, side: FactorSide, tol: f64) -> Result<SupportReport> {
    factor.expect_side(Side::Frequency)?;
    let grid = factor.grid();
    for (idx, v) in factor.values().indexed_iter() {
        if v.norm() == 0.0 || !v.is_finite() {
            return Err(Error::ZeroFactor { node: idx.slice().to_vec() });
        }
    }
    let mut recip = factor.map(|v| v.inv());

    let center: Vec<usize> = grid.counts().iter().map(|m| m / 2).collect();
    let at_origin = recip.values()[center.as_slice()].norm();
    let shell_max = recip
        .values()
        .indexed_iter()
        .filter(|(idx, _)| idx.slice().contains(&0))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    let mollified = shell_max > at_origin * (1.0 + 1e-12);
    if mollified {
        let sigma: Vec<f64> = (0..grid.dims())
            .map(|i| std::f64::consts::PI / grid.spacing(i) / 4.0)
            .collect();
        recip.scale_with(|_, xi| {
            let e: f64 = xi.iter().zip(&sigma).map(|(x, s)| (x / s).powi(2)).sum();
            Complex64::from((-0.5 * e).exp())
        });
    }

    let kernel = transform(&recip, Direction::Inverse)?;
    let orientation = match side {
        FactorSide::Plus => Orientation::Direct,
        FactorSide::Minus => Orientation::Reflected,
    };
    let mask = cone.mask(grid, false, orientation)?;
    let (mut outside, mut total) = (0.0, 0.0);
    for (v, &inside) in kernel.values().iter().zip(mask.iter()) {
        let e = v.norm_sqr();
        total += e;
        if !inside {
            outside += e;
        }
    }
    let leak = if total > 0.0 { outside / total } else { 0.0 };
    Ok(SupportReport { leak, pass: leak <= tol, mollified })
}

/// Wave factorization `A = A_≠ A_=` of index `æ` for the cone `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizedSymbol {
    /// `A_≠`, analytic in the tube over `*C`, of order `æ`.
    pub plus: SymbolSpec,
    /// `A_=`, analytic in the tube over `−*C`, of order `α − æ`.
    pub minus: SymbolSpec,
    /// Factorization index `æ`.
    pub index: SmoothnessVector,
    /// Total order `α`.
    pub order: SmoothnessVector,
    pub cone: ConeSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub plus: SupportReport,
    pub minus: SupportReport,
    /// Max relative deviation of `A_≠ A_=` from the total symbol, if one was given.
    pub consistency: Option<f64>,
}

impl FactorizationReport {
    pub fn pass(&self) -> bool {
        self.plus.pass && self.minus.pass
    }
}

impl FactorizedSymbol {
    pub fn new(
        plus: SymbolSpec,
        minus: SymbolSpec,
        index: SmoothnessVector,
        order: SmoothnessVector,
        cone: ConeSpec,
    ) -> Self {
        Self { plus, minus, index, order, cone }
    }

    /// Half-space Eskin family: `A_≠ = ∏(ξ_k + i(1+|ξ'|))^{κ_j}`,
    /// `A_= = ∏(ξ_k − i(1+|ξ'|))^{β_j}`, index `κ`, order `κ + β`.
    pub fn eskin_halfspace(partition: &BlockPartition, kappa: Vec<f64>, beta: Vec<f64>) -> Self {
        let index = SmoothnessVector::new(kappa.clone());
        let order = &index + &SmoothnessVector::new(beta.clone());
        Self::new(
            SymbolSpec::HalfspaceEskinFactor { gamma: kappa, side: FactorSide::Plus },
            SymbolSpec::HalfspaceEskinFactor { gamma: beta, side: FactorSide::Minus },
            index,
            order,
            ConeSpec::halfspaces(partition),
        )
    }

    /// Shifted Lorentz family on one two-axis block with cone `x₂ > a|x₁|`.
    pub fn lorentz_cone2d(a: f64, p_plus: i32, p_minus: i32) -> Self {
        Self::new(
            SymbolSpec::Cone2dLorentzFactor { block: 0, a, p: p_plus, side: FactorSide::Plus },
            SymbolSpec::Cone2dLorentzFactor { block: 0, a, p: p_minus, side: FactorSide::Minus },
            SmoothnessVector::new(vec![2.0 * p_plus as f64]),
            SmoothnessVector::new(vec![2.0 * (p_plus + p_minus) as f64]),
            ConeSpec::new(vec![crate::cones::BlockCone::Cone2d { a }]),
        )
    }

    /// Checks vector shapes and the cone against the grid's partition.
    pub fn check(&self, grid: &Grid) -> Result<()> {
        let p = grid.partition();
        self.index.check(p, "factorization index")?;
        self.order.check(p, "symbol order")?;
        self.cone
            .validate(p)
            .map_err(|e| Error::Factorization(e.to_string()))
    }

    pub fn minus_order(&self) -> SmoothnessVector {
        &self.order - &self.index
    }

    pub fn eval_plus(&self, grid: &Grid) -> Result<SampledField> {
        eval_symbol(&self.plus, grid)
    }

    pub fn eval_minus(&self, grid: &Grid) -> Result<SampledField> {
        eval_symbol(&self.minus, grid)
    }

    /// `A = A_≠ A_=`.
    pub fn eval(&self, grid: &Grid) -> Result<SampledField> {
        self.eval_plus(grid)?.mul(&self.eval_minus(grid)?)
    }

    /// Max over nodes of `|A_≠A_= − A| / |A|`.
    pub fn consistency(&self, total: &SymbolSpec, grid: &Grid) -> Result<f64> {
        let prod = self.eval(grid)?;
        let a = eval_symbol(total, grid)?;
        Ok(prod
            .values()
            .iter()
            .zip(a.values().iter())
            .map(|(p, a)| (p - a).norm() / a.norm())
            .fold(0.0, f64::max))
    }

    /// Support test for both factors, plus an optional consistency check.
    pub fn validate(&self, grid: &Grid, tol: f64, total: Option<&SymbolSpec>) -> Result<FactorizationReport> {
        self.check(grid)?;
        Ok(FactorizationReport {
            plus: validate_factor_support(&self.eval_plus(grid)?, &self.cone, FactorSide::Plus, tol)?,
            minus: validate_factor_support(&self.eval_minus(grid)?, &self.cone, FactorSide::Minus, tol)?,
            consistency: total.map(|t| self.consistency(t, grid)).transpose()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_grid;

    fn grid1(ell: f64, m: usize) -> Grid {
        make_grid(BlockPartition::singletons(1).unwrap(), vec![ell], vec![m]).unwrap()
    }

    #[test]
    fn constant_factor_has_no_leak() {
        let g = grid1(6.0, 64);
        let one = SampledField::from_fn(&g, Side::Frequency, |_| Complex64::from(1.0));
        let r = validate_factor_support(&one, &ConeSpec::halfspaces(g.partition()), FactorSide::Plus, SUPPORT_TOL).unwrap();
        assert!(r.leak < 1e-28 && r.pass && !r.mollified);
    }

    #[test]
    fn zero_node_is_rejected() {
        let g = grid1(6.0, 64);
        let f = SampledField::from_fn(&g, Side::Frequency, |xi| Complex64::from(xi[0]));
        assert!(matches!(
            validate_factor_support(&f, &ConeSpec::halfspaces(g.partition()), FactorSide::Plus, SUPPORT_TOL),
            Err(Error::ZeroFactor { .. })
        ));
    }

    #[test]
    fn minus_side_uses_reflected_cone() {
        let g = grid1(6.0, 512);
        let cone = ConeSpec::halfspaces(g.partition());
        let f = SampledField::from_fn(&g, Side::Frequency, |xi| Complex64::new(xi[0], -1.0));
        let r = validate_factor_support(&f, &cone, FactorSide::Minus, SUPPORT_TOL).unwrap();
        assert!(r.pass, "{}", r.leak);
        let r = validate_factor_support(&f, &cone, FactorSide::Plus, SUPPORT_TOL).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn lorentz_factors_are_consistent() {
        let g = make_grid(BlockPartition::single_block(2).unwrap(), vec![8.0, 8.0], vec![32, 32]).unwrap();
        let fac = FactorizedSymbol::lorentz_cone2d(1.0, 1, 1);
        let total = SymbolSpec::Product { factors: vec![fac.plus.clone(), fac.minus.clone()] };
        assert!(fac.consistency(&total, &g).unwrap() < 1e-12);
    }
}
