use ndarray::{ArrayD, IxDyn};
use num_complex::Complex64;

use crate::cones::{bochner_project, ConeRestricted};
use crate::error::{Error, Result};
use crate::lattice::{transform, Direction, Grid, SampledField, Side, SmoothnessVector};
use crate::symbols::{build_qn, decompose_index, FactorizedSymbol, IndexDecomposition};

use super::diagnostics::{diagnostics, LayerNorm, SolveReport};
use super::{extend, vphi_apply, ExtensionMode};

/// Frequency-side samples of a layer density `c̃_L(ξ'_K)`.
///
/// The layer grid keeps every axis except the distinguished last axis of each
/// block that carries layers (`n_j ≥ 1`); blocks with `n_j = 0` keep all
/// their axes. In one dimension the layer grid is a single point.
#[derive(Clone, Debug)]
pub struct LayerField {
    axes: Vec<usize>,
    values: ArrayD<Complex64>,
}

impl LayerField {
    /// Axes of `grid` kept on the layer grid for layer counts `n`.
    pub fn kept_axes(grid: &Grid, n: &[u32]) -> Vec<usize> {
        let p = grid.partition();
        let dropped: Vec<usize> = (0..p.n_blocks()).filter(|&j| n[j] > 0).map(|j| p.last_axis(j)).collect();
        (0..grid.dims()).filter(|a| !dropped.contains(a)).collect()
    }

    /// Samples `f(ξ'_K)` on the kept axes, in increasing axis order.
    pub fn from_fn(grid: &Grid, n: &[u32], f: impl Fn(&[f64]) -> Complex64) -> Self {
        let axes = Self::kept_axes(grid, n);
        let shape: Vec<usize> = axes.iter().map(|&a| grid.counts()[a]).collect();
        let coords: Vec<Vec<f64>> = axes.iter().map(|&a| grid.axis_xi(a)).collect();
        let mut xi = vec![0.0; axes.len()];
        let values = ArrayD::from_shape_fn(IxDyn(&shape), |idx| {
            for (i, c) in xi.iter_mut().enumerate() {
                *c = coords[i][idx[i]];
            }
            f(&xi)
        });
        Self { axes, values }
    }

    pub fn from_values(grid: &Grid, n: &[u32], values: ArrayD<Complex64>) -> Result<Self> {
        let axes = Self::kept_axes(grid, n);
        let shape: Vec<usize> = axes.iter().map(|&a| grid.counts()[a]).collect();
        if values.shape() != shape.as_slice() {
            return Err(Error::Layer(format!("layer values have shape {:?}, expected {shape:?}", values.shape())));
        }
        Ok(Self { axes, values })
    }

    pub fn axes(&self) -> &[usize] {
        &self.axes
    }

    pub fn values(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    /// `‖c_L‖_{S_L}` with weights `(1 + |ξ'_{K_j}|)^{S_L,j}` on the layer grid.
    pub fn norm(&self, grid: &Grid, order: &SmoothnessVector) -> f64 {
        let p = grid.partition();
        let pos = |a: usize| self.axes.iter().position(|&k| k == a);
        let coords: Vec<Vec<f64>> = self.axes.iter().map(|&a| grid.axis_xi(a)).collect();
        let measure: f64 = self.axes.iter().map(|&a| grid.dxi(a) / (2.0 * std::f64::consts::PI)).product();
        let total: f64 = self
            .values
            .indexed_iter()
            .map(|(idx, v)| {
                let mut w = 1.0;
                for (j, &s) in order.values().iter().enumerate() {
                    let r2: f64 = p
                        .block(j)
                        .iter()
                        .filter_map(|&a| pos(a))
                        .map(|i| coords[i][idx[i]].powi(2))
                        .sum();
                    w *= (1.0 + r2.sqrt()).powf(s);
                }
                w * w * v.norm_sqr()
            })
            .sum();
        (total * measure).sqrt()
    }
}

/// One term `c̃_L(ξ'_K) ∏_j ξ_{k_j}^{l_j − 1}` of the general solution.
#[derive(Clone, Debug)]
pub struct Layer {
    /// `l_j ∈ 1..=n_j` on blocks with `n_j ≥ 1`, and 0 on the others.
    pub l: Vec<u32>,
    pub density: LayerField,
}

/// Data selecting one member of the general solution family.
#[derive(Clone, Debug)]
pub struct GeneralSolutionParams {
    pub decomposition: IndexDecomposition,
    /// `Q_N`, see [`build_qn`].
    pub qn: SampledField,
    pub layers: Vec<Layer>,
}

impl GeneralSolutionParams {
    /// Decomposes `æ − S` and builds `Q_N`; no layers yet (all `c_L = 0`).
    pub fn new(grid: &Grid, s: &SmoothnessVector, index: &SmoothnessVector) -> Result<Self> {
        let decomposition = decompose_index(s, index)?;
        let qn = build_qn(grid, &decomposition.n)?;
        Ok(Self { decomposition, qn, layers: Vec::new() })
    }

    /// Adds a layer after checking `l` against the admissible range.
    pub fn with_layer(mut self, l: Vec<u32>, density: LayerField) -> Result<Self> {
        self.check_multi_index(&l)?;
        self.layers.push(Layer { l, density });
        Ok(self)
    }

    /// Per block: `1 ≤ l_j ≤ n_j` and `2(s_j − æ_j + l_j − 1) < −1` where
    /// `n_j ≥ 1`; `l_j = 0` where `n_j = 0`.
    fn check_multi_index(&self, l: &[u32]) -> Result<()> {
        let n = &self.decomposition.n;
        if l.len() != n.len() {
            return Err(Error::Layer(format!("L has {} entries for {} blocks", l.len(), n.len())));
        }
        for (j, (&lj, &nj)) in l.iter().zip(n).enumerate() {
            if nj == 0 {
                if lj != 0 {
                    return Err(Error::Layer(format!("block {j} carries no layers (n_j = 0) but l_j = {lj}")));
                }
                continue;
            }
            // s_j − æ_j = −(n_j + δ_j)
            let lhs = 2.0 * (-(nj as f64 + self.decomposition.delta.0[j]) + lj as f64 - 1.0);
            if lj == 0 || lhs.is_nan() || lhs >= -1.0 {
                return Err(Error::Layer(format!(
                    "l_{j} = {lj} violates 2(s_j − æ_j + l_j − 1) < −1 (admissible 1..={nj})"
                )));
            }
        }
        Ok(())
    }

    /// `S_L`: `s_j − æ_j + l_j − ½` on layered blocks, `s_j − æ_j` elsewhere.
    pub fn layer_order(&self, s: &SmoothnessVector, index: &SmoothnessVector, l: &[u32]) -> SmoothnessVector {
        SmoothnessVector::new(
            (0..l.len())
                .map(|j| {
                    let base = s.0[j] - index.0[j];
                    if self.decomposition.n[j] > 0 {
                        base + l[j] as f64 - 0.5
                    } else {
                        base
                    }
                })
                .collect(),
        )
    }
}

fn check_setup(fac: &FactorizedSymbol, v: &ConeRestricted) -> Result<()> {
    fac.check(v.grid())?;
    if v.cone() != &fac.cone {
        return Err(Error::Factorization("data and factorization refer to different cones".into()));
    }
    Ok(())
}

/// `A_≠^{-1} Q B(Q^{-1} A_=^{-1} ℓ̃v)`, with `Q ≡ 1` when absent.
fn first_term(
    plus: &SampledField,
    minus: &SampledField,
    lv: &SampledField,
    qn: Option<&SampledField>,
    fac: &FactorizedSymbol,
) -> Result<SampledField> {
    let mut w = transform(lv, Direction::Forward)?.div(minus)?;
    if let Some(q) = qn {
        w = w.div(q)?;
    }
    let mut w = bochner_project(&w, &fac.cone)?;
    if let Some(q) = qn {
        w = w.mul(q)?;
    }
    w.div(plus)
}

/// Unique solution in the regime `|æ_j − s_j| < ½`:
/// `ũ = A_≠^{-1} B(A_=^{-1} ℓ̃v)` with `B` the Bochner operator of the cone.
pub fn solve_cone(
    fac: &FactorizedSymbol,
    v: &ConeRestricted,
    s: &SmoothnessVector,
    ext: &ExtensionMode,
) -> Result<(SampledField, SolveReport)> {
    check_setup(fac, v)?;
    let dec = decompose_index(s, &fac.index)?;
    if !dec.is_unique_regime() {
        return Err(Error::RequiresGeneralSolution { n: dec.n });
    }
    let grid = v.grid();
    let lv = extend(v, ext)?;
    let plus = fac.eval_plus(grid)?;
    let minus = fac.eval_minus(grid)?;
    let ut = first_term(&plus, &minus, &lv, None, fac)?;
    let u = transform(&ut, Direction::Inverse)?;
    let report = diagnostics(&u, v, &lv, fac, s)?;
    Ok((u, report))
}

/// General solution: the first term with `Q_N`, plus
/// `A_≠^{-1} V_φ^{-1} Σ_L c̃_L(ξ'_K) ∏_j ξ_{k_j}^{l_j − 1}`.
pub fn general_solve(
    fac: &FactorizedSymbol,
    v: &ConeRestricted,
    s: &SmoothnessVector,
    params: &GeneralSolutionParams,
    ext: &ExtensionMode,
) -> Result<(SampledField, SolveReport)> {
    check_setup(fac, v)?;
    let grid = v.grid();
    let dec = decompose_index(s, &fac.index)?;
    let same = dec.n == params.decomposition.n
        && dec
            .delta
            .values()
            .iter()
            .zip(params.decomposition.delta.values())
            .all(|(a, b)| (a - b).abs() <= 1e-12);
    if !same {
        return Err(Error::Layer(format!(
            "parameters were built for N = {:?}, but æ − S gives N = {:?}",
            params.decomposition.n, dec.n
        )));
    }
    if dec.is_unique_regime() && !params.layers.is_empty() {
        return Err(Error::Layer("N = 0 admits no layers".into()));
    }
    params.qn.expect_side(Side::Frequency)?;
    if params.qn.grid() != grid {
        return Err(Error::GridMismatch);
    }
    for (j, bc) in fac.cone.blocks.iter().enumerate() {
        if dec.n[j] > 0 && *bc == crate::cones::BlockCone::Full {
            return Err(Error::Layer(format!("block {j} is a full block and has no boundary to carry layers")));
        }
    }

    let lv = extend(v, ext)?;
    let plus = fac.eval_plus(grid)?;
    let minus = fac.eval_minus(grid)?;
    let mut ut = first_term(&plus, &minus, &lv, Some(&params.qn), fac)?;

    let mut layer_norms = Vec::with_capacity(params.layers.len());
    if !params.layers.is_empty() {
        let mut sum = SampledField::zeros(grid, Side::Frequency);
        for layer in &params.layers {
            params.check_multi_index(&layer.l)?;
            if layer.density.axes() != LayerField::kept_axes(grid, &dec.n).as_slice() {
                return Err(Error::Layer("layer density lives on the wrong layer grid".into()));
            }
            add_layer(&mut sum, layer, &dec.n)?;
            let order = params.layer_order(s, &fac.index, &layer.l);
            layer_norms.push(LayerNorm { l: layer.l.clone(), norm: layer.density.norm(grid, &order), order });
        }
        let homogeneous = vphi_apply(&sum, &fac.cone, Direction::Inverse)?.div(&plus)?;
        ut = ut.add(&homogeneous)?;
    }

    let u = transform(&ut, Direction::Inverse)?;
    let mut report = diagnostics(&u, v, &lv, fac, s)?;
    report.layer_norms = layer_norms;
    Ok((u, report))
}

fn add_layer(sum: &mut SampledField, layer: &Layer, n: &[u32]) -> Result<()> {
    let grid = sum.grid().clone();
    let p = grid.partition();
    let monomial_axes: Vec<(usize, i32)> = (0..p.n_blocks())
        .filter(|&j| n[j] > 0)
        .map(|j| (p.last_axis(j), layer.l[j] as i32 - 1))
        .collect();
    let kept = layer.density.axes().to_vec();
    let dens = layer.density.values();
    let mut at = vec![0; kept.len()];
    let axes_xi: Vec<Vec<f64>> = (0..grid.dims()).map(|i| grid.axis_xi(i)).collect();
    for (idx, v) in sum.values_mut().indexed_iter_mut() {
        for (slot, &a) in at.iter_mut().zip(&kept) {
            *slot = idx[a];
        }
        let mono: f64 = monomial_axes.iter().map(|&(a, e)| axes_xi[a][idx[a]].powi(e)).product();
        *v += dens[at.as_slice()] * mono;
    }
    Ok(())
}
