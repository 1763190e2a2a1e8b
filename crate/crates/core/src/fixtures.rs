//! Seeded random fields for tests, benches and scenarios.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::lattice::{Grid, SampledField, Side};

/// Gaussian envelope times a few random plane waves:
/// `exp(−|x − c|²/(2σ²)) Σ_q a_q e^{i k_q·x}` with complex normal `a_q` and
/// `k_q` uniform in `[−k_max, k_max]^M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeParams {
    #[serde(default)]
    pub center: Option<Vec<f64>>,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_kmax")]
    pub kmax: f64,
    #[serde(default = "default_modes")]
    pub modes: usize,
}

fn default_width() -> f64 {
    1.5
}
fn default_kmax() -> f64 {
    3.0
}
fn default_modes() -> usize {
    4
}

impl Default for EnvelopeParams {
    fn default() -> Self {
        Self { center: None, width: default_width(), kmax: default_kmax(), modes: default_modes() }
    }
}

/// Deterministic generator for a given seed (ChaCha8, platform independent).
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-member seed of an ensemble, independent of evaluation order.
pub fn member_seed(seed: u64, member: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(member.wrapping_mul(0xD1B5_4A32_D192_ED03) ^ 0x5851_F42D)
}

pub fn random_envelope(grid: &Grid, params: &EnvelopeParams, rng: &mut impl Rng) -> SampledField {
    let dims = grid.dims();
    let kdist = Uniform::new_inclusive(-params.kmax, params.kmax).expect("kmax is finite");
    let waves: Vec<(Vec<f64>, Complex64)> = (0..params.modes)
        .map(|_| {
            let k: Vec<f64> = (0..dims).map(|_| kdist.sample(rng)).collect();
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            (k, Complex64::new(re, im))
        })
        .collect();
    let center = params.center.clone().unwrap_or_else(|| vec![0.0; dims]);
    let inv = 1.0 / (2.0 * params.width * params.width);
    SampledField::from_fn(grid, Side::Space, |x| {
        let r2: f64 = x.iter().zip(&center).map(|(a, c)| (a - c).powi(2)).sum();
        let env = (-r2 * inv).exp();
        let s: Complex64 = waves
            .iter()
            .map(|(k, a)| a * Complex64::from_polar(1.0, k.iter().zip(x).map(|(k, x)| k * x).sum()))
            .sum();
        s * env
    })
}
