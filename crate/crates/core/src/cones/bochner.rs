use crate::error::Result;
use crate::lattice::{transform, Direction, SampledField, Side};

use super::{project_space, ConeSpec};

/// `B f = F P_C F^{-1} f`, the Bochner operator realized by spatial truncation.
pub fn bochner_project(f: &SampledField, cone: &ConeSpec) -> Result<SampledField> {
    f.expect_side(Side::Frequency)?;
    let u = transform(f, Direction::Inverse)?;
    transform(&project_space(&u, cone)?, Direction::Forward)
}

/// Splitting of a frequency-side field into the image of a field supported in
/// `C̄` and the remainder.
#[derive(Clone, Debug)]
pub struct JumpPair {
    pub plus: SampledField,
    pub minus: SampledField,
}

pub fn jump_decompose(f: &SampledField, cone: &ConeSpec) -> Result<JumpPair> {
    let plus = bochner_project(f, cone)?;
    let minus = f.sub(&plus)?;
    Ok(JumpPair { plus, minus })
}
