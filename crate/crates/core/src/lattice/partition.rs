use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Decomposition of the axes `0..M` into ordered, disjoint, nonempty blocks.
///
/// Axis indices are zero-based. The last axis listed in a block is its
/// distinguished axis: half-space cones, shears and layers act along it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct BlockPartition {
    dims: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Partition("at least one block is required".into()));
        }
        let dims: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; dims];
        for (j, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Partition(format!("block {j} is empty")));
            }
            for &axis in block {
                if axis >= dims {
                    return Err(Error::Partition(format!(
                        "axis {axis} in block {j} exceeds M - 1 = {}",
                        dims - 1
                    )));
                }
                if std::mem::replace(&mut seen[axis], true) {
                    return Err(Error::Partition(format!("axis {axis} appears twice")));
                }
            }
        }
        Ok(Self { dims, blocks })
    }

    /// One block per axis.
    pub fn singletons(dims: usize) -> Result<Self> {
        Self::new((0..dims).map(|i| vec![i]).collect())
    }

    /// A single block holding every axis.
    pub fn single_block(dims: usize) -> Result<Self> {
        Self::new(vec![(0..dims).collect()])
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &[usize] {
        &self.blocks[j]
    }

    pub fn block_size(&self, j: usize) -> usize {
        self.blocks[j].len()
    }

    /// The distinguished (last listed) axis of block `j`.
    pub fn last_axis(&self, j: usize) -> usize {
        *self.blocks[j].last().expect("blocks are nonempty")
    }

    pub fn block_of_axis(&self, axis: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&axis))
    }
}

impl TryFrom<Vec<Vec<usize>>> for BlockPartition {
    type Error = Error;
    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(blocks)
    }
}

impl From<BlockPartition> for Vec<Vec<usize>> {
    fn from(p: BlockPartition) -> Self {
        p.blocks
    }
}

/// One real number per block: smoothness `S`, orders `α`, indices `æ`, ...
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SmoothnessVector(pub Vec<f64>);

impl SmoothnessVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn check(&self, partition: &BlockPartition, what: &str) -> Result<()> {
        if self.len() != partition.n_blocks() {
            return Err(Error::Shape(format!(
                "{what} has {} components but the partition has {} blocks",
                self.len(),
                partition.n_blocks()
            )));
        }
        Ok(())
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| v * c).collect())
    }

    fn zip(&self, rhs: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.len(), rhs.len(), "smoothness vectors differ in length");
        Self(self.0.iter().zip(&rhs.0).map(|(&a, &b)| f(a, b)).collect())
    }
}

impl From<Vec<f64>> for SmoothnessVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl Add for &SmoothnessVector {
    type Output = SmoothnessVector;
    fn add(self, rhs: Self) -> SmoothnessVector {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &SmoothnessVector {
    type Output = SmoothnessVector;
    fn sub(self, rhs: Self) -> SmoothnessVector {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for &SmoothnessVector {
    type Output = SmoothnessVector;
    fn neg(self) -> SmoothnessVector {
        SmoothnessVector(self.0.iter().map(|v| -v).collect())
    }
}
