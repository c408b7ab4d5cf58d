//! Points of the product space (R³)^m.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Point3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BlockPoint {
    pub blocks: Vec<Point3>,
}

impl BlockPoint {
    pub fn new(blocks: Vec<Point3>) -> Self {
        BlockPoint { blocks }
    }

    pub fn zeros(m: usize) -> Self {
        BlockPoint { blocks: vec![Point3::ORIGIN; m] }
    }

    pub fn single(p: Point3) -> Self {
        BlockPoint { blocks: vec![p] }
    }

    /// Builds a point from `3m` coordinates.
    pub fn from_flat(v: &[f64]) -> Result<Self> {
        if v.is_empty() || !v.len().is_multiple_of(3) {
            return Err(Error::InvalidArgument(format!(
                "block point needs a positive multiple of 3 coordinates, got {}",
                v.len()
            )));
        }
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("block point"));
        }
        Ok(BlockPoint { blocks: v.chunks(3).map(|c| Point3::new(c[0], c[1], c[2])).collect() })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.blocks.iter().flat_map(|p| p.to_array()).collect()
    }

    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn dim(&self) -> usize {
        3 * self.blocks.len()
    }

    pub fn dot(&self, o: &BlockPoint) -> f64 {
        self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.dot(*b)).sum()
    }

    pub fn norm(&self) -> f64 {
        scaled_norm(self.blocks.iter().map(|p| p.norm()))
    }

    pub fn dist(&self, o: &BlockPoint) -> f64 {
        self.sub(o).norm()
    }

    pub fn add(&self, o: &BlockPoint) -> BlockPoint {
        BlockPoint { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| *a + *b).collect() }
    }

    pub fn sub(&self, o: &BlockPoint) -> BlockPoint {
        BlockPoint { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| *a - *b).collect() }
    }

    pub fn scale(&self, s: f64) -> BlockPoint {
        BlockPoint { blocks: self.blocks.iter().map(|p| *p * s).collect() }
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(|p| p.is_finite())
    }

    /// Blockwise projection onto K_exp^m.
    pub fn project_cone(&self) -> Result<BlockPoint> {
        let blocks =
            self.blocks.iter().map(|p| geometry::project(*p).map(|pair| pair.primal)).collect::<Result<_>>()?;
        Ok(BlockPoint { blocks })
    }

    /// Distance to K_exp^m.
    pub fn cone_distance(&self) -> Result<f64> {
        let ds = self.blocks.iter().map(|p| geometry::distance(*p)).collect::<Result<Vec<_>>>()?;
        Ok(scaled_norm(ds.into_iter()))
    }
}

// Euclidean norm of nonnegative parts without underflow in the squares.
fn scaled_norm(parts: impl Iterator<Item = f64> + Clone) -> f64 {
    let scale = parts.clone().fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * parts.map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

impl TryFrom<Vec<f64>> for BlockPoint {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        BlockPoint::from_flat(&v)
    }
}

impl From<BlockPoint> for Vec<f64> {
    fn from(b: BlockPoint) -> Self {
        b.to_flat()
    }
}

impl fmt::Display for BlockPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|p| format!("{},{},{}", p.x, p.y, p.z)).collect();
        f.write_str(&parts.join(";"))
    }
}
