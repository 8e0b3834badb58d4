//! Direct sum of the two embeddings, with the exponential part rescaled.

use serde::Serialize;

use super::phi1::{phi1, phi1_distance, PlanarGrid, PlanarGridRecord};
use super::phi2::{phi2_distance, phi2_with_margin, InteriorMargin, SparseL1Vector, SparseRecord};
use crate::error::{check_degrees, Error, Result};
use crate::perm::Permutation;
use crate::scalar::Scalar;

/// `1 / (4π)`: maps the frame `[4 T1, 4π T1]` of the exponential part onto
/// `[T1 / π, T1]`.
pub fn default_scale1<S: Scalar>() -> S {
    S::one() / (S::from_count(4) * S::PI())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinedPoint<S> {
    pub grid: PlanarGrid<S>,
    pub sparse: SparseL1Vector<S>,
    pub scale1: S,
}

pub fn phi_combined<S: Scalar>(p: &Permutation, scale1: S) -> Result<CombinedPoint<S>> {
    phi_combined_with_margin(p, scale1, InteriorMargin::default())
}

pub fn phi_combined_with_margin<S: Scalar>(
    p: &Permutation,
    scale1: S,
    margin: InteriorMargin,
) -> Result<CombinedPoint<S>> {
    if !(scale1 > S::zero() && scale1.is_finite()) {
        return Err(Error::InvalidInput(format!("scale1 must be positive, got {scale1}")));
    }
    Ok(CombinedPoint {
        grid: phi1(p),
        sparse: phi2_with_margin(p, margin),
        scale1,
    })
}

/// `scale1 * phi1_distance + phi2_distance`.
pub fn combined_distance<S: Scalar>(a: &CombinedPoint<S>, b: &CombinedPoint<S>) -> Result<S> {
    check_degrees(a.grid.n(), b.grid.n())?;
    if a.scale1 != b.scale1 {
        return Err(Error::InvalidInput(format!(
            "points built with different scales ({} vs {})",
            a.scale1, b.scale1
        )));
    }
    Ok(a.scale1 * phi1_distance(&a.grid, &b.grid)? + phi2_distance(&a.sparse, &b.sparse))
}

#[derive(Debug, Clone, Serialize)]
pub struct CombinedRecord<S> {
    pub phi1: PlanarGridRecord<S>,
    pub phi2: Vec<SparseRecord<S>>,
    pub scale1: S,
}

impl<S: Scalar> From<&CombinedPoint<S>> for CombinedRecord<S> {
    fn from(c: &CombinedPoint<S>) -> Self {
        CombinedRecord {
            phi1: (&c.grid).into(),
            phi2: c.sparse.records(),
            scale1: c.scale1,
        }
    }
}
