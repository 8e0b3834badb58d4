//! Real scalar abstraction used by the embeddings and the audit reports.
//!
//! Everything integral (permutations, word lengths, the formula terms) stays
//! in `usize`. Only quantities that live in the L1 target space are generic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    fn from_count(x: usize) -> Self {
        Self::from_usize(x).expect("count representable as a float")
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite value representable as a float")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
