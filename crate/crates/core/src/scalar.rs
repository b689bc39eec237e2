//! Floating point abstraction shared by the estimator, the bandit and the
//! simulator. Implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar used for probabilities, weights and log-likelihoods.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance on `sum(q) == 1` for weights in this precision.
    fn simplex_tolerance() -> Self {
        let floor = Self::from_f64(1e-9).unwrap();
        let scaled = Self::epsilon() * Self::from_f64(64.0).unwrap();
        floor.max(scaled)
    }

    /// Lossy conversion from `f64`; literal constants only.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).unwrap()
    }

    fn from_count(count: u64) -> Self {
        Self::from_u64(count).unwrap()
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
