//! Scalar abstraction: the whole core is generic over the floating-point type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::ScalarOperand;
use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar the solvers run on: `f32` or `f64`.
pub trait Scalar:
    Float + NumAssign + FromPrimitive + Sum + ScalarOperand + Debug + Display + Send + Sync + 'static
{
    /// Lift an `f64` constant (tolerances, literals) into the scalar type.
    fn cst(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("scalar convertible to f64")
    }
}

impl<T> Scalar for T where
    T: Float
        + NumAssign
        + FromPrimitive
        + Sum
        + ScalarOperand
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_roundtrip() {
        assert_eq!(f64::cst(1e-9), 1e-9);
        assert_eq!(f32::cst(0.5), 0.5f32);
        assert_eq!(2.0f64.as_f64(), 2.0);
    }
}
