//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point type the simulator is generic over: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + std::iter::Product
    + Debug
    + Display
    + std::fmt::LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Amplitudes with magnitude below this are dropped after every ket operation.
    const PRUNE: Self;
    /// Max elementwise deviation of `G†G` from the identity accepted for a unitary.
    const UNITARY_TOL: Self;

    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }
}

impl Real for f64 {
    const PRUNE: Self = 1e-12;
    const UNITARY_TOL: Self = 1e-10;
}

impl Real for f32 {
    const PRUNE: Self = 1e-6;
    const UNITARY_TOL: Self = 1e-5;
}
