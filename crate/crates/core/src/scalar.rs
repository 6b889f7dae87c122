//! Floating-point scalar abstraction.
//!
//! All numerical code in this crate is generic over [`Scalar`], so the same
//! simulator runs in `f32` or `f64`. Tolerances are associated constants
//! because what counts as "numerically exact" depends on the precision.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssignOps};

/// Real scalar type underlying all complex arithmetic: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + NumAssignOps + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Tolerance for checks on analytically constructed operators
    /// (hermiticity of inputs, unitarity of exponentials, projector algebra).
    const TOL_EXACT: Self;

    /// Tolerance for quantities one numerical composition removed from
    /// exact construction (state normalization, Kraus completeness,
    /// density-matrix validation, Schmidt orthonormality).
    const TOL_STATE: Self;

    /// Norm/purity drift allowed over long stochastic runs.
    const TOL_DRIFT: Self;

    /// Smallest probability treated as a selectable measurement branch.
    const PROB_FLOOR: Self;

    /// Lossy conversion from `f64`; exact for `f64` itself.
    fn from_f64(x: f64) -> Self;

    /// Convenience conversion for counters and sizes.
    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    /// One half, used pervasively by projector and probe algebra.
    fn half() -> Self {
        Self::from_f64(0.5)
    }
}

impl Scalar for f64 {
    const TOL_EXACT: Self = 1e-12;
    const TOL_STATE: Self = 1e-10;
    const TOL_DRIFT: Self = 1e-8;
    const PROB_FLOOR: Self = 1e-14;

    fn from_f64(x: f64) -> Self {
        x
    }
}

impl Scalar for f32 {
    const TOL_EXACT: Self = 1e-5;
    const TOL_STATE: Self = 1e-4;
    const TOL_DRIFT: Self = 1e-3;
    const PROB_FLOOR: Self = 1e-7;

    fn from_f64(x: f64) -> Self {
        x as f32
    }
}
