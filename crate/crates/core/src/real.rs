//! Scalar abstraction: every module is generic over the floating-point type.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the simulator runs on (`f32` or `f64`).
///
/// `rustfft::FftNum` brings `Send + Sync + 'static`, so states built on a
/// `Real` scalar can cross thread boundaries freely.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + rustfft::FftNum + std::fmt::Display + std::fmt::LowerExp
{
    /// Shorthand for converting an `f64` literal into the scalar type.
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// Machine-epsilon-scaled tolerance floor.
    ///
    /// Spec tolerances are stated for `f64`; for wider epsilons (`f32`) the
    /// floor `factor * eps` takes over so validation stays meaningful.
    fn tol(f64_tol: f64, factor: f64) -> Self {
        let floor = Self::epsilon() * Self::real(factor);
        Self::real(f64_tol).max(floor)
    }
}

impl Real for f32 {}
impl Real for f64 {}
