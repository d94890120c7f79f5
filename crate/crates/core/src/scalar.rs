//! Real scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// floating point: f32 or f64
///
/// The associated constants carry the precision-dependent thresholds used by
/// validation checks; they are expressed in `f64` and converted on use.
pub trait Real: Float + FloatConst + FromPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static {
    /// Orthonormality, Hermiticity, completeness and normalization checks.
    const CHECK_TOL: f64;
    /// Below this a norm counts as exactly zero (single-Kraus detection, plateaus).
    const ZERO_TOL: f64;
    /// Smallest branch/keep probability treated as non-degenerate.
    const PROB_FLOOR: f64;

    /// Converts an `f64` literal. Every literal used in this crate is
    /// representable, so this never fails for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn check_tol() -> Self {
        Self::lit(Self::CHECK_TOL)
    }

    #[inline]
    fn zero_tol() -> Self {
        Self::lit(Self::ZERO_TOL)
    }

    #[inline]
    fn prob_floor() -> Self {
        Self::lit(Self::PROB_FLOOR)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const CHECK_TOL: f64 = 1e-9;
    const ZERO_TOL: f64 = 1e-12;
    const PROB_FLOOR: f64 = 1e-15;
}

impl Real for f32 {
    const CHECK_TOL: f64 = 1e-4;
    const ZERO_TOL: f64 = 1e-6;
    const PROB_FLOOR: f64 = 1e-7;
}
