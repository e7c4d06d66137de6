use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

pub use nalgebra::Complex;

/// Real scalar the whole crate is generic over.
///
/// Validation tolerances are stated for double precision; `tol` widens them
/// for single precision so that f32 runs still validate their own round-off.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Multiplier applied to double-precision tolerances.
    const TOLERANCE_SCALE: f64;

    fn tol(double_precision_tol: f64) -> Self {
        Self::lit(double_precision_tol * Self::TOLERANCE_SCALE)
    }

    /// Converts an f64 literal. Never fails for f32/f64.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }
}

impl Real for f64 {
    const TOLERANCE_SCALE: f64 = 1.0;
}

impl Real for f32 {
    const TOLERANCE_SCALE: f64 = 1.0e6;
}

pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
