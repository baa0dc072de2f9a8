//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar the simulator is generic over.
///
/// The tolerance hooks scale with the precision of the type: the f64 values
/// are the ones the relation checks are calibrated against, the f32 values
/// are loose enough that the same code paths stay usable.
pub trait Real: Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static {
    /// Allowed deviation of a squared norm or trace from 1.
    fn norm_tol() -> Self;
    /// Outcome probabilities below this are treated as impossible.
    fn prob_floor() -> Self;
    /// Eigenvalues below this are clamped to zero before taking logarithms.
    fn eig_clamp() -> Self;
    /// Most negative eigenvalue a density matrix may carry.
    fn psd_tol() -> Self;

    /// Converts an `f64` literal. Panics only if the type cannot represent finite `f64`s.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("literal not representable")
    }

    #[inline]
    fn from_usize(n: usize) -> Self {
        Self::from(n).expect("integer not representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn norm_tol() -> Self {
        1e-12
    }
    fn prob_floor() -> Self {
        1e-14
    }
    fn eig_clamp() -> Self {
        1e-12
    }
    fn psd_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn norm_tol() -> Self {
        1e-5
    }
    fn prob_floor() -> Self {
        1e-9
    }
    fn eig_clamp() -> Self {
        1e-6
    }
    fn psd_tol() -> Self {
        1e-5
    }
}
