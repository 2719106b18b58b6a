//! Scalar abstraction for the numerical kernels.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the simulation kernels are generic over.
///
/// Implemented for `f32` and `f64`. Everything heavy (field evaluation,
/// quadrature, covering geometry, oscillations) runs in `R`; configuration
/// and reported statistics stay `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64` (rounds for `f32`).
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to any Real")
    }

    /// Widening conversion to `f64`.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    /// Smallest representable value strictly above `x` reachable by nudging.
    ///
    /// Used to keep sampled point sets strictly increasing after rounding.
    #[inline]
    fn bump_up(self) -> Self {
        let mut step = self.abs() * Self::epsilon() + Self::min_positive_value();
        loop {
            let y = self + step;
            if y > self {
                return y;
            }
            step = step + step;
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_up_strictly_increases() {
        for &x in &[0.0f64, 1.0, 1e-300, 2.0_f64.powi(60), 0.1] {
            assert!(x.bump_up() > x);
        }
        for &x in &[0.0f32, 1.0, 1e-30, 2.0_f32.powi(20)] {
            assert!(x.bump_up() > x);
        }
    }

    #[test]
    fn conversions_round_trip_exact_dyadics() {
        assert_eq!(f32::of(0.5).as_f64(), 0.5);
        assert_eq!(f64::of(0.5).as_f64(), 0.5);
    }
}
