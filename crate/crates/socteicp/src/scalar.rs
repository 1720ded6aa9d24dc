//! Scalar abstraction for the numeric kernels.
//!
//! Everything in this crate is generic over a floating-point scalar so the
//! same code runs in `f32` and `f64`. The solvers and the bundled instances
//! are exercised in `f64`; the type aliases at the crate root pick that.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Floating-point scalar usable by the tensor and cone kernels.
pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + Sum + Debug + Display + LowerExp + 'static
{
    /// Shorthand for lossy conversion from `f64` (constants, tolerances).
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable in scalar type")
    }

    /// Conversion from `usize` (dimensions, multiplicities).
    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Signed odd root: the real solution `t` of `t^k = v` for odd `k`.
pub fn odd_root<T: Real>(v: T, k: u32) -> T {
    debug_assert!(k % 2 == 1);
    let mag = v.abs().powf(T::one() / T::from_count(k as usize));
    if v < T::zero() {
        -mag
    } else {
        mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_root_roundtrip() {
        for &lam in &[-2.0f64, -1.0, 0.0, 0.5, 2.0] {
            let r = odd_root(lam, 3);
            assert!((r.powi(3) - lam).abs() <= 1e-12 * (1.0 + lam.abs()));
        }
        assert!(odd_root(-8.0f64, 3) + 2.0 < 1e-12);
    }
}
