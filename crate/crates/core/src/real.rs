//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar backing amplitudes, angles and losses: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a count or index.
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

pub(crate) fn c<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

pub(crate) fn cre<T: Real>(re: T) -> Cplx<T> {
    Complex::new(re, T::zero())
}

/// `e^{i·phi}`.
pub(crate) fn cis<T: Real>(phi: T) -> Cplx<T> {
    Complex::new(phi.cos(), phi.sin())
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle<T: Real>(phi: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut x = phi % two_pi;
    if x > T::PI() {
        x -= two_pi;
    } else if x <= -T::PI() {
        x += two_pi;
    }
    x
}

/// Unit-norm tolerance for a vector of `len` entries: `1e-9`, widened to
/// `16·len·ε` when that is larger (single precision).
pub fn norm_tolerance<T: Real>(len: usize) -> T {
    T::lit(1e-9).max(T::from_usize_lossy(16 * len) * T::epsilon())
}

/// Neumaier-compensated sum; the result does not depend on how the terms
/// were produced, only on their order.
pub fn compensated_sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_tolerance_floor_and_widening() {
        assert_eq!(norm_tolerance::<f64>(1 << 16), 1e-9);
        let t32 = norm_tolerance::<f32>(4);
        assert!(t32 > 1e-6 && t32 < 1e-5);
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!((wrap_angle(-std::f64::consts::PI) - std::f64::consts::PI).abs() < 1e-12);
        assert!((wrap_angle(0.5f64) - 0.5).abs() < 1e-15);
        assert!((wrap_angle(-7.0f64) - (-7.0 + 2.0 * std::f64::consts::PI)).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let vals = [1.0e16f64, 1.0, -1.0e16, 1.0];
        assert_eq!(compensated_sum(vals), 2.0);
    }
}
