use num_complex::Complex;

use crate::scalar::Scalar;

/// Square-root branch used for complex durations:
/// `sqrt(r e^{iφ}) = −sqrt(r) e^{iφ/2}` with `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqrtBranch {
    #[default]
    Negative,
    /// Ordinary principal root; only useful as a control.
    Principal,
}

impl SqrtBranch {
    pub fn sqrt<T: Scalar>(self, w: Complex<T>) -> Complex<T> {
        match self {
            SqrtBranch::Negative => branched_sqrt(w),
            SqrtBranch::Principal => w.sqrt(),
        }
    }
}

pub fn branched_sqrt<T: Scalar>(w: Complex<T>) -> Complex<T> {
    let mut phi = w.im.atan2(w.re);
    if phi < T::zero() {
        phi = phi + T::lit(2.0) * T::PI();
    }
    let (r, half) = (w.norm().sqrt(), phi / T::lit(2.0));
    Complex::new(-r * half.cos(), -r * half.sin())
}
