//! Classical action of the driven free particle (`V₀ = −x cos t`), shared by
//! the semiclassical propagator and the Volterra oracle kernel.
//!
//! With `Δ = t − s` and `c = cos t − cos s` the action along the classical path
//! from `(y, s)` to `(x, t)` is
//! `S = S₀(t, s) + (x − y)²/(2Δ) + x·p_f − y·p_i`, where
//! `S₀ = −Δ/4 + (sin 2t − sin 2s)/8 + c²/(2Δ)`, `p_f = sin t + c/Δ`,
//! `p_i = sin s + c/Δ`.

use num_complex::Complex;

use crate::scalar::Scalar;

/// Action between the origin and the origin, real times.
pub fn origin_action<T: Scalar>(t: T, s: T) -> T {
    let d = t - s;
    let c = t.cos() - s.cos();
    let two = T::lit(2.0);
    -d / T::lit(4.0) + ((two * t).sin() - (two * s).sin()) / T::lit(8.0) + c * c / (two * d)
}

/// Momenta `(p_i, p_f)` at the two ends of the origin-to-origin path.
pub fn end_momenta<T: Scalar>(t: T, s: T) -> (T, T) {
    let d = t - s;
    let drift = (t.cos() - s.cos()) / d;
    (s.sin() + drift, t.sin() + drift)
}

/// Full action `S(x, t; y, s)` for complex times and positions.
pub fn action<T: Scalar>(x: Complex<T>, t: Complex<T>, y: Complex<T>, s: Complex<T>) -> Complex<T> {
    let two = T::lit(2.0);
    let d = t - s;
    let c = t.cos() - s.cos();
    let s0 =
        -d / T::lit(4.0) + ((t * two).sin() - (s * two).sin()) / T::lit(8.0) + c * c / (d * two);
    let drift = c / d;
    let pf = t.sin() + drift;
    let pi = s.sin() + drift;
    let dx = x - y;
    s0 + dx * dx / (d * two) + x * pf - y * pi
}
