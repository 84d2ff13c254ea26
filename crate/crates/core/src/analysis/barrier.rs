//! Classically forbidden motion in imaginary time for the inverted oscillator
//! `V(x) = −x²/2` at energy `E = −1/2`, where the turning points are `x = ±1`.
//!
//! The traversal time `∫_{−1}^{1} dx / sqrt(2E + x²)` equals `iπ` on the
//! branch of the square root that yields decaying solutions, and the
//! trajectory `x(t) = −cosh t` continued along `0 → iπ` moves from one
//! turning point to the other.

use num_complex::Complex64;

use crate::error::Result;
use crate::quadrature::{gauss_legendre, integrate, QuadOptions};
use crate::semiclassical::SqrtBranch;

pub const BARRIER_ENERGY: f64 = -0.5;

/// `iπ` for the default branch, computed with `x = sin θ`.
pub fn appendix_c_demo() -> Complex64 {
    traversal_time_through_barrier(SqrtBranch::Negative)
}

/// The barrier traversal time on a chosen square-root branch.
pub fn traversal_time_through_barrier(branch: SqrtBranch) -> Complex64 {
    // x = sin θ removes the inverse square-root singularities at ±1.
    let (x, w) = gauss_legendre(24);
    let half = std::f64::consts::FRAC_PI_2;
    x.iter()
        .zip(&w)
        .map(|(u, wi)| {
            let th = half * u;
            let radicand = Complex64::new(2.0 * BARRIER_ENERGY + th.sin() * th.sin(), 0.0);
            th.cos() / branch.sqrt(radicand) * (wi * half)
        })
        .sum()
}

/// `∫_a^b dx / sqrt(2E + x²)` for an interval inside the allowed region
/// `|x| > 1` (not touching the turning points).
pub fn traversal_time(a: f64, b: f64) -> Result<Complex64> {
    let f = |x: f64| {
        Complex64::new(1.0, 0.0) / Complex64::new(2.0 * BARRIER_ENERGY + x * x, 0.0).sqrt()
    };
    integrate(
        f,
        a,
        b,
        QuadOptions {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_depth: 40,
        },
    )
}

/// Classical trajectory `x(t) = −cosh t` at complex time.
pub fn barrier_path(t: Complex64) -> Complex64 {
    -t.cosh()
}

/// Samples `(t, x(t))` along the contour `−L → 0 → iπ → iπ + L`, with
/// `per_leg` points on each of the three legs.
pub fn barrier_contour(leg_length: f64, per_leg: usize) -> Vec<(Complex64, Complex64)> {
    let n = per_leg.max(2);
    let ip = Complex64::new(0.0, std::f64::consts::PI);
    let legs = [
        (Complex64::new(-leg_length, 0.0), Complex64::new(0.0, 0.0)),
        (Complex64::new(0.0, 0.0), ip),
        (ip, ip + leg_length),
    ];
    let mut out = Vec::with_capacity(3 * n);
    for (a, b) in legs {
        for i in 0..n {
            let t = a + (b - a) * (i as f64 / (n - 1) as f64);
            out.push((t, barrier_path(t)));
        }
    }
    out
}
