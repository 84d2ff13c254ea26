//! Faddeeva function `w(z) = e^{−z²} erfc(−iz)` and the complex error
//! functions derived from it.
//!
//! Far from the origin `w` is evaluated by its Laplace continued fraction.
//! Inside the disc `|z| < R` a table of values on a square lattice is built
//! once, descending from the continued-fraction values on the top edge, and
//! `w` is expanded in a Taylor series about the nearest lattice point using
//! the recurrence that follows from `w' = −2zw + 2i/√π`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

const R: f64 = 8.0;
const STEP: f64 = 0.25;
const N: usize = 33;
const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Convention object for the complex error functions.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexErf;

impl ComplexErf {
    pub fn w(self, z: Complex64) -> Complex64 {
        faddeeva(z)
    }

    pub fn erfcx(self, z: Complex64) -> Complex64 {
        erfcx(z)
    }

    pub fn erfc(self, z: Complex64) -> Complex64 {
        erfc(z)
    }

    pub fn erf(self, z: Complex64) -> Complex64 {
        erf(z)
    }
}

fn continued_fraction(z: Complex64) -> Complex64 {
    let r = z.norm();
    let depth = if r < 12.0 {
        90
    } else if r < 30.0 {
        40
    } else {
        16
    };
    let mut acc = z;
    for k in (1..=depth).rev() {
        acc = z - (k as f64 / 2.0) / acc;
    }
    Complex64::new(0.0, 1.0 / PI.sqrt()) / acc
}

/// Taylor expansion of `w` about `c` (where `w(c) = w0`) evaluated at `c + d`.
fn taylor(c: Complex64, w0: Complex64, d: Complex64) -> Complex64 {
    let mut a_prev = w0;
    let mut a = -2.0 * c * w0 + Complex64::new(0.0, FRAC_2_SQRT_PI);
    let mut dn = d;
    let mut sum = w0 + a * d;
    for n in 1..80 {
        let a_next = (-2.0 * c * a - 2.0 * a_prev) / (n as f64 + 1.0);
        a_prev = a;
        a = a_next;
        dn *= d;
        let term = a * dn;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && n > 4 {
            break;
        }
    }
    sum
}

fn table() -> &'static Vec<Complex64> {
    static TABLE: OnceLock<Vec<Complex64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![Complex64::new(0.0, 0.0); N * N];
        let idx = |i: usize, j: usize| j * N + i;
        for i in 0..N {
            let x = i as f64 * STEP;
            t[idx(i, N - 1)] = continued_fraction(Complex64::new(x, (N - 1) as f64 * STEP));
            for j in (0..N - 1).rev() {
                let c = Complex64::new(x, j as f64 * STEP);
                t[idx(i, j)] = if c.norm() >= R {
                    continued_fraction(c)
                } else {
                    let above = Complex64::new(x, (j + 1) as f64 * STEP);
                    taylor(above, t[idx(i, j + 1)], Complex64::new(0.0, -STEP))
                };
            }
        }
        t
    })
}

/// `w(z)` for `Im z ≥ 0`, `Re z ≥ 0`.
fn w_quadrant(z: Complex64) -> Complex64 {
    if z.norm() >= R {
        return continued_fraction(z);
    }
    let i = (z.re / STEP).round() as usize;
    let j = (z.im / STEP).round() as usize;
    let c = Complex64::new(i as f64 * STEP, j as f64 * STEP);
    taylor(c, table()[j * N + i], z - c)
}

/// Faddeeva function `w(z) = e^{−z²} erfc(−iz)`.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        if z.re >= 0.0 {
            w_quadrant(z)
        } else {
            w_quadrant(Complex64::new(-z.re, z.im)).conj()
        }
    } else {
        2.0 * (-z * z).exp() - faddeeva(-z)
    }
}

/// Scaled complementary error function `erfcx(z) = e^{z²} erfc(z) = w(iz)`.
pub fn erfcx(z: Complex64) -> Complex64 {
    faddeeva(Complex64::new(-z.im, z.re))
}

pub fn erfc(z: Complex64) -> Complex64 {
    if z.re >= 0.0 {
        (-z * z).exp() * erfcx(z)
    } else {
        2.0 - erfc(-z)
    }
}

pub fn erf(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // Maclaurin series avoids the cancellation in 1 − erfc.
        let z2 = z * z;
        let mut term = z;
        let mut sum = z;
        for n in 1..40 {
            term *= -z2 / n as f64;
            let t = term / (2 * n + 1) as f64;
            sum += t;
            if t.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        sum * FRAC_2_SQRT_PI
    } else {
        1.0 - erfc(z)
    }
}
