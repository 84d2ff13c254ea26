//! Adaptive Gauss–Kronrod and fixed Gauss–Legendre rules.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Values that can be integrated: real or complex.
pub trait QuadValue<T>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> T;
}

impl<T: Scalar> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn magnitude(self) -> T {
        self.abs()
    }
}

impl<T: Scalar> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn magnitude(self) -> T {
        self.norm()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_depth: u32,
}

impl<T: Scalar> Default for QuadOptions<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            abs_tol: eps * T::lit(16.0),
            rel_tol: (eps * T::lit(1e6)).max(T::lit(1e-10)),
            max_depth: 40,
        }
    }
}

fn gk15<T: Scalar, V: QuadValue<T>, F: FnMut(T) -> V>(f: &mut F, a: T, b: T) -> (V, T) {
    let c = (a + b) / T::lit(2.0);
    let hw = (b - a) / T::lit(2.0);
    let fc = f(c);
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = hw * T::lit(XGK[j]);
        let s = f(c - dx) + f(c + dx);
        kron = kron + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * T::lit(WG[j / 2]);
        }
    }
    let kron = kron * hw;
    let gauss = gauss * hw;
    (kron, (kron - gauss).magnitude())
}

/// Globally adaptive G7–K15 integration of `f` over `[a, b]`.
pub fn integrate<T, V, F>(mut f: F, a: T, b: T, opts: QuadOptions<T>) -> Result<V>
where
    T: Scalar,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    if a == b {
        return Ok(V::zero());
    }
    struct Seg<T, V> {
        a: T,
        b: T,
        val: V,
        err: T,
        depth: u32,
    }
    let (val, err) = gk15(&mut f, a, b);
    let mut segs = vec![Seg {
        a,
        b,
        val,
        err,
        depth: 0,
    }];
    let mut total = val;
    let mut total_err = err;
    let max_segments = 4000;
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if total_err <= tol {
            return Ok(total);
        }
        let (idx, _) = segs.iter().enumerate().fold((0, -T::one()), |acc, (i, s)| {
            if s.err > acc.1 {
                (i, s.err)
            } else {
                acc
            }
        });
        let s = segs.swap_remove(idx);
        if s.depth >= opts.max_depth || segs.len() >= max_segments || !total_err.is_finite() {
            return Err(Error::QuadratureFailed {
                tolerance: tol.to_f64_lossy(),
                estimate: total_err.to_f64_lossy(),
            });
        }
        let m = (s.a + s.b) / T::lit(2.0);
        let (v1, e1) = gk15(&mut f, s.a, m);
        let (v2, e2) = gk15(&mut f, m, s.b);
        total = total - s.val + v1 + v2;
        total_err = total_err - s.err + e1 + e2;
        segs.push(Seg {
            a: s.a,
            b: m,
            val: v1,
            err: e1,
            depth: s.depth + 1,
        });
        segs.push(Seg {
            a: m,
            b: s.b,
            val: v2,
            err: e2,
            depth: s.depth + 1,
        });
        // Re-sum now and then so the running error does not drift.
        if segs.len() % 64 == 0 {
            total = segs.iter().fold(V::zero(), |acc, s| acc + s.val);
            total_err = segs.iter().fold(T::zero(), |acc, s| acc + s.err);
        }
    }
}

/// Integrates over consecutive breakpoints `pts[0] < pts[1] < ...`.
pub fn integrate_piecewise<T, V, F>(mut f: F, pts: &[T], opts: QuadOptions<T>) -> Result<V>
where
    T: Scalar,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let mut acc = V::zero();
    for w in pts.windows(2) {
        acc = acc + integrate(&mut f, w[0], w[1], opts)?;
    }
    Ok(acc)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let v: f64 = integrate(
            |x: f64| x.powi(5) - 3.0 * x * x,
            -1.0,
            2.0,
            QuadOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(v, 64.0 / 6.0 - 1.0 / 6.0 - 9.0, max_relative = 1e-13);
    }

    #[test]
    fn peaked_integrand() {
        let h = 1e-3_f64;
        let v: f64 = integrate(
            |x: f64| (-x * x / h).exp(),
            -1.0,
            1.0,
            QuadOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(v, (std::f64::consts::PI * h).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn complex_oscillatory() {
        let v: Complex<f64> = integrate(
            |x: f64| Complex::new(0.0, 20.0 * x).exp(),
            0.0,
            1.0,
            QuadOptions::default(),
        )
        .unwrap();
        let exact = (Complex::new(0.0, 20.0).exp() - 1.0) / Complex::new(0.0, 20.0);
        assert!((v - exact).norm() < 1e-12);
    }

    #[test]
    fn legendre_rules() {
        for n in [1, 2, 5, 12, 16, 31] {
            let (x, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
            let deg = 2 * n - 2;
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert_relative_eq!(q, 2.0 / (deg as f64 + 1.0), max_relative = 1e-13);
        }
    }
}
