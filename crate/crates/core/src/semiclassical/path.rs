use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::Scalar;
use crate::volkov;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    /// Real times throughout.
    Classical,
    /// Starts (or ends) at a complex time.
    Tunneling,
}

/// Classical solution `x(t) = −cos t + cos t_s + y + v0 (t − t_s)` of the driven
/// free particle, continued to complex times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPath<T> {
    pub t_start: Complex<T>,
    pub t_end: Complex<T>,
    pub y: Complex<T>,
    pub x: Complex<T>,
    pub v0: Complex<T>,
    pub kind: PathKind,
}

/// Complex tunnelling start time `t0 = i·asinh(γ)`, where `sin t0 = iγ`.
pub fn tunnel_start_time<T: Scalar>(gamma: T) -> Complex<T> {
    Complex::new(T::zero(), gamma.asinh())
}

pub fn make_path<T: Scalar>(
    t_start: Complex<T>,
    t_end: Complex<T>,
    y: Complex<T>,
    x: Complex<T>,
) -> Result<ComplexPath<T>> {
    let d = t_end - t_start;
    if d.norm() <= T::epsilon() * (T::one() + t_start.norm()) {
        return Err(Error::domain("make_path", "coincident endpoints"));
    }
    let v0 = (x - y + t_end.cos() - t_start.cos()) / d;
    let kind = if t_start.im == T::zero()
        && t_end.im == T::zero()
        && y.im == T::zero()
        && x.im == T::zero()
    {
        PathKind::Classical
    } else {
        PathKind::Tunneling
    };
    Ok(ComplexPath {
        t_start,
        t_end,
        y,
        x,
        v0,
        kind,
    })
}

/// Path of the k-th burst: leaves the origin at `t0 + kπ`, returns at `t_f`.
pub fn burst_path<T: Scalar>(gamma: T, k: u32, t_f: T) -> Result<ComplexPath<T>> {
    let ts = tunnel_start_time(gamma) + Complex::new(T::PI() * T::from_u32(k).unwrap(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    make_path(ts, Complex::new(t_f, T::zero()), zero, zero)
}

impl<T: Scalar> ComplexPath<T> {
    pub fn position(&self, t: Complex<T>) -> Complex<T> {
        -t.cos() + self.t_start.cos() + self.y + self.v0 * (t - self.t_start)
    }

    pub fn velocity(&self, t: Complex<T>) -> Complex<T> {
        t.sin() + self.v0
    }

    /// `L₀ = ẋ²/2 + x cos t` along the path.
    pub fn lagrangian(&self, t: Complex<T>) -> Complex<T> {
        let v = self.velocity(t);
        v * v / T::lit(2.0) + self.position(t) * t.cos()
    }

    /// Action in closed form.
    pub fn action(&self) -> Complex<T> {
        volkov::action(self.x, self.t_end, self.y, self.t_start)
    }

    /// Action by quadrature of `L₀` along the polyline
    /// `t_start → waypoints… → t_end` in the complex time plane.
    pub fn action_along(&self, waypoints: &[Complex<T>]) -> Result<Complex<T>> {
        let mut nodes = Vec::with_capacity(waypoints.len() + 2);
        nodes.push(self.t_start);
        nodes.extend_from_slice(waypoints);
        nodes.push(self.t_end);
        let opts = QuadOptions {
            abs_tol: T::epsilon(),
            rel_tol: T::lit(1e-13).max(T::epsilon() * T::lit(8.0)),
            max_depth: 40,
        };
        let mut acc = Complex::new(T::zero(), T::zero());
        for w in nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            let d = b - a;
            let seg: Complex<T> = integrate(
                |u: T| self.lagrangian(a + d * u) * d,
                T::zero(),
                T::one(),
                opts,
            )?;
            acc = acc + seg;
        }
        Ok(acc)
    }

    /// Action along the straight segment `t_start → t_end`.
    pub fn action_by_quadrature(&self) -> Result<Complex<T>> {
        self.action_along(&[])
    }
}

/// Sum of `1/|ẋ|` over sign-changing zeros of a real path on `[t_start, t_end]`.
///
/// Zeros are bracketed on a uniform grid of `2π·10⁻³` and polished by
/// bisection. Touching zeros without a sign change, including the endpoints,
/// contribute nothing.
pub fn delta_phase_of<T, X, V>(x: X, v: V, t_start: T, t_end: T) -> Result<T>
where
    T: Scalar,
    X: Fn(T) -> T,
    V: Fn(T) -> T,
{
    if t_end.partial_cmp(&t_start) != Some(core::cmp::Ordering::Greater) {
        return Err(Error::domain("delta_phase", "t_end must exceed t_start"));
    }
    let res = T::lit(2.0) * T::PI() * T::lit(1e-3);
    let n = ((t_end - t_start) / res)
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    let step = (t_end - t_start) / T::from_usize(n).unwrap();
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(4.0) * t_end.abs().max(T::one()));
    let slope_tol = T::epsilon().sqrt();
    let mut phi = T::zero();
    let mut t_prev = t_start;
    let mut x_prev = x(t_start);
    let mut i = 1;
    while i <= n {
        let t = if i == n {
            t_end
        } else {
            t_start + step * T::from_usize(i).unwrap()
        };
        let xv = x(t);
        let root = if xv == T::zero() && i < n {
            // Exact zero on the grid: a crossing only if the neighbours differ in sign.
            let t_next = t + step;
            let x_next = x(t_next.min(t_end));
            if x_prev * x_next < T::zero() {
                Some(t)
            } else {
                None
            }
        } else if x_prev * xv < T::zero() {
            let (mut a, mut b, mut fa) = (t_prev, t, x_prev);
            while b - a > tol {
                let m = (a + b) / T::lit(2.0);
                let fm = x(m);
                if fm == T::zero() {
                    a = m;
                    b = m;
                    break;
                }
                if (fm < T::zero()) == (fa < T::zero()) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            Some((a + b) / T::lit(2.0))
        } else {
            None
        };
        if let Some(r) = root {
            let s = v(r).abs();
            if s <= slope_tol {
                return Err(Error::NonTransversalCrossing {
                    time: r.to_f64_lossy(),
                });
            }
            phi = phi + T::one() / s;
            if xv == T::zero() {
                // Skip the sample we just used so it is not counted twice.
                t_prev = t + step;
                x_prev = x(t_prev);
                i += 2;
                continue;
            }
        }
        t_prev = t;
        x_prev = xv;
        i += 1;
    }
    Ok(phi)
}

/// δ-crossing phase `∫ δ(x_cl(t)) dt` of a classical path.
pub fn delta_phase<T: Scalar>(path: &ComplexPath<T>) -> Result<T> {
    if path.kind != PathKind::Classical {
        return Err(Error::domain(
            "delta_phase",
            "requires a real-time classical path",
        ));
    }
    let re = |t: T| Complex::new(t, T::zero());
    delta_phase_of(
        |t| path.position(re(t)).re,
        |t| path.velocity(re(t)).re,
        path.t_start.re,
        path.t_end.re,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn tunnel_time_values() {
        assert_eq!(tunnel_start_time(0.0), c(0.0, 0.0));
        let t0 = tunnel_start_time(0.7);
        assert_relative_eq!(t0.im, 0.652_667, max_relative = 1e-6);
        assert_relative_eq!(
            tunnel_start_time(1.1).cos().re,
            2.21_f64.sqrt(),
            max_relative = 1e-14
        );
        for i in 1..=500 {
            let g = i as f64 / 100.0;
            let t0 = tunnel_start_time(g);
            assert!(
                (t0.cos() - c((1.0 + g * g).sqrt(), 0.0)).norm() <= 1e-14 * (1.0 + g * g).sqrt()
            );
            assert!((t0.sin() - c(0.0, g)).norm() <= 1e-14 * g.max(1.0));
        }
    }

    #[test]
    fn make_path_examples() {
        let p = make_path(c(0.0, 0.0), c(2.0 * PI, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(p.v0.norm() < 1e-15);
        assert_eq!(p.kind, PathKind::Classical);
        assert!((p.position(c(1.0, 0.0)) - c(1.0 - 1.0_f64.cos(), 0.0)).norm() < 1e-15);

        let t0 = tunnel_start_time(0.7);
        let q = make_path(t0, c(2.0 * PI, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let expected = c(1.0 - 1.49_f64.sqrt(), 0.0) / c(2.0 * PI, -0.652_666_566_082_355_8);
        assert!((q.v0 - expected).norm() < 1e-12);
        assert_eq!(q.kind, PathKind::Tunneling);
        assert!((q.position(q.t_start) - q.y).norm() < 1e-12);
        assert!((q.position(q.t_end) - q.x).norm() < 1e-12);
        assert!(make_path(t0, t0, c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn burst_start_momentum() {
        for k in 0..4u32 {
            let p = burst_path(0.7, k, 4.0 * PI).unwrap();
            let field_part = p.t_start.sin();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(field_part.im, sign * 0.7, max_relative = 1e-14);
        }
    }

    #[test]
    fn action_of_the_closed_loop() {
        for z in [1.0, 10.0, 17.3] {
            let h = 1.0 / (4.0 * z);
            for n in 1..=3 {
                let tf = 2.0 * PI * n as f64;
                let p = make_path(c(0.0, 0.0), c(tf, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
                assert_relative_eq!(p.action().re / h, -z * tf, max_relative = 1e-13);
                assert_relative_eq!(
                    p.action_by_quadrature().unwrap().re / h,
                    -z * tf,
                    max_relative = 1e-11
                );
            }
        }
    }

    #[test]
    fn action_vanishes_for_short_paths() {
        let t0 = tunnel_start_time(0.7);
        let p = make_path(t0, t0 + c(1e-6, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!(p.action().norm() < 1e-5);
    }

    #[test]
    fn tunneling_action_closed_form_vs_contour() {
        let p = burst_path(0.7, 0, 2.0 * PI).unwrap();
        let a = p.action();
        let b = p.action_by_quadrature().unwrap();
        assert!((a - b).norm() <= 1e-8 * a.norm());
        // Down the imaginary axis to 0, then along the real axis.
        let c2 = p.action_along(&[c(0.0, 0.0)]).unwrap();
        assert!((a - c2).norm() <= 1e-8 * a.norm());
    }

    #[test]
    fn general_endpoints_closed_form_vs_contour() {
        let p = make_path(c(0.3, 0.4), c(5.0, -0.2), c(0.5, 0.1), c(-1.2, 0.3)).unwrap();
        let a = p.action();
        let b = p.action_along(&[c(1.0, 1.0), c(4.0, -1.0)]).unwrap();
        assert!((a - b).norm() <= 1e-10 * a.norm());
    }

    #[test]
    fn delta_phase_examples() {
        let p = make_path(c(0.0, 0.0), c(2.0 * PI, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(delta_phase(&p).unwrap(), 0.0);
        assert_relative_eq!(
            delta_phase_of(|t: f64| t - 1.0, |_| 1.0, 0.0, 2.0).unwrap(),
            1.0,
            max_relative = 1e-12
        );
        let phi = delta_phase_of(|t: f64| t.sin(), |t: f64| t.cos(), 0.5, 2.0 * PI - 0.5).unwrap();
        assert_relative_eq!(phi, 1.0, max_relative = 1e-10);
        // Zero exactly on a grid sample.
        let r = 250.0 * (PI / 500.0);
        assert_relative_eq!(
            delta_phase_of(|t: f64| 2.0 * (t - r), |_| 2.0, 0.0, PI).unwrap(),
            0.5,
            max_relative = 1e-12
        );
    }

    #[test]
    fn tangential_crossing_rejected() {
        let e = delta_phase_of(
            |t: f64| (t - 1.0).powi(3),
            |t: f64| 3.0 * (t - 1.0).powi(2),
            0.0,
            2.1,
        );
        assert!(matches!(e, Err(Error::NonTransversalCrossing { .. })));
        let p = burst_path(0.7, 0, 2.0 * PI).unwrap();
        assert!(delta_phase(&p).is_err());
    }

    #[test]
    fn drifting_path_crossings() {
        // x = −cos t + 1 − 0.5 (t) crosses once per return through the origin.
        let p = make_path(
            c(0.0, 0.0),
            c(3.0 * PI, 0.0),
            c(0.0, 0.0),
            c(2.0 - 1.5 * PI, 0.0),
        )
        .unwrap();
        let phi = delta_phase(&p).unwrap();
        assert!(phi > 0.0 && phi.is_finite());
    }
}
