use std::f64::consts::PI;

use num_complex::Complex64;

use super::kernel::{inhomogeneous_term, origin_action};
use crate::error::{Error, Result};
use crate::model::{Drive, ModelParams};
use crate::quadrature::gauss_legendre;

/// Boundary function `f(t) = ψ(0, t)` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VolterraGrid {
    pub params: ModelParams<f64>,
    pub drive: Drive,
    pub dt: f64,
    pub steps_per_cycle: usize,
    pub n_steps: usize,
    pub f: Vec<Complex64>,
}

impl VolterraGrid {
    pub fn time(&self, j: usize) -> f64 {
        j as f64 * self.dt
    }

    /// Bound-state angular frequency `γ²/(2h)`.
    pub fn bound_frequency(&self) -> f64 {
        bound_frequency(&self.params)
    }

    pub fn cycles(&self) -> usize {
        self.n_steps / self.steps_per_cycle
    }
}

pub(crate) fn bound_frequency(p: &ModelParams<f64>) -> f64 {
    p.gamma * p.gamma / (2.0 * p.h)
}

/// Default step `min(2π, h/γ²)/divisor`, shortened so a cycle holds an
/// integer number of steps.
pub fn default_dt(params: &ModelParams<f64>, divisor: f64) -> f64 {
    snap_dt(((2.0 * PI).min(params.h / (params.gamma * params.gamma))) / divisor)
}

pub(crate) fn snap_dt(dt: f64) -> f64 {
    2.0 * PI / (2.0 * PI / dt).ceil()
}

/// Product-integration moments `P[m]`, `Q[m]` for `m = 1..=n` of the kernel
/// `x^{-1/2} e^{−iλx}` against the two linear hats on `[m−1, m]`.
fn moments(lambda: f64, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let (gx, gw) = gauss_legendre(16);
    let mut p = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut q = vec![Complex64::new(0.0, 0.0); n + 1];
    for m in 1..=n {
        let lo = ((m - 1) as f64).sqrt();
        let hi = (m as f64).sqrt();
        let (c, hw) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        let (mut pm, mut qm) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (x, w) in gx.iter().zip(&gw) {
            let y = c + hw * x;
            let x2 = y * y;
            // x = y², x^{-1/2} dx = 2 dy
            let e = Complex64::from_polar(2.0 * w * hw, -lambda * x2);
            pm += e * (x2 - (m - 1) as f64);
            qm += e * (m as f64 - x2);
        }
        p[m] = pm;
        q[m] = qm;
    }
    (p, q)
}

/// Solves `f = F + iγ ∫₀ᵗ K(t, s) f(s) ds` with
/// `K = e^{iS₀(t,s)/h}/sqrt(2πih(t−s))` for `cycles` field periods.
///
/// The bound-state rotation `e^{iγ²t/(2h)}` is divided out before
/// discretising, and the remaining weakly singular integral is evaluated by
/// product integration with piecewise-linear interpolation.
pub fn solve_boundary_function(
    params: &ModelParams<f64>,
    cycles: u32,
    dt: f64,
    drive: Drive,
) -> Result<VolterraGrid> {
    if cycles == 0 {
        return Err(Error::param("cycles", "need at least one cycle"));
    }
    if !(dt.is_finite() && dt > 0.0 && dt <= 2.0 * PI) {
        return Err(Error::param("dt", format!("must lie in (0, 2π], got {dt}")));
    }
    let m = (2.0 * PI / dt).round() as usize;
    if ((2.0 * PI / m as f64) - dt).abs() > 1e-9 * dt {
        return Err(Error::param(
            "dt",
            "must divide the field period; use default_dt or snap it",
        ));
    }
    let dt = 2.0 * PI / m as f64;
    let n = m * cycles as usize;
    let (gamma, h) = (params.gamma, params.h);
    let wb = bound_frequency(params);
    let (pw, qw) = moments(wb * dt, n + 1);
    let kcomb: Vec<Complex64> = (0..=n)
        .map(|k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                pw[k] + qw[k + 1]
            }
        })
        .collect();
    let coupling =
        Complex64::new(0.0, gamma) / Complex64::new(0.0, 2.0 * PI * h).sqrt() * dt.sqrt();
    let denom = Complex64::new(1.0, 0.0) - coupling * qw[1];

    let times: Vec<f64> = (0..=n).map(|j| j as f64 * dt).collect();
    let cos_t: Vec<f64> = times.iter().map(|t| t.cos()).collect();
    let sin2t: Vec<f64> = times.iter().map(|t| (2.0 * t).sin()).collect();
    let inv_h = 1.0 / h;

    let mut g = vec![Complex64::new(0.0, 0.0); n + 1];
    g[0] = Complex64::new((gamma / h).sqrt(), 0.0);
    for j in 1..=n {
        let tj = times[j];
        let mut acc = Complex64::new(0.0, 0.0);
        match drive {
            Drive::Cosine => {
                let (cj, sj) = (cos_t[j], sin2t[j]);
                for i in 0..j {
                    let d = (j - i) as f64 * dt;
                    let c = cj - cos_t[i];
                    let s0 = -0.25 * d + 0.125 * (sj - sin2t[i]) + c * c / (2.0 * d);
                    let (sn, cs) = (s0 * inv_h).sin_cos();
                    acc += kcomb[j - i] * Complex64::new(cs, sn) * g[i];
                }
                let e0 = Complex64::from_polar(1.0, origin_action(tj, 0.0, drive) * inv_h);
                acc -= qw[j + 1] * e0 * g[0];
            }
            Drive::Off => {
                for i in 0..j {
                    acc += kcomb[j - i] * g[i];
                }
                acc -= qw[j + 1] * g[0];
            }
        }
        let src = inhomogeneous_term(gamma, h, tj, drive) * Complex64::from_polar(1.0, -wb * tj);
        let gj = (src + coupling * acc) / denom;
        if !gj.re.is_finite() || !gj.im.is_finite() {
            return Err(Error::numeric(
                "solve_boundary_function",
                format!("non-finite value at step {j}"),
            ));
        }
        g[j] = gj;
    }
    let f = g
        .iter()
        .zip(&times)
        .map(|(g, t)| g * Complex64::from_polar(1.0, wb * t))
        .collect();
    Ok(VolterraGrid {
        params: *params,
        drive,
        dt,
        steps_per_cycle: m,
        n_steps: n,
        f,
    })
}
