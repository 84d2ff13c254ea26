use num_complex::Complex64;

use super::kernel::{ground_overlap, ground_return};
use super::volterra::VolterraGrid;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

const GL_POINTS: usize = 12;

/// Survival amplitude and probability after some whole number of cycles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Survival {
    pub cycles: usize,
    pub p: Complex64,
    pub w: f64,
}

/// Four-point Lagrange interpolation of the slowly varying part of `f`.
fn interpolate(g: &[Complex64], last: usize, dt: f64, s: f64) -> Complex64 {
    let x = s / dt;
    let base = (x.floor() as isize - 1).clamp(0, last.saturating_sub(3) as isize) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..4 {
        let ia = base + a;
        let mut l = 1.0;
        for b in 0..4 {
            if b != a {
                let ib = (base + b) as f64;
                l *= (x - ib) / (ia as f64 - ib);
            }
        }
        acc += g[ia] * l;
    }
    acc
}

/// `⟨ψ0|ψ(t_f)⟩` at `t_f = 2π·cycles`, from the Duhamel representation
/// `⟨ψ0|U(t_f,0)|ψ0⟩ + iγ ∫₀^{t_f} G(t_f, s) f(s) ds`.
///
/// The time integral is taken in `σ = sqrt(t_f − s)`, which removes the
/// square-root behaviour of `G` at `s = t_f`.
pub fn survival_at(grid: &VolterraGrid, cycles: usize) -> Result<Survival> {
    if cycles == 0 || cycles > grid.cycles() {
        return Err(Error::param(
            "cycles",
            format!("must lie in 1..={}", grid.cycles()),
        ));
    }
    let (gamma, h) = (grid.params.gamma, grid.params.h);
    let last = cycles * grid.steps_per_cycle;
    let tf = grid.time(last);
    let wb = grid.bound_frequency();
    let g: Vec<Complex64> = grid.f[..=last]
        .iter()
        .enumerate()
        .map(|(j, f)| f * Complex64::from_polar(1.0, -wb * grid.time(j)))
        .collect();

    let omega_max = wb + 1.0 / h + 1.0;
    let sigma_max = tf.sqrt();
    let panels = (2.0 * omega_max * tf).ceil() as usize + 4;
    let width = sigma_max / panels as f64;
    let (gx, gw) = gauss_legendre(GL_POINTS);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let c = (k as f64 + 0.5) * width;
        for (x, w) in gx.iter().zip(&gw) {
            let sigma = c + 0.5 * width * x;
            let s = (tf - sigma * sigma).max(0.0);
            let f = interpolate(&g, last, grid.dt, s) * Complex64::from_polar(1.0, wb * s);
            acc +=
                ground_overlap(gamma, h, tf, s, grid.drive) * f * (2.0 * sigma * w * 0.5 * width);
        }
    }
    let p = ground_return(gamma, h, tf, grid.drive) + Complex64::new(0.0, gamma) * acc;
    if !p.re.is_finite() || !p.im.is_finite() {
        return Err(Error::numeric("survival_at", "non-finite projection"));
    }
    Ok(Survival {
        cycles,
        p,
        w: p.norm_sqr(),
    })
}

/// Projection after every whole cycle held by the grid.
pub fn survival_history(grid: &VolterraGrid) -> Result<Vec<Survival>> {
    (1..=grid.cycles()).map(|c| survival_at(grid, c)).collect()
}

/// Projection at the end of the grid.
pub fn survival_probability(grid: &VolterraGrid) -> Result<Survival> {
    survival_at(grid, grid.cycles())
}
