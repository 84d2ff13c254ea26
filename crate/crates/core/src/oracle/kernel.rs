//! Closed-form space integrals of the Volkov propagator against the ground
//! state.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::faddeeva::erfcx;
use crate::model::Drive;
use crate::volkov;

/// Reduced origin action and end momenta for the chosen drive.
pub(crate) fn origin_action(t: f64, s: f64, drive: Drive) -> f64 {
    match drive {
        Drive::Cosine => volkov::origin_action(t, s),
        Drive::Off => 0.0,
    }
}

fn momenta(t: f64, s: f64, drive: Drive) -> (f64, f64) {
    match drive {
        Drive::Cosine => volkov::end_momenta(t, s),
        Drive::Off => (0.0, 0.0),
    }
}

/// `½ Σ± erfcx((κ ± i p/h)·e^{iπ/4}·sqrt(hΔ/2))`: the integral of
/// `exp(i y²/(2hΔ) ± i y p/h − κ|y|)` over the line, divided by
/// `sqrt(2πihΔ)`.
fn gaussian_exponential(kappa: f64, p: f64, h: f64, delta: f64) -> Complex64 {
    let rot = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2) * (h * delta / 2.0).sqrt();
    let a = Complex64::new(kappa, p / h) * rot;
    let b = Complex64::new(kappa, -p / h) * rot;
    0.5 * (erfcx(a) + erfcx(b))
}

/// Free evolution of the ground state observed at the origin,
/// `F(t) = ∫ U(0, t; y, 0) ψ0(y) dy`.
pub fn inhomogeneous_term(gamma: f64, h: f64, t: f64, drive: Drive) -> Complex64 {
    let kappa = gamma / h;
    if t == 0.0 {
        return Complex64::new(kappa.sqrt(), 0.0);
    }
    let (p_i, _) = momenta(t, 0.0, drive);
    let phase = Complex64::new(0.0, origin_action(t, 0.0, drive) / h).exp();
    kappa.sqrt() * phase * gaussian_exponential(kappa, p_i, h, t)
}

/// Overlap of the ground state with a source at the origin at time `s`,
/// `G(t, s) = ∫ ψ0(x) U(x, t; 0, s) dx`.
pub fn ground_overlap(gamma: f64, h: f64, t: f64, s: f64, drive: Drive) -> Complex64 {
    let kappa = gamma / h;
    let d = t - s;
    if d == 0.0 {
        return Complex64::new(kappa.sqrt(), 0.0);
    }
    let (_, p_f) = momenta(t, s, drive);
    let phase = Complex64::new(0.0, origin_action(t, s, drive) / h).exp();
    kappa.sqrt() * phase * gaussian_exponential(kappa, p_f, h, d)
}

/// `⟨ψ0|U(t, 0)|ψ0⟩` for a free particle over time `t`.
pub fn free_overlap(gamma: f64, h: f64, t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let u = Complex64::new(0.0, gamma * gamma * t / (2.0 * h)).sqrt();
    (1.0 - 2.0 * u * u) * erfcx(u) + 2.0 * u / PI.sqrt()
}

/// `⟨ψ0|U(t_f, 0)|ψ0⟩` in the field; only whole cycles are supported with the
/// drive on, where the Volkov propagator reduces to the free one times
/// `e^{−i t_f/(4h)}`.
pub fn ground_return(gamma: f64, h: f64, t_f: f64, drive: Drive) -> Complex64 {
    let free = free_overlap(gamma, h, t_f);
    match drive {
        Drive::Cosine => Complex64::new(0.0, -t_f / (4.0 * h)).exp() * free,
        Drive::Off => free,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_piecewise, QuadOptions};

    fn direct_inhomogeneous(gamma: f64, h: f64, t: f64) -> Complex64 {
        // ∫ U(0,t;y,0) ψ0(y) dy with the Gaussian rotated onto a decaying ray
        // y = r·e^{iπ/4}·sign, which is allowed because the integrand is entire
        // in y on each half line and decays in the sector.
        let kappa = gamma / h;
        let (p_i, _) = volkov::end_momenta(t, 0.0);
        let pref = Complex64::new(0.0, 2.0 * PI * h * t).sqrt().inv();
        let s0 = volkov::origin_action(t, 0.0);
        let ray = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        let mut acc = Complex64::new(0.0, 0.0);
        for sign in [1.0, -1.0] {
            let dir = ray * sign;
            let f = |r: f64| {
                let y = dir * r;
                let e =
                    Complex64::new(0.0, 1.0 / h) * (y * y / (2.0 * t) - y * p_i) - kappa * y * sign;
                e.exp() * ray
            };
            let a = (2.0 * h * t).sqrt();
            let pts = [0.0, a, 4.0 * a, 16.0 * a, 16.0 * a + 60.0 / kappa];
            let v: Complex64 = integrate_piecewise(
                f,
                &pts,
                QuadOptions {
                    abs_tol: 1e-300,
                    rel_tol: 1e-12,
                    max_depth: 60,
                },
            )
            .unwrap();
            acc += v;
        }
        kappa.sqrt() * pref * Complex64::new(0.0, s0 / h).exp() * acc
    }

    #[test]
    fn inhomogeneous_term_matches_direct_quadrature() {
        let (gamma, h) = (0.7, 0.025);
        for t in [1e-3, 0.05, 0.7, 2.0] {
            let a = inhomogeneous_term(gamma, h, t, Drive::Cosine);
            let b = direct_inhomogeneous(gamma, h, t);
            assert!((a - b).norm() < 1e-9 * b.norm(), "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn field_off_source_is_stationary() {
        // With no field, F + (coupled part) is the stationary state; at t→0 F = ψ0(0).
        let f = inhomogeneous_term(0.7, 0.025, 0.0, Drive::Off);
        assert!((f.re - 28.0f64.sqrt()).abs() < 1e-13);
        let g = ground_overlap(0.7, 0.025, 3.0, 3.0, Drive::Off);
        assert!((g.re - 28.0f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn free_overlap_limits() {
        assert!((free_overlap(0.7, 0.025, 1e-12) - 1.0).norm() < 1e-5);
        // Long times: the packet spreads away, overlap decays like t^{-1/2}.
        let a = free_overlap(0.7, 0.025, 100.0).norm();
        let b = free_overlap(0.7, 0.025, 400.0).norm();
        assert!((a / b - 2.0).abs() < 0.05);
    }
}
