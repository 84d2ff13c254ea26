//! Adiabatic (slowly varying field) quantities: instantaneous tunnelling rate,
//! AC Stark shift, quasi-energy and the saddle-point machinery used to average
//! them over a cycle.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::quadrature::{integrate_piecewise, QuadOptions};
use crate::scalar::Scalar;

fn check_eta<T: Scalar>(op: &'static str, eta: T, allow_zero: bool) -> Result<()> {
    let ok = eta.is_finite()
        && eta <= T::one()
        && if allow_zero {
            eta >= T::zero()
        } else {
            eta > T::zero()
        };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(
            op,
            format!(
                "eta = {eta} outside {}",
                if allow_zero { "[0, 1]" } else { "(0, 1]" }
            ),
        ))
    }
}

/// Tunnelling rate at instantaneous field fraction `η`,
/// `D(η) = (γ²/h) exp(−2γ³/(3ηh))`.
pub fn rate_instantaneous<T: Scalar>(params: &ModelParams<T>, eta: T) -> Result<T> {
    check_eta("rate_instantaneous", eta, false)?;
    let g = params.gamma;
    let h = params.h;
    Ok(g * g / h * (-(T::lit(2.0) * g * g * g) / (T::lit(3.0) * eta * h)).exp())
}

/// Rate at `η = |cos t|`, continuous through the field zeros where it vanishes.
fn rate_at_phase<T: Scalar>(params: &ModelParams<T>, t: T) -> T {
    let eta = t.cos().abs();
    if eta <= T::zero() {
        T::zero()
    } else {
        rate_instantaneous(params, eta.min(T::one())).unwrap_or(T::zero())
    }
}

/// Cycle average of `D(|cos t|)` in the saddle-point approximation,
/// `D̄ = sqrt(3h/(πγ³)) D(1)`.
pub fn rate_cycle_averaged<T: Scalar>(params: &ModelParams<T>) -> T {
    let g = params.gamma;
    let h = params.h;
    let d1 = rate_instantaneous(params, T::one()).unwrap();
    (T::lit(3.0) * h / (T::PI() * g * g * g)).sqrt() * d1
}

fn quad_opts<T: Scalar>() -> QuadOptions<T> {
    QuadOptions {
        abs_tol: T::min_positive_value(),
        rel_tol: T::lit(1e-10).max(T::epsilon() * T::lit(64.0)),
        max_depth: 60,
    }
}

/// Full-cycle average `(1/2π) ∫₀^{2π} D(|cos t|) dt` by adaptive quadrature.
pub fn cycle_average_quadrature<T: Scalar>(params: &ModelParams<T>) -> Result<T> {
    let pi = T::PI();
    let half = pi / T::lit(2.0);
    let pts = [T::zero(), half, pi, pi + half, pi + pi];
    let v: T = integrate_piecewise(|t| rate_at_phase(params, t), &pts, quad_opts())?;
    Ok(v / (T::lit(2.0) * pi))
}

/// Quarter-cycle average `(2/π) ∫₀^{π/2} D(cos t) dt`; equal to the full
/// average by symmetry of `|cos t|`.
pub fn quarter_cycle_average<T: Scalar>(params: &ModelParams<T>) -> Result<T> {
    let half = T::PI() / T::lit(2.0);
    let v: T = integrate_piecewise(
        |t| rate_at_phase(params, t),
        &[T::zero(), half],
        quad_opts(),
    )?;
    Ok(v / half)
}

/// Second-order AC Stark shift `E^AC(η) = −5h²η²/(8γ⁴)`.
pub fn stark_shift<T: Scalar>(params: &ModelParams<T>, eta: T) -> Result<T> {
    check_eta("stark_shift", eta, true)?;
    let g2 = params.gamma * params.gamma;
    let h = params.h;
    Ok(-T::lit(5.0) * h * h * eta * eta / (T::lit(8.0) * g2 * g2))
}

/// Cycle-averaged Stark shift, half the peak value.
pub fn stark_shift_averaged<T: Scalar>(params: &ModelParams<T>) -> T {
    stark_shift(params, T::one()).unwrap() / T::lit(2.0)
}

/// Bound-state quasi-energy and its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiEnergy<T> {
    pub e0: T,
    pub e_ac: T,
    /// Purely imaginary decay part `−(ih/2)·D`.
    pub e_i: Complex<T>,
    pub e_m: Complex<T>,
}

impl<T: Scalar> QuasiEnergy<T> {
    fn assemble(e0: T, e_ac: T, decay: T, h: T) -> Self {
        let e_i = Complex::new(T::zero(), -h * decay / T::lit(2.0));
        Self {
            e0,
            e_ac,
            e_i,
            e_m: Complex::new(e0 + e_ac, T::zero()) + e_i,
        }
    }

    /// Quasi-energy with the field switched off: just the bound-state energy.
    pub fn field_off(params: &ModelParams<T>) -> Self {
        Self::assemble(
            params.ground_state().energy(),
            T::zero(),
            T::zero(),
            params.h,
        )
    }
}

/// Instantaneous quasi-energy `E^m(η) = E0 + E^AC(η) + E^I(η)`.
pub fn quasi_energy<T: Scalar>(params: &ModelParams<T>, eta: T) -> Result<QuasiEnergy<T>> {
    let e_ac = stark_shift(params, eta)?;
    let d = if eta > T::zero() {
        rate_instantaneous(params, eta)?
    } else {
        T::zero()
    };
    Ok(QuasiEnergy::assemble(
        params.ground_state().energy(),
        e_ac,
        d,
        params.h,
    ))
}

/// Cycle-averaged quasi-energy `Ē^m = −γ²/2 + Ē^AC − (ih/2)·D̄`.
pub fn quasi_energy_averaged<T: Scalar>(params: &ModelParams<T>) -> QuasiEnergy<T> {
    QuasiEnergy::assemble(
        params.ground_state().energy(),
        stark_shift_averaged(params),
        rate_cycle_averaged(params),
        params.h,
    )
}

/// Bound-state evolution factor `exp(−(i/h)·E·t)` over a possibly complex
/// duration.
pub fn propagator_factor<T: Scalar>(energy: Complex<T>, h: T, duration: Complex<T>) -> Complex<T> {
    (Complex::new(T::zero(), -T::one() / h) * energy * duration).exp()
}

/// `exp(−(i/h)·Ē^m·t)` with the cycle-averaged quasi-energy.
pub fn bound_propagator_factor<T: Scalar>(
    params: &ModelParams<T>,
    duration: Complex<T>,
) -> Complex<T> {
    propagator_factor(quasi_energy_averaged(params).e_m, params.h, duration)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleMethod {
    /// `∫ g e^{−f/h}` around minima of `f`.
    SteepestDescent,
    /// `∫ g e^{if/h}` around stationary points of `f`.
    StationaryPhase,
}

/// A stationary point, optionally with its known second derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint<T> {
    pub location: T,
    pub curvature: Option<T>,
}

impl<T> StationaryPoint<T> {
    pub fn new(location: T) -> Self {
        Self {
            location,
            curvature: None,
        }
    }

    pub fn with_curvature(location: T, curvature: T) -> Self {
        Self {
            location,
            curvature: Some(curvature),
        }
    }
}

/// Central second difference with step `ε^{1/3}·max(1, |t|)`.
pub fn second_derivative<T: Scalar, F: Fn(T) -> T>(f: &F, t: T) -> T {
    let step = T::epsilon().cbrt() * T::one().max(t.abs());
    (f(t + step) - T::lit(2.0) * f(t) + f(t - step)) / (step * step)
}

/// Leading-order asymptotic value of `∫ g(t) e^{−f(t)/h} dt` (descent) or
/// `∫ g(t) e^{i f(t)/h} dt` (stationary phase), summed over `points`.
pub fn saddle_point_integral<T, F, G>(
    f: F,
    g: G,
    h: T,
    points: &[StationaryPoint<T>],
    method: SaddleMethod,
) -> Result<Complex<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
    G: Fn(T) -> T,
{
    if !(h.is_finite() && h > T::zero()) {
        return Err(Error::param("h", format!("must be > 0, got {h}")));
    }
    let two_pi_h = T::lit(2.0) * T::PI() * h;
    let mut acc = Complex::new(T::zero(), T::zero());
    for p in points {
        let t0 = p.location;
        let f2 = p.curvature.unwrap_or_else(|| second_derivative(&f, t0));
        let scale = f(t0).abs().max(T::one());
        if !f2.is_finite() || f2.abs() <= T::epsilon().sqrt() * scale {
            return Err(Error::DegenerateSaddle {
                location: t0.to_f64_lossy(),
            });
        }
        let term = match method {
            SaddleMethod::SteepestDescent => {
                if f2 < T::zero() {
                    return Err(Error::NotAMinimum {
                        location: t0.to_f64_lossy(),
                        curvature: f2.to_f64_lossy(),
                    });
                }
                Complex::new(
                    (two_pi_h / f2).sqrt() * g(t0) * (-f(t0) / h).exp(),
                    T::zero(),
                )
            }
            SaddleMethod::StationaryPhase => {
                let pref = (Complex::new(T::zero(), two_pi_h) / f2).sqrt();
                pref * g(t0) * Complex::new(T::zero(), f(t0) / h).exp()
            }
        };
        acc = acc + term;
    }
    Ok(acc)
}
