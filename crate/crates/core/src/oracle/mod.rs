//! Exact reference rates from the Volterra equation for `ψ(0, t)`.
//!
//! For a δ-potential the wave function everywhere follows from its value at
//! the origin, which obeys a second-kind Volterra equation with the Volkov
//! propagator as kernel. Everything here is `f64`.

pub mod checkpoint;
pub mod faddeeva;
pub mod kernel;
mod projection;
mod volterra;

pub use checkpoint::{solve_or_resume, Checkpoint};
pub use faddeeva::ComplexErf;
pub use projection::{survival_at, survival_history, survival_probability, Survival};
pub use volterra::{default_dt, solve_boundary_function, VolterraGrid};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Drive, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Explicit time step; `None` uses `min(2π, h/γ²)/dt_divisor`.
    pub dt: Option<f64>,
    pub dt_divisor: f64,
    pub drive: Drive,
    /// Cycles discarded before the decay is measured.
    pub burn_in_cycles: u32,
    /// Largest accepted change of the survival probability when the step is
    /// doubled; only checked when `check_convergence` is set.
    pub tolerance: f64,
    pub check_convergence: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            dt: None,
            dt_divisor: 40.0,
            drive: Drive::Cosine,
            burn_in_cycles: 1,
            tolerance: 1e-5,
            check_convergence: false,
        }
    }
}

impl OracleConfig {
    pub fn step(&self, params: &ModelParams<f64>) -> Result<f64> {
        match self.dt {
            Some(dt) if dt.is_finite() && dt > 0.0 => {
                Ok(volterra::snap_dt(dt.min(2.0 * std::f64::consts::PI)))
            }
            Some(dt) => Err(Error::param("dt", format!("must be > 0, got {dt}"))),
            None if self.dt_divisor >= 1.0 => Ok(default_dt(params, self.dt_divisor)),
            None => Err(Error::param("dt_divisor", "must be >= 1")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRate {
    pub rate: f64,
    pub n_cycles: u32,
    pub burn_in_cycles: u32,
    pub dt: f64,
    /// Survival probability at the start and end of the measured window.
    pub w_start: f64,
    pub w_end: f64,
    /// `|w(dt) − w(2dt)|` at the end of the window, when checked.
    pub step_change: Option<f64>,
}

/// `Γ = −(2π/t_f) ln(w(t_b + t_f)/w(t_b))` with `t_f = 2πn` and a burn-in of
/// `t_b = 2π·burn_in_cycles`; `burn_in_cycles = 0` gives `−(2π/t_f) ln w(t_f)`.
pub fn rate_from_oracle(
    params: &ModelParams<f64>,
    n: u32,
    config: &OracleConfig,
) -> Result<OracleRate> {
    if n == 0 {
        return Err(Error::param("n", "need at least one cycle"));
    }
    let dt = config.step(params)?;
    let grid = solve_boundary_function(params, config.burn_in_cycles + n, dt, config.drive)?;
    rate_from_grid(&grid, n, config)
}

/// The rate of [`rate_from_oracle`] from an already solved grid holding at
/// least `burn_in_cycles + n` cycles.
pub fn rate_from_grid(grid: &VolterraGrid, n: u32, config: &OracleConfig) -> Result<OracleRate> {
    if n == 0 {
        return Err(Error::param("n", "need at least one cycle"));
    }
    let total = config.burn_in_cycles + n;
    let w_start = match config.burn_in_cycles {
        0 => 1.0,
        b => survival_at(grid, b as usize)?.w,
    };
    let w_end = survival_at(grid, total as usize)?.w;
    if !(w_start > 0.0 && w_end > 0.0) {
        return Err(Error::InfiniteRate);
    }
    let rate = -(w_end / w_start).ln() / n as f64;
    let bound = 1.0 + 10.0 * config.tolerance;
    if w_end > bound || w_start > bound {
        return Err(Error::numeric(
            "rate_from_oracle",
            format!("survival probability {w_end} exceeds 1; step too coarse"),
        ));
    }
    let dt = grid.dt;
    let mut out = OracleRate {
        rate,
        n_cycles: n,
        burn_in_cycles: config.burn_in_cycles,
        dt,
        w_start,
        w_end,
        step_change: None,
    };
    if config.check_convergence {
        let coarse = solve_boundary_function(&grid.params, total, 2.0 * dt, grid.drive)?;
        let wc = survival_at(&coarse, total as usize)?.w;
        let change = (wc - w_end).abs();
        out.step_change = Some(change);
        if change > config.tolerance {
            return Err(Error::numeric(
                "rate_from_oracle",
                format!("step not converged: w = {w_end:.9} at dt = {dt:.3e}, {wc:.9} at 2dt (change {change:.2e} > tolerance {:.1e})", config.tolerance),
            ));
        }
    }
    Ok(out)
}

/// Survival probabilities at the end of `cycles` for the steps `dt`, `dt/2`,
/// `dt/4`, ... (`levels` values) and the observed convergence orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub steps: Vec<f64>,
    pub w: Vec<f64>,
    pub p: Vec<(f64, f64)>,
    /// `log2(|p_dt − p_{dt/2}| / |p_{dt/2} − p_{dt/4}|)` for each triple.
    pub orders: Vec<f64>,
}

pub fn convergence_study(
    params: &ModelParams<f64>,
    cycles: u32,
    dt: f64,
    levels: usize,
    drive: Drive,
) -> Result<ConvergenceStudy> {
    if levels < 2 {
        return Err(Error::param("levels", "need at least two step sizes"));
    }
    let mut steps = Vec::new();
    let mut ps = Vec::new();
    let mut step = volterra::snap_dt(dt);
    for _ in 0..levels {
        let grid = solve_boundary_function(params, cycles, step, drive)?;
        ps.push(survival_probability(&grid)?.p);
        steps.push(step);
        step /= 2.0;
    }
    let diffs: Vec<f64> = ps.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let orders = diffs.windows(2).map(|d| (d[0] / d[1]).log2()).collect();
    Ok(ConvergenceStudy {
        steps,
        w: ps.iter().map(|p| p.norm_sqr()).collect(),
        p: ps.iter().map(|p| (p.re, p.im)).collect(),
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(gamma: f64, z: f64) -> ModelParams<f64> {
        ModelParams::from_dimensionless(gamma, z).unwrap()
    }

    #[test]
    fn field_off_conserves_norm_over_ten_cycles() {
        let pp = p(0.7, 6.0);
        let grid = solve_boundary_function(&pp, 10, default_dt(&pp, 40.0), Drive::Off).unwrap();
        for s in survival_history(&grid).unwrap() {
            assert!((s.p.norm() - 1.0).abs() < 1e-6, "{s:?}");
        }
    }

    #[test]
    fn literal_rate_positive_when_driven() {
        let cfg = OracleConfig {
            burn_in_cycles: 0,
            ..Default::default()
        };
        let r = rate_from_oracle(&p(0.7, 6.0), 1, &cfg).unwrap();
        assert!(r.rate > 0.0 && r.w_end < 1.0);
        assert_eq!(r.w_start, 1.0);
    }

    #[test]
    fn field_off_rate_vanishes() {
        let cfg = OracleConfig {
            drive: Drive::Off,
            ..Default::default()
        };
        let r = rate_from_oracle(&p(0.7, 6.0), 2, &cfg).unwrap();
        assert!(r.rate.abs() < 1e-10);
    }

    #[test]
    fn rate_resolves_the_channel_modulation() {
        let cfg = OracleConfig {
            dt_divisor: 20.0,
            ..Default::default()
        };
        let a = rate_from_oracle(&p(0.7, 14.0), 1, &cfg).unwrap().rate;
        let b = rate_from_oracle(&p(0.7, 14.25), 1, &cfg).unwrap().rate;
        assert!(a.is_finite() && b.is_finite());
        assert!((a - b).abs() > 0.1 * a.abs().max(b.abs()), "{a} {b}");
    }

    #[test]
    fn rate_from_a_longer_grid_matches() {
        let pp = p(0.7, 6.0);
        let cfg = OracleConfig::default();
        let direct = rate_from_oracle(&pp, 1, &cfg).unwrap();
        let grid = solve_boundary_function(&pp, 3, cfg.step(&pp).unwrap(), Drive::Cosine).unwrap();
        let reused = rate_from_grid(&grid, 1, &cfg).unwrap();
        assert_eq!(direct.rate, reused.rate);
        assert!(rate_from_grid(&grid, 3, &cfg).is_err());
    }

    #[test]
    fn second_order_under_step_halving() {
        let pp = p(0.7, 4.0);
        let study = convergence_study(&pp, 1, default_dt(&pp, 10.0), 4, Drive::Cosine).unwrap();
        for o in &study.orders {
            assert!((o - 2.0).abs() < 0.3, "{:?}", study.orders);
        }
        assert!(convergence_study(&pp, 1, 0.01, 1, Drive::Cosine).is_err());
    }
}
