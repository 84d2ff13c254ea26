use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use deltaion::adiabatic::{cycle_average_quadrature, rate_cycle_averaged};
use deltaion::analysis::traversal_time_through_barrier;
use deltaion::oracle::{
    default_dt, rate_from_oracle, solve_boundary_function, survival_history, OracleConfig,
};
use deltaion::semiclassical::{
    background_rate, one_period_amplitude, survival_amplitude_with, tunnel_start_time, zeta,
    zeta_by_quadrature, SemiclassicalOptions, SqrtBranch,
};
use deltaion::{Drive, ModelParams};

use crate::commands::{branch, oracle_config};
use crate::config::RunConfig;
use crate::Failure;

type Check = Result<String, String>;

fn params(gamma: f64, z: f64) -> Result<ModelParams<f64>, String> {
    ModelParams::from_dimensionless(gamma, z).map_err(|e| e.to_string())
}

fn model_identities(rng: &mut rand::rngs::StdRng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (a, m, w) = (
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.1..5.0),
            rng.gen_range(0.1..5.0),
        );
        let p = ModelParams::from_physical(a, m, w).map_err(|e| e.to_string())?;
        let rel = |x: f64, y: f64| ((x - y) / y).abs();
        worst = worst
            .max(rel(p.h, 1.0 / (4.0 * p.z)))
            .max(rel(p.n_io, 2.0 * p.gamma * p.gamma * p.z))
            .max(rel(p.gamma, a * w / m));
        let q = ModelParams::from_dimensionless(p.gamma, p.z).map_err(|e| e.to_string())?;
        worst = worst.max(rel(q.gamma, p.gamma)).max(rel(q.z, p.z));
    }
    if worst < 1e-12 {
        Ok(format!(
            "200 random triples, worst relative error {worst:.1e}"
        ))
    } else {
        Err(format!("relative error {worst:.3e} > 1e-12"))
    }
}

fn complex_time_identities(rng: &mut rand::rngs::StdRng) -> Check {
    let mut worst = 0.0f64;
    for i in 0..400 {
        let g = if i < 50 {
            0.1 * (i + 1) as f64
        } else {
            rng.gen_range(1e-6..=5.0)
        };
        let t0 = tunnel_start_time(g);
        let c =
            (t0.cos() - Complex64::new((1.0 + g * g).sqrt(), 0.0)).norm() / (1.0 + g * g).sqrt();
        let s = (t0.sin() - Complex64::new(0.0, g)).norm() / g.max(1.0);
        worst = worst.max(c).max(s);
    }
    if worst <= 1e-14 {
        Ok(format!(
            "cos(t0) = sqrt(1+γ²), sin(t0) = iγ; worst {worst:.1e}"
        ))
    } else {
        Err(format!("worst deviation {worst:.3e} > 1e-14"))
    }
}

fn branch_convention(b: SqrtBranch) -> Check {
    let p = params(0.7, 10.0)?;
    let opts = SemiclassicalOptions {
        branch: b,
        ..Default::default()
    };
    let amp = survival_amplitude_with(&p, 1, &opts)
        .map_err(|e| e.to_string())?
        .p;
    let reference = one_period_amplitude(&p, SqrtBranch::Negative).map_err(|e| e.to_string())?;
    let dev = (amp - reference).norm() / reference.norm();
    if dev < 1e-10 {
        Ok(format!(
            "n = 1 amplitude matches the one-period Volkov form ({dev:.1e})"
        ))
    } else {
        Err(format!(
            "n = 1 amplitude deviates from the one-period Volkov form by {dev:.3e}"
        ))
    }
}

fn zeta_closed_form() -> Check {
    let mut worst = 0.0f64;
    for g in [0.7, 1.1] {
        for z in [5.0, 10.0] {
            let p = params(g, z)?;
            for k in 0..4 {
                let a = zeta(&p, k, 2);
                let b = zeta_by_quadrature(&p, k, 2).map_err(|e| e.to_string())?;
                worst = worst.max((a - b).norm() / b.norm());
            }
        }
    }
    if worst <= 1e-8 {
        Ok(format!("16 cases, worst relative error {worst:.1e}"))
    } else {
        Err(format!("relative error {worst:.3e} > 1e-8"))
    }
}

fn background_identity() -> Check {
    let mut worst = 0.0f64;
    for z in [6.0, 10.0, 16.0] {
        let p = params(0.7, z)?;
        let bg = background_rate(&p, 1).map_err(|e| e.to_string())?;
        let d = 2.0 * PI * rate_cycle_averaged(&p);
        worst = worst.max(((bg - d) / d).abs());
    }
    if worst <= 1e-12 {
        Ok(format!("bound-term rate = 2π·D̄ ({worst:.1e})"))
    } else {
        Err(format!("relative error {worst:.3e} > 1e-12"))
    }
}

fn barrier_traversal(b: SqrtBranch) -> Check {
    let t = traversal_time_through_barrier(b);
    let dev = (t - Complex64::new(0.0, PI)).norm();
    if dev <= 1e-10 {
        Ok(format!("barrier traversal time = iπ ({dev:.1e})"))
    } else {
        Err(format!(
            "barrier traversal time {} {:+}i, expected iπ",
            t.re, t.im
        ))
    }
}

fn saddle_point() -> Check {
    let mut ratios = Vec::new();
    for h in [0.05, 0.025, 0.0125] {
        let p = params(0.7, 1.0 / (4.0 * h))?;
        ratios.push(
            rate_cycle_averaged(&p) / cycle_average_quadrature(&p).map_err(|e| e.to_string())?,
        );
    }
    let last = ratios[2];
    let monotone = ratios
        .windows(2)
        .all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs());
    if (0.9..=1.1).contains(&last) && monotone {
        Ok(format!(
            "D̄ / quadrature = {:.4}, {:.4}, {:.4}",
            ratios[0], ratios[1], ratios[2]
        ))
    } else {
        Err(format!(
            "ratios {ratios:?} not within [0.9, 1.1] or not approaching 1"
        ))
    }
}

fn oracle_field_off() -> Check {
    let p = params(0.7, 6.0)?;
    let grid = solve_boundary_function(&p, 4, default_dt(&p, 40.0), Drive::Off)
        .map_err(|e| e.to_string())?;
    let worst = survival_history(&grid)
        .map_err(|e| e.to_string())?
        .iter()
        .fold(0.0f64, |a, s| a.max((s.p.norm() - 1.0).abs()));
    if worst < 1e-6 {
        Ok(format!("|p| = 1 over 4 field-free cycles ({worst:.1e})"))
    } else {
        Err(format!("|p| drifts by {worst:.3e}"))
    }
}

fn oracle_convergence(cfg: &OracleConfig) -> Check {
    let p = params(0.7, 6.0)?;
    let cfg = OracleConfig {
        check_convergence: true,
        drive: Drive::Cosine,
        ..*cfg
    };
    match rate_from_oracle(&p, 1, &cfg) {
        Ok(r) => Ok(format!(
            "γ = 0.7, z = 6: w = {:.9}, change under step doubling {:.1e} (dt = {:.3e})",
            r.w_end,
            r.step_change.unwrap_or(0.0),
            r.dt
        )),
        Err(e) => Err(e.to_string()),
    }
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(cfg.seed);
    let b = branch(cfg);
    let checks: Vec<(&str, Check)> = vec![
        ("model identities", model_identities(&mut rng)),
        ("complex-time identities", complex_time_identities(&mut rng)),
        ("branch convention", branch_convention(b)),
        ("zeta closed form", zeta_closed_form()),
        ("background identity", background_identity()),
        ("barrier traversal", barrier_traversal(b)),
        ("saddle-point average", saddle_point()),
        ("oracle field-off norm", oracle_field_off()),
        (
            "oracle convergence",
            oracle_convergence(&oracle_config(cfg)),
        ),
    ];
    let mut failed = 0;
    for (name, c) in &checks {
        match c {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{}/{} checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        Err(Failure::Numeric(format!("{failed} self-check(s) failed")))
    } else {
        Ok(())
    }
}
