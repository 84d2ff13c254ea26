//! Text checkpoints of solved boundary functions.
//!
//! A checkpoint is one JSON object:
//!
//! ```text
//! {
//!   "schema": "deltaion.oracle-checkpoint/1",
//!   "params": { "alpha", "mu", "omega", "gamma", "z", "h", "n_io" },
//!   "drive": "cosine" | "off",
//!   "dt": f64, "steps_per_cycle": usize, "n_steps": usize,
//!   "f": [[re, im], ...],          // n_steps + 1 samples of ψ(0, j·dt)
//!   "survival": [{ "cycles", "p": [re, im], "w" }, ...]
//! }
//! ```
//!
//! Floats are written in shortest round-trip form, so loading reproduces the
//! grid bit for bit.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::projection::survival_history;
use super::projection::Survival;
use super::volterra::{solve_boundary_function, VolterraGrid};
use crate::error::{Error, Result};
use crate::model::{Drive, ModelParams};

pub const SCHEMA: &str = "deltaion.oracle-checkpoint/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalRecord {
    pub cycles: usize,
    pub p: [f64; 2],
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema: String,
    pub params: ModelParams<f64>,
    pub drive: Drive,
    pub dt: f64,
    pub steps_per_cycle: usize,
    pub n_steps: usize,
    pub f: Vec<[f64; 2]>,
    pub survival: Vec<SurvivalRecord>,
}

impl Checkpoint {
    pub fn new(grid: &VolterraGrid, survival: &[Survival]) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            params: grid.params,
            drive: grid.drive,
            dt: grid.dt,
            steps_per_cycle: grid.steps_per_cycle,
            n_steps: grid.n_steps,
            f: grid.f.iter().map(|c| [c.re, c.im]).collect(),
            survival: survival
                .iter()
                .map(|s| SurvivalRecord {
                    cycles: s.cycles,
                    p: [s.p.re, s.p.im],
                    w: s.w,
                })
                .collect(),
        }
    }

    pub fn grid(&self) -> VolterraGrid {
        VolterraGrid {
            params: self.params,
            drive: self.drive,
            dt: self.dt,
            steps_per_cycle: self.steps_per_cycle,
            n_steps: self.n_steps,
            f: self
                .f
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        }
    }

    pub fn survival(&self) -> Vec<Survival> {
        self.survival
            .iter()
            .map(|r| Survival {
                cycles: r.cycles,
                p: Complex64::new(r.p[0], r.p[1]),
                w: r.w,
            })
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Checkpoint = serde_json::from_str(s)?;
        if c.schema != SCHEMA {
            return Err(Error::Format(format!(
                "unsupported checkpoint schema `{}`",
                c.schema
            )));
        }
        if c.f.len() != c.n_steps + 1
            || c.steps_per_cycle == 0
            || !c.n_steps.is_multiple_of(c.steps_per_cycle)
        {
            return Err(Error::Format("checkpoint grid is inconsistent".into()));
        }
        Ok(c)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// File name used by [`solve_or_resume`] for one solve.
pub fn checkpoint_path(
    dir: &Path,
    params: &ModelParams<f64>,
    cycles: u32,
    dt: f64,
    drive: Drive,
) -> PathBuf {
    let steps = (2.0 * std::f64::consts::PI / dt).round() as u64;
    let drive = match drive {
        Drive::Cosine => "cos",
        Drive::Off => "off",
    };
    dir.join(format!(
        "oracle_g{}_z{}_c{cycles}_m{steps}_{drive}.json",
        params.gamma, params.z
    ))
}

/// Loads the grid from `dir` when a matching checkpoint exists, otherwise
/// solves it and writes the checkpoint. Unreadable or mismatching files are
/// recomputed and overwritten.
pub fn solve_or_resume(
    params: &ModelParams<f64>,
    cycles: u32,
    dt: f64,
    drive: Drive,
    dir: &Path,
) -> Result<VolterraGrid> {
    let path = checkpoint_path(dir, params, cycles, dt, drive);
    if let Ok(c) = Checkpoint::load(&path) {
        let g = c.grid();
        if g.params == *params
            && g.drive == drive
            && g.cycles() == cycles as usize
            && (g.dt - dt).abs() <= 1e-12 * dt
        {
            return Ok(g);
        }
    }
    let grid = solve_boundary_function(params, cycles, dt, drive)?;
    fs::create_dir_all(dir)?;
    Checkpoint::new(&grid, &survival_history(&grid)?).save(&path)?;
    Ok(grid)
}
