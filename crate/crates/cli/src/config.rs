use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use deltaion::analysis::{ScanMode, ZRange};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    Semiclassical,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BranchHook {
    Principal,
}

/// Everything that determines a run. Defaults are listed in the README.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub engine: Engine,
    pub gamma: Option<f64>,
    pub n_io: Option<f64>,
    pub z: String,
    pub report_at: Option<String>,
    pub cycles: u32,
    pub include_odd: bool,
    pub field_off: bool,
    pub oracle_dt: Option<f64>,
    pub oracle_dt_divisor: f64,
    pub oracle_tolerance: f64,
    pub burn_in: u32,
    pub check_convergence: bool,
    pub sg_window: usize,
    pub sg_order: usize,
    pub prominence: f64,
    pub out: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub format: Format,
    pub checkpoint_dir: Option<PathBuf>,
    pub seed: u64,
    pub debug_branch: Option<BranchHook>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            engine: Engine::Semiclassical,
            gamma: None,
            n_io: None,
            z: "6:20:0.01".into(),
            report_at: None,
            cycles: 1,
            include_odd: false,
            field_off: false,
            oracle_dt: None,
            oracle_dt_divisor: 40.0,
            oracle_tolerance: 1e-5,
            burn_in: 1,
            check_convergence: false,
            sg_window: 31,
            sg_order: 3,
            prominence: 0.05,
            out: None,
            out_dir: None,
            format: Format::Csv,
            checkpoint_dir: None,
            seed: 0,
            debug_branch: None,
        }
    }
}

pub const DEFAULT_GAMMA: f64 = 0.7;

/// Command-line overrides; every flag left out keeps the config-file value.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Rate engine used by `scan`.
    #[arg(long, value_enum)]
    pub engine: Option<Engine>,
    /// Keldysh factor held fixed while z varies (default 0.7).
    #[arg(long, conflicts_with = "n_io")]
    pub gamma: Option<f64>,
    /// Ionization photon number held fixed instead of γ.
    #[arg(long)]
    pub n_io: Option<f64>,
    /// z grid: `start:stop:step` or a comma-separated list.
    #[arg(long)]
    pub z: Option<String>,
    /// Comma-separated z values at which `compare` reports deviations.
    #[arg(long)]
    pub report_at: Option<String>,
    /// Number of field cycles n.
    #[arg(long)]
    pub cycles: Option<u32>,
    /// Include the odd-k wave packets in the semiclassical sum.
    #[arg(long)]
    pub include_odd: bool,
    /// Switch the drive off (μ = 0 in the propagators).
    #[arg(long)]
    pub field_off: bool,
    /// Explicit oracle time step (snapped to divide the period).
    #[arg(long)]
    pub oracle_dt: Option<f64>,
    /// Oracle step as min(2π, h/γ²)/divisor when no explicit step is given.
    #[arg(long)]
    pub oracle_dt_divisor: Option<f64>,
    /// Oracle tolerance on the survival probability.
    #[arg(long)]
    pub oracle_tolerance: Option<f64>,
    /// Oracle cycles discarded before measuring the decay.
    #[arg(long)]
    pub burn_in: Option<u32>,
    /// Re-solve every oracle point at twice the step and fail on disagreement.
    #[arg(long)]
    pub check_convergence: bool,
    /// Savitzky–Golay window (odd number of samples).
    #[arg(long)]
    pub sg_window: Option<usize>,
    /// Savitzky–Golay polynomial order.
    #[arg(long)]
    pub sg_order: Option<usize>,
    /// Minimum peak prominence as a fraction of the local range.
    #[arg(long)]
    pub prominence: Option<f64>,
    /// Output file (the metadata sidecar sits next to it).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for outputs when `--out` is not given.
    #[arg(long, env = "IONRATE_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Directory for resumable oracle checkpoints.
    #[arg(long)]
    pub checkpoint_dir: Option<PathBuf>,
    /// Seed for the randomized self-check probes.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Negative control: evaluate with a different square-root branch.
    #[arg(long, value_enum, hide = true)]
    pub debug_branch: Option<BranchHook>,
}

fn parse_key_values(text: &str) -> Result<serde_json::Value, Failure> {
    let mut map = serde_json::Map::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Failure::Usage(format!("config line {}: expected key = value", n + 1))
        })?;
        let key = k.trim().replace('-', "_");
        let raw = v.trim().trim_matches('"');
        let value = serde_json::from_str::<serde_json::Value>(raw)
            .ok()
            .filter(|v| v.is_number() || v.is_boolean())
            .unwrap_or_else(|| serde_json::Value::String(raw.to_string()));
        map.insert(key, value);
    }
    Ok(serde_json::Value::Object(map))
}

impl RunConfig {
    /// Reads a JSON object or `key = value` lines.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let value = if text.trim_start().starts_with('{') {
            serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        } else {
            parse_key_values(&text)?
        };
        serde_json::from_value(value)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, a: &RunArgs) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = a.$f.clone() { self.$f = v; } )* };
        }
        set!(
            engine,
            z,
            cycles,
            oracle_dt_divisor,
            oracle_tolerance,
            burn_in,
            sg_window,
            sg_order,
            prominence,
            format,
            seed
        );
        if a.gamma.is_some() {
            self.gamma = a.gamma;
            self.n_io = None;
        }
        if a.n_io.is_some() {
            self.n_io = a.n_io;
            self.gamma = None;
        }
        for (dst, src) in [
            (&mut self.out, &a.out),
            (&mut self.out_dir, &a.out_dir),
            (&mut self.checkpoint_dir, &a.checkpoint_dir),
        ] {
            if src.is_some() {
                dst.clone_from(src);
            }
        }
        if a.report_at.is_some() {
            self.report_at.clone_from(&a.report_at);
        }
        if a.oracle_dt.is_some() {
            self.oracle_dt = a.oracle_dt;
        }
        if a.debug_branch.is_some() {
            self.debug_branch = a.debug_branch;
        }
        self.include_odd |= a.include_odd;
        self.field_off |= a.field_off;
        self.check_convergence |= a.check_convergence;
    }

    pub fn mode(&self) -> Result<ScanMode, Failure> {
        let mode = match (self.gamma, self.n_io) {
            (Some(_), Some(_)) => {
                return Err(Failure::Usage("give either gamma or n_io, not both".into()))
            }
            (_, Some(n_io)) => ScanMode::FixedNio { n_io },
            (g, None) => ScanMode::FixedGamma {
                gamma: g.unwrap_or(DEFAULT_GAMMA),
            },
        };
        mode.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(mode)
    }

    pub fn z_values(&self) -> Result<Vec<f64>, Failure> {
        parse_grid(&self.z)
    }

    pub fn report_points(&self) -> Result<Option<Vec<f64>>, Failure> {
        self.report_at.as_deref().map(parse_list).transpose()
    }

    /// Path for a primary output file named `stem.ext` unless `--out` is set.
    pub fn output_path(&self, stem: &str) -> PathBuf {
        if let Some(p) = &self.out {
            return p.clone();
        }
        let ext = match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        self.out_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("."))
            .join(format!("{stem}.{ext}"))
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("`{p}` is not a number")))
        })
        .collect()
}

/// `start:stop:step` or `a,b,c`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let values = if s.contains(':') {
        s.parse::<ZRange>()
            .map_err(|e| Failure::Usage(e.to_string()))?
            .values()
    } else {
        parse_list(s)?
    };
    if values.is_empty() {
        return Err(Failure::Usage("empty z grid".into()));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) || values.iter().any(|v| *v <= 0.0 || !v.is_finite())
    {
        return Err(Failure::Usage(
            "z values must be positive and strictly increasing".into(),
        ));
    }
    Ok(values)
}
