use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::peaks::{find_peaks, peak_spacing, Peak, PeakOptions};
use super::savgol::savitzky_golay;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::oracle::{rate_from_grid, rate_from_oracle, solve_or_resume, OracleConfig};
use crate::semiclassical::{ionization_rate_with, SemiclassicalOptions};

/// Inclusive grid `start, start + step, ...` up to `stop`.
///
/// The sample count is `floor((stop − start)/step + 1/2) + 1`, so a `stop`
/// that is a multiple of `step` away from `start` is always included and
/// rounding in the division can neither drop nor add a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ZRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::param("z range", "bounds and step must be finite"));
        }
        if step <= 0.0 {
            return Err(Error::param(
                "z range",
                format!("step must be > 0, got {step}"),
            ));
        }
        if stop < start {
            return Err(Error::param(
                "z range",
                format!("empty range {start}:{stop}:{step}"),
            ));
        }
        if start <= 0.0 {
            return Err(Error::param("z range", "z must be > 0"));
        }
        Ok(Self { start, stop, step })
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 0.5).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

impl FromStr for ZRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::param(
                "z range",
                format!("expected start:stop:step, got `{s}`"),
            ));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::param("z range", format!("`{p}` is not a number")))
        };
        ZRange::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

impl fmt::Display for ZRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// Which dimensionless parameter is held fixed while `z` varies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ScanMode {
    FixedGamma {
        gamma: f64,
    },
    /// Fixed binding depth: `γ = sqrt(n_io/(2z))`.
    FixedNio {
        n_io: f64,
    },
}

impl ScanMode {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ScanMode::FixedGamma { gamma } if !(gamma > 0.0 && gamma.is_finite()) => {
                Err(Error::param("gamma", format!("must be > 0, got {gamma}")))
            }
            ScanMode::FixedNio { n_io } if !(n_io > 0.0 && n_io.is_finite()) => {
                Err(Error::param("n_io", format!("must be > 0, got {n_io}")))
            }
            _ => Ok(()),
        }
    }

    pub fn gamma_at(&self, z: f64) -> f64 {
        match *self {
            ScanMode::FixedGamma { gamma } => gamma,
            ScanMode::FixedNio { n_io } => (n_io / (2.0 * z)).sqrt(),
        }
    }

    /// The parameter reported in the `gamma_param` column.
    pub fn params_at(&self, z: f64) -> Result<ModelParams<f64>> {
        ModelParams::from_dimensionless(self.gamma_at(z), z)
    }

    /// Spacing of consecutive channel closings in `z`.
    pub fn threshold_spacing(&self) -> f64 {
        match *self {
            ScanMode::FixedGamma { gamma } => 1.0 / (1.0 + 2.0 * gamma * gamma),
            ScanMode::FixedNio { .. } => 1.0,
        }
    }

    /// Channel closings `(k, z_k)` with `lo ≤ z_k ≤ hi`.
    pub fn thresholds(&self, lo: f64, hi: f64) -> Vec<Threshold> {
        // In both modes k = z + n_io at threshold, with n_io = 2γ²z.
        let (scale, shift) = match *self {
            ScanMode::FixedGamma { gamma } => (1.0 + 2.0 * gamma * gamma, 0.0),
            ScanMode::FixedNio { n_io } => (1.0, n_io),
        };
        let k_lo = (lo * scale + shift - 1e-9).ceil().max(1.0) as u32;
        let k_hi = (hi * scale + shift + 1e-9).floor();
        if k_hi < k_lo as f64 {
            return Vec::new();
        }
        (k_lo..=k_hi as u32)
            .map(|k| Threshold {
                k,
                z: (k as f64 - shift) / scale,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub k: u32,
    pub z: f64,
}

/// Photon number of the channel closing nearest to `z`, `round(z(1 + 2γ²))`.
pub fn nearest_threshold_k(z: f64, gamma: f64) -> u32 {
    (z * (1.0 + 2.0 * gamma * gamma)).round().max(1.0) as u32
}

/// A method that turns parameters and a cycle count into a rate.
pub trait RateEngine: Sync {
    fn name(&self) -> &'static str;
    fn rate(&self, params: &ModelParams<f64>, n_cycles: u32) -> Result<f64>;
    /// Engine settings recorded in output metadata.
    fn settings(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SemiclassicalEngine {
    pub options: SemiclassicalOptions,
}

impl RateEngine for SemiclassicalEngine {
    fn name(&self) -> &'static str {
        "semiclassical"
    }

    fn rate(&self, params: &ModelParams<f64>, n_cycles: u32) -> Result<f64> {
        ionization_rate_with(params, n_cycles, &self.options)
    }

    fn settings(&self) -> serde_json::Value {
        serde_json::json!({
            "include_odd": self.options.include_odd,
            "drive": self.options.drive,
            "branch": format!("{:?}", self.options.branch).to_lowercase(),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct OracleEngine {
    pub config: OracleConfig,
    /// Where solved grids are stored and resumed from.
    pub checkpoint_dir: Option<PathBuf>,
}

impl RateEngine for OracleEngine {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn rate(&self, params: &ModelParams<f64>, n_cycles: u32) -> Result<f64> {
        match &self.checkpoint_dir {
            None => rate_from_oracle(params, n_cycles, &self.config).map(|r| r.rate),
            Some(dir) => {
                if n_cycles == 0 {
                    return Err(Error::param("n", "need at least one cycle"));
                }
                let dt = self.config.step(params)?;
                let cycles = self.config.burn_in_cycles + n_cycles;
                let grid = solve_or_resume(params, cycles, dt, self.config.drive, dir)?;
                rate_from_grid(&grid, n_cycles, &self.config).map(|r| r.rate)
            }
        }
    }

    fn settings(&self) -> serde_json::Value {
        serde_json::to_value(self.config).unwrap_or(serde_json::Value::Null)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingSample {
    pub index: usize,
    pub z: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Smoothing {
    pub window: usize,
    pub order: usize,
}

/// A sampled rate curve `Γ(z)` and what has been extracted from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateScan {
    pub engine: String,
    pub mode: ScanMode,
    pub n_cycles: u32,
    pub z_values: Vec<f64>,
    /// γ at each sample (constant in fixed-γ mode).
    pub gamma_param: Vec<f64>,
    pub gamma_raw: Vec<f64>,
    /// Samples where the engine failed; their raw values are linear
    /// interpolations of the neighbouring good samples.
    pub missing: Vec<MissingSample>,
    pub gamma_smooth: Option<Vec<f64>>,
    pub smoothing: Option<Smoothing>,
    pub peaks: Vec<Peak>,
    pub thresholds: Vec<Threshold>,
}

fn check_grid(z: &[f64]) -> Result<()> {
    if z.is_empty() {
        return Err(Error::param("z values", "empty grid"));
    }
    if z.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::param("z values", "all z must be finite and > 0"));
    }
    if z.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("z values", "must be strictly increasing"));
    }
    Ok(())
}

/// Fills non-finite entries by linear interpolation between the nearest
/// finite neighbours (constant beyond the ends).
fn fill_gaps(z: &[f64], y: &mut [f64]) {
    let good: Vec<usize> = (0..y.len()).filter(|&i| y[i].is_finite()).collect();
    if good.is_empty() {
        return;
    }
    for i in 0..y.len() {
        if y[i].is_finite() {
            continue;
        }
        let right = good.partition_point(|&g| g < i);
        y[i] = match (
            right.checked_sub(1).map(|l| good[l]),
            good.get(right).copied(),
        ) {
            (Some(a), Some(b)) => y[a] + (y[b] - y[a]) * (z[i] - z[a]) / (z[b] - z[a]),
            (Some(a), None) => y[a],
            (None, Some(b)) => y[b],
            (None, None) => unreachable!(),
        };
    }
}

/// Evaluates `engine` at every `z` (in parallel). Failed samples are
/// recorded in `missing` and interpolated; the scan itself only fails when
/// the grid is invalid or every sample fails.
pub fn scan_rate(
    engine: &dyn RateEngine,
    mode: ScanMode,
    z_values: &[f64],
    n_cycles: u32,
) -> Result<RateScan> {
    mode.validate()?;
    check_grid(z_values)?;
    if n_cycles == 0 {
        return Err(Error::param("n_cycles", "need at least one cycle"));
    }
    let results: Vec<Result<f64>> = z_values
        .par_iter()
        .map(|&z| {
            let p = mode.params_at(z)?;
            let r = engine.rate(&p, n_cycles)?;
            if r.is_finite() {
                Ok(r)
            } else {
                Err(Error::numeric("scan_rate", "non-finite rate"))
            }
        })
        .collect();
    let mut missing = Vec::new();
    let mut raw = Vec::with_capacity(z_values.len());
    let mut first_err = None;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => raw.push(v),
            Err(e) => {
                missing.push(MissingSample {
                    index: i,
                    z: z_values[i],
                    reason: e.to_string(),
                });
                first_err.get_or_insert(e);
                raw.push(f64::NAN);
            }
        }
    }
    if missing.len() == z_values.len() {
        return Err(first_err.expect("at least one failure"));
    }
    fill_gaps(z_values, &mut raw);
    let (lo, hi) = (z_values[0], z_values[z_values.len() - 1]);
    Ok(RateScan {
        engine: engine.name().to_string(),
        mode,
        n_cycles,
        z_values: z_values.to_vec(),
        gamma_param: z_values.iter().map(|&z| mode.gamma_at(z)).collect(),
        gamma_raw: raw,
        missing,
        gamma_smooth: None,
        smoothing: None,
        peaks: Vec::new(),
        thresholds: mode.thresholds(lo, hi),
    })
}

impl RateScan {
    pub fn len(&self) -> usize {
        self.z_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_values.is_empty()
    }

    pub fn smooth(&mut self, window: usize, order: usize) -> Result<()> {
        self.gamma_smooth = Some(savitzky_golay(&self.gamma_raw, window, order)?);
        self.smoothing = Some(Smoothing { window, order });
        Ok(())
    }

    /// The smoothed series when present, otherwise the raw one.
    pub fn series(&self) -> &[f64] {
        self.gamma_smooth.as_deref().unwrap_or(&self.gamma_raw)
    }

    /// Peak options whose local range spans two threshold spacings on each
    /// side of a candidate.
    pub fn peak_options(&self, prominence: f64) -> PeakOptions {
        let step = match self.z_values.len() {
            0 | 1 => 1.0,
            n => (self.z_values[n - 1] - self.z_values[0]) / (n - 1) as f64,
        };
        let half = (2.0 * self.mode.threshold_spacing() / step)
            .round()
            .max(3.0) as usize;
        PeakOptions {
            prominence,
            local_half_width: half,
        }
    }

    /// Smooths and detects peaks on the smoothed series.
    pub fn analyse(&mut self, window: usize, order: usize, prominence: f64) -> Result<PeakOptions> {
        self.smooth(window, order)?;
        let opts = self.peak_options(prominence);
        self.detect_peaks(&opts);
        Ok(opts)
    }

    pub fn detect_peaks(&mut self, opts: &PeakOptions) {
        self.peaks = find_peaks(self.series(), opts);
    }

    /// Peak positions in `z`, interpolated between grid points.
    pub fn peak_positions(&self) -> Vec<f64> {
        self.peaks
            .iter()
            .map(|p| {
                let i = p.position.floor() as usize;
                let frac = p.position - i as f64;
                match self.z_values.get(i + 1) {
                    Some(next) => self.z_values[i] + frac * (next - self.z_values[i]),
                    None => self.z_values[i],
                }
            })
            .collect()
    }

    pub fn nearest_threshold_k(&self, i: usize) -> u32 {
        nearest_threshold_k(self.z_values[i], self.gamma_param[i])
    }

    pub fn is_peak(&self, i: usize) -> bool {
        self.peaks.iter().any(|p| p.index == i)
    }
}

/// Mean and standard deviation of the spacing of the detected peaks; needs
/// at least four peaks.
pub fn modulation_period(scan: &RateScan) -> Result<(f64, f64)> {
    peak_spacing(&scan.peak_positions(), 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Failing;

    impl RateEngine for Failing {
        fn name(&self) -> &'static str {
            "failing"
        }

        fn rate(&self, params: &ModelParams<f64>, _: u32) -> Result<f64> {
            if (params.z - 7.0).abs() < 1e-9 {
                Err(Error::numeric("test", "forced"))
            } else {
                Ok(params.z)
            }
        }
    }

    #[test]
    fn range_lengths() {
        assert_eq!("6:20:0.01".parse::<ZRange>().unwrap().len(), 1401);
        assert_eq!(ZRange::new(2.0, 12.0, 0.01).unwrap().len(), 1001);
        assert_eq!(ZRange::new(1.0, 1.0, 0.5).unwrap().len(), 1);
        assert_eq!(ZRange::new(1.0, 2.2, 0.5).unwrap().len(), 3);
        assert!("6:5:0.1".parse::<ZRange>().is_err());
        assert!("6:7".parse::<ZRange>().is_err());
        assert!("6:7:0".parse::<ZRange>().is_err());
    }

    #[test]
    fn thresholds_in_both_modes() {
        let t = ScanMode::FixedGamma { gamma: 0.7 }.thresholds(6.0, 7.0);
        assert_eq!(t.first().unwrap().k, 12);
        assert!((t[1].z - t[0].z - 1.0 / 1.98).abs() < 1e-12);
        let t = ScanMode::FixedNio { n_io: 9.8 }.thresholds(2.0, 12.0);
        assert_eq!(t.len(), 10);
        for w in t.windows(2) {
            assert!((w[1].z - w[0].z - 1.0).abs() < 1e-12);
        }
        assert_eq!(nearest_threshold_k(10.0, 0.7), 20);
    }

    #[test]
    fn failures_are_interpolated_and_flagged() {
        let z = [6.0, 6.5, 7.0, 7.5];
        let s = scan_rate(&Failing, ScanMode::FixedGamma { gamma: 0.7 }, &z, 1).unwrap();
        assert_eq!(s.missing.len(), 1);
        assert_eq!(s.missing[0].index, 2);
        assert!((s.gamma_raw[2] - 7.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_nio_gamma_column() {
        let s = scan_rate(
            &SemiclassicalEngine::default(),
            ScanMode::FixedNio { n_io: 9.8 },
            &[5.0, 10.0],
            1,
        )
        .unwrap();
        assert!((s.gamma_param[0] - 0.98f64.sqrt()).abs() < 1e-12);
        assert!((s.gamma_param[1] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn rejects_unordered_grid() {
        let e = SemiclassicalEngine::default();
        assert!(scan_rate(&e, ScanMode::FixedGamma { gamma: 0.7 }, &[6.0, 6.0], 1).is_err());
        assert!(scan_rate(&e, ScanMode::FixedGamma { gamma: 0.7 }, &[], 1).is_err());
        assert!(scan_rate(&e, ScanMode::FixedGamma { gamma: -1.0 }, &[6.0], 1).is_err());
    }
}
