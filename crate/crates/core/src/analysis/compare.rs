use serde::{Deserialize, Serialize};

use super::scan::RateScan;
use super::window::window_average;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparePoint {
    pub z: f64,
    pub semiclassical_smooth: f64,
    pub oracle_smooth: f64,
    /// Cycle-smoothed oracle rate over the semiclassical one; `None` when the
    /// semiclassical average is below [`RATE_FLOOR`].
    pub ratio: Option<f64>,
    /// Semiclassical modulation peak nearest to `z`.
    pub semiclassical_peak: Option<f64>,
    /// Oracle peak nearest to `semiclassical_peak`.
    pub oracle_peak: Option<f64>,
    pub peak_offset: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub n_cycles: u32,
    /// Width of the moving-average window (one modulation period).
    pub window: f64,
    pub semiclassical_smooth: Vec<f64>,
    pub oracle_smooth: Vec<f64>,
    pub points: Vec<ComparePoint>,
}

/// Rates below this are round-off (a field-free run gives `|Γ| ~ 1e−16`).
pub const RATE_FLOOR: f64 = 1e-12;

fn uniform_step(z: &[f64]) -> Result<f64> {
    if z.len() < 2 {
        return Err(Error::param(
            "z values",
            "need at least two samples to compare",
        ));
    }
    let step = (z[z.len() - 1] - z[0]) / (z.len() - 1) as f64;
    if z.windows(2)
        .any(|w| ((w[1] - w[0]) - step).abs() > 1e-6 * step)
    {
        return Err(Error::param("z values", "comparison needs a uniform grid"));
    }
    Ok(step)
}

fn nearest(values: &[f64], z: f64) -> Option<f64> {
    values
        .iter()
        .copied()
        .min_by(|a, b| (a - z).abs().total_cmp(&(b - z).abs()))
}

/// Compares two scans on the same uniform grid at the points `report_at`.
///
/// Both raw series are cycle-smoothed with [`window_average`] over one
/// modulation period; peaks are taken from each scan's detected peaks, so
/// call `smooth` and `detect_peaks` first.
pub fn compare_scans(
    semiclassical: &RateScan,
    oracle: &RateScan,
    report_at: &[f64],
) -> Result<Comparison> {
    if semiclassical.z_values != oracle.z_values || semiclassical.mode != oracle.mode {
        return Err(Error::param("scans", "grids or scan modes differ"));
    }
    let z = &semiclassical.z_values;
    let step = uniform_step(z)?;
    let window = semiclassical.mode.threshold_spacing();
    let ss = window_average(&semiclassical.gamma_raw, step, window)?;
    let os = window_average(&oracle.gamma_raw, step, window)?;
    let sp = semiclassical.peak_positions();
    let op = oracle.peak_positions();
    let mut points = Vec::with_capacity(report_at.len());
    for &zc in report_at {
        if zc < z[0] - 0.5 * step || zc > z[z.len() - 1] + 0.5 * step {
            return Err(Error::param(
                "report_at",
                format!("z = {zc} lies outside the scan"),
            ));
        }
        let i = ((zc - z[0]) / step).round() as usize;
        let ratio = (ss[i] > RATE_FLOOR).then(|| os[i] / ss[i]);
        let s_peak = nearest(&sp, zc);
        let o_peak = s_peak.and_then(|s| nearest(&op, s));
        points.push(ComparePoint {
            z: z[i],
            semiclassical_smooth: ss[i],
            oracle_smooth: os[i],
            ratio,
            semiclassical_peak: s_peak,
            oracle_peak: o_peak,
            peak_offset: s_peak.zip(o_peak).map(|(s, o)| o - s),
        });
    }
    Ok(Comparison {
        n_cycles: semiclassical.n_cycles,
        window,
        semiclassical_smooth: ss,
        oracle_smooth: os,
        points,
    })
}
