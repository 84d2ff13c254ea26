//! CSV and JSON serialisation of rate scans.
//!
//! CSV columns: `z, gamma_param, Gamma_raw, Gamma_smooth, is_peak,
//! nearest_threshold_k`. `Gamma_smooth` is empty when no smoothing was
//! applied and `is_peak` is `0`/`1`. Floats use Rust's shortest round-trip
//! formatting, so identical scans produce identical bytes.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::peaks::PeakOptions;
use super::scan::{MissingSample, RateScan, ScanMode, Smoothing, Threshold};
use crate::error::Result;

pub const SCHEMA_VERSION: &str = "deltaion.rate-scan/1";

pub const CSV_HEADER: &str = "z,gamma_param,Gamma_raw,Gamma_smooth,is_peak,nearest_threshold_k";

pub fn write_csv<W: Write>(scan: &RateScan, mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for i in 0..scan.len() {
        let smooth = scan
            .gamma_smooth
            .as_ref()
            .map(|s| s[i].to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            scan.z_values[i],
            scan.gamma_param[i],
            scan.gamma_raw[i],
            smooth,
            u8::from(scan.is_peak(i)),
            scan.nearest_threshold_k(i)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Period {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMetadata {
    pub schema_version: String,
    pub engine: String,
    pub engine_settings: serde_json::Value,
    pub mode: ScanMode,
    pub n_cycles: u32,
    pub n_samples: usize,
    pub z_first: f64,
    pub z_last: f64,
    pub smoothing: Option<Smoothing>,
    pub peak_options: Option<PeakOptions>,
    pub peaks_z: Vec<f64>,
    /// Mean and spread of the peak spacing, when enough peaks were found.
    pub detected_period: Option<Period>,
    pub threshold_spacing: f64,
    pub thresholds: Vec<Threshold>,
    pub missing: Vec<MissingSample>,
}

impl ScanMetadata {
    pub fn new(
        scan: &RateScan,
        engine_settings: serde_json::Value,
        peak_options: Option<PeakOptions>,
    ) -> Self {
        let detected_period = super::scan::modulation_period(scan)
            .ok()
            .map(|(mean, std)| Period { mean, std });
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            engine: scan.engine.clone(),
            engine_settings,
            mode: scan.mode,
            n_cycles: scan.n_cycles,
            n_samples: scan.len(),
            z_first: scan.z_values[0],
            z_last: scan.z_values[scan.len() - 1],
            smoothing: scan.smoothing,
            peak_options,
            peaks_z: scan.peak_positions(),
            detected_period,
            threshold_spacing: scan.mode.threshold_spacing(),
            thresholds: scan.thresholds.clone(),
            missing: scan.missing.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub z: f64,
    pub gamma_param: f64,
    pub gamma_raw: f64,
    pub gamma_smooth: Option<f64>,
    pub is_peak: bool,
    pub nearest_threshold_k: u32,
}

/// Metadata plus every sample, as written by [`write_json`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanDocument {
    #[serde(flatten)]
    pub metadata: ScanMetadata,
    pub samples: Vec<Sample>,
}

pub fn samples(scan: &RateScan) -> Vec<Sample> {
    (0..scan.len())
        .map(|i| Sample {
            z: scan.z_values[i],
            gamma_param: scan.gamma_param[i],
            gamma_raw: scan.gamma_raw[i],
            gamma_smooth: scan.gamma_smooth.as_ref().map(|s| s[i]),
            is_peak: scan.is_peak(i),
            nearest_threshold_k: scan.nearest_threshold_k(i),
        })
        .collect()
}

pub fn write_metadata<W: Write>(meta: &ScanMetadata, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, meta)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_json<W: Write>(scan: &RateScan, meta: &ScanMetadata, mut out: W) -> Result<()> {
    let doc = ScanDocument {
        metadata: meta.clone(),
        samples: samples(scan),
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}
