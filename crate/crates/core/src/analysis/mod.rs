//! Post-processing of rate curves: scans over `z`, smoothing, peak and
//! period extraction, background averages and file output.

pub mod barrier;
mod compare;
pub mod output;
mod peaks;
mod savgol;
mod scan;
mod window;

pub use barrier::{
    appendix_c_demo, barrier_contour, barrier_path, traversal_time, traversal_time_through_barrier,
};
pub use compare::{compare_scans, ComparePoint, Comparison, RATE_FLOOR};
pub use peaks::{find_peaks, peak_spacing, Peak, PeakOptions};
pub use savgol::{savitzky_golay, DEFAULT_ORDER, DEFAULT_WINDOW};
pub use scan::{
    modulation_period, nearest_threshold_k, scan_rate, MissingSample, OracleEngine, RateEngine,
    RateScan, ScanMode, SemiclassicalEngine, Smoothing, Threshold, ZRange,
};
pub use window::window_average;
