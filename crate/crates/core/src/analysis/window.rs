use crate::error::{Error, Result};

fn boxcar(y: &[f64], half: usize) -> Vec<f64> {
    let n = y.len();
    let mut prefix = vec![0.0; n + 1];
    for (i, v) in y.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v;
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1) as f64
        })
        .collect()
}

/// Moving average over one modulation period, applied twice.
///
/// A single boxcar of width equal to the period cancels the modulation but
/// leaves its envelope gradient; the second pass (a triangular kernel overall)
/// removes that leakage. Windows are truncated at the ends.
pub fn window_average(y: &[f64], step: f64, period: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && period > 0.0) {
        return Err(Error::domain(
            "window_average",
            "step and period must be positive",
        ));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(
            "window_average",
            "series contains non-finite samples",
        ));
    }
    let half = ((period / step) / 2.0).round() as usize;
    Ok(boxcar(&boxcar(y, half), half))
}
