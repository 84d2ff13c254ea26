use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakOptions {
    /// Minimum prominence as a fraction of the local dynamic range.
    pub prominence: f64,
    /// Half-width, in samples, of the neighbourhood defining the local range.
    pub local_half_width: usize,
}

impl Default for PeakOptions {
    fn default() -> Self {
        Self {
            prominence: 0.05,
            local_half_width: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub index: usize,
    /// Vertex of the parabola through the peak and its neighbours, in samples.
    pub position: f64,
    pub prominence: f64,
}

fn prominence(y: &[f64], i: usize) -> f64 {
    let v = y[i];
    let mut left = v;
    for &u in y[..i].iter().rev() {
        if u > v {
            break;
        }
        left = left.min(u);
    }
    let mut right = v;
    for &u in &y[i + 1..] {
        if u > v {
            break;
        }
        right = right.min(u);
    }
    v - left.max(right)
}

/// Interior local maxima whose prominence reaches `opts.prominence` times the
/// dynamic range of the series within `opts.local_half_width` samples.
/// Non-finite samples are never peaks.
pub fn find_peaks(y: &[f64], opts: &PeakOptions) -> Vec<Peak> {
    let n = y.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut i = 1;
    while i < n - 1 {
        if !(y[i].is_finite() && y[i] > y[i - 1]) {
            i += 1;
            continue;
        }
        // Walk across a plateau and take its centre.
        let mut j = i;
        while j + 1 < n && y[j + 1] == y[i] {
            j += 1;
        }
        if j + 1 < n && y[j + 1] < y[i] {
            let c = (i + j) / 2;
            let lo = c.saturating_sub(opts.local_half_width);
            let hi = (c + opts.local_half_width).min(n - 1);
            let (mn, mx) = y[lo..=hi]
                .iter()
                .filter(|v| v.is_finite())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                    (a.min(v), b.max(v))
                });
            let prom = prominence(y, c);
            if mx > mn && prom >= opts.prominence * (mx - mn) {
                let position = if i == j {
                    let (a, b, d) = (y[c - 1], y[c], y[c + 1]);
                    let denom = a - 2.0 * b + d;
                    if denom < 0.0 {
                        c as f64 + 0.5 * (a - d) / denom
                    } else {
                        c as f64
                    }
                } else {
                    (i + j) as f64 / 2.0
                };
                out.push(Peak {
                    index: c,
                    position,
                    prominence: prom,
                });
            }
        }
        i = j + 1;
    }
    out
}

/// Mean and standard deviation of consecutive peak spacings, in the units of
/// `positions`. Needs at least `min_peaks` peaks.
pub fn peak_spacing(positions: &[f64], min_peaks: usize) -> Result<(f64, f64)> {
    if positions.len() < min_peaks.max(2) {
        return Err(Error::TooFewPeaks {
            found: positions.len(),
            needed: min_peaks.max(2),
        });
    }
    let d: Vec<f64> = positions.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    let var = d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / d.len() as f64;
    Ok((mean, var.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_peaks_and_spacing() {
        let dz = 0.01;
        let y: Vec<f64> = (0..=1000)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 * dz / 0.5).cos())
            .collect();
        let peaks = find_peaks(&y, &PeakOptions::default());
        let pos: Vec<f64> = peaks.iter().map(|p| p.position * dz).collect();
        assert_eq!(pos.len(), 19);
        let (mean, std) = peak_spacing(&pos, 4).unwrap();
        assert!((mean - 0.5).abs() < 1e-6 && std < 1e-6);
    }

    #[test]
    fn small_ripples_are_ignored() {
        let y: Vec<f64> = (0..400)
            .map(|i| {
                let x = i as f64 * 0.01;
                (2.0 * std::f64::consts::PI * x).sin() + 0.01 * (60.0 * x).sin()
            })
            .collect();
        assert_eq!(find_peaks(&y, &PeakOptions::default()).len(), 4);
    }

    #[test]
    fn too_few_peaks_is_an_error() {
        assert!(matches!(
            peak_spacing(&[1.0, 2.0, 3.0], 4),
            Err(Error::TooFewPeaks {
                found: 3,
                needed: 4
            })
        ));
    }

    #[test]
    fn plateau_centre_is_reported() {
        let y = [0.0, 1.0, 2.0, 2.0, 2.0, 1.0, 0.0];
        let p = find_peaks(&y, &PeakOptions::default());
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].index, 3);
    }
}
