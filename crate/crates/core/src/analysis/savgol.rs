use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_WINDOW: usize = 31;
pub const DEFAULT_ORDER: usize = 3;

/// Least-squares weights that evaluate the degree-`order` polynomial fitted
/// to samples at offsets `lo..=hi` at offset 0.
fn fit_weights(lo: isize, hi: isize, order: usize) -> Vec<f64> {
    let count = (hi - lo + 1) as usize;
    let deg = order.min(count - 1);
    let n = deg + 1;
    // Scale abscissae to [-1, 1] to keep the normal equations well conditioned.
    let scale = lo.unsigned_abs().max(hi.unsigned_abs()).max(1) as f64;
    let xs: Vec<f64> = (lo..=hi).map(|i| i as f64 / scale).collect();

    let mut ata = vec![0.0; n * n];
    for &x in &xs {
        let mut pi = 1.0;
        for i in 0..n {
            let mut pj = 1.0;
            for j in 0..n {
                ata[i * n + j] += pi * pj;
                pj *= x;
            }
            pi *= x;
        }
    }
    // Solve (AᵀA) c = e₀, then weight_j = Σ_i c_i x_j^i.
    let mut rhs = vec![0.0; n];
    rhs[0] = 1.0;
    let c = solve(ata, rhs, n);
    xs.iter()
        .map(|&x| {
            let mut p = 1.0;
            let mut w = 0.0;
            for ci in &c {
                w += ci * p;
                p *= x;
            }
            w
        })
        .collect()
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Vec<f64> {
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap();
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row * n + k] * x[k];
        }
        x[row] = s / a[row * n + row];
    }
    x
}

/// Savitzky–Golay smoothing with an odd `window` and polynomial `order`.
///
/// Near the ends the window is truncated to the available samples and the
/// polynomial is refitted there, so the output has the input's length.
pub fn savitzky_golay<T: Scalar>(series: &[T], window: usize, order: usize) -> Result<Vec<T>> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::domain(
            "savitzky_golay",
            format!("window must be odd and positive, got {window}"),
        ));
    }
    if order >= window {
        return Err(Error::domain(
            "savitzky_golay",
            format!("order {order} must be below the window {window}"),
        ));
    }
    let len = series.len();
    if len == 0 {
        return Ok(Vec::new());
    }
    let half = (window / 2) as isize;
    let interior = fit_weights(-half, half, order);
    let mut out = Vec::with_capacity(len);
    for i in 0..len as isize {
        let lo = (-half).max(-i);
        let hi = half.min(len as isize - 1 - i);
        let edge;
        let w = if lo == -half && hi == half {
            &interior
        } else {
            edge = fit_weights(lo, hi, order);
            &edge
        };
        let mut acc = T::zero();
        for (k, wk) in w.iter().enumerate() {
            acc = acc + T::lit(*wk) * series[(i + lo) as usize + k];
        }
        out.push(acc);
    }
    Ok(out)
}
