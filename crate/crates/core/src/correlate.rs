//! Cross-correlation utilities for pattern registration and drift
//! measurement, built on a small radix-2 FFT.

/// Normalized zero-lag cross-correlation (Pearson) of two equal-length
/// signals. Returns 0 when either signal has zero variance.
pub fn ncc(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return 0.0;
    }
    cov / (var_a * var_b).sqrt()
}

/// Best circular alignment of `b` against `a`: returns `(lag, ncc)` where
/// rotating `b` left by `lag` maximizes the normalized correlation with `a`.
/// Lags are reported in `(-n/2, n/2]` as signed displacements.
pub fn circular_peak(a: &[f64], b: &[f64]) -> (i64, f64) {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let mean_a = a.iter().sum::<f64>() / n as f64;
    let mean_b = b.iter().sum::<f64>() / n as f64;
    let da: Vec<f64> = a.iter().map(|&x| x - mean_a).collect();
    let db: Vec<f64> = b.iter().map(|&x| x - mean_b).collect();
    let var_a: f64 = da.iter().map(|x| x * x).sum();
    let var_b: f64 = db.iter().map(|x| x * x).sum();
    if var_a == 0.0 || var_b == 0.0 {
        return (0, 0.0);
    }

    // Circular correlation via linear FFT correlation of [da; da] with db.
    let mut doubled = Vec::with_capacity(2 * n);
    doubled.extend_from_slice(&da);
    doubled.extend_from_slice(&da);
    let corr = fft_cross_correlation(&doubled, &db);

    let mut best_lag = 0usize;
    let mut best = f64::NEG_INFINITY;
    for lag in 0..n {
        if corr[lag] > best {
            best = corr[lag];
            best_lag = lag;
        }
    }
    let ncc = best / (var_a * var_b).sqrt();
    let signed = if best_lag > n / 2 {
        best_lag as i64 - n as i64
    } else {
        best_lag as i64
    };
    (signed, ncc)
}

/// Linear cross-correlation `r[k] = sum_j a[j + k] * b[j]` for
/// `k in 0..(a.len() - b.len() + 1)`, computed via FFT.
pub fn fft_cross_correlation(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert!(a.len() >= b.len());
    let out_len = a.len() - b.len() + 1;
    let size = (a.len() + b.len()).next_power_of_two();

    let mut fa: Vec<(f64, f64)> = a.iter().map(|&x| (x, 0.0)).collect();
    fa.resize(size, (0.0, 0.0));
    // Reverse b to turn convolution into correlation.
    let mut fb: Vec<(f64, f64)> = b.iter().rev().map(|&x| (x, 0.0)).collect();
    fb.resize(size, (0.0, 0.0));

    fft(&mut fa, false);
    fft(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = complex_mul(*x, *y);
    }
    fft(&mut fa, true);

    // Full convolution index (b.len() - 1 + k) holds correlation lag k.
    (0..out_len).map(|k| fa[b.len() - 1 + k].0).collect()
}

fn complex_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// Iterative radix-2 Cooley-Tukey transform, in place.
fn fft(data: &mut [(f64, f64)], inverse: bool) {
    let n = data.len();
    assert!(n.is_power_of_two());
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let angle = sign * 2.0 * std::f64::consts::PI / len as f64;
        let w_len = (angle.cos(), angle.sin());
        let mut i = 0;
        while i < n {
            let mut w = (1.0, 0.0);
            for k in 0..len / 2 {
                let u = data[i + k];
                let v = complex_mul(data[i + k + len / 2], w);
                data[i + k] = (u.0 + v.0, u.1 + v.1);
                data[i + k + len / 2] = (u.0 - v.0, u.1 - v.1);
                w = complex_mul(w, w_len);
            }
            i += len;
        }
        len <<= 1;
    }
    if inverse {
        for x in data.iter_mut() {
            x.0 /= n as f64;
            x.1 /= n as f64;
        }
    }
}
