//! Image-quality metrics and the frame-comparison protocol: SSIM with the
//! standard 11x11 Gaussian window, 5-scale MS-SSIM, a pixel-count-normalized
//! L2 norm, UQI, and the legitimate-vs-malicious cross-product mean with its
//! derived delta-SSIM.
//!
//! All metrics compare the Rec. 709 luma of the two frames.

use crate::attack::{LUMA_B, LUMA_G, LUMA_R};
use crate::error::{Error, Result};
use crate::sensor::RgbFrame;

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;
pub const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
pub const UQI_WINDOW: usize = 8;

/// Luma plane of a frame in ADC units (0..=max_value).
pub fn luma_plane(frame: &RgbFrame) -> Vec<f64> {
    frame
        .data
        .iter()
        .map(|&[r, g, b]| LUMA_R * r as f64 + LUMA_G * g as f64 + LUMA_B * b as f64)
        .collect()
}

fn check_dims(a: &RgbFrame, b: &RgbFrame) -> Result<()> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::DimensionMismatch {
            expected_width: a.width,
            expected_height: a.height,
            width: b.width,
            height: b.height,
        });
    }
    Ok(())
}

/// Structural similarity between two frames; 1.0 for identical inputs.
pub fn ssim(a: &RgbFrame, b: &RgbFrame) -> Result<f64> {
    check_dims(a, b)?;
    let range = a.max_value.max(b.max_value) as f64;
    let pa = luma_plane(a);
    let pb = luma_plane(b);
    let stats = WindowStats::gaussian(&pa, &pb, a.width, a.height)?;
    Ok(stats.mean_ssim(range).0)
}

/// Five-scale multiscale SSIM with the standard weights; scales are formed
/// by 2x2 mean downsampling. Frames must survive four halvings with at
/// least one full window left (>= 176 pixels on each side).
pub fn ms_ssim(a: &RgbFrame, b: &RgbFrame) -> Result<f64> {
    check_dims(a, b)?;
    let range = a.max_value.max(b.max_value) as f64;
    let mut pa = luma_plane(a);
    let mut pb = luma_plane(b);
    let (mut w, mut h) = (a.width, a.height);

    let scales = MS_SSIM_WEIGHTS.len();
    let min_dim = SSIM_WINDOW << (scales - 1);
    if w < min_dim || h < min_dim {
        return Err(Error::InvalidInput(format!(
            "frames {w}x{h} too small for {scales}-scale MS-SSIM (need >= {min_dim})"
        )));
    }

    let mut product = 1.0;
    for (scale, &weight) in MS_SSIM_WEIGHTS.iter().enumerate() {
        let stats = WindowStats::gaussian(&pa, &pb, w, h)?;
        let (full, cs) = stats.mean_ssim(range);
        let term = if scale + 1 == scales { full } else { cs };
        product *= term.max(0.0).powf(weight);
        if scale + 1 != scales {
            let (next_a, next_w, next_h) = downsample_2x2(&pa, w, h);
            let (next_b, _, _) = downsample_2x2(&pb, w, h);
            (pa, pb, w, h) = (next_a, next_b, next_w, next_h);
        }
    }
    Ok(product)
}

/// Euclidean norm of the per-pixel luma difference, normalized by the pixel
/// count so values are resolution independent: `sqrt(sum(d^2) / n)`.
pub fn l2_norm(a: &RgbFrame, b: &RgbFrame) -> Result<f64> {
    check_dims(a, b)?;
    let pa = luma_plane(a);
    let pb = luma_plane(b);
    let sum: f64 = pa.iter().zip(&pb).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((sum / pa.len() as f64).sqrt())
}

/// Universal image quality index: SSIM with C1 = C2 = 0 over a sliding 8x8
/// uniform window. Windows that are constant in both frames contribute 1
/// when the means agree, otherwise the luminance term alone.
pub fn uqi(a: &RgbFrame, b: &RgbFrame) -> Result<f64> {
    check_dims(a, b)?;
    if a.width < UQI_WINDOW || a.height < UQI_WINDOW {
        return Err(Error::InvalidInput(format!(
            "frames {}x{} too small for the {UQI_WINDOW}x{UQI_WINDOW} UQI window",
            a.width, a.height
        )));
    }
    let pa = luma_plane(a);
    let pb = luma_plane(b);

    let pre = |p: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let sums = prefix_sums(p, a.width, a.height, |v| v);
        let squares = prefix_sums(p, a.width, a.height, |v| v * v);
        (sums, squares)
    };
    let (sa, sqa) = pre(&pa);
    let (sb, sqb) = pre(&pb);
    let cross = prefix_sums_pair(&pa, &pb, a.width, a.height);

    let n = (UQI_WINDOW * UQI_WINDOW) as f64;
    let stride = a.width + 1;
    let window_sum = |prefix: &[f64], row: usize, col: usize| {
        prefix[(row + UQI_WINDOW) * stride + col + UQI_WINDOW]
            - prefix[row * stride + col + UQI_WINDOW]
            - prefix[(row + UQI_WINDOW) * stride + col]
            + prefix[row * stride + col]
    };

    let mut total = 0.0;
    let mut count = 0usize;
    for row in 0..=a.height - UQI_WINDOW {
        for col in 0..=a.width - UQI_WINDOW {
            let mu_a = window_sum(&sa, row, col) / n;
            let mu_b = window_sum(&sb, row, col) / n;
            let var_a = (window_sum(&sqa, row, col) / n - mu_a * mu_a).max(0.0);
            let var_b = (window_sum(&sqb, row, col) / n - mu_b * mu_b).max(0.0);
            let cov = window_sum(&cross, row, col) / n - mu_a * mu_b;

            let mean_sq = mu_a * mu_a + mu_b * mu_b;
            let var_sum = var_a + var_b;
            let luminance = if mean_sq == 0.0 {
                1.0
            } else {
                2.0 * mu_a * mu_b / mean_sq
            };
            let q = if var_sum == 0.0 {
                // Flat in both frames: defined by the luminance term alone.
                luminance
            } else {
                luminance * 2.0 * cov / var_sum
            };
            total += q;
            count += 1;
        }
    }
    Ok(total / count as f64)
}

/// Labeled frame collections for the comparison protocol.
#[derive(Debug, Clone)]
pub struct FrameSet {
    pub legitimate: Vec<RgbFrame>,
    pub malicious: Vec<RgbFrame>,
}

impl FrameSet {
    pub fn new(legitimate: Vec<RgbFrame>, malicious: Vec<RgbFrame>) -> Result<FrameSet> {
        if legitimate.is_empty() {
            return Err(Error::InvalidInput("need at least one legitimate frame".into()));
        }
        let (w, h) = (legitimate[0].width, legitimate[0].height);
        for f in legitimate.iter().chain(&malicious) {
            if f.width != w || f.height != h {
                return Err(Error::DimensionMismatch {
                    expected_width: w,
                    expected_height: h,
                    width: f.width,
                    height: f.height,
                });
            }
        }
        Ok(FrameSet {
            legitimate,
            malicious,
        })
    }
}

/// Mean of `metric` over the full legitimate x malicious cross product
/// (3 x 7 frames yield exactly 21 comparisons).
pub fn protocol_mean<F>(mut metric: F, frames: &FrameSet) -> Result<f64>
where
    F: FnMut(&RgbFrame, &RgbFrame) -> Result<f64>,
{
    if frames.legitimate.is_empty() || frames.malicious.is_empty() {
        return Err(Error::InvalidInput(
            "protocol mean needs non-empty legitimate and malicious sets".into(),
        ));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for legit in &frames.legitimate {
        for malicious in &frames.malicious {
            total += metric(legit, malicious)?;
            count += 1;
        }
    }
    Ok(total / count as f64)
}

/// Mean SSIM over all unordered legitimate pairs minus the protocol mean of
/// legitimate-vs-malicious SSIM. Larger means more injected distortion.
pub fn delta_ssim(frames: &FrameSet) -> Result<f64> {
    if frames.legitimate.len() < 2 {
        return Err(Error::InvalidInput(
            "delta-SSIM needs at least two legitimate frames".into(),
        ));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..frames.legitimate.len() {
        for j in i + 1..frames.legitimate.len() {
            total += ssim(&frames.legitimate[i], &frames.legitimate[j])?;
            count += 1;
        }
    }
    let legitimate = total / count as f64;
    let malicious = protocol_mean(ssim, frames)?;
    Ok(legitimate - malicious)
}

/// Per-window means/variances/covariance under a filter, plus the SSIM and
/// contrast-structure means derived from them.
struct WindowStats {
    mu_a: Vec<f64>,
    mu_b: Vec<f64>,
    raw_aa: Vec<f64>,
    raw_bb: Vec<f64>,
    raw_ab: Vec<f64>,
}

impl WindowStats {
    /// Valid-region Gaussian filtering of both planes and their products.
    fn gaussian(pa: &[f64], pb: &[f64], width: usize, height: usize) -> Result<WindowStats> {
        if width < SSIM_WINDOW || height < SSIM_WINDOW {
            return Err(Error::InvalidInput(format!(
                "frames {width}x{height} too small for the {SSIM_WINDOW}x{SSIM_WINDOW} SSIM window"
            )));
        }
        let kernel = gaussian_kernel();
        let filter = |p: &[f64]| separable_filter(p, width, height, &kernel);
        let aa: Vec<f64> = pa.iter().map(|v| v * v).collect();
        let bb: Vec<f64> = pb.iter().map(|v| v * v).collect();
        let ab: Vec<f64> = pa.iter().zip(pb).map(|(x, y)| x * y).collect();
        Ok(WindowStats {
            mu_a: filter(pa),
            mu_b: filter(pb),
            raw_aa: filter(&aa),
            raw_bb: filter(&bb),
            raw_ab: filter(&ab),
        })
    }

    /// (mean SSIM, mean contrast-structure term) over all windows.
    fn mean_ssim(&self, range: f64) -> (f64, f64) {
        let c1 = (SSIM_K1 * range).powi(2);
        let c2 = (SSIM_K2 * range).powi(2);
        let mut full = 0.0;
        let mut cs_total = 0.0;
        for i in 0..self.mu_a.len() {
            let (mu_a, mu_b) = (self.mu_a[i], self.mu_b[i]);
            let var_a = self.raw_aa[i] - mu_a * mu_a;
            let var_b = self.raw_bb[i] - mu_b * mu_b;
            let cov = self.raw_ab[i] - mu_a * mu_b;
            let luminance = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
            let cs = (2.0 * cov + c2) / (var_a + var_b + c2);
            full += luminance * cs;
            cs_total += cs;
        }
        let n = self.mu_a.len() as f64;
        (full / n, cs_total / n)
    }
}

fn gaussian_kernel() -> [f64; SSIM_WINDOW] {
    let mut kernel = [0.0; SSIM_WINDOW];
    let center = (SSIM_WINDOW / 2) as f64;
    let mut sum = 0.0;
    for (i, k) in kernel.iter_mut().enumerate() {
        let d = i as f64 - center;
        *k = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
        sum += *k;
    }
    for k in &mut kernel {
        *k /= sum;
    }
    kernel
}

/// Separable valid-region convolution: output is
/// (width - win + 1) x (height - win + 1).
fn separable_filter(plane: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let win = kernel.len();
    let out_w = width - win + 1;
    let out_h = height - win + 1;
    // Horizontal pass.
    let mut horiz = vec![0.0; out_w * height];
    for row in 0..height {
        for col in 0..out_w {
            let mut acc = 0.0;
            for (t, &k) in kernel.iter().enumerate() {
                acc += k * plane[row * width + col + t];
            }
            horiz[row * out_w + col] = acc;
        }
    }
    // Vertical pass.
    let mut out = vec![0.0; out_w * out_h];
    for row in 0..out_h {
        for col in 0..out_w {
            let mut acc = 0.0;
            for (t, &k) in kernel.iter().enumerate() {
                acc += k * horiz[(row + t) * out_w + col];
            }
            out[row * out_w + col] = acc;
        }
    }
    out
}

fn downsample_2x2(plane: &[f64], width: usize, height: usize) -> (Vec<f64>, usize, usize) {
    let out_w = width / 2;
    let out_h = height / 2;
    let mut out = vec![0.0; out_w * out_h];
    for row in 0..out_h {
        for col in 0..out_w {
            let i = 2 * row * width + 2 * col;
            out[row * out_w + col] =
                (plane[i] + plane[i + 1] + plane[i + width] + plane[i + width + 1]) / 4.0;
        }
    }
    (out, out_w, out_h)
}

/// Inclusive 2D prefix sums with a (width+1) x (height+1) guard row/column.
fn prefix_sums(plane: &[f64], width: usize, height: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let stride = width + 1;
    let mut out = vec![0.0; stride * (height + 1)];
    for row in 0..height {
        let mut row_sum = 0.0;
        for col in 0..width {
            row_sum += f(plane[row * width + col]);
            out[(row + 1) * stride + col + 1] = out[row * stride + col + 1] + row_sum;
        }
    }
    out
}

fn prefix_sums_pair(pa: &[f64], pb: &[f64], width: usize, height: usize) -> Vec<f64> {
    let stride = width + 1;
    let mut out = vec![0.0; stride * (height + 1)];
    for row in 0..height {
        let mut row_sum = 0.0;
        for col in 0..width {
            row_sum += pa[row * width + col] * pb[row * width + col];
            out[(row + 1) * stride + col + 1] = out[row * stride + col + 1] + row_sum;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_frame(w: usize, h: usize, v: u16) -> RgbFrame {
        RgbFrame::new_filled(w, h, 255, [v, v, v])
    }

    fn random_frame(w: usize, h: usize, seed: u64) -> RgbFrame {
        let mut state = seed;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 256) as u16
        };
        let data = (0..w * h).map(|_| [next(), next(), next()]).collect();
        RgbFrame {
            width: w,
            height: h,
            max_value: 255,
            data,
        }
    }

    #[test]
    fn ssim_self_similarity_and_symmetry() {
        let a = random_frame(48, 40, 3);
        let b = random_frame(48, 40, 4);
        assert!((ssim(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!((ssim(&a, &b).unwrap() - ssim(&b, &a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ssim_constant_images_closed_form() {
        // Both windows are flat, so SSIM collapses to
        // (2*mu_a*mu_b + C1) * C2 / ((mu_a^2 + mu_b^2 + C1) * C2).
        let a = constant_frame(32, 32, 0);
        let b = constant_frame(32, 32, 255);
        let c1 = (0.01f64 * 255.0).powi(2);
        let expected = c1 / (255.0f64 * 255.0 + c1);
        assert!((ssim(&a, &b).unwrap() - expected).abs() < 1e-6);
    }

    #[test]
    fn ssim_rejects_dimension_mismatch() {
        let a = constant_frame(32, 32, 0);
        let b = constant_frame(33, 32, 0);
        assert!(ssim(&a, &b).is_err());
    }

    #[test]
    fn ms_ssim_identity_and_size_gate() {
        let a = random_frame(200, 180, 5);
        assert!((ms_ssim(&a, &a).unwrap() - 1.0).abs() < 1e-9);
        let small = random_frame(160, 160, 6);
        assert!(ms_ssim(&small, &small).is_err());
    }

    #[test]
    fn ms_ssim_constant_images_closed_form() {
        // Constant frames have cs = 1 at every scale, so the result is the
        // luminance term at the coarsest scale raised to its weight.
        let a = constant_frame(200, 180, 60);
        let b = constant_frame(200, 180, 140);
        let (mu_a, mu_b) = (luma_plane(&a)[0], luma_plane(&b)[0]);
        let c1 = (0.01f64 * 255.0).powi(2);
        let luminance = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
        let expected = luminance.powf(MS_SSIM_WEIGHTS[4]);
        assert!((ms_ssim(&a, &b).unwrap() - expected).abs() < 1e-6);
    }

    #[test]
    fn l2_zero_on_identical_and_single_pixel_case() {
        let a = random_frame(40, 30, 9);
        assert_eq!(l2_norm(&a, &a).unwrap(), 0.0);

        let zero = constant_frame(40, 30, 0);
        let mut one = zero.clone();
        one.set(7, 11, [255, 255, 255]);
        let n = (40 * 30) as f64;
        let expected = 255.0 / n.sqrt();
        assert!((l2_norm(&zero, &one).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn uqi_identity_symmetry_and_constant_case() {
        let a = random_frame(40, 30, 13);
        let b = random_frame(40, 30, 14);
        assert!((uqi(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!((uqi(&a, &b).unwrap() - uqi(&b, &a).unwrap()).abs() < 1e-12);

        // Closed form on constants with different means: luminance term only.
        let x = constant_frame(24, 24, 50);
        let y = constant_frame(24, 24, 200);
        let (mu_a, mu_b) = (luma_plane(&x)[0], luma_plane(&y)[0]);
        let expected = 2.0 * mu_a * mu_b / (mu_a * mu_a + mu_b * mu_b);
        assert!((uqi(&x, &y).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn protocol_counts_cross_product() {
        let frames = FrameSet::new(
            vec![constant_frame(16, 16, 10); 3],
            vec![constant_frame(16, 16, 20); 7],
        )
        .unwrap();
        let mut calls = 0usize;
        let mean = protocol_mean(
            |_, _| {
                calls += 1;
                Ok(0.5)
            },
            &frames,
        )
        .unwrap();
        assert_eq!(calls, 21);
        assert!((mean - 0.5).abs() < 1e-12);
    }

    #[test]
    fn protocol_mean_identical_sets_is_one() {
        let legit = vec![
            random_frame(32, 32, 1),
            random_frame(32, 32, 2),
            random_frame(32, 32, 3),
        ];
        let frames = FrameSet::new(legit.clone(), legit).unwrap();
        let mean = protocol_mean(ssim, &frames).unwrap();
        // Cross product includes off-diagonal pairs, so compare per element.
        assert!(mean <= 1.0 + 1e-12);
        let identical = FrameSet::new(
            vec![random_frame(32, 32, 4); 3],
            vec![random_frame(32, 32, 4); 3],
        )
        .unwrap();
        assert!((protocol_mean(ssim, &identical).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_ssim_zero_when_malicious_equals_legitimate() {
        let legit = vec![random_frame(32, 32, 7); 3];
        let frames = FrameSet::new(legit.clone(), legit).unwrap();
        assert!(delta_ssim(&frames).unwrap().abs() < 1e-12);
    }

    #[test]
    fn delta_ssim_with_noise_free_legitimate_is_one_minus_malicious() {
        let legit = vec![constant_frame(32, 32, 0); 3];
        let malicious = vec![constant_frame(32, 32, 255); 2];
        let frames = FrameSet::new(legit, malicious).unwrap();
        let malicious_mean = protocol_mean(ssim, &frames).unwrap();
        let delta = delta_ssim(&frames).unwrap();
        assert!((delta - (1.0 - malicious_mean)).abs() < 1e-12);
    }

    #[test]
    fn delta_ssim_requires_two_legitimate_frames() {
        let frames = FrameSet::new(
            vec![constant_frame(16, 16, 0)],
            vec![constant_frame(16, 16, 0)],
        )
        .unwrap();
        assert!(delta_ssim(&frames).is_err());
    }
}
