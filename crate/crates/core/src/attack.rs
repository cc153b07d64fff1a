//! The attacker's signal construction: luminance extraction from a source
//! image, resampling to the transmit rate, amplitude modulation to baseband
//! IQ, and a Gaussian-noise signal for untargeted disruption.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::rng;

/// Rec. 709 luma coefficients used to turn RGB into transmit amplitude.
pub const LUMA_R: f64 = 0.2126;
pub const LUMA_G: f64 = 0.7152;
pub const LUMA_B: f64 = 0.0722;

/// 8-bit RGBA source image for pattern injection. Opaque images carry
/// alpha 255 everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceImage {
    pub width: usize,
    pub height: usize,
    /// Row-major [r, g, b, a].
    pub pixels: Vec<[u8; 4]>,
}

impl SourceImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 4]>) -> Result<SourceImage> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("image dimensions must be >= 1".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "pixel buffer has {} entries, expected {}",
                pixels.len(),
                width * height
            )));
        }
        Ok(SourceImage {
            width,
            height,
            pixels,
        })
    }
}

/// Amplitude envelope of the attack: one symbol per target pixel in the
/// sensor's serialized readout order, plus the symbol rate and carrier the
/// radio will transmit at.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackSignal {
    envelope: Vec<f64>,
    pub symbol_rate: f64,
    pub carrier_hz: f64,
}

impl AttackSignal {
    pub fn new(envelope: Vec<f64>, symbol_rate: f64, carrier_hz: f64) -> Result<AttackSignal> {
        if !(symbol_rate > 0.0) {
            return Err(Error::InvalidInput("symbol_rate must be > 0".into()));
        }
        for &v in &envelope {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!(
                    "envelope value {v} outside [0, 1]"
                )));
            }
        }
        Ok(AttackSignal {
            envelope,
            symbol_rate,
            carrier_hz,
        })
    }

    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    pub fn len(&self) -> usize {
        self.envelope.len()
    }

    pub fn is_empty(&self) -> bool {
        self.envelope.is_empty()
    }
}

/// Convert a source image into the transmit envelope for a sensor with the
/// given total resolution: Rec. 709 linear luminance normalized to [0, 1],
/// scaled by alpha, anchored at (0,0), everything outside the image padded
/// with zero amplitude. One symbol per photodiode, row-major.
pub fn extract_luminance(
    image: &SourceImage,
    target_cols_total: usize,
    target_rows_total: usize,
) -> Result<Vec<f64>> {
    if image.width > target_cols_total || image.height > target_rows_total {
        return Err(Error::InvalidInput(format!(
            "source image {}x{} larger than target {}x{} (no implicit downscale)",
            image.width, image.height, target_cols_total, target_rows_total
        )));
    }
    let mut envelope = vec![0.0; target_cols_total * target_rows_total];
    for row in 0..image.height {
        for col in 0..image.width {
            let [r, g, b, a] = image.pixels[row * image.width + col];
            let luma = (LUMA_R * r as f64 + LUMA_G * g as f64 + LUMA_B * b as f64) / 255.0;
            envelope[row * target_cols_total + col] = luma * (a as f64 / 255.0);
        }
    }
    Ok(envelope)
}

/// Sample rate needed to address every photodiode of a sensor once per
/// frame: `N_columns * N_rows * F`.
pub fn required_sample_rate(cols_total: usize, rows_total: usize, frame_rate: f64) -> Result<f64> {
    if cols_total == 0 || rows_total == 0 || !(frame_rate > 0.0) {
        return Err(Error::InvalidInput(
            "sample-rate inputs must be positive".into(),
        ));
    }
    Ok(cols_total as f64 * rows_total as f64 * frame_rate)
}

/// Linear-interpolation resampling from `from_rate` to `to_rate`. Output
/// length is `ceil(len * to_rate / from_rate)`; positions past the last
/// input sample clamp to it, so values stay within the input's range.
pub fn resample(envelope: &[f64], from_rate: f64, to_rate: f64) -> Result<Vec<f64>> {
    if !(from_rate > 0.0) || !(to_rate > 0.0) {
        return Err(Error::InvalidInput("resample rates must be > 0".into()));
    }
    if envelope.is_empty() {
        return Ok(Vec::new());
    }
    let n_out = (envelope.len() as f64 * to_rate / from_rate).ceil() as usize;
    let step = from_rate / to_rate;
    let last = envelope.len() - 1;
    let out = (0..n_out)
        .map(|i| {
            let pos = (i as f64 * step).min(last as f64);
            let idx = pos.floor() as usize;
            let frac = pos - idx as f64;
            if idx >= last {
                envelope[last]
            } else {
                envelope[idx] + (envelope[idx + 1] - envelope[idx]) * frac
            }
        })
        .collect();
    Ok(out)
}

/// Amplitude-modulate the envelope to complex baseband: each symbol is held
/// for `iq_rate / symbol_rate` samples (zero-order hold) and mixed with
/// `exp(j 2 pi f_offset t)`. With the default offset of zero the carrier is
/// left to the radio hardware and Q stays 0.
pub fn modulate(
    envelope: &[f64],
    symbol_rate: f64,
    iq_rate: f64,
    freq_offset_hz: f64,
) -> Result<Vec<(f32, f32)>> {
    if !(symbol_rate > 0.0) || !(iq_rate > 0.0) {
        return Err(Error::InvalidInput("modulation rates must be > 0".into()));
    }
    if envelope.is_empty() {
        return Ok(Vec::new());
    }
    let n_out = (envelope.len() as f64 * iq_rate / symbol_rate).ceil() as usize;
    let out = (0..n_out)
        .map(|i| {
            let t = i as f64 / iq_rate;
            let symbol = ((t * symbol_rate).floor() as usize).min(envelope.len() - 1);
            let amp = envelope[symbol];
            let phase = 2.0 * std::f64::consts::PI * freq_offset_hz * t;
            ((amp * phase.cos()) as f32, (amp * phase.sin()) as f32)
        })
        .collect();
    Ok(out)
}

pub const GAUSSIAN_NOISE_MEAN: f64 = 0.5;
pub const GAUSSIAN_NOISE_SIGMA: f64 = 0.25;

/// Seeded i.i.d. Gaussian envelope clamped to [0, 1]; the simplest attack
/// signal, applying random per-pixel perturbations.
pub fn gaussian_noise_signal(n_symbols: usize, mean: f64, sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, &[rng::STREAM_ENVELOPE]);
    if sigma == 0.0 {
        return vec![mean.clamp(0.0, 1.0); n_symbols];
    }
    let normal = Normal::new(mean, sigma).expect("sigma validated");
    (0..n_symbols)
        .map(|_| normal.sample(&mut rng).clamp(0.0, 1.0))
        .collect()
}

/// Sine-tone envelope (the sweep experiments' stimulus): a `tone_hz` sine
/// swung over the full [0, 1] amplitude range at the given symbol rate.
pub fn sine_envelope(n_symbols: usize, symbol_rate: f64, tone_hz: f64) -> Vec<f64> {
    (0..n_symbols)
        .map(|k| {
            let t = k as f64 / symbol_rate;
            0.5 + 0.5 * (2.0 * std::f64::consts::PI * tone_hz * t).sin()
        })
        .collect()
}

/// Uniform random offset in [0, samples_per_frame): the unsynchronized
/// attacker's initial clock error.
pub fn draw_offset(samples_per_frame: usize, seed: u64) -> f64 {
    let mut rng = rng::stream(seed, &[rng::STREAM_OFFSET]);
    rng.random_range(0.0..samples_per_frame as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solid(width: usize, height: usize, px: [u8; 4]) -> SourceImage {
        SourceImage::new(width, height, vec![px; width * height]).unwrap()
    }

    #[test]
    fn luminance_of_primaries() {
        let white = extract_luminance(&solid(1, 1, [255, 255, 255, 255]), 1, 1).unwrap();
        assert!((white[0] - 1.0).abs() < 1e-12);
        let black = extract_luminance(&solid(1, 1, [0, 0, 0, 255]), 1, 1).unwrap();
        assert_eq!(black[0], 0.0);
        let red = extract_luminance(&solid(1, 1, [255, 0, 0, 255]), 1, 1).unwrap();
        assert!((red[0] - 0.2126).abs() < 1e-12);
    }

    #[test]
    fn padding_and_alpha() {
        let mut pixels = vec![[255, 255, 255, 255]; 4];
        pixels[1] = [255, 255, 255, 0]; // fully transparent
        pixels[2] = [255, 255, 255, 51]; // 20% opaque
        let image = SourceImage::new(2, 2, pixels).unwrap();
        let env = extract_luminance(&image, 4, 3).unwrap();
        assert_eq!(env.len(), 12);
        assert!((env[0] - 1.0).abs() < 1e-12);
        assert_eq!(env[1], 0.0);
        assert_eq!(env[2], 0.0); // padding
        assert!((env[4] - 51.0 / 255.0).abs() < 1e-12);
        // padded tail is silent
        assert!(env[8..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn oversized_image_rejected() {
        let image = solid(5, 1, [0, 0, 0, 255]);
        assert!(extract_luminance(&image, 4, 4).is_err());
    }

    #[test]
    fn sample_rate_products() {
        assert_eq!(required_sample_rate(1000, 800, 30.0).unwrap(), 24_000_000.0);
        assert_eq!(required_sample_rate(1, 1, 1.0).unwrap(), 1.0);
        assert!(required_sample_rate(0, 1, 1.0).is_err());
    }

    #[test]
    fn resample_identity_and_constant() {
        let env = vec![0.1, 0.9, 0.4];
        assert_eq!(resample(&env, 5e6, 5e6).unwrap(), env);
        let constant = vec![0.3; 17];
        for out in resample(&constant, 3.0, 7.0).unwrap() {
            assert!((out - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_upsample_ramp() {
        // Hand-computed linear interpolation with endpoint clamping.
        let out = resample(&[0.0, 1.0], 1.0, 2.0).unwrap();
        assert_eq!(out.len(), 4);
        assert!((out[0] - 0.0).abs() < 1e-12);
        assert!((out[1] - 0.5).abs() < 1e-12);
        assert!((out[2] - 1.0).abs() < 1e-12);
        assert!((out[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resample_stays_in_range() {
        let env = vec![0.0, 1.0, 0.2, 0.8, 0.5];
        for out in resample(&env, 10.0, 23.0).unwrap() {
            assert!((0.0..=1.0).contains(&out));
        }
    }

    #[test]
    fn modulate_zero_and_dc() {
        let silent = modulate(&[0.0; 8], 1e6, 4e6, 0.0).unwrap();
        assert!(silent.iter().all(|&(i, q)| i == 0.0 && q == 0.0));

        let dc = modulate(&[1.0; 3], 1e6, 1e6, 0.0).unwrap();
        assert_eq!(dc, vec![(1.0, 0.0); 3]);
    }

    #[test]
    fn modulate_zero_order_hold() {
        let out = modulate(&[0.5], 1e6, 4e6, 0.0).unwrap();
        assert_eq!(out, vec![(0.5, 0.0); 4]);
    }

    #[test]
    fn modulate_rejects_bad_rates() {
        assert!(modulate(&[0.5], 0.0, 4e6, 0.0).is_err());
        assert!(modulate(&[0.5], 1e6, 0.0, 0.0).is_err());
    }

    #[test]
    fn gaussian_signal_is_deterministic_and_clamped() {
        let a = gaussian_noise_signal(512, GAUSSIAN_NOISE_MEAN, GAUSSIAN_NOISE_SIGMA, 9);
        let b = gaussian_noise_signal(512, GAUSSIAN_NOISE_MEAN, GAUSSIAN_NOISE_SIGMA, 9);
        assert_eq!(a, b);
        assert!(a.iter().all(|&v| (0.0..=1.0).contains(&v)));
        let c = gaussian_noise_signal(16, GAUSSIAN_NOISE_MEAN, 0.0, 9);
        assert!(c.iter().all(|&v| v == 0.5));
    }

    #[test]
    fn gaussian_signal_mean_matches_monte_carlo_oracle() {
        // Independent Monte-Carlo estimate of the clamped Gaussian mean,
        // using a plain LCG so it shares nothing with the implementation.
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut lcg = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut oracle_sum = 0.0;
        let n = 1_000_000;
        for _ in 0..n / 2 {
            // Box-Muller
            let (u1, u2) = (lcg().max(1e-12), lcg());
            let r = (-2.0 * u1.ln()).sqrt();
            let theta = 2.0 * std::f64::consts::PI * u2;
            for z in [r * theta.cos(), r * theta.sin()] {
                oracle_sum += (0.5 + 0.25 * z).clamp(0.0, 1.0);
            }
        }
        let oracle_mean = oracle_sum / n as f64;

        let env = gaussian_noise_signal(n, GAUSSIAN_NOISE_MEAN, GAUSSIAN_NOISE_SIGMA, 77);
        let mean = env.iter().sum::<f64>() / env.len() as f64;
        assert!((mean - oracle_mean).abs() < 0.01, "impl {mean} oracle {oracle_mean}");
        assert!((mean - 0.51).abs() <= 0.02, "mean {mean}");
    }

    #[test]
    fn envelope_rejects_out_of_range() {
        assert!(AttackSignal::new(vec![1.1], 1e6, 190e6).is_err());
        assert!(AttackSignal::new(vec![-0.1], 1e6, 190e6).is_err());
        assert!(AttackSignal::new(vec![0.5], 0.0, 190e6).is_err());
    }
}
