//! Exposure, serialized readout, and multi-frame capture with an optional
//! interference source running on its own clock.

use rand_distr::{Distribution, Normal, Poisson};

use crate::attack::{self, AttackSignal};
use crate::coupling::{self, ChannelConfig, InducedWaveform};
use crate::error::{Error, Result};
use crate::rng;

use super::frame::{ChargeFrame, RawFrame, RgbFrame};
use super::scene::Scene;
use super::{demosaic, SensorArchitecture, SensorConfig};

/// Integrate the scene into per-photodiode signal charge.
///
/// Effective photodiodes accumulate `full_well * radiance * exposure /
/// reference_exposure` on their CFA channel plus Poisson dark current;
/// shielded-border photodiodes see dark current only. The result is the
/// pre-amplification, pre-injection charge.
pub fn expose(scene: &Scene, config: &SensorConfig, seed: u64) -> Result<ChargeFrame> {
    config.validate()?;
    if scene.width() != config.cols_effective || scene.height() != config.rows_effective {
        return Err(Error::DimensionMismatch {
            expected_width: config.cols_effective,
            expected_height: config.rows_effective,
            width: scene.width(),
            height: scene.height(),
        });
    }

    let mut dark_rng = rng::stream(seed, &[rng::STREAM_DARK_CURRENT]);
    let mut shot_rng = rng::stream(seed, &[rng::STREAM_SHOT_NOISE]);
    let dark_mean = config.dark_current_rate * config.exposure_time_us;
    let dark = if dark_mean > 0.0 {
        Some(Poisson::new(dark_mean).expect("positive mean"))
    } else {
        None
    };
    let exposure_scale = config.exposure_time_us / config.reference_exposure_us;
    let (border_col, border_row) = config.border_origin();

    let mut frame = ChargeFrame::zeros(config.cols_total, config.rows_total);
    for row in 0..config.rows_total {
        for col in 0..config.cols_total {
            let mut charge = 0.0;
            if config.is_effective(row, col) {
                let scene_px = scene.pixel(row - border_row, col - border_col);
                let radiance = match config.cfa.channel_at(row, col) {
                    super::Channel::Red => scene_px[0],
                    super::Channel::Green => scene_px[1],
                    super::Channel::Blue => scene_px[2],
                };
                let mean = config.full_well * radiance * exposure_scale;
                charge += if config.shot_noise && mean > 0.0 {
                    Poisson::new(mean).expect("positive mean").sample(&mut shot_rng)
                } else {
                    mean
                };
            }
            if let Some(d) = &dark {
                charge += d.sample(&mut dark_rng);
            }
            frame.data[row * config.cols_total + col] = charge;
        }
    }
    Ok(frame)
}

/// Digitize a charge frame strictly in serialized order (row-major from
/// (0,0)) through the single measurement unit.
///
/// Sample `k` becomes `clamp(round(adu_per_charge * (C_l[k] + C_m[k] + N)),
/// 0, 2^bits - 1)` with `N ~ Normal(0, read_noise_sigma)` drawn from a
/// stream independent of the interference, so identical seeds see identical
/// noise with the attack on or off. For CMOS sensors the induced term is
/// scaled by `cmos_coupling_factor`.
pub fn readout(
    charge: &ChargeFrame,
    config: &SensorConfig,
    interference: Option<&InducedWaveform>,
    seed: u64,
) -> Result<RawFrame> {
    config.validate()?;
    if charge.width != config.cols_total || charge.height != config.rows_total {
        return Err(Error::DimensionMismatch {
            expected_width: config.cols_total,
            expected_height: config.rows_total,
            width: charge.width,
            height: charge.height,
        });
    }
    if let Some(wave) = interference {
        if wave.sample_rate != config.readout_rate() {
            return Err(Error::RateMismatch {
                expected: config.readout_rate(),
                got: wave.sample_rate,
            });
        }
        if wave.samples.len() != config.samples_per_frame() {
            return Err(Error::InvalidInput(format!(
                "interference covers {} samples, frame needs {}",
                wave.samples.len(),
                config.samples_per_frame()
            )));
        }
    }

    let coupling_scale = match config.architecture {
        SensorArchitecture::CcdInterline => 1.0,
        SensorArchitecture::Cmos => config.cmos_coupling_factor,
    };
    let max = config.adc_max();
    // Normalize by the full well before scaling so that exact charge ratios
    // (full scale, half scale) quantize exactly.
    let scale = config.linear_gain() * max as f64;

    let mut noise_rng = rng::stream(seed, &[rng::STREAM_READ_NOISE]);
    let noise = if config.read_noise_sigma > 0.0 {
        Some(Normal::new(0.0, config.read_noise_sigma).expect("positive sigma"))
    } else {
        None
    };

    let mut data = Vec::with_capacity(charge.data.len());
    for (k, &c_l) in charge.data.iter().enumerate() {
        let c_m = interference.map_or(0.0, |w| w.samples[k]) * coupling_scale;
        let n = noise.as_ref().map_or(0.0, |d| d.sample(&mut noise_rng));
        let value = (c_l + c_m + n) / config.full_well * scale;
        data.push(round_half_up_clamped(value, max));
    }
    Ok(RawFrame {
        width: config.cols_total,
        height: config.rows_total,
        max_value: max,
        data,
    })
}

/// Round half up, then clamp into the ADC range.
fn round_half_up_clamped(value: f64, max: u16) -> u16 {
    let rounded = (value + 0.5).floor();
    if rounded <= 0.0 {
        0
    } else if rounded >= max as f64 {
        max
    } else {
        rounded as u16
    }
}

/// How the attack clock's initial offset is chosen for a capture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OffsetPolicy {
    /// Uniform over one frame period, drawn once per capture sequence
    /// (the unsynchronized threat model).
    Random,
    /// Forced offset in readout samples (debug / registration mode).
    Fixed(f64),
}

/// A transmitting attacker: signal, channel, clock offset policy, and
/// whether the envelope loops for as long as the capture runs.
#[derive(Debug, Clone)]
pub struct AttackScenario {
    pub signal: AttackSignal,
    pub channel: ChannelConfig,
    pub offset: OffsetPolicy,
    pub repeat: bool,
}

impl AttackScenario {
    pub fn new(signal: AttackSignal, channel: ChannelConfig) -> AttackScenario {
        AttackScenario {
            signal,
            channel,
            offset: OffsetPolicy::Random,
            repeat: true,
        }
    }

    pub fn with_offset(mut self, offset: OffsetPolicy) -> AttackScenario {
        self.offset = offset;
        self
    }
}

/// Frames produced by one continuous capture.
#[derive(Debug, Clone)]
pub struct CaptureSequence {
    pub rgb_frames: Vec<RgbFrame>,
    pub raw_frames: Vec<RawFrame>,
    /// Offset actually used by the attack clock, when an attack ran.
    pub offset_samples: Option<f64>,
}

/// Capture `n_frames` consecutive frames on one continuous readout clock.
///
/// The attack waveform runs on its own clock: its offset is drawn once per
/// sequence, and when its symbol rate differs from the readout rate the
/// injected pattern drifts across frames. Per-frame noise substreams derive
/// from `(seed, frame_index)`, so any frame can be reproduced independently.
pub fn capture_sequence(
    scene: &Scene,
    config: &SensorConfig,
    attack: Option<&AttackScenario>,
    n_frames: usize,
    seed: u64,
) -> Result<CaptureSequence> {
    if n_frames == 0 {
        return Err(Error::InvalidInput("n_frames must be >= 1".into()));
    }
    config.validate()?;

    let spf = config.samples_per_frame();
    let readout_rate = config.readout_rate();

    let attack_state = match attack {
        Some(scenario) => {
            let offset = match scenario.offset {
                OffsetPolicy::Random => attack::draw_offset(spf, seed),
                OffsetPolicy::Fixed(samples) => samples,
            };
            let amplitude =
                coupling::induced_amplitude(&scenario.channel, &config.susceptibility)?;
            Some((scenario, offset, amplitude))
        }
        None => None,
    };

    let mut rgb_frames = Vec::with_capacity(n_frames);
    let mut raw_frames = Vec::with_capacity(n_frames);
    for frame_idx in 0..n_frames {
        let frame_seed = rng::derive_seed(seed, &[rng::STREAM_FRAME, frame_idx as u64]);
        let charge = expose(scene, config, frame_seed)?;
        let wave = attack_state.as_ref().map(|(scenario, offset, amplitude)| {
            coupling::induce_window(
                &scenario.signal,
                *amplitude,
                readout_rate,
                *offset,
                (frame_idx * spf) as u64,
                spf,
                scenario.repeat,
            )
        });
        let raw = readout(&charge, config, wave.as_ref(), frame_seed)?;
        rgb_frames.push(demosaic(&raw, config)?);
        raw_frames.push(raw);
    }
    Ok(CaptureSequence {
        rgb_frames,
        raw_frames,
        offset_samples: attack_state.map(|(_, offset, _)| offset),
    })
}
