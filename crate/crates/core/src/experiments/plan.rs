//! Experiment plan documents (JSON-loadable) and the desk-scale defaults.

use serde::{Deserialize, Serialize};

use crate::coupling::ChannelConfig;
use crate::error::{Error, Result};
use crate::profiles;
use crate::sensor::{Scene, SensorConfig};

/// Frames captured per sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameCounts {
    pub legitimate: usize,
    pub malicious: usize,
}

impl Default for FrameCounts {
    fn default() -> FrameCounts {
        FrameCounts {
            legitimate: 3,
            malicious: 7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Frequency,
    Power,
    Distance,
    Gain,
    Exposure,
}

/// What the attacker transmits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackSource {
    /// Amplitude-modulated sine tone.
    Sine { tone_hz: f64 },
    /// Clamped Gaussian white noise, one symbol per pixel.
    GaussianNoise,
    /// Luminance of an image file, one symbol per pixel.
    Image { path: std::path::PathBuf },
}

/// Scene observed by the camera during an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneSpec {
    Dark,
    Uniform { level: f64 },
}

impl SceneSpec {
    pub fn build(&self, config: &SensorConfig) -> Result<Scene> {
        match *self {
            SceneSpec::Dark => Ok(Scene::dark(config.cols_effective, config.rows_effective)),
            SceneSpec::Uniform { level } => {
                Scene::uniform(config.cols_effective, config.rows_effective, level)
            }
        }
    }
}

/// Inclusive numeric range with a fixed step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) {
            return Err(Error::InvalidConfig("sweep step must be > 0".into()));
        }
        if self.stop < self.start {
            return Err(Error::InvalidConfig("sweep range bounds out of order".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let n = ((self.stop - self.start) / self.step).round() as usize;
        for i in 0..=n {
            let v = self.start + i as f64 * self.step;
            if v <= self.stop + self.step * 1e-9 {
                out.push(v);
            }
        }
        out
    }
}

/// One swept-axis experiment: per point, capture legitimate and malicious
/// frame sets and evaluate the comparison protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    pub sensor: SensorConfig,
    pub channel: ChannelConfig,
    pub axis: SweepAxis,
    /// Either an explicit value list or a range; `values` wins when both set.
    #[serde(default)]
    pub values: Vec<f64>,
    #[serde(default)]
    pub range: Option<SweepRange>,
    #[serde(default)]
    pub frames: FrameCounts,
    pub source: AttackSource,
    #[serde(default)]
    pub scene: Option<SceneSpec>,
    /// For power sweeps: repeat the sweep at each of these gain indices.
    #[serde(default)]
    pub gain_indices: Option<Vec<u8>>,
    pub master_seed: u64,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        self.sensor.validate()?;
        self.channel.validate()?;
        if self.values.is_empty() {
            match &self.range {
                Some(range) => range.validate()?,
                None => {
                    return Err(Error::InvalidConfig(
                        "sweep needs either values or a range".into(),
                    ))
                }
            }
        }
        if self.frames.legitimate < 1 || self.frames.malicious < 1 {
            return Err(Error::InvalidConfig("frame counts must be >= 1".into()));
        }
        if let AttackSource::Sine { tone_hz } = self.source {
            if !(tone_hz > 0.0) {
                return Err(Error::InvalidConfig("sine tone must be > 0".into()));
            }
        }
        Ok(())
    }

    pub fn axis_values(&self) -> Vec<f64> {
        if !self.values.is_empty() {
            self.values.clone()
        } else {
            self.range.map(|r| r.values()).unwrap_or_default()
        }
    }
}

/// Fine-grained pattern injection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternPlan {
    pub sensor: SensorConfig,
    pub channel: ChannelConfig,
    pub n_frames: usize,
    /// Attack clock offset in readout samples; None draws it randomly.
    #[serde(default)]
    pub offset_samples: Option<f64>,
    /// Attack symbol rate as a multiple of the readout rate (1.0 = matched).
    #[serde(default = "default_rate_factor")]
    pub rate_factor: f64,
    /// Disable sensor noise for clean registration measurements.
    #[serde(default)]
    pub noise_free: bool,
    pub master_seed: u64,
}

fn default_rate_factor() -> f64 {
    1.0
}

impl PatternPlan {
    pub fn validate(&self) -> Result<()> {
        self.sensor.validate()?;
        self.channel.validate()?;
        if self.n_frames == 0 {
            return Err(Error::InvalidConfig("n_frames must be >= 1".into()));
        }
        if !(self.rate_factor > 0.0) {
            return Err(Error::InvalidConfig("rate_factor must be > 0".into()));
        }
        Ok(())
    }
}

/// Barcode-scanning campaign over an (exposure, gain) grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarcodeCampaignPlan {
    pub sensor: SensorConfig,
    pub channel: ChannelConfig,
    pub exposures_us: Vec<f64>,
    pub gain_indices: Vec<u8>,
    /// Clean frames and attacked frames per grid point.
    pub frames_per_setting: usize,
    pub bg_radiance: f64,
    pub bar_radiance: f64,
    pub module_width_px: usize,
    pub quiet_modules: usize,
    pub bar_height_px: usize,
    /// Payloads of the rendered barcodes (the paper's box carries two).
    pub payloads: Vec<Vec<u8>>,
    pub master_seed: u64,
}

impl BarcodeCampaignPlan {
    pub fn validate(&self) -> Result<()> {
        self.sensor.validate()?;
        self.channel.validate()?;
        if self.exposures_us.is_empty() || self.gain_indices.is_empty() {
            return Err(Error::InvalidConfig("campaign grid must be non-empty".into()));
        }
        if self.frames_per_setting == 0 {
            return Err(Error::InvalidConfig("frames_per_setting must be >= 1".into()));
        }
        if self.payloads.is_empty() {
            return Err(Error::InvalidConfig("need at least one barcode payload".into()));
        }
        for p in &self.payloads {
            if p.len() != 12 {
                return Err(Error::InvalidConfig("payloads must have 12 digits".into()));
            }
        }
        Ok(())
    }
}

/// Exposure-probing detector campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorPlan {
    pub sensor: SensorConfig,
    pub channel: ChannelConfig,
    pub scene: SceneSpec,
    pub n_frames: usize,
    /// Per-frame probability that the frame is a minimum-exposure probe.
    pub probe_probability: f64,
    pub probe_exposure_us: f64,
    /// Mean-luma threshold (ADC counts) above which a probe frame flags.
    pub threshold_adu: f64,
    pub attack_on: bool,
    pub source: AttackSource,
    pub master_seed: u64,
}

impl DetectorPlan {
    pub fn validate(&self) -> Result<()> {
        self.sensor.validate()?;
        self.channel.validate()?;
        if self.n_frames == 0 {
            return Err(Error::InvalidConfig("n_frames must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.probe_probability) {
            return Err(Error::InvalidConfig("probe_probability must be in [0, 1]".into()));
        }
        if !(self.probe_exposure_us > 0.0) {
            return Err(Error::InvalidConfig("probe_exposure_us must be > 0".into()));
        }
        Ok(())
    }
}

/// Desk-scale default frequency sweep: 50-500 MHz in 5 MHz steps, high gain,
/// dark scene, 1 kHz sine stimulus.
pub fn default_frequency_plan() -> SweepPlan {
    SweepPlan {
        sensor: profiles::dfm_desk().with_gain(29),
        channel: profiles::bench_channel(),
        axis: SweepAxis::Frequency,
        values: Vec::new(),
        range: Some(SweepRange {
            start: 50e6,
            stop: 500e6,
            step: 5e6,
        }),
        frames: FrameCounts::default(),
        source: AttackSource::Sine { tone_hz: 1000.0 },
        scene: Some(SceneSpec::Dark),
        gain_indices: None,
        master_seed: 0x5eed,
    }
}

/// Default power sweep: -6.8 to 20.1 dBm at 3 cm, repeated per gain.
pub fn default_power_plan() -> SweepPlan {
    SweepPlan {
        sensor: profiles::dfm_desk(),
        channel: profiles::bench_channel(),
        axis: SweepAxis::Power,
        values: vec![-6.8, -4.1, -1.4, 1.3, 4.0, 6.7, 9.4, 12.1, 14.8, 17.5, 20.1],
        range: None,
        frames: FrameCounts::default(),
        source: AttackSource::Sine { tone_hz: 1000.0 },
        scene: Some(SceneSpec::Dark),
        gain_indices: Some(vec![20, 25, 29]),
        master_seed: 0x5eed,
    }
}

/// Default distance sweep: 3, 10, 20, 50 cm at maximum power and gain.
pub fn default_distance_plan() -> SweepPlan {
    SweepPlan {
        sensor: profiles::dfm_desk().with_gain(29),
        channel: profiles::bench_channel(),
        axis: SweepAxis::Distance,
        values: vec![0.03, 0.10, 0.20, 0.50],
        range: None,
        frames: FrameCounts::default(),
        source: AttackSource::Sine { tone_hz: 1000.0 },
        scene: Some(SceneSpec::Dark),
        gain_indices: None,
        master_seed: 0x5eed,
    }
}

/// Default pattern-injection plan: rate-matched, noise-free, forced zero
/// offset for registration.
pub fn default_pattern_plan() -> PatternPlan {
    PatternPlan {
        sensor: profiles::dfm_desk().with_gain(29),
        channel: profiles::bench_channel(),
        n_frames: 3,
        offset_samples: Some(0.0),
        rate_factor: 1.0,
        noise_free: true,
        master_seed: 0x5eed,
    }
}

/// Default barcode campaign: warehouse-style lighting grid, two barcodes,
/// amplified attack chain, shot noise enabled.
pub fn default_barcode_plan() -> BarcodeCampaignPlan {
    let mut sensor = profiles::dfm_desk();
    sensor.shot_noise = true;
    BarcodeCampaignPlan {
        sensor,
        channel: profiles::barcode_channel(),
        exposures_us: vec![20_000.0, 26_500.0, 33_000.0],
        gain_indices: vec![0, 4, 9],
        frames_per_setting: 200,
        bg_radiance: 0.114,
        bar_radiance: 0.006,
        module_width_px: 2,
        quiet_modules: 7,
        bar_height_px: 65,
        payloads: vec![
            vec![5, 9, 0, 1, 2, 3, 4, 1, 2, 3, 4, 5],
            vec![4, 0, 0, 6, 3, 8, 1, 3, 3, 3, 9, 3],
        ],
        master_seed: 0x5eed,
    }
}

/// Default detector campaign on a dark scene.
pub fn default_detector_plan(scene: SceneSpec, attack_on: bool) -> DetectorPlan {
    DetectorPlan {
        sensor: profiles::dfm_desk().with_gain(20).with_exposure(20_000.0),
        channel: profiles::bench_channel(),
        scene,
        n_frames: 200,
        probe_probability: 0.2,
        probe_exposure_us: 10.0,
        threshold_adu: 1.5,
        attack_on,
        source: AttackSource::Sine { tone_hz: 1000.0 },
        master_seed: 0x5eed,
    }
}
