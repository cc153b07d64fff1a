//! Image sensor model: geometry, timing, gain, noise, CFA layout, and the
//! exposure → serialized readout → demosaic pipeline.

mod capture;
mod demosaic;
mod frame;
mod scene;

pub use capture::{
    capture_sequence, expose, readout, AttackScenario, CaptureSequence, OffsetPolicy,
};
pub use demosaic::demosaic;
pub use frame::{ChargeFrame, RawFrame, RgbFrame};
pub use scene::Scene;

use serde::{Deserialize, Serialize};

use crate::coupling::SusceptibilityProfile;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensorArchitecture {
    /// Interline-transfer CCD: one shared measurement unit, serialized
    /// digitization of every photodiode.
    CcdInterline,
    /// CMOS: per-pixel measurement units. Induced charge is scaled by
    /// `cmos_coupling_factor` (default 0, i.e. immune).
    Cmos,
}

/// Color channel of a photodiode site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Red,
    Green,
    Blue,
}

/// Bayer color-filter-array origin. The pattern names the 2x2 tile at (0,0),
/// row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CfaPattern {
    Rggb,
    Bggr,
    Grbg,
    Gbrg,
}

impl CfaPattern {
    /// Channel of the photodiode at (row, col) on the total grid.
    pub fn channel_at(self, row: usize, col: usize) -> Channel {
        let tile = match self {
            CfaPattern::Rggb => [
                [Channel::Red, Channel::Green],
                [Channel::Green, Channel::Blue],
            ],
            CfaPattern::Bggr => [
                [Channel::Blue, Channel::Green],
                [Channel::Green, Channel::Red],
            ],
            CfaPattern::Grbg => [
                [Channel::Green, Channel::Red],
                [Channel::Blue, Channel::Green],
            ],
            CfaPattern::Gbrg => [
                [Channel::Green, Channel::Blue],
                [Channel::Red, Channel::Green],
            ],
        };
        tile[row % 2][col % 2]
    }
}

fn default_gain_db_per_step() -> f64 {
    1.0
}
fn default_adc_bits() -> u8 {
    8
}
fn default_reference_exposure() -> f64 {
    10_000.0
}
fn default_cfa() -> CfaPattern {
    CfaPattern::Rggb
}
fn default_architecture() -> SensorArchitecture {
    SensorArchitecture::CcdInterline
}

/// Full description of a simulated camera: geometry, timing, measurement
/// unit, noise sources, and EMI susceptibility.
///
/// `readout_rate` may be omitted, in which case it is derived as
/// `cols_total * rows_total * frame_rate` (one digitized sample per
/// photodiode per frame).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorConfig {
    #[serde(default = "default_architecture")]
    pub architecture: SensorArchitecture,
    pub cols_total: usize,
    pub rows_total: usize,
    pub cols_effective: usize,
    pub rows_effective: usize,
    /// Column of the first effective pixel. Defaults to a centered window.
    #[serde(default)]
    pub border_cols: Option<usize>,
    /// Row of the first effective pixel. Defaults to a centered window.
    #[serde(default)]
    pub border_rows: Option<usize>,
    /// Frames per second.
    pub frame_rate: f64,
    /// Digitized samples per second. Derived when absent.
    #[serde(default)]
    pub readout_rate: Option<f64>,
    /// Exposure (integration) time in microseconds.
    pub exposure_time_us: f64,
    /// Unitless camera gain setting, 0..=29.
    pub gain_index: u8,
    /// Decibels of analog gain per gain index step.
    #[serde(default = "default_gain_db_per_step")]
    pub gain_db_per_step: f64,
    /// ADC resolution in bits; output range 0..2^bits - 1.
    #[serde(default = "default_adc_bits")]
    pub adc_bits: u8,
    /// Charge units that map to ADC full scale at gain 0.
    pub full_well: f64,
    /// Mean dark-current charge units per microsecond per photodiode.
    pub dark_current_rate: f64,
    /// Std. dev. of Gaussian readout noise, in charge units.
    pub read_noise_sigma: f64,
    #[serde(default = "default_cfa")]
    pub cfa: CfaPattern,
    pub susceptibility: SusceptibilityProfile,
    /// Fraction of induced charge reaching a CMOS measurement unit.
    #[serde(default)]
    pub cmos_coupling_factor: f64,
    /// Exposure (us) at which scene radiance 1.0 exactly fills the well.
    #[serde(default = "default_reference_exposure")]
    pub reference_exposure_us: f64,
    /// Apply Poisson statistics to the scene charge term.
    #[serde(default)]
    pub shot_noise: bool,
}

impl SensorConfig {
    /// Check every structural invariant. Loaders call this before use.
    pub fn validate(&self) -> Result<()> {
        if self.cols_total == 0 || self.rows_total == 0 {
            return Err(Error::InvalidConfig("total resolution must be nonzero".into()));
        }
        if self.cols_effective > self.cols_total || self.rows_effective > self.rows_total {
            return Err(Error::InvalidConfig(
                "effective resolution exceeds total resolution".into(),
            ));
        }
        if self.cols_effective == 0 || self.rows_effective == 0 {
            return Err(Error::InvalidConfig("effective resolution must be nonzero".into()));
        }
        let (bc, br) = self.border_origin();
        if bc + self.cols_effective > self.cols_total || br + self.rows_effective > self.rows_total
        {
            return Err(Error::InvalidConfig(
                "effective window does not fit inside the total grid".into(),
            ));
        }
        if self.gain_index > 29 {
            return Err(Error::InvalidConfig(format!(
                "gain_index {} out of range 0..=29",
                self.gain_index
            )));
        }
        if !(self.exposure_time_us > 0.0) {
            return Err(Error::InvalidConfig("exposure_time_us must be > 0".into()));
        }
        if !(1..=16).contains(&self.adc_bits) {
            return Err(Error::InvalidConfig(format!(
                "adc_bits {} out of range 1..=16",
                self.adc_bits
            )));
        }
        if !(self.frame_rate > 0.0) {
            return Err(Error::InvalidConfig("frame_rate must be > 0".into()));
        }
        if !(self.full_well > 0.0) {
            return Err(Error::InvalidConfig("full_well must be > 0".into()));
        }
        if self.dark_current_rate < 0.0 || self.read_noise_sigma < 0.0 {
            return Err(Error::InvalidConfig("noise parameters must be >= 0".into()));
        }
        if !(self.reference_exposure_us > 0.0) {
            return Err(Error::InvalidConfig("reference_exposure_us must be > 0".into()));
        }
        if let Some(rate) = self.readout_rate {
            if !(rate > 0.0) {
                return Err(Error::InvalidConfig("readout_rate must be > 0".into()));
            }
        }
        self.susceptibility.validate()?;
        Ok(())
    }

    /// (first effective col, first effective row); centered when unset.
    pub fn border_origin(&self) -> (usize, usize) {
        let bc = self
            .border_cols
            .unwrap_or((self.cols_total - self.cols_effective) / 2);
        let br = self
            .border_rows
            .unwrap_or((self.rows_total - self.rows_effective) / 2);
        (bc, br)
    }

    /// Samples per second through the measurement unit. Stored value if
    /// present, otherwise `cols_total * rows_total * frame_rate`.
    pub fn readout_rate(&self) -> f64 {
        self.readout_rate
            .unwrap_or(self.cols_total as f64 * self.rows_total as f64 * self.frame_rate)
    }

    /// Digitized samples per frame (all photodiodes, shielded border included).
    pub fn samples_per_frame(&self) -> usize {
        self.cols_total * self.rows_total
    }

    /// Linear amplifier gain for the configured gain index.
    pub fn linear_gain(&self) -> f64 {
        10f64.powf(self.gain_index as f64 * self.gain_db_per_step / 20.0)
    }

    /// Largest ADC output value.
    pub fn adc_max(&self) -> u16 {
        ((1u32 << self.adc_bits) - 1) as u16
    }

    /// ADC counts per charge unit, gain included; scaled so that gain 0 maps
    /// `full_well` to full scale.
    pub fn adu_per_charge(&self) -> f64 {
        self.linear_gain() * self.adc_max() as f64 / self.full_well
    }

    /// True if (row, col) on the total grid is inside the effective window.
    pub fn is_effective(&self, row: usize, col: usize) -> bool {
        let (bc, br) = self.border_origin();
        row >= br && row < br + self.rows_effective && col >= bc && col < bc + self.cols_effective
    }

    /// Copy with noise sources disabled; used by registration experiments.
    pub fn without_noise(&self) -> SensorConfig {
        SensorConfig {
            dark_current_rate: 0.0,
            read_noise_sigma: 0.0,
            shot_noise: false,
            ..self.clone()
        }
    }

    /// Copy with a different gain index.
    pub fn with_gain(&self, gain_index: u8) -> SensorConfig {
        SensorConfig {
            gain_index,
            ..self.clone()
        }
    }

    /// Copy with a different exposure time.
    pub fn with_exposure(&self, exposure_time_us: f64) -> SensorConfig {
        SensorConfig {
            exposure_time_us,
            ..self.clone()
        }
    }
}
