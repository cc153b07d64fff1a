//! RF channel and coupling model: Friis free-space propagation plus a
//! Lorentzian susceptibility profile that converts received field strength
//! into charge induced on the sensor's readout path.

use serde::{Deserialize, Serialize};

use crate::attack::AttackSignal;
use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Transmitter-to-sensor channel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    /// Transmission power P_t in dBm.
    pub tx_power_dbm: f64,
    /// Transmitting antenna gain G_t in dBi.
    pub tx_gain_dbi: f64,
    /// Receiving-side gain G_r in dBi.
    pub rx_gain_dbi: f64,
    /// Distance between antenna and sensor, meters.
    pub distance_m: f64,
    /// Carrier frequency f_c in Hz.
    pub carrier_hz: f64,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.distance_m > 0.0) {
            return Err(Error::InvalidConfig("distance_m must be > 0".into()));
        }
        if !(self.carrier_hz > 0.0) {
            return Err(Error::InvalidConfig("carrier_hz must be > 0".into()));
        }
        Ok(())
    }

    pub fn with_carrier(&self, carrier_hz: f64) -> ChannelConfig {
        ChannelConfig {
            carrier_hz,
            ..*self
        }
    }

    pub fn with_tx_power(&self, tx_power_dbm: f64) -> ChannelConfig {
        ChannelConfig {
            tx_power_dbm,
            ..*self
        }
    }

    pub fn with_distance(&self, distance_m: f64) -> ChannelConfig {
        ChannelConfig {
            distance_m,
            ..*self
        }
    }
}

/// Frequency-dependent coupling efficiency of the sensor: a Lorentzian
/// resonance described by its center, full width at half maximum, and the
/// coupling (charge units per volt-equivalent of received field) at the
/// peak and far off-band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SusceptibilityProfile {
    pub resonant_hz: f64,
    pub bandwidth_hz: f64,
    pub peak_coupling: f64,
    #[serde(default)]
    pub floor_coupling: f64,
}

impl SusceptibilityProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::InvalidConfig("bandwidth_hz must be > 0".into()));
        }
        if !(self.peak_coupling >= self.floor_coupling && self.floor_coupling >= 0.0) {
            return Err(Error::InvalidConfig(
                "coupling must satisfy peak >= floor >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Received power at the sensor in dBm (Friis transmission equation):
/// `P_r = P_t + G_t + G_r + 20 log10(lambda / (4 pi d))`.
pub fn friis_received_power(channel: &ChannelConfig) -> Result<f64> {
    channel.validate()?;
    let lambda = SPEED_OF_LIGHT / channel.carrier_hz;
    Ok(channel.tx_power_dbm
        + channel.tx_gain_dbi
        + channel.rx_gain_dbi
        + 20.0 * (lambda / (4.0 * std::f64::consts::PI * channel.distance_m)).log10())
}

/// Coupling efficiency at `carrier_hz`: Lorentzian with maximum exactly at
/// the resonance and half of (peak - floor) at one half-bandwidth away.
pub fn coupling_factor(carrier_hz: f64, profile: &SusceptibilityProfile) -> f64 {
    let detune = 2.0 * (carrier_hz - profile.resonant_hz) / profile.bandwidth_hz;
    profile.floor_coupling + (profile.peak_coupling - profile.floor_coupling) / (1.0 + detune * detune)
}

/// Linear field amplitude equivalent of a received power in dBm
/// (0 dBm maps to 1.0; +20 dB scales the amplitude by 10).
pub fn volts_equivalent(received_dbm: f64) -> f64 {
    10f64.powf(received_dbm / 20.0)
}

/// Peak induced charge per unit envelope for an attack carried over
/// `channel` into a sensor with `profile`.
pub fn induced_amplitude(channel: &ChannelConfig, profile: &SusceptibilityProfile) -> Result<f64> {
    let received = friis_received_power(channel)?;
    Ok(coupling_factor(channel.carrier_hz, profile) * volts_equivalent(received))
}

/// Malicious charge sequence C_m as seen on the sensor's readout clock.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedWaveform {
    /// One charge value per readout sample; all non-negative.
    pub samples: Vec<f64>,
    /// Sample rate; must equal the target sensor's readout rate.
    pub sample_rate: f64,
    /// Offset of the attack start relative to sample 0, in readout samples.
    pub offset_samples: f64,
    /// Symbol rate of the source attack signal.
    pub source_rate: f64,
}

/// Project an attack signal through the channel onto the sensor's readout
/// clock. Sample `k` carries
/// `coupling * volts_equivalent(P_r) * envelope((k - offset) * S_att / S_ro)`
/// with the envelope linearly interpolated, and zero outside the attack's
/// duration.
pub fn induce(
    attack: &AttackSignal,
    channel: &ChannelConfig,
    profile: &SusceptibilityProfile,
    readout_rate: f64,
    offset_samples: f64,
    duration_samples: usize,
) -> Result<InducedWaveform> {
    if duration_samples == 0 {
        return Err(Error::InvalidInput("duration must be positive".into()));
    }
    if !(readout_rate > 0.0) {
        return Err(Error::InvalidInput("readout rate must be > 0".into()));
    }
    profile.validate()?;
    let amplitude = induced_amplitude(channel, profile)?;
    let ratio = attack.symbol_rate / readout_rate;
    let envelope = attack.envelope();
    let samples = (0..duration_samples)
        .map(|k| {
            let position = (k as f64 - offset_samples) * ratio;
            amplitude * envelope_at(envelope, position, false)
        })
        .collect();
    Ok(InducedWaveform {
        samples,
        sample_rate: readout_rate,
        offset_samples,
        source_rate: attack.symbol_rate,
    })
}

/// Window of a (possibly repeating) induced waveform covering readout
/// samples `[global_start, global_start + len)`. Used by the capture loop,
/// which runs the attack on a clock that is continuous across frames.
pub(crate) fn induce_window(
    attack: &AttackSignal,
    amplitude: f64,
    readout_rate: f64,
    offset_samples: f64,
    global_start: u64,
    len: usize,
    repeat: bool,
) -> InducedWaveform {
    let ratio = attack.symbol_rate / readout_rate;
    let envelope = attack.envelope();
    let samples = (0..len)
        .map(|j| {
            let k = global_start as f64 + j as f64;
            let position = (k - offset_samples) * ratio;
            amplitude * envelope_at(envelope, position, repeat)
        })
        .collect();
    InducedWaveform {
        samples,
        sample_rate: readout_rate,
        offset_samples,
        source_rate: attack.symbol_rate,
    }
}

/// Linear interpolation of the envelope at a fractional symbol position.
/// Non-repeating signals are zero outside [0, n-1]; repeating signals wrap
/// circularly.
fn envelope_at(envelope: &[f64], position: f64, repeat: bool) -> f64 {
    let n = envelope.len();
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return if repeat || position == 0.0 { envelope[0] } else { 0.0 };
    }
    if repeat {
        let wrapped = position.rem_euclid(n as f64);
        let idx = wrapped.floor() as usize;
        let frac = wrapped - idx as f64;
        let a = envelope[idx % n];
        let b = envelope[(idx + 1) % n];
        a + (b - a) * frac
    } else {
        if position < 0.0 || position > (n - 1) as f64 {
            return 0.0;
        }
        let idx = position.floor() as usize;
        let frac = position - idx as f64;
        if idx + 1 >= n {
            envelope[n - 1]
        } else {
            envelope[idx] + (envelope[idx + 1] - envelope[idx]) * frac
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> SusceptibilityProfile {
        SusceptibilityProfile {
            resonant_hz: 190e6,
            bandwidth_hz: 80e6,
            peak_coupling: 0.4,
            floor_coupling: 0.0,
        }
    }

    #[test]
    fn friis_reference_point() {
        // High-precision evaluation of the transmission equation.
        let channel = ChannelConfig {
            tx_power_dbm: 20.1,
            tx_gain_dbi: 3.0,
            rx_gain_dbi: 0.0,
            distance_m: 0.5,
            carrier_hz: 190e6,
        };
        let p = friis_received_power(&channel).unwrap();
        assert!((p - 11.10).abs() < 0.01, "got {p}");
    }

    #[test]
    fn friis_unit_distance_cancels_path_term() {
        // d = lambda / (4 pi) makes the log term exactly zero.
        let carrier = 300e6;
        let lambda = SPEED_OF_LIGHT / carrier;
        let channel = ChannelConfig {
            tx_power_dbm: 7.5,
            tx_gain_dbi: 2.0,
            rx_gain_dbi: 1.0,
            distance_m: lambda / (4.0 * std::f64::consts::PI),
            carrier_hz: carrier,
        };
        let p = friis_received_power(&channel).unwrap();
        assert!((p - (7.5 + 2.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn friis_doubling_distance_costs_six_db() {
        let near = ChannelConfig {
            tx_power_dbm: 20.1,
            tx_gain_dbi: 3.0,
            rx_gain_dbi: 0.0,
            distance_m: 0.1,
            carrier_hz: 190e6,
        };
        let far = near.with_distance(0.2);
        let drop = friis_received_power(&near).unwrap() - friis_received_power(&far).unwrap();
        assert!((drop - 20.0 * 2f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn friis_rejects_nonpositive_distance() {
        let channel = ChannelConfig {
            tx_power_dbm: 0.0,
            tx_gain_dbi: 0.0,
            rx_gain_dbi: 0.0,
            distance_m: 0.0,
            carrier_hz: 190e6,
        };
        assert!(friis_received_power(&channel).is_err());
    }

    #[test]
    fn lorentzian_center_and_half_width() {
        let p = profile();
        assert_eq!(coupling_factor(p.resonant_hz, &p), p.peak_coupling);
        let half = coupling_factor(p.resonant_hz + p.bandwidth_hz / 2.0, &p);
        assert!((half - (p.floor_coupling + (p.peak_coupling - p.floor_coupling) / 2.0)).abs() < 1e-12);
        let half_low = coupling_factor(p.resonant_hz - p.bandwidth_hz / 2.0, &p);
        assert!((half - half_low).abs() < 1e-12);
    }

    #[test]
    fn lorentzian_far_off_band_approaches_floor() {
        let mut p = profile();
        p.floor_coupling = 0.05;
        let far = coupling_factor(p.resonant_hz + 100.0 * p.bandwidth_hz, &p);
        // Evaluate the closed form at 100 bandwidths of detuning.
        let expected = p.floor_coupling + (p.peak_coupling - p.floor_coupling) / (1.0 + 200.0 * 200.0);
        assert!((far - expected).abs() < 1e-15);
        assert!((far - p.floor_coupling) / p.floor_coupling < 1e-4 * (p.peak_coupling / p.floor_coupling));
    }

    #[test]
    fn induce_zero_envelope_gives_zero_charge() {
        let attack = AttackSignal::new(vec![0.0; 64], 1e6, 190e6).unwrap();
        let channel = ChannelConfig {
            tx_power_dbm: 20.0,
            tx_gain_dbi: 3.0,
            rx_gain_dbi: 0.0,
            distance_m: 0.03,
            carrier_hz: 190e6,
        };
        let wave = induce(&attack, &channel, &profile(), 1e6, 0.0, 64).unwrap();
        assert!(wave.samples.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn induce_constant_envelope_on_resonance() {
        let attack = AttackSignal::new(vec![1.0; 32], 1e6, 190e6).unwrap();
        let channel = ChannelConfig {
            tx_power_dbm: 10.0,
            tx_gain_dbi: 0.0,
            rx_gain_dbi: 0.0,
            distance_m: 0.1,
            carrier_hz: 190e6,
        };
        let expected = coupling_factor(190e6, &profile())
            * volts_equivalent(friis_received_power(&channel).unwrap());
        let wave = induce(&attack, &channel, &profile(), 1e6, 0.0, 32).unwrap();
        for &s in &wave.samples {
            assert!((s - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn twenty_db_scales_amplitude_by_ten() {
        let attack = AttackSignal::new(vec![0.7; 16], 1e6, 190e6).unwrap();
        let channel = ChannelConfig {
            tx_power_dbm: 0.0,
            tx_gain_dbi: 0.0,
            rx_gain_dbi: 0.0,
            distance_m: 0.05,
            carrier_hz: 190e6,
        };
        let boosted = channel.with_tx_power(20.0);
        let base = induce(&attack, &channel, &profile(), 1e6, 0.0, 16).unwrap();
        let loud = induce(&attack, &boosted, &profile(), 1e6, 0.0, 16).unwrap();
        for (a, b) in base.samples.iter().zip(&loud.samples) {
            assert!((b / a - 10.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rate_matched_integer_offset_is_pure_shift() {
        let env: Vec<f64> = (0..40).map(|i| (i as f64 / 39.0)).collect();
        let attack = AttackSignal::new(env.clone(), 2e6, 190e6).unwrap();
        let channel = ChannelConfig {
            tx_power_dbm: 0.0,
            tx_gain_dbi: 0.0,
            rx_gain_dbi: 0.0,
            distance_m: SPEED_OF_LIGHT / 190e6 / (4.0 * std::f64::consts::PI),
            carrier_hz: 190e6,
        };
        // Unit amplitude channel: P_r = 0 dBm -> volts 1.0, on-resonance.
        let wave = induce(&attack, &channel, &profile(), 2e6, 5.0, 50).unwrap();
        for k in 0..50usize {
            let expected = if k >= 5 && k - 5 < 40 {
                0.4 * env[k - 5]
            } else {
                0.0
            };
            assert!((wave.samples[k] - expected).abs() < 1e-12, "sample {k}");
        }
    }

    #[test]
    fn induce_rejects_zero_duration() {
        let attack = AttackSignal::new(vec![0.5; 4], 1e6, 190e6).unwrap();
        let channel = ChannelConfig {
            tx_power_dbm: 0.0,
            tx_gain_dbi: 0.0,
            rx_gain_dbi: 0.0,
            distance_m: 1.0,
            carrier_hz: 190e6,
        };
        assert!(induce(&attack, &channel, &profile(), 1e6, 0.0, 0).is_err());
    }
}
