//! Automated barcode-scanning campaign: for each (exposure, gain) grid
//! point, capture clean and attacked frames of a two-barcode scene, decode
//! every frame, and report detection rates.

use crate::attack::{self, AttackSignal};
use crate::barcode::{decode, BarcodeSpec, DecodeParams, RenderStyle};
use crate::error::Result;
use crate::rng;
use crate::sensor::{capture_sequence, AttackScenario, Scene, SensorConfig};

use super::plan::BarcodeCampaignPlan;
use super::{run_indexed, thread_count};

/// Detection rates at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct BarcodeSettingResult {
    pub exposure_us: f64,
    pub gain_index: u8,
    pub n_frames: usize,
    /// Frames where at least one rendered barcode decoded.
    pub clean_detected: usize,
    pub attacked_detected: usize,
    /// Frames where every rendered barcode decoded.
    pub clean_full: usize,
    pub attacked_full: usize,
}

impl BarcodeSettingResult {
    pub fn clean_rate(&self) -> f64 {
        self.clean_detected as f64 / self.n_frames as f64
    }
    pub fn attacked_rate(&self) -> f64 {
        self.attacked_detected as f64 / self.n_frames as f64
    }
}

/// Per-frame decode log row.
#[derive(Debug, Clone, PartialEq)]
pub struct BarcodeFrameLog {
    pub exposure_us: f64,
    pub gain_index: u8,
    pub frame_index: usize,
    pub attack_on: bool,
    pub n_decoded: usize,
    pub digits: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct BarcodeCampaignResult {
    pub settings: Vec<BarcodeSettingResult>,
    pub frame_log: Vec<BarcodeFrameLog>,
}

/// Scene with the plan's barcodes rendered on a uniform background; exposed
/// for reuse by the CLI and tests.
pub fn build_barcode_scene(plan: &BarcodeCampaignPlan) -> Result<(Scene, Vec<String>)> {
    let sensor = &plan.sensor;
    let mut scene = Scene::uniform(
        sensor.cols_effective,
        sensor.rows_effective,
        plan.bg_radiance,
    )?;
    let style = RenderStyle {
        bar_radiance: plan.bar_radiance,
        bg_radiance: plan.bg_radiance,
    };
    let mut expected = Vec::new();
    let n = plan.payloads.len();
    for (i, payload) in plan.payloads.iter().enumerate() {
        let spec = BarcodeSpec::from_payload(
            payload,
            plan.module_width_px,
            plan.quiet_modules,
            plan.bar_height_px,
        )?;
        let x = (sensor.cols_effective.saturating_sub(spec.total_width_px())) / 2;
        // Stack the codes evenly down the frame.
        let slot = sensor.rows_effective / n;
        let y = i * slot + (slot.saturating_sub(plan.bar_height_px)) / 2;
        crate::barcode::render_barcode(&spec, &mut scene, x, y, &style)?;
        expected.push(spec.digits_string());
    }
    Ok((scene, expected))
}

pub fn barcode_campaign(plan: &BarcodeCampaignPlan) -> Result<BarcodeCampaignResult> {
    plan.validate()?;
    let (scene, expected) = build_barcode_scene(plan)?;
    let decode_params = DecodeParams::default();

    let mut grid = Vec::new();
    for &exposure in &plan.exposures_us {
        for &gain in &plan.gain_indices {
            grid.push((exposure, gain));
        }
    }

    let outcomes = run_indexed(grid.len(), thread_count(), |i| {
        let (exposure, gain) = grid[i];
        run_setting(plan, &scene, &expected, &decode_params, exposure, gain)
    })?;

    let mut settings = Vec::new();
    let mut frame_log = Vec::new();
    for (setting, log) in outcomes {
        settings.push(setting);
        frame_log.extend(log);
    }
    Ok(BarcodeCampaignResult {
        settings,
        frame_log,
    })
}

fn run_setting(
    plan: &BarcodeCampaignPlan,
    scene: &Scene,
    expected: &[String],
    decode_params: &DecodeParams,
    exposure_us: f64,
    gain_index: u8,
) -> Result<(BarcodeSettingResult, Vec<BarcodeFrameLog>)> {
    let sensor = plan.sensor.with_exposure(exposure_us).with_gain(gain_index);
    let mut result = BarcodeSettingResult {
        exposure_us,
        gain_index,
        n_frames: plan.frames_per_setting,
        clean_detected: 0,
        attacked_detected: 0,
        clean_full: 0,
        attacked_full: 0,
    };
    let mut log = Vec::new();

    for attack_on in [false, true] {
        for frame_idx in 0..plan.frames_per_setting {
            let seed = rng::derive_seed(
                plan.master_seed,
                &[
                    exposure_us.to_bits(),
                    gain_index as u64,
                    attack_on as u64,
                    frame_idx as u64,
                ],
            );
            let decoded = capture_and_decode(plan, &sensor, scene, decode_params, seed, attack_on)?;
            let hits = expected.iter().filter(|e| decoded.contains(e)).count();
            if attack_on {
                result.attacked_detected += usize::from(hits > 0);
                result.attacked_full += usize::from(hits == expected.len());
            } else {
                result.clean_detected += usize::from(hits > 0);
                result.clean_full += usize::from(hits == expected.len());
            }
            log.push(BarcodeFrameLog {
                exposure_us,
                gain_index,
                frame_index: frame_idx,
                attack_on,
                n_decoded: hits,
                digits: decoded,
            });
        }
    }
    Ok((result, log))
}

fn capture_and_decode(
    plan: &BarcodeCampaignPlan,
    sensor: &SensorConfig,
    scene: &Scene,
    decode_params: &DecodeParams,
    seed: u64,
    attack_on: bool,
) -> Result<Vec<String>> {
    let scenario = if attack_on {
        // Fresh noise stream per frame; the attacker transmits continuously.
        let envelope = attack::gaussian_noise_signal(
            sensor.samples_per_frame(),
            attack::GAUSSIAN_NOISE_MEAN,
            attack::GAUSSIAN_NOISE_SIGMA,
            rng::derive_seed(seed, &[rng::STREAM_ENVELOPE]),
        );
        let signal = AttackSignal::new(envelope, sensor.readout_rate(), plan.channel.carrier_hz)?;
        Some(AttackScenario::new(signal, plan.channel))
    } else {
        None
    };
    let capture = capture_sequence(scene, sensor, scenario.as_ref(), 1, seed)?;
    Ok(decode(&capture.rgb_frames[0], decode_params))
}
