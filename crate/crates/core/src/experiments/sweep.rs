//! Generic swept-axis experiment execution.

use crate::attack::{self, AttackSignal};
use crate::coupling;
use crate::error::{Error, Result};
use crate::io::pnm;
use crate::metrics::{self, FrameSet};
use crate::rng;
use crate::sensor::{capture_sequence, AttackScenario, SensorConfig};

use super::plan::{AttackSource, SceneSpec, SweepAxis, SweepPlan};
use super::{run_indexed, thread_count};

/// One sweep point's protocol results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub swept_value: f64,
    pub gain_index: u8,
    pub ssim: f64,
    pub ms_ssim: f64,
    pub l2: f64,
    pub uqi: f64,
    pub delta_ssim: f64,
    pub received_dbm: f64,
}

pub fn frequency_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    expect_axis(plan, SweepAxis::Frequency)?;
    run_sweep(plan)
}

pub fn power_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    expect_axis(plan, SweepAxis::Power)?;
    run_sweep(plan)
}

pub fn distance_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    expect_axis(plan, SweepAxis::Distance)?;
    run_sweep(plan)
}

fn expect_axis(plan: &SweepPlan, axis: SweepAxis) -> Result<()> {
    if plan.axis != axis {
        return Err(Error::InvalidConfig(format!(
            "plan axis {:?} does not match requested {:?} sweep",
            plan.axis, axis
        )));
    }
    Ok(())
}

/// Execute every (gain, axis value) point of the plan. Rows are ordered by
/// gain then axis value; each point derives its own seed, so results do not
/// depend on the thread count.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    run_sweep_streaming(plan, |_| Ok(()))
}

/// Like [`run_sweep`], additionally invoking `on_row` for each finished row
/// in emission order. Single-threaded runs stream rows as points complete,
/// so an interrupted run leaves a recognizable partial output.
pub fn run_sweep_streaming(
    plan: &SweepPlan,
    mut on_row: impl FnMut(&SweepRow) -> Result<()>,
) -> Result<Vec<SweepRow>> {
    plan.validate()?;
    let axis_values = plan.axis_values();
    let gains: Vec<u8> = if plan.axis == SweepAxis::Gain {
        vec![plan.sensor.gain_index]
    } else {
        match &plan.gain_indices {
            Some(g) if !g.is_empty() => g.clone(),
            _ => vec![plan.sensor.gain_index],
        }
    };

    let source_envelope = preload_image_envelope(plan)?;

    let mut points = Vec::new();
    for &gain in &gains {
        for &value in &axis_values {
            points.push((gain, value));
        }
    }

    let threads = thread_count();
    if threads <= 1 {
        let mut rows = Vec::with_capacity(points.len());
        for &(gain, value) in &points {
            let row = sweep_point(plan, gain, value, source_envelope.as_deref())?;
            on_row(&row)?;
            rows.push(row);
        }
        return Ok(rows);
    }
    let rows = run_indexed(points.len(), threads, |i| {
        let (gain, value) = points[i];
        sweep_point(plan, gain, value, source_envelope.as_deref())
    })?;
    for row in &rows {
        on_row(row)?;
    }
    Ok(rows)
}

fn preload_image_envelope(plan: &SweepPlan) -> Result<Option<Vec<f64>>> {
    match &plan.source {
        AttackSource::Image { path } => {
            let image = pnm::read_source_image(path)?;
            Ok(Some(attack::extract_luminance(
                &image,
                plan.sensor.cols_total,
                plan.sensor.rows_total,
            )?))
        }
        _ => Ok(None),
    }
}

fn sweep_point(
    plan: &SweepPlan,
    gain: u8,
    value: f64,
    image_envelope: Option<&[f64]>,
) -> Result<SweepRow> {
    let mut sensor = plan.sensor.with_gain(gain);
    let mut channel = plan.channel;
    match plan.axis {
        SweepAxis::Frequency => channel.carrier_hz = value,
        SweepAxis::Power => channel.tx_power_dbm = value,
        SweepAxis::Distance => channel.distance_m = value,
        SweepAxis::Gain => sensor.gain_index = value as u8,
        SweepAxis::Exposure => sensor.exposure_time_us = value,
    }
    sensor.validate()?;
    channel.validate()?;

    let seed = rng::sweep_point_seed(plan.master_seed, value, gain as u64);
    let scene = plan.scene.unwrap_or(SceneSpec::Dark).build(&sensor)?;
    let signal = build_signal(&plan.source, &sensor, &channel, seed, image_envelope)?;
    let scenario = AttackScenario::new(signal, channel);

    let legit_seed = rng::derive_seed(seed, &[1]);
    let malicious_seed = rng::derive_seed(seed, &[2]);
    let legitimate = capture_sequence(&scene, &sensor, None, plan.frames.legitimate, legit_seed)?;
    let malicious = capture_sequence(
        &scene,
        &sensor,
        Some(&scenario),
        plan.frames.malicious,
        malicious_seed,
    )?;

    let frames = FrameSet::new(legitimate.rgb_frames, malicious.rgb_frames)?;
    let ssim = metrics::protocol_mean(metrics::ssim, &frames)?;
    let ms_ssim = metrics::protocol_mean(metrics::ms_ssim, &frames)?;
    let l2 = metrics::protocol_mean(metrics::l2_norm, &frames)?;
    let uqi = metrics::protocol_mean(metrics::uqi, &frames)?;
    let delta_ssim = if plan.frames.legitimate >= 2 {
        metrics::delta_ssim(&frames)?
    } else {
        f64::NAN
    };

    Ok(SweepRow {
        swept_value: value,
        gain_index: sensor.gain_index,
        ssim,
        ms_ssim,
        l2,
        uqi,
        delta_ssim,
        received_dbm: coupling::friis_received_power(&channel)?,
    })
}

/// Build the per-point attack signal: rate-matched to the readout clock,
/// one symbol per sample, one frame period long (looped by the capture).
pub(crate) fn build_signal(
    source: &AttackSource,
    sensor: &SensorConfig,
    channel: &crate::coupling::ChannelConfig,
    seed: u64,
    image_envelope: Option<&[f64]>,
) -> Result<AttackSignal> {
    let spf = sensor.samples_per_frame();
    let rate = sensor.readout_rate();
    let envelope = match source {
        AttackSource::Sine { tone_hz } => attack::sine_envelope(spf, rate, *tone_hz),
        AttackSource::GaussianNoise => attack::gaussian_noise_signal(
            spf,
            attack::GAUSSIAN_NOISE_MEAN,
            attack::GAUSSIAN_NOISE_SIGMA,
            seed,
        ),
        AttackSource::Image { .. } => image_envelope
            .ok_or_else(|| Error::InvalidInput("image envelope not preloaded".into()))?
            .to_vec(),
    };
    AttackSignal::new(envelope, rate, channel.carrier_hz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::plan::{default_distance_plan, FrameCounts, SweepRange};
    use crate::profiles;

    fn tiny_plan() -> SweepPlan {
        // Small sensor for fast unit checks.
        let mut sensor = profiles::dfm_desk().with_gain(29);
        sensor.cols_total = 88;
        sensor.rows_total = 68;
        sensor.cols_effective = 80;
        sensor.rows_effective = 60;
        SweepPlan {
            sensor,
            channel: profiles::bench_channel(),
            axis: SweepAxis::Frequency,
            values: vec![100e6, 190e6, 480e6],
            range: None,
            frames: FrameCounts {
                legitimate: 2,
                malicious: 2,
            },
            source: AttackSource::Sine { tone_hz: 1000.0 },
            scene: Some(SceneSpec::Dark),
            gain_indices: None,
            master_seed: 7,
        }
    }

    #[test]
    fn frequency_sweep_dips_at_resonance() {
        // MS-SSIM needs >= 176px; use plain SSIM-bearing rows from a tiny
        // sensor by checking ssim only. ms_ssim errors on tiny frames, so
        // run with the full-size default sensor at three frequencies instead.
        let mut plan = tiny_plan();
        plan.sensor = profiles::dfm_desk().with_gain(29);
        let rows = frequency_sweep(&plan).unwrap();
        assert_eq!(rows.len(), 3);
        let on_resonance = rows.iter().find(|r| r.swept_value == 190e6).unwrap();
        for row in &rows {
            if row.swept_value != 190e6 {
                assert!(on_resonance.ssim < row.ssim, "{rows:?}");
                assert!(on_resonance.delta_ssim > row.delta_ssim);
            }
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let mut plan = tiny_plan();
        plan.sensor = profiles::dfm_desk().with_gain(25);
        plan.values = vec![150e6, 190e6];
        let a = run_sweep(&plan).unwrap();
        let b = run_sweep(&plan).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn axis_mismatch_is_rejected() {
        let plan = default_distance_plan();
        assert!(frequency_sweep(&plan).is_err());
    }

    #[test]
    fn range_plan_runs() {
        let mut plan = tiny_plan();
        plan.sensor = profiles::dfm_desk().with_gain(29);
        plan.values = Vec::new();
        plan.range = Some(SweepRange {
            start: 180e6,
            stop: 200e6,
            step: 10e6,
        });
        let rows = run_sweep(&plan).unwrap();
        assert_eq!(rows.len(), 3);
    }
}
