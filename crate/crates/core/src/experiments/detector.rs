//! Exposure-probing detection countermeasure: at random frames the exposure
//! drops to its minimum; legitimate charge collapses with it while induced
//! charge does not, so a bright probe frame flags injection.

use rand::Rng;

use crate::error::Result;
use crate::rng;
use crate::sensor::{capture_sequence, AttackScenario};

use super::plan::DetectorPlan;
use super::sweep::build_signal;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRecord {
    pub frame_index: usize,
    pub mean_adu: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorReport {
    pub n_frames: usize,
    pub n_probes: usize,
    pub n_flagged: usize,
    pub threshold_adu: f64,
    pub attack_on: bool,
    pub records: Vec<ProbeRecord>,
}

impl DetectorReport {
    /// Fraction of probe frames that flagged. With the attack on this is the
    /// true-positive rate; with it off, the false-positive rate.
    pub fn flag_rate(&self) -> f64 {
        if self.n_probes == 0 {
            0.0
        } else {
            self.n_flagged as f64 / self.n_probes as f64
        }
    }
}

pub fn exposure_drop_detector(plan: &DetectorPlan) -> Result<DetectorReport> {
    plan.validate()?;
    let scene = plan.scene.build(&plan.sensor)?;
    let probe_sensor = plan.sensor.with_exposure(plan.probe_exposure_us);
    let (bc, br) = plan.sensor.border_origin();

    let mut schedule_rng = rng::stream(plan.master_seed, &[rng::STREAM_SCHEDULE]);
    let mut records = Vec::new();
    let mut n_probes = 0usize;
    let mut n_flagged = 0usize;

    for frame_idx in 0..plan.n_frames {
        let probe = schedule_rng.random::<f64>() < plan.probe_probability;
        if !probe {
            continue;
        }
        n_probes += 1;
        let seed = rng::derive_seed(plan.master_seed, &[rng::STREAM_FRAME, frame_idx as u64]);
        let scenario = if plan.attack_on {
            let signal = build_signal(
                &plan.source,
                &probe_sensor,
                &plan.channel,
                seed,
                None,
            )?;
            Some(AttackScenario::new(signal, plan.channel))
        } else {
            None
        };
        let capture = capture_sequence(&scene, &probe_sensor, scenario.as_ref(), 1, seed)?;
        let mean_adu = capture.raw_frames[0].mean_over(
            bc,
            br,
            plan.sensor.cols_effective,
            plan.sensor.rows_effective,
        );
        let flagged = mean_adu > plan.threshold_adu;
        n_flagged += usize::from(flagged);
        records.push(ProbeRecord {
            frame_index: frame_idx,
            mean_adu,
            flagged,
        });
    }

    Ok(DetectorReport {
        n_frames: plan.n_frames,
        n_probes,
        n_flagged,
        threshold_adu: plan.threshold_adu,
        attack_on: plan.attack_on,
        records,
    })
}
