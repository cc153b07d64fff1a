//! End-to-end experiment reproductions on the simulator: carrier-frequency,
//! transmission-power, and distance sweeps; fine-grained pattern injection
//! with registration; the barcode disruption campaign; and the
//! exposure-probing detection countermeasure.

mod barcode_campaign;
mod detector;
mod pattern;
mod plan;
mod sweep;

pub use barcode_campaign::{
    barcode_campaign, build_barcode_scene, BarcodeCampaignResult, BarcodeFrameLog,
    BarcodeSettingResult,
};
pub use detector::{exposure_drop_detector, DetectorReport, ProbeRecord};
pub use pattern::{pattern_injection, PatternOutcome, PatternReport};
pub use plan::{
    default_barcode_plan, default_detector_plan, default_distance_plan, default_frequency_plan,
    default_pattern_plan, default_power_plan, AttackSource, BarcodeCampaignPlan, DetectorPlan,
    FrameCounts, PatternPlan, SceneSpec, SweepAxis, SweepPlan, SweepRange,
};
pub use sweep::{distance_sweep, frequency_sweep, power_sweep, run_sweep, run_sweep_streaming, SweepRow};

use crate::error::Result;

/// Worker-thread count: `CCDSIM_THREADS` when set, otherwise 1 (sequential,
/// which also streams results in order).
pub fn thread_count() -> usize {
    std::env::var("CCDSIM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

/// Run `f` over `0..n`, preserving index order in the output regardless of
/// scheduling. Each point must derive its own seed, so results are identical
/// for any thread count.
pub(crate) fn run_indexed<T, F>(n: usize, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    if threads <= 1 || n <= 1 {
        return (0..n).map(f).collect();
    }
    let threads = threads.min(n);
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Result<T>>>> =
        (0..n).map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let result = f(i);
                *slots[i].lock().unwrap() = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("every slot filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_indexed_preserves_order() {
        let sequential = run_indexed(20, 1, |i| Ok(i * i)).unwrap();
        let parallel = run_indexed(20, 4, |i| Ok(i * i)).unwrap();
        assert_eq!(sequential, parallel);
        assert_eq!(sequential[7], 49);
    }
}
