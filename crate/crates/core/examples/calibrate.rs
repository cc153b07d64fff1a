//! Calibration probe: prints the protocol metrics the default plans produce
//! so threshold constants can be pinned against measured behavior.

use ccdsim::experiments::{
    barcode_campaign, default_barcode_plan, default_detector_plan, default_distance_plan,
    default_frequency_plan, default_power_plan, distance_sweep, exposure_drop_detector,
    frequency_sweep, power_sweep, SceneSpec, SweepRange,
};

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "all".into());

    if which == "freq" || which == "all" {
        let mut plan = default_frequency_plan();
        plan.range = Some(SweepRange {
            start: 80e6,
            stop: 500e6,
            step: 30e6,
        });
        let rows = frequency_sweep(&plan).unwrap();
        println!("== frequency sweep (gain 29) ==");
        for r in &rows {
            println!(
                "f {:>6.0} MHz  ssim {:.4}  ms {:.4}  l2 {:>8.4}  uqi {:.4}  dssim {:+.4}",
                r.swept_value / 1e6,
                r.ssim,
                r.ms_ssim,
                r.l2,
                r.uqi,
                r.delta_ssim
            );
        }
    }

    if which == "dist" || which == "all" {
        let plan = default_distance_plan();
        let rows = distance_sweep(&plan).unwrap();
        println!("== distance sweep (gain 29, max power) ==");
        for r in &rows {
            println!(
                "d {:>5.2} m  ssim {:.4}  dssim {:+.4}  P_r {:+.2} dBm",
                r.swept_value, r.ssim, r.delta_ssim, r.received_dbm
            );
        }
    }

    if which == "power" || which == "all" {
        let plan = default_power_plan();
        let rows = power_sweep(&plan).unwrap();
        println!("== power sweep ==");
        for r in &rows {
            println!(
                "gain {:>2}  P_t {:>5.1} dBm  ssim {:.4}  dssim {:+.4}",
                r.gain_index, r.swept_value, r.ssim, r.delta_ssim
            );
        }
    }

    if which == "barcode" || which == "all" {
        let mut plan = default_barcode_plan();
        plan.frames_per_setting = 100;
        let result = barcode_campaign(&plan).unwrap();
        println!("== barcode campaign ==");
        for s in &result.settings {
            println!(
                "exp {:>6.0} us  gain {:>2}  clean {:>5.1}%  attacked {:>5.1}%",
                s.exposure_us,
                s.gain_index,
                100.0 * s.clean_rate(),
                100.0 * s.attacked_rate()
            );
        }
    }

    if which == "defend" || which == "all" {
        println!("== detector ==");
        for (label, scene, attack) in [
            ("dark/off", SceneSpec::Dark, false),
            ("dark/on", SceneSpec::Dark, true),
            ("bright/off", SceneSpec::Uniform { level: 1.0 }, false),
        ] {
            let mut plan = default_detector_plan(scene, attack);
            plan.n_frames = 100;
            let report = exposure_drop_detector(&plan).unwrap();
            let means: Vec<f64> = report.records.iter().map(|r| r.mean_adu).collect();
            let mean = means.iter().sum::<f64>() / means.len().max(1) as f64;
            println!(
                "{label:>10}: probes {:>3}  flag rate {:.3}  mean adu {:.3}",
                report.n_probes,
                report.flag_rate(),
                mean
            );
        }
    }
}
