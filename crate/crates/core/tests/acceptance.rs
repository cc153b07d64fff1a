//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Formula oracles run against independent high-precision
//! references; trend criteria run the shipped default plans end to end.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use ccdsim::attack::{self, AttackSignal, SourceImage};
use ccdsim::barcode;
use ccdsim::coupling::{self, ChannelConfig};
use ccdsim::experiments::{
    self, barcode_campaign, default_barcode_plan, default_detector_plan, default_distance_plan,
    default_frequency_plan, default_pattern_plan, default_power_plan, exposure_drop_detector,
    pattern_injection, SceneSpec, SweepRange,
};
use ccdsim::io::csvw;
use ccdsim::metrics::{self, FrameSet};
use ccdsim::profiles;
use ccdsim::rng;
use ccdsim::sensor::{capture_sequence, AttackScenario, OffsetPolicy, RgbFrame, Scene};

/// Small deterministic generator for randomized-input criteria, independent
/// of the crate's RNG stack.
struct Lcg(u64);

impl Lcg {
    fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }
    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
    fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

#[test]
fn criterion_01_formula_oracles() {
    let start = Instant::now();
    let mut lcg = Lcg(0x0dd5_eed1);

    // Luminance: exact integer-rational reference for (2126 R + 7152 G + 722 B) / (10^4 * 255),
    // alpha-scaled.
    for _ in 0..1000 {
        let (r, g, b, a) = (
            (lcg.next_u64() % 256) as u8,
            (lcg.next_u64() % 256) as u8,
            (lcg.next_u64() % 256) as u8,
            (lcg.next_u64() % 256) as u8,
        );
        let image = SourceImage::new(1, 1, vec![[r, g, b, a]]).unwrap();
        let got = attack::extract_luminance(&image, 1, 1).unwrap()[0];
        let numerator =
            (2126u64 * r as u64 + 7152 * g as u64 + 722 * b as u64) as f64 * a as f64;
        let expected = numerator / (10_000.0 * 255.0 * 255.0);
        assert!(
            rel_err(got, expected) <= 1e-9,
            "criterion 1 FAIL: luminance({r},{g},{b},{a}) = {got}, expected {expected}"
        );
    }

    // Sample rate: exact integer product reference.
    for _ in 0..1000 {
        let cols = 1 + (lcg.next_u64() % 5000) as usize;
        let rows = 1 + (lcg.next_u64() % 5000) as usize;
        let fps = (1 + (lcg.next_u64() % 240)) as f64;
        let got = attack::required_sample_rate(cols, rows, fps).unwrap();
        let expected = (cols as u128 * rows as u128) as f64 * fps;
        assert!(
            rel_err(got, expected) <= 1e-9,
            "criterion 1 FAIL: sample rate {cols}x{rows}x{fps}"
        );
    }

    // Friis: independent log-term formulation.
    for _ in 0..1000 {
        let channel = ChannelConfig {
            tx_power_dbm: lcg.next_range(-30.0, 50.0),
            tx_gain_dbi: lcg.next_range(0.0, 25.0),
            rx_gain_dbi: lcg.next_range(-5.0, 10.0),
            distance_m: lcg.next_range(0.01, 100.0),
            carrier_hz: lcg.next_range(50e6, 5e9),
        };
        let got = coupling::friis_received_power(&channel).unwrap();
        let c = 299_792_458.0f64;
        let expected = channel.tx_power_dbm
            + channel.tx_gain_dbi
            + channel.rx_gain_dbi
            + 20.0
                * (c.log10()
                    - channel.carrier_hz.log10()
                    - (4.0 * std::f64::consts::PI).log10()
                    - channel.distance_m.log10());
        assert!(
            (got - expected).abs() / expected.abs().max(1.0) <= 1e-9,
            "criterion 1 FAIL: friis {channel:?}: {got} vs {expected}"
        );
    }

    // EAN-13 checksum: brute-force weighting reference.
    for _ in 0..1000 {
        let mut payload = [0u8; 12];
        for d in &mut payload {
            *d = (lcg.next_u64() % 10) as u8;
        }
        let got = barcode::checksum(&payload).unwrap();
        let mut total = 0u32;
        for (i, &d) in payload.iter().enumerate() {
            total += d as u32 * if i % 2 == 1 { 3 } else { 1 };
        }
        let expected = ((10 - total % 10) % 10) as u8;
        assert_eq!(got, expected, "criterion 1 FAIL: checksum {payload:?}");
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "criterion 1 FAIL: oracles took {elapsed:?} (budget 5 s)"
    );
    println!("criterion 1 PASS: 4x1000 formula oracles within 1e-9 in {elapsed:?}");
}

fn random_frame(w: usize, h: usize, seed: u64) -> RgbFrame {
    let mut lcg = Lcg(seed);
    let data = (0..w * h)
        .map(|_| {
            [
                (lcg.next_u64() % 256) as u16,
                (lcg.next_u64() % 256) as u16,
                (lcg.next_u64() % 256) as u16,
            ]
        })
        .collect();
    RgbFrame {
        width: w,
        height: h,
        max_value: 255,
        data,
    }
}

#[test]
fn criterion_02_metric_correctness() {
    let a = random_frame(320, 240, 1);
    let b = random_frame(320, 240, 2);

    // Perfect scores on identical frames.
    assert!((metrics::ssim(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    assert!((metrics::ms_ssim(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    assert!((metrics::uqi(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(metrics::l2_norm(&a, &a).unwrap(), 0.0);

    // Symmetry.
    assert!((metrics::ssim(&a, &b).unwrap() - metrics::ssim(&b, &a).unwrap()).abs() < 1e-12);
    assert!((metrics::ms_ssim(&a, &b).unwrap() - metrics::ms_ssim(&b, &a).unwrap()).abs() < 1e-12);
    assert!((metrics::uqi(&a, &b).unwrap() - metrics::uqi(&b, &a).unwrap()).abs() < 1e-12);

    // Closed forms on constant pairs.
    let dark = RgbFrame::new_filled(320, 240, 255, [0, 0, 0]);
    let bright = RgbFrame::new_filled(320, 240, 255, [255, 255, 255]);
    let c1 = (0.01f64 * 255.0).powi(2);
    let ssim_expected = c1 / (255.0f64 * 255.0 + c1);
    assert!(
        (metrics::ssim(&dark, &bright).unwrap() - ssim_expected).abs() < 1e-6,
        "criterion 2 FAIL: constant-pair SSIM"
    );
    let gray_a = RgbFrame::new_filled(320, 240, 255, [60, 60, 60]);
    let gray_b = RgbFrame::new_filled(320, 240, 255, [140, 140, 140]);
    let (mu_a, mu_b) = (60.0f64, 140.0f64);
    let luminance = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
    let ms_expected = luminance.powf(metrics::MS_SSIM_WEIGHTS[4]);
    assert!(
        (metrics::ms_ssim(&gray_a, &gray_b).unwrap() - ms_expected).abs() < 1e-6,
        "criterion 2 FAIL: constant-pair MS-SSIM"
    );
    let uqi_expected = 2.0 * mu_a * mu_b / (mu_a * mu_a + mu_b * mu_b);
    assert!(
        (metrics::uqi(&gray_a, &gray_b).unwrap() - uqi_expected).abs() < 1e-6,
        "criterion 2 FAIL: constant-pair UQI"
    );

    // The 3x7 protocol performs exactly 21 comparisons.
    let frames = FrameSet::new(
        (0..3).map(|i| random_frame(64, 64, 10 + i)).collect(),
        (0..7).map(|i| random_frame(64, 64, 20 + i)).collect(),
    )
    .unwrap();
    let mut calls = 0usize;
    metrics::protocol_mean(
        |x, y| {
            calls += 1;
            metrics::ssim(x, y)
        },
        &frames,
    )
    .unwrap();
    assert_eq!(calls, 21, "criterion 2 FAIL: protocol ran {calls} comparisons");

    println!("criterion 2 PASS: perfect scores, symmetry, closed forms, 21-pair protocol");
}

#[test]
fn criterion_03_injection_monotonicity() {
    let start = Instant::now();
    let mut config = profiles::dfm_desk().with_gain(20);
    config.dark_current_rate = 0.01;

    // Scene with a saturated stripe so the cap is exercised every frame.
    let mut scene = Scene::dark(config.cols_effective, config.rows_effective);
    scene
        .fill_rect(0, 0, 80, config.rows_effective, [1.0, 1.0, 1.0])
        .unwrap();
    let mut config_sat = config.clone();
    config_sat.exposure_time_us = config.reference_exposure_us; // stripe saturates

    let spf = config_sat.samples_per_frame();
    let mut saturated_checked = 0usize;
    for seed in 0..100u64 {
        let envelope = attack::gaussian_noise_signal(spf, 0.5, 0.25, seed);
        let signal =
            AttackSignal::new(envelope, config_sat.readout_rate(), 190e6).unwrap();
        let scenario = AttackScenario::new(signal, profiles::bench_channel());
        let clean = capture_sequence(&scene, &config_sat, None, 1, seed).unwrap();
        let attacked = capture_sequence(&scene, &config_sat, Some(&scenario), 1, seed).unwrap();
        for (k, (&a, &c)) in attacked.raw_frames[0]
            .data
            .iter()
            .zip(&clean.raw_frames[0].data)
            .enumerate()
        {
            assert!(
                a >= c,
                "criterion 3 FAIL: seed {seed} sample {k}: attacked {a} < clean {c}"
            );
            if c == 255 {
                assert_eq!(a, 255, "criterion 3 FAIL: saturated pixel changed");
                saturated_checked += 1;
            }
        }
    }
    assert!(saturated_checked > 100_000, "criterion 3 FAIL: cap not exercised");
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 3 FAIL: took {elapsed:?} (budget 2 min)"
    );
    println!(
        "criterion 3 PASS: 100 seeded captures element-wise monotone, {saturated_checked} saturated pixels capped, {elapsed:?}"
    );
}

#[test]
fn criterion_04_frequency_sweep_shape() {
    // Default DFM-like profile over the full default grid.
    let mut plan = default_frequency_plan();
    plan.range = Some(SweepRange {
        start: 50e6,
        stop: 500e6,
        step: 10e6,
    });
    let rows = experiments::frequency_sweep(&plan).unwrap();

    let resonance = plan.sensor.susceptibility.resonant_hz;
    let step = 10e6;
    let min_row = rows
        .iter()
        .min_by(|a, b| a.ssim.total_cmp(&b.ssim))
        .unwrap();
    assert!(
        (min_row.swept_value - resonance).abs() <= step + 1.0,
        "criterion 4 FAIL: SSIM minimum at {} MHz, resonance {} MHz",
        min_row.swept_value / 1e6,
        resonance / 1e6
    );
    let on_resonance = rows
        .iter()
        .find(|r| (r.swept_value - resonance).abs() < 1.0)
        .unwrap();
    assert!(
        on_resonance.ssim < 0.4,
        "criterion 4 FAIL: on-resonance SSIM {} >= 0.4",
        on_resonance.ssim
    );
    // MS-SSIM picks the same most-effective carrier (within one step).
    let ms_min = rows
        .iter()
        .min_by(|a, b| a.ms_ssim.total_cmp(&b.ms_ssim))
        .unwrap();
    assert!(
        (ms_min.swept_value - min_row.swept_value).abs() <= step + 1.0,
        "criterion 4 FAIL: MS-SSIM selects {} MHz, SSIM selects {} MHz",
        ms_min.swept_value / 1e6,
        min_row.swept_value / 1e6
    );
    // Far off-resonance the delta-SSIM baseline is indistinguishable from
    // zero. The baseline lives on the high-frequency recovery side: below
    // the resonance the growing free-space wavelength term keeps received
    // power (and thus coupling) elevated, as in the reference camera's
    // broad low-band response.
    let mut baseline_points = 0;
    for row in &rows {
        if row.swept_value - resonance > 130e6 {
            baseline_points += 1;
            assert!(
                row.delta_ssim.abs() < 0.02,
                "criterion 4 FAIL: baseline delta-SSIM {} at {} MHz",
                row.delta_ssim,
                row.swept_value / 1e6
            );
        }
    }
    assert!(baseline_points >= 10);

    // Wide vs narrow susceptibility: count affected points on a shared grid.
    let count_affected = |plan: &experiments::SweepPlan| -> usize {
        experiments::frequency_sweep(plan)
            .unwrap()
            .iter()
            .filter(|r| r.delta_ssim > 0.1)
            .count()
    };
    let shared_range = SweepRange {
        start: 100e6,
        stop: 280e6,
        step: 10e6,
    };
    let mut wide = plan.clone();
    wide.range = Some(shared_range);
    let mut narrow = wide.clone();
    narrow.sensor.susceptibility.bandwidth_hz = 12e6;
    let wide_affected = count_affected(&wide);
    let narrow_affected = count_affected(&narrow);
    assert!(
        narrow_affected >= 1 && wide_affected >= 3 * narrow_affected,
        "criterion 4 FAIL: wide {wide_affected} vs narrow {narrow_affected} affected points"
    );

    println!(
        "criterion 4 PASS: minimum SSIM {:.3} at {} MHz, baseline |dSSIM| < 0.02 over {} points, wide/narrow affected {}/{}",
        min_row.ssim,
        min_row.swept_value / 1e6,
        baseline_points,
        wide_affected,
        narrow_affected
    );
}

fn spearman_rho(xs: &[f64], ys: &[f64]) -> f64 {
    fn ranks(values: &[f64]) -> Vec<f64> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut out = vec![0.0; values.len()];
        let mut i = 0;
        while i < order.len() {
            let mut j = i;
            while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
                j += 1;
            }
            let rank = (i + j) as f64 / 2.0;
            for &idx in &order[i..=j] {
                out[idx] = rank;
            }
            i = j + 1;
        }
        out
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = xs.len() as f64;
    let mean = (n - 1.0) / 2.0;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        cov += (a - mean) * (b - mean);
        var_x += (a - mean) * (a - mean);
        var_y += (b - mean) * (b - mean);
    }
    cov / (var_x * var_y).sqrt()
}

#[test]
fn criterion_05_power_and_distance_trends() {
    // Power: delta-SSIM monotone in transmit power for every gain setting.
    let plan = default_power_plan();
    let rows = experiments::power_sweep(&plan).unwrap();
    for &gain in plan.gain_indices.as_ref().unwrap() {
        let series: Vec<&experiments::SweepRow> =
            rows.iter().filter(|r| r.gain_index == gain).collect();
        let xs: Vec<f64> = series.iter().map(|r| r.swept_value).collect();
        let ys: Vec<f64> = series.iter().map(|r| r.delta_ssim).collect();
        let rho = spearman_rho(&xs, &ys);
        assert!(
            rho > 0.95,
            "criterion 5 FAIL: gain {gain} Spearman rho {rho}"
        );
    }

    // Distance: strictly decreasing, with the desk-calibration far-field target.
    let dist_rows = experiments::distance_sweep(&default_distance_plan()).unwrap();
    for pair in dist_rows.windows(2) {
        assert!(
            pair[1].delta_ssim < pair[0].delta_ssim,
            "criterion 5 FAIL: delta-SSIM not strictly decreasing in distance: {:?}",
            dist_rows
        );
    }
    let far = dist_rows.last().unwrap();
    assert!(
        far.swept_value == 0.5 && far.delta_ssim < 0.05,
        "criterion 5 FAIL: at 50 cm delta-SSIM {}",
        far.delta_ssim
    );

    // Gain 29 vs 25 inversion under the high-noise-floor scenario: amplified
    // sensing noise saturates pixels at gain 29, capping the injection.
    let mut noisy = default_power_plan();
    noisy.sensor.dark_current_rate = 45.0;
    noisy.gain_indices = Some(vec![25, 29]);
    noisy.values = vec![20.1];
    let noisy_rows = experiments::power_sweep(&noisy).unwrap();
    let at_gain = |g: u8| noisy_rows.iter().find(|r| r.gain_index == g).unwrap();
    assert!(
        at_gain(29).delta_ssim < at_gain(25).delta_ssim,
        "criterion 5 FAIL: saturation inversion absent: gain29 {} vs gain25 {}",
        at_gain(29).delta_ssim,
        at_gain(25).delta_ssim
    );

    println!(
        "criterion 5 PASS: power Spearman > 0.95 per gain, distance strictly decreasing (50 cm dSSIM {:.3}), gain-29/25 inversion {:.3} < {:.3}",
        far.delta_ssim,
        at_gain(29).delta_ssim,
        at_gain(25).delta_ssim
    );
}

#[test]
fn criterion_06_drift_law() {
    // Blocky random pattern over the full grid: features span several
    // samples, so the correlation peak survives the fractional resampling a
    // rate mismatch causes, yet stays sharp to within a sample or two.
    let sensor = profiles::dfm_desk();
    let mut lcg = Lcg(0xd21f7);
    let (w, h) = (sensor.cols_total, sensor.rows_total);
    let blocks_w = w.div_ceil(4);
    let cells: Vec<u8> = (0..blocks_w * h.div_ceil(4))
        .map(|_| (lcg.next_u64() % 256) as u8)
        .collect();
    let pixels = (0..w * h)
        .map(|i| {
            let (row, col) = (i / w, i % w);
            let v = cells[(row / 4) * blocks_w + col / 4];
            [v, v, v, 255]
        })
        .collect();
    let image = SourceImage::new(w, h, pixels).unwrap();

    for epsilon in [0.0, 0.001, -0.001, 0.01, -0.01] {
        let mut plan = default_pattern_plan();
        plan.rate_factor = 1.0 + epsilon;
        plan.offset_samples = None;
        plan.n_frames = 3;
        plan.master_seed = 0xd21f7;
        let outcome = pattern_injection(&image, &plan).unwrap();
        let predicted = outcome.report.predicted_drift;
        for (i, &measured) in outcome.report.per_frame_drift.iter().enumerate() {
            assert!(
                (measured as f64 - predicted).abs() <= 2.0,
                "criterion 6 FAIL: eps {epsilon}: frame pair {i} measured {measured}, predicted {predicted:.2}"
            );
        }
        if epsilon == 0.0 {
            assert!(
                outcome.report.per_frame_drift.iter().all(|&d| d == 0),
                "criterion 6 FAIL: drift with matched rates"
            );
        }
    }
    println!("criterion 6 PASS: drift within 2 samples of clock arithmetic for eps in {{0, +/-0.1%, +/-1%}}");
}

#[test]
fn criterion_07_fine_grained_injection() {
    // Blocky glyph, rate-matched, zero offset, noise-free.
    let glyph = {
        let (w, h) = (160usize, 120usize);
        let mut pixels = vec![[0u8, 0, 0, 255]; w * h];
        for row in 0..h {
            for col in 0..w {
                let band = (row / 8 + col / 8) % 2 == 0;
                let diag = (row as i64 - col as i64).unsigned_abs() as usize % 16 < 4;
                if band ^ diag {
                    pixels[row * w + col] = [255, 255, 255, 255];
                }
            }
        }
        SourceImage::new(w, h, pixels).unwrap()
    };

    let plan = default_pattern_plan();
    let outcome = pattern_injection(&glyph, &plan).unwrap();
    assert!(
        outcome.report.ncc_zero_lag >= 0.8,
        "criterion 7 FAIL: CCD correlation {} < 0.8",
        outcome.report.ncc_zero_lag
    );

    let mut cmos_plan = plan.clone();
    cmos_plan.sensor = profiles::cmos_desk().with_gain(29);
    let cmos = pattern_injection(&glyph, &cmos_plan).unwrap();
    assert!(
        cmos.report.peak_ncc < 0.1,
        "criterion 7 FAIL: CMOS peak correlation {} >= 0.1",
        cmos.report.peak_ncc
    );

    println!(
        "criterion 7 PASS: CCD zero-lag NCC {:.3} >= 0.8, CMOS peak {:.3} < 0.1",
        outcome.report.ncc_zero_lag, cmos.report.peak_ncc
    );
}

#[test]
fn criterion_08_barcode_campaign() {
    let plan = default_barcode_plan();
    let result = barcode_campaign(&plan).unwrap();

    for s in &result.settings {
        assert!(
            s.clean_rate() >= 0.99,
            "criterion 8 FAIL: clean detection {:.3} at exposure {} gain {}",
            s.clean_rate(),
            s.exposure_us,
            s.gain_index
        );
    }
    let favorable = result
        .settings
        .iter()
        .min_by(|a, b| a.attacked_rate().total_cmp(&b.attacked_rate()))
        .unwrap();
    assert!(
        favorable.attacked_rate() <= 0.10,
        "criterion 8 FAIL: best attacked detection {:.3}",
        favorable.attacked_rate()
    );

    // Detection is monotone non-increasing in injected amplitude.
    let mut sweep_plan = default_barcode_plan();
    sweep_plan.frames_per_setting = 60;
    sweep_plan.exposures_us = vec![20_000.0];
    sweep_plan.gain_indices = vec![9];
    let mut rates = Vec::new();
    for tx_power in [29.1, 41.1, 47.1, 53.1] {
        sweep_plan.channel.tx_power_dbm = tx_power;
        let r = barcode_campaign(&sweep_plan).unwrap();
        rates.push((tx_power, r.settings[0].attacked_rate()));
    }
    for pair in rates.windows(2) {
        assert!(
            pair[1].1 <= pair[0].1,
            "criterion 8 FAIL: detection not monotone in amplitude: {rates:?}"
        );
    }

    println!(
        "criterion 8 PASS: clean >= 99% everywhere, attacked {:.1}% at (exposure {}, gain {}), amplitude curve {:?}",
        100.0 * favorable.attacked_rate(),
        favorable.exposure_us,
        favorable.gain_index,
        rates
    );
}

#[test]
fn criterion_09_exposure_drop_detector() {
    let mut on = default_detector_plan(SceneSpec::Dark, true);
    on.n_frames = 300;
    let mut off = on.clone();
    off.attack_on = false;
    let mut bright = off.clone();
    bright.scene = SceneSpec::Uniform { level: 1.0 };

    let report_on = exposure_drop_detector(&on).unwrap();
    let report_off = exposure_drop_detector(&off).unwrap();
    let report_bright = exposure_drop_detector(&bright).unwrap();

    assert!(report_on.n_probes >= 40, "criterion 9 FAIL: too few probes");
    assert!(
        report_on.flag_rate() >= 0.95,
        "criterion 9 FAIL: true-positive rate {:.3}",
        report_on.flag_rate()
    );
    assert!(
        report_off.flag_rate() <= 0.01,
        "criterion 9 FAIL: false-positive rate {:.3}",
        report_off.flag_rate()
    );
    assert!(
        report_bright.flag_rate() > 0.5,
        "criterion 9 FAIL: bright-scene failure mode absent ({:.3})",
        report_bright.flag_rate()
    );

    println!(
        "criterion 9 PASS: TP {:.3}, FP {:.3}, bright-scene FP {:.3} over {} probes",
        report_on.flag_rate(),
        report_off.flag_rate(),
        report_bright.flag_rate(),
        report_on.n_probes
    );
}

#[test]
fn criterion_10_reproducibility() {
    let dir = tempfile::tempdir().unwrap();

    // Identical plan + seed: byte-identical CSV.
    let mut plan = default_frequency_plan();
    plan.range = None;
    plan.values = vec![150e6, 190e6, 230e6];
    let rows_a = experiments::frequency_sweep(&plan).unwrap();
    let rows_b = experiments::frequency_sweep(&plan).unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    csvw::write_sweep_csv(&csv_a, &rows_a).unwrap();
    csvw::write_sweep_csv(&csv_b, &rows_b).unwrap();
    assert_eq!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(&csv_b).unwrap(),
        "criterion 10 FAIL: sweep CSVs differ"
    );

    // Identical capture: byte-identical frame files.
    let sensor = profiles::dfm_desk().with_gain(25);
    let scene = Scene::dark(sensor.cols_effective, sensor.rows_effective);
    let signal = AttackSignal::new(
        attack::sine_envelope(sensor.samples_per_frame(), sensor.readout_rate(), 1000.0),
        sensor.readout_rate(),
        190e6,
    )
    .unwrap();
    let scenario =
        AttackScenario::new(signal, profiles::bench_channel()).with_offset(OffsetPolicy::Random);
    let frame_bytes = |tag: &str, seed: u64| {
        let capture = capture_sequence(&scene, &sensor, Some(&scenario), 2, seed).unwrap();
        let path = dir.path().join(format!("{tag}.ppm"));
        ccdsim::io::pnm::write_ppm(&capture.rgb_frames[1], &path).unwrap();
        std::fs::read(&path).unwrap()
    };
    assert_eq!(
        frame_bytes("x", 424242),
        frame_bytes("y", 424242),
        "criterion 10 FAIL: frames differ across identical runs"
    );

    // Different seed produces different bytes (the comparison is not vacuous).
    assert_ne!(frame_bytes("x2", 424242), frame_bytes("y2", 424243));

    // End-to-end through the CLI binary.
    let exe = env!("CARGO_BIN_EXE_ccdsim");
    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(exe)
            .args([
                "--seed",
                "7",
                "--out",
                out.to_str().unwrap(),
                "--quiet",
                "capture",
                "--frames",
                "2",
                "--attack",
                "sine:1000",
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    let out_a = dir.path().join("run_a");
    let out_b = dir.path().join("run_b");
    run(&out_a);
    run(&out_b);
    for name in ["frame_000.ppm", "frame_001.ppm", "raw_000.pgm", "manifest.json"] {
        assert_eq!(
            std::fs::read(out_a.join(name)).unwrap(),
            std::fs::read(out_b.join(name)).unwrap(),
            "criterion 10 FAIL: CLI output {name} differs"
        );
    }

    println!("criterion 10 PASS: byte-identical CSVs, frames, and CLI outputs for identical plan + seed");
}
