//! Command-line front end for the CCD signal-injection simulator.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ccdsim::attack::{self, AttackSignal};
use ccdsim::coupling::ChannelConfig;
use ccdsim::error::{Error, Result};
use ccdsim::experiments::{
    self, barcode_campaign, default_barcode_plan, default_detector_plan, default_distance_plan,
    default_frequency_plan, default_power_plan, exposure_drop_detector, pattern_injection,
    AttackSource, BarcodeCampaignPlan, DetectorPlan, PatternPlan, SceneSpec,
};
use ccdsim::io::{self, csvw, iq, manifest, pnm};
use ccdsim::profiles;
use ccdsim::sensor::{capture_sequence, AttackScenario, Scene, SensorConfig};

#[derive(Parser)]
#[command(
    name = "ccdsim",
    version,
    about = "Deterministic simulator for electromagnetic signal injection against CCD image sensors"
)]
struct Cli {
    /// Sensor config: JSON path or builtin:{dfm-desk, cctv-analog, cmos-desk}.
    #[arg(long, global = true, default_value = "builtin:dfm-desk")]
    config: String,
    /// Master seed; overrides the plan's seed when given.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (file path for export-iq).
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capture frames to PPM/PGM plus a reproduction manifest.
    Capture {
        /// Number of frames.
        #[arg(long, default_value_t = 3)]
        frames: usize,
        /// Scene: dark | uniform:<level>.
        #[arg(long, default_value = "dark")]
        scene: String,
        /// Attack signal: sine:<hz> | noise | image:<path>. Omit for none.
        #[arg(long)]
        attack: Option<String>,
        /// Channel config: JSON path or builtin:{bench, barcode}.
        #[arg(long, default_value = "builtin:bench")]
        channel: String,
    },
    /// Carrier-frequency sweep; emits sweep_frequency.csv.
    SweepFrequency {
        /// Plan JSON; defaults to the desk-scale plan.
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Transmission-power sweep; emits sweep_power.csv.
    SweepPower {
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Distance sweep; emits sweep_distance.csv.
    SweepDistance {
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Fine-grained pattern injection with a registration report.
    Inject {
        /// Source image (PPM P6 or PAM P7).
        #[arg(long)]
        image: PathBuf,
        #[arg(long, default_value = "builtin:bench")]
        channel: String,
        /// Attack clock offset in samples; omit for a random draw.
        #[arg(long)]
        offset: Option<f64>,
        /// Attack symbol rate as a multiple of the readout rate.
        #[arg(long, default_value_t = 1.0)]
        rate_factor: f64,
        /// Disable sensor noise.
        #[arg(long)]
        noise_free: bool,
        #[arg(long, default_value_t = 3)]
        frames: usize,
    },
    /// Barcode-scanning campaign over an exposure/gain grid.
    Barcode {
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Exposure-probing injection detector campaign.
    Defend {
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Scene override: dark | uniform:<level>.
        #[arg(long)]
        scene: Option<String>,
        /// Transmit the attack during the campaign.
        #[arg(long)]
        attack: bool,
    },
    /// Run the attacker's signal pipeline and write an IQ file + sidecar.
    ExportIq {
        #[arg(long)]
        image: PathBuf,
        /// Radio sample rate.
        #[arg(long, default_value_t = 25e6)]
        iq_rate: f64,
        /// Carrier recorded in the sidecar (defaults to the sensor resonance).
        #[arg(long)]
        carrier: Option<f64>,
        /// Also dump the pre-resampling envelope as CSV.
        #[arg(long)]
        envelope_csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let sensor = load_sensor(&cli.config)?;
    sensor.validate()?;
    match &cli.command {
        Command::Capture {
            frames,
            scene,
            attack,
            channel,
        } => cmd_capture(&cli, &sensor, *frames, scene, attack.as_deref(), channel),
        Command::SweepFrequency { plan } => {
            let mut plan = load_plan(plan.as_deref(), default_frequency_plan)?;
            if let Some(seed) = cli.seed {
                plan.master_seed = seed;
            }
            run_streaming_sweep(&cli, &plan, "sweep_frequency.csv")
        }
        Command::SweepPower { plan } => {
            let mut plan = load_plan(plan.as_deref(), default_power_plan)?;
            if let Some(seed) = cli.seed {
                plan.master_seed = seed;
            }
            run_streaming_sweep(&cli, &plan, "sweep_power.csv")
        }
        Command::SweepDistance { plan } => {
            let mut plan = load_plan(plan.as_deref(), default_distance_plan)?;
            if let Some(seed) = cli.seed {
                plan.master_seed = seed;
            }
            run_streaming_sweep(&cli, &plan, "sweep_distance.csv")
        }
        Command::Inject {
            image,
            channel,
            offset,
            rate_factor,
            noise_free,
            frames,
        } => cmd_inject(&cli, &sensor, image, channel, *offset, *rate_factor, *noise_free, *frames),
        Command::Barcode { plan } => cmd_barcode(&cli, plan.as_deref()),
        Command::Defend { plan, scene, attack } => cmd_defend(&cli, plan.as_deref(), scene.as_deref(), *attack),
        Command::ExportIq {
            image,
            iq_rate,
            carrier,
            envelope_csv,
        } => cmd_export_iq(&cli, &sensor, image, *iq_rate, *carrier, envelope_csv.as_deref()),
    }
}

fn load_sensor(spec: &str) -> Result<SensorConfig> {
    match spec {
        "builtin:dfm-desk" => Ok(profiles::dfm_desk()),
        "builtin:cctv-analog" => Ok(profiles::cctv_analog()),
        "builtin:cmos-desk" => Ok(profiles::cmos_desk()),
        other if other.starts_with("builtin:") => Err(Error::InvalidInput(format!(
            "unknown builtin sensor {other:?}"
        ))),
        path => io::load_json(Path::new(path)),
    }
}

fn load_channel(spec: &str) -> Result<ChannelConfig> {
    match spec {
        "builtin:bench" => Ok(profiles::bench_channel()),
        "builtin:barcode" => Ok(profiles::barcode_channel()),
        other if other.starts_with("builtin:") => Err(Error::InvalidInput(format!(
            "unknown builtin channel {other:?}"
        ))),
        path => io::load_json(Path::new(path)),
    }
}

fn load_plan<T: serde::de::DeserializeOwned>(
    path: Option<&Path>,
    default: impl Fn() -> T,
) -> Result<T> {
    match path {
        Some(p) => io::load_json(p),
        None => Ok(default()),
    }
}

fn parse_scene(spec: &str) -> Result<SceneSpec> {
    if spec == "dark" {
        return Ok(SceneSpec::Dark);
    }
    if let Some(level) = spec.strip_prefix("uniform:") {
        let level: f64 = level
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad scene level {level:?}")))?;
        return Ok(SceneSpec::Uniform { level });
    }
    Err(Error::InvalidInput(format!(
        "unknown scene {spec:?} (expected dark or uniform:<level>)"
    )))
}

fn parse_attack_source(spec: &str) -> Result<AttackSource> {
    if spec == "noise" {
        return Ok(AttackSource::GaussianNoise);
    }
    if let Some(hz) = spec.strip_prefix("sine:") {
        let tone_hz: f64 = hz
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad sine frequency {hz:?}")))?;
        return Ok(AttackSource::Sine { tone_hz });
    }
    if let Some(path) = spec.strip_prefix("image:") {
        return Ok(AttackSource::Image {
            path: PathBuf::from(path),
        });
    }
    Err(Error::InvalidInput(format!(
        "unknown attack {spec:?} (expected sine:<hz>, noise, or image:<path>)"
    )))
}

fn ensure_out_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn note(cli: &Cli, message: impl AsRef<str>) {
    if !cli.quiet {
        println!("{}", message.as_ref());
    }
}

fn cmd_capture(
    cli: &Cli,
    sensor: &SensorConfig,
    n_frames: usize,
    scene_spec: &str,
    attack_spec: Option<&str>,
    channel_spec: &str,
) -> Result<()> {
    let seed = cli.seed.unwrap_or(1);
    let scene_kind = parse_scene(scene_spec)?;
    let scene = match scene_kind {
        SceneSpec::Dark => Scene::dark(sensor.cols_effective, sensor.rows_effective),
        SceneSpec::Uniform { level } => {
            Scene::uniform(sensor.cols_effective, sensor.rows_effective, level)?
        }
    };

    let scenario = match attack_spec {
        None => None,
        Some(spec) => {
            let channel = load_channel(channel_spec)?;
            let source = parse_attack_source(spec)?;
            let envelope = match &source {
                AttackSource::Image { path } => {
                    let image = pnm::read_source_image(path)?;
                    attack::extract_luminance(&image, sensor.cols_total, sensor.rows_total)?
                }
                AttackSource::Sine { tone_hz } => attack::sine_envelope(
                    sensor.samples_per_frame(),
                    sensor.readout_rate(),
                    *tone_hz,
                ),
                AttackSource::GaussianNoise => attack::gaussian_noise_signal(
                    sensor.samples_per_frame(),
                    attack::GAUSSIAN_NOISE_MEAN,
                    attack::GAUSSIAN_NOISE_SIGMA,
                    seed,
                ),
            };
            let signal = AttackSignal::new(envelope, sensor.readout_rate(), channel.carrier_hz)?;
            Some((AttackScenario::new(signal, channel), format!("{spec}"), channel))
        }
    };

    let capture = capture_sequence(
        &scene,
        sensor,
        scenario.as_ref().map(|(s, _, _)| s),
        n_frames,
        seed,
    )?;

    ensure_out_dir(&cli.out)?;
    let mut frames = Vec::new();
    let mut raws = Vec::new();
    for (i, frame) in capture.rgb_frames.iter().enumerate() {
        let name = format!("frame_{i:03}.ppm");
        pnm::write_ppm(frame, &cli.out.join(&name))?;
        frames.push(name);
    }
    for (i, raw) in capture.raw_frames.iter().enumerate() {
        let name = format!("raw_{i:03}.pgm");
        pnm::write_pgm(raw, &cli.out.join(&name))?;
        raws.push(name);
    }
    let manifest = manifest::CaptureManifest {
        seed,
        n_frames,
        sensor: sensor.clone(),
        attack: scenario.map(|(s, name, channel)| manifest::AttackManifest {
            source: name,
            symbol_rate: s.signal.symbol_rate,
            carrier_hz: s.signal.carrier_hz,
            channel,
            offset_samples: capture.offset_samples.unwrap_or(0.0),
        }),
        frames,
        raws,
    };
    io::save_json(&cli.out.join("manifest.json"), &manifest)?;
    note(cli, format!("wrote {n_frames} frames to {}", cli.out.display()));
    Ok(())
}

/// Validate the plan, then stream rows to the CSV as sweep points complete;
/// the end-of-run footer is only written after the final row.
fn run_streaming_sweep(cli: &Cli, plan: &experiments::SweepPlan, file: &str) -> Result<()> {
    plan.validate()?;
    if let Some(axis) = match file {
        "sweep_frequency.csv" => Some(experiments::SweepAxis::Frequency),
        "sweep_power.csv" => Some(experiments::SweepAxis::Power),
        "sweep_distance.csv" => Some(experiments::SweepAxis::Distance),
        _ => None,
    } {
        if plan.axis != axis {
            return Err(Error::InvalidInput(format!(
                "plan axis {:?} does not match the requested sweep",
                plan.axis
            )));
        }
    }
    ensure_out_dir(&cli.out)?;
    let path = cli.out.join(file);
    let mut csv = csvw::CsvWriter::create(&path, &csvw::SWEEP_HEADER)?;
    let rows = experiments::run_sweep_streaming(plan, |row| csv.row(&csvw::sweep_row_fields(row)))?;
    csv.finish()?;
    note(cli, format!("wrote {} rows to {}", rows.len(), path.display()));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_inject(
    cli: &Cli,
    sensor: &SensorConfig,
    image: &Path,
    channel_spec: &str,
    offset: Option<f64>,
    rate_factor: f64,
    noise_free: bool,
    n_frames: usize,
) -> Result<()> {
    let channel = load_channel(channel_spec)?;
    let source = pnm::read_source_image(image)?;
    let plan = PatternPlan {
        sensor: sensor.clone(),
        channel,
        n_frames,
        offset_samples: offset,
        rate_factor,
        noise_free,
        master_seed: cli.seed.unwrap_or(1),
    };
    let outcome = pattern_injection(&source, &plan)?;

    ensure_out_dir(&cli.out)?;
    for (i, frame) in outcome.attacked.rgb_frames.iter().enumerate() {
        pnm::write_ppm(frame, &cli.out.join(format!("attacked_{i:03}.ppm")))?;
    }
    for (i, frame) in outcome.clean.rgb_frames.iter().enumerate() {
        pnm::write_ppm(frame, &cli.out.join(format!("clean_{i:03}.ppm")))?;
    }
    #[derive(serde::Serialize)]
    struct Report {
        ncc_zero_lag: f64,
        peak_lag: i64,
        peak_ncc: f64,
        est_col: i64,
        est_row: i64,
        per_frame_drift: Vec<i64>,
        predicted_drift: f64,
        offset_samples: Option<f64>,
    }
    let report = Report {
        ncc_zero_lag: outcome.report.ncc_zero_lag,
        peak_lag: outcome.report.peak_lag,
        peak_ncc: outcome.report.peak_ncc,
        est_col: outcome.report.est_col,
        est_row: outcome.report.est_row,
        per_frame_drift: outcome.report.per_frame_drift.clone(),
        predicted_drift: outcome.report.predicted_drift,
        offset_samples: outcome.attacked.offset_samples,
    };
    io::save_json(&cli.out.join("registration.json"), &report)?;
    note(
        cli,
        format!(
            "peak ncc {:.3} at lag {} (col {}, row {})",
            report.peak_ncc, report.peak_lag, report.est_col, report.est_row
        ),
    );
    Ok(())
}

fn cmd_barcode(cli: &Cli, plan_path: Option<&Path>) -> Result<()> {
    let mut plan: BarcodeCampaignPlan = load_plan(plan_path, default_barcode_plan)?;
    if let Some(seed) = cli.seed {
        plan.master_seed = seed;
    }
    let result = barcode_campaign(&plan)?;
    ensure_out_dir(&cli.out)?;
    csvw::write_barcode_summary_csv(&cli.out.join("barcode_summary.csv"), &result.settings)?;
    csvw::write_barcode_frames_csv(&cli.out.join("barcode_frames.csv"), &result.frame_log)?;
    for s in &result.settings {
        note(
            cli,
            format!(
                "exposure {:>7.0} us  gain {:>2}  clean {:>5.1}%  attacked {:>5.1}%",
                s.exposure_us,
                s.gain_index,
                100.0 * s.clean_rate(),
                100.0 * s.attacked_rate()
            ),
        );
    }
    Ok(())
}

fn cmd_defend(
    cli: &Cli,
    plan_path: Option<&Path>,
    scene: Option<&str>,
    attack: bool,
) -> Result<()> {
    let mut plan: DetectorPlan = match plan_path {
        Some(p) => io::load_json(p)?,
        None => default_detector_plan(SceneSpec::Dark, attack),
    };
    plan.attack_on = attack;
    if let Some(scene_spec) = scene {
        plan.scene = parse_scene(scene_spec)?;
    }
    if let Some(seed) = cli.seed {
        plan.master_seed = seed;
    }
    let report = exposure_drop_detector(&plan)?;
    ensure_out_dir(&cli.out)?;
    csvw::write_detector_csv(&cli.out.join("defend.csv"), &report)?;
    #[derive(serde::Serialize)]
    struct Summary {
        attack_on: bool,
        n_frames: usize,
        n_probes: usize,
        n_flagged: usize,
        threshold_adu: f64,
        /// True-positive rate when the attack is on, false-positive otherwise.
        flag_rate: f64,
        true_positive_rate: Option<f64>,
        false_positive_rate: Option<f64>,
    }
    let summary = Summary {
        attack_on: report.attack_on,
        n_frames: report.n_frames,
        n_probes: report.n_probes,
        n_flagged: report.n_flagged,
        threshold_adu: report.threshold_adu,
        flag_rate: report.flag_rate(),
        true_positive_rate: report.attack_on.then(|| report.flag_rate()),
        false_positive_rate: (!report.attack_on).then(|| report.flag_rate()),
    };
    io::save_json(&cli.out.join("defend_report.json"), &summary)?;
    note(
        cli,
        format!(
            "{} probes, flag rate {:.3} (attack {})",
            report.n_probes,
            report.flag_rate(),
            if attack { "on" } else { "off" }
        ),
    );
    Ok(())
}

fn cmd_export_iq(
    cli: &Cli,
    sensor: &SensorConfig,
    image: &Path,
    iq_rate: f64,
    carrier: Option<f64>,
    envelope_csv: Option<&Path>,
) -> Result<()> {
    let source = pnm::read_source_image(image)?;
    let envelope = attack::extract_luminance(&source, sensor.cols_total, sensor.rows_total)?;
    let symbol_rate = sensor.readout_rate();
    let carrier_hz = carrier.unwrap_or(sensor.susceptibility.resonant_hz);

    let resampled = attack::resample(&envelope, symbol_rate, iq_rate)?;
    let samples = attack::modulate(&resampled, iq_rate, iq_rate, 0.0)?;

    if let Some(parent) = cli.out.parent() {
        if !parent.as_os_str().is_empty() {
            ensure_out_dir(parent)?;
        }
    }
    iq::write_iq(&samples, &cli.out)?;
    let sidecar = iq::IqSidecar {
        sample_rate: iq_rate,
        carrier_hz,
        symbol_rate,
        length: samples.len(),
    };
    io::save_json(&cli.out.with_extension("json"), &sidecar)?;

    if let Some(csv_path) = envelope_csv {
        let file = std::fs::File::create(csv_path).map_err(|e| Error::io(csv_path, e))?;
        let mut w = std::io::BufWriter::new(file);
        use std::io::Write;
        (|| -> std::io::Result<()> {
            writeln!(w, "symbol,amplitude")?;
            for (i, v) in envelope.iter().enumerate() {
                writeln!(w, "{i},{v}")?;
            }
            w.flush()
        })()
        .map_err(|e| Error::io(csv_path, e))?;
    }
    note(
        cli,
        format!("wrote {} IQ pairs to {}", samples.len(), cli.out.display()),
    );
    Ok(())
}
