//! C ABI for the CCD signal-injection simulator: opaque handles, status
//! codes, and a thread-local last-error message. Every function is safe to
//! call from any thread; handles are not synchronized and must not be used
//! concurrently from multiple threads.

#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use ccdsim::attack::{self, AttackSignal};
use ccdsim::coupling::ChannelConfig;
use ccdsim::error::Error;
use ccdsim::metrics;
use ccdsim::profiles;
use ccdsim::sensor::{capture_sequence, AttackScenario, RgbFrame, Scene, SensorConfig};

/// Result code of a ccdsim call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ccdsim_status {
    CCDSIM_OK = 0,
    CCDSIM_NULL_POINTER = 1,
    CCDSIM_INVALID_ARGUMENT = 2,
    CCDSIM_DIMENSION_MISMATCH = 3,
    CCDSIM_RATE_MISMATCH = 4,
    CCDSIM_IO_ERROR = 5,
    CCDSIM_PARSE_ERROR = 6,
    CCDSIM_BUFFER_TOO_SMALL = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).unwrap_or_default();
    });
}

fn status_of(error: &Error) -> ccdsim_status {
    match error {
        Error::InvalidConfig(_) | Error::InvalidInput(_) => ccdsim_status::CCDSIM_INVALID_ARGUMENT,
        Error::DimensionMismatch { .. } => ccdsim_status::CCDSIM_DIMENSION_MISMATCH,
        Error::RateMismatch { .. } => ccdsim_status::CCDSIM_RATE_MISMATCH,
        Error::Io { .. } => ccdsim_status::CCDSIM_IO_ERROR,
        Error::Json { .. } | Error::Parse { .. } => ccdsim_status::CCDSIM_PARSE_ERROR,
    }
}

fn fail(error: Error) -> ccdsim_status {
    let status = status_of(&error);
    set_error(error.to_string());
    status
}

/// Copy the calling thread's last error message into `buf` (NUL terminated,
/// truncated to `cap`). Returns the full message length, not counting NUL.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be null (length query).
#[no_mangle]
pub unsafe extern "C" fn ccdsim_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Opaque camera description.
pub struct ccdsim_sensor(SensorConfig);
/// Opaque radiance scene at the sensor's effective resolution.
pub struct ccdsim_scene(Scene);
/// Opaque capture result (a sequence of demosaiced frames).
pub struct ccdsim_capture(Vec<RgbFrame>);

/// What the attacker transmits during a capture.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ccdsim_attack_kind {
    CCDSIM_ATTACK_SINE = 0,
    CCDSIM_ATTACK_GAUSSIAN_NOISE = 1,
}

/// Attack description: signal kind plus the RF channel it travels over.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ccdsim_attack_params {
    pub kind: ccdsim_attack_kind,
    /// Tone frequency for sine attacks, ignored for noise.
    pub tone_hz: f64,
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub distance_m: f64,
    pub carrier_hz: f64,
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

/// Create a sensor from a built-in profile name: "dfm-desk", "cctv-analog",
/// or "cmos-desk".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_sensor_builtin(
    name: *const c_char,
    out: *mut *mut ccdsim_sensor,
) -> ccdsim_status {
    if out.is_null() {
        set_error("out pointer is null");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    }
    let Some(name) = cstr(name) else {
        set_error("name is null or not UTF-8");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    };
    let config = match name {
        "dfm-desk" => profiles::dfm_desk(),
        "cctv-analog" => profiles::cctv_analog(),
        "cmos-desk" => profiles::cmos_desk(),
        other => {
            set_error(format!("unknown builtin sensor {other:?}"));
            return ccdsim_status::CCDSIM_INVALID_ARGUMENT;
        }
    };
    *out = Box::into_raw(Box::new(ccdsim_sensor(config)));
    ccdsim_status::CCDSIM_OK
}

/// Create a sensor from a JSON document (same schema as configs/*.json).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_sensor_from_json(
    json: *const c_char,
    out: *mut *mut ccdsim_sensor,
) -> ccdsim_status {
    if out.is_null() {
        set_error("out pointer is null");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    }
    let Some(text) = cstr(json) else {
        set_error("json is null or not UTF-8");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    };
    let config: SensorConfig = match serde_json::from_str(text) {
        Ok(c) => c,
        Err(e) => {
            set_error(format!("sensor JSON: {e}"));
            return ccdsim_status::CCDSIM_PARSE_ERROR;
        }
    };
    if let Err(e) = config.validate() {
        return fail(e);
    }
    *out = Box::into_raw(Box::new(ccdsim_sensor(config)));
    ccdsim_status::CCDSIM_OK
}

/// # Safety
/// `sensor` must be a pointer from a ccdsim_sensor constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_sensor_free(sensor: *mut ccdsim_sensor) {
    if !sensor.is_null() {
        drop(Box::from_raw(sensor));
    }
}

/// # Safety
/// `sensor` must be a valid, live sensor handle.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_sensor_cols_effective(sensor: *const ccdsim_sensor) -> u32 {
    sensor.as_ref().map_or(0, |s| s.0.cols_effective as u32)
}

/// # Safety
/// `sensor` must be a valid, live sensor handle.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_sensor_rows_effective(sensor: *const ccdsim_sensor) -> u32 {
    sensor.as_ref().map_or(0, |s| s.0.rows_effective as u32)
}

/// Digitization rate in samples per second (stored or derived).
///
/// # Safety
/// `sensor` must be a valid, live sensor handle.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_sensor_readout_rate(sensor: *const ccdsim_sensor) -> f64 {
    sensor.as_ref().map_or(0.0, |s| s.0.readout_rate())
}

/// Uniform scene at `level` radiance (0..=1).
///
/// # Safety
/// `sensor` must be a valid sensor handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_scene_uniform(
    sensor: *const ccdsim_sensor,
    level: f64,
    out: *mut *mut ccdsim_scene,
) -> ccdsim_status {
    let (Some(sensor), false) = (sensor.as_ref(), out.is_null()) else {
        set_error("null pointer");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    };
    match Scene::uniform(sensor.0.cols_effective, sensor.0.rows_effective, level) {
        Ok(scene) => {
            *out = Box::into_raw(Box::new(ccdsim_scene(scene)));
            ccdsim_status::CCDSIM_OK
        }
        Err(e) => fail(e),
    }
}

/// Scene from an interleaved 8-bit RGB buffer at the sensor's effective
/// resolution; sample value 255 maps to radiance 1.0.
///
/// # Safety
/// `rgb` must point to `len` readable bytes; `sensor`/`out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_scene_from_rgb8(
    sensor: *const ccdsim_sensor,
    rgb: *const u8,
    len: usize,
    out: *mut *mut ccdsim_scene,
) -> ccdsim_status {
    let (Some(sensor), false, false) = (sensor.as_ref(), rgb.is_null(), out.is_null()) else {
        set_error("null pointer");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    };
    let (w, h) = (sensor.0.cols_effective, sensor.0.rows_effective);
    if len != w * h * 3 {
        set_error(format!("buffer has {len} bytes, expected {}", w * h * 3));
        return ccdsim_status::CCDSIM_DIMENSION_MISMATCH;
    }
    let bytes = std::slice::from_raw_parts(rgb, len);
    let pixels = bytes
        .chunks_exact(3)
        .map(|c| {
            [
                c[0] as f64 / 255.0,
                c[1] as f64 / 255.0,
                c[2] as f64 / 255.0,
            ]
        })
        .collect();
    match Scene::from_pixels(w, h, pixels) {
        Ok(scene) => {
            *out = Box::into_raw(Box::new(ccdsim_scene(scene)));
            ccdsim_status::CCDSIM_OK
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `scene` must be a pointer from a ccdsim_scene constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_scene_free(scene: *mut ccdsim_scene) {
    if !scene.is_null() {
        drop(Box::from_raw(scene));
    }
}

/// Capture `n_frames` consecutive frames, optionally under attack. The
/// attack runs rate-matched on its own clock with a seeded random offset.
///
/// # Safety
/// `sensor` and `scene` must be valid handles; `attack` may be null; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_capture_run(
    sensor: *const ccdsim_sensor,
    scene: *const ccdsim_scene,
    attack: *const ccdsim_attack_params,
    n_frames: u32,
    seed: u64,
    out: *mut *mut ccdsim_capture,
) -> ccdsim_status {
    let (Some(sensor), Some(scene), false) = (sensor.as_ref(), scene.as_ref(), out.is_null())
    else {
        set_error("null pointer");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    };
    let config = &sensor.0;
    let scenario = match attack.as_ref() {
        None => None,
        Some(params) => {
            let channel = ChannelConfig {
                tx_power_dbm: params.tx_power_dbm,
                tx_gain_dbi: params.tx_gain_dbi,
                rx_gain_dbi: params.rx_gain_dbi,
                distance_m: params.distance_m,
                carrier_hz: params.carrier_hz,
            };
            let envelope = match params.kind {
                ccdsim_attack_kind::CCDSIM_ATTACK_SINE => attack::sine_envelope(
                    config.samples_per_frame(),
                    config.readout_rate(),
                    params.tone_hz,
                ),
                ccdsim_attack_kind::CCDSIM_ATTACK_GAUSSIAN_NOISE => attack::gaussian_noise_signal(
                    config.samples_per_frame(),
                    attack::GAUSSIAN_NOISE_MEAN,
                    attack::GAUSSIAN_NOISE_SIGMA,
                    seed,
                ),
            };
            let signal =
                match AttackSignal::new(envelope, config.readout_rate(), params.carrier_hz) {
                    Ok(s) => s,
                    Err(e) => return fail(e),
                };
            Some(AttackScenario::new(signal, channel))
        }
    };
    match capture_sequence(&scene.0, config, scenario.as_ref(), n_frames as usize, seed) {
        Ok(capture) => {
            *out = Box::into_raw(Box::new(ccdsim_capture(capture.rgb_frames)));
            ccdsim_status::CCDSIM_OK
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `capture` must be a pointer from ccdsim_capture_run, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_capture_free(capture: *mut ccdsim_capture) {
    if !capture.is_null() {
        drop(Box::from_raw(capture));
    }
}

/// # Safety
/// `capture` must be a valid, live capture handle.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_capture_frame_count(capture: *const ccdsim_capture) -> usize {
    capture.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `capture` must be a valid, live capture handle.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_capture_width(capture: *const ccdsim_capture) -> u32 {
    capture
        .as_ref()
        .and_then(|c| c.0.first())
        .map_or(0, |f| f.width as u32)
}

/// # Safety
/// `capture` must be a valid, live capture handle.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_capture_height(capture: *const ccdsim_capture) -> u32 {
    capture
        .as_ref()
        .and_then(|c| c.0.first())
        .map_or(0, |f| f.height as u32)
}

/// Copy frame `index` into `buf` as interleaved 8-bit RGB (values are
/// right-shifted for ADCs deeper than 8 bits).
///
/// # Safety
/// `capture` must be valid; `buf` must point to `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_capture_frame_rgb8(
    capture: *const ccdsim_capture,
    index: usize,
    buf: *mut u8,
    buf_len: usize,
) -> ccdsim_status {
    let (Some(capture), false) = (capture.as_ref(), buf.is_null()) else {
        set_error("null pointer");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    };
    let Some(frame) = capture.0.get(index) else {
        set_error(format!("frame index {index} out of range"));
        return ccdsim_status::CCDSIM_INVALID_ARGUMENT;
    };
    let needed = frame.width * frame.height * 3;
    if buf_len < needed {
        set_error(format!("buffer has {buf_len} bytes, need {needed}"));
        return ccdsim_status::CCDSIM_BUFFER_TOO_SMALL;
    }
    let adc_bits = 16 - frame.max_value.leading_zeros();
    let shift = adc_bits.saturating_sub(8);
    let out = std::slice::from_raw_parts_mut(buf, needed);
    for (i, px) in frame.data.iter().enumerate() {
        for ch in 0..3 {
            out[i * 3 + ch] = (px[ch] >> shift) as u8;
        }
    }
    ccdsim_status::CCDSIM_OK
}

/// SSIM between two frames of (possibly different) captures.
///
/// # Safety
/// Both captures must be valid, live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_capture_ssim(
    capture_a: *const ccdsim_capture,
    index_a: usize,
    capture_b: *const ccdsim_capture,
    index_b: usize,
    out: *mut f64,
) -> ccdsim_status {
    let (Some(a), Some(b), false) = (capture_a.as_ref(), capture_b.as_ref(), out.is_null()) else {
        set_error("null pointer");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    };
    let (Some(fa), Some(fb)) = (a.0.get(index_a), b.0.get(index_b)) else {
        set_error("frame index out of range");
        return ccdsim_status::CCDSIM_INVALID_ARGUMENT;
    };
    match metrics::ssim(fa, fb) {
        Ok(v) => {
            *out = v;
            ccdsim_status::CCDSIM_OK
        }
        Err(e) => fail(e),
    }
}

/// Friis received power in dBm.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_friis_received_power(
    tx_power_dbm: f64,
    tx_gain_dbi: f64,
    rx_gain_dbi: f64,
    distance_m: f64,
    carrier_hz: f64,
    out: *mut f64,
) -> ccdsim_status {
    if out.is_null() {
        set_error("out pointer is null");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    }
    let channel = ChannelConfig {
        tx_power_dbm,
        tx_gain_dbi,
        rx_gain_dbi,
        distance_m,
        carrier_hz,
    };
    match ccdsim::coupling::friis_received_power(&channel) {
        Ok(v) => {
            *out = v;
            ccdsim_status::CCDSIM_OK
        }
        Err(e) => fail(e),
    }
}

/// Readout samples per second needed to address every photodiode once per
/// frame. Returns 0 on invalid input.
#[no_mangle]
pub extern "C" fn ccdsim_required_sample_rate(cols_total: u32, rows_total: u32, frame_rate: f64) -> f64 {
    attack::required_sample_rate(cols_total as usize, rows_total as usize, frame_rate)
        .unwrap_or(0.0)
}

/// EAN-13 check digit for 12 payload digits, or -1 on invalid input.
///
/// # Safety
/// `digits` must point to 12 readable bytes.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_ean13_checksum(digits: *const u8) -> i32 {
    if digits.is_null() {
        set_error("digits pointer is null");
        return -1;
    }
    let payload = std::slice::from_raw_parts(digits, 12);
    match ccdsim::barcode::checksum(payload) {
        Ok(d) => d as i32,
        Err(e) => {
            set_error(e.to_string());
            -1
        }
    }
}

/// Decode EAN-13 barcodes from an interleaved 8-bit RGB buffer. Results are
/// written newline-separated (NUL terminated) into `out`; the number of
/// decoded codes is stored in `n_decoded`.
///
/// # Safety
/// `rgb` must point to `width * height * 3` readable bytes; `out` must point
/// to `out_cap` writable bytes; `n_decoded` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ccdsim_barcode_decode_rgb8(
    rgb: *const u8,
    width: u32,
    height: u32,
    out: *mut c_char,
    out_cap: usize,
    n_decoded: *mut usize,
) -> ccdsim_status {
    if rgb.is_null() || out.is_null() || n_decoded.is_null() {
        set_error("null pointer");
        return ccdsim_status::CCDSIM_NULL_POINTER;
    }
    let (w, h) = (width as usize, height as usize);
    let bytes = std::slice::from_raw_parts(rgb, w * h * 3);
    let frame = RgbFrame {
        width: w,
        height: h,
        max_value: 255,
        data: bytes
            .chunks_exact(3)
            .map(|c| [c[0] as u16, c[1] as u16, c[2] as u16])
            .collect(),
    };
    let decoded = ccdsim::barcode::decode(&frame, &ccdsim::barcode::DecodeParams::default());
    *n_decoded = decoded.len();
    let joined = decoded.join("\n");
    let bytes = joined.as_bytes();
    if out_cap == 0 || bytes.len() + 1 > out_cap {
        set_error(format!("need {} bytes, have {out_cap}", bytes.len() + 1));
        return ccdsim_status::CCDSIM_BUFFER_TOO_SMALL;
    }
    std::ptr::copy_nonoverlapping(bytes.as_ptr(), out.cast(), bytes.len());
    *out.add(bytes.len()) = 0;
    ccdsim_status::CCDSIM_OK
}
