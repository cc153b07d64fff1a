//! Scanline EAN-13 decoder: adaptive thresholding, run-length extraction,
//! guard search, per-character nearest-pattern matching, parity resolution,
//! and checksum verification. Failure to decode yields an empty list.

use std::collections::BTreeSet;

use crate::metrics::luma_plane;
use crate::sensor::RgbFrame;

use super::tables::{self, L_CODES, R_CODES};
use super::verify;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeParams {
    /// Number of evenly spaced horizontal scanlines.
    pub scanlines: usize,
    /// Sliding-mean window for the adaptive threshold, in samples.
    pub threshold_window: usize,
    /// Subtracted from the sliding mean before comparison.
    pub threshold_offset: f64,
    /// Maximum total module error of a character against its nearest pattern.
    pub max_distance_modules: f64,
    /// Required quiet-zone width in modules on both sides of the symbol.
    pub min_quiet_modules: f64,
    /// Minimum scanline contrast as a fraction of the frame's value range;
    /// flatter scanlines are skipped.
    pub min_contrast: f64,
}

impl Default for DecodeParams {
    fn default() -> DecodeParams {
        DecodeParams {
            scanlines: 16,
            threshold_window: 51,
            threshold_offset: 0.0,
            max_distance_modules: 1.2,
            min_quiet_modules: 5.0,
            min_contrast: 0.015,
        }
    }
}

/// Decode every barcode found on the configured scanlines. Duplicate reads
/// are merged; only checksum-valid results are returned, sorted.
pub fn decode(frame: &RgbFrame, params: &DecodeParams) -> Vec<String> {
    let luma = luma_plane(frame);
    let mut found = BTreeSet::new();
    for line in 0..params.scanlines {
        let row = (frame.height * (line + 1)) / (params.scanlines + 1);
        if row >= frame.height {
            continue;
        }
        let start = row * frame.width;
        scan_row(
            &luma[start..start + frame.width],
            frame.max_value as f64,
            params,
            &mut found,
        );
    }
    found.into_iter().collect()
}

#[derive(Debug, Clone, Copy)]
struct Run {
    dark: bool,
    len: f64,
}

fn scan_row(luma: &[f64], max_value: f64, params: &DecodeParams, found: &mut BTreeSet<String>) {
    let n = luma.len();
    if n < params.threshold_window {
        return;
    }
    let (lo, hi) = luma
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if hi - lo < params.min_contrast * max_value {
        return;
    }

    // Centered sliding mean with clamped edges via prefix sums.
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for &v in luma {
        prefix.push(prefix.last().unwrap() + v);
    }
    let half = params.threshold_window / 2;
    let dark: Vec<bool> = (0..n)
        .map(|i| {
            let a = i.saturating_sub(half);
            let b = (i + half + 1).min(n);
            let mean = (prefix[b] - prefix[a]) / (b - a) as f64;
            luma[i] < mean - params.threshold_offset
        })
        .collect();

    // Run-length encode.
    let mut runs: Vec<Run> = Vec::new();
    for &d in &dark {
        match runs.last_mut() {
            Some(run) if run.dark == d => run.len += 1.0,
            _ => runs.push(Run { dark: d, len: 1.0 }),
        }
    }

    // An EAN-13 symbol spans 59 runs: 3 + 6*4 + 5 + 6*4 + 3.
    for i in 0..runs.len() {
        if !runs[i].dark || i + 59 > runs.len() {
            continue;
        }
        if let Some(digits) = try_symbol(&runs[i..i + 59], i, &runs, params) {
            if verify(&digits) {
                found.insert(digits.iter().map(|d| (b'0' + d) as char).collect());
            }
        }
    }
}

fn try_symbol(symbol: &[Run], start: usize, all: &[Run], params: &DecodeParams) -> Option<[u8; 13]> {
    // Start guard: bar, space, bar of one module each.
    let module = (symbol[0].len + symbol[1].len + symbol[2].len) / 3.0;
    if module <= 0.0 {
        return None;
    }
    for run in &symbol[0..3] {
        if (run.len - module).abs() > 0.6 * module {
            return None;
        }
    }
    // Leading quiet zone (line start counts as quiet).
    if start > 0 {
        let quiet = &all[start - 1];
        if quiet.dark || quiet.len < params.min_quiet_modules * module {
            return None;
        }
    }

    let mut digits = [0u8; 13];
    let mut parity = 0u8;

    // Six left characters: space, bar, space, bar each.
    for c in 0..6 {
        let runs = &symbol[3 + 4 * c..3 + 4 * c + 4];
        if runs[0].dark {
            return None;
        }
        let (digit, is_g) = match_left(runs, module, params)?;
        digits[1 + c] = digit;
        parity = (parity << 1) | u8::from(is_g);
    }

    // Middle guard: space, bar, space, bar, space of one module each.
    let mid = &symbol[27..32];
    if mid[0].dark {
        return None;
    }
    let mid_module = mid.iter().map(|r| r.len).sum::<f64>() / 5.0;
    if (mid_module - module).abs() > 0.5 * module {
        return None;
    }
    for run in mid {
        if (run.len - mid_module).abs() > 0.6 * mid_module {
            return None;
        }
    }

    // Six right characters: bar, space, bar, space each.
    for c in 0..6 {
        let runs = &symbol[32 + 4 * c..32 + 4 * c + 4];
        if !runs[0].dark {
            return None;
        }
        digits[7 + c] = match_right(runs, module, params)?;
    }

    // End guard plus trailing quiet zone (line end counts as quiet).
    let end = &symbol[56..59];
    if !end[0].dark {
        return None;
    }
    let end_module = end.iter().map(|r| r.len).sum::<f64>() / 3.0;
    if (end_module - module).abs() > 0.5 * module {
        return None;
    }
    let after = start + 59;
    if after < all.len() {
        let quiet = &all[after];
        if quiet.dark || quiet.len < params.min_quiet_modules * module {
            return None;
        }
    }

    // Leading digit from the left-half parity pattern.
    let first = tables::FIRST_DIGIT_PARITY.iter().position(|&p| p == parity)?;
    digits[0] = first as u8;
    Some(digits)
}

/// Normalized run widths of a 4-run character, in modules.
fn widths(runs: &[Run], guard_module: f64) -> Option<[f64; 4]> {
    let span: f64 = runs.iter().map(|r| r.len).sum();
    let module = span / 7.0;
    // Character density must agree with the guard estimate.
    if (module - guard_module).abs() > 0.5 * guard_module {
        return None;
    }
    let mut w = [0.0f64; 4];
    for (k, run) in runs.iter().enumerate() {
        w[k] = run.len / module;
    }
    Some(w)
}

fn pattern_distance(w: &[f64; 4], t: &[f64; 4]) -> f64 {
    w.iter().zip(t).map(|(a, b)| (a - b).abs()).sum()
}

/// Nearest left-half pattern over both parities; Some((digit, is_g)).
fn match_left(runs: &[Run], guard_module: f64, params: &DecodeParams) -> Option<(u8, bool)> {
    let w = widths(runs, guard_module)?;
    let mut best = (f64::INFINITY, 0u8, false);
    for d in 0..10u8 {
        let dist_l = pattern_distance(&w, &tables::run_tuple(L_CODES[d as usize]));
        if dist_l < best.0 {
            best = (dist_l, d, false);
        }
        let dist_g = pattern_distance(&w, &tables::run_tuple(tables::G_CODES[d as usize]));
        if dist_g < best.0 {
            best = (dist_g, d, true);
        }
    }
    (best.0 <= params.max_distance_modules).then_some((best.1, best.2))
}

fn match_right(runs: &[Run], guard_module: f64, params: &DecodeParams) -> Option<u8> {
    let w = widths(runs, guard_module)?;
    let mut best = (f64::INFINITY, 0u8);
    for d in 0..10u8 {
        let dist = pattern_distance(&w, &tables::run_tuple(R_CODES[d as usize]));
        if dist < best.0 {
            best = (dist, d);
        }
    }
    (best.0 <= params.max_distance_modules).then_some(best.1)
}
