//! Bilinear demosaicing over the Bayer mosaic, with mirror-extended borders
//! (mirroring preserves the CFA phase), cropped to the effective window.

use crate::error::{Error, Result};

use super::frame::{RawFrame, RgbFrame};
use super::{Channel, SensorConfig};

/// Reconstruct RGB from the raw mosaic and crop away the shielded border.
pub fn demosaic(raw: &RawFrame, config: &SensorConfig) -> Result<RgbFrame> {
    if raw.width != config.cols_total || raw.height != config.rows_total {
        return Err(Error::DimensionMismatch {
            expected_width: config.cols_total,
            expected_height: config.rows_total,
            width: raw.width,
            height: raw.height,
        });
    }

    let (w, h) = (raw.width as isize, raw.height as isize);
    let at = |row: isize, col: isize| -> f64 {
        let r = mirror(row, h);
        let c = mirror(col, w);
        raw.data[(r * w + c) as usize] as f64
    };

    let (border_col, border_row) = config.border_origin();
    let mut out = RgbFrame {
        width: config.cols_effective,
        height: config.rows_effective,
        max_value: raw.max_value,
        data: vec![[0; 3]; config.cols_effective * config.rows_effective],
    };

    for out_row in 0..config.rows_effective {
        for out_col in 0..config.cols_effective {
            let row = (out_row + border_row) as isize;
            let col = (out_col + border_col) as isize;
            let v = at(row, col);
            let cross = (at(row - 1, col) + at(row + 1, col) + at(row, col - 1) + at(row, col + 1)) / 4.0;
            let diag = (at(row - 1, col - 1)
                + at(row - 1, col + 1)
                + at(row + 1, col - 1)
                + at(row + 1, col + 1))
                / 4.0;
            let horiz = (at(row, col - 1) + at(row, col + 1)) / 2.0;
            let vert = (at(row - 1, col) + at(row + 1, col)) / 2.0;

            let (r, g, b) = match config.cfa.channel_at(row as usize, col as usize) {
                Channel::Red => (v, cross, diag),
                Channel::Blue => (diag, cross, v),
                Channel::Green => {
                    // A green site sits between two reds either horizontally
                    // or vertically, depending on the row.
                    let east_is_red =
                        config.cfa.channel_at(row as usize, col as usize + 1) == Channel::Red;
                    if east_is_red {
                        (horiz, v, vert)
                    } else {
                        (vert, v, horiz)
                    }
                }
            };
            out.set(
                out_row,
                out_col,
                [
                    quantize(r, raw.max_value),
                    quantize(g, raw.max_value),
                    quantize(b, raw.max_value),
                ],
            );
        }
    }
    Ok(out)
}

fn mirror(idx: isize, len: isize) -> isize {
    if len == 1 {
        return 0;
    }
    if idx < 0 {
        -idx
    } else if idx >= len {
        2 * (len - 1) - idx
    } else {
        idx
    }
}

fn quantize(value: f64, max: u16) -> u16 {
    let rounded = (value + 0.5).floor();
    if rounded <= 0.0 {
        0
    } else if rounded >= max as f64 {
        max
    } else {
        rounded as u16
    }
}
