//! Binary PPM (P6), PGM (P5), and PAM (P7) readers/writers. The netpbm
//! formats are dependency-free and byte-reproducible; maxval follows the
//! sensor's ADC range, with two-byte big-endian samples above 255.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::attack::SourceImage;
use crate::error::{Error, Result};
use crate::sensor::{RawFrame, RgbFrame};

pub fn write_ppm(frame: &RgbFrame, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    write_ppm_to(frame, &mut w).map_err(|e| Error::io(path, e))
}

pub fn write_ppm_to(frame: &RgbFrame, w: &mut impl Write) -> std::io::Result<()> {
    write!(w, "P6\n{} {}\n{}\n", frame.width, frame.height, frame.max_value)?;
    let wide = frame.max_value > 255;
    for px in &frame.data {
        for &v in px {
            if wide {
                w.write_all(&v.to_be_bytes())?;
            } else {
                w.write_all(&[v as u8])?;
            }
        }
    }
    w.flush()
}

pub fn write_pgm(frame: &RawFrame, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let result = (|| {
        write!(w, "P5\n{} {}\n{}\n", frame.width, frame.height, frame.max_value)?;
        let wide = frame.max_value > 255;
        for &v in &frame.data {
            if wide {
                w.write_all(&v.to_be_bytes())?;
            } else {
                w.write_all(&[v as u8])?;
            }
        }
        w.flush()
    })();
    result.map_err(|e| Error::io(path, e))
}

pub fn read_ppm(path: &Path) -> Result<RgbFrame> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let magic = read_token(&mut r, path)?;
    if magic != "P6" {
        return Err(parse_err(path, format!("expected P6, got {magic:?}")));
    }
    let width = read_usize(&mut r, path)?;
    let height = read_usize(&mut r, path)?;
    let max_value = read_usize(&mut r, path)?;
    if max_value == 0 || max_value > 65_535 {
        return Err(parse_err(path, format!("bad maxval {max_value}")));
    }
    let wide = max_value > 255;
    let samples = width * height * 3;
    let mut bytes = vec![0u8; samples * if wide { 2 } else { 1 }];
    r.read_exact(&mut bytes).map_err(|e| Error::io(path, e))?;
    let mut values = Vec::with_capacity(samples);
    if wide {
        for pair in bytes.chunks_exact(2) {
            values.push(u16::from_be_bytes([pair[0], pair[1]]));
        }
    } else {
        values.extend(bytes.iter().map(|&b| b as u16));
    }
    let data = values.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
    Ok(RgbFrame {
        width,
        height,
        max_value: max_value as u16,
        data,
    })
}

pub fn read_pgm(path: &Path) -> Result<RawFrame> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let magic = read_token(&mut r, path)?;
    if magic != "P5" {
        return Err(parse_err(path, format!("expected P5, got {magic:?}")));
    }
    let width = read_usize(&mut r, path)?;
    let height = read_usize(&mut r, path)?;
    let max_value = read_usize(&mut r, path)?;
    if max_value == 0 || max_value > 65_535 {
        return Err(parse_err(path, format!("bad maxval {max_value}")));
    }
    let wide = max_value > 255;
    let mut bytes = vec![0u8; width * height * if wide { 2 } else { 1 }];
    r.read_exact(&mut bytes).map_err(|e| Error::io(path, e))?;
    let data = if wide {
        bytes
            .chunks_exact(2)
            .map(|p| u16::from_be_bytes([p[0], p[1]]))
            .collect()
    } else {
        bytes.iter().map(|&b| b as u16).collect()
    };
    Ok(RawFrame {
        width,
        height,
        max_value: max_value as u16,
        data,
    })
}

/// Load an attacker source image: P6 (RGB, alpha set opaque) or P7 PAM with
/// RGB or RGB_ALPHA tuples. 8-bit samples only.
pub fn read_source_image(path: &Path) -> Result<SourceImage> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = BufReader::new(file);
    let magic = read_token(&mut r, path)?;
    match magic.as_str() {
        "P6" => {
            let width = read_usize(&mut r, path)?;
            let height = read_usize(&mut r, path)?;
            let max_value = read_usize(&mut r, path)?;
            if max_value != 255 {
                return Err(parse_err(path, "source images must be 8-bit (maxval 255)".into()));
            }
            let mut bytes = vec![0u8; width * height * 3];
            r.read_exact(&mut bytes).map_err(|e| Error::io(path, e))?;
            let pixels = bytes
                .chunks_exact(3)
                .map(|c| [c[0], c[1], c[2], 255])
                .collect();
            SourceImage::new(width, height, pixels)
        }
        "P7" => read_pam_body(&mut r, path),
        other => Err(parse_err(path, format!("unsupported format {other:?}"))),
    }
}

fn read_pam_body(r: &mut impl BufRead, path: &Path) -> Result<SourceImage> {
    let mut width = 0usize;
    let mut height = 0usize;
    let mut depth = 0usize;
    let mut maxval = 0usize;
    loop {
        let mut line = String::new();
        if r.read_line(&mut line).map_err(|e| Error::io(path, e))? == 0 {
            return Err(parse_err(path, "unexpected end of PAM header".into()));
        }
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("ENDHDR") => break,
            Some("WIDTH") => width = parse_field(parts.next(), path)?,
            Some("HEIGHT") => height = parse_field(parts.next(), path)?,
            Some("DEPTH") => depth = parse_field(parts.next(), path)?,
            Some("MAXVAL") => maxval = parse_field(parts.next(), path)?,
            Some("TUPLTYPE") => {}
            other => return Err(parse_err(path, format!("unknown PAM field {other:?}"))),
        }
    }
    if maxval != 255 {
        return Err(parse_err(path, "source images must be 8-bit (maxval 255)".into()));
    }
    if depth != 3 && depth != 4 {
        return Err(parse_err(path, format!("unsupported PAM depth {depth}")));
    }
    let mut bytes = vec![0u8; width * height * depth];
    r.read_exact(&mut bytes).map_err(|e| Error::io(path, e))?;
    let pixels = bytes
        .chunks_exact(depth)
        .map(|c| {
            if depth == 4 {
                [c[0], c[1], c[2], c[3]]
            } else {
                [c[0], c[1], c[2], 255]
            }
        })
        .collect();
    SourceImage::new(width, height, pixels)
}

fn parse_field(token: Option<&str>, path: &Path) -> Result<usize> {
    token
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(path, "bad PAM header field".into()))
}

/// Next whitespace-delimited token, skipping `#` comments.
fn read_token(r: &mut impl BufRead, path: &Path) -> Result<String> {
    let mut token = String::new();
    let mut in_comment = false;
    loop {
        let mut byte = [0u8; 1];
        match r.read(&mut byte).map_err(|e| Error::io(path, e))? {
            0 => {
                if token.is_empty() {
                    return Err(parse_err(path, "unexpected end of file".into()));
                }
                return Ok(token);
            }
            _ => {
                let c = byte[0] as char;
                if in_comment {
                    if c == '\n' {
                        in_comment = false;
                    }
                } else if c == '#' {
                    in_comment = true;
                } else if c.is_ascii_whitespace() {
                    if !token.is_empty() {
                        return Ok(token);
                    }
                } else {
                    token.push(c);
                }
            }
        }
    }
}

fn read_usize(r: &mut impl BufRead, path: &Path) -> Result<usize> {
    read_token(r, path)?
        .parse()
        .map_err(|e| parse_err(path, format!("bad integer: {e}")))
}

fn parse_err(path: &Path, detail: String) -> Error {
    Error::Parse {
        what: path.display().to_string(),
        detail,
    }
}
