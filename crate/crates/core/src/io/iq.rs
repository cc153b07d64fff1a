//! IQ export: interleaved 32-bit little-endian floats (I, Q, I, Q, ...)
//! plus a JSON sidecar describing the stream.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Companion metadata written next to every .iq file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IqSidecar {
    pub sample_rate: f64,
    pub carrier_hz: f64,
    pub symbol_rate: f64,
    /// Number of complex samples in the file.
    pub length: usize,
}

pub fn write_iq(samples: &[(f32, f32)], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let result = (|| {
        for &(i, q) in samples {
            w.write_all(&i.to_le_bytes())?;
            w.write_all(&q.to_le_bytes())?;
        }
        w.flush()
    })();
    result.map_err(|e| Error::io(path, e))
}

pub fn read_iq(path: &Path) -> Result<Vec<(f32, f32)>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Parse {
            what: path.display().to_string(),
            detail: format!("{} bytes is not a whole number of IQ pairs", bytes.len()),
        });
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| {
            (
                f32::from_le_bytes([c[0], c[1], c[2], c[3]]),
                f32::from_le_bytes([c[4], c[5], c[6], c[7]]),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iq_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("signal.iq");
        let samples = vec![(1.0f32, 0.0f32), (0.5, -0.25), (0.0, 1.0)];
        write_iq(&samples, &path).unwrap();
        assert_eq!(read_iq(&path).unwrap(), samples);
    }

    #[test]
    fn sidecar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("signal.json");
        let sidecar = IqSidecar {
            sample_rate: 25e6,
            carrier_hz: 190e6,
            symbol_rate: 2_440_320.0,
            length: 81344,
        };
        crate::io::save_json(&path, &sidecar).unwrap();
        let back: IqSidecar = crate::io::load_json(&path).unwrap();
        assert_eq!(back, sidecar);
    }
}
