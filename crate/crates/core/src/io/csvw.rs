//! Deterministic CSV emission. Files end with a `# end-of-run` footer line;
//! its absence marks an interrupted run.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{BarcodeFrameLog, BarcodeSettingResult, DetectorReport, SweepRow};

pub const END_OF_RUN: &str = "# end-of-run";

pub struct CsvWriter {
    path: std::path::PathBuf,
    w: std::io::BufWriter<std::fs::File>,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &[&str]) -> Result<CsvWriter> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        writeln!(w, "{}", header.join(",")).map_err(|e| Error::io(path, e))?;
        Ok(CsvWriter {
            path: path.to_path_buf(),
            w,
        })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.w, "{}", fields.join(",")).map_err(|e| Error::io(&self.path, e))
    }

    /// Write the end-of-run footer and flush.
    pub fn finish(mut self) -> Result<()> {
        writeln!(self.w, "{END_OF_RUN}").map_err(|e| Error::io(&self.path, e))?;
        self.w.flush().map_err(|e| Error::io(&self.path, e))
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.6}")
}

pub const SWEEP_HEADER: [&str; 8] = [
    "swept_value",
    "gain_index",
    "ssim",
    "ms_ssim",
    "l2",
    "uqi",
    "delta_ssim",
    "received_dbm",
];

pub fn sweep_row_fields(row: &SweepRow) -> Vec<String> {
    vec![
        fmt_f64(row.swept_value),
        row.gain_index.to_string(),
        fmt_f64(row.ssim),
        fmt_f64(row.ms_ssim),
        fmt_f64(row.l2),
        fmt_f64(row.uqi),
        fmt_f64(row.delta_ssim),
        fmt_f64(row.received_dbm),
    ]
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut csv = CsvWriter::create(path, &SWEEP_HEADER)?;
    for row in rows {
        csv.row(&sweep_row_fields(row))?;
    }
    csv.finish()
}

pub const BARCODE_SUMMARY_HEADER: [&str; 8] = [
    "exposure_us",
    "gain_index",
    "n_frames",
    "clean_detected",
    "attacked_detected",
    "clean_rate",
    "attacked_rate",
    "full_decode_clean_rate",
];

pub fn write_barcode_summary_csv(path: &Path, settings: &[BarcodeSettingResult]) -> Result<()> {
    let mut csv = CsvWriter::create(path, &BARCODE_SUMMARY_HEADER)?;
    for s in settings {
        csv.row(&[
            fmt_f64(s.exposure_us),
            s.gain_index.to_string(),
            s.n_frames.to_string(),
            s.clean_detected.to_string(),
            s.attacked_detected.to_string(),
            fmt_f64(s.clean_rate()),
            fmt_f64(s.attacked_rate()),
            fmt_f64(s.clean_full as f64 / s.n_frames as f64),
        ])?;
    }
    csv.finish()
}

pub const BARCODE_FRAMES_HEADER: [&str; 6] = [
    "exposure_us",
    "gain_index",
    "frame_index",
    "attack_on",
    "n_decoded",
    "digits",
];

pub fn write_barcode_frames_csv(path: &Path, log: &[BarcodeFrameLog]) -> Result<()> {
    let mut csv = CsvWriter::create(path, &BARCODE_FRAMES_HEADER)?;
    for row in log {
        csv.row(&[
            fmt_f64(row.exposure_us),
            row.gain_index.to_string(),
            row.frame_index.to_string(),
            (row.attack_on as u8).to_string(),
            row.n_decoded.to_string(),
            row.digits.join(";"),
        ])?;
    }
    csv.finish()
}

pub const DETECTOR_HEADER: [&str; 3] = ["frame_index", "mean_adu", "flagged"];

pub fn write_detector_csv(path: &Path, report: &DetectorReport) -> Result<()> {
    let mut csv = CsvWriter::create(path, &DETECTOR_HEADER)?;
    for record in &report.records {
        csv.row(&[
            record.frame_index.to_string(),
            fmt_f64(record.mean_adu),
            (record.flagged as u8).to_string(),
        ])?;
    }
    csv.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_csv_is_byte_stable() {
        let rows = vec![SweepRow {
            swept_value: 190e6,
            gain_index: 29,
            ssim: 0.123456789,
            ms_ssim: 0.2,
            l2: 3.5,
            uqi: 0.9,
            delta_ssim: 0.75,
            received_dbm: 35.5347,
        }];
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_sweep_csv(&a, &rows).unwrap();
        write_sweep_csv(&b, &rows).unwrap();
        let bytes_a = std::fs::read(&a).unwrap();
        assert_eq!(bytes_a, std::fs::read(&b).unwrap());
        let text = String::from_utf8(bytes_a).unwrap();
        assert!(text.starts_with("swept_value,gain_index,"));
        assert!(text.trim_end().ends_with(END_OF_RUN));
    }
}
