//! EAN-13 rendering and scanline decoding: the barcode-scanning victim
//! application. The decoder is deliberately structure-checked end to end
//! (guards, per-character pattern distance, parity, checksum), so random
//! noise essentially never produces a false accept.

mod decode;
mod render;
mod tables;

pub use decode::{decode, DecodeParams};
pub use render::{render_barcode, RenderStyle};

use crate::error::{Error, Result};

/// Modules in an EAN-13 symbol between the quiet zones.
pub const SYMBOL_MODULES: usize = 95;

/// One renderable EAN-13 symbol: 13 digits (12 payload + checksum) plus
/// geometry in pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarcodeSpec {
    digits: [u8; 13],
    pub module_width_px: usize,
    pub quiet_modules: usize,
    pub bar_height_px: usize,
}

impl BarcodeSpec {
    /// Build from the 12 payload digits; the check digit is computed.
    pub fn from_payload(
        payload: &[u8],
        module_width_px: usize,
        quiet_modules: usize,
        bar_height_px: usize,
    ) -> Result<BarcodeSpec> {
        let check = checksum(payload)?;
        if module_width_px == 0 {
            return Err(Error::InvalidInput("module width must be >= 1".into()));
        }
        let mut digits = [0u8; 13];
        digits[..12].copy_from_slice(payload);
        digits[12] = check;
        Ok(BarcodeSpec {
            digits,
            module_width_px,
            quiet_modules,
            bar_height_px,
        })
    }

    pub fn digits(&self) -> &[u8; 13] {
        &self.digits
    }

    pub fn digits_string(&self) -> String {
        self.digits.iter().map(|d| (b'0' + d) as char).collect()
    }

    /// Total painted width, quiet zones included.
    pub fn total_width_px(&self) -> usize {
        (SYMBOL_MODULES + 2 * self.quiet_modules) * self.module_width_px
    }
}

/// Standard EAN-13 check digit: alternating 1/3 weights over the 12 payload
/// digits, complemented modulo 10.
pub fn checksum(payload: &[u8]) -> Result<u8> {
    if payload.len() != 12 {
        return Err(Error::InvalidInput(format!(
            "EAN-13 payload must be 12 digits, got {}",
            payload.len()
        )));
    }
    let mut sum = 0u32;
    for (i, &d) in payload.iter().enumerate() {
        if d > 9 {
            return Err(Error::InvalidInput(format!("digit {d} outside 0..=9")));
        }
        sum += d as u32 * if i % 2 == 0 { 1 } else { 3 };
    }
    Ok(((10 - sum % 10) % 10) as u8)
}

/// True when the 13-digit string satisfies the EAN-13 checksum.
pub fn verify(digits: &[u8; 13]) -> bool {
    checksum(&digits[..12]).map(|c| c == digits[12]).unwrap_or(false)
}

/// Expand 13 digits into the 95 bar/space modules (true = bar).
pub fn encode_modules(digits: &[u8; 13]) -> Result<[bool; 95]> {
    for &d in digits {
        if d > 9 {
            return Err(Error::InvalidInput(format!("digit {d} outside 0..=9")));
        }
    }
    if !verify(digits) {
        return Err(Error::InvalidInput(
            "digits fail the EAN-13 checksum".into(),
        ));
    }
    let mut modules = [false; 95];
    let mut pos = 0;
    let mut push_bits = |modules: &mut [bool; 95], bits: u32, n: usize| {
        for k in (0..n).rev() {
            modules[pos] = (bits >> k) & 1 == 1;
            pos += 1;
        }
    };

    push_bits(&mut modules, 0b101, 3);
    let parity = tables::FIRST_DIGIT_PARITY[digits[0] as usize];
    for (slot, &d) in digits[1..7].iter().enumerate() {
        let use_g = (parity >> (5 - slot)) & 1 == 1;
        let bits = if use_g {
            tables::G_CODES[d as usize]
        } else {
            tables::L_CODES[d as usize]
        };
        push_bits(&mut modules, bits as u32, 7);
    }
    push_bits(&mut modules, 0b01010, 5);
    for &d in &digits[7..13] {
        push_bits(&mut modules, tables::R_CODES[d as usize] as u32, 7);
    }
    push_bits(&mut modules, 0b101, 3);
    debug_assert_eq!(pos, 95);
    Ok(modules)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force restatement of the weighting formula.
    fn checksum_oracle(payload: &[u8; 12]) -> u8 {
        let mut total = 0u32;
        for (i, &d) in payload.iter().enumerate() {
            let weight = if (i + 1) % 2 == 0 { 3 } else { 1 };
            total += weight * d as u32;
        }
        ((10 - total % 10) % 10) as u8
    }

    #[test]
    fn checksum_known_values() {
        assert_eq!(checksum(&[0; 12]).unwrap(), 0);
        let payload = [5, 9, 0, 1, 2, 3, 4, 1, 2, 3, 4, 5];
        assert_eq!(checksum(&payload).unwrap(), 7);
        assert_eq!(checksum(&payload).unwrap(), checksum_oracle(&payload));
        let payload = [4, 0, 0, 6, 3, 8, 1, 3, 3, 3, 9, 3];
        assert_eq!(checksum(&payload).unwrap(), 1);
        assert_eq!(checksum(&payload).unwrap(), checksum_oracle(&payload));
    }

    #[test]
    fn checksum_matches_oracle_on_many_payloads() {
        let mut state = 0xdead_beefu64;
        for _ in 0..500 {
            let mut payload = [0u8; 12];
            for d in &mut payload {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                *d = (state % 10) as u8;
            }
            assert_eq!(checksum(&payload).unwrap(), checksum_oracle(&payload));
        }
    }

    #[test]
    fn checksum_rejects_bad_input() {
        assert!(checksum(&[0; 11]).is_err());
        assert!(checksum(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 10]).is_err());
    }

    #[test]
    fn modules_have_standard_structure() {
        let spec = BarcodeSpec::from_payload(&[5, 9, 0, 1, 2, 3, 4, 1, 2, 3, 4, 5], 2, 7, 40).unwrap();
        let m = encode_modules(spec.digits()).unwrap();
        // Guards.
        assert_eq!(&m[0..3], &[true, false, true]);
        assert_eq!(&m[45..50], &[false, true, false, true, false]);
        assert_eq!(&m[92..95], &[true, false, true]);
        // 95 modules total, both guards dark at the outer edges.
        assert!(m[0] && m[94]);
    }

    #[test]
    fn encode_rejects_checksum_violation() {
        let mut digits = *BarcodeSpec::from_payload(&[0; 12], 1, 7, 10).unwrap().digits();
        digits[12] = 5; // correct is 0
        assert!(encode_modules(&digits).is_err());
    }
}
