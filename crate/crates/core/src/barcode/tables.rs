//! EAN-13 code tables. Seven-bit patterns are stored MSB-first; a set bit
//! is a dark module.

/// Left-half odd-parity patterns (L).
pub const L_CODES: [u8; 10] = [
    0b0001101, 0b0011001, 0b0010011, 0b0111101, 0b0100011, 0b0110001, 0b0101111, 0b0111011,
    0b0110111, 0b0001011,
];

/// Left-half even-parity patterns (G): bit-reversed R codes.
pub const G_CODES: [u8; 10] = [
    0b0100111, 0b0110011, 0b0011011, 0b0100001, 0b0011101, 0b0111001, 0b0000101, 0b0010001,
    0b0001001, 0b0010111,
];

/// Right-half patterns (R): complements of L.
pub const R_CODES: [u8; 10] = [
    0b1110010, 0b1100110, 0b1101100, 0b1000010, 0b1011100, 0b1001110, 0b1010000, 0b1000100,
    0b1001000, 0b1110100,
];

/// Parity template of the six left digits per leading digit
/// (bit 5 = first left digit; 0 = L, 1 = G).
pub const FIRST_DIGIT_PARITY: [u8; 10] = [
    0b000000, 0b001011, 0b001101, 0b001110, 0b010011, 0b011001, 0b011100, 0b010101, 0b010110,
    0b011010,
];

/// Run-length tuple (4 runs summing to 7 modules) of a 7-bit pattern.
/// Left characters start with a space run, right characters with a bar run.
pub fn run_tuple(bits: u8) -> [f64; 4] {
    let mut runs = [0.0f64; 4];
    let mut run = 0usize;
    let mut current = (bits >> 6) & 1;
    for k in (0..7).rev() {
        let bit = (bits >> k) & 1;
        if bit != current {
            run += 1;
            current = bit;
        }
        runs[run] += 1.0;
    }
    debug_assert_eq!(run, 3);
    runs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_codes_are_bit_reversed_r_codes() {
        for d in 0..10 {
            let r = R_CODES[d];
            let mut reversed = 0u8;
            for k in 0..7 {
                if (r >> k) & 1 == 1 {
                    reversed |= 1 << (6 - k);
                }
            }
            assert_eq!(G_CODES[d], reversed, "digit {d}");
        }
    }

    #[test]
    fn r_codes_are_complements_of_l() {
        for d in 0..10 {
            assert_eq!(R_CODES[d], !L_CODES[d] & 0x7f, "digit {d}");
        }
    }

    #[test]
    fn run_tuples_sum_to_seven() {
        for d in 0..10 {
            for bits in [L_CODES[d], G_CODES[d], R_CODES[d]] {
                let t = run_tuple(bits);
                assert_eq!(t.iter().sum::<f64>(), 7.0);
            }
        }
        assert_eq!(run_tuple(L_CODES[0]), [3.0, 2.0, 1.0, 1.0]);
        assert_eq!(run_tuple(G_CODES[0]), [1.0, 1.0, 2.0, 3.0]);
        assert_eq!(run_tuple(R_CODES[0]), [3.0, 2.0, 1.0, 1.0]);
    }

    #[test]
    fn left_tuples_are_parity_unambiguous() {
        // No L run tuple collides with any G run tuple, so run lengths alone
        // determine digit and parity on the left half.
        for a in 0..10 {
            for b in 0..10 {
                assert_ne!(
                    run_tuple(L_CODES[a]),
                    run_tuple(G_CODES[b]),
                    "L{a} vs G{b}"
                );
            }
        }
    }
}
