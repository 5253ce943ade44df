//! 16-QAM with Gray labeling, nearest-symbol demodulation, and bit-error
//! counting.
//!
//! Labeling convention: the first two bits of each 4-bit group select the
//! in-phase amplitude, the last two the quadrature amplitude. Bit pairs
//! 00, 01, 11, 10 map to amplitudes -3, -1, +1, +3, scaled by 1/sqrt(10)
//! for unit average symbol energy. BER depends on this choice, so it is
//! fixed here and exposed through [`ConstellationSpec`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexVector;

/// A block of bits, each entry 0 or 1.
pub type BitBlock = Vec<u8>;

/// Amplitudes in Gray-pair order: index g encodes bit pair (g >> 1, g & 1).
const GRAY_AMPLITUDES: [(u8, u8, f64); 4] = [
    (0, 0, -3.0),
    (0, 1, -1.0),
    (1, 1, 1.0),
    (1, 0, 3.0),
];

fn qam16_scale() -> f64 {
    1.0 / 10f64.sqrt()
}

fn amplitude_for_pair(b0: u8, b1: u8) -> f64 {
    GRAY_AMPLITUDES
        .iter()
        .find(|(a, b, _)| *a == b0 && *b == b1)
        .map(|(_, _, amp)| *amp)
        .expect("bit pair")
}

/// Slices one real dimension to the nearest amplitude in {-3,-1,+1,+3}/sqrt(10).
/// Exact midpoints resolve toward the smaller amplitude.
fn slice_amplitude(v: f64) -> (u8, u8) {
    let t = 2.0 * qam16_scale();
    if v <= -t {
        (0, 0)
    } else if v <= 0.0 {
        (0, 1)
    } else if v <= t {
        (1, 1)
    } else {
        (1, 0)
    }
}

/// The 16-QAM constellation: 16 points and their 4-bit labels, indexed by
/// the label value read as a big-endian nibble.
#[derive(Debug, Clone)]
pub struct ConstellationSpec {
    pub points: [Complex64; 16],
    pub labels: [[u8; 4]; 16],
}

impl ConstellationSpec {
    pub fn qam16() -> Self {
        let s = qam16_scale();
        let mut points = [Complex64::new(0.0, 0.0); 16];
        let mut labels = [[0u8; 4]; 16];
        for n in 0..16u8 {
            let bits = [n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1];
            let re = amplitude_for_pair(bits[0], bits[1]) * s;
            let im = amplitude_for_pair(bits[2], bits[3]) * s;
            points[n as usize] = Complex64::new(re, im);
            labels[n as usize] = bits;
        }
        Self { points, labels }
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / 16.0
    }
}

/// Maps `4 * users` bits to a symbol vector, 4 bits per user.
pub fn modulate(bits: &[u8], users: usize) -> Result<ComplexVector> {
    if bits.len() != 4 * users || users == 0 {
        return Err(Error::DimensionMismatch(format!(
            "modulate: {} bits for {} users",
            bits.len(),
            users
        )));
    }
    if bits.iter().any(|b| *b > 1) {
        return Err(Error::InvalidConfig("bits must be 0 or 1".into()));
    }
    let s = qam16_scale();
    let entries = bits
        .chunks_exact(4)
        .map(|g| {
            Complex64::new(
                amplitude_for_pair(g[0], g[1]) * s,
                amplitude_for_pair(g[2], g[3]) * s,
            )
        })
        .collect();
    Ok(ComplexVector::from_raw(entries))
}

/// Nearest-symbol decision per entry, returning the concatenated labels.
pub fn demodulate(shat: &ComplexVector) -> Result<BitBlock> {
    let mut bits = Vec::with_capacity(4 * shat.len());
    for (i, z) in shat.as_slice().iter().enumerate() {
        if z.re.is_nan() || z.im.is_nan() {
            return Err(Error::NonFinite(format!("demodulate: entry {i} is NaN")));
        }
        let (i0, i1) = slice_amplitude(z.re);
        let (q0, q1) = slice_amplitude(z.im);
        bits.extend_from_slice(&[i0, i1, q0, q1]);
    }
    Ok(bits)
}

/// Hamming distance between two equal-length bit blocks.
pub fn count_bit_errors(tx: &[u8], rx: &[u8]) -> Result<u64> {
    if tx.len() != rx.len() {
        return Err(Error::DimensionMismatch(format!(
            "count_bit_errors: lengths {} vs {}",
            tx.len(),
            rx.len()
        )));
    }
    Ok(tx.iter().zip(rx).filter(|(a, b)| a != b).count() as u64)
}

/// Draws `n` i.i.d. uniform bits.
pub fn random_bits(rng: &mut impl rand::Rng, n: usize) -> BitBlock {
    (0..n).map(|_| rng.gen_range(0..=1u8)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn all_zero_bits_map_to_lower_left_corner() {
        let s = modulate(&[0, 0, 0, 0], 1).unwrap();
        let scale = qam16_scale();
        assert!((s[0] - Complex64::new(-3.0 * scale, -3.0 * scale)).norm() < 1e-15);
    }

    #[test]
    fn unit_average_energy() {
        let spec = ConstellationSpec::qam16();
        assert!((spec.average_energy() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn round_trip_all_labels() {
        for n in 0..16u8 {
            let bits = vec![n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1];
            let s = modulate(&bits, 1).unwrap();
            assert_eq!(demodulate(&s).unwrap(), bits);
        }
    }

    #[test]
    fn zero_input_resolves_by_tie_rule() {
        // Four-way tie at the origin: smaller real, then smaller imaginary,
        // lands on (-1 - 1j)/sqrt(10), label 0101.
        let z = ComplexVector::new(vec![Complex64::new(0.0, 0.0)]).unwrap();
        assert_eq!(demodulate(&z).unwrap(), vec![0, 1, 0, 1]);
    }

    #[test]
    fn small_perturbation_keeps_label() {
        let spec = ConstellationSpec::qam16();
        for (n, p) in spec.points.iter().enumerate() {
            let z = ComplexVector::new(vec![p + Complex64::new(0.01, -0.01)]).unwrap();
            assert_eq!(demodulate(&z).unwrap(), spec.labels[n].to_vec());
        }
    }

    #[test]
    fn nan_entry_is_an_error() {
        let z = ComplexVector::from_raw(vec![Complex64::new(f64::NAN, 0.0)]);
        assert!(matches!(demodulate(&z), Err(Error::NonFinite(_))));
    }

    #[test]
    fn gray_adjacency_one_bit() {
        let spec = ConstellationSpec::qam16();
        let min_dist = 2.0 * qam16_scale();
        for i in 0..16 {
            for j in 0..16 {
                if i == j {
                    continue;
                }
                let d = (spec.points[i] - spec.points[j]).norm();
                if (d - min_dist).abs() < 1e-9 {
                    let differing = spec.labels[i]
                        .iter()
                        .zip(&spec.labels[j])
                        .filter(|(a, b)| a != b)
                        .count();
                    assert_eq!(differing, 1, "points {i} and {j}");
                }
            }
        }
    }

    #[test]
    fn bit_error_counting() {
        assert_eq!(count_bit_errors(&[0, 1, 1, 0], &[0, 1, 1, 0]).unwrap(), 0);
        assert_eq!(count_bit_errors(&[0, 1, 1, 0], &[1, 0, 0, 1]).unwrap(), 4);
        assert_eq!(count_bit_errors(&[0, 1, 1, 0], &[0, 0, 1, 1]).unwrap(), 2);
        assert!(count_bit_errors(&[0, 1], &[0]).is_err());
    }

    proptest! {
        #[test]
        fn prop_every_finite_point_gets_exactly_one_label(
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
        ) {
            let z = ComplexVector::new(vec![Complex64::new(re, im)]).unwrap();
            let bits = demodulate(&z).unwrap();
            prop_assert_eq!(bits.len(), 4);
            prop_assert!(bits.iter().all(|b| *b <= 1));
        }

        #[test]
        fn prop_modulate_demodulate_round_trip(bits in proptest::collection::vec(0u8..2, 4..=32)) {
            prop_assume!(bits.len() % 4 == 0);
            let users = bits.len() / 4;
            let s = modulate(&bits, users).unwrap();
            prop_assert_eq!(demodulate(&s).unwrap(), bits);
        }
    }
}
