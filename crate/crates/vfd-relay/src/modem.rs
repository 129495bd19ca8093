//! QPSK mapping and soft demapping, plus the complex-to-real decomposition
//! used by the relay's symbol estimator.
//!
//! Conventions fixed here and relied on by every other module:
//! - Gray labelling with anchor `(0,0) -> (1+j)/sqrt(2)`; bit 0 drives the
//!   real component, bit 1 the imaginary component, and a `0` bit maps to the
//!   positive axis.
//! - LLR sign: positive means bit `0` is more likely.
//! - A complex scalar maps to the real pair `[re, im]`; a complex channel
//!   gain `h` with transmit power `P` maps to the scaled rotation matrix
//!   `sqrt(P)*[[re h, -im h], [im h, re h]]`.

use num_complex::Complex64;

use crate::codec::BitLlrFrame;
use crate::channel::SymbolFrame;
use crate::Error;

/// Per-component variance of a unit-energy QPSK symbol (1/2 per real
/// dimension). Feeds the MMSE weight and the selection-probability formulas.
pub const SYMBOL_COMPONENT_VARIANCE: f64 = 0.5;

/// Magnitude at which log-likelihood ratios are clipped everywhere in the
/// receive chain, keeping exponentials finite.
pub const LLR_CLIP: f64 = 50.0;

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Real 2-vector view of one complex symbol, `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSymbolPair(pub [f64; 2]);

impl RealSymbolPair {
    pub fn norm_sq(&self) -> f64 {
        self.0[0] * self.0[0] + self.0[1] * self.0[1]
    }
}

/// Real 2x2 matrix view of a complex channel gain scaled by `sqrt(P)`.
///
/// The matrix is a scaled rotation, so `M^T M = P*|h|^2*I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealChannelMatrix(pub [[f64; 2]; 2]);

impl RealChannelMatrix {
    pub fn mul_vec(&self, v: RealSymbolPair) -> RealSymbolPair {
        let m = &self.0;
        RealSymbolPair([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    pub fn mul_mat(&self, other: &RealChannelMatrix) -> RealChannelMatrix {
        let a = &self.0;
        let b = &other.0;
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        RealChannelMatrix(out)
    }

    pub fn transpose(&self) -> RealChannelMatrix {
        let m = &self.0;
        RealChannelMatrix([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn scale(&self, s: f64) -> RealChannelMatrix {
        let m = &self.0;
        RealChannelMatrix([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }
}

/// `[re, im]` view of a complex scalar.
pub fn to_real(c: Complex64) -> RealSymbolPair {
    RealSymbolPair([c.re, c.im])
}

/// Inverse of [`to_real`].
pub fn to_complex(v: RealSymbolPair) -> Complex64 {
    Complex64::new(v.0[0], v.0[1])
}

/// Real-matrix view of the effective gain `sqrt(P)*h`.
pub fn to_real_matrix(h: Complex64, tx_power: f64) -> RealChannelMatrix {
    let s = tx_power.sqrt();
    RealChannelMatrix([[s * h.re, -s * h.im], [s * h.im, s * h.re]])
}

/// The four constellation points in bit-pair order `(0,0),(0,1),(1,0),(1,1)`.
pub fn qpsk_points() -> [Complex64; 4] {
    [
        qpsk_symbol(0, 0),
        qpsk_symbol(0, 1),
        qpsk_symbol(1, 0),
        qpsk_symbol(1, 1),
    ]
}

/// Maps one bit pair to its unit-energy constellation point.
pub fn qpsk_symbol(b0: u8, b1: u8) -> Complex64 {
    Complex64::new(
        (1.0 - 2.0 * f64::from(b0)) * INV_SQRT2,
        (1.0 - 2.0 * f64::from(b1)) * INV_SQRT2,
    )
}

/// Hard decision back to the bit pair.
pub fn qpsk_hard(sym: Complex64) -> (u8, u8) {
    (u8::from(sym.re < 0.0), u8::from(sym.im < 0.0))
}

/// Maps an even-length bit vector onto a symbol frame, two bits per symbol.
pub fn qpsk_map(bits: &[u8]) -> Result<SymbolFrame, Error> {
    if bits.len() % 2 != 0 {
        return Err(Error::config(format!(
            "QPSK needs an even bit count, got {}",
            bits.len()
        )));
    }
    let symbols = bits
        .chunks_exact(2)
        .map(|p| qpsk_symbol(p[0], p[1]))
        .collect();
    SymbolFrame::new(symbols)
}

/// Exact per-bit LLRs for QPSK over a complex Gaussian channel.
///
/// `y = h_eff*x + z` with `z` circularly symmetric of total (complex)
/// variance `noise_var`. Interference folded into `noise_var` is thereby
/// treated as Gaussian. Gray labelling makes the per-bit marginalization
/// exact in closed form.
pub fn qpsk_soft_demod(
    y: &[Complex64],
    h_eff: Complex64,
    noise_var: f64,
) -> Result<BitLlrFrame, Error> {
    if noise_var <= 0.0 {
        return Err(Error::NonPositiveVariance(noise_var));
    }
    let scale = 2.0 * std::f64::consts::SQRT_2 / noise_var;
    let mut llrs = Vec::with_capacity(2 * y.len());
    for &ym in y {
        let r = h_eff.conj() * ym;
        llrs.push((scale * r.re).clamp(-LLR_CLIP, LLR_CLIP));
        llrs.push((scale * r.im).clamp(-LLR_CLIP, LLR_CLIP));
    }
    Ok(BitLlrFrame::new(llrs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    #[test]
    fn map_anchor_point() {
        let s = qpsk_symbol(0, 0);
        assert_abs_diff_eq!(s.re, INV_SQRT2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.im, INV_SQRT2, epsilon = 1e-15);
    }

    #[test]
    fn four_distinct_unit_energy_points() {
        let pts = qpsk_points();
        for (i, a) in pts.iter().enumerate() {
            assert_abs_diff_eq!(a.norm_sqr(), 1.0, epsilon = 1e-12);
            for b in pts.iter().skip(i + 1) {
                assert!((a - b).norm() > 0.5);
            }
        }
    }

    #[test]
    fn unit_energy_over_random_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bits: Vec<u8> = (0..2048).map(|_| u8::from(rng.random::<bool>())).collect();
        let frame = qpsk_map(&bits).unwrap();
        let mean: f64 =
            frame.symbols().iter().map(|s| s.norm_sqr()).sum::<f64>() / frame.len() as f64;
        assert_abs_diff_eq!(mean, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn odd_bit_count_rejected() {
        assert!(qpsk_map(&[0, 1, 0]).is_err());
    }

    #[test]
    fn soft_demod_high_confidence() {
        let h = Complex64::new(1.0, 0.0);
        let y = [h * qpsk_symbol(0, 0)];
        let llrs = qpsk_soft_demod(&y, h, 1e-4).unwrap();
        assert!(llrs.as_slice()[0] >= LLR_CLIP - 1e-12);
        assert!(llrs.as_slice()[1] >= LLR_CLIP - 1e-12);
    }

    #[test]
    fn soft_demod_zero_observation_is_neutral() {
        let llrs = qpsk_soft_demod(&[Complex64::new(0.0, 0.0)], Complex64::new(1.0, 0.5), 0.7)
            .unwrap();
        assert_eq!(llrs.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn soft_demod_rejects_bad_variance() {
        assert!(qpsk_soft_demod(&[], Complex64::new(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn hard_decisions_invert_map_at_zero_noise() {
        let h = Complex64::new(0.3, -1.1);
        for b0 in 0..2u8 {
            for b1 in 0..2u8 {
                let y = [h * qpsk_symbol(b0, b1)];
                let llrs = qpsk_soft_demod(&y, h, 0.31).unwrap();
                assert_eq!(u8::from(llrs.as_slice()[0] < 0.0), b0);
                assert_eq!(u8::from(llrs.as_slice()[1] < 0.0), b1);
            }
        }
    }

    #[test]
    fn soft_demod_posteriors_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let h = random_complex(&mut rng);
            let y = [random_complex(&mut rng)];
            let llrs = qpsk_soft_demod(&y, h, 0.8).unwrap();
            let p0 = 1.0 / (1.0 + (-llrs.as_slice()[0]).exp());
            let p1 = 1.0 / (1.0 + (-llrs.as_slice()[1]).exp());
            let total: f64 = [
                p0 * p1,
                p0 * (1.0 - p1),
                (1.0 - p0) * p1,
                (1.0 - p0) * (1.0 - p1),
            ]
            .iter()
            .sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn real_decomposition_identity_channel() {
        let m = to_real_matrix(Complex64::new(1.0, 0.0), 1.0);
        assert_eq!(m.0, [[1.0, 0.0], [0.0, 1.0]]);
        let x = to_real(Complex64::new(1.0, 1.0));
        assert_eq!(x.0, [1.0, 1.0]);
    }

    #[test]
    fn real_decomposition_matches_complex_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let h = random_complex(&mut rng);
            let x = random_complex(&mut rng);
            let z = random_complex(&mut rng);
            let p = 1.7f64;
            let y = p.sqrt() * h * x + z;
            let y_real = to_real_matrix(h, p).mul_vec(to_real(x));
            assert_abs_diff_eq!(y_real.0[0] + z.re, y.re, epsilon = 1e-12);
            assert_abs_diff_eq!(y_real.0[1] + z.im, y.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn real_round_trip_and_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let x = random_complex(&mut rng);
            let v = to_real(x);
            assert_eq!(to_complex(v), x);
            assert_abs_diff_eq!(v.norm_sq(), x.norm_sqr(), epsilon = 1e-12);
        }
    }

    #[test]
    fn real_matrix_rotation_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let h1 = random_complex(&mut rng);
            let h2 = random_complex(&mut rng);
            let prod = to_real_matrix(h1 * h2, 1.0);
            let composed = to_real_matrix(h1, 1.0).mul_mat(&to_real_matrix(h2, 1.0));
            for i in 0..2 {
                for j in 0..2 {
                    assert_abs_diff_eq!(prod.0[i][j], composed.0[i][j], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn real_matrix_orthogonality() {
        let h = Complex64::new(-0.6, 2.2);
        let p = 2.5;
        let m = to_real_matrix(h, p);
        let gram = m.transpose().mul_mat(&m);
        let expect = p * h.norm_sqr();
        assert_abs_diff_eq!(gram.0[0][0], expect, epsilon = 1e-12);
        assert_abs_diff_eq!(gram.0[1][1], expect, epsilon = 1e-12);
        assert_abs_diff_eq!(gram.0[0][1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gram.0[1][0], 0.0, epsilon = 1e-12);
    }
}
