//! Symbol-level selection at the relay: MMSE-weighted square-deviation test
//! per symbol and the baseline forwarding policies.
//!
//! The relay filters each received symbol with the linear MMSE estimator for
//! the scalar model `y = sqrt(P)*h*x + z` (interference folded into `z` as
//! Gaussian noise), measures the squared distance between the filtered
//! observation and the re-encoded hard decision, and forwards the symbol only
//! when that deviation stays below a threshold. Rejected symbols are
//! transmitted with exactly zero energy.

use crate::channel::SymbolFrame;
use crate::modem::{RealChannelMatrix, RealSymbolPair};
use crate::Error;
use num_complex::Complex64;

/// Forwarding policy run by the relays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    /// Square-deviation test per symbol with threshold `epsilon`.
    SymbolSelective { epsilon: f64 },
    /// Forward the whole frame only when every information bit decoded
    /// correctly (genie comparison standing in for an ideal CRC).
    CrcGenie,
    /// Forward the whole frame, including its errors, when the fraction of
    /// erroneous re-encoded symbols stays below `tau`.
    FrameThreshold { tau: f64 },
    /// Error-free relay: always forward the true transmit frame.
    Perfect,
}

/// Policy plus the threshold scale it operates on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectorConfig {
    pub policy: Policy,
}

impl SelectorConfig {
    pub fn validate(&self) -> Result<(), Error> {
        match self.policy {
            Policy::SymbolSelective { epsilon } if epsilon < 0.0 => Err(Error::config(
                format!("epsilon must be nonnegative, got {epsilon}"),
            )),
            Policy::FrameThreshold { tau } if !(0.0..=1.0).contains(&tau) => Err(Error::config(
                format!("tau must lie in [0, 1], got {tau}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Per-symbol forwarding decisions; `true` means forward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionMask {
    flags: Vec<bool>,
}

impl SelectionMask {
    pub fn all(value: bool, len: usize) -> Self {
        SelectionMask {
            flags: vec![value; len],
        }
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.flags
    }

    pub fn selected_count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }
}

/// Linear MMSE weight for the real-valued scalar channel,
/// `W = sigma2_x * H^T * (sigma2_x * H H^T + sigma2_z * I)^-1`.
///
/// `H H^T` is a scalar matrix, so the bracket inverts in closed form.
/// Variances are per real dimension.
pub fn mmse_weight(
    h_real: &RealChannelMatrix,
    sigma2_x: f64,
    sigma2_z: f64,
) -> Result<RealChannelMatrix, Error> {
    if sigma2_x <= 0.0 {
        return Err(Error::NonPositiveVariance(sigma2_x));
    }
    if sigma2_z <= 0.0 {
        return Err(Error::NonPositiveVariance(sigma2_z));
    }
    let m = &h_real.0;
    let gain = m[0][0] * m[0][0] + m[1][0] * m[1][0];
    let scale = sigma2_x / (sigma2_x * gain + sigma2_z);
    Ok(h_real.transpose().scale(scale))
}

/// Squared deviation between the MMSE-filtered observation and the
/// re-encoded symbol.
pub fn square_deviation(
    weight: &RealChannelMatrix,
    y_real: RealSymbolPair,
    x_hat_real: RealSymbolPair,
) -> f64 {
    let filtered = weight.mul_vec(y_real);
    let d0 = filtered.0[0] - x_hat_real.0[0];
    let d1 = filtered.0[1] - x_hat_real.0[1];
    d0 * d0 + d1 * d1
}

/// Thresholds deviations into a mask; the boundary `epsilon == deviation`
/// selects the symbol.
pub fn select_mask(deviations: &[f64], epsilon: f64) -> SelectionMask {
    SelectionMask {
        flags: deviations.iter().map(|&d| epsilon >= d).collect(),
    }
}

/// Applies a mask to the re-encoded frame; rejected positions become exact
/// zeros.
pub fn build_relay_frame(x_hat: &SymbolFrame, mask: &SelectionMask) -> Result<SymbolFrame, Error> {
    if x_hat.len() != mask.len() {
        return Err(Error::FrameLength {
            expected: x_hat.len(),
            got: mask.len(),
        });
    }
    let symbols = x_hat
        .symbols()
        .iter()
        .zip(mask.as_slice())
        .map(|(&s, &keep)| if keep { s } else { Complex64::new(0.0, 0.0) })
        .collect();
    SymbolFrame::new(symbols)
}

/// Everything a forwarding policy may consult for one decoded frame.
#[derive(Debug, Clone, Copy)]
pub struct PolicyInputs<'a> {
    /// Information bits the source actually sent.
    pub true_bits: &'a [u8],
    /// The relay's hard decisions.
    pub decoded_bits: &'a [u8],
    /// Modulated frame the source actually sent.
    pub true_frame: &'a SymbolFrame,
    /// The relay's re-encoded and re-modulated decisions.
    pub reencoded_frame: &'a SymbolFrame,
    /// Square deviations per symbol.
    pub deviations: &'a [f64],
}

/// Produces the frame the relay will transmit in the next slot.
pub fn apply_policy(inputs: &PolicyInputs, config: &SelectorConfig) -> Result<SymbolFrame, Error> {
    config.validate()?;
    let m = inputs.reencoded_frame.len();
    match config.policy {
        Policy::Perfect => Ok(inputs.true_frame.clone()),
        Policy::CrcGenie => {
            if inputs.decoded_bits == inputs.true_bits {
                Ok(inputs.reencoded_frame.clone())
            } else {
                Ok(SymbolFrame::zero(m))
            }
        }
        Policy::FrameThreshold { tau } => {
            if inputs.true_frame.len() != m {
                return Err(Error::FrameLength {
                    expected: m,
                    got: inputs.true_frame.len(),
                });
            }
            let errors = inputs
                .reencoded_frame
                .symbols()
                .iter()
                .zip(inputs.true_frame.symbols())
                .filter(|(a, b)| {
                    crate::modem::qpsk_hard(**a) != crate::modem::qpsk_hard(**b)
                })
                .count();
            if (errors as f64) < tau * m as f64 {
                Ok(inputs.reencoded_frame.clone())
            } else {
                Ok(SymbolFrame::zero(m))
            }
        }
        Policy::SymbolSelective { epsilon } => {
            let mask = select_mask(inputs.deviations, epsilon);
            build_relay_frame(inputs.reencoded_frame, &mask)
        }
    }
}
