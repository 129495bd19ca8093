//! Destination receiver: per-symbol joint detection over the source symbol
//! and an augmented relay alphabet that includes the zero-energy symbol,
//! followed by frame splitting, LLR combining, and decoding.
//!
//! Every received slot superposes at most two frames. Detecting each slot
//! jointly and splitting the result therefore loses nothing, identifies
//! punctured relay positions blindly through the zero-energy hypothesis, and
//! leaves one soft copy of each frame from its source slot and one from its
//! relay slot; the two are combined by plain LLR addition before decoding.

use num_complex::Complex64;

use crate::codec::{BitLlrFrame, Codec};
use crate::modem::{qpsk_points, LLR_CLIP};
use crate::Error;

/// Constellation size of the underlying modulation.
pub const Q: usize = 4;

/// Prior over the augmented relay alphabet: the zero-energy symbol takes
/// `p_zero`, each constellation point `(1 - p_zero) / Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentedHypothesisSet {
    pub p_zero: f64,
}

impl AugmentedHypothesisSet {
    pub fn new(p_zero: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&p_zero) {
            return Err(Error::config(format!(
                "p_zero must lie in [0, 1], got {p_zero}"
            )));
        }
        Ok(AugmentedHypothesisSet { p_zero })
    }

    /// Uninformative prior over the Q+1 hypotheses.
    pub fn uniform() -> Self {
        AugmentedHypothesisSet {
            p_zero: 1.0 / (Q as f64 + 1.0),
        }
    }

    /// Degenerate prior for slots without any relay transmission.
    pub fn no_relay() -> Self {
        AugmentedHypothesisSet { p_zero: 1.0 }
    }

    /// Degenerate prior for an error-free, never-puncturing relay.
    pub fn always_forwards() -> Self {
        AugmentedHypothesisSet { p_zero: 0.0 }
    }
}

/// Soft outputs of one detected slot.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePosterior {
    /// 1-based slot index this detection belongs to.
    pub slot: usize,
    /// Bit LLRs for the frame the source sent in this slot; absent in the
    /// final slot, where only a relay transmits.
    pub source_llrs: Option<BitLlrFrame>,
    /// Bit LLRs for the frame relayed in this slot (the previous source
    /// frame). Identically zero when the zero-energy prior is 1.
    pub relay_llrs: BitLlrFrame,
    /// Posterior probability that the relay symbol was punctured.
    pub puncture_posterior: Vec<f64>,
}

impl FramePosterior {
    /// Hard puncture decisions at the 0.5 posterior threshold.
    pub fn puncture_flags(&self) -> Vec<bool> {
        self.puncture_posterior.iter().map(|&p| p > 0.5).collect()
    }
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Normalized posterior over the hypothesis grid for a single received
/// symbol: `Q` source symbols (or one silent placeholder) by `Q + 1` relay
/// hypotheses, the last column being zero energy. Row-major, relay index
/// fastest.
pub fn hypothesis_posteriors(
    y: Complex64,
    h_sd: Option<Complex64>,
    h_rd: Complex64,
    tx_power: f64,
    noise_var: f64,
    priors: &AugmentedHypothesisSet,
) -> Result<Vec<f64>, Error> {
    let masses = hypothesis_log_masses(y, h_sd, h_rd, tx_power, noise_var, priors)?;
    let total = log_sum_exp(&masses);
    Ok(masses.iter().map(|m| (m - total).exp()).collect())
}

fn hypothesis_log_masses(
    y: Complex64,
    h_sd: Option<Complex64>,
    h_rd: Complex64,
    tx_power: f64,
    noise_var: f64,
    priors: &AugmentedHypothesisSet,
) -> Result<Vec<f64>, Error> {
    if noise_var <= 0.0 {
        return Err(Error::NonPositiveVariance(noise_var));
    }
    let sqrt_p = tx_power.sqrt();
    let points = qpsk_points();
    let zero = Complex64::new(0.0, 0.0);
    let source_alphabet: Vec<Complex64> = match h_sd {
        Some(h) => points.iter().map(|&s| sqrt_p * h * s).collect(),
        None => vec![zero],
    };
    let log_prior_const = if priors.p_zero < 1.0 {
        ((1.0 - priors.p_zero) / Q as f64).ln()
    } else {
        f64::NEG_INFINITY
    };
    let log_prior_zero = if priors.p_zero > 0.0 {
        priors.p_zero.ln()
    } else {
        f64::NEG_INFINITY
    };
    let mut masses = Vec::with_capacity(source_alphabet.len() * (Q + 1));
    for &s1 in &source_alphabet {
        for (j, prior) in points
            .iter()
            .map(|&s| (sqrt_p * h_rd * s, log_prior_const))
            .chain(std::iter::once((zero, log_prior_zero)))
            .enumerate()
        {
            let (s2, log_prior) = prior;
            let _ = j;
            let mass = if log_prior == f64::NEG_INFINITY {
                f64::NEG_INFINITY
            } else {
                log_prior - (y - s1 - s2).norm_sqr() / noise_var
            };
            masses.push(mass);
        }
    }
    Ok(masses)
}

/// Joint per-symbol detection of one received slot.
///
/// `h_sd = None` marks the final slot, where no source frame is present and
/// only the relay copy is detected. Slots without a relay transmission are
/// signalled by the degenerate prior `p_zero = 1`.
pub fn joint_map_detect(
    y: &[Complex64],
    h_sd: Option<Complex64>,
    h_rd: Complex64,
    tx_power: f64,
    noise_var: f64,
    priors: &AugmentedHypothesisSet,
    slot: usize,
) -> Result<FramePosterior, Error> {
    let cols = Q + 1;
    let mut source_llrs = h_sd.map(|_| Vec::with_capacity(2 * y.len()));
    let mut relay_llrs = Vec::with_capacity(2 * y.len());
    let mut puncture_posterior = Vec::with_capacity(y.len());
    let half = 0.5f64.ln();

    for &ym in y {
        let masses = hypothesis_log_masses(ym, h_sd, h_rd, tx_power, noise_var, priors)?;
        let rows = masses.len() / cols;
        let total = log_sum_exp(&masses);

        // Source-copy bit LLRs: marginalize the relay hypothesis away.
        if let Some(llrs) = source_llrs.as_mut() {
            for bit in 0..2 {
                let mut groups = [Vec::with_capacity(masses.len() / 2), Vec::with_capacity(masses.len() / 2)];
                for (idx, &mass) in masses.iter().enumerate() {
                    let s1 = idx / cols;
                    let b = (s1 >> (1 - bit)) & 1;
                    groups[b].push(mass);
                }
                let llr = log_sum_exp(&groups[0]) - log_sum_exp(&groups[1]);
                llrs.push(llr.clamp(-LLR_CLIP, LLR_CLIP));
            }
        }

        // Relay-copy bit LLRs: the zero-energy hypothesis carries no bit
        // information, so its mass splits evenly between the two values.
        let zero_mass = log_sum_exp(
            &(0..rows)
                .map(|r| masses[r * cols + Q])
                .collect::<Vec<f64>>(),
        );
        for bit in 0..2 {
            let mut groups = [vec![half + zero_mass], vec![half + zero_mass]];
            for (idx, &mass) in masses.iter().enumerate() {
                let s2 = idx % cols;
                if s2 == Q {
                    continue;
                }
                let b = (s2 >> (1 - bit)) & 1;
                groups[b].push(mass);
            }
            let llr = log_sum_exp(&groups[0]) - log_sum_exp(&groups[1]);
            relay_llrs.push(llr.clamp(-LLR_CLIP, LLR_CLIP));
        }

        puncture_posterior.push((zero_mass - total).exp());
    }

    Ok(FramePosterior {
        slot,
        source_llrs: source_llrs.map(BitLlrFrame::new),
        relay_llrs: BitLlrFrame::new(relay_llrs),
        puncture_posterior,
    })
}

/// Combines the two soft copies of one frame: its source-slot detection and
/// the following slot's relay detection. Punctured positions contribute
/// their near-zero marginals without special casing.
pub fn split_and_combine(
    source_slot: &FramePosterior,
    relay_slot: &FramePosterior,
) -> Result<BitLlrFrame, Error> {
    if relay_slot.slot != source_slot.slot + 1 {
        return Err(Error::SlotMismatch {
            source_slot: source_slot.slot,
            relay_slot: relay_slot.slot,
        });
    }
    let source = source_slot
        .source_llrs
        .as_ref()
        .ok_or_else(|| Error::config(format!("slot {} carries no source frame", source_slot.slot)))?;
    source.combine(&relay_slot.relay_llrs)
}

/// Final decoding of a combined frame.
pub fn decode_destination_frame(combined: &BitLlrFrame, codec: &Codec) -> Result<Vec<u8>, Error> {
    Ok(codec.decode(combined)?.info_bits)
}
