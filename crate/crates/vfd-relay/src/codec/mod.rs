//! Rate-1/2 serially concatenated convolutional code used by the source and
//! both relays: a memory-1 non-recursive non-systematic outer code with
//! generators (3,2) in octal, a seeded pseudo-random interleaver, and a
//! rate-1 doped accumulator as the inner code.
//!
//! Decoding iterates full log-MAP soft-in/soft-out passes over the two
//! 2-state trellises, exchanging extrinsic information on the coded bits.
//! Fixed conventions:
//! - generator bit order: the most significant bit taps the current input,
//!   so octal 3 is `1 + D` and octal 2 is the current input;
//! - doping: every `doping_rate`-th accumulator output is replaced by the
//!   raw input bit;
//! - LLR sign: positive means bit `0`; extrinsics and posteriors are clipped
//!   to +/-50;
//! - the outer trellis is terminated to the zero state with one tail bit,
//!   the 2-state accumulator is left unterminated.

mod accumulator;
mod conv;
mod interleaver;

pub use accumulator::doped_accumulate;
pub use conv::outer_conv_encode;
pub use interleaver::Interleaver;

use crate::modem::LLR_CLIP;
use crate::Error;

/// Sentinel for impossible trellis paths; large enough to never win a
/// comparison, small enough to keep arithmetic finite.
pub(crate) const NEG_INF: f64 = -1e30;

/// Jacobian logarithm `ln(e^a + e^b)` used by the log-MAP recursions.
#[inline(always)]
pub(crate) fn maxstar(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let d = hi - lo;
    if d > 40.0 {
        hi
    } else {
        hi + (-d).exp().ln_1p()
    }
}

#[inline(always)]
pub(crate) fn bit_sign(b: usize) -> f64 {
    1.0 - 2.0 * b as f64
}

/// Parameters of the concatenated code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecSpec {
    /// Information bits per frame.
    pub info_bits_per_frame: usize,
    /// Every `doping_rate`-th inner output bit is the systematic bit.
    pub doping_rate: usize,
    /// Seed of the coded-bit interleaver.
    pub interleaver_seed: u64,
    /// Number of inner/outer extrinsic exchange rounds.
    pub decoder_iterations: usize,
}

impl Default for CodecSpec {
    fn default() -> Self {
        CodecSpec {
            info_bits_per_frame: 512,
            doping_rate: 2,
            interleaver_seed: 0x0dec_0de5,
            decoder_iterations: 8,
        }
    }
}

impl CodecSpec {
    /// Coded bits per frame: rate 1/2 plus one terminated tail step.
    pub fn coded_len(&self) -> usize {
        2 * (self.info_bits_per_frame + 1)
    }

    /// QPSK symbols per frame.
    pub fn symbols_per_frame(&self) -> usize {
        self.coded_len() / 2
    }
}

/// Per-coded-bit log-likelihood ratios for one frame, clipped to +/-50.
#[derive(Debug, Clone, PartialEq)]
pub struct BitLlrFrame {
    llrs: Vec<f64>,
}

impl BitLlrFrame {
    pub fn new(mut llrs: Vec<f64>) -> Self {
        for l in &mut llrs {
            *l = l.clamp(-LLR_CLIP, LLR_CLIP);
        }
        BitLlrFrame { llrs }
    }

    pub fn len(&self) -> usize {
        self.llrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llrs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.llrs
    }

    /// Element-wise sum of two observations of the same bits.
    pub fn combine(&self, other: &BitLlrFrame) -> Result<BitLlrFrame, Error> {
        if self.len() != other.len() {
            return Err(Error::FrameLength {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(BitLlrFrame::new(
            self.llrs
                .iter()
                .zip(&other.llrs)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }
}

/// Outcome of one iterative decoding run.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// A-posteriori LLRs on the information bits.
    pub info_llrs: Vec<f64>,
    /// Hard decisions; ties resolve to bit 0.
    pub info_bits: Vec<u8>,
}

/// Encoder/decoder pair with its frozen interleaver.
#[derive(Debug, Clone)]
pub struct Codec {
    spec: CodecSpec,
    interleaver: Interleaver,
}

impl Codec {
    pub fn new(spec: CodecSpec) -> Self {
        let interleaver = Interleaver::new(spec.coded_len(), spec.interleaver_seed);
        Codec { spec, interleaver }
    }

    pub fn spec(&self) -> &CodecSpec {
        &self.spec
    }

    pub fn interleaver(&self) -> &Interleaver {
        &self.interleaver
    }

    /// Full transmit pipeline: outer encode, interleave, doped accumulate.
    pub fn encode(&self, info_bits: &[u8]) -> Result<Vec<u8>, Error> {
        if info_bits.len() != self.spec.info_bits_per_frame {
            return Err(Error::FrameLength {
                expected: self.spec.info_bits_per_frame,
                got: info_bits.len(),
            });
        }
        let outer = conv::outer_conv_encode(info_bits);
        let interleaved = self.interleaver.interleave(&outer);
        Ok(accumulator::doped_accumulate(
            &interleaved,
            self.spec.doping_rate,
        ))
    }

    /// Re-encodes a relay's hard decisions through the identical pipeline.
    pub fn reencode(&self, hard_info_bits: &[u8]) -> Result<Vec<u8>, Error> {
        self.encode(hard_info_bits)
    }

    /// Iterative inner/outer log-MAP decoding of one frame of channel LLRs.
    ///
    /// Always returns a decision; all-zero input yields the all-zero frame.
    pub fn decode(&self, channel_llrs: &BitLlrFrame) -> Result<DecodeResult, Error> {
        let n = self.spec.coded_len();
        if channel_llrs.len() != n {
            return Err(Error::FrameLength {
                expected: n,
                got: channel_llrs.len(),
            });
        }
        let mut inner_prior = vec![0.0; n];
        let mut info_llrs = vec![0.0; self.spec.info_bits_per_frame];
        for _ in 0..self.spec.decoder_iterations {
            let mut inner_ext =
                accumulator::siso(channel_llrs.as_slice(), &inner_prior, self.spec.doping_rate);
            clip(&mut inner_ext);
            let outer_prior = self.interleaver.deinterleave(&inner_ext);
            let outer = conv::siso(&outer_prior, self.spec.info_bits_per_frame);
            info_llrs = outer.info_llrs;
            inner_prior = self.interleaver.interleave(&outer.coded_extrinsic);
            clip(&mut inner_prior);
        }
        clip(&mut info_llrs);
        let info_bits = info_llrs.iter().map(|&l| u8::from(l < 0.0)).collect();
        Ok(DecodeResult {
            info_llrs,
            info_bits,
        })
    }
}

fn clip(values: &mut [f64]) {
    for v in values {
        *v = v.clamp(-LLR_CLIP, LLR_CLIP);
    }
}

/// Channel LLRs for known bits at the clipping magnitude; handy for
/// noiseless round-trip checks.
pub fn saturated_llrs(bits: &[u8]) -> BitLlrFrame {
    BitLlrFrame::new(bits.iter().map(|&b| bit_sign(b as usize) * LLR_CLIP).collect())
}
