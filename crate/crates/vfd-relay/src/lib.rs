//! Link-level simulation and analysis of virtual full-duplex relaying with
//! symbol-level selective decode-and-forward.
//!
//! Two half-duplex relays alternate transmit and receive roles so that the
//! source can send a fresh frame in every time slot. Each relay decodes what
//! it heard, predicts per symbol whether its decision is correct using an
//! MMSE-weighted square-deviation test, and forwards only the symbols that
//! pass, transmitting the rest with zero energy. The destination runs a joint
//! per-symbol detector whose relay alphabet is augmented with the zero-energy
//! hypothesis, so punctured positions are identified blindly, then combines
//! the two received copies of every frame ahead of iterative decoding.
//!
//! Module map:
//! - [`channel`]: link budgets, block-fading draws, slot superposition
//! - [`modem`]: QPSK mapping, exact soft demapping, real-valued decomposition
//! - [`codec`]: serially concatenated convolutional code with a doped
//!   accumulator inner code and iterative log-MAP decoding
//! - [`selector`]: square-deviation symbol selection and the baseline
//!   forwarding policies
//! - [`destination`]: joint detection with the zero-energy hypothesis,
//!   frame splitting and combining
//! - [`analysis`]: closed-form selection probabilities and
//!   diversity-multiplexing trade-off curves
//! - [`engine`]: deterministic Monte-Carlo BER experiments
//! - [`cli`]: command-line front end emitting CSV results
//!
//! The `examples/` directory contains one runnable program per capability;
//! the thin `vfdsim` binary exposes the `run`, `dmt` and `theory`
//! subcommands.

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod codec;
pub mod destination;
pub mod engine;
pub mod modem;
pub mod selector;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two frames that must have equal length do not.
    #[error("frame length mismatch: expected {expected}, got {got}")]
    FrameLength { expected: usize, got: usize },
    /// A variance parameter that must be strictly positive is not.
    #[error("variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    /// A configuration value violates its documented constraints.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Two slot detections that do not belong to the same frame were combined.
    #[error("slot mismatch: source copy from slot {source_slot}, relay copy from slot {relay_slot}")]
    SlotMismatch {
        source_slot: usize,
        relay_slot: usize,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    ConfigParse(#[from] serde_json::Error),
}

impl Error {
    fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
