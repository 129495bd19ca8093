//! Block-fading channel model: link budgets, per-slot fading draws, and the
//! slot-level superposition seen by the relays and the destination.
//!
//! Noise power is normalized to 1 per complex dimension and every node
//! transmits with the same power `P`; per-link average SNR is realized by
//! scaling the channel variance of that link. The S-D link is the reference
//! (unit channel variance at `P = 1`), so the "total average links SNR" used
//! as the plot abscissa - the power spent by the two simultaneously active
//! transmitters over noise, divided by two - coincides with the average S-D
//! SNR.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::Error;

/// Average-SNR description of the four-node network geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Average S-D SNR in dB; also the sweep abscissa.
    pub rho_sd_db: f64,
    /// S-R offset in dB relative to the S-D link.
    pub offset_sr_db: f64,
    /// R-D offset in dB relative to the S-D link.
    pub offset_rd_db: f64,
    /// Inter-relay channel variance relative to the S-R link; 0 disables
    /// inter-relay interference and 1 makes both links equally strong.
    pub sigma2_ch: f64,
    /// Per-node transmit power `P`, linear, with unit noise variance.
    pub tx_power: f64,
}

/// Offsets for the reference geometry with both relays halfway between
/// source and destination.
pub const DEFAULT_OFFSET_SR_DB: f64 = 10.6;
pub const DEFAULT_OFFSET_RD_DB: f64 = 4.4;

impl LinkBudget {
    /// Budget for the reference geometry at a given S-D SNR.
    pub fn new(rho_sd_db: f64, sigma2_ch: f64) -> Self {
        LinkBudget {
            rho_sd_db,
            offset_sr_db: DEFAULT_OFFSET_SR_DB,
            offset_rd_db: DEFAULT_OFFSET_RD_DB,
            sigma2_ch,
            tx_power: 1.0,
        }
    }
}

/// Per-link average SNRs in linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSnrTable {
    pub snr_sd: f64,
    pub snr_sr: f64,
    pub snr_rd: f64,
    /// Average SNR of the inter-relay link, `sigma2_ch * snr_sr`.
    pub snr_rr: f64,
    /// Sweep abscissa in dB.
    pub total_avg_db: f64,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Expands a budget into per-link average SNRs.
pub fn link_snr_table(budget: &LinkBudget) -> LinkSnrTable {
    let snr_sd = db_to_linear(budget.rho_sd_db);
    let snr_sr = db_to_linear(budget.rho_sd_db + budget.offset_sr_db);
    let snr_rd = db_to_linear(budget.rho_sd_db + budget.offset_rd_db);
    let snr_rr = budget.sigma2_ch * snr_sr;
    // Two active transmitters at power P over unit noise, divided by two;
    // equals the S-D average SNR under the unit-variance S-D reference.
    let p_node = snr_sd * budget.tx_power / budget.tx_power;
    let total_avg_db = linear_to_db((p_node + p_node) / 2.0);
    LinkSnrTable {
        snr_sd,
        snr_sr,
        snr_rd,
        snr_rr,
        total_avg_db,
    }
}

/// One of the two alternating relays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayId {
    R1,
    R2,
}

impl RelayId {
    pub fn other(self) -> RelayId {
        match self {
            RelayId::R1 => RelayId::R2,
            RelayId::R2 => RelayId::R1,
        }
    }
}

/// Complex channel coefficients for one time slot. Coefficients are constant
/// within the slot and drawn independently across slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingRealization {
    pub h_sr1: Complex64,
    pub h_sr2: Complex64,
    pub h_rr: Complex64,
    pub h_sd: Complex64,
    pub h_r1d: Complex64,
    pub h_r2d: Complex64,
}

impl FadingRealization {
    pub fn h_sr(&self, relay: RelayId) -> Complex64 {
        match relay {
            RelayId::R1 => self.h_sr1,
            RelayId::R2 => self.h_sr2,
        }
    }

    pub fn h_rd(&self, relay: RelayId) -> Complex64 {
        match relay {
            RelayId::R1 => self.h_r1d,
            RelayId::R2 => self.h_r2d,
        }
    }
}

/// One frame of transmit symbols: unit-energy constellation points, with
/// punctured positions carried as exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrame {
    symbols: Vec<Complex64>,
}

impl SymbolFrame {
    /// Wraps a symbol vector, enforcing `|x| in {0, 1}` up to 1e-12.
    pub fn new(symbols: Vec<Complex64>) -> Result<Self, Error> {
        for (i, s) in symbols.iter().enumerate() {
            let m = s.norm();
            if (m - 1.0).abs() > 1e-12 && m > 1e-12 {
                return Err(Error::config(format!(
                    "symbol {i} has magnitude {m}, expected 0 or 1"
                )));
            }
        }
        Ok(SymbolFrame { symbols })
    }

    /// All-zero frame, used both for punctured-out frames and for the slots
    /// in which a node is silent.
    pub fn zero(len: usize) -> Self {
        SymbolFrame {
            symbols: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn is_punctured(&self, idx: usize) -> bool {
        self.symbols[idx] == Complex64::new(0.0, 0.0)
    }

    /// Total symbol energy of the frame.
    pub fn energy(&self) -> f64 {
        self.symbols.iter().map(|s| s.norm_sqr()).sum()
    }
}

fn complex_gaussian<R: Rng>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Draws one slot of fading coefficients; each link is zero-mean complex
/// Gaussian with variance `snr_link / P`.
pub fn draw_fading<R: Rng>(budget: &LinkBudget, rng: &mut R) -> FadingRealization {
    let table = link_snr_table(budget);
    let p = budget.tx_power;
    FadingRealization {
        h_sr1: complex_gaussian(rng, table.snr_sr / p),
        h_sr2: complex_gaussian(rng, table.snr_sr / p),
        h_rr: complex_gaussian(rng, table.snr_rr / p),
        h_sd: complex_gaussian(rng, table.snr_sd / p),
        h_r1d: complex_gaussian(rng, table.snr_rd / p),
        h_r2d: complex_gaussian(rng, table.snr_rd / p),
    }
}

/// Draws one frame of unit-variance complex Gaussian noise.
pub fn draw_noise<R: Rng>(len: usize, rng: &mut R) -> Vec<Complex64> {
    (0..len).map(|_| complex_gaussian(rng, 1.0)).collect()
}

/// Noise-free two-transmitter superposition,
/// `sqrt(P)*h1*x1 + sqrt(P)*h2*x2` per symbol.
pub fn superpose_frames(
    x1: &SymbolFrame,
    h1: Complex64,
    x2: &SymbolFrame,
    h2: Complex64,
    tx_power: f64,
) -> Result<Vec<Complex64>, Error> {
    if x1.len() != x2.len() {
        return Err(Error::FrameLength {
            expected: x1.len(),
            got: x2.len(),
        });
    }
    let s = tx_power.sqrt();
    Ok(x1
        .symbols()
        .iter()
        .zip(x2.symbols())
        .map(|(&a, &b)| s * h1 * a + s * h2 * b)
        .collect())
}

/// Received frame at a relay: the source frame plus the other relay's
/// transmission over the inter-relay link plus unit-variance noise.
pub fn relay_receive<R: Rng>(
    x_src: &SymbolFrame,
    x_other_relay: &SymbolFrame,
    fading: &FadingRealization,
    receiver: RelayId,
    budget: &LinkBudget,
    rng: &mut R,
) -> Result<Vec<Complex64>, Error> {
    let mut y = superpose_frames(
        x_src,
        fading.h_sr(receiver),
        x_other_relay,
        fading.h_rr,
        budget.tx_power,
    )?;
    for ym in &mut y {
        *ym += complex_gaussian(rng, 1.0);
    }
    Ok(y)
}

/// Received frame at the destination: the source frame plus the transmitting
/// relay's frame plus unit-variance noise. Silent nodes are represented by
/// all-zero frames.
pub fn destination_receive<R: Rng>(
    x_src: &SymbolFrame,
    x_relay: &SymbolFrame,
    fading: &FadingRealization,
    tx_relay: RelayId,
    budget: &LinkBudget,
    rng: &mut R,
) -> Result<Vec<Complex64>, Error> {
    let mut y = superpose_frames(
        x_src,
        fading.h_sd,
        x_relay,
        fading.h_rd(tx_relay),
        budget.tx_power,
    )?;
    for ym in &mut y {
        *ym += complex_gaussian(rng, 1.0);
    }
    Ok(y)
}
