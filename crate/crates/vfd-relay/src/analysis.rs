//! Closed-form companion to the simulator: estimation-error variance of the
//! relay's MMSE filter, per-symbol selection probability, its self-consistent
//! average under inter-relay interference, and the resulting
//! diversity-multiplexing trade-off curves.
//!
//! The square deviation of a correctly decoded symbol is chi-squared with
//! two degrees of freedom once normalized by the scalar estimation-error
//! variance, which gives the selection probability in closed form. The
//! Monte-Carlo helpers in this module redraw that statistic through the same
//! weight/deviation routines the relay runs online, under the linear-Gaussian
//! model the law is derived for: channel gain fixed at the link average with
//! random phase, Gaussian symbol prior, Gaussian noise plus interference.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::db_to_linear;
use crate::modem::{to_real_matrix, RealSymbolPair, SYMBOL_COMPONENT_VARIANCE};
use crate::selector::{mmse_weight, square_deviation};
use crate::Error;

/// Default finite SNR at which asymptotic selection probabilities are
/// evaluated for DMT curves.
pub const DMT_EVAL_SNR_DB: f64 = 60.0;

/// Operating point of the closed-form expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryPoint {
    /// Per-component symbol variance (1/2 for unit-energy QPSK).
    pub sigma2_x: f64,
    /// Operative noise-plus-interference variance per real dimension.
    pub sigma2_z: f64,
    /// Average received S-R SNR, linear.
    pub snr_sr_linear: f64,
    /// Square-deviation threshold.
    pub epsilon: f64,
    /// S-R over R-R average SNR ratio; infinite when there is no
    /// inter-relay interference.
    pub eta: f64,
    /// Frames per superframe (even).
    pub frames: usize,
}

impl TheoryPoint {
    /// Point for a given S-R link SNR and relative inter-relay variance,
    /// with the interference treated as Gaussian noise.
    pub fn from_link(snr_sr_db: f64, sigma2_ch: f64, epsilon: f64, frames: usize) -> Self {
        let snr_sr = db_to_linear(snr_sr_db);
        let eta = if sigma2_ch > 0.0 {
            1.0 / sigma2_ch
        } else {
            f64::INFINITY
        };
        TheoryPoint {
            sigma2_x: SYMBOL_COMPONENT_VARIANCE,
            sigma2_z: 0.5 * (1.0 + sigma2_ch * snr_sr),
            snr_sr_linear: snr_sr,
            epsilon,
            eta,
            frames,
        }
    }

    /// Same point with the inter-relay interference removed from the noise
    /// term (the co-scheduled symbol was punctured).
    pub fn interference_free(&self) -> TheoryPoint {
        TheoryPoint {
            sigma2_z: 0.5,
            ..*self
        }
    }
}

/// Scalar estimation-error variance of the relay's MMSE filter,
/// `sigma2_x * sigma2_z / (snr_sr * sigma2_x + sigma2_z)`.
pub fn error_covariance_scalar(point: &TheoryPoint) -> f64 {
    point.sigma2_x * point.sigma2_z / (point.snr_sr_linear * point.sigma2_x + point.sigma2_z)
}

/// Probability that a correctly decoded symbol passes the deviation test,
/// `1 - exp(-epsilon / (2 * sigma2_ce))`.
pub fn selection_probability(sigma2_ce: f64, epsilon: f64) -> f64 {
    if epsilon == 0.0 {
        return 0.0;
    }
    1.0 - (-epsilon / (2.0 * sigma2_ce)).exp()
}

/// Self-consistent per-symbol selection probability when a punctured symbol
/// at one relay removes the interference seen by the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureSelection {
    /// Fixed point of the two-state mixture.
    pub p_c: f64,
    /// Selection probability with interference present.
    pub p_interference: f64,
    /// Selection probability with the interference removed.
    pub p_interference_free: f64,
    /// Fixed-point iterations used.
    pub iterations: usize,
}

/// Solves `p = p * p_int + (1 - p) * p_free` by iteration from the
/// interference state, to 1e-9.
pub fn mixture_selection_probability(point: &TheoryPoint) -> MixtureSelection {
    let p_int = selection_probability(error_covariance_scalar(point), point.epsilon);
    let free = point.interference_free();
    let p_free = selection_probability(error_covariance_scalar(&free), free.epsilon);
    let mut p_c = p_int;
    let mut iterations = 0;
    loop {
        let next = p_c * p_int + (1.0 - p_c) * p_free;
        iterations += 1;
        let done = (next - p_c).abs() < 1e-9 || iterations >= 10_000;
        p_c = next;
        if done {
            break;
        }
    }
    MixtureSelection {
        p_c,
        p_interference: p_int,
        p_interference_free: p_free,
        iterations,
    }
}

/// Average selection probability over a grid of per-symbol operating points,
/// each refined by the interference mixture.
pub fn average_selection_probability(points: &[TheoryPoint]) -> Result<f64, Error> {
    if points.is_empty() {
        return Err(Error::config("selection-probability grid is empty"));
    }
    Ok(points
        .iter()
        .map(|p| mixture_selection_probability(p).p_c)
        .sum::<f64>()
        / points.len() as f64)
}

/// Selection probability the DMT chain uses: the single-state closed form
/// evaluated at a large finite SNR with the S-R/R-R ratio held fixed.
///
/// `interference_free` switches to the reading under which the interference
/// variance is excluded asymptotically; see the module docs of the flags in
/// the CLI for when that matters.
pub fn asymptotic_selection_probability(
    epsilon: f64,
    eta: f64,
    interference_free: bool,
    eval_snr_db: f64,
) -> f64 {
    let snr = db_to_linear(eval_snr_db);
    let sigma2_z = if interference_free {
        0.5
    } else {
        0.5 * (1.0 + snr / eta)
    };
    let point = TheoryPoint {
        sigma2_x: SYMBOL_COMPONENT_VARIANCE,
        sigma2_z,
        snr_sr_linear: snr,
        epsilon,
        eta,
        frames: 20,
    };
    selection_probability(error_covariance_scalar(&point), epsilon)
}

/// One diversity-multiplexing trade-off curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DmtCurve {
    pub multiplexing: Vec<f64>,
    pub diversity: Vec<f64>,
    pub frames: usize,
    pub p_c: f64,
}

/// Diversity at multiplexing gain `r`:
/// `(1 - (L+1)r/L)^+ + (1 - (L+1)r/(L*P_C))^+`.
pub fn dmt_point(frames: usize, p_c: f64, r: f64) -> f64 {
    let l = frames as f64;
    let first = (1.0 - (l + 1.0) * r / l).max(0.0);
    let second = (1.0 - (l + 1.0) * r / (l * p_c)).max(0.0);
    first + second
}

/// Multiplexing gain at which the selection-limited term vanishes,
/// `L * P_C / (L + 1)`.
pub fn second_breakpoint(frames: usize, p_c: f64) -> f64 {
    frames as f64 * p_c / (frames as f64 + 1.0)
}

/// Evaluates the trade-off on a grid. The perfect-relay bound is the
/// `p_c = 1` special case.
pub fn dmt_curve(frames: usize, p_c: f64, r_grid: &[f64]) -> Result<DmtCurve, Error> {
    if frames < 2 || frames % 2 != 0 {
        return Err(Error::config(format!(
            "frames must be even and at least 2, got {frames}"
        )));
    }
    if !(0.0..=1.0).contains(&p_c) || p_c == 0.0 {
        return Err(Error::config(format!("p_c must lie in (0, 1], got {p_c}")));
    }
    if r_grid.is_empty() || r_grid.iter().any(|&r| !(0.0..=1.0).contains(&r)) {
        return Err(Error::config("multiplexing grid must be nonempty within [0, 1]"));
    }
    Ok(DmtCurve {
        multiplexing: r_grid.to_vec(),
        diversity: r_grid.iter().map(|&r| dmt_point(frames, p_c, r)).collect(),
        frames,
        p_c,
    })
}

/// Draws square deviations for the true-symbol hypothesis under the
/// linear-Gaussian estimation model, through the online weight and deviation
/// routines.
pub fn sample_square_deviations(point: &TheoryPoint, samples: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gain = point.snr_sr_linear.sqrt();
    let sx = point.sigma2_x.sqrt();
    let sz = point.sigma2_z.sqrt();
    (0..samples)
        .map(|_| {
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            let h = gain * Complex64::new(phase.cos(), phase.sin());
            let hm = to_real_matrix(h, 1.0);
            let w = mmse_weight(&hm, point.sigma2_x, point.sigma2_z)
                .expect("positive variances");
            let x = RealSymbolPair([
                sx * rng.sample::<f64, _>(StandardNormal),
                sx * rng.sample::<f64, _>(StandardNormal),
            ]);
            let hx = hm.mul_vec(x);
            let y = RealSymbolPair([
                hx.0[0] + sz * rng.sample::<f64, _>(StandardNormal),
                hx.0[1] + sz * rng.sample::<f64, _>(StandardNormal),
            ]);
            square_deviation(&w, y, x)
        })
        .collect()
}

/// Monte-Carlo selection rate at one operating point.
pub fn monte_carlo_selection_rate(point: &TheoryPoint, samples: usize, seed: u64) -> f64 {
    let hits = sample_square_deviations(point, samples, seed)
        .into_iter()
        .filter(|&d| point.epsilon >= d)
        .count();
    hits as f64 / samples as f64
}

/// Monte-Carlo rate with the interference state redrawn per symbol at the
/// mixture's steady-state weight.
pub fn monte_carlo_mixture_selection_rate(point: &TheoryPoint, samples: usize, seed: u64) -> f64 {
    let fp = mixture_selection_probability(point);
    let free = point.interference_free();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for i in 0..samples {
        let state = if rng.random::<f64>() < fp.p_c {
            point
        } else {
            &free
        };
        let d = sample_square_deviations(state, 1, seed ^ (i as u64).wrapping_mul(0x9e37_79b9))
            [0];
        if point.epsilon >= d {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

/// Kolmogorov-Smirnov distance between normalized deviations
/// (`delta / sigma2_ce`) and the 2-degree chi-squared CDF `1 - e^{-x/2}`.
pub fn ks_distance_chi2(normalized: &mut [f64]) -> f64 {
    normalized.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = normalized.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in normalized.iter().enumerate() {
        let cdf = 1.0 - (-x / 2.0).exp();
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        worst = worst.max((cdf - lo).abs()).max((cdf - hi).abs());
    }
    worst
}
