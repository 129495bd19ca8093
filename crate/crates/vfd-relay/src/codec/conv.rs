//! Memory-1 non-recursive non-systematic outer convolutional code with
//! generators (3,2) octal, and its log-MAP soft-in/soft-out pass.
//!
//! With the MSB tapping the current input, octal 3 produces `u_k ^ u_{k-1}`
//! and octal 2 reproduces `u_k`. The trellis state is the previous input bit
//! and one tail step drives it back to zero.

use super::{bit_sign, maxstar, NEG_INF};

/// Rate-1/2 encode with zero-state termination; output pairs are
/// `(u_k ^ u_{k-1}, u_k)` for each input bit plus one tail step.
pub fn outer_conv_encode(info_bits: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(2 * (info_bits.len() + 1));
    let mut state = 0u8;
    for &u in info_bits.iter().chain(std::iter::once(&0)) {
        out.push(u ^ state);
        out.push(u);
        state = u;
    }
    out
}

/// Soft outputs of one outer pass.
pub(crate) struct OuterSisoOutput {
    /// Extrinsic LLRs on the coded bits, length `2 * (num_info + 1)`.
    pub coded_extrinsic: Vec<f64>,
    /// A-posteriori LLRs on the information bits.
    pub info_llrs: Vec<f64>,
}

/// Log-MAP pass over the terminated trellis given coded-bit prior LLRs.
pub(crate) fn siso(coded_priors: &[f64], num_info: usize) -> OuterSisoOutput {
    let steps = num_info + 1;
    debug_assert_eq!(coded_priors.len(), 2 * steps);

    // Forward recursion; state is the previous input bit.
    let mut alpha = vec![[NEG_INF; 2]; steps + 1];
    alpha[0][0] = 0.0;
    for k in 0..steps {
        let l1 = 0.5 * coded_priors[2 * k];
        let l2 = 0.5 * coded_priors[2 * k + 1];
        let last_input = if k == steps - 1 { 0 } else { 1 };
        let mut next = [NEG_INF; 2];
        for s in 0..2usize {
            let a = alpha[k][s];
            if a <= NEG_INF {
                continue;
            }
            for u in 0..=last_input {
                let g = bit_sign(u ^ s) * l1 + bit_sign(u) * l2;
                next[u] = maxstar(next[u], a + g);
            }
        }
        let m = next[0].max(next[1]);
        alpha[k + 1] = [next[0] - m, next[1] - m];
    }

    // Backward recursion with output accumulation. The termination forces
    // the final state (and the final input) to zero.
    let mut beta = [0.0, NEG_INF];
    let mut coded_extrinsic = vec![0.0; 2 * steps];
    let mut info_llrs = vec![0.0; num_info];
    for k in (0..steps).rev() {
        let l1 = 0.5 * coded_priors[2 * k];
        let l2 = 0.5 * coded_priors[2 * k + 1];
        let last_input = if k == steps - 1 { 0 } else { 1 };
        // Bit groupings: first output is u^s, second output is u itself.
        let mut first = [NEG_INF; 2];
        let mut second = [NEG_INF; 2];
        for s in 0..2usize {
            let a = alpha[k][s];
            if a <= NEG_INF {
                continue;
            }
            for u in 0..=last_input {
                let y1 = u ^ s;
                let g = bit_sign(y1) * l1 + bit_sign(u) * l2;
                let metric = a + g + beta[u];
                first[y1] = maxstar(first[y1], metric);
                second[u] = maxstar(second[u], metric);
            }
        }
        let posterior_first = first[0] - first[1];
        let posterior_second = second[0] - second[1];
        coded_extrinsic[2 * k] = posterior_first - coded_priors[2 * k];
        coded_extrinsic[2 * k + 1] = posterior_second - coded_priors[2 * k + 1];
        if k < num_info {
            info_llrs[k] = posterior_second;
        }
        let mut prev = [NEG_INF; 2];
        for s in 0..2usize {
            for u in 0..=last_input {
                let g = bit_sign(u ^ s) * l1 + bit_sign(u) * l2;
                prev[s] = maxstar(prev[s], g + beta[u]);
            }
        }
        let m = prev[0].max(prev[1]);
        beta = [prev[0] - m, prev[1] - m];
    }

    OuterSisoOutput {
        coded_extrinsic,
        info_llrs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_input_encodes_to_all_zero() {
        assert_eq!(outer_conv_encode(&[0, 0, 0, 0]), vec![0u8; 10]);
    }

    #[test]
    fn single_one_traces_the_documented_trellis() {
        // One info bit plus termination: pairs (1,1) then (1,0).
        assert_eq!(outer_conv_encode(&[1]), vec![1, 1, 1, 0]);
    }

    #[test]
    fn impulse_response_shifts_linearly() {
        let a = outer_conv_encode(&[1, 0, 0]);
        let b = outer_conv_encode(&[0, 1, 0]);
        assert_eq!(a, vec![1, 1, 1, 0, 0, 0, 0, 0]);
        assert_eq!(b, vec![0, 0, 1, 1, 1, 0, 0, 0]);
    }

    #[test]
    fn siso_recovers_clean_codeword() {
        let info = [1u8, 0, 1, 1, 0, 0, 1];
        let coded = outer_conv_encode(&info);
        let priors: Vec<f64> = coded.iter().map(|&b| bit_sign(b as usize) * 20.0).collect();
        let out = siso(&priors, info.len());
        for (k, &bit) in info.iter().enumerate() {
            assert!(
                (out.info_llrs[k] > 0.0) == (bit == 0),
                "bit {k}: llr {} for bit {bit}",
                out.info_llrs[k]
            );
        }
    }

    #[test]
    fn siso_termination_pins_tail_second_bit_to_zero() {
        let info = [1u8, 1, 0, 1];
        let coded = outer_conv_encode(&info);
        let priors: Vec<f64> = coded.iter().map(|&b| bit_sign(b as usize) * 5.0).collect();
        let out = siso(&priors, info.len());
        let tail_second = out.coded_extrinsic[2 * info.len() + 1];
        assert!(
            tail_second > 1e6,
            "structural zero should have huge positive extrinsic, got {tail_second}"
        );
    }
}
