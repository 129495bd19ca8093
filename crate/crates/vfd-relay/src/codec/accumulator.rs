//! Rate-1 doped accumulator inner code and its log-MAP soft-in/soft-out
//! pass over the unterminated 2-state trellis.

use super::{bit_sign, maxstar, NEG_INF};

/// Accumulates `a_k = a_{k-1} ^ c_k` (with `a_{-1} = 0`) and emits the
/// accumulator output, except that every `doping_rate`-th position emits the
/// raw input bit instead. `doping_rate = 1` is the identity map.
pub fn doped_accumulate(bits: &[u8], doping_rate: usize) -> Vec<u8> {
    assert!(doping_rate >= 1, "doping rate must be at least 1");
    let mut acc = 0u8;
    bits.iter()
        .enumerate()
        .map(|(k, &c)| {
            acc ^= c;
            if (k + 1) % doping_rate == 0 {
                c
            } else {
                acc
            }
        })
        .collect()
}

/// Log-MAP pass returning extrinsic LLRs on the input bits.
///
/// `channel_llrs` observe the emitted bits (input bits at doped positions,
/// accumulator state elsewhere); `input_priors` come from the outer decoder.
pub(crate) fn siso(channel_llrs: &[f64], input_priors: &[f64], doping_rate: usize) -> Vec<f64> {
    let n = channel_llrs.len();
    debug_assert_eq!(input_priors.len(), n);

    let mut alpha = vec![[NEG_INF; 2]; n + 1];
    alpha[0][0] = 0.0;
    for k in 0..n {
        let lp = 0.5 * input_priors[k];
        let lc = 0.5 * channel_llrs[k];
        let doped = (k + 1) % doping_rate == 0;
        let mut next = [NEG_INF; 2];
        for s in 0..2usize {
            let a = alpha[k][s];
            if a <= NEG_INF {
                continue;
            }
            for c in 0..2usize {
                let sp = s ^ c;
                let emitted = if doped { c } else { sp };
                let g = bit_sign(c) * lp + bit_sign(emitted) * lc;
                next[sp] = maxstar(next[sp], a + g);
            }
        }
        let m = next[0].max(next[1]);
        alpha[k + 1] = [next[0] - m, next[1] - m];
    }

    let mut beta = [0.0, 0.0];
    let mut extrinsic = vec![0.0; n];
    for k in (0..n).rev() {
        let lp = 0.5 * input_priors[k];
        let lc = 0.5 * channel_llrs[k];
        let doped = (k + 1) % doping_rate == 0;
        let mut by_input = [NEG_INF; 2];
        let mut prev = [NEG_INF; 2];
        for s in 0..2usize {
            let a = alpha[k][s];
            for c in 0..2usize {
                let sp = s ^ c;
                let emitted = if doped { c } else { sp };
                let g = bit_sign(c) * lp + bit_sign(emitted) * lc;
                if a > NEG_INF {
                    by_input[c] = maxstar(by_input[c], a + g + beta[sp]);
                }
                prev[s] = maxstar(prev[s], g + beta[sp]);
            }
        }
        extrinsic[k] = by_input[0] - by_input[1] - input_priors[k];
        let m = prev[0].max(prev[1]);
        beta = [prev[0] - m, prev[1] - m];
    }
    extrinsic
}
