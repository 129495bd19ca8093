//! Blind identification of zero-energy relay symbols by the augmented
//! hypothesis detector, as a function of the per-link SNR.
//!
//! Run: cargo run --release --example puncture_identification

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use vfd_relay::channel::db_to_linear;
use vfd_relay::destination::{joint_map_detect, AugmentedHypothesisSet};
use vfd_relay::modem::qpsk_symbol;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let puncture_rate = 0.2;
    let symbols = 20_000;
    println!("{symbols} symbols per point, {:.0}% punctured", 100.0 * puncture_rate);
    println!("snr_db  id_error_rate  missed_punctures  false_punctures");
    for snr_db in [10.0, 15.0, 20.0, 25.0, 30.0] {
        let snr = db_to_linear(snr_db);
        let scale = (snr / 2.0).sqrt();
        let mut missed = 0usize;
        let mut false_flags = 0usize;
        let mut punctured_total = 0usize;
        for _ in 0..symbols {
            let h_sd = Complex64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ) * scale;
            let h_rd = Complex64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ) * scale;
            let punctured = rng.random::<f64>() < puncture_rate;
            let s1 = qpsk_symbol(rng.random::<bool>().into(), rng.random::<bool>().into());
            let s2 = if punctured {
                Complex64::new(0.0, 0.0)
            } else {
                qpsk_symbol(rng.random::<bool>().into(), rng.random::<bool>().into())
            };
            let noise = Complex64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ) * (0.5f64).sqrt();
            let y = [h_sd * s1 + h_rd * s2 + noise];
            let post = joint_map_detect(
                &y,
                Some(h_sd),
                h_rd,
                1.0,
                1.0,
                &AugmentedHypothesisSet::new(puncture_rate).unwrap(),
                2,
            )
            .unwrap();
            let flagged = post.puncture_flags()[0];
            punctured_total += usize::from(punctured);
            missed += usize::from(punctured && !flagged);
            false_flags += usize::from(!punctured && flagged);
        }
        println!(
            "{:6.1} {:14.4} {:17.4} {:16.4}",
            snr_db,
            (missed + false_flags) as f64 / symbols as f64,
            missed as f64 / punctured_total as f64,
            false_flags as f64 / (symbols - punctured_total) as f64,
        );
    }
}
