//! Shows the square-deviation statistic separating correct from incorrect
//! symbol decisions, and how the selection rate tracks the closed form.
//!
//! Run: cargo run --release --example square_deviation

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use vfd_relay::analysis::{error_covariance_scalar, selection_probability, TheoryPoint};
use vfd_relay::channel::db_to_linear;
use vfd_relay::modem::{qpsk_symbol, to_real, to_real_matrix, SYMBOL_COMPONENT_VARIANCE};
use vfd_relay::selector::{mmse_weight, select_mask, square_deviation};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let epsilon = 1.0;
    println!("epsilon = {epsilon}");
    println!("snr_db  mean_dev_correct  mean_dev_wrong  pass_correct  pass_wrong  closed_form_p_m");
    for snr_db in [5.0, 10.0, 15.0, 20.0] {
        let snr = db_to_linear(snr_db);
        let h = Complex64::new(snr.sqrt(), 0.0);
        let hm = to_real_matrix(h, 1.0);
        let w = mmse_weight(&hm, SYMBOL_COMPONENT_VARIANCE, 0.5).unwrap();
        let n = 20_000;
        let mut devs_correct = Vec::with_capacity(n);
        let mut devs_wrong = Vec::with_capacity(n);
        for _ in 0..n {
            let (b0, b1) = (rng.random::<bool>(), rng.random::<bool>());
            let x = qpsk_symbol(b0.into(), b1.into());
            let noise = Complex64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ) * (0.5f64).sqrt();
            let y = to_real(h * x + noise);
            devs_correct.push(square_deviation(&w, y, to_real(x)));
            let wrong = qpsk_symbol((!b0).into(), b1.into());
            devs_wrong.push(square_deviation(&w, y, to_real(wrong)));
        }
        let pass_c = select_mask(&devs_correct, epsilon).selected_count() as f64 / n as f64;
        let pass_w = select_mask(&devs_wrong, epsilon).selected_count() as f64 / n as f64;
        let point = TheoryPoint::from_link(snr_db, 0.0, epsilon, 20);
        let p_m = selection_probability(error_covariance_scalar(&point), epsilon);
        println!(
            "{:6.1} {:17.4} {:15.4} {:13.4} {:11.4} {:16.4}",
            snr_db,
            devs_correct.iter().sum::<f64>() / n as f64,
            devs_wrong.iter().sum::<f64>() / n as f64,
            pass_c,
            pass_w,
            p_m,
        );
    }
    println!(
        "\nThe closed form describes the true-symbol hypothesis under the \
         Gaussian estimation model;\nQPSK decisions track it closely at \
         moderate SNR and separate cleanly from wrong decisions."
    );
}
