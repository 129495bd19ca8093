//! Closed-form selection probabilities against their Monte-Carlo estimates
//! over a small operating grid, mirroring the `theory --verify` subcommand.
//!
//! Run: cargo run --release --example selection_theory

use vfd_relay::analysis::{
    error_covariance_scalar, mixture_selection_probability, monte_carlo_selection_rate,
    selection_probability, TheoryPoint,
};

fn main() {
    let samples = 100_000;
    println!("samples per point: {samples}");
    println!("snr_sr_db  sigma2_ch  epsilon  sigma2_ce      p_m    p_m_mc      dev      p_c");
    for snr_db in [5.0, 10.0, 15.0] {
        for sigma2_ch in [0.0, 1.0] {
            for epsilon in [0.5, 1.0] {
                let point = TheoryPoint::from_link(snr_db, sigma2_ch, epsilon, 20);
                let sigma2_ce = error_covariance_scalar(&point);
                let p_m = selection_probability(sigma2_ce, epsilon);
                let mc = monte_carlo_selection_rate(&point, samples, 0xbeef);
                let mix = mixture_selection_probability(&point);
                println!(
                    "{:9.1} {:10.2} {:8.2} {:10.5} {:8.4} {:9.4} {:8.4} {:8.4}",
                    snr_db,
                    sigma2_ch,
                    epsilon,
                    sigma2_ce,
                    p_m,
                    mc,
                    (mc - p_m).abs(),
                    mix.p_c,
                );
            }
        }
    }
}
