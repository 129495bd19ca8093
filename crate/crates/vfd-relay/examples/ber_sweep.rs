//! Small-scale BER experiment across the four relaying schemes.
//!
//! Run: cargo run --release --example ber_sweep [realizations]
//!
//! The defaults keep this to roughly a minute on one core; raise the
//! realization count for smoother curves.

use vfd_relay::engine::{run_experiment, Scheme, SimConfig};

fn main() {
    let realizations: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let config = SimConfig {
        frames: 20,
        info_bits: 512,
        sigma2_ch: 0.0,
        snr_points_db: vec![6.0, 10.0, 14.0],
        schemes: vec![
            Scheme::Perfect,
            Scheme::Proposed { epsilon: 1.0 },
            Scheme::CrcSdf,
            Scheme::ThresholdSdf { tau: 0.1 },
        ],
        realizations,
        seed: 0x5eed,
        ..SimConfig::default()
    };
    println!(
        "{} frames x {} info bits, {} realizations, sigma2_ch = {}",
        config.frames, config.info_bits, config.realizations, config.sigma2_ch
    );
    let records = run_experiment(&config).expect("valid configuration");
    println!("{:>18} {:>7} {:>12} {:>12} {:>8}", "scheme", "snr_db", "ber", "fer", "bits");
    for r in &records {
        println!(
            "{:>18} {:>7} {:>12.4e} {:>12.4e} {:>8}",
            r.scheme,
            r.snr_db,
            r.ber(),
            r.fer(),
            r.bits_total
        );
    }
}
