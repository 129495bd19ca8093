//! Encodes random frames, sends them over an AWGN link at a few SNR points,
//! and reports decoder BER and throughput.
//!
//! Run: cargo run --release --example codec_roundtrip [frames_per_point]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::time::Instant;
use vfd_relay::channel::db_to_linear;
use vfd_relay::codec::{Codec, CodecSpec};
use vfd_relay::modem::{qpsk_map, qpsk_soft_demod};

fn main() {
    let frames: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let codec = Codec::new(CodecSpec::default());
    let k = codec.spec().info_bits_per_frame;
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    println!("{} info bits per frame, {} frames per SNR point", k, frames);
    println!("snr_db,ber,frame_errors,decode_ms_per_frame");
    for snr_db in [2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.6] {
        let snr = db_to_linear(snr_db);
        let h = Complex64::new(snr.sqrt(), 0.0);
        let mut bit_errors = 0u64;
        let mut frame_errors = 0u64;
        let mut decode_time = 0.0;
        for _ in 0..frames {
            let info: Vec<u8> = (0..k).map(|_| u8::from(rng.random::<bool>())).collect();
            let coded = codec.encode(&info).unwrap();
            let tx = qpsk_map(&coded).unwrap();
            let y: Vec<Complex64> = tx
                .symbols()
                .iter()
                .map(|&s| {
                    h * s
                        + Complex64::new(
                            rng.sample::<f64, _>(StandardNormal),
                            rng.sample::<f64, _>(StandardNormal),
                        ) * (0.5f64).sqrt()
                })
                .collect();
            let llrs = qpsk_soft_demod(&y, h, 1.0).unwrap();
            let t0 = Instant::now();
            let decoded = codec.decode(&llrs).unwrap();
            decode_time += t0.elapsed().as_secs_f64();
            let errors = decoded
                .info_bits
                .iter()
                .zip(&info)
                .filter(|(a, b)| a != b)
                .count() as u64;
            bit_errors += errors;
            frame_errors += u64::from(errors > 0);
        }
        println!(
            "{},{:.3e},{},{:.2}",
            snr_db,
            bit_errors as f64 / (frames * k) as f64,
            frame_errors,
            1e3 * decode_time / frames as f64
        );
    }
}
