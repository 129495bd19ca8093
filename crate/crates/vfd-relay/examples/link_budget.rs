//! Prints the per-link average SNR table for the reference geometry at a few
//! sweep points, together with the inter-relay interference level.
//!
//! Run: cargo run --release --example link_budget

use vfd_relay::channel::{link_snr_table, linear_to_db, LinkBudget};

fn main() {
    println!("reference geometry: S-R offset +10.6 dB, R-D offset +4.4 dB");
    for sigma2_ch in [1.0, 0.01, 0.0] {
        println!("\ninter-relay variance ratio sigma2_ch = {sigma2_ch}");
        println!("total_db  snr_sd_db  snr_sr_db  snr_rd_db  snr_rr_db  relay_sir_db");
        for rho in [0.0, 4.0, 8.0, 12.0, 16.0] {
            let t = link_snr_table(&LinkBudget::new(rho, sigma2_ch));
            let sir = if t.snr_rr > 0.0 {
                format!("{:9.1}", linear_to_db(t.snr_sr / t.snr_rr))
            } else {
                "      inf".to_string()
            };
            println!(
                "{:8.1} {:10.1} {:10.1} {:10.1} {:>10} {:>13}",
                t.total_avg_db,
                linear_to_db(t.snr_sd),
                linear_to_db(t.snr_sr),
                linear_to_db(t.snr_rd),
                if t.snr_rr > 0.0 {
                    format!("{:.1}", linear_to_db(t.snr_rr))
                } else {
                    "-inf".to_string()
                },
                sir,
            );
        }
    }
}
