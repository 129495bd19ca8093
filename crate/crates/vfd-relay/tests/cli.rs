//! End-to-end checks of the command-line surface: CSV schemas, manifests,
//! exit codes, presets, and environment overrides.

use std::path::Path;
use std::sync::Mutex;

use vfd_relay::cli::{
    load_file_config, manifest_path, parse_csv, run_with_args, RunManifest, DMT_CSV_HEADER,
    RUN_CSV_HEADER, THEORY_CSV_HEADER, THEORY_VERIFY_SUFFIX,
};

/// The run command reads `VFDSIM_*` variables, which are process-global;
/// tests that invoke it serialize here.
static ENV_LOCK: Mutex<()> = Mutex::new(());

fn run(args: &[&str]) -> i32 {
    run_with_args(std::iter::once("vfdsim").chain(args.iter().copied()))
}

fn tiny_run_args<'a>(out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec![
        "run",
        "--schemes",
        "proposed,crc_sdf",
        "--snr",
        "8,10",
        "--realizations",
        "2",
        "--frames",
        "2",
        "--info-bits",
        "32",
        "--seed",
        "5",
        "--out",
        out,
    ];
    args.extend_from_slice(extra);
    args
}

#[test]
fn run_emits_schema_stable_csv() {
    let _guard = ENV_LOCK.lock().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ber.csv");
    assert_eq!(run(&tiny_run_args(out.to_str().unwrap(), &[])), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with(RUN_CSV_HEADER));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 4, "2 schemes x 2 SNR points");
    for row in &rows {
        let ber: f64 = row["ber"].parse().unwrap();
        assert!((0.0..=1.0).contains(&ber));
        let bits: u64 = row["bits_total"].parse().unwrap();
        assert_eq!(bits, 2 * 2 * 32);
        assert_eq!(row["seed"], "5");
    }
    assert_eq!(rows[0]["scheme"], "proposed_eps1");
    assert_eq!(rows[2]["scheme"], "crc_sdf");
}

#[test]
fn rerun_and_manifest_replay_are_byte_identical() {
    let _guard = ENV_LOCK.lock().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    assert_eq!(run(&tiny_run_args(first.to_str().unwrap(), &[])), 0);
    let second = dir.path().join("b.csv");
    assert_eq!(run(&tiny_run_args(second.to_str().unwrap(), &[])), 0);
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap(),
        "same command twice must produce identical bytes"
    );

    // Replaying from the emitted manifest reproduces the CSV exactly.
    let manifest = manifest_path(&first);
    let parsed: RunManifest =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(parsed.command, "run");
    let replay = dir.path().join("c.csv");
    assert_eq!(
        run(&[
            "run",
            "--config",
            manifest.to_str().unwrap(),
            "--out",
            replay.to_str().unwrap(),
        ]),
        0
    );
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&replay).unwrap(),
        "manifest replay must reproduce the CSV bytes"
    );
}

#[test]
fn config_file_layering_and_flag_override() {
    let _guard = ENV_LOCK.lock().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{
            "frames": 2,
            "info_bits": 32,
            "snr_points_db": [9.0],
            "schemes": ["perfect"],
            "realizations": 2,
            "seed": 6
        }"#,
    )
    .unwrap();
    let out = dir.path().join("ber.csv");
    assert_eq!(
        run(&[
            "run",
            "--config",
            config.to_str().unwrap(),
            "--realizations",
            "3",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    let rows = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    // Flag overrode the file's realization count: 3 * 2 * 32 bits.
    assert_eq!(rows[0]["bits_total"], "192");
    assert_eq!(rows[0]["scheme"], "perfect");
}

#[test]
fn env_variables_override_file_but_not_flags() {
    let _guard = ENV_LOCK.lock().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ber.csv");
    std::env::set_var("VFDSIM_SEED", "77");
    let code = run(&tiny_run_args(out.to_str().unwrap(), &[]));
    std::env::remove_var("VFDSIM_SEED");
    assert_eq!(code, 0);
    let rows = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    // The command line pins --seed 5; the environment must not win.
    assert_eq!(rows[0]["seed"], "5");

    let out2 = dir.path().join("ber2.csv");
    std::env::set_var("VFDSIM_SEED", "77");
    let mut args = tiny_run_args(out2.to_str().unwrap(), &[]);
    let seed_pos = args.iter().position(|a| *a == "--seed").unwrap();
    args.drain(seed_pos..seed_pos + 2);
    let code = run(&args);
    std::env::remove_var("VFDSIM_SEED");
    assert_eq!(code, 0);
    let rows = parse_csv(&std::fs::read_to_string(&out2).unwrap()).unwrap();
    assert_eq!(rows[0]["seed"], "77", "environment must override the default");
}

#[test]
fn invalid_configuration_exits_2() {
    let _guard = ENV_LOCK.lock().unwrap();
    // Odd frame count fails validation.
    assert_eq!(
        run(&[
            "run",
            "--frames",
            "3",
            "--snr",
            "8",
            "--realizations",
            "1",
            "--out",
            "/tmp/unused.csv",
        ]),
        2
    );
    // Unknown scheme name.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    assert_eq!(
        run(&[
            "run",
            "--schemes",
            "bogus",
            "--snr",
            "8",
            "--realizations",
            "1",
            "--out",
            out.to_str().unwrap(),
        ]),
        2
    );
    // Unparseable flag value is a usage error.
    assert_eq!(run(&["run", "--realizations", "many"]), 2);
    // The trade-off preset is not a BER experiment.
    assert_eq!(run(&["run", "--preset", "fig2"]), 2);
}

#[test]
fn unwritable_output_exits_3() {
    let _guard = ENV_LOCK.lock().unwrap();
    assert_eq!(
        run(&tiny_run_args("/nonexistent-dir/deep/ber.csv", &[])),
        3
    );
}

#[test]
fn exp2_preset_emits_one_csv_per_interference_level() {
    let _guard = ENV_LOCK.lock().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("exp2.csv");
    assert_eq!(
        run(&[
            "run",
            "--preset",
            "exp2",
            "--snr",
            "10",
            "--realizations",
            "2",
            "--frames",
            "2",
            "--info-bits",
            "32",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    for suffix in ["_s2ch1", "_s2ch0.01", "_s2ch0"] {
        let path = dir.path().join(format!("exp2{suffix}.csv"));
        assert!(path.exists(), "{} missing", path.display());
        let rows = parse_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(rows.len(), 4, "four schemes at one SNR point");
        assert!(manifest_path(&path).exists());
        let cfg = load_file_config(&manifest_path(&path)).unwrap();
        assert_eq!(cfg.frames, Some(2));
    }
}

#[test]
fn exp1_preset_expands_thresholds() {
    let _guard = ENV_LOCK.lock().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("exp1.csv");
    assert_eq!(
        run(&[
            "run",
            "--preset",
            "exp1",
            "--snr",
            "12",
            "--realizations",
            "2",
            "--frames",
            "2",
            "--info-bits",
            "32",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    let rows = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let schemes: Vec<&str> = rows.iter().map(|r| r["scheme"].as_str()).collect();
    assert_eq!(
        schemes,
        [
            "proposed_eps0.25",
            "proposed_eps0.5",
            "proposed_eps1",
            "proposed_eps2",
            "proposed_eps4"
        ]
    );
}

#[test]
fn dmt_layout_and_special_cases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dmt.csv");
    assert_eq!(
        run(&[
            "dmt",
            "--L",
            "20",
            "--eps",
            "0.5",
            "--eta",
            "1.0,1.25",
            "--r-grid",
            "0:0.1:1",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with(DMT_CSV_HEADER));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 3 * 11, "two ratio curves plus the bound");
    let curves: std::collections::BTreeSet<&str> =
        rows.iter().map(|r| r["curve"].as_str()).collect();
    assert!(curves.contains("proposed") && curves.contains("miso_bound"));
    for row in &rows {
        if row["r"] == "1" {
            assert_eq!(row["d"], "0", "every curve vanishes at full multiplexing");
        }
        if row["r"] == "0" {
            assert_eq!(row["d"], "2");
        }
    }

    // A fixed selection probability of one is the bound alone.
    let out2 = dir.path().join("bound.csv");
    assert_eq!(
        run(&["dmt", "--pc", "1.0", "--r-grid", "0:0.5:1", "--out", out2.to_str().unwrap()]),
        0
    );
    let rows = parse_csv(&std::fs::read_to_string(&out2).unwrap()).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["curve"] == "miso_bound"));

    assert_eq!(run(&["dmt", "--r-grid", "0:0:1"]), 2, "bad grid is a config error");
    assert_eq!(run(&["dmt", "--preset", "exp1"]), 2);
}

#[test]
fn theory_rows_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("theory.csv");
    assert_eq!(
        run(&[
            "theory",
            "--snr",
            "5,10",
            "--eps",
            "0,0.5",
            "--sigma2-ch",
            "0,1",
            "--verify",
            "--samples",
            "100000",
            "--out",
            out.to_str().unwrap(),
        ]),
        0
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let header = format!("{THEORY_CSV_HEADER}{THEORY_VERIFY_SUFFIX}");
    assert!(text.starts_with(&header));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 8);
    for row in &rows {
        let eps: f64 = row["epsilon"].parse().unwrap();
        let p_m: f64 = row["p_m"].parse().unwrap();
        if eps == 0.0 {
            assert_eq!(p_m, 0.0, "zero threshold selects nothing");
        }
        let dev: f64 = row["p_m_dev"].parse().unwrap();
        assert!(dev < 0.01, "verification deviation {dev} too large");
        let dev_c: f64 = row["p_c_dev"].parse().unwrap();
        assert!(dev_c < 0.01, "mixture deviation {dev_c} too large");
    }
    // Less interference never lowers the selection probability.
    let p_m_at = |snr: &str, s2: &str| -> f64 {
        rows.iter()
            .find(|r| r["snr_db"] == snr && r["sigma2_ch"] == s2 && r["epsilon"] == "0.5")
            .unwrap()["p_m"]
            .parse()
            .unwrap()
    };
    assert!(p_m_at("10", "0") >= p_m_at("10", "1"));

    assert_eq!(run(&["theory", "--snr", "nope"]), 2);
}

#[test]
fn manifest_files_sit_next_to_outputs() {
    assert_eq!(
        manifest_path(Path::new("results/ber.csv")),
        Path::new("results/ber.manifest.json")
    );
}
