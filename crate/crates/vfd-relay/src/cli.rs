//! Command-line front end: the `run`, `dmt`, and `theory` subcommands, flat
//! JSON configuration files, experiment presets, and CSV/manifest emission.
//!
//! Resolution precedence for every setting, lowest to highest: built-in
//! defaults, `--config` file, `--preset`, `VFDSIM_*` environment variables,
//! explicit flags. Exit codes: 0 on success, 2 for configuration errors,
//! 3 for I/O errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    asymptotic_selection_probability, dmt_curve, error_covariance_scalar,
    mixture_selection_probability, monte_carlo_mixture_selection_rate,
    monte_carlo_selection_rate, selection_probability, TheoryPoint, DMT_EVAL_SNR_DB,
};
use crate::engine::{run_experiment_with_progress, Scheme, SimConfig};
use crate::Error;

/// Prefix for environment-variable overrides, e.g. `VFDSIM_SEED`.
pub const ENV_PREFIX: &str = "VFDSIM_";

#[derive(Debug, Parser)]
#[command(
    name = "vfdsim",
    version,
    about = "Virtual full-duplex relaying simulator and analysis toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte-Carlo BER experiment over SNR points and relaying schemes.
    Run(RunArgs),
    /// Diversity-multiplexing trade-off curves.
    Dmt(DmtArgs),
    /// Closed-form selection probabilities, optionally Monte-Carlo verified.
    Theory(TheoryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Threshold sweep for the deviation test (one curve per epsilon).
    Exp1,
    /// Scheme comparison at three inter-relay interference levels.
    Exp2,
    /// Trade-off curves at L = 20, epsilon = 0.5 (use with `dmt`).
    Fig2,
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Flat JSON config file, or a manifest emitted by a previous run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Experiment preset (exp1, exp2).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Comma-separated schemes: proposed, perfect, crc_sdf, threshold_sdf,
    /// or proposed_eps<value>.
    #[arg(long)]
    pub schemes: Option<String>,
    /// SNR grid in dB: `start:step:end` or a comma list.
    #[arg(long)]
    pub snr: Option<String>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Deviation threshold for `proposed`.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Frame error-fraction threshold for `threshold_sdf`.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub sigma2_ch: Option<f64>,
    #[arg(long)]
    pub frames: Option<usize>,
    #[arg(long)]
    pub info_bits: Option<usize>,
    #[arg(long)]
    pub decoder_iterations: Option<usize>,
    /// Override the destination's zero-energy prior.
    #[arg(long)]
    pub p_zero: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DmtArgs {
    /// Frames per superframe.
    #[arg(long = "L", default_value_t = 20)]
    pub frames: usize,
    /// Deviation threshold entering the selection probability.
    #[arg(long = "eps", default_value_t = 0.5)]
    pub epsilon: f64,
    /// Comma list of S-R over R-R SNR ratios.
    #[arg(long, default_value = "1.0,1.25")]
    pub eta: String,
    /// Emit a single curve with this fixed selection probability instead.
    #[arg(long)]
    pub pc: Option<f64>,
    /// Multiplexing-gain grid, `start:step:end`.
    #[arg(long, default_value = "0:0.005:1")]
    pub r_grid: String,
    /// Evaluate the asymptotic selection probability without inter-relay
    /// interference in the noise term (alternative asymptotic reading).
    #[arg(long)]
    pub interference_free: bool,
    /// Finite SNR (dB) standing in for the asymptotic limit.
    #[arg(long, default_value_t = DMT_EVAL_SNR_DB)]
    pub snr_eval: f64,
    /// DMT preset (fig2).
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, default_value = "dmt.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    /// S-R link SNR grid in dB, `start:step:end` or comma list.
    #[arg(long, default_value = "0:2:20")]
    pub snr: String,
    /// Comma list of deviation thresholds.
    #[arg(long = "eps", default_value = "0.5,1.0")]
    pub epsilon: String,
    /// Comma list of inter-relay variances.
    #[arg(long, default_value = "0,0.01,1")]
    pub sigma2_ch: String,
    #[arg(long = "L", default_value_t = 20)]
    pub frames: usize,
    /// Append Monte-Carlo estimates and absolute deviations per row.
    #[arg(long)]
    pub verify: bool,
    /// Samples per Monte-Carlo estimate.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0x7e07)]
    pub seed: u64,
    #[arg(long, default_value = "theory.csv")]
    pub out: PathBuf,
}

/// Flat JSON mirror of the experiment configuration. Every field is
/// optional in user-supplied files; emitted manifests resolve all of them.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct FileConfig {
    pub frames: Option<usize>,
    pub info_bits: Option<usize>,
    pub epsilon: Option<f64>,
    pub tau: Option<f64>,
    pub sigma2_ch: Option<f64>,
    pub offset_sr_db: Option<f64>,
    pub offset_rd_db: Option<f64>,
    pub snr_points_db: Option<Vec<f64>>,
    pub schemes: Option<Vec<String>>,
    pub realizations: Option<usize>,
    pub seed: Option<u64>,
    pub decoder_iterations: Option<usize>,
    pub interleaver_seed: Option<u64>,
    pub p_zero: Option<f64>,
    pub workers: Option<usize>,
}

impl FileConfig {
    fn overlay(&mut self, other: &FileConfig) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field.clone(); })*
            };
        }
        take!(
            frames,
            info_bits,
            epsilon,
            tau,
            sigma2_ch,
            offset_sr_db,
            offset_rd_db,
            snr_points_db,
            schemes,
            realizations,
            seed,
            decoder_iterations,
            interleaver_seed,
            p_zero,
            workers
        );
    }
}

/// Reproducibility envelope written next to every result CSV.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub timestamp_unix: u64,
    pub command: String,
    pub output_csv: String,
    pub config: FileConfig,
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_from_env() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    run_with_args(args)
}

/// Parses and executes a full command line; returns the exit code.
pub fn run_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { 0 } else { 2 };
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Dmt(args) => cmd_dmt(&args),
        Command::Theory(args) => cmd_theory(&args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 3,
        _ => 2,
    }
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

/// One resolved experiment with its output path.
struct RunJob {
    config: FileConfig,
    csv_path: PathBuf,
}

pub fn cmd_run(args: &RunArgs) -> Result<(), Error> {
    let jobs = resolve_run_jobs(args)?;
    for job in &jobs {
        let (sim, workers) = sim_config_from_file(&job.config)?;
        let records = with_worker_pool(workers, || run_experiment_with_progress(&sim, |_| {}))?;
        let mut csv = String::from(RUN_CSV_HEADER);
        csv.push('\n');
        for r in &records {
            println!(
                "scheme={} snr_db={} ber={:.6e} bit_errors={} frame_errors={}",
                r.scheme,
                r.snr_db,
                r.ber(),
                r.bit_errors,
                r.frame_errors
            );
            csv.push_str(&format!(
                "{},{},{:.6e},{},{},{},{},{}\n",
                r.scheme,
                r.snr_db,
                r.ber(),
                r.bit_errors,
                r.bits_total,
                r.frame_errors,
                r.frames_total,
                r.seed
            ));
        }
        std::fs::write(&job.csv_path, csv)?;
        write_manifest("run", &job.csv_path, &job.config)?;
        println!(
            "wrote {} ({} records)",
            job.csv_path.display(),
            records.len()
        );
    }
    Ok(())
}

pub const RUN_CSV_HEADER: &str =
    "scheme,snr_db,ber,bit_errors,bits_total,frame_errors,frames_total,seed";

fn resolve_run_jobs(args: &RunArgs) -> Result<Vec<RunJob>, Error> {
    let mut resolved = FileConfig::default();
    if let Some(path) = &args.config {
        resolved.overlay(&load_file_config(path)?);
    }

    // Preset layer.
    let mut preset_sigma_sweep: Option<Vec<f64>> = None;
    match args.preset {
        None => {}
        Some(Preset::Exp1) => {
            resolved.schemes = Some(
                [0.25, 0.5, 1.0, 2.0, 4.0]
                    .iter()
                    .map(|e| format!("proposed_eps{e}"))
                    .collect(),
            );
            resolved.sigma2_ch = Some(1.0);
            if resolved.snr_points_db.is_none() {
                resolved.snr_points_db = Some(parse_grid("8:2:18")?);
            }
        }
        Some(Preset::Exp2) => {
            resolved.schemes = Some(
                ["proposed", "perfect", "crc_sdf", "threshold_sdf"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            );
            resolved.epsilon.get_or_insert(1.0);
            if resolved.snr_points_db.is_none() {
                resolved.snr_points_db = Some(parse_grid("8:2:18")?);
            }
            preset_sigma_sweep = Some(vec![1.0, 0.01, 0.0]);
        }
        Some(Preset::Fig2) => {
            return Err(Error::config(
                "preset fig2 produces trade-off curves; use the dmt subcommand",
            ));
        }
    }

    // Environment layer.
    resolved.overlay(&env_file_config()?);

    // Flag layer.
    let flags = FileConfig {
        frames: args.frames,
        info_bits: args.info_bits,
        epsilon: args.epsilon,
        tau: args.tau,
        sigma2_ch: args.sigma2_ch,
        offset_sr_db: None,
        offset_rd_db: None,
        snr_points_db: args.snr.as_deref().map(parse_grid).transpose()?,
        schemes: args
            .schemes
            .as_deref()
            .map(|s| s.split(',').map(|x| x.trim().to_string()).collect()),
        realizations: args.realizations,
        seed: args.seed,
        decoder_iterations: None,
        interleaver_seed: None,
        p_zero: args.p_zero,
        workers: args.workers,
    };
    resolved.overlay(&flags);
    if let Some(iters) = args.decoder_iterations {
        resolved.decoder_iterations = Some(iters);
    }

    let out = args
        .out
        .clone()
        .or_else(|| env_var("OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("ber.csv"));

    let jobs = match preset_sigma_sweep {
        None => vec![RunJob {
            config: fill_defaults(resolved),
            csv_path: out,
        }],
        Some(sweep) => sweep
            .into_iter()
            .map(|s2| {
                let mut cfg = resolved.clone();
                cfg.sigma2_ch = Some(s2);
                RunJob {
                    config: fill_defaults(cfg),
                    csv_path: suffix_path(&out, &format!("_s2ch{s2}")),
                }
            })
            .collect(),
    };
    Ok(jobs)
}

/// Completes a partially specified configuration with the defaults.
fn fill_defaults(mut cfg: FileConfig) -> FileConfig {
    let d = SimConfig::default();
    cfg.frames.get_or_insert(d.frames);
    cfg.info_bits.get_or_insert(d.info_bits);
    cfg.epsilon.get_or_insert(1.0);
    cfg.tau.get_or_insert(0.1);
    cfg.sigma2_ch.get_or_insert(d.sigma2_ch);
    cfg.offset_sr_db.get_or_insert(d.offset_sr_db);
    cfg.offset_rd_db.get_or_insert(d.offset_rd_db);
    cfg.snr_points_db
        .get_or_insert_with(|| vec![8.0, 10.0, 12.0, 14.0, 16.0, 18.0]);
    cfg.schemes
        .get_or_insert_with(|| vec!["proposed".to_string(), "perfect".to_string()]);
    cfg.realizations.get_or_insert(d.realizations);
    cfg.seed.get_or_insert(d.seed);
    cfg.decoder_iterations.get_or_insert(d.decoder_iterations);
    cfg.interleaver_seed.get_or_insert(d.interleaver_seed);
    cfg.workers.get_or_insert(0);
    cfg
}

/// Converts a fully resolved file configuration into the engine's form.
fn sim_config_from_file(cfg: &FileConfig) -> Result<(SimConfig, usize), Error> {
    let epsilon = cfg.epsilon.unwrap_or(1.0);
    let tau = cfg.tau.unwrap_or(0.1);
    let mut schemes = Vec::new();
    for name in cfg.schemes.as_deref().unwrap_or(&[]) {
        schemes.push(parse_scheme(name, epsilon, tau)?);
    }
    let d = SimConfig::default();
    let sim = SimConfig {
        frames: cfg.frames.unwrap_or(d.frames),
        info_bits: cfg.info_bits.unwrap_or(d.info_bits),
        sigma2_ch: cfg.sigma2_ch.unwrap_or(d.sigma2_ch),
        offset_sr_db: cfg.offset_sr_db.unwrap_or(d.offset_sr_db),
        offset_rd_db: cfg.offset_rd_db.unwrap_or(d.offset_rd_db),
        snr_points_db: cfg.snr_points_db.clone().unwrap_or_default(),
        schemes,
        realizations: cfg.realizations.unwrap_or(d.realizations),
        seed: cfg.seed.unwrap_or(d.seed),
        decoder_iterations: cfg.decoder_iterations.unwrap_or(d.decoder_iterations),
        interleaver_seed: cfg.interleaver_seed.unwrap_or(d.interleaver_seed),
        p_zero_override: cfg.p_zero,
    };
    sim.validate()?;
    Ok((sim, cfg.workers.unwrap_or(0)))
}

fn parse_scheme(name: &str, epsilon: f64, tau: f64) -> Result<Scheme, Error> {
    if let Some(rest) = name.strip_prefix("proposed_eps") {
        let eps: f64 = rest
            .parse()
            .map_err(|_| Error::config(format!("bad scheme threshold in {name:?}")))?;
        return Ok(Scheme::Proposed { epsilon: eps });
    }
    match name {
        "proposed" => Ok(Scheme::Proposed { epsilon }),
        "perfect" => Ok(Scheme::Perfect),
        "crc_sdf" => Ok(Scheme::CrcSdf),
        "threshold_sdf" => Ok(Scheme::ThresholdSdf { tau }),
        other => Err(Error::config(format!(
            "unknown scheme {other:?}; expected proposed, perfect, crc_sdf, threshold_sdf"
        ))),
    }
}

fn with_worker_pool<T>(
    workers: usize,
    body: impl FnOnce() -> Result<T, Error> + Send,
) -> Result<T, Error>
where
    T: Send,
{
    if workers == 0 {
        return body();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("cannot build worker pool: {e}")))?;
    pool.install(body)
}

// ---------------------------------------------------------------------------
// dmt
// ---------------------------------------------------------------------------

pub const DMT_CSV_HEADER: &str = "curve,eta,r,d";

pub fn cmd_dmt(args: &DmtArgs) -> Result<(), Error> {
    let mut frames = args.frames;
    let mut epsilon = args.epsilon;
    let mut etas = parse_list(&args.eta)?;
    let mut r_grid = parse_grid(&args.r_grid)?;
    match args.preset {
        None => {}
        Some(Preset::Fig2) => {
            frames = 20;
            epsilon = 0.5;
            etas = vec![1.0, 1.25];
            r_grid = parse_grid("0:0.005:1")?;
        }
        Some(other) => {
            return Err(Error::config(format!(
                "preset {other:?} drives BER experiments; use the run subcommand"
            )));
        }
    }

    let mut csv = String::from(DMT_CSV_HEADER);
    csv.push('\n');
    let mut rows = 0usize;
    if let Some(pc) = args.pc {
        let curve = dmt_curve(frames, pc, &r_grid)?;
        let label = if pc == 1.0 { "miso_bound" } else { "fixed_pc" };
        for (r, d) in curve.multiplexing.iter().zip(&curve.diversity) {
            csv.push_str(&format!("{label},,{r},{d}\n"));
            rows += 1;
        }
    } else {
        for &eta in &etas {
            if eta <= 0.0 {
                return Err(Error::config(format!("eta must be positive, got {eta}")));
            }
            let pc = asymptotic_selection_probability(
                epsilon,
                eta,
                args.interference_free,
                args.snr_eval,
            );
            let curve = dmt_curve(frames, pc, &r_grid)?;
            for (r, d) in curve.multiplexing.iter().zip(&curve.diversity) {
                csv.push_str(&format!("proposed,{eta},{r},{d}\n"));
                rows += 1;
            }
        }
        let bound = dmt_curve(frames, 1.0, &r_grid)?;
        for (r, d) in bound.multiplexing.iter().zip(&bound.diversity) {
            csv.push_str(&format!("miso_bound,,{r},{d}\n"));
            rows += 1;
        }
    }
    std::fs::write(&args.out, csv)?;
    println!("wrote {} ({rows} rows)", args.out.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// theory
// ---------------------------------------------------------------------------

pub const THEORY_CSV_HEADER: &str = "snr_db,epsilon,sigma2_ch,sigma2_ce,p_m,p_c";
pub const THEORY_VERIFY_SUFFIX: &str = ",p_m_mc,p_m_dev,p_c_mc,p_c_dev";

pub fn cmd_theory(args: &TheoryArgs) -> Result<(), Error> {
    let snrs = parse_grid(&args.snr)?;
    let epsilons = parse_list(&args.epsilon)?;
    let sigma2_chs = parse_list(&args.sigma2_ch)?;
    if snrs.is_empty() || epsilons.is_empty() || sigma2_chs.is_empty() {
        return Err(Error::config("theory sweep must not be empty"));
    }
    if args.verify && args.samples == 0 {
        return Err(Error::config("verification needs at least one sample"));
    }

    let mut csv = String::from(THEORY_CSV_HEADER);
    if args.verify {
        csv.push_str(THEORY_VERIFY_SUFFIX);
    }
    csv.push('\n');
    let mut rows = 0usize;
    let mut max_dev = 0.0f64;
    for &snr_db in &snrs {
        for &eps in &epsilons {
            for &s2 in &sigma2_chs {
                if s2 < 0.0 {
                    return Err(Error::config(format!(
                        "sigma2_ch must be nonnegative, got {s2}"
                    )));
                }
                let point = TheoryPoint::from_link(snr_db, s2, eps, args.frames);
                let sigma2_ce = error_covariance_scalar(&point);
                let p_m = selection_probability(sigma2_ce, eps);
                let p_c = mixture_selection_probability(&point).p_c;
                csv.push_str(&format!(
                    "{snr_db},{eps},{s2},{sigma2_ce},{p_m},{p_c}"
                ));
                if args.verify {
                    let seed = args.seed ^ (rows as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                    let p_m_mc = monte_carlo_selection_rate(&point, args.samples, seed);
                    let p_c_mc =
                        monte_carlo_mixture_selection_rate(&point, args.samples, seed ^ 1);
                    let dm = (p_m_mc - p_m).abs();
                    let dc = (p_c_mc - p_c).abs();
                    max_dev = max_dev.max(dm).max(dc);
                    csv.push_str(&format!(",{p_m_mc},{dm},{p_c_mc},{dc}"));
                }
                csv.push('\n');
                rows += 1;
            }
        }
    }
    std::fs::write(&args.out, csv)?;
    if args.verify {
        println!(
            "wrote {} ({rows} rows, max |closed-form - MC| = {max_dev:.4})",
            args.out.display()
        );
    } else {
        println!("wrote {} ({rows} rows)", args.out.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

/// `start:step:end` (inclusive) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, Error> {
    let text = text.trim();
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::config(format!(
                "grid {text:?} must be start:step:end"
            )));
        }
        let start: f64 = parse_num(parts[0])?;
        let step: f64 = parse_num(parts[1])?;
        let end: f64 = parse_num(parts[2])?;
        if step <= 0.0 || end < start {
            return Err(Error::config(format!(
                "grid {text:?} needs positive step and end >= start"
            )));
        }
        let count = ((end - start) / step + 0.5).floor() as usize;
        let mut grid: Vec<f64> = (0..=count).map(|i| start + step * i as f64).collect();
        if let Some(last) = grid.last_mut() {
            if (*last - end).abs() < step * 1e-9 {
                *last = end;
            }
        }
        Ok(grid)
    } else {
        parse_list(text)
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|s| parse_num(s.trim()))
        .collect::<Result<Vec<f64>, Error>>()
}

fn parse_num(s: &str) -> Result<f64, Error> {
    s.parse::<f64>()
        .map_err(|_| Error::config(format!("cannot parse number {s:?}")))
}

fn env_var(name: &str) -> Option<String> {
    std::env::var(format!("{ENV_PREFIX}{name}")).ok()
}

fn env_parse<T: std::str::FromStr>(name: &str) -> Result<Option<T>, Error> {
    match env_var(name) {
        None => Ok(None),
        Some(v) => v.parse::<T>().map(Some).map_err(|_| {
            Error::config(format!("cannot parse {ENV_PREFIX}{name}={v:?}"))
        }),
    }
}

/// Overrides taken from `VFDSIM_*` environment variables.
fn env_file_config() -> Result<FileConfig, Error> {
    Ok(FileConfig {
        frames: env_parse("FRAMES")?,
        info_bits: env_parse("INFO_BITS")?,
        epsilon: env_parse("EPSILON")?,
        tau: env_parse("TAU")?,
        sigma2_ch: env_parse("SIGMA2_CH")?,
        offset_sr_db: env_parse("OFFSET_SR_DB")?,
        offset_rd_db: env_parse("OFFSET_RD_DB")?,
        snr_points_db: env_var("SNR").as_deref().map(parse_grid).transpose()?,
        schemes: env_var("SCHEMES")
            .map(|s| s.split(',').map(|x| x.trim().to_string()).collect()),
        realizations: env_parse("REALIZATIONS")?,
        seed: env_parse("SEED")?,
        decoder_iterations: env_parse("DECODER_ITERATIONS")?,
        interleaver_seed: env_parse("INTERLEAVER_SEED")?,
        p_zero: env_parse("P_ZERO")?,
        workers: env_parse("WORKERS")?,
    })
}

/// Reads a flat config file; a manifest is recognized by its `config` field.
pub fn load_file_config(path: &Path) -> Result<FileConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("config").is_some() {
        let manifest: RunManifest = serde_json::from_value(value)?;
        Ok(manifest.config)
    } else {
        Ok(serde_json::from_value(value)?)
    }
}

fn write_manifest(command: &str, csv_path: &Path, config: &FileConfig) -> Result<(), Error> {
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        command: command.to_string(),
        output_csv: csv_path.display().to_string(),
        config: config.clone(),
    };
    let path = manifest_path(csv_path);
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

/// `results.csv` gets its manifest at `results.manifest.json`.
pub fn manifest_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("manifest.json")
}

fn suffix_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}{suffix}.{ext}"))
}

/// Parses an emitted run CSV back into per-column maps; used by tests and
/// downstream tooling that wants schema-checked access.
pub fn parse_csv(text: &str) -> Result<Vec<BTreeMap<String, String>>, Error> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::config("empty CSV"))?
        .split(',')
        .map(str::to_string)
        .collect::<Vec<_>>();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(Error::config(format!(
                "row has {} fields, header has {}",
                fields.len(),
                header.len()
            )));
        }
        rows.push(
            header
                .iter()
                .cloned()
                .zip(fields.iter().map(|f| f.to_string()))
                .collect(),
        );
    }
    Ok(rows)
}
