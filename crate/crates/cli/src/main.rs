use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::Rng;

use psgrand::channel::{frame_rng, ChannelKind};
use psgrand::codebook::random_linear_code;
use psgrand::grand::{
    collect_patterns, exact_eta_patterns, grand_decode, hamming_patterns, logistic_patterns, QuerySchedule,
    ScheduleKind,
};
use psgrand::harness::{profile_reliability, SimConfig, Simulation, WORKERS_ENV};
use psgrand::modem::Modulation;
use psgrand::oracle::{
    analytic_uncoded_bler, brute_sort_patterns, disagreement_weight, exhaustive_ml_decode, PatternMetric,
};
use psgrand::BitWord;

#[derive(Parser)]
#[command(name = "psgrand", version, about = "GRAND-family decoding over fading channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// TOML or JSON simulation config.
    #[arg(long)]
    config: PathBuf,
    /// Override a config entry, e.g. `--set stop.min_block_errors=100`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads when the config does not fix them.
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
}

impl ConfigArgs {
    fn load(&self) -> Result<SimConfig> {
        let mut cfg = SimConfig::load(&self.config, &self.overrides)
            .with_context(|| format!("loading {}", self.config.display()))?;
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a BLER sweep and write `<name>.csv` and `<name>.json`.
    Simulate {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output directory (overrides the config; defaults to the current directory).
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Average rank-ordered soft and pseudo-soft reliabilities.
    ProfileReliability {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        snr_db: f64,
        #[arg(long, default_value_t = 10_000)]
        frames: u64,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cross-check fast paths against brute-force references.
    Verify {
        #[command(subcommand)]
        check: Verify,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Closed-form uncoded BPSK block error rate over Rayleigh fading.
    AnalyticBler {
        #[arg(long, allow_hyphen_values = true)]
        snr_db: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Compare a pattern generator with the full sort of all subsets.
    Patterns {
        #[arg(long, default_value = "eta")]
        metric: PatternMetric,
        /// Comma-separated reliabilities (sorted internally); length is N.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rel: Vec<f64>,
        /// Print the sorted table.
        #[arg(long)]
        show: bool,
    },
    /// SGRAND with no budget against exhaustive ML on random codes.
    Ml {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn simulate(cfg: ConfigArgs, output_dir: Option<PathBuf>) -> Result<()> {
    let mut config = cfg.load()?;
    if let Some(dir) = output_dir {
        config.output_dir = Some(dir);
    } else if config.output_dir.is_none() {
        config.output_dir = Some(PathBuf::from("."));
    }
    let sim = Simulation::new(config)?;
    let points = sim.run_curve()?;
    let mut out = io::stdout().lock();
    writeln!(out, "{:>8} {:>10} {:>8} {:>11} {:>12} {:>10}", "snr_db", "frames", "errors", "bler", "avg_queries", "abandon")?;
    for p in &points {
        writeln!(
            out,
            "{:>8.2} {:>10} {:>8} {:>11.4e} {:>12.1} {:>10.2e}",
            p.snr_db, p.frames, p.block_errors, p.bler, p.avg_queries, p.abandon_rate
        )?;
    }
    if let (Some(c), Some(j)) = (sim.config().csv_path(), sim.config().json_path()) {
        eprintln!("wrote {} and {}", c.display(), j.display());
    }
    Ok(())
}

fn profile(cfg: ConfigArgs, snr_db: f64, frames: u64, output: Option<PathBuf>) -> Result<()> {
    let config = cfg.load()?;
    let table = profile_reliability(&config, snr_db, frames)?;
    match output {
        Some(p) => table.write_csv(File::create(&p).with_context(|| format!("creating {}", p.display()))?)?,
        None => table.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn verify_patterns(metric: PatternMetric, mut rel: Vec<f64>, show: bool) -> Result<()> {
    if rel.is_empty() {
        bail!("--rel needs at least one value");
    }
    rel.sort_by(f64::total_cmp);
    let n = rel.len();
    let table = brute_sort_patterns(&rel, metric)?;
    let produced = match metric {
        PatternMetric::Eta => collect_patterns(&mut exact_eta_patterns(&rel)?, usize::MAX),
        PatternMetric::Logistic => collect_patterns(&mut logistic_patterns(n), usize::MAX),
        PatternMetric::Hamming => collect_patterns(&mut hamming_patterns(n), usize::MAX),
    };
    let weight = |s: &[usize]| -> f64 {
        match metric {
            PatternMetric::Eta => s.iter().map(|&r| rel[r - 1]).sum(),
            PatternMetric::Logistic => s.iter().sum::<usize>() as f64,
            PatternMetric::Hamming => s.len() as f64,
        }
    };
    if show {
        for (s, w) in &table.patterns {
            println!("{w:>10.4} {s:?}");
        }
    }
    let same_sets = produced == table.sets();
    let same_weights = produced.len() == table.len()
        && produced
            .iter()
            .zip(table.weights())
            .all(|(s, w)| (weight(s) - w).abs() <= 1e-9 * w.abs().max(1.0));
    println!("{metric}: {} patterns, order identical: {same_sets}, weights identical: {same_weights}", table.len());
    if !same_weights {
        bail!("generator disagrees with the brute-force sort");
    }
    Ok(())
}

fn verify_ml(n: usize, k: usize, trials: u64, seed: u64) -> Result<()> {
    let code = random_linear_code(n, k, seed)?;
    let sched = QuerySchedule::unlimited(ScheduleKind::ExactEta);
    let mut mismatches = 0u64;
    for t in 0..trials {
        let mut rng = frame_rng(seed, 0, t);
        let hard = BitWord::from_bits(&(0..n).map(|_| rng.gen_range(0..2u8)).collect::<Vec<_>>());
        let rel: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 4.0).collect();
        let fast = grand_decode(&hard, Some(&rel[..]), &sched, &code)?;
        let slow = exhaustive_ml_decode(&hard, &rel, &code)?;
        let eta_slow = disagreement_weight(&hard, &slow, &rel);
        if (fast.found_weight - eta_slow).abs() > 1e-9 * eta_slow.max(1.0) {
            mismatches += 1;
        }
    }
    println!("[{n},{k}] code, {trials} trials: {mismatches} eta mismatches");
    if mismatches > 0 {
        bail!("SGRAND disagrees with exhaustive ML");
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate { cfg, output_dir } => simulate(cfg, output_dir),
        Command::ProfileReliability {
            cfg,
            snr_db,
            frames,
            output,
        } => profile(cfg, snr_db, frames, output),
        Command::Verify { check } => match check {
            Verify::AnalyticBler { snr_db, n } => {
                let p = analytic_uncoded_bler(snr_db, ChannelKind::Rayleigh, Modulation::Bpsk, n)?;
                println!("{p:.6e}");
                Ok(())
            }
            Verify::Patterns { metric, rel, show } => verify_patterns(metric, rel, show),
            Verify::Ml { n, k, trials, seed } => verify_ml(n, k, trials, seed),
        },
    }
}
