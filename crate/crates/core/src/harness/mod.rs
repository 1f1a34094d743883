//! Seeded Monte-Carlo block-error-rate sweeps and reliability profiling.
//!
//! Every frame draws its randomness from a generator keyed by
//! `(master_seed, snr_index, frame_index)`. Frames are simulated in chunks
//! whose boundaries depend only on results already seen, and the stop rule
//! is applied by scanning frames in index order, so the output does not
//! depend on how many worker threads did the work.

mod config;
mod profile;

pub use config::{
    apply_override, ChannelSpec, CodeSpec, QueryBudget, SimConfig, Softness, SnrGrid, StopRule,
    WORKERS_ENV,
};
pub use profile::{frame_reliabilities, profile_reliability, ReliabilityProfile, SERIES_NAMES};

use std::fs::File;
use std::io::Write;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitWord;
use crate::channel::{apply_channel, draw_channel, frame_rng, FadingModel, SnrPoint};
use crate::codebook::LinearCode;
use crate::equalize::{detect_hard, pseudo_soft, soft_reliabilities};
use crate::error::{Error, Result};
use crate::grand::{DecodeResult, Decoder, DecoderKind, QuerySchedule};
use crate::modem::{map_bits, Constellation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameResult {
    pub error: bool,
    pub queries: u64,
    pub abandoned: bool,
    pub deep_fades: u64,
}

/// One row of a BLER curve. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub snr_db: f64,
    pub frames: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub avg_queries: f64,
    pub p99_queries: u64,
    pub abandon_rate: f64,
    pub deep_fade_count: u64,
    pub wallclock_seconds: f64,
}

/// A validated configuration with its code and constellation built.
#[derive(Clone, Debug)]
pub struct Simulation {
    config: SimConfig,
    code: LinearCode,
    cons: Constellation<f64>,
    fading: FadingModel,
    schedule: QuerySchedule,
    /// Known zero bits appended so the code-word fills whole symbols.
    pad: usize,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let code = config.build_code()?;
        let cons = Constellation::new(config.modulation);
        let q = cons.q();
        let pad = (q - code.n() % q) % q;
        Ok(Self {
            fading: config.channel.model()?,
            schedule: config.schedule(),
            config,
            code,
            cons,
            pad,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn constellation(&self) -> &Constellation<f64> {
        &self.cons
    }

    pub fn pad_bits(&self) -> usize {
        self.pad
    }

    pub fn decoder(&self) -> Decoder<'_> {
        Decoder::new(&self.code)
    }

    /// Draws a payload and returns its padded transmit word and code-word.
    pub(crate) fn draw_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(BitWord, BitWord)> {
        let (n, k) = (self.code.n(), self.code.k());
        let mut info = BitWord::zeros(k);
        let mut chunk = 0u64;
        for i in 0..k {
            if i % 64 == 0 {
                chunk = rng.gen();
            }
            info.set(i, chunk >> (i % 64) & 1 == 1);
        }
        let c = self.code.encode(&info)?;
        let mut tx = BitWord::zeros(n + self.pad);
        for j in c.ones() {
            tx.set(j, true);
        }
        Ok((tx, c))
    }

    /// Simulates one frame at `snr_db`, keyed by `(snr_index, frame_index)`.
    pub fn run_frame_at(
        &self,
        decoder: &mut Decoder<'_>,
        snr_db: f64,
        snr_index: u64,
        frame_index: u64,
    ) -> Result<(FrameResult, DecodeResult)> {
        let cfg = &self.config;
        let n = self.code.n();
        let snr = SnrPoint::from_db(snr_db);
        let mut rng = frame_rng(cfg.master_seed, snr_index, frame_index);
        let (tx, c) = self.draw_codeword(&mut rng)?;
        let x = map_bits(&tx, &self.cons)?;
        let ch = draw_channel::<f64, _>(&self.fading, x.len(), &snr, &mut rng);
        let y = apply_channel(&x, &ch, &mut rng)?;
        let (hard, frame) = detect_hard(&y, &ch, cfg.detector, &self.cons)?;
        let hard = if self.pad > 0 { hard.slice(0, n) } else { hard };
        let rel = if cfg.decoder == DecoderKind::GrandHard {
            None
        } else {
            let mut r = match cfg.softness {
                Softness::Soft => soft_reliabilities(&y, &ch, &frame, &self.cons)?,
                Softness::Psoft => pseudo_soft(&frame, self.cons.q()),
                Softness::Hard => unreachable!("rejected by validation"),
            };
            r.truncate(n);
            Some(r)
        };
        let d = decoder.decode(&hard, rel.as_deref(), &self.schedule)?;
        let fr = FrameResult {
            error: d.abandoned || d.word != c,
            queries: d.queries,
            abandoned: d.abandoned,
            deep_fades: frame.deep_fades as u64,
        };
        Ok((fr, d))
    }

    /// Simulates frame `frame_index` of SNR point `snr_index` of the config.
    pub fn run_frame(&self, decoder: &mut Decoder<'_>, snr_index: usize, frame_index: u64) -> Result<FrameResult> {
        let snrs = self.config.snr_points();
        let snr_db = *snrs.get(snr_index).ok_or_else(|| {
            Error::InvalidArgument(format!("SNR index {snr_index} out of range ({} points)", snrs.len()))
        })?;
        Ok(self.run_frame_at(decoder, snr_db, snr_index as u64, frame_index)?.0)
    }

    /// Runs one SNR point until the stop rule fires.
    pub fn run_point(&self, pool: &rayon::ThreadPool, snr_db: f64, snr_index: u64) -> Result<CurvePoint> {
        let stop = self.config.stop;
        let start = Instant::now();
        let mut results: Vec<FrameResult> = Vec::new();
        let mut errors = 0u64;
        let mut done = false;
        while !done {
            let have = results.len() as u64;
            let chunk = next_chunk(have, errors, &stop);
            let batch: Vec<FrameResult> = pool.install(|| {
                (have..have + chunk)
                    .into_par_iter()
                    .map_init(
                        || self.decoder(),
                        |dec, f| self.run_frame_at(dec, snr_db, snr_index, f).map(|r| r.0),
                    )
                    .collect::<Result<Vec<_>>>()
            })?;
            for r in batch {
                results.push(r);
                errors += r.error as u64;
                if errors >= stop.min_block_errors || results.len() as u64 >= stop.max_frames {
                    done = true;
                    break;
                }
            }
        }
        Ok(summarize(snr_db, &results, start.elapsed().as_secs_f64()))
    }

    /// Sweeps all configured SNR points. Output files, when configured, are
    /// created before the first frame is simulated.
    pub fn run_curve(&self) -> Result<Vec<CurvePoint>> {
        let sinks = match (self.config.csv_path(), self.config.json_path()) {
            (Some(c), Some(j)) => {
                if let Some(dir) = c.parent() {
                    std::fs::create_dir_all(dir)?;
                }
                Some((File::create(c)?, File::create(j)?))
            }
            _ => None,
        };
        let pool = self.pool()?;
        let points = self
            .config
            .snr_points()
            .iter()
            .enumerate()
            .map(|(i, &s)| self.run_point(&pool, s, i as u64))
            .collect::<Result<Vec<_>>>()?;
        if let Some((csv_file, json_file)) = sinks {
            write_csv(csv_file, &points)?;
            write_json(json_file, &self.config, &points)?;
        }
        Ok(points)
    }

    /// Steps SNR upward from `start_db` until a point's BLER falls below
    /// `target` or `max_points` points have run; returns every point.
    pub fn sweep_until_below(&self, start_db: f64, step_db: f64, target: f64, max_points: usize) -> Result<Vec<CurvePoint>> {
        let pool = self.pool()?;
        let mut out = Vec::new();
        for i in 0..max_points {
            let p = self.run_point(&pool, start_db + i as f64 * step_db, i as u64)?;
            let below = p.bler < target;
            out.push(p);
            if below {
                break;
            }
        }
        Ok(out)
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.resolved_workers())
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
    }
}

/// Chunk size for the next batch, from counts already accumulated.
fn next_chunk(frames: u64, errors: u64, stop: &StopRule) -> u64 {
    const MIN: u64 = 64;
    const MAX: u64 = 1 << 16;
    let want = if errors == 0 {
        (2 * frames).max(MIN)
    } else {
        let missing = stop.min_block_errors.saturating_sub(errors);
        (missing.saturating_mul(frames) / errors).saturating_mul(21) / 20 + 16
    };
    want.clamp(MIN, MAX).min(stop.max_frames - frames)
}

fn summarize(snr_db: f64, results: &[FrameResult], seconds: f64) -> CurvePoint {
    let frames = results.len() as u64;
    let block_errors = results.iter().filter(|r| r.error).count() as u64;
    let abandoned = results.iter().filter(|r| r.abandoned).count() as u64;
    let mut queries: Vec<u64> = results.iter().map(|r| r.queries).collect();
    queries.sort_unstable();
    let total: u64 = queries.iter().sum();
    let ratio = |x: u64| if frames == 0 { 0.0 } else { x as f64 / frames as f64 };
    let p99 = if frames == 0 {
        0
    } else {
        let rank = ((0.99 * frames as f64).ceil() as usize).max(1);
        queries[rank - 1]
    };
    CurvePoint {
        snr_db,
        frames,
        block_errors,
        bler: ratio(block_errors),
        avg_queries: ratio(total),
        p99_queries: p99,
        abandon_rate: ratio(abandoned),
        deep_fade_count: results.iter().map(|r| r.deep_fades).sum(),
        wallclock_seconds: seconds,
    }
}

pub fn write_csv<W: Write>(sink: W, points: &[CurvePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    if points.is_empty() {
        w.write_record([
            "snr_db",
            "frames",
            "block_errors",
            "bler",
            "avg_queries",
            "p99_queries",
            "abandon_rate",
            "deep_fade_count",
            "wallclock_seconds",
        ])
        .map_err(csv_err)?;
    }
    for p in points {
        w.serialize(p).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut sink: W, config: &SimConfig, points: &[CurvePoint]) -> Result<()> {
    let doc = serde_json::json!({ "config": config, "points": points });
    serde_json::to_writer_pretty(&mut sink, &doc).map_err(|e| Error::Io(e.into()))?;
    sink.write_all(b"\n")?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// Runs the configured sweep; see [`Simulation::run_curve`].
pub fn run_curve(config: &SimConfig) -> Result<Vec<CurvePoint>> {
    Simulation::new(config.clone())?.run_curve()
}

/// SNR at which BLER crosses `target`, interpolating `log10(BLER)` linearly
/// between the first pair of adjacent points that straddles it.
pub fn required_snr(points: &[CurvePoint], target: f64) -> Option<f64> {
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.bler >= target && b.bler < target {
            if b.bler <= 0.0 {
                return Some(b.snr_db);
            }
            let (la, lb, lt) = (a.bler.log10(), b.bler.log10(), target.log10());
            return Some(a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(snr: f64, bler: f64) -> CurvePoint {
        CurvePoint {
            snr_db: snr,
            frames: 1000,
            block_errors: (bler * 1000.0) as u64,
            bler,
            avg_queries: 1.0,
            p99_queries: 1,
            abandon_rate: 0.0,
            deep_fade_count: 0,
            wallclock_seconds: 0.0,
        }
    }

    #[test]
    fn interpolation_in_log_domain() {
        let pts = [point(0.0, 1e-1), point(2.0, 1e-2), point(4.0, 1e-4)];
        let s = required_snr(&pts, 1e-3).unwrap();
        assert!((s - 3.0).abs() < 1e-12);
        assert_eq!(required_snr(&pts[..2], 1e-3), None);
    }

    #[test]
    fn chunk_respects_frame_cap() {
        let stop = StopRule {
            min_block_errors: 200,
            max_frames: 100,
        };
        assert_eq!(next_chunk(0, 0, &stop), 64);
        assert_eq!(next_chunk(64, 0, &stop), 36);
        let stop = StopRule::default();
        assert_eq!(next_chunk(1000, 100, &stop), 1066);
    }

    #[test]
    fn p99_nearest_rank() {
        let rs: Vec<FrameResult> = (1..=200)
            .map(|q| FrameResult {
                error: false,
                queries: q,
                abandoned: false,
                deep_fades: 0,
            })
            .collect();
        let p = summarize(0.0, &rs, 0.0);
        assert_eq!(p.p99_queries, 198);
        assert_eq!(p.avg_queries, 100.5);
    }
}
