//! Rank-ordered reliability profiles: per-rank means of sorted soft and
//! pseudo-soft reliabilities over many frames.

use std::io::Write;

use crate::channel::{apply_channel, draw_channel, frame_rng, SnrPoint};
use crate::equalize::{equalize, pseudo_soft, soft_reliabilities, Detector};
use crate::error::{Error, Result};
use crate::modem::map_bits;

use super::{SimConfig, Simulation};

/// Series order used by [`frame_reliabilities`] and the profile CSV.
pub const SERIES_NAMES: [&str; 6] = ["soft_ml", "soft_zf", "soft_mmse", "psoft_ml", "psoft_zf", "psoft_mmse"];

const DETECTORS: [Detector; 3] = [Detector::Ml, Detector::Zf, Detector::Mmse];

#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityProfile {
    pub snr_db: f64,
    pub frames: u64,
    /// `mean[s][r]`: mean of the `r`-th smallest value of series `s`.
    pub mean: Vec<Vec<f64>>,
}

impl ReliabilityProfile {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        SERIES_NAMES.iter().position(|&s| s == name).map(|i| self.mean[i].as_slice())
    }

    /// Columns `rank` (1-based) followed by [`SERIES_NAMES`].
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
        let mut header = vec!["rank".to_string()];
        header.extend(SERIES_NAMES.iter().map(|s| s.to_string()));
        w.write_record(&header).map_err(io)?;
        let n = self.mean.first().map_or(0, Vec::len);
        for r in 0..n {
            let mut row = vec![(r + 1).to_string()];
            row.extend(self.mean.iter().map(|s| s[r].to_string()));
            w.write_record(&row).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Unsorted reliabilities of one frame for every series, restricted to the
/// `n` code bits.
pub fn frame_reliabilities(sim: &Simulation, snr_db: f64, frame_index: u64) -> Result<Vec<Vec<f64>>> {
    let snr = SnrPoint::from_db(snr_db);
    let n = sim.code().n();
    let cons = sim.constellation();
    let mut rng = frame_rng(sim.config().master_seed, 0, frame_index);
    let (tx, _) = sim.draw_codeword(&mut rng)?;
    let x = map_bits(&tx, cons)?;
    let ch = draw_channel::<f64, _>(&sim.config().channel.model()?, x.len(), &snr, &mut rng);
    let y = apply_channel(&x, &ch, &mut rng)?;
    let mut soft = Vec::with_capacity(3);
    let mut psoft = Vec::with_capacity(3);
    for det in DETECTORS {
        let frame = equalize(&y, &ch, det)?;
        let mut s = soft_reliabilities(&y, &ch, &frame, cons)?;
        s.truncate(n);
        soft.push(s);
        let mut p = pseudo_soft(&frame, cons.q());
        p.truncate(n);
        psoft.push(p);
    }
    soft.extend(psoft);
    Ok(soft)
}

/// Averages each series' ascending-sorted reliabilities over `num_frames`.
pub fn profile_reliability(config: &SimConfig, snr_db: f64, num_frames: u64) -> Result<ReliabilityProfile> {
    let sim = Simulation::new(config.clone())?;
    let n = sim.code().n();
    let mut sums = vec![vec![0.0f64; n]; SERIES_NAMES.len()];
    for f in 0..num_frames {
        for (acc, mut s) in sums.iter_mut().zip(frame_reliabilities(&sim, snr_db, f)?) {
            s.sort_by(f64::total_cmp);
            for (a, v) in acc.iter_mut().zip(s) {
                *a += v;
            }
        }
    }
    let scale = if num_frames == 0 { 0.0 } else { 1.0 / num_frames as f64 };
    for s in &mut sums {
        for v in s.iter_mut() {
            *v *= scale;
        }
    }
    Ok(ReliabilityProfile {
        snr_db,
        frames: num_frames,
        mean: sums,
    })
}
