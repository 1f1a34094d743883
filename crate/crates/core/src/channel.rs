//! Fading-coefficient and noise synthesis.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Awgn,
    Rayleigh,
    Rician,
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "awgn" => Ok(ChannelKind::Awgn),
            "rayleigh" => Ok(ChannelKind::Rayleigh),
            "rician" => Ok(ChannelKind::Rician),
            _ => invalid(format!("unknown channel {s:?}")),
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::Rayleigh => "rayleigh",
            ChannelKind::Rician => "rician",
        })
    }
}

/// Per-symbol fading law. `k_factor` only matters for Rician fading.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FadingModel {
    pub kind: ChannelKind,
    pub k_factor: f64,
}

impl FadingModel {
    pub fn awgn() -> Self {
        Self {
            kind: ChannelKind::Awgn,
            k_factor: 0.0,
        }
    }

    pub fn rayleigh() -> Self {
        Self {
            kind: ChannelKind::Rayleigh,
            k_factor: 0.0,
        }
    }

    pub fn rician(k_factor: f64) -> Result<Self> {
        if !(k_factor >= 0.0 && k_factor.is_finite()) {
            return invalid(format!("Rician K-factor must be finite and nonnegative, got {k_factor}"));
        }
        Ok(Self {
            kind: ChannelKind::Rician,
            k_factor,
        })
    }
}

/// Operating point; SNR is per-symbol Es/N0 with unit-energy symbols.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrPoint {
    pub snr_db: f64,
    pub sigma2: f64,
}

impl SnrPoint {
    pub fn from_db(snr_db: f64) -> Self {
        Self {
            snr_db,
            sigma2: 10f64.powf(-snr_db / 10.0),
        }
    }
}

/// Fading coefficients and per-symbol noise variances for one frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization<T> {
    pub h: Vec<Complex<T>>,
    pub sigma2: Vec<T>,
}

impl<T: Real> ChannelRealization<T> {
    pub fn new(h: Vec<Complex<T>>, sigma2: Vec<T>) -> Result<Self> {
        if h.len() != sigma2.len() {
            return invalid("fading and variance vectors differ in length");
        }
        if sigma2.iter().any(|&s| s.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater)) {
            return invalid("noise variances must be positive");
        }
        Ok(Self { h, sigma2 })
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// Per-bit variance vector: each symbol variance repeated `q` times.
    pub fn bit_variances(&self, q: usize) -> Vec<T> {
        self.sigma2.iter().flat_map(|&s| std::iter::repeat_n(s, q)).collect()
    }
}

/// Circularly-symmetric complex Gaussian with `E|z|² = var`.
#[inline]
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, var: T) -> Complex<T> {
    let s = (var / T::lit(2.0)).sqrt();
    let re = T::standard_normal(rng);
    let im = T::standard_normal(rng);
    Complex::new(re * s, im * s)
}

/// Draws `m` independent fading coefficients with uniform noise variance.
pub fn draw_channel<T: Real, R: Rng + ?Sized>(
    model: &FadingModel,
    m: usize,
    snr: &SnrPoint,
    rng: &mut R,
) -> ChannelRealization<T> {
    let mut h = Vec::with_capacity(m);
    fill_fading(model, m, rng, &mut h);
    ChannelRealization {
        h,
        sigma2: vec![T::lit(snr.sigma2); m],
    }
}

pub(crate) fn fill_fading<T: Real, R: Rng + ?Sized>(
    model: &FadingModel,
    m: usize,
    rng: &mut R,
    h: &mut Vec<Complex<T>>,
) {
    h.clear();
    match model.kind {
        ChannelKind::Awgn => h.resize(m, Complex::new(T::one(), T::zero())),
        ChannelKind::Rayleigh => h.extend((0..m).map(|_| complex_gaussian(rng, T::one()))),
        ChannelKind::Rician => {
            let k = model.k_factor;
            let los = T::lit((k / (1.0 + k)).sqrt());
            let scatter = T::lit((1.0 / (1.0 + k)).sqrt());
            h.extend((0..m).map(|_| {
                let ra = complex_gaussian::<T, R>(rng, T::one());
                Complex::new(los, T::zero()) + ra * scatter
            }));
        }
    }
}

/// `y = h ⊙ x + n`.
pub fn apply_channel<T: Real, R: Rng + ?Sized>(
    x: &[Complex<T>],
    ch: &ChannelRealization<T>,
    rng: &mut R,
) -> Result<Vec<Complex<T>>> {
    if x.len() != ch.len() {
        return invalid(format!("{} symbols but {} channel coefficients", x.len(), ch.len()));
    }
    Ok(x.iter()
        .zip(&ch.h)
        .zip(&ch.sigma2)
        .map(|((&xi, &hi), &s)| hi * xi + complex_gaussian(rng, s))
        .collect())
}

/// Random stream for one frame, keyed by the master seed and SNR index with
/// the frame index selecting the ChaCha stream. Independent of how frames
/// are distributed across workers.
pub fn frame_rng(master_seed: u64, snr_index: u64, frame_index: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&snr_index.to_le_bytes());
    seed[16..24].copy_from_slice(b"psgrand1");
    let mut rng = ChaCha8Rng::from_seed(seed);
    rng.set_stream(frame_index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_to_sigma() {
        assert!((SnrPoint::from_db(10.0).sigma2 - 0.1).abs() < 1e-15);
        assert_eq!(SnrPoint::from_db(0.0).sigma2, 1.0);
    }

    #[test]
    fn awgn_is_unit() {
        let mut rng = frame_rng(1, 0, 0);
        let ch: ChannelRealization<f64> = draw_channel(&FadingModel::awgn(), 5, &SnrPoint::from_db(3.0), &mut rng);
        assert!(ch.h.iter().all(|&h| h == Complex::new(1.0, 0.0)));
    }

    #[test]
    fn huge_k_is_nearly_awgn() {
        let mut rng = frame_rng(2, 0, 0);
        let model = FadingModel::rician(1e9).unwrap();
        let ch: ChannelRealization<f64> = draw_channel(&model, 1000, &SnrPoint::from_db(0.0), &mut rng);
        assert!(ch.h.iter().all(|&h| (h - 1.0).norm() < 1e-4));
    }

    #[test]
    fn k_zero_matches_rayleigh_stream() {
        let snr = SnrPoint::from_db(0.0);
        let a: ChannelRealization<f64> = draw_channel(&FadingModel::rician(0.0).unwrap(), 64, &snr, &mut frame_rng(3, 1, 2));
        let b: ChannelRealization<f64> = draw_channel(&FadingModel::rayleigh(), 64, &snr, &mut frame_rng(3, 1, 2));
        for (x, y) in a.h.iter().zip(&b.h) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn deterministic_streams() {
        let x = vec![Complex::new(1.0f64, 0.0); 16];
        let ch = ChannelRealization::new(vec![Complex::new(0.5, 0.5); 16], vec![0.3; 16]).unwrap();
        let a = apply_channel(&x, &ch, &mut frame_rng(9, 2, 77)).unwrap();
        let b = apply_channel(&x, &ch, &mut frame_rng(9, 2, 77)).unwrap();
        let c = apply_channel(&x, &ch, &mut frame_rng(9, 2, 78)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn tiny_noise_passes_signal() {
        let x = vec![Complex::new(0.3f64, -0.7); 8];
        let ch = ChannelRealization::new(vec![Complex::new(1.0, 0.0); 8], vec![1e-30; 8]).unwrap();
        let y = apply_channel(&x, &ch, &mut frame_rng(0, 0, 0)).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn validation() {
        assert!(FadingModel::rician(-1.0).is_err());
        assert!(ChannelRealization::<f64>::new(vec![Complex::new(1.0, 0.0)], vec![0.0]).is_err());
        let ch = ChannelRealization::new(vec![Complex::new(1.0, 0.0); 2], vec![1.0; 2]).unwrap();
        assert!(apply_channel(&[Complex::new(1.0, 0.0)], &ch, &mut frame_rng(0, 0, 0)).is_err());
    }
}
