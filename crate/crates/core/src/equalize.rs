//! Linear equalization, hard detection and pseudo-soft reliabilities.
//!
//! After ZF or MMSE filtering each symbol sees its own effective noise
//! variance, `σ²/|h|²` or `σ²/(|h|² + σ²)`. Its inverse, repeated over the
//! `q` bits of the symbol, is the pseudo-soft reliability handed to the
//! decoder instead of per-bit LLRs.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bits::BitWord;
use crate::channel::ChannelRealization;
use crate::error::{invalid, Error, Result};
use crate::modem::{maxlog_into, maxlog_raw_into, slice, write_label, Constellation};
use crate::scalar::Real;

/// Fading magnitudes below this are raised to it before ZF inversion.
pub const DEEP_FADE_FLOOR: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detector {
    Zf,
    Mmse,
    Ml,
}

impl FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zf" => Ok(Detector::Zf),
            "mmse" => Ok(Detector::Mmse),
            "ml" => Ok(Detector::Ml),
            _ => invalid(format!("unknown detector {s:?}")),
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Detector::Zf => "zf",
            Detector::Mmse => "mmse",
            Detector::Ml => "ml",
        })
    }
}

/// Equalizer output with the per-symbol post-equalization noise variance.
/// For the ML detector the samples pass through unfiltered.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualizedFrame<T> {
    pub y_eq: Vec<Complex<T>>,
    pub post_var: Vec<T>,
    pub detector: Detector,
    /// Symbols whose fading magnitude was raised to [`DEEP_FADE_FLOOR`].
    pub deep_fades: usize,
}

/// Per-bit reliability magnitudes, constant over the bits of a symbol.
pub type PseudoSoftVector<T> = Vec<T>;

fn check_len<T>(y: &[Complex<T>], ch: &ChannelRealization<T>) -> Result<()> {
    if y.len() != ch.h.len() {
        return invalid(format!("{} samples but {} channel coefficients", y.len(), ch.h.len()));
    }
    Ok(())
}

/// Zero-forcing: `y/h`, post-variance `σ²/|h|²`.
pub fn zf_equalize<T: Real>(y: &[Complex<T>], ch: &ChannelRealization<T>) -> Result<EqualizedFrame<T>> {
    check_len(y, ch)?;
    let floor = T::lit(DEEP_FADE_FLOOR);
    let mut deep_fades = 0;
    let mut y_eq = Vec::with_capacity(y.len());
    let mut post_var = Vec::with_capacity(y.len());
    for ((&yi, &hi), &s) in y.iter().zip(&ch.h).zip(&ch.sigma2) {
        let mag = hi.norm();
        let h = if mag < floor {
            deep_fades += 1;
            if mag > T::zero() {
                hi * (floor / mag)
            } else {
                Complex::new(floor, T::zero())
            }
        } else {
            hi
        };
        y_eq.push(yi / h);
        post_var.push(s / h.norm_sqr());
    }
    Ok(EqualizedFrame {
        y_eq,
        post_var,
        detector: Detector::Zf,
        deep_fades,
    })
}

/// Linear MMSE: `h* y / (|h|² + σ²)`, post-variance `σ²/(|h|² + σ²)`.
/// The output is left biased.
pub fn mmse_equalize<T: Real>(y: &[Complex<T>], ch: &ChannelRealization<T>) -> Result<EqualizedFrame<T>> {
    check_len(y, ch)?;
    let (y_eq, post_var) = y
        .iter()
        .zip(&ch.h)
        .zip(&ch.sigma2)
        .map(|((&yi, &hi), &s)| {
            let den = hi.norm_sqr() + s;
            (hi.conj() * yi / den, s / den)
        })
        .unzip();
    Ok(EqualizedFrame {
        y_eq,
        post_var,
        detector: Detector::Mmse,
        deep_fades: 0,
    })
}

/// Unfiltered frame for the ML detector: samples and channel noise variance.
pub fn ml_frame<T: Real>(y: &[Complex<T>], ch: &ChannelRealization<T>) -> Result<EqualizedFrame<T>> {
    check_len(y, ch)?;
    Ok(EqualizedFrame {
        y_eq: y.to_vec(),
        post_var: ch.sigma2.clone(),
        detector: Detector::Ml,
        deep_fades: 0,
    })
}

pub fn equalize<T: Real>(
    y: &[Complex<T>],
    ch: &ChannelRealization<T>,
    detector: Detector,
) -> Result<EqualizedFrame<T>> {
    match detector {
        Detector::Zf => zf_equalize(y, ch),
        Detector::Mmse => mmse_equalize(y, ch),
        Detector::Ml => ml_frame(y, ch),
    }
}

/// Pseudo-soft reliabilities `1/post_var`, each repeated `q` times. For the
/// ML detector `post_var` is the channel noise variance itself.
pub fn pseudo_soft<T: Real>(frame: &EqualizedFrame<T>, q: usize) -> PseudoSoftVector<T> {
    let mut out = Vec::with_capacity(frame.post_var.len() * q);
    for &v in &frame.post_var {
        let r = v.recip();
        out.extend(std::iter::repeat_n(r, q));
    }
    out
}

/// Hard decisions. ML searches `argmin |y − h·x|`; ZF and MMSE slice the
/// equalized sample.
pub fn detect_hard<T: Real>(
    y: &[Complex<T>],
    ch: &ChannelRealization<T>,
    detector: Detector,
    cons: &Constellation<T>,
) -> Result<(BitWord, EqualizedFrame<T>)> {
    let frame = equalize(y, ch, detector)?;
    let q = cons.q();
    let mut word = BitWord::zeros(y.len() * q);
    match detector {
        Detector::Ml => {
            for (i, (&yi, &hi)) in y.iter().zip(&ch.h).enumerate() {
                let mut best = 0;
                let mut best_d = T::infinity();
                for (idx, &x) in cons.points().iter().enumerate() {
                    let d = (yi - hi * x).norm_sqr();
                    if d < best_d {
                        best = idx;
                        best_d = d;
                    }
                }
                write_label(cons, best, &mut word, i * q);
            }
        }
        Detector::Zf | Detector::Mmse => {
            for (i, &v) in frame.y_eq.iter().enumerate() {
                write_label(cons, slice(v, cons), &mut word, i * q);
            }
        }
    }
    Ok((word, frame))
}

/// Max-log LLRs of the equalized samples using the post-equalization
/// variance (ZF and MMSE only).
pub fn soft_llrs<T: Real>(frame: &EqualizedFrame<T>, cons: &Constellation<T>) -> Result<Vec<T>> {
    if frame.detector == Detector::Ml {
        return invalid("soft LLRs from an equalized frame need a ZF or MMSE detector");
    }
    let q = cons.q();
    let mut out = vec![T::zero(); frame.y_eq.len() * q];
    let one = Complex::new(T::one(), T::zero());
    for (i, (&y, &v)) in frame.y_eq.iter().zip(&frame.post_var).enumerate() {
        maxlog_into(y, one, v, cons, &mut out[i * q..(i + 1) * q]);
    }
    Ok(out)
}

/// Max-log LLRs straight from the channel output, `(1/σ²)(min₀|y−hx|² − min₁|y−hx|²)`.
pub fn ml_llrs<T: Real>(
    y: &[Complex<T>],
    ch: &ChannelRealization<T>,
    cons: &Constellation<T>,
) -> Result<Vec<T>> {
    check_len(y, ch)?;
    let q = cons.q();
    let mut out = vec![T::zero(); y.len() * q];
    for (i, ((&yi, &hi), &s)) in y.iter().zip(&ch.h).zip(&ch.sigma2).enumerate() {
        maxlog_into(yi, hi, s, cons, &mut out[i * q..(i + 1) * q]);
    }
    Ok(out)
}

/// Reliabilities `|λ|` for decoding: unclamped max-log magnitudes, so that
/// strong bits keep their relative order. Uses the post-equalization variance
/// for ZF/MMSE and the raw channel for ML.
pub fn soft_reliabilities<T: Real>(
    y: &[Complex<T>],
    ch: &ChannelRealization<T>,
    frame: &EqualizedFrame<T>,
    cons: &Constellation<T>,
) -> Result<Vec<T>> {
    check_len(y, ch)?;
    let q = cons.q();
    let mut out = vec![T::zero(); y.len() * q];
    let one = Complex::new(T::one(), T::zero());
    for i in 0..y.len() {
        let dst = &mut out[i * q..(i + 1) * q];
        match frame.detector {
            Detector::Ml => maxlog_raw_into(y[i], ch.h[i], ch.sigma2[i], cons, dst),
            Detector::Zf | Detector::Mmse => {
                maxlog_raw_into(frame.y_eq[i], one, frame.post_var[i], cons, dst)
            }
        }
    }
    for v in &mut out {
        *v = v.abs();
    }
    Ok(out)
}
