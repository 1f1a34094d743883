//! Gray-mapped QAM constellations, hard slicing and per-symbol LLRs.
//!
//! LLR sign convention: positive means bit 1 is more likely,
//! `λ = log Pr(c = 1) / Pr(c = 0)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bits::BitWord;
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// LLR magnitudes are clamped to this many nats.
pub const LLR_CLAMP: f64 = 60.0;

/// A frame of transmitted or received symbols.
pub type SymbolFrame<T> = Vec<Complex<T>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Bpsk,
    Qpsk,
    #[serde(alias = "16qam")]
    Qam16,
    #[serde(alias = "64qam")]
    Qam64,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam64 => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "qam16",
            Modulation::Qam64 => "qam64",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" => Ok(Modulation::Qpsk),
            "qam16" | "16qam" => Ok(Modulation::Qam16),
            "qam64" | "64qam" => Ok(Modulation::Qam64),
            _ => invalid(format!("unknown modulation {s:?}")),
        }
    }
}

/// Unit-energy constellation. The point at index `i` carries label `i`;
/// bit `j` of the symbol is bit `q − 1 − j` of the label (MSB first).
#[derive(Clone, Debug)]
pub struct Constellation<T> {
    modulation: Modulation,
    q: usize,
    points: Vec<Complex<T>>,
}

/// Gray PAM amplitude for bits `c0 c1 …` (c0 is the sign bit, `b ↦ 1 − 2b`).
fn pam_amplitude(bits: &[bool]) -> f64 {
    fn magnitude(rest: &[bool], level: u32) -> f64 {
        if level == 1 {
            return 1.0;
        }
        let s = if rest[0] { -1.0 } else { 1.0 };
        f64::from(1u32 << (level - 1)) - s * magnitude(&rest[1..], level - 1)
    }
    let sign = if bits[0] { -1.0 } else { 1.0 };
    sign * magnitude(&bits[1..], bits.len() as u32)
}

impl<T: Real> Constellation<T> {
    pub fn new(modulation: Modulation) -> Self {
        let q = modulation.bits_per_symbol();
        let size = 1usize << q;
        let points = (0..size)
            .map(|label| {
                let bits: Vec<bool> = (0..q).map(|j| (label >> (q - 1 - j)) & 1 == 1).collect();
                if q == 1 {
                    return Complex::new(T::lit(pam_amplitude(&bits)), T::zero());
                }
                // Even symbol bits drive the in-phase axis, odd bits quadrature.
                let i_bits: Vec<bool> = bits.iter().step_by(2).copied().collect();
                let q_bits: Vec<bool> = bits.iter().skip(1).step_by(2).copied().collect();
                let scale = (2.0 * (size as f64 - 1.0) / 3.0).sqrt();
                Complex::new(
                    T::lit(pam_amplitude(&i_bits) / scale),
                    T::lit(pam_amplitude(&q_bits) / scale),
                )
            })
            .collect();
        Self {
            modulation,
            q,
            points,
        }
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    /// Bits per symbol.
    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    #[inline]
    pub fn label(&self, index: usize) -> usize {
        index
    }

    /// Bit `j` of the label of point `index`.
    #[inline]
    pub fn label_bit(&self, index: usize, j: usize) -> bool {
        (index >> (self.q - 1 - j)) & 1 == 1
    }

    pub fn point_for_bits(&self, bits: impl IntoIterator<Item = bool>) -> Complex<T> {
        let label = bits.into_iter().fold(0usize, |acc, b| (acc << 1) | usize::from(b));
        self.points[label]
    }

    pub fn mean_energy(&self) -> T {
        let total = self.points.iter().fold(T::zero(), |acc, p| acc + p.norm_sqr());
        total / T::from_usize(self.points.len()).expect("small")
    }
}

/// Maps a word onto symbols, `q` consecutive bits per symbol.
pub fn map_bits<T: Real>(word: &BitWord, cons: &Constellation<T>) -> Result<SymbolFrame<T>> {
    let q = cons.q();
    if !word.len().is_multiple_of(q) {
        return invalid(format!("word length {} not divisible by q = {q}", word.len()));
    }
    Ok((0..word.len() / q)
        .map(|i| cons.point_for_bits((0..q).map(|j| word.get(i * q + j))))
        .collect())
}

/// Nearest constellation point; ties go to the lowest index.
#[inline]
pub fn slice<T: Real>(y_eq: Complex<T>, cons: &Constellation<T>) -> usize {
    let mut best = 0;
    let mut best_d = (y_eq - cons.points[0]).norm_sqr();
    for (i, p) in cons.points.iter().enumerate().skip(1) {
        let d = (y_eq - p).norm_sqr();
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Writes the `q` label bits of point `index` into `out` starting at `offset`.
#[inline]
pub(crate) fn write_label<T: Real>(cons: &Constellation<T>, index: usize, out: &mut BitWord, offset: usize) {
    for j in 0..cons.q() {
        if cons.label_bit(index, j) {
            out.set(offset + j, true);
        }
    }
}

/// Slices every symbol and concatenates the labels.
pub fn demap_hard<T: Real>(frame: &[Complex<T>], cons: &Constellation<T>) -> BitWord {
    let q = cons.q();
    let mut out = BitWord::zeros(frame.len() * q);
    for (i, &y) in frame.iter().enumerate() {
        write_label(cons, slice(y, cons), &mut out, i * q);
    }
    out
}

#[inline]
pub(crate) fn clamp_llr<T: Real>(v: T) -> T {
    let c = T::lit(LLR_CLAMP);
    v.max(-c).min(c)
}

fn check_sigma2<T: Real>(sigma2: T) -> Result<()> {
    if sigma2 > T::zero() {
        Ok(())
    } else {
        invalid(format!("noise variance must be positive, got {sigma2}"))
    }
}

/// Max-log LLRs written into `out` (length `q`); no validation.
#[inline]
pub(crate) fn maxlog_into<T: Real>(
    y: Complex<T>,
    h: Complex<T>,
    sigma2: T,
    cons: &Constellation<T>,
    out: &mut [T],
) {
    maxlog_raw_into(y, h, sigma2, cons, out);
    for v in out.iter_mut() {
        *v = clamp_llr(*v);
    }
}

/// Unclamped max-log LLRs.
#[inline]
pub(crate) fn maxlog_raw_into<T: Real>(
    y: Complex<T>,
    h: Complex<T>,
    sigma2: T,
    cons: &Constellation<T>,
    out: &mut [T],
) {
    let q = cons.q();
    let inf = T::infinity();
    let mut min0 = [inf; 8];
    let mut min1 = [inf; 8];
    for (idx, &x) in cons.points.iter().enumerate() {
        let d = (y - h * x).norm_sqr();
        for j in 0..q {
            if cons.label_bit(idx, j) {
                min1[j] = min1[j].min(d);
            } else {
                min0[j] = min0[j].min(d);
            }
        }
    }
    for j in 0..q {
        out[j] = (min0[j] - min1[j]) / sigma2;
    }
}

/// Max-log LLRs of the `q` bits carried by `y = h·x + n`.
pub fn llr_maxlog_symbol<T: Real>(
    y: Complex<T>,
    h: Complex<T>,
    sigma2: T,
    cons: &Constellation<T>,
) -> Result<Vec<T>> {
    check_sigma2(sigma2)?;
    let mut out = vec![T::zero(); cons.q()];
    maxlog_into(y, h, sigma2, cons, &mut out);
    Ok(out)
}

fn log_sum_exp<T: Real>(vals: &[T]) -> T {
    let m = vals.iter().copied().fold(T::neg_infinity(), T::max);
    if m == T::neg_infinity() {
        return m;
    }
    m + vals.iter().map(|&v| (v - m).exp()).fold(T::zero(), |a, b| a + b).ln()
}

/// Exact LLRs under uniform priors, computed with log-sum-exp.
pub fn llr_exact_symbol<T: Real>(
    y: Complex<T>,
    h: Complex<T>,
    sigma2: T,
    cons: &Constellation<T>,
) -> Result<Vec<T>> {
    check_sigma2(sigma2)?;
    let metrics: Vec<T> = cons
        .points
        .iter()
        .map(|&x| -(y - h * x).norm_sqr() / sigma2)
        .collect();
    Ok((0..cons.q())
        .map(|j| {
            let pick = |bit: bool| -> Vec<T> {
                (0..metrics.len()).filter(|&i| cons.label_bit(i, j) == bit).map(|i| metrics[i]).collect()
            };
            clamp_llr(log_sum_exp(&pick(true)) - log_sum_exp(&pick(false)))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn bpsk_convention() {
        let cons = Constellation::<f64>::new(Modulation::Bpsk);
        let f = map_bits(&BitWord::parse("01").unwrap(), &cons).unwrap();
        assert_eq!(f, vec![C::new(1.0, 0.0), C::new(-1.0, 0.0)]);
        assert_eq!(demap_hard(&[C::new(-0.2, 0.0)], &cons).to_string(), "1");
        assert_eq!(slice(C::new(0.1, 0.0), &cons), 0);
    }

    #[test]
    fn qpsk_zero_word() {
        let cons = Constellation::<f64>::new(Modulation::Qpsk);
        let f = map_bits(&BitWord::parse("00").unwrap(), &cons).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((f[0] - C::new(r, r)).norm() < 1e-15);
        let w = demap_hard(&[C::new(-r, r)], &cons);
        assert_eq!(w.to_string(), "10");
    }

    #[test]
    fn unit_energy_all() {
        for m in [Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64] {
            let cons = Constellation::<f64>::new(m);
            assert!((cons.mean_energy() - 1.0).abs() < 1e-12, "{m}");
        }
    }

    #[test]
    fn divisibility_checked() {
        let cons = Constellation::<f64>::new(Modulation::Qam16);
        assert!(map_bits(&BitWord::zeros(6), &cons).is_err());
    }

    #[test]
    fn nonpositive_sigma_rejected() {
        let cons = Constellation::<f64>::new(Modulation::Bpsk);
        let one = C::new(1.0, 0.0);
        assert!(llr_maxlog_symbol(one, one, 0.0, &cons).is_err());
        assert!(llr_exact_symbol(one, one, -1.0, &cons).is_err());
    }

    #[test]
    fn bpsk_maxlog_values() {
        let cons = Constellation::<f64>::new(Modulation::Bpsk);
        let one = C::new(1.0, 0.0);
        assert_eq!(llr_maxlog_symbol(C::new(0.0, 0.0), one, 1.0, &cons).unwrap(), vec![0.0]);
        // |0.5 - 1|² - |0.5 + 1|² = 0.25 - 2.25
        let l = llr_maxlog_symbol(C::new(0.5, 0.0), one, 1.0, &cons).unwrap();
        assert!((l[0] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn clamped_at_sixty() {
        let cons = Constellation::<f64>::new(Modulation::Bpsk);
        let one = C::new(1.0, 0.0);
        let l = llr_maxlog_symbol(C::new(-1.0, 0.0), one, 1e-3, &cons).unwrap();
        assert_eq!(l[0], LLR_CLAMP);
    }

    #[test]
    fn f32_constellation() {
        let cons = Constellation::<f32>::new(Modulation::Qam64);
        assert!((cons.mean_energy() - 1.0).abs() < 1e-5);
    }
}
