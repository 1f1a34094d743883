//! Deliberately naive reference implementations for cross-checking the fast
//! paths: full-sort pattern tables, exhaustive ML decoding and closed-form
//! uncoded error rates.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::bits::BitWord;
use crate::channel::{ChannelKind, SnrPoint};
use crate::codebook::LinearCode;
use crate::error::{invalid, Error, Result};
use crate::modem::Modulation;
use crate::scalar::Real;

/// Largest pattern length / code dimension the oracles will enumerate.
pub const ORACLE_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternMetric {
    Eta,
    Logistic,
    Hamming,
}

impl FromStr for PatternMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eta" => Ok(Self::Eta),
            "logistic" => Ok(Self::Logistic),
            "hamming" => Ok(Self::Hamming),
            _ => invalid(format!("unknown pattern metric '{s}'")),
        }
    }
}

impl fmt::Display for PatternMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Eta => "eta",
            Self::Logistic => "logistic",
            Self::Hamming => "hamming",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SortedPatternTable {
    /// `(sorted 1-based indices, weight)`, ascending by `(weight, |S|, lex)`.
    pub patterns: Vec<(Vec<usize>, f64)>,
}

impl SortedPatternTable {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.patterns.iter().map(|(_, w)| *w).collect()
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.patterns.iter().map(|(s, _)| s.clone()).collect()
    }
}

/// All `2^N` subsets of `1..=N` with their weights, fully sorted.
///
/// The index of `rel` is the pattern index, so pass rank-ordered
/// reliabilities to get a rank-domain table. `Eta` sums `rel` over the set in
/// ascending index order; the other metrics ignore `rel` values.
pub fn brute_sort_patterns<T: Real>(rel: &[T], metric: PatternMetric) -> Result<SortedPatternTable> {
    let n = rel.len();
    if n > ORACLE_CAP {
        return Err(Error::Refused(format!(
            "brute-force sort capped at N = {ORACLE_CAP}, got {n}"
        )));
    }
    let mut patterns: Vec<(Vec<usize>, f64)> = (0u32..1 << n)
        .map(|mask| {
            let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            let w = match metric {
                PatternMetric::Eta => set.iter().fold(T::zero(), |a, &i| a + rel[i - 1]).as_f64(),
                PatternMetric::Logistic => set.iter().sum::<usize>() as f64,
                PatternMetric::Hamming => set.len() as f64,
            };
            (set, w)
        })
        .collect();
    patterns.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .unwrap_or(Ordering::Equal)
            .then(a.0.len().cmp(&b.0.len()))
            .then_with(|| a.0.cmp(&b.0))
    });
    Ok(SortedPatternTable { patterns })
}

/// `Σ rel[j]` over the positions where `a` and `b` differ.
pub fn disagreement_weight<T: Real>(a: &BitWord, b: &BitWord, rel: &[T]) -> T {
    (0..a.len())
        .filter(|&j| a.get(j) != b.get(j))
        .fold(T::zero(), |acc, j| acc + rel[j])
}

/// Minimum-`η` code-word by enumerating all `2^k` code-words; ties go to the
/// lexicographically smallest code-word (position 0 most significant).
pub fn exhaustive_ml_decode<T: Real>(hard_word: &BitWord, rel: &[T], code: &LinearCode) -> Result<BitWord> {
    let (n, k) = (code.n(), code.k());
    if k > ORACLE_CAP {
        return Err(Error::Refused(format!(
            "exhaustive decoding capped at k = {ORACLE_CAP}, got {k}"
        )));
    }
    if hard_word.len() != n || rel.len() != n {
        return invalid(format!(
            "expected {n} bits and reliabilities, got {} and {}",
            hard_word.len(),
            rel.len()
        ));
    }
    let mut best: Option<(T, BitWord)> = None;
    for m in 0u64..1 << k {
        let mut c = BitWord::zeros(n);
        for i in 0..k {
            if m >> i & 1 == 1 {
                c.xor_assign(code.generator().row(i))?;
            }
        }
        let cost = disagreement_weight(hard_word, &c, rel);
        let better = match &best {
            None => true,
            Some((bc, bw)) => cost < *bc || (cost == *bc && c.to_bits() < bw.to_bits()),
        };
        if better {
            best = Some((cost, c));
        }
    }
    Ok(best.expect("at least the zero code-word").1)
}

/// Uncoded BPSK bit error rate over Rayleigh fading at average SNR `γ̄`.
pub fn rayleigh_bpsk_ber(snr_db: f64) -> f64 {
    let g = 1.0 / SnrPoint::from_db(snr_db).sigma2;
    0.5 * (1.0 - (g / (1.0 + g)).sqrt())
}

/// Block error rate of `n` independently faded uncoded BPSK bits.
pub fn analytic_uncoded_bler(snr_db: f64, channel: ChannelKind, modulation: Modulation, n: usize) -> Result<f64> {
    if channel != ChannelKind::Rayleigh || modulation != Modulation::Bpsk {
        return Err(Error::Refused(format!(
            "closed form only available for rayleigh + bpsk, got {channel} + {modulation}"
        )));
    }
    let p = rayleigh_bpsk_ber(snr_db);
    Ok(1.0 - (1.0 - p).powi(n as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::hamming_7_4;

    #[test]
    fn hamming_table_n3() {
        let t = brute_sort_patterns(&[0.0f64; 3], PatternMetric::Hamming).unwrap();
        let expect: Vec<Vec<usize>> = vec![
            vec![],
            vec![1],
            vec![2],
            vec![3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
            vec![1, 2, 3],
        ];
        assert_eq!(t.sets(), expect);
    }

    #[test]
    fn eta_table_powers_of_two() {
        let t = brute_sort_patterns(&[1.0f64, 2.0, 4.0], PatternMetric::Eta).unwrap();
        assert_eq!(t.weights(), (0..8).map(f64::from).collect::<Vec<_>>());
    }

    #[test]
    fn logistic_ignores_values() {
        let a = brute_sort_patterns(&[0.1f64, 5.0, 0.3, 9.0], PatternMetric::Logistic).unwrap();
        let b = brute_sort_patterns(&[1.0f64; 4], PatternMetric::Logistic).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn caps_refuse() {
        assert!(matches!(
            brute_sort_patterns(&[1.0f64; 21], PatternMetric::Hamming),
            Err(Error::Refused(_))
        ));
        assert!(analytic_uncoded_bler(0.0, ChannelKind::Awgn, Modulation::Bpsk, 1).is_err());
    }

    #[test]
    fn ml_on_codeword_is_identity() {
        let code = hamming_7_4();
        let c = code.encode(&BitWord::parse("1101").unwrap()).unwrap();
        assert_eq!(exhaustive_ml_decode(&c, &[1.0f64; 7], &code).unwrap(), c);
    }

    #[test]
    fn closed_form_values() {
        let p = analytic_uncoded_bler(0.0, ChannelKind::Rayleigh, Modulation::Bpsk, 1).unwrap();
        assert!((p - 0.5 * (1.0 - 0.5f64.sqrt())).abs() < 1e-15);
        assert!(rayleigh_bpsk_ber(200.0) < 1e-15);
    }
}
