//! Guessing Random Additive Noise Decoding.
//!
//! The decoder walks noise patterns from most to least likely, flips them
//! into the hard-decision word and stops at the first code-book member or
//! after the query budget is spent.

pub mod patterns;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitWord;
use crate::codebook::LinearCode;
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

pub use patterns::{
    collect_patterns, exact_eta_patterns, hamming_patterns, logistic_hamming_tie_patterns,
    logistic_patterns, ExactEtaPatterns, PatternStream, WeightedSubsets,
};

/// Default abandonment threshold for the long-code experiments.
pub const DEFAULT_MAX_QUERIES: u64 = 1_000_000;

/// Rank-to-position map: `perm[r]` is the bit position of rank `r + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankPermutation<T> {
    pub perm: Vec<usize>,
    /// Reliabilities in rank order (nondecreasing).
    pub sorted: Vec<T>,
}

impl<T: Real> RankPermutation<T> {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            sorted: vec![T::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Bit position of 1-based rank `r`.
    pub fn position(&self, r: usize) -> usize {
        self.perm[r - 1]
    }
}

/// Orders bit positions by ascending reliability, ties by position.
pub fn rank_bits<T: Real>(rel: &[T]) -> Result<RankPermutation<T>> {
    if let Some(v) = rel.iter().find(|&&v| v.is_nan() || v < T::zero()) {
        return invalid(format!("reliabilities must be nonnegative, got {v}"));
    }
    let mut perm: Vec<usize> = (0..rel.len()).collect();
    perm.sort_by(|&a, &b| rel[a].partial_cmp(&rel[b]).unwrap());
    let sorted = perm.iter().map(|&p| rel[p]).collect();
    Ok(RankPermutation { perm, sorted })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    Hamming,
    Logistic,
    LogisticHammingTie,
    ExactEta,
}

/// Pattern order plus abandonment budget (`None` = unlimited).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuerySchedule {
    pub kind: ScheduleKind,
    pub max_queries: Option<u64>,
}

impl QuerySchedule {
    pub fn new(kind: ScheduleKind, max_queries: Option<u64>) -> Result<Self> {
        if max_queries == Some(0) {
            return invalid("query budget must be at least 1");
        }
        Ok(Self { kind, max_queries })
    }

    pub fn unlimited(kind: ScheduleKind) -> Self {
        Self {
            kind,
            max_queries: None,
        }
    }
}

/// Decoder names as used in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    GrandHard,
    Orbgrand,
    OrbgrandHamTie,
    Sgrand,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] = [
        DecoderKind::GrandHard,
        DecoderKind::Orbgrand,
        DecoderKind::OrbgrandHamTie,
        DecoderKind::Sgrand,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::GrandHard => "grand-hard",
            DecoderKind::Orbgrand => "orbgrand",
            DecoderKind::OrbgrandHamTie => "orbgrand-ham-tie",
            DecoderKind::Sgrand => "sgrand",
        }
    }

    pub fn schedule_kind(self) -> ScheduleKind {
        match self {
            DecoderKind::GrandHard => ScheduleKind::Hamming,
            DecoderKind::Orbgrand => ScheduleKind::Logistic,
            DecoderKind::OrbgrandHamTie => ScheduleKind::LogisticHammingTie,
            DecoderKind::Sgrand => ScheduleKind::ExactEta,
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown decoder '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub word: BitWord,
    pub abandoned: bool,
    pub queries: u64,
    /// Metric value of the accepted pattern; 0 when abandoned.
    pub found_weight: f64,
}

/// Reusable decoder bound to one code; holds per-frame scratch buffers.
#[derive(Clone, Debug)]
pub struct Decoder<'c> {
    code: &'c LinearCode,
    cols: Vec<u64>,
    s0: Vec<u64>,
    acc: Vec<u64>,
}

impl<'c> Decoder<'c> {
    pub fn new(code: &'c LinearCode) -> Self {
        Self {
            code,
            cols: Vec::new(),
            s0: Vec::new(),
            acc: Vec::new(),
        }
    }

    pub fn code(&self) -> &LinearCode {
        self.code
    }

    pub fn decode<T: Real>(
        &mut self,
        hard_word: &BitWord,
        rel: Option<&[T]>,
        schedule: &QuerySchedule,
    ) -> Result<DecodeResult> {
        let n = self.code.n();
        if hard_word.len() != n {
            return invalid(format!(
                "hard word has {} bits, code length is {n}",
                hard_word.len()
            ));
        }
        if let Some(r) = rel {
            if r.len() != n {
                return invalid(format!("{} reliabilities for a length-{n} code", r.len()));
            }
        }
        let ranks = match (schedule.kind, rel) {
            (ScheduleKind::Hamming, _) => RankPermutation::identity(n),
            (_, Some(r)) => rank_bits(r)?,
            (_, None) => return invalid("reliabilities are required for soft schedules"),
        };
        match schedule.kind {
            ScheduleKind::Hamming => self.run(hard_word, &ranks, schedule, hamming_patterns(n)),
            ScheduleKind::Logistic => self.run(hard_word, &ranks, schedule, logistic_patterns(n)),
            ScheduleKind::LogisticHammingTie => {
                let stream = WeightedSubsets::from_tie_classes(&ranks.sorted);
                self.run(hard_word, &ranks, schedule, stream)
            }
            ScheduleKind::ExactEta => {
                let stream = ExactEtaPatterns::new(&ranks.sorted)?;
                self.run(hard_word, &ranks, schedule, stream)
            }
        }
    }

    fn run<T: Real, S: PatternStream>(
        &mut self,
        hard_word: &BitWord,
        ranks: &RankPermutation<T>,
        schedule: &QuerySchedule,
        mut stream: S,
    ) -> Result<DecodeResult> {
        let sw = self.code.syndrome_words();
        let n = self.code.n();
        self.cols.clear();
        for r in 0..n {
            self.cols.extend_from_slice(self.code.column(ranks.perm[r]));
        }
        self.s0 = self.code.syndrome(hard_word)?;
        self.acc.resize(sw, 0);
        let budget = schedule.max_queries.unwrap_or(u64::MAX);

        let mut queries = 0u64;
        while let Some(pattern) = stream.next_pattern() {
            queries += 1;
            let hit = match sw {
                0 => true,
                1 => {
                    let mut s = self.s0[0];
                    for &r in pattern {
                        s ^= self.cols[r - 1];
                    }
                    s == 0
                }
                _ => {
                    self.acc.copy_from_slice(&self.s0);
                    for &r in pattern {
                        let col = &self.cols[(r - 1) * sw..r * sw];
                        for (a, c) in self.acc.iter_mut().zip(col) {
                            *a ^= c;
                        }
                    }
                    self.acc.iter().all(|&w| w == 0)
                }
            };
            if hit {
                let mut word = hard_word.clone();
                for &r in pattern {
                    word.flip(ranks.perm[r - 1]);
                }
                if self.code.is_member(&word)? {
                    return Ok(DecodeResult {
                        word,
                        abandoned: false,
                        queries,
                        found_weight: stream.weight(),
                    });
                }
            }
            if queries >= budget {
                break;
            }
        }
        Ok(DecodeResult {
            word: hard_word.clone(),
            abandoned: true,
            queries,
            found_weight: 0.0,
        })
    }
}

/// One-shot decode; see [`Decoder`] for repeated use with one code.
pub fn grand_decode<T: Real>(
    hard_word: &BitWord,
    rel: Option<&[T]>,
    schedule: &QuerySchedule,
    code: &LinearCode,
) -> Result<DecodeResult> {
    Decoder::new(code).decode(hard_word, rel, schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::hamming_7_4;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_bits(&[3.0f64, 1.0, 2.0]).unwrap().perm, vec![1, 2, 0]);
        assert_eq!(rank_bits(&[1.0f32; 5]).unwrap().perm, vec![0, 1, 2, 3, 4]);
        assert!(rank_bits(&[1.0f64, -0.5]).is_err());
    }

    #[test]
    fn stair_step_symbols_stay_contiguous() {
        let rel = [5.0f64, 5.0, 5.0, 5.0, 1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 3.0, 3.0];
        let r = rank_bits(&rel).unwrap();
        assert_eq!(r.perm, vec![4, 5, 6, 7, 8, 9, 10, 11, 0, 1, 2, 3]);
    }

    #[test]
    fn codeword_needs_one_query() {
        let code = hamming_7_4();
        let c = code.encode(&BitWord::parse("1011").unwrap()).unwrap();
        let rel = [0.3f64, 0.1, 2.0, 0.7, 0.2, 0.9, 1.1];
        for kind in [
            ScheduleKind::Hamming,
            ScheduleKind::Logistic,
            ScheduleKind::LogisticHammingTie,
            ScheduleKind::ExactEta,
        ] {
            let d = grand_decode(&c, Some(&rel[..]), &QuerySchedule::unlimited(kind), &code).unwrap();
            assert_eq!(d.word, c);
            assert_eq!(d.queries, 1);
            assert!(!d.abandoned);
        }
    }

    #[test]
    fn hamming_corrects_single_error() {
        let code = hamming_7_4();
        let c = code.encode(&BitWord::parse("0110").unwrap()).unwrap();
        for j in 0..7 {
            let mut y = c.clone();
            y.flip(j);
            let sched = QuerySchedule::unlimited(ScheduleKind::Hamming);
            let d = grand_decode::<f64>(&y, None, &sched, &code).unwrap();
            assert_eq!(d.word, c);
            assert!(d.queries <= 8);
        }
    }

    #[test]
    fn budget_of_one_abandons() {
        let code = hamming_7_4();
        let mut y = code.encode(&BitWord::parse("0110").unwrap()).unwrap();
        y.flip(2);
        let sched = QuerySchedule::new(ScheduleKind::Hamming, Some(1)).unwrap();
        let d = grand_decode::<f64>(&y, None, &sched, &code).unwrap();
        assert!(d.abandoned);
        assert_eq!(d.queries, 1);
        assert_eq!(d.word, y);
        assert_eq!(d.found_weight, 0.0);
        assert!(QuerySchedule::new(ScheduleKind::Hamming, Some(0)).is_err());
    }

    #[test]
    fn soft_schedules_need_reliabilities() {
        let code = hamming_7_4();
        let y = BitWord::zeros(7);
        let sched = QuerySchedule::unlimited(ScheduleKind::Logistic);
        assert!(grand_decode::<f64>(&y, None, &sched, &code).is_err());
        assert!(grand_decode::<f64>(&BitWord::zeros(6), None, &sched, &code).is_err());
    }

    #[test]
    fn decoder_names_round_trip() {
        for d in DecoderKind::ALL {
            assert_eq!(d.name().parse::<DecoderKind>().unwrap(), d);
        }
    }
}
