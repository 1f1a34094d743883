//! Lazy noise-pattern generators.
//!
//! Every generator works in the rank domain: index `r` (1-based) names the
//! `r`-th least reliable bit. Each generator emits every subset of `1..=n`
//! exactly once, as a sorted index slice.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// A lending stream of rank-domain noise patterns.
pub trait PatternStream {
    /// Next pattern, or `None` once all `2^n` subsets have been produced.
    fn next_pattern(&mut self) -> Option<&[usize]>;

    /// Weight of the most recently emitted pattern under the stream's metric.
    fn weight(&self) -> f64;
}

/// Drains up to `limit` patterns into owned vectors.
pub fn collect_patterns<S: PatternStream>(stream: &mut S, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    while out.len() < limit {
        match stream.next_pattern() {
            Some(p) => out.push(p.to_vec()),
            None => break,
        }
    }
    out
}

/// Subsets ordered by `(Σ f(r), |S|, lexicographic)` for a nondecreasing
/// positive integer rank weight `f` whose consecutive values differ by at
/// most one.
///
/// `f ≡ 1` gives the Hamming order, `f(r) = r` the logistic-weight order of
/// basic ORBGRAND, and `f(r)` = rank of the tie class (symbol) holding bit
/// `r` the symbol-granular variant whose ties fall back to Hamming weight.
/// Patterns are built one at a time as partitions of the target weight into
/// distinct ranks.
#[derive(Clone, Debug)]
pub struct WeightedSubsets {
    n: usize,
    f: Vec<u64>,
    /// `prefix[i] = f(1) + … + f(i)`.
    prefix: Vec<u64>,
    target: u64,
    tuple: Vec<usize>,
    /// Scratch: weight of `tuple[..i]`.
    partial: Vec<u64>,
    started: bool,
    done: bool,
}

impl WeightedSubsets {
    fn from_weights(f: Vec<u64>) -> Self {
        debug_assert!(f.first().is_none_or(|&v| v >= 1));
        debug_assert!(f.windows(2).all(|p| p[1] == p[0] || p[1] == p[0] + 1));
        let mut prefix = Vec::with_capacity(f.len() + 1);
        prefix.push(0);
        for &v in &f {
            prefix.push(prefix.last().unwrap() + v);
        }
        Self {
            n: f.len(),
            f,
            prefix,
            target: 0,
            tuple: Vec::new(),
            partial: Vec::new(),
            started: false,
            done: false,
        }
    }

    /// Nondecreasing Hamming weight.
    pub fn hamming(n: usize) -> Self {
        Self::from_weights(vec![1; n])
    }

    /// Basic ORBGRAND: `f(r) = r`.
    pub fn logistic(n: usize) -> Self {
        Self::from_weights((1..=n as u64).collect())
    }

    /// Symbol-granular ranks for consecutive groups of `q` ranks; a trailing
    /// group may be shorter when `q` does not divide `n`.
    pub fn logistic_hamming_tie(n: usize, q: usize) -> Self {
        let q = q.max(1);
        Self::from_weights((0..n).map(|r| (r / q) as u64 + 1).collect())
    }

    /// One weight level per run of equal values in rank-ordered
    /// reliabilities.
    pub fn from_tie_classes<T: Real>(rel_in_rank_order: &[T]) -> Self {
        let mut f = Vec::with_capacity(rel_in_rank_order.len());
        let mut level = 0u64;
        for (i, &v) in rel_in_rank_order.iter().enumerate() {
            if i == 0 || v != rel_in_rank_order[i - 1] {
                level += 1;
            }
            f.push(level);
        }
        Self::from_weights(f)
    }

    /// Symbol-granular ranks for groups of the given sizes, in rank order.
    pub fn with_groups(sizes: &[usize]) -> Self {
        let f = sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &s)| std::iter::repeat_n(g as u64 + 1, s))
            .collect();
        Self::from_weights(f)
    }

    #[inline]
    fn fw(&self, r: usize) -> u64 {
        self.f[r - 1]
    }

    /// Sum of `f` over `lo..=hi` (1-based, inclusive; empty when `hi < lo`).
    #[inline]
    fn range_sum(&self, lo: usize, hi: usize) -> u64 {
        if hi < lo {
            0
        } else {
            self.prefix[hi] - self.prefix[lo - 1]
        }
    }

    /// Largest achievable sum of `r` distinct ranks.
    #[inline]
    fn max_sum(&self, r: usize) -> u64 {
        self.prefix[self.n] - self.prefix[self.n - r]
    }

    /// Fills `tuple[pos..]` with the lexicographically smallest completion
    /// whose entries exceed `lo - 1` and whose weights sum to `rem`.
    fn fill_from(&mut self, pos: usize, mut lo: usize, mut rem: u64) -> bool {
        let w = self.tuple.len();
        for j in pos..w {
            let r = w - j - 1;
            if lo + r > self.n {
                return false;
            }
            let need = rem.saturating_sub(self.max_sum(r));
            let mut v = lo;
            if self.fw(v) < need {
                // first rank whose weight reaches `need`
                v = self.f.partition_point(|&x| x < need) + 1;
                if v > self.n {
                    return false;
                }
            }
            if v + r > self.n {
                return false;
            }
            let fv = self.fw(v);
            if fv + self.range_sum(v + 1, v + r) > rem {
                return false;
            }
            self.tuple[j] = v;
            rem -= fv;
            lo = v + 1;
        }
        rem == 0
    }

    fn advance_within_shape(&mut self) -> bool {
        let w = self.tuple.len();
        if w == 0 {
            return false;
        }
        self.partial.clear();
        let mut acc = 0;
        for &t in &self.tuple {
            self.partial.push(acc);
            acc += self.f[t - 1];
        }
        for i in (0..w).rev() {
            let rem = self.target - self.partial[i];
            if self.fill_from(i, self.tuple[i] + 1, rem) {
                return true;
            }
        }
        false
    }

    fn next_shape(&mut self) -> bool {
        let total = self.prefix[self.n];
        loop {
            let w = self.tuple.len() + 1;
            if w > self.n || self.prefix[w] > self.target {
                if self.target >= total {
                    return false;
                }
                self.target += 1;
                self.tuple.clear();
                continue;
            }
            self.tuple.push(0);
            if self.max_sum(w) >= self.target && self.fill_from(0, 1, self.target) {
                return true;
            }
        }
    }
}

impl PatternStream for WeightedSubsets {
    fn next_pattern(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.tuple);
        }
        if self.advance_within_shape() || self.next_shape() {
            Some(&self.tuple)
        } else {
            self.done = true;
            None
        }
    }

    fn weight(&self) -> f64 {
        self.target as f64
    }
}

/// Basic ORBGRAND order: nondecreasing logistic weight `Σ r`.
pub fn logistic_patterns(n: usize) -> WeightedSubsets {
    WeightedSubsets::logistic(n)
}

/// Nondecreasing Hamming weight, lexicographic within a weight.
pub fn hamming_patterns(n: usize) -> WeightedSubsets {
    WeightedSubsets::hamming(n)
}

pub fn logistic_hamming_tie_patterns(n: usize, q: usize) -> WeightedSubsets {
    WeightedSubsets::logistic_hamming_tie(n, q)
}

#[derive(Debug, Clone)]
struct EtaEntry<T> {
    eta: T,
    set: Vec<usize>,
}

impl<T: Real> EtaEntry<T> {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.eta
            .partial_cmp(&other.eta)
            .unwrap_or(Ordering::Equal)
            .then(self.set.len().cmp(&other.set.len()))
            .then_with(|| self.set.cmp(&other.set))
    }
}

impl<T: Real> PartialEq for EtaEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for EtaEntry<T> {}

impl<T: Real> PartialOrd for EtaEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for EtaEntry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key_cmp(other)
    }
}

/// SGRAND order: nondecreasing `η(S) = Σ rel[r]`, ties by `(|S|, lex)`.
///
/// A min-heap frontier over the tree in which `S` with maximum `m` has the
/// children `S ∪ {m+1}` and `S \ {m} ∪ {m+1}`. Each subset has exactly one
/// parent and children never precede their parent, so pops come out sorted.
#[derive(Debug, Clone)]
pub struct ExactEtaPatterns<T> {
    rel: Vec<T>,
    heap: BinaryHeap<Reverse<EtaEntry<T>>>,
    current: EtaEntry<T>,
    started: bool,
}

impl<T: Real> ExactEtaPatterns<T> {
    /// `rel` must be in rank order: nonnegative and nondecreasing.
    pub fn new(rel: &[T]) -> Result<Self> {
        if rel.iter().any(|&v| v.is_nan() || v < T::zero()) {
            return invalid("reliabilities must be nonnegative");
        }
        if rel.windows(2).any(|p| p[1] < p[0]) {
            return invalid("reliabilities must be nondecreasing (rank order)");
        }
        Ok(Self {
            rel: rel.to_vec(),
            heap: BinaryHeap::new(),
            current: EtaEntry {
                eta: T::zero(),
                set: Vec::new(),
            },
            started: false,
        })
    }

    fn eta(&self, set: &[usize]) -> T {
        set.iter().fold(T::zero(), |acc, &r| acc + self.rel[r - 1])
    }

    fn push(&mut self, set: Vec<usize>) {
        let eta = self.eta(&set);
        self.heap.push(Reverse(EtaEntry { eta, set }));
    }

    pub fn current_eta(&self) -> T {
        self.current.eta
    }
}

impl<T: Real> PatternStream for ExactEtaPatterns<T> {
    fn next_pattern(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            if !self.rel.is_empty() {
                self.push(vec![1]);
            }
            return Some(&self.current.set);
        }
        let Reverse(entry) = self.heap.pop()?;
        let n = self.rel.len();
        if let Some(&m) = entry.set.last() {
            if m < n {
                let mut grow = entry.set.clone();
                grow.push(m + 1);
                self.push(grow);
                let mut shift = entry.set.clone();
                *shift.last_mut().unwrap() = m + 1;
                self.push(shift);
            }
        }
        self.current = entry;
        Some(&self.current.set)
    }

    fn weight(&self) -> f64 {
        self.current.eta.as_f64()
    }
}

pub fn exact_eta_patterns<T: Real>(rel_in_rank_order: &[T]) -> Result<ExactEtaPatterns<T>> {
    ExactEtaPatterns::new(rel_in_rank_order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all<S: PatternStream>(mut s: S) -> Vec<Vec<usize>> {
        collect_patterns(&mut s, usize::MAX)
    }

    #[test]
    fn hamming_n3() {
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
        assert_eq!(all(hamming_patterns(3)), expect);
    }

    #[test]
    fn hamming_is_lex_within_weight() {
        let p = all(hamming_patterns(4));
        let pairs: Vec<_> = p.iter().filter(|s| s.len() == 2).cloned().collect();
        assert_eq!(pairs, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
    }

    #[test]
    fn logistic_prefix() {
        let p = all(logistic_patterns(6));
        assert_eq!(&p[..5], &[vec![], vec![1], vec![2], vec![3], vec![1, 2]]);
        let l5: Vec<_> = p.iter().filter(|s| s.iter().sum::<usize>() == 5).cloned().collect();
        assert_eq!(l5, vec![vec![5], vec![1, 4], vec![2, 3]]);
        assert_eq!(p.len(), 64);
    }

    #[test]
    fn tie_variant_degenerate_cases() {
        assert_eq!(all(logistic_hamming_tie_patterns(7, 1)), all(logistic_patterns(7)));
        assert_eq!(all(logistic_hamming_tie_patterns(5, 5)), all(hamming_patterns(5)));
    }

    #[test]
    fn tie_variant_symbol_one_first() {
        let p = all(logistic_hamming_tie_patterns(4, 2));
        let singles: Vec<_> = p.iter().filter(|s| s.len() == 1).cloned().collect();
        assert_eq!(singles, vec![vec![1], vec![2], vec![3], vec![4]]);
        let pos = |s: &[usize]| p.iter().position(|x| x == s).unwrap();
        assert!(pos(&[3]) < pos(&[1, 2]));
    }

    #[test]
    fn tie_classes_follow_equal_values() {
        let t = WeightedSubsets::from_tie_classes(&[0.5f64, 0.5, 2.0, 2.0]);
        assert_eq!(all(t), all(logistic_hamming_tie_patterns(4, 2)));
        let flat = WeightedSubsets::from_tie_classes(&[1.0f64; 6]);
        assert_eq!(all(flat), all(hamming_patterns(6)));
    }

    #[test]
    fn eta_small_example() {
        let s = exact_eta_patterns(&[1.0f64, 2.0, 4.0]).unwrap();
        let p = all(s);
        let expect: Vec<Vec<usize>> = vec![
            vec![],
            vec![1],
            vec![2],
            vec![1, 2],
            vec![3],
            vec![1, 3],
            vec![2, 3],
            vec![1, 2, 3],
        ];
        assert_eq!(p, expect);
    }

    #[test]
    fn eta_rejects_unsorted() {
        assert!(exact_eta_patterns(&[2.0f64, 1.0]).is_err());
        assert!(exact_eta_patterns(&[-1.0f64, 1.0]).is_err());
        assert!(exact_eta_patterns(&[f64::NAN]).is_err());
    }

    #[test]
    fn eta_zero_reliabilities_first() {
        let p = all(exact_eta_patterns(&[0.0f64, 0.0, 3.0]).unwrap());
        assert_eq!(&p[..4], &[vec![], vec![1], vec![2], vec![1, 2]]);
    }
}
