//! Fixed-length GF(2) vectors packed into 64-bit words.

use std::fmt;

use crate::error::{invalid, Result};

/// A fixed-length binary word.
///
/// Bit `i` lives in word `i / 64` at bit offset `i % 64`. Bits past `len` in
/// the last word are always zero, so word-level comparisons are exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    words: Vec<u64>,
    len: usize,
}

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Builds a word from a slice of 0/1 values; any nonzero entry is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                w.set(i, true);
            }
        }
        w
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return invalid(format!("not a binary digit: {c:?}")),
            }
        }
        Ok(Self::from_bits(&bits))
    }

    /// Unit vector with a one at `pos`.
    pub fn unit(len: usize, pos: usize) -> Self {
        let mut w = Self::zeros(len);
        w.set(pos, true);
        w
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if v {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place XOR. Lengths must match.
    pub fn xor_assign(&mut self, other: &BitWord) -> Result<()> {
        if self.len != other.len {
            return invalid(format!("length mismatch: {} vs {}", self.len, other.len));
        }
        self.xor_assign_unchecked(other);
        Ok(())
    }

    #[inline]
    pub(crate) fn xor_assign_unchecked(&mut self, other: &BitWord) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitWord) -> Result<BitWord> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    /// Parity of the bitwise AND with `other` (GF(2) inner product).
    #[inline]
    pub fn dot(&self, other: &BitWord) -> bool {
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Positions of the set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Sub-word `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> BitWord {
        let mut out = BitWord::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_with_self_is_zero() {
        let w = BitWord::parse("1011001110001").unwrap();
        assert!(w.xor(&w).unwrap().is_zero());
    }

    #[test]
    fn length_mismatch_rejected() {
        let a = BitWord::zeros(5);
        let b = BitWord::zeros(6);
        assert!(a.xor(&b).is_err());
    }

    #[test]
    fn ones_across_word_boundary() {
        let mut w = BitWord::zeros(130);
        for i in [0, 63, 64, 129] {
            w.set(i, true);
        }
        assert_eq!(w.ones(), vec![0, 63, 64, 129]);
        assert_eq!(w.weight(), 4);
        assert_eq!(w.slice(63, 2).to_string(), "11");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(BitWord::parse("01x").is_err());
    }
}
