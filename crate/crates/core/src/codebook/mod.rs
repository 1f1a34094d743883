//! GF(2) linear block codes: construction, encoding and membership testing.

mod alist;
mod bch;
mod polar;
mod poly;
mod random;

pub use alist::{load_alist, write_alist};
pub use bch::{build_bch, primitive_polynomial, CyclicCodeSpec, GaloisField};
pub use polar::{
    build_ca_polar, crc_code, parse_reliability_order, polar_transform, polarization_weight_order,
    CrcSpec, PolarSpec, DEFAULT_POLAR_ORDER_128,
};
pub use poly::Gf2Poly;
pub use random::{hamming_7_4, random_linear_code, uncoded};

use crate::bits::{words_for, BitWord};
use crate::error::{invalid, Error, Result};
use crate::gf2::BitMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeKind {
    RandomLinear,
    Crc,
    BchCyclic,
    CaPolar,
    FromFile,
    /// Rate-1 code: every word is a member.
    Uncoded,
    /// Generator supplied directly (fixtures such as Hamming(7,4)).
    Explicit,
}

/// A binary linear `(n, k)` block code.
///
/// Holds both the generator and the parity-check matrix. The parity-check
/// matrix is additionally stored column-wise as packed syndromes, which is
/// what the decoders use to test a candidate with a handful of XORs.
#[derive(Clone, Debug)]
pub struct LinearCode {
    kind: CodeKind,
    n: usize,
    k: usize,
    generator: BitMatrix,
    parity_check: BitMatrix,
    info_positions: Vec<usize>,
    syndrome_words: usize,
    columns: Vec<u64>,
    polar: Option<PolarSpec>,
}

impl LinearCode {
    /// Builds a code from a full-rank generator; the parity-check matrix is
    /// derived as the generator's null space.
    pub fn from_generator(generator: BitMatrix, kind: CodeKind) -> Result<Self> {
        let n = generator.ncols();
        let k = generator.nrows();
        if n == 0 {
            return invalid("code length must be positive");
        }
        let ech = generator.echelon();
        if ech.pivots.len() != k {
            return Err(Error::Construction(format!(
                "generator has rank {} but {k} rows",
                ech.pivots.len()
            )));
        }
        let (parity_check, _) = generator.null_space();
        Ok(Self::assemble(kind, generator, parity_check, ech.pivots))
    }

    /// Builds a code from a full-rank parity-check matrix; the generator is
    /// the null-space basis, systematic on the non-pivot columns of `H`.
    pub fn from_parity_check(parity_check: BitMatrix, kind: CodeKind) -> Result<Self> {
        let n = parity_check.ncols();
        if n == 0 {
            return invalid("code length must be positive");
        }
        let rank = parity_check.rank();
        if rank != parity_check.nrows() {
            return Err(Error::Construction(format!(
                "parity-check matrix has rank {rank} but {} rows",
                parity_check.nrows()
            )));
        }
        if rank == n {
            return Err(Error::Construction("parity-check matrix leaves no information bits".into()));
        }
        let (generator, free) = parity_check.null_space();
        Ok(Self::assemble(kind, generator, parity_check, free))
    }

    fn assemble(
        kind: CodeKind,
        generator: BitMatrix,
        parity_check: BitMatrix,
        info_positions: Vec<usize>,
    ) -> Self {
        let n = generator.ncols();
        let k = generator.nrows();
        let m = parity_check.nrows();
        let syndrome_words = words_for(m);
        let mut columns = vec![0u64; n * syndrome_words];
        for (r, row) in parity_check.rows().iter().enumerate() {
            for c in row.ones() {
                columns[c * syndrome_words + (r >> 6)] |= 1u64 << (r & 63);
            }
        }
        Self {
            kind,
            n,
            k,
            generator,
            parity_check,
            info_positions,
            syndrome_words,
            columns,
            polar: None,
        }
    }

    pub(crate) fn with_polar(mut self, spec: PolarSpec) -> Self {
        self.polar = Some(spec);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// Columns of the generator's echelon pivots (identity columns when the
    /// generator is systematic).
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn polar_spec(&self) -> Option<&PolarSpec> {
        self.polar.as_ref()
    }

    /// `c = b · G`.
    pub fn encode(&self, info: &BitWord) -> Result<BitWord> {
        if info.len() != self.k {
            return invalid(format!("payload length {} but k = {}", info.len(), self.k));
        }
        self.generator.vec_mul(info)
    }

    /// Code-book membership.
    ///
    /// Linear codes test `H · wᵀ = 0`; CA-Polar codes run the structural check
    /// (inverse polar transform, frozen positions, CRC).
    pub fn is_member(&self, word: &BitWord) -> Result<bool> {
        if word.len() != self.n {
            return invalid(format!("word length {} but n = {}", word.len(), self.n));
        }
        if let Some(spec) = &self.polar {
            return Ok(spec.is_member(word));
        }
        Ok(self.parity_check.rows().iter().all(|row| !row.dot(word)))
    }

    /// Number of 64-bit words in a packed syndrome (0 for rate-1 codes).
    #[inline]
    pub fn syndrome_words(&self) -> usize {
        self.syndrome_words
    }

    /// Packed syndrome contribution of bit position `j`.
    #[inline]
    pub fn column(&self, j: usize) -> &[u64] {
        let w = self.syndrome_words;
        &self.columns[j * w..(j + 1) * w]
    }

    /// Packed syndrome `H · wᵀ`.
    pub fn syndrome(&self, word: &BitWord) -> Result<Vec<u64>> {
        if word.len() != self.n {
            return invalid(format!("word length {} but n = {}", word.len(), self.n));
        }
        let mut s = vec![0u64; self.syndrome_words];
        for j in word.ones() {
            for (a, b) in s.iter_mut().zip(self.column(j)) {
                *a ^= *b;
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_members_exhaustive() {
        let code = hamming_7_4();
        let members = (0u32..128)
            .filter(|v| {
                let w = BitWord::from_bits(&(0..7).map(|i| ((v >> i) & 1) as u8).collect::<Vec<_>>());
                code.is_member(&w).unwrap()
            })
            .count();
        assert_eq!(members, 16);
    }

    #[test]
    fn syndrome_matches_row_check() {
        let code = random_linear_code(40, 22, 3).unwrap();
        let mut w = code.encode(&BitWord::unit(22, 5)).unwrap();
        assert!(code.syndrome(&w).unwrap().iter().all(|&x| x == 0));
        w.flip(17);
        assert!(!code.is_member(&w).unwrap());
        assert!(code.syndrome(&w).unwrap().iter().any(|&x| x != 0));
    }

    #[test]
    fn length_mismatch_is_invalid() {
        let code = hamming_7_4();
        assert!(matches!(code.encode(&BitWord::zeros(3)), Err(Error::InvalidArgument(_))));
        assert!(matches!(code.is_member(&BitWord::zeros(8)), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn rank_deficient_parity_check_fails() {
        let h = BitMatrix::parse_rows(&["1100", "0110", "1010"]).unwrap();
        assert!(matches!(
            LinearCode::from_parity_check(h, CodeKind::Explicit),
            Err(Error::Construction(_))
        ));
    }
}
