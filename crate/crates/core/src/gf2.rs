//! Dense GF(2) matrices with bit-packed rows.

use crate::bits::BitWord;
use crate::error::{invalid, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitWord>,
    cols: usize,
}

/// Result of reducing a matrix to reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: BitMatrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows: vec![BitWord::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| BitWord::unit(n, i)).collect();
        Self { rows, cols: n }
    }

    pub fn from_rows(rows: Vec<BitWord>, cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return invalid(format!("row of length {} in matrix with {cols} columns", r.len()));
        }
        Ok(Self { rows, cols })
    }

    /// Parses rows of `0`/`1` strings.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let parsed = rows.iter().map(|r| BitWord::parse(r)).collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, BitWord::len);
        Self::from_rows(parsed, cols)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitWord {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitWord] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M · vᵀ`, one output bit per row.
    pub fn mul_vec(&self, v: &BitWord) -> Result<BitWord> {
        if v.len() != self.cols {
            return invalid(format!("vector length {} vs {} columns", v.len(), self.cols));
        }
        let mut out = BitWord::zeros(self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Row-vector product `v · M`.
    pub fn vec_mul(&self, v: &BitWord) -> Result<BitWord> {
        if v.len() != self.nrows() {
            return invalid(format!("vector length {} vs {} rows", v.len(), self.nrows()));
        }
        let mut out = BitWord::zeros(self.cols);
        for i in v.ones() {
            out.xor_assign_unchecked(&self.rows[i]);
        }
        Ok(out)
    }

    /// `A · Bᵀ`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return invalid("column count mismatch");
        }
        let mut out = BitMatrix::zeros(self.nrows(), other.nrows());
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                if a.dot(b) {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitWord::is_zero)
    }

    /// Gauss-Jordan elimination; zero rows are dropped from the result.
    pub fn echelon(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign_unchecked(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        Echelon {
            matrix: BitMatrix {
                rows,
                cols: self.cols,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : M · xᵀ = 0}` as the rows of the returned matrix.
    ///
    /// Row `i` of the basis has a one at the `i`-th non-pivot column and zeros
    /// at every other non-pivot column, so the non-pivot columns form an
    /// identity block.
    pub fn null_space(&self) -> (BitMatrix, Vec<usize>) {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = BitWord::zeros(self.cols);
            v.set(f, true);
            for (row, &p) in ech.matrix.rows.iter().zip(&ech.pivots) {
                if row.get(f) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        (
            BitMatrix {
                rows: basis,
                cols: self.cols,
            },
            free,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_annihilates() {
        let h = BitMatrix::parse_rows(&["1101100", "1011010", "0111001"]).unwrap();
        let (g, free) = h.null_space();
        assert_eq!(g.nrows(), 4);
        assert_eq!(free.len(), 4);
        assert!(g.mul_transpose(&h).unwrap().is_zero());
        assert_eq!(g.rank(), 4);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = BitMatrix::parse_rows(&["1100", "0110", "1010"]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn transpose_twice_is_identity() {
        let m = BitMatrix::parse_rows(&["10110", "01011"]).unwrap();
        assert_eq!(m.transpose().transpose(), m);
    }
}
