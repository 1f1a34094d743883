//! Polynomials over GF(2).

use std::fmt;

/// Binary polynomial; bit `d` of the packed words is the coefficient of `x^d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(bits: u64) -> Self {
        let mut p = Self { words: vec![bits] };
        p.trim();
        p
    }

    /// Builds from coefficients listed lowest degree first.
    pub fn from_coeffs(coeffs: &[u8]) -> Self {
        let mut p = Self {
            words: vec![0; coeffs.len().div_ceil(64)],
        };
        for (d, &c) in coeffs.iter().enumerate() {
            if c & 1 == 1 {
                p.words[d >> 6] |= 1 << (d & 63);
            }
        }
        p.trim();
        p
    }

    /// `x^d + 1`.
    pub fn x_pow_minus_one(d: usize) -> Self {
        let mut p = Self::monomial(d);
        p.flip(0);
        p
    }

    pub fn monomial(d: usize) -> Self {
        let mut p = Self {
            words: vec![0; d / 64 + 1],
        };
        p.words[d >> 6] |= 1 << (d & 63);
        p
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    fn flip(&mut self, d: usize) {
        if self.words.len() <= d >> 6 {
            self.words.resize((d >> 6) + 1, 0);
        }
        self.words[d >> 6] ^= 1 << (d & 63);
        self.trim();
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, d: usize) -> bool {
        self.words.get(d >> 6).is_some_and(|w| (w >> (d & 63)) & 1 == 1)
    }

    /// Coefficients lowest degree first, `degree + 1` entries.
    pub fn coeffs(&self) -> Vec<u8> {
        match self.degree() {
            None => Vec::new(),
            Some(deg) => (0..=deg).map(|d| u8::from(self.coeff(d))).collect(),
        }
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let len = self.words.len().max(other.words.len());
        let mut words = vec![0; len];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0);
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Gf2Poly::zero();
        };
        let mut out = Gf2Poly {
            words: vec![0; (da + db) / 64 + 1],
        };
        for i in 0..=da {
            if self.coeff(i) {
                for j in 0..=db {
                    if other.coeff(j) {
                        out.words[(i + j) >> 6] ^= 1 << ((i + j) & 63);
                    }
                }
            }
        }
        out.trim();
        out
    }

    /// Quotient and remainder of division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Gf2Poly::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            quot.flip(shift);
            for d in 0..=dd {
                if divisor.coeff(d) {
                    rem.flip(d + shift);
                }
            }
        }
        (quot, rem)
    }

    pub fn rem(&self, divisor: &Gf2Poly) -> Gf2Poly {
        self.div_rem(divisor).1
    }

    pub fn divides(&self, other: &Gf2Poly) -> bool {
        other.rem(self).is_zero()
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(deg) = self.degree() else {
            return f.write_str("0");
        };
        let terms: Vec<String> = (0..=deg)
            .rev()
            .filter(|&d| self.coeff(d))
            .map(|d| match d {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{d}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_rem_reconstructs() {
        let a = Gf2Poly::from_coeffs(&[1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 1]);
        let b = Gf2Poly::from_coeffs(&[1, 1, 0, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 3);
    }

    #[test]
    fn x7_minus_1_factors() {
        // x^7 + 1 = (x + 1)(x^3 + x + 1)(x^3 + x^2 + 1)
        let p = Gf2Poly::from_coeffs(&[1, 1])
            .mul(&Gf2Poly::from_coeffs(&[1, 1, 0, 1]))
            .mul(&Gf2Poly::from_coeffs(&[1, 0, 1, 1]));
        assert_eq!(p, Gf2Poly::x_pow_minus_one(7));
        assert_eq!(format!("{:?}", Gf2Poly::from_coeffs(&[1, 1, 0, 1])), "x^3 + x + 1");
    }
}
