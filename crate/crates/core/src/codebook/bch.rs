//! Narrow-sense binary BCH codes.

use super::poly::Gf2Poly;
use super::{CodeKind, LinearCode};
use crate::bits::BitWord;
use crate::error::{invalid, Error, Result};
use crate::gf2::BitMatrix;

/// One primitive polynomial per field degree (Lin & Costello table), packed
/// with bit `d` holding the coefficient of `x^d`.
const PRIMITIVE_POLYS: [(u32, u32); 14] = [
    (3, 0x0B),
    (4, 0x13),
    (5, 0x25),
    (6, 0x43),
    (7, 0x89),
    (8, 0x11D),
    (9, 0x211),
    (10, 0x409),
    (11, 0x805),
    (12, 0x1053),
    (13, 0x201B),
    (14, 0x4443),
    (15, 0x8003),
    (16, 0x1100B),
];

/// The fixed primitive polynomial used for GF(2^m), `m ∈ 3..=16`.
pub fn primitive_polynomial(m: u32) -> Option<u32> {
    PRIMITIVE_POLYS.iter().find(|(d, _)| *d == m).map(|&(_, p)| p)
}

/// GF(2^m) with exp/log tables over a primitive element α.
#[derive(Clone, Debug)]
pub struct GaloisField {
    m: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl GaloisField {
    pub fn new(m: u32) -> Result<Self> {
        let poly = primitive_polynomial(m)
            .ok_or_else(|| Error::InvalidArgument(format!("field degree {m} outside 3..=16")))?;
        let order = (1usize << m) - 1;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; order + 1];
        let mut x = 1u32;
        for (i, e) in exp.iter_mut().enumerate().take(order) {
            *e = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self { m, exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Multiplicative order `2^m − 1`.
    pub fn order(&self) -> usize {
        (1usize << self.m) - 1
    }

    /// `α^i`.
    pub fn alpha_pow(&self, i: usize) -> u32 {
        self.exp[i % self.order()]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Cyclotomic coset of `i` modulo `2^m − 1`.
    pub fn cyclotomic_coset(&self, i: usize) -> Vec<usize> {
        let n = self.order();
        let mut coset = vec![i % n];
        let mut j = (2 * i) % n;
        while j != i % n {
            coset.push(j);
            j = (2 * j) % n;
        }
        coset
    }

    /// Minimal polynomial of `α^i` over GF(2): `∏ (x − α^j)` over the coset.
    pub fn minimal_polynomial(&self, i: usize) -> Gf2Poly {
        // Coefficients in GF(2^m), lowest degree first.
        let mut acc: Vec<u32> = vec![1];
        for j in self.cyclotomic_coset(i) {
            let root = self.alpha_pow(j);
            let mut next = vec![0u32; acc.len() + 1];
            for (d, &c) in acc.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= self.mul(c, root);
            }
            acc = next;
        }
        let coeffs: Vec<u8> = acc
            .iter()
            .map(|&c| {
                debug_assert!(c <= 1, "minimal polynomial has binary coefficients");
                c as u8
            })
            .collect();
        Gf2Poly::from_coeffs(&coeffs)
    }
}

/// Structural description of a cyclic code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCodeSpec {
    pub n: usize,
    pub generator_poly: Gf2Poly,
}

impl CyclicCodeSpec {
    pub fn new(n: usize, generator_poly: Gf2Poly) -> Result<Self> {
        match generator_poly.degree() {
            Some(d) if d < n => {}
            _ => return invalid("generator polynomial degree must lie in [0, n)"),
        }
        if !generator_poly.divides(&Gf2Poly::x_pow_minus_one(n)) {
            return Err(Error::Construction(format!(
                "generator polynomial does not divide x^{n} - 1"
            )));
        }
        Ok(Self { n, generator_poly })
    }

    pub fn k(&self) -> usize {
        self.n - self.generator_poly.degree().unwrap_or(0)
    }

    /// Systematic generator: position `j` carries the coefficient of
    /// `x^{n-1-j}`, information in positions `0..k`, parity in `k..n`.
    pub fn generator_matrix(&self) -> BitMatrix {
        let (n, k) = (self.n, self.k());
        let rows = (0..k)
            .map(|i| {
                let mut row = BitWord::zeros(n);
                row.set(i, true);
                let parity = Gf2Poly::monomial(n - 1 - i).rem(&self.generator_poly);
                if let Some(deg) = parity.degree() {
                    for d in 0..=deg {
                        if parity.coeff(d) {
                            row.set(n - 1 - d, true);
                        }
                    }
                }
                row
            })
            .collect();
        BitMatrix::from_rows(rows, n).expect("rows have length n")
    }
}

/// Narrow-sense primitive BCH code of length `2^m − 1` correcting `t` errors.
///
/// The generator polynomial is the least common multiple of the minimal
/// polynomials of `α, α², …, α^{2t}`.
pub fn build_bch(m: u32, t: usize) -> Result<(CyclicCodeSpec, LinearCode)> {
    if !(3..=16).contains(&m) {
        return invalid(format!("field degree {m} outside 3..=16"));
    }
    if t == 0 {
        return invalid("t must be at least 1");
    }
    let field = GaloisField::new(m)?;
    let n = field.order();
    if 2 * t >= n {
        return Err(Error::Construction(format!("t = {t} too large for n = {n}")));
    }
    let mut seen = vec![false; n];
    let mut g = Gf2Poly::one();
    for i in 1..=2 * t {
        if seen[i] {
            continue;
        }
        for j in field.cyclotomic_coset(i) {
            seen[j] = true;
        }
        g = g.mul(&field.minimal_polynomial(i));
    }
    if g.degree().unwrap_or(0) >= n {
        return Err(Error::Construction(format!(
            "t = {t} leaves no information bits at m = {m}"
        )));
    }
    let spec = CyclicCodeSpec::new(n, g)?;
    let code = LinearCode::from_generator(spec.generator_matrix(), CodeKind::BchCyclic)?;
    Ok((spec, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bch_15_11() {
        let (spec, code) = build_bch(4, 1).unwrap();
        assert_eq!((code.n(), code.k()), (15, 11));
        assert_eq!(spec.generator_poly, Gf2Poly::from_coeffs(&[1, 1, 0, 0, 1]));
    }

    #[test]
    fn bch_127_113() {
        let (spec, code) = build_bch(7, 2).unwrap();
        assert_eq!((code.n(), code.k()), (127, 113));
        assert_eq!(spec.generator_poly.degree(), Some(14));
    }

    #[test]
    fn bch_15_7_and_15_5() {
        assert_eq!(build_bch(4, 2).unwrap().1.k(), 7);
        assert_eq!(build_bch(4, 3).unwrap().1.k(), 5);
    }

    #[test]
    fn oversized_t_fails() {
        assert!(matches!(build_bch(3, 4), Err(Error::Construction(_))));
        assert!(matches!(build_bch(2, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_bch(4, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn cyclic_shift_stays_in_code() {
        let (_, code) = build_bch(5, 2).unwrap();
        let mut info = BitWord::zeros(code.k());
        info.set(0, true);
        info.set(3, true);
        let c = code.encode(&info).unwrap();
        let n = code.n();
        let mut shifted = BitWord::zeros(n);
        for j in 0..n {
            if c.get(j) {
                shifted.set((j + 1) % n, true);
            }
        }
        assert!(code.is_member(&shifted).unwrap());
    }
}
