//! CRC-aided polar codes and the CRC codes they embed.

use super::poly::Gf2Poly;
use super::{CodeKind, LinearCode};
use crate::bits::BitWord;
use crate::error::{invalid, Error, Result};
use crate::gf2::BitMatrix;

/// Polarization-weight reliability order for length 128 (least reliable
/// first, whitespace separated).
pub const DEFAULT_POLAR_ORDER_128: &str = include_str!("../../data/polar_pw_128.txt");

/// A CRC generator polynomial of degree `width` with implicit leading one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrcSpec {
    /// Coefficients of `x^0 .. x^{width-1}`.
    low: u64,
    width: u32,
}

impl CrcSpec {
    /// Builds from the full polynomial including its leading term.
    pub fn new(poly: &Gf2Poly) -> Result<Self> {
        let width = poly
            .degree()
            .ok_or_else(|| Error::InvalidArgument("zero CRC polynomial".into()))?;
        if width > 63 {
            return invalid(format!("CRC width {width} exceeds 63"));
        }
        if width > 0 && !poly.coeff(0) {
            return invalid("CRC polynomial must have a constant term");
        }
        let low = (0..width).filter(|&d| poly.coeff(d)).fold(0u64, |acc, d| acc | (1 << d));
        Ok(Self {
            low,
            width: width as u32,
        })
    }

    /// No CRC at all.
    pub fn none() -> Self {
        Self { low: 0, width: 0 }
    }

    /// `x¹¹ + x¹⁰ + x⁹ + x⁵ + 1`.
    pub fn crc11() -> Self {
        Self::new(&Gf2Poly::from_coeffs(&[1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1])).expect("valid CRC")
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn polynomial(&self) -> Gf2Poly {
        let mut coeffs: Vec<u8> = (0..self.width).map(|d| ((self.low >> d) & 1) as u8).collect();
        coeffs.push(1);
        Gf2Poly::from_coeffs(&coeffs)
    }

    /// Remainder of `m(x)·x^width` modulo the polynomial, first bit of
    /// `bits` being the highest-degree coefficient. Returned MSB first.
    pub fn checksum(&self, bits: impl IntoIterator<Item = bool>) -> Vec<bool> {
        let d = self.width;
        if d == 0 {
            return Vec::new();
        }
        let mask = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
        let mut reg = 0u64;
        for b in bits {
            let fb = ((reg >> (d - 1)) & 1 == 1) ^ b;
            reg = (reg << 1) & mask;
            if fb {
                reg ^= self.low;
            }
        }
        (0..d).map(|i| (reg >> (d - 1 - i)) & 1 == 1).collect()
    }
}

/// Systematic CRC code: the payload followed by its checksum.
pub fn crc_code(k: usize, crc: CrcSpec) -> Result<LinearCode> {
    if k == 0 {
        return invalid("k must be positive");
    }
    let n = k + crc.width();
    let rows = (0..k)
        .map(|i| {
            let mut row = BitWord::zeros(n);
            row.set(i, true);
            for (j, b) in crc.checksum((0..k).map(|p| p == i)).into_iter().enumerate() {
                row.set(k + j, b);
            }
            row
        })
        .collect();
    LinearCode::from_generator(BitMatrix::from_rows(rows, n)?, CodeKind::Crc)
}

/// In-place polar transform `x = u · F^{⊗n}`, `F = [[1,0],[1,1]]`.
/// The transform is its own inverse over GF(2).
pub fn polar_transform(bits: &mut [bool]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            for i in block..block + half {
                bits[i] ^= bits[i + half];
            }
        }
        half *= 2;
    }
}

/// Polarization-weight order (β = 2^¼), least reliable index first.
pub fn polarization_weight_order(block_length: usize) -> Vec<usize> {
    let beta = 2f64.powf(0.25);
    let weight = |i: usize| -> f64 {
        (0..usize::BITS)
            .filter(|&j| (i >> j) & 1 == 1)
            .map(|j| beta.powi(j as i32))
            .sum()
    };
    let mut order: Vec<usize> = (0..block_length).collect();
    order.sort_by(|&a, &b| weight(a).total_cmp(&weight(b)).then(a.cmp(&b)));
    order
}

/// Parses a whitespace-separated permutation of `0..len`.
pub fn parse_reliability_order(text: &str) -> Result<Vec<usize>> {
    let mut order = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line: ln + 1,
                message: format!("not an index: {tok:?}"),
            })?;
            order.push(v);
        }
    }
    let mut seen = vec![false; order.len()];
    for &v in &order {
        if v >= order.len() || std::mem::replace(&mut seen[v], true) {
            return invalid(format!("reliability order is not a permutation (index {v})"));
        }
    }
    Ok(order)
}

/// CA-Polar structure: payload plus CRC carried on the most reliable
/// synthetic channels, every other channel frozen to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarSpec {
    pub block_length: usize,
    pub k: usize,
    /// Sorted indices of the non-frozen channels, `k + crc.width()` of them.
    pub info_set: Vec<usize>,
    pub crc: CrcSpec,
}

impl PolarSpec {
    pub fn frozen_count(&self) -> usize {
        self.block_length - self.info_set.len()
    }

    pub fn encode(&self, payload: &BitWord) -> Result<BitWord> {
        if payload.len() != self.k {
            return invalid(format!("payload length {} but k = {}", payload.len(), self.k));
        }
        let mut u = vec![false; self.block_length];
        let carried = payload.iter().chain(self.crc.checksum(payload.iter()));
        for (&pos, b) in self.info_set.iter().zip(carried) {
            u[pos] = b;
        }
        polar_transform(&mut u);
        let mut out = BitWord::zeros(self.block_length);
        for (i, b) in u.into_iter().enumerate() {
            out.set(i, b);
        }
        Ok(out)
    }

    /// Inverse transform, frozen-zero check, then CRC check.
    pub fn is_member(&self, word: &BitWord) -> bool {
        let mut u: Vec<bool> = word.iter().collect();
        polar_transform(&mut u);
        let mut info_iter = self.info_set.iter().peekable();
        for (i, &b) in u.iter().enumerate() {
            if info_iter.peek() == Some(&&i) {
                info_iter.next();
            } else if b {
                return false;
            }
        }
        let carried: Vec<bool> = self.info_set.iter().map(|&p| u[p]).collect();
        let (payload, check) = carried.split_at(self.k);
        self.crc.checksum(payload.iter().copied()) == check
    }
}

/// Builds a CA-Polar code. `reliability_order` lists channel indices from
/// least to most reliable.
pub fn build_ca_polar(
    block_length: usize,
    k: usize,
    crc: CrcSpec,
    reliability_order: &[usize],
) -> Result<(PolarSpec, LinearCode)> {
    if !block_length.is_power_of_two() || block_length < 2 {
        return invalid(format!("block length {block_length} is not a power of two"));
    }
    if k == 0 || k + crc.width() > block_length {
        return invalid(format!(
            "k = {k} with CRC width {} does not fit block length {block_length}",
            crc.width()
        ));
    }
    if reliability_order.len() != block_length {
        return invalid("reliability order length differs from block length");
    }
    let mut seen = vec![false; block_length];
    for &i in reliability_order {
        if i >= block_length || std::mem::replace(&mut seen[i], true) {
            return invalid("reliability order is not a permutation");
        }
    }
    let carried = k + crc.width();
    let mut info_set = reliability_order[block_length - carried..].to_vec();
    info_set.sort_unstable();
    let spec = PolarSpec {
        block_length,
        k,
        info_set,
        crc,
    };
    let rows = (0..k)
        .map(|i| spec.encode(&BitWord::unit(k, i)))
        .collect::<Result<Vec<_>>>()?;
    let g = BitMatrix::from_rows(rows, block_length)?;
    let code = LinearCode::from_generator(g, CodeKind::CaPolar)?.with_polar(spec.clone());
    Ok((spec, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_is_involution() {
        let mut v: Vec<bool> = (0..16).map(|i| (i * 7 + 3) % 5 < 2).collect();
        let orig = v.clone();
        polar_transform(&mut v);
        assert_ne!(v, orig);
        polar_transform(&mut v);
        assert_eq!(v, orig);
    }

    #[test]
    fn shipped_order_is_polarization_weight() {
        let parsed = parse_reliability_order(DEFAULT_POLAR_ORDER_128).unwrap();
        assert_eq!(parsed, polarization_weight_order(128));
    }

    #[test]
    fn ca_polar_128_105_sizes() {
        let order = polarization_weight_order(128);
        let (spec, code) = build_ca_polar(128, 105, CrcSpec::crc11(), &order).unwrap();
        assert_eq!(spec.info_set.len(), 116);
        assert_eq!(spec.frozen_count(), 12);
        assert_eq!((code.n(), code.k()), (128, 105));
        assert!(code.generator().mul_transpose(code.parity_check()).unwrap().is_zero());
    }

    #[test]
    fn rate_one_polar_accepts_everything() {
        let order = polarization_weight_order(8);
        let (_, code) = build_ca_polar(8, 8, CrcSpec::none(), &order).unwrap();
        for v in 0u8..=255 {
            let w = BitWord::from_bits(&(0..8).map(|i| (v >> i) & 1).collect::<Vec<_>>());
            assert!(code.is_member(&w).unwrap());
        }
    }

    #[test]
    fn inconsistent_sizes_rejected() {
        let order = polarization_weight_order(16);
        assert!(build_ca_polar(12, 4, CrcSpec::none(), &order).is_err());
        assert!(build_ca_polar(16, 10, CrcSpec::crc11(), &order).is_err());
        assert!(build_ca_polar(16, 4, CrcSpec::none(), &order[..15]).is_err());
        let mut dup = order.clone();
        dup[0] = dup[1];
        assert!(build_ca_polar(16, 4, CrcSpec::none(), &dup).is_err());
    }

    #[test]
    fn crc_code_detects_single_errors() {
        let code = crc_code(20, CrcSpec::crc11()).unwrap();
        let c = code.encode(&BitWord::unit(20, 7)).unwrap();
        for i in 0..code.n() {
            let mut w = c.clone();
            w.flip(i);
            assert!(!code.is_member(&w).unwrap());
        }
    }

    #[test]
    fn crc_rejects_missing_constant_term() {
        assert!(CrcSpec::new(&Gf2Poly::from_coeffs(&[0, 1, 1])).is_err());
        assert_eq!(CrcSpec::crc11().polynomial().degree(), Some(11));
    }
}
