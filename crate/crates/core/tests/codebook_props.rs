use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use psgrand::codebook::{
    build_bch, build_ca_polar, crc_code, hamming_7_4, load_alist, polar_transform,
    polarization_weight_order, random_linear_code, uncoded, write_alist, CrcSpec, Gf2Poly, LinearCode,
};
use psgrand::BitWord;

fn codes() -> Vec<(&'static str, LinearCode)> {
    vec![
        ("hamming74", hamming_7_4()),
        ("random16_8", random_linear_code(16, 8, 1).unwrap()),
        ("random40_25", random_linear_code(40, 25, 9).unwrap()),
        ("bch15_7", build_bch(4, 2).unwrap().1),
        ("bch127_113", build_bch(7, 2).unwrap().1),
        ("bch63_51", build_bch(6, 2).unwrap().1),
        ("crc16", crc_code(16, CrcSpec::crc11()).unwrap()),
        (
            "polar128_105",
            build_ca_polar(128, 105, CrcSpec::crc11(), &polarization_weight_order(128)).unwrap().1,
        ),
        (
            "polar32_16",
            build_ca_polar(32, 16, CrcSpec::none(), &polarization_weight_order(32)).unwrap().1,
        ),
        ("uncoded12", uncoded(12).unwrap()),
    ]
}

fn word_from(bits: &[bool]) -> BitWord {
    let mut w = BitWord::zeros(bits.len());
    for (i, &b) in bits.iter().enumerate() {
        w.set(i, b);
    }
    w
}

#[test]
fn generator_annihilated_by_parity_check() {
    for (name, code) in codes() {
        let prod = code.generator().mul_transpose(code.parity_check()).unwrap();
        assert!(prod.is_zero(), "{name}: G·Hᵀ ≠ 0");
        assert_eq!(code.generator().rank(), code.k(), "{name}");
        assert_eq!(code.parity_check().nrows(), code.n() - code.k(), "{name}");
    }
}

#[test]
fn zero_word_is_always_a_member() {
    for (name, code) in codes() {
        let z = BitWord::zeros(code.n());
        assert!(code.is_member(&z).unwrap(), "{name}");
        assert_eq!(code.encode(&BitWord::zeros(code.k())).unwrap(), z, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encode_is_linear_and_lands_in_code(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (name, code) in codes() {
            let mut draw = || word_from(&(0..code.k()).map(|_| rng.gen()).collect::<Vec<bool>>());
            let (a, b) = (draw(), draw());
            let ca = code.encode(&a).unwrap();
            let cb = code.encode(&b).unwrap();
            prop_assert!(code.is_member(&ca).unwrap(), "{}", name);
            prop_assert_eq!(code.encode(&a.xor(&b).unwrap()).unwrap(), ca.xor(&cb).unwrap());
        }
    }

    /// The packed-syndrome test used by the decoder and the structural
    /// membership test agree on words at small distance from the code.
    #[test]
    fn syndrome_agrees_with_membership(info in proptest::collection::vec(any::<bool>(), 105),
                                       flips in proptest::collection::vec(0usize..128, 0..4)) {
        let (_, code) = build_ca_polar(128, 105, CrcSpec::crc11(), &polarization_weight_order(128)).unwrap();
        let mut w = code.encode(&word_from(&info)).unwrap();
        for f in flips {
            w.flip(f);
        }
        let zero_syndrome = code.syndrome(&w).unwrap().iter().all(|&s| s == 0);
        prop_assert_eq!(zero_syndrome, code.is_member(&w).unwrap());
    }

    #[test]
    fn alist_round_trip(n in 8usize..40, frac in 0.2f64..0.8, seed in any::<u64>()) {
        let k = ((n as f64 * frac) as usize).clamp(1, n - 1);
        let code = random_linear_code(n, k, seed).unwrap();
        let text = write_alist(code.parity_check());
        let back = load_alist(&text).unwrap();
        prop_assert_eq!((back.n(), back.k()), (n, k));
        prop_assert!(back.generator().mul_transpose(code.parity_check()).unwrap().is_zero());
    }
}

#[test]
fn polar_frozen_perturbation_breaks_membership() {
    for (n, k, crc) in [(128, 105, CrcSpec::crc11()), (64, 32, CrcSpec::crc11()), (16, 8, CrcSpec::none())] {
        let (spec, code) = build_ca_polar(n, k, crc, &polarization_weight_order(n)).unwrap();
        let info = BitWord::from_bits(&(0..k).map(|i| ((i * 7 + 3) % 5 == 0) as u8).collect::<Vec<_>>());
        let c = code.encode(&info).unwrap();
        let mut u: Vec<bool> = c.iter().collect();
        polar_transform(&mut u);
        for j in (0..n).filter(|j| !spec.info_set.contains(j)) {
            let mut v = u.clone();
            v[j] = !v[j];
            polar_transform(&mut v);
            let w = BitWord::from_bits(&v.iter().map(|&b| b as u8).collect::<Vec<_>>());
            assert!(!code.is_member(&w).unwrap(), "frozen {j} of ({n},{k})");
        }
    }
}

#[test]
fn ca_polar_sizes_match() {
    let (spec, code) = build_ca_polar(128, 105, CrcSpec::crc11(), &polarization_weight_order(128)).unwrap();
    assert_eq!(spec.info_set.len(), 116);
    assert_eq!(spec.frozen_count(), 12);
    assert_eq!((code.n(), code.k()), (128, 105));
}

#[test]
fn random_code_book_is_full_and_deterministic() {
    let a = random_linear_code(16, 8, 7).unwrap();
    let b = random_linear_code(16, 8, 7).unwrap();
    assert_eq!(a.generator(), b.generator());
    let mut words: Vec<Vec<u8>> = (0u32..256)
        .map(|m| {
            let info = BitWord::from_bits(&(0..8).map(|i| (m >> i & 1) as u8).collect::<Vec<_>>());
            a.encode(&info).unwrap().to_bits()
        })
        .collect();
    words.sort();
    words.dedup();
    assert_eq!(words.len(), 256);
    assert_eq!(a.encode(&BitWord::unit(8, 0)).unwrap(), *a.generator().row(0));
}

#[test]
fn hamming_codeword_matches_brute_force_parity() {
    let code = hamming_7_4();
    let h = code.parity_check();
    let info = [1u8, 0, 1, 1];
    let mut found = Vec::new();
    for p in 0u8..8 {
        let bits: Vec<u8> = info.iter().copied().chain((0..3).map(|i| p >> (2 - i) & 1)).collect();
        let w = BitWord::from_bits(&bits);
        if h.mul_vec(&w).unwrap().is_zero() {
            found.push(w);
        }
    }
    assert_eq!(found.len(), 1);
    assert_eq!(code.encode(&BitWord::from_bits(&info)).unwrap(), found[0]);
}

/// GF(2^7) by repeated multiplication by α, independent of the library tables.
fn gf128_mul(a: u32, b: u32) -> u32 {
    let (mut a, mut b, mut r) = (a, b, 0u32);
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & 0x80 != 0 {
            a ^= 0x89;
        }
    }
    r
}

fn gf128_pow(a: u32, e: usize) -> u32 {
    (0..e).fold(1, |acc, _| gf128_mul(acc, a))
}

/// Product of (x − α^j) over the cyclotomic coset of `i`, with coefficients
/// in GF(128), low degree first.
fn minimal_poly_oracle(i: usize) -> Vec<u32> {
    let mut coset = vec![i % 127];
    let mut j = (2 * i) % 127;
    while j != coset[0] {
        coset.push(j);
        j = (2 * j) % 127;
    }
    let mut poly = vec![1u32];
    for &e in &coset {
        let root = gf128_pow(2, e);
        let mut next = vec![0u32; poly.len() + 1];
        for (d, &c) in poly.iter().enumerate() {
            next[d + 1] ^= c;
            next[d] ^= gf128_mul(c, root);
        }
        poly = next;
    }
    poly
}

#[test]
fn bch_127_generator_matches_minimal_polynomial_product() {
    let m1 = minimal_poly_oracle(1);
    let m3 = minimal_poly_oracle(3);
    assert!(m1.iter().chain(&m3).all(|&c| c <= 1), "minimal polynomials must be binary");
    let to_poly = |v: &[u32]| Gf2Poly::from_coeffs(&v.iter().map(|&c| c as u8).collect::<Vec<_>>());
    let g = to_poly(&m1).mul(&to_poly(&m3));
    let (spec, code) = build_bch(7, 2).unwrap();
    assert_eq!(spec.generator_poly, g);
    assert_eq!(g.degree(), Some(14));
    assert!(g.divides(&Gf2Poly::x_pow_minus_one(127)));
    assert_eq!((code.n(), code.k()), (127, 113));
}
