use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CodeKind, LinearCode};
use crate::bits::BitWord;
use crate::error::{invalid, Result};
use crate::gf2::BitMatrix;

/// Systematic random code `[I_k | P]` with `P` drawn from a seeded stream.
pub fn random_linear_code(n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    if k == 0 || k >= n {
        return invalid(format!("random linear code needs 0 < k < n, got n = {n}, k = {k}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..k)
        .map(|i| {
            let mut row = BitWord::unit(n, i);
            for j in k..n {
                row.set(j, rng.gen::<bool>());
            }
            row
        })
        .collect();
    LinearCode::from_generator(BitMatrix::from_rows(rows, n)?, CodeKind::RandomLinear)
}

/// Systematic Hamming(7,4): parity bits `p1 = d1+d2+d4`, `p2 = d1+d3+d4`,
/// `p3 = d2+d3+d4`.
pub fn hamming_7_4() -> LinearCode {
    let g = BitMatrix::parse_rows(&["1000110", "0100101", "0010011", "0001111"]).expect("fixture");
    LinearCode::from_generator(g, CodeKind::Explicit).expect("full rank")
}

/// Rate-1 code of length `n`.
pub fn uncoded(n: usize) -> Result<LinearCode> {
    LinearCode::from_generator(BitMatrix::identity(n), CodeKind::Uncoded)
}
