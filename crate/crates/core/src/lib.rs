//! GRAND-family decoding (hard GRAND, ORBGRAND, SGRAND) with soft and
//! pseudo-soft reliability information extracted from ZF/MMSE equalization
//! over fading channels, plus the Monte-Carlo harness that measures
//! block-error rates.
//!
//! The signal-processing layers are generic over [`Real`] (`f32`/`f64`);
//! the aliases at the crate root fix the scalar for the common cases.

pub mod bits;
pub mod channel;
pub mod codebook;
pub mod equalize;
pub mod error;
pub mod gf2;
pub mod grand;
pub mod harness;
pub mod modem;
pub mod oracle;
pub mod scalar;

pub use bits::BitWord;
pub use error::{Error, Result};
pub use scalar::Real;

pub type Constellation64 = modem::Constellation<f64>;
pub type Constellation32 = modem::Constellation<f32>;
pub type ChannelRealization64 = channel::ChannelRealization<f64>;
pub type ChannelRealization32 = channel::ChannelRealization<f32>;
pub type EqualizedFrame64 = equalize::EqualizedFrame<f64>;
pub type EqualizedFrame32 = equalize::EqualizedFrame<f32>;
pub type RankPermutation64 = grand::RankPermutation<f64>;
pub type RankPermutation32 = grand::RankPermutation<f32>;
pub type ExactEtaPatterns64 = grand::ExactEtaPatterns<f64>;
pub type ExactEtaPatterns32 = grand::ExactEtaPatterns<f32>;
