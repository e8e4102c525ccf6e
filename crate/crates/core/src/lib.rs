#![doc = include_str!("../../../book/src/introduction.md")]

pub mod error;
pub mod quad;
pub mod rng;
pub mod sine;
pub mod stats;
pub mod subordinator;

pub use error::{Error, Result};
pub mod cylnoise;
pub mod spectral_ou;
pub mod jumpdecomp;
pub mod regularity;
pub mod burgers;

#[doc = include_str!("../../../book/src/subordinators.md")]
mod chapter_subordinators {}
#[doc = include_str!("../../../book/src/noise.md")]
mod chapter_noise {}
#[doc = include_str!("../../../book/src/ou-fields.md")]
mod chapter_ou_fields {}
#[doc = include_str!("../../../book/src/regularity.md")]
mod chapter_regularity {}
#[doc = include_str!("../../../book/src/jumps.md")]
mod chapter_jumps {}
#[doc = include_str!("../../../book/src/burgers.md")]
mod chapter_burgers {}
#[doc = include_str!("../../../book/src/experiments.md")]
mod chapter_experiments {}
