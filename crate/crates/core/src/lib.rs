//! Stable-like jump processes driven by a single Poisson random measure.
//!
//! The crate samples a truncated Poisson measure `N(dt, dz)` with intensity
//! `dt ⊗ dz/z²`, builds from it a stable-like process whose index depends on
//! its own state together with the stable subordinators it is coupled to,
//! and provides the measurements used to study them: occupation measures,
//! local and box-counting dimensions, multifractal spectrum formulas and
//! censuses of jump configurations.

pub mod census;
pub mod error;
pub mod fractal;
pub mod occupation;
pub mod ppp;
pub mod process;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
