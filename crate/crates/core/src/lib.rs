//! Semiorthogonal decomposition data for projective toric surfaces.

pub mod brauer_groth;
pub mod cli;
pub mod error;
pub mod exactalg;
pub mod generators;
pub mod hjfrac;
pub mod kkalg;
pub mod resolution;
pub mod sodbuilder;
pub mod toricfan;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
