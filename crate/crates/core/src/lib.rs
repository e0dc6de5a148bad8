//! Spectral toolkit for one-dimensional Schrödinger operators
//! −y'' + q y with compactly supported complex potentials.

pub mod cheb;
pub mod cli;
pub mod halfline;
pub mod jost;
pub mod locator;
pub mod potential;
pub mod quad;
pub mod report;
pub mod traces;
pub mod util;

pub use jost::{Jost, JostConfig, JostError, JostEvaluation};
pub use potential::{Norms, PotentialError, PotentialSpec, Weight};
