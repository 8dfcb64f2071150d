//! Exact variational calculus on jet coordinates with Grassmann-graded fields.
//!
//! The crate computes Euler–Lagrange operators, checks Noether identities,
//! assembles Koszul–Tate and BRST operators from identity data, and decides
//! the classical master equation, all as exact zero tests over ℚ.

pub mod algebra;
pub mod brst;
pub mod calculus;
mod error;
pub mod frontend;
pub mod models;
pub mod symmetry;

pub use error::{Error, Result};

/// Version string reported by the CLI and JSON reports.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
