//! Total derivatives, Euler–Lagrange operators, Lepage decomposition and the
//! η-transform on polynomial densities.

mod jet;
mod lepage;
mod variational;

pub use jet::{JetSpace, DEFAULT_MAX_JET_ORDER, MAX_JET_ORDER_ENV};
pub use lepage::{BoundaryData, CurrentVector, LepageDecomposition};
pub use variational::{base_generators, jet_var, Density, EulerLagrangeResult};
