//! Numerical library for edge eigenvalue laws of unitary random-matrix
//! ensembles: equilibrium measures for one-cut polynomial potentials,
//! orthonormal polynomials on the full line and on half-lines, finite-n
//! Christoffel-Darboux and Janossy kernels, Nystrom-discretized Fredholm
//! determinants and resolvents, the Tracy-Widom distribution by two
//! independent methods, the universal limiting kernel at the soft edge,
//! and a tridiagonal Monte Carlo sampler for validation.

pub mod error;
pub mod numcore;
pub mod specfun;
pub mod equilibrium;
pub mod orthopoly;
pub mod fredholm;
pub mod edge_laws;
pub mod sampler;
pub mod acceptance;

pub use error::Error;

pub use num_complex;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
