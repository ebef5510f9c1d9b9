//! Homodyne tomography of multimode Gaussian states.
//!
//! A zero-mean Gaussian state of `M` optical modes is fully described by its
//! 2M×2M covariance matrix over the quadrature vector
//! `q = [x_1..x_M, p_1..p_M]`, normalized so that the vacuum covariance is the
//! identity and `[x, p] = 2i`. This crate simulates the two standard homodyne
//! measurement schemes (single and joint), reconstructs covariance matrices
//! from the outcomes, and analyzes the result:
//!
//! - [`symplectic`]: symplectic form, Cayley parametrization, Williamson and
//!   Bloch-Messiah decompositions, symplectic eigenvalues.
//! - [`states`]: graph/GHZ/cluster covariance construction, optical loss,
//!   physicality, Uhlmann fidelity.
//! - [`measurement`]: informationally complete measurement plans, synthetic
//!   quadrature sampling, sufficient statistics, dataset file format.
//! - [`direct`]: direct (linear-inversion) reconstruction; unbiased but not
//!   guaranteed physical.
//! - [`mle`]: maximum-likelihood reconstruction over a physical-by-construction
//!   parametrization, optimized with Adam; always returns a physical matrix.
//! - [`analysis`]: PPT entanglement detection over bipartitions and the
//!   thermal/squeezing multimode decomposition.
//!
//! All functions are pure; Monte Carlo trials and per-setting sampling
//! parallelize deterministically via derived seeds (see [`seeding`]).

pub mod analysis;
pub mod direct;
mod linalg;
pub mod measurement;
pub mod mle;
pub mod seeding;
pub mod states;
pub mod symplectic;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
