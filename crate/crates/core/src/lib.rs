//! Pseudo-spectral laboratory for Schrödinger propagators on half-spaces.
//!
//! The crate models `R^n` by the flat torus and provides:
//!
//! - [`spectral`]: FFT multipliers (`D^s`, Riesz transforms, Littlewood–Paley
//!   blocks) and Sobolev/Besov/mixed norms;
//! - [`extension`]: the Dirichlet/Neumann split of half-space data and its
//!   odd/even reflection extension, together with the flattened Laplacian;
//! - [`geometry`]: boundary flattening charts and partitions of unity;
//! - [`propagator`]: free and reflected Schrödinger evolution and Duhamel
//!   integrals;
//! - [`estimates`]: admissible exponents and ratio estimators for
//!   Strichartz, local smoothing and the endpoint localization pipeline;
//! - [`commutators`]: fractional commutators, the principal-value form of
//!   `D^s`, Lipschitz norms and the K-functional.

pub mod commutators;
pub mod error;
pub mod estimates;
pub mod extension;
pub mod families;
pub mod geometry;
pub mod propagator;
pub mod spectral;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use spectral::{Field, GridSpec};
