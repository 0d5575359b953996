//! Periodic-grid Fourier calculus: transforms, multipliers, dyadic blocks
//! and the Sobolev/Besov norms built on them.

pub mod dyadic;
pub mod fft;
pub mod grid;
pub mod io;
pub mod multiplier;
pub mod norms;

pub use dyadic::{dyadic_block, overlap_constants, DyadicPartition};
pub use grid::{Field, GridSpec};
pub use multiplier::{apply_multiplier, riesz, FourierMultiplier};
pub use norms::{
    besov_norm, bessel_norm, frequency_l2, sobolev_norm, weight_multiply, weight_multiply_at,
};
