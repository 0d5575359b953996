//! Littlewood–Paley blocks on the periodic lattice.

use num_complex::Complex64;

use super::grid::{Field, GridSpec};
use super::multiplier::FourierMultiplier;
use crate::error::{Error, Result};

/// `exp(-1/(1-t^2))` on `|t| < 1`, zero elsewhere.
pub fn smooth_bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// The raw profile in logarithmic frequency, before normalization.
fn raw(lambda: f64) -> f64 {
    smooth_bump(lambda.log2())
}

/// Dilation-invariant normalizer `S(lambda) = sum_m raw(2^{-m} lambda)`.
/// At most three terms are nonzero and at least one exceeds `exp(-4/3)`.
fn normalizer(lambda: f64) -> f64 {
    let t = lambda.log2();
    let m0 = t.round();
    (-2..=2).map(|d| smooth_bump(t - (m0 + d as f64))).sum()
}

/// `phi_0(lambda) = raw(lambda) / S(lambda)`: smooth, nonnegative, supported
/// in `[1/2, 2]`, and `sum_j phi_0(2^{-j} lambda) = 1` for every `lambda > 0`.
pub fn profile(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    let r = raw(lambda);
    if r == 0.0 {
        0.0
    } else {
        r / normalizer(lambda)
    }
}

/// Dyadic partition restricted to the blocks visible on one lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DyadicPartition {
    pub j_min: i32,
    pub j_max: i32,
}

impl DyadicPartition {
    /// Every block whose open support `(2^{j-1}, 2^{j+1})` meets the band
    /// `[k_min, k_max]` of nonzero lattice frequencies.
    pub fn for_grid(spec: &GridSpec) -> Self {
        let lo = spec.min_wavenumber().log2();
        let hi = spec.max_wavenumber().log2();
        Self {
            j_min: (lo - 1.0).floor() as i32 + 1,
            j_max: (hi + 1.0).ceil() as i32 - 1,
        }
    }

    pub fn phi(j: i32, lambda: f64) -> f64 {
        profile(lambda * 2f64.powi(-j))
    }

    pub fn blocks(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    pub fn sum_at(&self, lambda: f64) -> f64 {
        self.blocks().map(|j| Self::phi(j, lambda)).sum()
    }

    pub fn block_multiplier(&self, j: i32) -> Result<FourierMultiplier> {
        if j < self.j_min || j > self.j_max {
            return Err(Error::OutOfRange {
                what: "dyadic block index",
                value: j as f64,
                range: "j_min..=j_max of the grid",
            });
        }
        Ok(FourierMultiplier::new(
            move |k| {
                let lam = k.iter().map(|v| v * v).sum::<f64>().sqrt();
                Complex64::new(Self::phi(j, lam), 0.0)
            },
            Complex64::new(0.0, 0.0),
        ))
    }
}

/// Bounds `(c, C)` of `sum_j phi_j(lambda)^2` over one dyadic period, so
/// that `c ||f - mean||^2 <= sum_j ||block_j f||^2 <= C ||f - mean||^2`.
pub fn overlap_constants(samples: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for i in 0..samples {
        let lam = 2f64.powf(i as f64 / samples as f64);
        let s: f64 = (-3..=3).map(|j| DyadicPartition::phi(j, lam).powi(2)).sum();
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

pub fn dyadic_block(f: &Field, j: i32, partition: &DyadicPartition) -> Result<Field> {
    partition.block_multiplier(j)?.apply(f)
}

/// A stable digest of the profile definition, stamped into reports.
pub fn profile_id() -> &'static str {
    "log2-bump exp(-1/(1-t^2)) normalized by its dyadic sum"
}
