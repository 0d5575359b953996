//! Sobolev, Besov and weighted operations on grid fields.

use num_complex::Complex64;

use super::dyadic::{dyadic_block, DyadicPartition};
use super::fft;
use super::grid::{Field, GridSpec};
use crate::error::{Error, Result};

/// `sqrt(vol / N^2 * sum_k w(k) |F_k|^2)` for a weight on `|k|^2`.
fn weighted_frequency_l2<W: Fn(f64) -> f64>(f: &Field, weight: W) -> f64 {
    let spec = f.spec();
    let coeffs = fft::forward(f);
    let k2 = spec.k_squared();
    let sum: f64 = coeffs
        .iter()
        .zip(&k2)
        .map(|(c, &k)| weight(k) * c.norm_sqr())
        .sum();
    let n = spec.len() as f64;
    (spec.volume() / (n * n) * sum).sqrt()
}

/// Frequency-side `l^2` norm, equal to `||f||_{L^2}` by Plancherel.
pub fn frequency_l2(f: &Field) -> f64 {
    weighted_frequency_l2(f, |_| 1.0)
}

/// Homogeneous `||D^s f||_{L^2}`. The mean is ignored unless `s == 0`, where
/// `D^0` is the identity.
pub fn sobolev_norm(f: &Field, s: f64) -> Result<f64> {
    let v = weighted_frequency_l2(f, |k2| {
        if k2 == 0.0 {
            if s == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            k2.powf(s)
        }
    });
    finite(v, "Sobolev norm")
}

/// Inhomogeneous `||(1 - Delta)^{s/2} f||_{L^2}`.
pub fn bessel_norm(f: &Field, s: f64) -> Result<f64> {
    finite(
        weighted_frequency_l2(f, |k2| (1.0 + k2).powf(s)),
        "Bessel norm",
    )
}

/// Homogeneous Besov norm: the `l^q` sum over `j` of
/// `2^{sj} ||phi_j(|D|) f||_{L^p}`.
pub fn besov_norm(f: &Field, s: f64, p: f64, q: f64) -> Result<f64> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    let part = DyadicPartition::for_grid(f.spec());
    let terms: Vec<f64> = part
        .blocks()
        .map(|j| dyadic_block(f, j, &part).map(|b| 2f64.powf(s * j as f64) * b.norm_lp(p)))
        .collect::<Result<_>>()?;
    let v = if q.is_infinite() {
        terms.iter().copied().fold(0.0, f64::max)
    } else {
        terms.iter().map(|t| t.powf(q)).sum::<f64>().powf(1.0 / q)
    };
    finite(v, "Besov norm")
}

fn check_exponent(what: &'static str, v: f64) -> Result<()> {
    if v >= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            value: v,
            range: "[1, inf]",
        })
    }
}

fn finite(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what.into()))
    }
}

/// Minimal-image displacement of `x` from `c` on a periodic axis of length `l`.
pub fn periodic_offset(x: f64, c: f64, l: f64) -> f64 {
    let d = (x - c).rem_euclid(l);
    if d >= 0.5 * l {
        d - l
    } else {
        d
    }
}

/// `<x>^a f` with `x` measured from the box center.
pub fn weight_multiply(f: &Field, a: f64) -> Field {
    let center: Vec<f64> = f.spec().box_len().iter().map(|l| 0.5 * l).collect();
    weight_multiply_at(f, a, &center)
}

/// `<x - c>^a f` with periodic minimal-image displacement.
pub fn weight_multiply_at(f: &Field, a: f64, center: &[f64]) -> Field {
    let w = weight_field(f.spec(), a, center);
    f.mul(&w)
}

pub fn weight_field(spec: &GridSpec, a: f64, center: &[f64]) -> Field {
    let lens = spec.box_len().to_vec();
    let center = center.to_vec();
    Field::from_real_fn(spec, move |x| {
        let r2: f64 = x
            .iter()
            .enumerate()
            .map(|(i, &xi)| periodic_offset(xi, center[i], lens[i]).powi(2))
            .sum();
        (1.0 + r2).powf(0.5 * a)
    })
}

/// Magnitude of a vector field pointwise, as a scalar field.
pub fn vector_magnitude(components: &[Field]) -> Field {
    let spec = components[0].spec().clone();
    let values = (0..spec.len())
        .map(|i| {
            let s: f64 = components.iter().map(|c| c.values()[i].norm_sqr()).sum();
            Complex64::new(s.sqrt(), 0.0)
        })
        .collect();
    Field::from_parts_unchecked(spec, values)
}
