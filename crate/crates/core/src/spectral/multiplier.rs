//! Fourier multipliers `f -> F^{-1}[m(k) F f]` on the periodic lattice.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::fft;
use super::grid::{Field, GridSpec};
use crate::error::{Error, Result};

type Symbol = dyn Fn(&[f64]) -> Complex64 + Send + Sync;

/// A symbol `m(k)` evaluated at physical wavevectors, plus the value used
/// at `k = 0`.
#[derive(Clone)]
pub struct FourierMultiplier {
    symbol: Arc<Symbol>,
    zero_mode: Complex64,
    zero_odd_nyquist: bool,
}

impl std::fmt::Debug for FourierMultiplier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierMultiplier")
            .field("zero_mode", &self.zero_mode)
            .field("zero_odd_nyquist", &self.zero_odd_nyquist)
            .finish_non_exhaustive()
    }
}

impl FourierMultiplier {
    pub fn new<F>(symbol: F, zero_mode: Complex64) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            symbol: Arc::new(symbol),
            zero_mode,
            zero_odd_nyquist: false,
        }
    }

    /// Odd symbols (first derivatives, Riesz) are not conjugate-symmetric at
    /// the Nyquist bin; zeroing it there keeps real fields real.
    pub fn with_nyquist_zeroed(mut self) -> Self {
        self.zero_odd_nyquist = true;
        self
    }

    pub fn identity() -> Self {
        Self::new(|_| Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// `D^s = |k|^s`. The zero mode is 0 unless `s == 0`.
    pub fn frac_laplacian(s: f64) -> Self {
        let zero = if s == 0.0 { 1.0 } else { 0.0 };
        Self::new(
            move |k| Complex64::new(norm(k).powf(s), 0.0),
            Complex64::new(zero, 0.0),
        )
    }

    /// Bessel potential `(1 + |k|^2)^{s/2}`.
    pub fn bessel(s: f64) -> Self {
        Self::new(
            move |k| Complex64::new((1.0 + norm2(k)).powf(0.5 * s), 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// Riesz transform `R_j` with symbol `-i k_j / |k|` (axis is 0-based).
    pub fn riesz(axis: usize) -> Self {
        Self::new(
            move |k| Complex64::new(0.0, -k[axis] / norm(k)),
            Complex64::new(0.0, 0.0),
        )
        .with_nyquist_zeroed()
    }

    /// `partial_j` with symbol `i k_j`.
    pub fn derivative(axis: usize) -> Self {
        Self::new(
            move |k| Complex64::new(0.0, k[axis]),
            Complex64::new(0.0, 0.0),
        )
        .with_nyquist_zeroed()
    }

    /// Second derivative `partial_j^2 = -k_j^2`, Nyquist kept.
    pub fn second_derivative(axis: usize) -> Self {
        Self::new(
            move |k| Complex64::new(-k[axis] * k[axis], 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    pub fn laplacian() -> Self {
        Self::new(|k| Complex64::new(-norm2(k), 0.0), Complex64::new(0.0, 0.0))
    }

    /// `D^{-1/2} partial_j`, symbol `i k_j |k|^{-1/2}`.
    pub fn half_gradient(axis: usize) -> Self {
        Self::new(
            move |k| Complex64::new(0.0, k[axis] / norm(k).sqrt()),
            Complex64::new(0.0, 0.0),
        )
        .with_nyquist_zeroed()
    }

    /// Free Schrödinger group `e^{it Delta}`: symbol `exp(-i t |k|^2)`.
    pub fn schrodinger(t: f64) -> Self {
        Self::new(
            move |k| Complex64::from_polar(1.0, -t * norm2(k)),
            Complex64::new(1.0, 0.0),
        )
    }

    pub fn eval(&self, k: &[f64]) -> Complex64 {
        if k.iter().all(|&v| v == 0.0) {
            self.zero_mode
        } else {
            (self.symbol)(k)
        }
    }

    /// Pointwise product of two symbols.
    pub fn compose(&self, other: &FourierMultiplier) -> Self {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        Self {
            symbol: Arc::new(move |k| a(k) * b(k)),
            zero_mode: self.zero_mode * other.zero_mode,
            zero_odd_nyquist: self.zero_odd_nyquist || other.zero_odd_nyquist,
        }
    }

    /// Symbol sampled on the lattice of `spec`, in FFT layout.
    pub fn sample(&self, spec: &GridSpec) -> Result<Vec<Complex64>> {
        let dim = spec.dim();
        let values: Vec<Complex64> = (0..spec.len())
            .into_par_iter()
            .map_init(
                || (vec![0usize; dim], vec![0.0; dim]),
                |(idx, k), flat| {
                    spec.multi_index(flat, idx);
                    let mut nyq = false;
                    for a in 0..dim {
                        k[a] = spec.wavenumber(a, idx[a]);
                        nyq |= spec.is_nyquist(a, idx[a]);
                    }
                    if nyq && self.zero_odd_nyquist {
                        Complex64::new(0.0, 0.0)
                    } else {
                        self.eval(k)
                    }
                },
            )
            .collect();
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            let mut idx = vec![0; dim];
            spec.multi_index(bad, &mut idx);
            let k = idx
                .iter()
                .enumerate()
                .map(|(a, &i)| spec.signed_index(a, i))
                .collect();
            return Err(Error::NonFiniteSymbol { k });
        }
        Ok(values)
    }

    pub fn apply(&self, f: &Field) -> Result<Field> {
        let symbol = self.sample(f.spec())?;
        Ok(apply_sampled(f, &symbol))
    }
}

/// Applies a symbol already sampled by [`FourierMultiplier::sample`].
pub fn apply_sampled(f: &Field, symbol: &[Complex64]) -> Field {
    let mut c = fft::forward(f);
    c.par_iter_mut()
        .zip(symbol.par_iter())
        .for_each(|(v, m)| *v *= m);
    fft::inverse(f.spec(), c)
}

pub fn apply_multiplier(f: &Field, m: &FourierMultiplier) -> Result<Field> {
    m.apply(f)
}

pub fn riesz(f: &Field, axis: usize) -> Result<Field> {
    if axis >= f.spec().dim() {
        return Err(Error::OutOfRange {
            what: "Riesz axis",
            value: axis as f64,
            range: "0..dim",
        });
    }
    FourierMultiplier::riesz(axis).apply(f)
}

/// Infallible shortcuts for the fixed symbols used throughout the crate;
/// these symbols are finite everywhere on the lattice.
pub fn derivative(f: &Field, axis: usize) -> Field {
    FourierMultiplier::derivative(axis)
        .apply(f)
        .expect("finite symbol")
}

pub fn second_derivative(f: &Field, axis: usize) -> Field {
    FourierMultiplier::second_derivative(axis)
        .apply(f)
        .expect("finite symbol")
}

pub fn laplacian(f: &Field) -> Field {
    FourierMultiplier::laplacian()
        .apply(f)
        .expect("finite symbol")
}

pub fn frac_laplacian(f: &Field, s: f64) -> Field {
    FourierMultiplier::frac_laplacian(s)
        .apply(f)
        .expect("finite symbol off the zero mode")
}

pub fn gradient(f: &Field) -> Vec<Field> {
    (0..f.spec().dim()).map(|a| derivative(f, a)).collect()
}

pub(crate) fn norm2(k: &[f64]) -> f64 {
    k.iter().map(|v| v * v).sum()
}

pub(crate) fn norm(k: &[f64]) -> f64 {
    norm2(k).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_wave(spec: &GridSpec, k: &[f64]) -> Field {
        let k = k.to_vec();
        Field::from_fn(spec, move |x| {
            let phase: f64 = x.iter().zip(&k).map(|(a, b)| a * b).sum();
            Complex64::from_polar(1.0, phase)
        })
    }

    #[test]
    fn acts_diagonally_on_plane_waves() {
        let g = GridSpec::periodic(2, 32).unwrap();
        let f = plane_wave(&g, &[3.0, -4.0]);
        let out = frac_laplacian(&f, 0.7);
        assert!(out.max_abs_diff(&f.scale(5f64.powf(0.7))) < 1e-12);
    }

    #[test]
    fn identity_symbol_is_identity() {
        let g = GridSpec::periodic(2, 16).unwrap();
        let f = Field::from_fn(&g, |x| Complex64::new(x[0].sin() * x[1], x[1].cos()));
        let out = FourierMultiplier::identity().apply(&f).unwrap();
        assert!(out.max_abs_diff(&f) < 1e-13);
    }

    #[test]
    fn half_derivative_of_cosine() {
        let g = GridSpec::periodic(2, 32).unwrap();
        let f = Field::from_real_fn(&g, |x| (3.0 * x[0]).cos());
        let out = frac_laplacian(&f, 0.5);
        assert!(out.max_abs_diff(&f.scale(3f64.sqrt())) < 1e-12);
    }

    #[test]
    fn riesz_on_modes() {
        let g = GridSpec::periodic(2, 16).unwrap();
        let f = plane_wave(&g, &[2.0, 0.0]);
        let r1 = riesz(&f, 0).unwrap();
        assert!(r1.max_abs_diff(&f.scale_complex(Complex64::new(0.0, -1.0))) < 1e-13);
        assert!(riesz(&f, 1).unwrap().max_abs() < 1e-13);
        let s = Field::from_real_fn(&g, |x| x[0].sin());
        let c = Field::from_real_fn(&g, |x| -x[0].cos());
        assert!(riesz(&s, 0).unwrap().max_abs_diff(&c) < 1e-13);
        assert!(riesz(&s, 2).is_err());
    }

    #[test]
    fn non_finite_symbol_reports_k() {
        let g = GridSpec::periodic(1, 8).unwrap();
        let m = FourierMultiplier::new(
            |k| Complex64::new(1.0 / (k[0] - 2.0), 0.0),
            Complex64::new(0.0, 0.0),
        );
        match m.apply(&Field::zeros(&g)) {
            Err(Error::NonFiniteSymbol { k }) => assert_eq!(k, vec![2]),
            other => panic!("unexpected {other:?}"),
        }
    }
}
