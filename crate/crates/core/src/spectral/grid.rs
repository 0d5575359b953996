use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic rectangular grid. Axis 0 is the slowest-varying index in the
/// row-major value layout; on half-space runs it carries the normal
/// coordinate `y1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    sizes: Vec<usize>,
    box_len: Vec<f64>,
}

impl GridSpec {
    pub const MIN_SIZE: usize = 8;

    pub fn new(sizes: Vec<usize>, box_len: Vec<f64>) -> Result<Self> {
        if sizes.is_empty() || sizes.len() > 3 {
            return Err(Error::InvalidGrid(format!(
                "dimension {} not in 1..=3",
                sizes.len()
            )));
        }
        if sizes.len() != box_len.len() {
            return Err(Error::InvalidGrid(
                "sizes and box lengths differ in length".into(),
            ));
        }
        for &s in &sizes {
            if s < Self::MIN_SIZE || !s.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "axis size {s} must be a power of two >= {}",
                    Self::MIN_SIZE
                )));
            }
        }
        for &l in &box_len {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!(
                    "box length {l} must be positive"
                )));
            }
        }
        Ok(Self { sizes, box_len })
    }

    /// `[0, 2pi)^n` with `size` points per axis.
    pub fn periodic(n: usize, size: usize) -> Result<Self> {
        Self::new(vec![size; n], vec![2.0 * PI; n])
    }

    pub fn cube(n: usize, size: usize, len: f64) -> Result<Self> {
        Self::new(vec![size; n], vec![len; n])
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn box_len(&self) -> &[f64] {
        &self.box_len
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.box_len[axis] / self.sizes[axis] as f64
    }

    pub fn volume(&self) -> f64 {
        self.box_len.iter().product()
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    /// Row-major stride of `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.sizes[axis + 1..].iter().product()
    }

    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for axis in (0..self.dim()).rev() {
            out[axis] = flat % self.sizes[axis];
            flat /= self.sizes[axis];
        }
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&i, &s)| acc * s + i)
    }

    /// Node coordinate `i * h` on `[0, L)`.
    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        i as f64 * self.spacing(axis)
    }

    /// Node coordinate relative to the box center, on `[-L/2, L/2)`.
    pub fn centered_coord(&self, axis: usize, i: usize) -> f64 {
        self.coord(axis, i) - 0.5 * self.box_len[axis]
    }

    /// Signed lattice index of FFT bin `i`; the Nyquist bin maps to `-N/2`.
    pub fn signed_index(&self, axis: usize, i: usize) -> i64 {
        let n = self.sizes[axis];
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    pub fn is_nyquist(&self, axis: usize, i: usize) -> bool {
        i == self.sizes[axis] / 2
    }

    /// Physical wavenumber of FFT bin `i`.
    pub fn wavenumber(&self, axis: usize, i: usize) -> f64 {
        2.0 * PI / self.box_len[axis] * self.signed_index(axis, i) as f64
    }

    /// Largest representable `|k|` per axis (the Nyquist wavenumber).
    pub fn nyquist(&self, axis: usize) -> f64 {
        PI / self.spacing(axis)
    }

    /// Smallest nonzero wavenumber magnitude on the lattice.
    pub fn min_wavenumber(&self) -> f64 {
        self.box_len
            .iter()
            .map(|l| 2.0 * PI / l)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `|k|` on the lattice.
    pub fn max_wavenumber(&self) -> f64 {
        (0..self.dim())
            .map(|a| self.nyquist(a).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Wavevector of every bin in layout order.
    pub fn wavevectors(&self) -> Vec<Vec<f64>> {
        let mut idx = vec![0; self.dim()];
        (0..self.len())
            .map(|flat| {
                self.multi_index(flat, &mut idx);
                idx.iter()
                    .enumerate()
                    .map(|(a, &i)| self.wavenumber(a, i))
                    .collect()
            })
            .collect()
    }

    /// `|k|^2` of every bin in layout order.
    pub fn k_squared(&self) -> Vec<f64> {
        self.wavevectors()
            .iter()
            .map(|k| k.iter().map(|v| v * v).sum())
            .collect()
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Complex samples on a [`GridSpec`], row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} points",
                values.len(),
                spec.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field values".into()));
        }
        Ok(Self { spec, values })
    }

    pub(crate) fn from_parts_unchecked(spec: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), spec.len());
        Self { spec, values }
    }

    pub fn zeros(spec: &GridSpec) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); spec.len()],
            spec: spec.clone(),
        }
    }

    pub fn constant(spec: &GridSpec, c: Complex64) -> Self {
        Self {
            values: vec![c; spec.len()],
            spec: spec.clone(),
        }
    }

    /// Samples `f` at node coordinates on `[0, L)^n`.
    pub fn from_fn<F>(spec: &GridSpec, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        Self::sample(spec, f, false)
    }

    /// Samples `f` at coordinates measured from the box center.
    pub fn from_fn_centered<F>(spec: &GridSpec, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        Self::sample(spec, f, true)
    }

    pub fn from_real_fn<F>(spec: &GridSpec, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64,
    {
        Self::sample(spec, |x| Complex64::new(f(x), 0.0), false)
    }

    fn sample<F>(spec: &GridSpec, f: F, centered: bool) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let mut idx = vec![0; spec.dim()];
        let mut x = vec![0.0; spec.dim()];
        let values = (0..spec.len())
            .map(|flat| {
                spec.multi_index(flat, &mut idx);
                for a in 0..spec.dim() {
                    x[a] = if centered {
                        spec.centered_coord(a, idx[a])
                    } else {
                        spec.coord(a, idx[a])
                    };
                }
                f(&x)
            })
            .collect();
        Self {
            spec: spec.clone(),
            values,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            spec: self.spec.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with<F>(&self, other: &Field, f: F) -> Self
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        assert_eq!(self.spec, other.spec, "fields live on different grids");
        Self {
            spec: self.spec.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Field) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Field) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: Complex64, other: &Field) {
        assert_eq!(self.spec, other.spec, "fields live on different grids");
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn real_part(&self) -> Self {
        self.map(|v| Complex64::new(v.re, 0.0))
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub fn remove_mean(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `L^p` norm with the grid measure; `p = inf` is the grid maximum.
    pub fn norm_lp(&self, p: f64) -> f64 {
        lp_norm(&self.values, p, self.spec.cell_volume(), None)
    }

    pub fn norm_l2(&self) -> f64 {
        self.norm_lp(2.0)
    }

    /// `L^p` norm restricted to nodes where `mask` is true.
    pub fn norm_lp_masked(&self, p: f64, mask: &[bool]) -> f64 {
        lp_norm(&self.values, p, self.spec.cell_volume(), Some(mask))
    }

    /// `sum conj(a) b dV`.
    pub fn inner(&self, other: &Field) -> Complex64 {
        assert_eq!(self.spec, other.spec, "fields live on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.spec.cell_volume()
    }

    /// Relative `L^2` distance `||self - other|| / ||other||`.
    pub fn rel_l2_error(&self, reference: &Field) -> f64 {
        let den = reference.norm_l2();
        let num = self.sub(reference).norm_l2();
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        assert_eq!(self.spec, other.spec, "fields live on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn lp_norm(values: &[Complex64], p: f64, cell: f64, mask: Option<&[bool]>) -> f64 {
    let kept = || {
        values
            .iter()
            .enumerate()
            .filter(move |(i, _)| mask.is_none_or(|m| m[*i]))
            .map(|(_, v)| v.norm_sqr())
    };
    let top2 = kept().fold(0.0, f64::max);
    if p.is_infinite() || top2 == 0.0 {
        return top2.sqrt();
    }
    // Scale by the max to keep large p from overflowing.
    let sum = power_sum(kept(), p, top2);
    top2.sqrt() * (sum * cell).powf(1.0 / p)
}

/// `sum (v / top2)^{p/2}` over squared moduli `v`, with integer powers when
/// `p` is an even integer.
pub(crate) fn power_sum(sq: impl Iterator<Item = f64>, p: f64, top2: f64) -> f64 {
    let half = 0.5 * p;
    if half.fract() == 0.0 && half <= 16.0 {
        let e = half as i32;
        sq.map(|v| (v / top2).powi(e)).sum()
    } else {
        sq.map(|v| (v / top2).powf(half)).sum()
    }
}
