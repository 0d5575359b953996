//! Mixed space-time norms `L^p_t L^q_x` over snapshot records.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::propagator::{EvolutionRecord, TimeGrid};
use crate::spectral::{fft, Field};

fn check_exponent(what: &'static str, v: f64) -> Result<()> {
    if v >= 1.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            value: v,
            range: "[1, inf]",
        })
    }
}

/// Trapezoid weights for (possibly uneven) sorted instants.
pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 1..n {
        let h = 0.5 * (times[i] - times[i - 1]);
        w[i - 1] += h;
        w[i] += h;
    }
    w
}

/// Streaming `L^p` in time of per-instant spatial norms.
#[derive(Clone, Debug)]
pub struct TimeNorm {
    p: f64,
    sum: f64,
    max: f64,
    count: usize,
}

impl TimeNorm {
    pub fn new(p: f64) -> Result<Self> {
        check_exponent("time exponent p", p)?;
        Ok(Self {
            p,
            sum: 0.0,
            max: 0.0,
            count: 0,
        })
    }

    pub fn add(&mut self, weight: f64, value: f64) {
        self.max = self.max.max(value);
        if self.p.is_finite() {
            self.sum += weight * value.powf(self.p);
        }
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn finish(&self) -> f64 {
        if self.p.is_infinite() {
            self.max
        } else {
            self.sum.powf(1.0 / self.p)
        }
    }
}

fn spatial(f: &Field, q: f64, mask: Option<&[bool]>) -> f64 {
    match mask {
        Some(m) => f.norm_lp_masked(q, m),
        None => f.norm_lp(q),
    }
}

/// `||u||_{L^p_t L^q_x}` with trapezoid weights on the record's instants and
/// the grid measure in space; `mask` restricts the spatial sum.
pub fn mixed_norm(rec: &EvolutionRecord, p: f64, q: f64, mask: Option<&[bool]>) -> Result<f64> {
    mixed_norm_of(&rec.times, &rec.snapshots, p, q, mask)
}

pub fn mixed_norm_of(
    times: &[f64],
    snapshots: &[Field],
    p: f64,
    q: f64,
    mask: Option<&[bool]>,
) -> Result<f64> {
    check_exponent("time exponent p", p)?;
    check_exponent("space exponent q", q)?;
    if snapshots.is_empty() {
        return Err(Error::Empty("evolution record"));
    }
    if times.len() != snapshots.len() {
        return Err(Error::Format(format!(
            "{} instants for {} snapshots",
            times.len(),
            snapshots.len()
        )));
    }
    if let Some(m) = mask {
        if m.len() != snapshots[0].spec().len() {
            return Err(Error::GridMismatch("mask length differs from grid".into()));
        }
    }
    let weights = trapezoid_weights(times);
    let mut acc = TimeNorm::new(p)?;
    for (w, f) in weights.iter().zip(snapshots) {
        acc.add(*w, spatial(f, q, mask));
    }
    Ok(acc.finish())
}

/// Visits `e^{it Delta} f` at every instant of `grid` (in increasing order)
/// without storing snapshots; the phase advances by repeated
/// multiplication with `exp(-i h |k|^2)` along each branch.
pub fn stream_free<T, V>(f: &Field, grid: &TimeGrid, mut visit: V) -> Vec<T>
where
    V: FnMut(&Field) -> T,
{
    let spec = f.spec().clone();
    let hat = fft::forward(f);
    let k2 = spec.k_squared();
    let mut branch = |sign: f64| -> Vec<T> {
        let step: Vec<Complex64> = k2
            .iter()
            .map(|&q| Complex64::from_polar(1.0, -sign * grid.step() * q))
            .collect();
        let mut cur = hat.clone();
        let mut out = Vec::with_capacity(grid.steps + 1);
        for m in 0..=grid.steps {
            if m > 0 {
                cur.par_iter_mut()
                    .zip(step.par_iter())
                    .for_each(|(v, e)| *v *= e);
            }
            out.push(visit(&fft::inverse(&spec, cur.clone())));
        }
        out
    };
    if !grid.two_sided {
        return branch(1.0);
    }
    let mut all: Vec<T> = branch(-1.0).into_iter().skip(1).rev().collect();
    all.extend(branch(1.0));
    all
}

/// `(sum_m w_m v_m^p)^{1/p}` with the trapezoid weights of `grid`.
pub fn time_norm(grid: &TimeGrid, values: &[f64], p: f64) -> Result<f64> {
    let mut acc = TimeNorm::new(p)?;
    for (w, v) in grid.weights().iter().zip(values) {
        acc.add(*w, *v);
    }
    Ok(acc.finish())
}
