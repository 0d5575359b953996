//! `u(t) = e^{it Delta} f - i int_0^t e^{i(t - tau) Delta} F(tau) dtau`, the
//! solution of `i u_t + Delta u = F`, with the trapezoid rule in `tau`.
//!
//! In Fourier variables the integrand is `e^{-it|k|^2} G(tau)` with
//! `G(tau) = e^{i tau |k|^2} F_hat(tau)`, so each instant only adds one
//! trapezoid panel to a running sum of `G`.

use num_complex::Complex64;

use super::{BoundaryCondition, EvolutionRecord, TimeGrid};
use crate::error::{Error, Result};
use crate::spectral::multiplier::laplacian;
use crate::spectral::{fft, Field, GridSpec};

/// Forcing sampled on demand at instant `t`.
pub trait Forcing {
    fn at(&mut self, t: f64) -> Result<Field>;
}

impl<F: FnMut(f64) -> Result<Field>> Forcing for F {
    fn at(&mut self, t: f64) -> Result<Field> {
        self(t)
    }
}

/// Push-based Duhamel integrator: feed `F(t_m)` in order, get `u(t_m)`.
#[derive(Clone, Debug)]
pub struct DuhamelStepper {
    spec: GridSpec,
    k2: Vec<f64>,
    t0: f64,
    last_t: Option<f64>,
    data: Option<Vec<Complex64>>,
    acc: Vec<Complex64>,
    prev: Option<Vec<Complex64>>,
    /// `exp(i (t - t0) |k|^2)` at the last instant, with the increment that
    /// produced it; equal increments advance it by one multiplication.
    phase: Vec<Complex64>,
    inc: Option<(f64, Vec<Complex64>)>,
}

impl DuhamelStepper {
    /// Starts at `t0` with optional data `u(t0)`.
    pub fn new(spec: &GridSpec, t0: f64, data: Option<&Field>) -> Result<Self> {
        if let Some(d) = data {
            spec.check_same(d.spec())?;
        }
        Ok(Self {
            spec: spec.clone(),
            k2: spec.k_squared(),
            t0,
            last_t: None,
            data: data.map(fft::forward),
            acc: vec![Complex64::new(0.0, 0.0); spec.len()],
            prev: None,
            phase: vec![Complex64::new(1.0, 0.0); spec.len()],
            inc: None,
        })
    }

    /// Adds the forcing sample at `t` (the first call must be at `t0`) and
    /// returns `u(t)`.
    pub fn step(&mut self, t: f64, f: &Field) -> Result<Field> {
        self.spec.check_same(f.spec())?;
        if !f.is_finite() {
            return Err(Error::NonFinite(format!("forcing at t = {t}")));
        }
        self.advance_phase(t);
        let mut g = fft::forward(f);
        for (v, p) in g.iter_mut().zip(&self.phase) {
            *v *= p;
        }
        if let (Some(prev), Some(t_prev)) = (&self.prev, self.last_t) {
            let h = 0.5 * (t - t_prev);
            for ((a, p), c) in self.acc.iter_mut().zip(prev).zip(&g) {
                *a += (p + c) * h;
            }
        }
        self.prev = Some(g);
        self.last_t = Some(t);

        let minus_i = Complex64::new(0.0, -1.0);
        let coeffs = self
            .acc
            .iter()
            .zip(&self.phase)
            .enumerate()
            .map(|(i, (a, p))| {
                let base = self
                    .data
                    .as_ref()
                    .map_or(Complex64::new(0.0, 0.0), |d| d[i]);
                (base + minus_i * a) * p.conj()
            })
            .collect();
        Ok(fft::inverse(&self.spec, coeffs))
    }

    fn advance_phase(&mut self, t: f64) {
        let Some(last) = self.last_t else {
            let s = t - self.t0;
            if s != 0.0 {
                self.phase = self
                    .k2
                    .iter()
                    .map(|&q| Complex64::from_polar(1.0, s * q))
                    .collect();
            }
            return;
        };
        let h = t - last;
        match &self.inc {
            Some((h0, mult)) if (h - h0).abs() <= 1e-12 * h0.abs() => {
                for (p, m) in self.phase.iter_mut().zip(mult) {
                    *p *= m;
                }
            }
            _ => {
                let s = t - self.t0;
                self.phase = self
                    .k2
                    .iter()
                    .map(|&q| Complex64::from_polar(1.0, s * q))
                    .collect();
                self.inc = Some((
                    h,
                    self.k2
                        .iter()
                        .map(|&q| Complex64::from_polar(1.0, h * q))
                        .collect(),
                ));
            }
        }
    }
}

/// Streams `(t_m, u(t_m))` along one branch of instants starting at `t_0`.
pub struct DuhamelStream<F> {
    stepper: DuhamelStepper,
    times: Vec<f64>,
    next: usize,
    forcing: F,
}

impl<F: Forcing> DuhamelStream<F> {
    /// `times` must start at the data instant.
    pub fn new(spec: &GridSpec, times: Vec<f64>, data: Option<&Field>, forcing: F) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Empty("time instants"));
        }
        Ok(Self {
            stepper: DuhamelStepper::new(spec, times[0], data)?,
            times,
            next: 0,
            forcing,
        })
    }

    fn advance(&mut self) -> Result<(f64, Field)> {
        let t = self.times[self.next];
        self.next += 1;
        let f = self.forcing.at(t)?;
        Ok((t, self.stepper.step(t, &f)?))
    }
}

impl<F: Forcing> Iterator for DuhamelStream<F> {
    type Item = Result<(f64, Field)>;

    fn next(&mut self) -> Option<Self::Item> {
        (self.next < self.times.len()).then(|| self.advance())
    }
}

/// Full record on `grid`; two-sided grids run both branches from `t = 0`.
pub fn duhamel<F: Forcing>(
    spec: &GridSpec,
    grid: &TimeGrid,
    data: Option<&Field>,
    mut forcing: F,
) -> Result<EvolutionRecord> {
    let mut pairs: Vec<(f64, Field)> = Vec::new();
    let signs: &[f64] = if grid.two_sided { &[-1.0, 1.0] } else { &[1.0] };
    for &sign in signs {
        let stream = DuhamelStream::new(spec, grid.branch(sign), data, |t| forcing.at(t))?;
        for item in stream {
            let (t, u) = item?;
            if sign < 0.0 && t == 0.0 {
                continue;
            }
            pairs.push((t, u));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (times, snapshots) = pairs.into_iter().unzip();
    Ok(EvolutionRecord::new(
        grid.clone(),
        times,
        snapshots,
        BoundaryCondition::Free,
    ))
}

/// Runs the equation backwards from `u(T)` on the same instants and returns
/// the reconstructed `u(0)`.
pub fn duhamel_backward<F: Forcing>(
    final_state: &Field,
    grid: &TimeGrid,
    forcing: F,
) -> Result<Field> {
    let times: Vec<f64> = grid.branch(1.0).into_iter().rev().collect();
    let stream = DuhamelStream::new(final_state.spec(), times, Some(final_state), forcing)?;
    let mut last = None;
    for item in stream {
        last = Some(item?.1);
    }
    last.ok_or(Error::Empty("time instants"))
}

/// Relative residual of `i u_t + Delta u = F` with centered differences in
/// time over the interior instants of a one-sided record.
pub fn duhamel_residual<F: Forcing>(record: &EvolutionRecord, mut forcing: F) -> Result<f64> {
    let n = record.snapshots.len();
    let (mut num, mut den) = (0.0, 0.0);
    for m in 1..n - 1 {
        let dt = record.times[m + 1] - record.times[m - 1];
        let f = forcing.at(record.times[m])?;
        let mut r = record.snapshots[m + 1]
            .sub(&record.snapshots[m - 1])
            .scale_complex(Complex64::new(0.0, 1.0 / dt));
        r = r.add(&laplacian(&record.snapshots[m])).sub(&f);
        num += r.norm_l2().powi(2);
        den += f.norm_l2().powi(2);
    }
    Ok(if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    })
}
