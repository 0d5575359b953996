//! `D^s h(x) = C(n, s) P.V. int (h(x) - h(x + y)) |y|^{-n-s} dy` by a
//! punctured-lattice quadrature, and the constant `C(n, s)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::spectral::{fft, Field, GridSpec};

/// `C(n, s) = (s/2) 2^s Gamma((n + s)/2) / (pi^{n/2} Gamma(1 - s/2))`.
pub fn normalization_constant(n: usize, s: f64) -> f64 {
    0.5 * s * 2f64.powf(s) * gamma(0.5 * (n as f64 + s))
        / (PI.powf(0.5 * n as f64) * gamma(1.0 - 0.5 * s))
}

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// `2 int_0^inf (1 - cos t) t^{-1-s} dt`: power series on `[0, 1]`,
/// five-point Gauss panels up to `A = 128 pi`, asymptotic tail beyond.
fn line_integral(s: f64) -> f64 {
    let mut head = 0.0;
    let mut fact = 1.0;
    for j in 1..=12 {
        let e = 2 * j;
        fact *= ((e - 1) * e) as f64;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        head += sign / (fact * (e as f64 - s));
    }
    let end = 128.0 * PI;
    let panels = 4096;
    let w = (end - 1.0) / panels as f64;
    let mut body = 0.0;
    for k in 0..panels {
        let mid = 1.0 + (k as f64 + 0.5) * w;
        for (x, wt) in GL5 {
            let t = mid + 0.5 * w * x;
            body += 0.5 * w * wt * (1.0 - t.cos()) * t.powf(-1.0 - s);
        }
    }
    // int_A^inf cos t t^{-sigma} with sin A = 0, cos A = 1
    let sigma = 1.0 + s;
    let osc = sigma * end.powf(-sigma - 1.0)
        - sigma * (sigma + 1.0) * (sigma + 2.0) * end.powf(-sigma - 3.0);
    let tail = end.powf(-s) / s - osc;
    2.0 * (head + body + tail)
}

/// `C(n, s)` from its defining integral `(int (1 - cos z1) |z|^{-n-s} dz)^{-1}`:
/// the transverse integral is done in closed form and the line integral by
/// quadrature.
pub fn normalization_quadrature(n: usize, s: f64) -> Result<f64> {
    if n == 0 || !(s > 0.0 && s < 2.0) {
        return Err(Error::OutOfRange {
            what: "kernel order s",
            value: s,
            range: "(0, 2) with n >= 1",
        });
    }
    let m = (n - 1) as f64;
    let transverse = PI.powf(0.5 * m) * gamma(0.5 * (1.0 + s)) / gamma(0.5 * (n as f64 + s));
    Ok(1.0 / (line_integral(s) * transverse))
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularKernelConfig {
    pub s: f64,
    pub c_ns: f64,
    /// Lattice points with `|y| < epsilon` are left out of the sum.
    pub epsilon: f64,
    /// Periodic images summed on each side before the analytic tail.
    pub images: usize,
}

impl SingularKernelConfig {
    /// `epsilon` is twice the coarsest spacing.
    pub fn new(spec: &GridSpec, s: f64) -> Result<Self> {
        let h = (0..spec.dim()).map(|a| spec.spacing(a)).fold(0.0, f64::max);
        let images = if spec.dim() == 1 { 64 } else { 8 };
        Self::with_epsilon(spec, s, 2.0 * h, images)
    }

    pub fn with_epsilon(spec: &GridSpec, s: f64, epsilon: f64, images: usize) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::OutOfRange {
                what: "kernel order s",
                value: s,
                range: "(0, 1)",
            });
        }
        if spec.dim() > 2 {
            return Err(Error::InvalidGrid(
                "the singular-integral form is built for 1D and 2D grids".into(),
            ));
        }
        let h = (0..spec.dim()).map(|a| spec.spacing(a)).fold(0.0, f64::max);
        if !(epsilon >= h) {
            return Err(Error::OutOfRange {
                what: "principal-value cutoff epsilon",
                value: epsilon,
                range: "[grid spacing, inf)",
            });
        }
        if images == 0 {
            return Err(Error::OutOfRange {
                what: "kernel images",
                value: 0.0,
                range: ">= 1",
            });
        }
        Ok(Self {
            s,
            c_ns: normalization_constant(spec.dim(), s),
            epsilon,
            images,
        })
    }
}

fn sphere_area(n: usize) -> f64 {
    if n == 1 {
        2.0
    } else {
        2.0 * PI
    }
}

fn ball_volume(n: usize) -> f64 {
    if n == 1 {
        2.0
    } else {
        PI
    }
}

/// Symbol of the quadrature: lattice points `epsilon <= |y| < R` with the
/// cell volume as weight, folded onto the torus; the excluded cells as a
/// ball of equal volume, handled by the second-order Taylor term; and the
/// exterior `|y| >= R` in closed form against the mean.
fn quadrature_symbol(spec: &GridSpec, cfg: &SingularKernelConfig) -> Vec<Complex64> {
    let n = spec.dim();
    let sizes = spec.sizes();
    let h: Vec<f64> = (0..n).map(|a| spec.spacing(a)).collect();
    let cell = spec.cell_volume();
    let p = cfg.images as i64;
    let radius = cfg.images as f64 * spec.box_len().iter().copied().fold(f64::INFINITY, f64::min);
    let mut w = vec![0.0; spec.len()];
    let mut excluded = 0usize;
    let span: Vec<i64> = sizes.iter().map(|&m| p * m as i64).collect();
    let mut visit = |m: &[i64]| {
        let r = m
            .iter()
            .zip(&h)
            .map(|(&i, &d)| (i as f64 * d).powi(2))
            .sum::<f64>()
            .sqrt();
        if r < cfg.epsilon {
            excluded += 1;
            return;
        }
        if r >= radius {
            return;
        }
        let flat = m.iter().zip(sizes).fold(0usize, |acc, (&i, &size)| {
            acc * size + i.rem_euclid(size as i64) as usize
        });
        w[flat] += cell * r.powf(-(n as f64) - cfg.s);
    };
    if n == 1 {
        for i in -span[0]..span[0] {
            visit(&[i]);
        }
    } else {
        for i in -span[0]..span[0] {
            for j in -span[1]..span[1] {
                visit(&[i, j]);
            }
        }
    }
    let total: f64 = w.iter().sum();
    let rho = (excluded as f64 * cell / ball_volume(n)).powf(1.0 / n as f64);
    let near = sphere_area(n) * rho.powf(2.0 - cfg.s) / (2.0 * n as f64 * (2.0 - cfg.s));
    let tail = sphere_area(n) * radius.powf(-cfg.s) / cfg.s;
    let field = Field::new(
        spec.clone(),
        w.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    )
    .expect("finite weights");
    let hat = fft::forward(&field);
    let k2 = spec.k_squared();
    hat.iter()
        .zip(&k2)
        .map(|(wk, &q)| {
            let far = if q == 0.0 { 0.0 } else { tail };
            Complex64::new(cfg.c_ns * (total - wk.re + near * q + far), 0.0)
        })
        .collect()
}

/// Principal-value quadrature of `D^s h`.
pub fn singular_integral_ds(h: &Field, cfg: &SingularKernelConfig) -> Result<Field> {
    let spec = h.spec();
    if spec.dim() > 2 {
        return Err(Error::InvalidGrid(
            "the singular-integral form is built for 1D and 2D grids".into(),
        ));
    }
    let symbol = quadrature_symbol(spec, cfg);
    Ok(crate::spectral::multiplier::apply_sampled(h, &symbol))
}
