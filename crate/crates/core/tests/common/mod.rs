//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use splab::spectral::fft;
use splab::{Field, GridSpec};

/// Half-space evolution by direct sine (Dirichlet) or cosine (Neumann)
/// series in `y1` on `[0, L1/2]`, `O(M^2)` per transverse mode, with
/// transverse FFTs. Input and output carry the half-space samples in rows
/// `0..=N1/2` (the wall row is only used for Neumann).
pub fn series_evolve(g: &Field, t: f64, dirichlet: bool) -> Field {
    let spec = g.spec().clone();
    let n1 = spec.sizes()[0];
    let m = n1 / 2;
    let cols = spec.stride(0);
    let w = 2.0 * PI / spec.box_len()[0];
    let mut data = g.values().to_vec();
    for a in 1..spec.dim() {
        fft::forward_axis(&spec, &mut data, a);
    }
    let k2 = spec.k_squared();
    let table: Vec<f64> = (0..2 * m)
        .map(|j| {
            let x = PI * j as f64 / m as f64;
            if dirichlet {
                x.sin()
            } else {
                x.cos()
            }
        })
        .collect();
    let basis = |k: usize, i: usize| table[(k * i) % (2 * m)];
    let mut out = vec![Complex64::new(0.0, 0.0); spec.len()];
    for r in 0..cols {
        let kt = k2[r];
        let col: Vec<Complex64> = (0..=m).map(|i| data[i * cols + r]).collect();
        let ks: Vec<usize> = if dirichlet {
            (1..m).collect()
        } else {
            (0..=m).collect()
        };
        // DCT-I / DST-I: end samples and end modes carry weight 1/2
        let end = |j: usize| {
            if !dirichlet && (j == 0 || j == m) {
                0.5
            } else {
                1.0
            }
        };
        let coeffs: Vec<Complex64> = ks
            .iter()
            .map(|&k| {
                let mut s = Complex64::new(0.0, 0.0);
                for (i, v) in col.iter().enumerate() {
                    s += v * basis(k, i) * end(i);
                }
                let lam = (k as f64 * w).powi(2) + kt;
                s * (2.0 / m as f64) * Complex64::from_polar(1.0, -t * lam)
            })
            .collect();
        for i in 0..=m {
            let mut v = Complex64::new(0.0, 0.0);
            for (c, &k) in coeffs.iter().zip(&ks) {
                v += c * basis(k, i) * end(k);
            }
            out[i * cols + r] = v;
        }
    }
    for a in 1..spec.dim() {
        fft::inverse_axis(&spec, &mut out, a);
    }
    Field::new(spec, out).unwrap()
}

/// Exact solution of `i u_t + Delta u = e^{it} phi`, `u(0) = 0`, per mode:
/// `u_hat = -phi_hat (e^{it} - e^{-it|k|^2}) / (1 + |k|^2)`.
pub fn manufactured_duhamel(phi: &Field, t: f64) -> Field {
    let spec = phi.spec();
    let hat = fft::forward(phi);
    let k2 = spec.k_squared();
    let c = hat
        .iter()
        .zip(&k2)
        .map(|(v, &q)| {
            let num = Complex64::from_polar(1.0, t) - Complex64::from_polar(1.0, -t * q);
            -v * num / (1.0 + q)
        })
        .collect();
    fft::inverse(spec, c)
}

/// Free-space Gaussian solution of `i u_t + Delta u = 0` from
/// `exp(-|x|^2 / (2 w^2))`, coordinates measured from the box center.
pub fn gaussian_free_solution(spec: &GridSpec, width: f64, t: f64) -> Field {
    let n = spec.dim() as f64;
    let s = Complex64::new(width * width, 2.0 * t);
    let pref = (Complex64::new(width * width, 0.0) / s).powf(0.5 * n);
    Field::from_fn_centered(spec, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        pref * (-(r2) / (2.0 * s)).exp()
    })
}
