//! Peetre's `K(lambda, f) = inf ||f1||_{L^2} + lambda ||f2||_{H^2-dot}` over
//! sharp spectral splittings `f1 = P_{>L} f`, `f2 = P_{<=L} f`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{fft, Field};

/// Number of cutoffs `L`, log-spaced from half the lowest to twice the
/// highest lattice frequency.
pub const CUTOFFS: usize = 64;

/// The affine functions `high_j + lambda low_j` whose minimum is `K`.
#[derive(Clone, Debug, Serialize)]
pub struct KFunctional {
    pub cutoffs: Vec<f64>,
    /// `||P_{>L} f||_{L^2}`.
    pub high: Vec<f64>,
    /// `||P_{<=L} f||_{H^2-dot}`.
    pub low: Vec<f64>,
}

impl KFunctional {
    pub fn new(f: &Field) -> Self {
        let spec = f.spec();
        let hat = fft::forward(f);
        let norm = spec.volume() / (spec.len() as f64).powi(2);
        let mut modes: Vec<(f64, f64)> = spec
            .k_squared()
            .iter()
            .zip(&hat)
            .map(|(&q, c)| (q.sqrt(), c.norm_sqr() * norm))
            .collect();
        modes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let k_top = modes.last().map_or(1.0, |m| m.0);
        let (lo, hi) = (0.5 * spec.min_wavenumber(), 2.0 * k_top);
        let cutoffs: Vec<f64> = (0..CUTOFFS)
            .map(|j| lo * (hi / lo).powf(j as f64 / (CUTOFFS - 1) as f64))
            .collect();
        let total_high: f64 = modes.iter().filter(|m| m.0 > 0.0).map(|m| m.1).sum();
        let (mut high, mut low) = (Vec::with_capacity(CUTOFFS), Vec::with_capacity(CUTOFFS));
        let (mut i, mut below_l2, mut below_h2) = (0usize, 0.0, 0.0);
        for &c in &cutoffs {
            while i < modes.len() && modes[i].0 <= c {
                if modes[i].0 > 0.0 {
                    below_l2 += modes[i].1;
                }
                below_h2 += modes[i].0.powi(4) * modes[i].1;
                i += 1;
            }
            high.push((total_high - below_l2).max(0.0).sqrt());
            low.push(below_h2.sqrt());
        }
        Self { cutoffs, high, low }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.high
            .iter()
            .zip(&self.low)
            .map(|(h, l)| h + lambda * l)
            .fold(f64::INFINITY, f64::min)
    }

    /// `(int_0^inf (lambda^{-s/2} K)^2 dlambda / lambda)^{1/2}` for `s` in
    /// `(0, 2)`, exact for the piecewise-affine `K`.
    pub fn interpolation_norm(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < 2.0) {
            return Err(Error::OutOfRange {
                what: "interpolation order s",
                value: s,
                range: "(0, 2)",
            });
        }
        let lines: Vec<(f64, f64)> = self
            .high
            .iter()
            .copied()
            .zip(self.low.iter().copied())
            .collect();
        let mut cuts = vec![0.0];
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                if a.1 != b.1 {
                    let x = (b.0 - a.0) / (a.1 - b.1);
                    if x > 0.0 && x.is_finite() {
                        cuts.push(x);
                    }
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.push(f64::INFINITY);
        // antiderivative of lambda^{-s-1} (a + b lambda)^2
        let prim = |a: f64, b: f64, x: f64| -> f64 {
            if x == 0.0 {
                return 0.0;
            }
            let t1 = if a == 0.0 {
                0.0
            } else {
                a * a * x.powf(-s) / -s
            };
            let t2 = if a == 0.0 || b == 0.0 {
                0.0
            } else if s == 1.0 {
                2.0 * a * b * x.ln()
            } else {
                2.0 * a * b * x.powf(1.0 - s) / (1.0 - s)
            };
            let t3 = if b == 0.0 {
                0.0
            } else {
                b * b * x.powf(2.0 - s) / (2.0 - s)
            };
            t1 + t2 + t3
        };
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let probe = if x1.is_infinite() {
                2.0 * x0.max(1.0)
            } else if x0 == 0.0 {
                0.5 * x1
            } else {
                (x0 * x1).sqrt()
            };
            let &(a, b) = lines
                .iter()
                .min_by(|p, q| (p.0 + probe * p.1).total_cmp(&(q.0 + probe * q.1)))
                .expect("nonempty");
            let upper = if x1.is_infinite() {
                if b != 0.0 {
                    return Ok(f64::INFINITY);
                }
                0.0
            } else {
                prim(a, b, x1)
            };
            let lower = if x0 == 0.0 {
                if a != 0.0 {
                    return Ok(f64::INFINITY);
                }
                0.0
            } else {
                prim(a, b, x0)
            };
            total += upper - lower;
        }
        Ok(total.max(0.0).sqrt())
    }
}

/// `K(lambda, f)` for `lambda > 0`.
pub fn k_functional(f: &Field, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::OutOfRange {
            what: "K-functional parameter lambda",
            value: lambda,
            range: "(0, inf)",
        });
    }
    Ok(KFunctional::new(f).eval(lambda))
}
