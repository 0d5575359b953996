//! Dirichlet/Neumann splitting of half-space data in `y1` (axis 0) and the
//! odd/even extension operator `E[g] = g_{D,odd} + g_{N,even}`.
//!
//! The `y1` axis has period `L1`; the half-space is `[0, L1/2)` and the
//! Fourier series runs in `cos(k w y1)`, `sin(k w y1)` with `w = 2 pi / L1`.

mod laplacian;
mod parity;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::RatioReport;
use crate::spectral::grid::power_sum;
use crate::spectral::{fft, Field, FourierMultiplier, GridSpec};

pub use laplacian::{
    hat_laplacian, verify_commutation, verify_commutation_periodic, CommutationReport,
    HatLaplacian, PullbackCoefficients,
};
pub use parity::{verify_parity_relations, ParityRelation, ParityReport};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const LEAKAGE_TOL: f64 = 1e-13;

/// Half-space data sampled on the full `y1` period and zero-padded beyond
/// `support_radius`. A radius of `L1/2` keeps the wall row.
#[derive(Clone, Debug)]
pub struct HalfField {
    field: Field,
    support_radius: f64,
}

impl HalfField {
    pub fn new(field: Field, support_radius: f64) -> Result<Self> {
        let half = half_len(field.spec());
        if !(support_radius > 0.0 && support_radius <= half) {
            return Err(Error::OutOfRange {
                what: "support radius",
                value: support_radius,
                range: "(0, L1/2]",
            });
        }
        let leakage = leakage(&field, support_radius);
        if leakage > LEAKAGE_TOL * field.max_abs().max(1.0) {
            return Err(Error::SupportViolation {
                leakage,
                radius: support_radius,
            });
        }
        Ok(Self {
            field,
            support_radius,
        })
    }

    /// Samples `f` on `y1 <= support_radius` and pads with zeros.
    pub fn from_fn<F>(spec: &GridSpec, support_radius: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let field = Field::from_fn(spec, |x| if x[0] <= support_radius { f(x) } else { ZERO });
        Self::new(field, support_radius)
    }

    pub fn from_real_fn<F>(spec: &GridSpec, support_radius: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        Self::from_fn(spec, support_radius, |x| Complex64::new(f(x), 0.0))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn spec(&self) -> &GridSpec {
        self.field.spec()
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn into_field(self) -> Field {
        self.field
    }
}

/// Half the `y1` period.
pub fn half_len(spec: &GridSpec) -> f64 {
    0.5 * spec.box_len()[0]
}

/// Largest magnitude on nodes with `y1 > radius`.
pub fn leakage(f: &Field, radius: f64) -> f64 {
    let spec = f.spec();
    let stride = spec.stride(0);
    f.values()
        .iter()
        .enumerate()
        .filter(|(i, _)| spec.coord(0, i / stride) > radius)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max)
}

/// Cosine and sine coefficients `a_k(y')`, `k = 0..=K`, and `b_k(y')`,
/// `k = 1..=K`, with `K = N1/2`. Each coefficient is a vector over the
/// transverse nodes in row-major order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DNDecomposition {
    pub spec: GridSpec,
    pub a: Vec<Vec<Complex64>>,
    pub b: Vec<Vec<Complex64>>,
}

impl DNDecomposition {
    pub fn order(&self) -> usize {
        self.b.len()
    }

    /// Sine part `g_D` as a full-period field (odd in `y1`).
    pub fn g_d(&self) -> Field {
        self.synthesize(|_a_k, b_k, k, n| {
            if k == 0 || 2 * k == n {
                (ZERO, ZERO)
            } else {
                // b_k sin = (b_k / 2i) (e^{iky} - e^{-iky})
                let c = b_k * Complex64::new(0.0, -0.5) * n as f64;
                (c, -c)
            }
        })
    }

    /// Cosine part `g_N` as a full-period field (even in `y1`).
    pub fn g_n(&self) -> Field {
        self.synthesize(|a_k, _b_k, k, n| {
            if k == 0 {
                (a_k * 0.5 * n as f64, ZERO)
            } else if 2 * k == n {
                (a_k * n as f64, ZERO)
            } else {
                let c = a_k * 0.5 * n as f64;
                (c, c)
            }
        })
    }

    /// Resums the series at `y1` for transverse node `r`.
    pub fn evaluate(&self, y1: f64, r: usize) -> Complex64 {
        let w = 2.0 * std::f64::consts::PI / self.spec.box_len()[0];
        let mut s = self.a[0][r] * 0.5;
        for k in 1..self.a.len() {
            let t = k as f64 * w * y1;
            s += self.a[k][r] * t.cos() + self.b[k - 1][r] * t.sin();
        }
        s
    }

    /// Builds coefficients at `+k` and `-k` from `(a_k, b_k, k, N1)`.
    fn synthesize<F>(&self, pair: F) -> Field
    where
        F: Fn(Complex64, Complex64, usize, usize) -> (Complex64, Complex64) + Sync,
    {
        let spec = &self.spec;
        let n = spec.sizes()[0];
        let m = spec.stride(0);
        let mut coeffs = vec![ZERO; spec.len()];
        for k in 0..=n / 2 {
            for r in 0..m {
                let b = if k == 0 { ZERO } else { self.b[k - 1][r] };
                let (plus, minus) = pair(self.a[k][r], b, k, n);
                coeffs[k * m + r] += plus;
                if k != 0 && 2 * k != n {
                    coeffs[(n - k) * m + r] += minus;
                }
            }
        }
        fft::inverse_axis(spec, &mut coeffs, 0);
        Field::new(spec.clone(), coeffs).expect("finite coefficients")
    }
}

/// Splits a half-space field into its sine and cosine series in `y1`.
pub fn dn_decompose(g: &HalfField) -> DNDecomposition {
    decompose_field(g.field())
}

/// Sine/cosine split of an arbitrary periodic field in `y1`.
pub fn decompose_field(f: &Field) -> DNDecomposition {
    let spec = f.spec().clone();
    let n = spec.sizes()[0];
    let m = spec.stride(0);
    let mut hat = f.values().to_vec();
    fft::forward_axis(&spec, &mut hat, 0);
    let inv = 1.0 / n as f64;
    let a = (0..=n / 2)
        .map(|k| {
            (0..m)
                .map(|r| {
                    let plus = hat[k * m + r];
                    if k == 0 {
                        plus * 2.0 * inv
                    } else if 2 * k == n {
                        plus * inv
                    } else {
                        (plus + hat[(n - k) * m + r]) * inv
                    }
                })
                .collect()
        })
        .collect();
    let b = (1..=n / 2)
        .map(|k| {
            (0..m)
                .map(|r| {
                    if 2 * k == n {
                        ZERO
                    } else {
                        let d = hat[k * m + r] - hat[(n - k) * m + r];
                        Complex64::new(0.0, 1.0) * d * inv
                    }
                })
                .collect()
        })
        .collect();
    DNDecomposition { spec, a, b }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

/// Reflects the samples on `0 <= y1 <= L1/2` across `y1 = 0` with the given
/// parity. Odd reflections vanish at `y1 = 0` and `y1 = L1/2`.
pub fn reflect(f: &Field, parity: Parity) -> Field {
    let spec = f.spec();
    let n = spec.sizes()[0];
    let m = spec.stride(0);
    let src = f.values();
    let mut out = vec![ZERO; spec.len()];
    out.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        let (j, sign) = if i <= n / 2 { (i, 1.0) } else { (n - i, -1.0) };
        let boundary = i == 0 || i == n / 2;
        for (r, v) in row.iter_mut().enumerate() {
            *v = match parity {
                Parity::Even => src[j * m + r],
                Parity::Odd if boundary => ZERO,
                Parity::Odd => src[j * m + r] * sign,
            };
        }
    });
    Field::new(spec.clone(), out).expect("finite input")
}

pub fn odd_extend(g_d: &Field) -> Field {
    reflect(g_d, Parity::Odd)
}

pub fn even_extend(g_n: &Field) -> Field {
    reflect(g_n, Parity::Even)
}

/// Zeroes every node with `y1 >= L1/2`.
pub fn restrict(f: &Field) -> Field {
    let n = f.spec().sizes()[0];
    let m = f.spec().stride(0);
    let mut out = f.clone();
    out.values_mut()[(n / 2) * m..].fill(ZERO);
    out
}

/// `E[g] = g_{D,odd} + g_{N,even}`.
pub fn extend(g: &HalfField) -> Field {
    extend_field(g.field())
}

pub fn extend_field(f: &Field) -> Field {
    let dn = decompose_field(f);
    odd_extend(&dn.g_d()).add(&even_extend(&dn.g_n()))
}

/// Parity reflection of `g` itself: odd for Dirichlet, even for Neumann.
pub fn parity_extend(g: &HalfField, parity: Parity) -> Field {
    reflect(g.field(), parity)
}

/// Ratio `||E[g]||_{H^s(torus)} / ||g||_{H^s}` where the denominator is the
/// Dirichlet/Neumann spectral norm `(||J^s g_D||^2 + ||J^s g_N||^2)^{1/2}`
/// integrated over the half-period only, `J = (1 - Delta)^{1/2}`.
pub fn extension_norm_ratio(family: &[Field], s: f64, label: &str) -> Result<RatioReport> {
    if !(0.0..=2.0).contains(&s) {
        return Err(Error::OutOfRange {
            what: "extension regularity s",
            value: s,
            range: "[0, 2]",
        });
    }
    if family.is_empty() {
        return Err(Error::Empty("extension family"));
    }
    let bessel = FourierMultiplier::bessel(s);
    let rows: Vec<Result<(f64, f64)>> = family
        .par_iter()
        .map(|g| {
            let dn = decompose_field(g);
            let lhs = bessel.apply(&extend_field(g))?.norm_l2();
            let jd = bessel.apply(&dn.g_d())?;
            let jn = bessel.apply(&dn.g_n())?;
            let rhs = (half_l2_sq(&jd) + half_l2_sq(&jn)).sqrt();
            Ok((lhs, rhs))
        })
        .collect();
    let mut report = RatioReport::new("extension bound", label);
    for (i, row) in rows.into_iter().enumerate() {
        let (lhs, rhs) = row?;
        report.push(format!("member-{i}"), lhs, rhs)?;
    }
    report.set_meta("s", s);
    report.set_meta("grid", family[0].spec().sizes());
    Ok(report)
}

/// `L^2` norm over the half-period `[0, L1/2]` by the trapezoid rule in `y1`.
pub fn half_l2_norm(f: &Field) -> f64 {
    half_l2_sq(f).sqrt()
}

fn half_l2_sq(f: &Field) -> f64 {
    let spec = f.spec();
    let n = spec.sizes()[0];
    let m = spec.stride(0);
    let cell = spec.cell_volume();
    let mut sum = 0.0;
    for i in 0..=n / 2 {
        let w = if i == 0 || i == n / 2 { 0.5 } else { 1.0 };
        sum += w * f.values()[i * m..(i + 1) * m]
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>();
    }
    sum * cell
}

/// `L^q` norm over `[0, L1/2]`, end rows at half weight; `q = inf` is the
/// maximum over those rows.
pub fn half_lq_norm(f: &Field, q: f64) -> f64 {
    let spec = f.spec();
    let n = spec.sizes()[0];
    let m = spec.stride(0);
    let rows = &f.values()[..(n / 2 + 1) * m];
    let top2 = rows.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    if q.is_infinite() || top2 == 0.0 {
        return top2.sqrt();
    }
    let mut sum = 0.0;
    for i in 0..=n / 2 {
        let w = if i == 0 || i == n / 2 { 0.5 } else { 1.0 };
        sum += w * power_sum(
            rows[i * m..(i + 1) * m].iter().map(|v| v.norm_sqr()),
            q,
            top2,
        );
    }
    top2.sqrt() * (sum * spec.cell_volume()).powf(1.0 / q)
}
