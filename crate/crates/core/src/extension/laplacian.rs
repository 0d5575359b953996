//! The flattened Laplacian
//! `Delta_hat g = Delta' g + alpha d11 g + sum_j beta_j dj d1 g + gamma d1 g`
//! and its commutation with the extension operator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{decompose_field, extend_field, half_len, reflect, restrict, HalfField, Parity};
use crate::error::{Error, Result};
use crate::spectral::fft;
use crate::spectral::multiplier::{derivative, second_derivative};
use crate::spectral::{Field, GridSpec};

const ALIASING_TOL: f64 = 1e-10;

/// Coefficients of the flattened Laplacian, stored as full-grid fields that
/// are constant in `y1`.
#[derive(Clone, Debug)]
pub struct PullbackCoefficients {
    alpha: Field,
    beta: Vec<Field>,
    gamma: Field,
}

impl PullbackCoefficients {
    pub fn flat(spec: &GridSpec) -> Self {
        Self {
            alpha: Field::constant(spec, Complex64::new(1.0, 0.0)),
            beta: (1..spec.dim()).map(|_| Field::zeros(spec)).collect(),
            gamma: Field::zeros(spec),
        }
    }

    pub fn new(alpha: Field, beta: Vec<Field>, gamma: Field) -> Result<Self> {
        let spec = alpha.spec().clone();
        if beta.len() + 1 != spec.dim() {
            return Err(Error::GridMismatch(format!(
                "expected {} beta fields, got {}",
                spec.dim() - 1,
                beta.len()
            )));
        }
        for f in beta.iter().chain(std::iter::once(&gamma)) {
            spec.check_same(f.spec())?;
        }
        let min_alpha = alpha
            .values()
            .iter()
            .map(|v| v.re)
            .fold(f64::INFINITY, f64::min);
        if min_alpha < 1.0 - 1e-14 {
            return Err(Error::OutOfRange {
                what: "alpha",
                value: min_alpha,
                range: ">= 1",
            });
        }
        for f in std::iter::once(&alpha)
            .chain(&beta)
            .chain(std::iter::once(&gamma))
        {
            let drift = y1_variation(f);
            if drift > 1e-14 * f.max_abs().max(1.0) {
                return Err(Error::InvalidGrid(format!(
                    "pullback coefficient varies in y1 by {drift:e}"
                )));
            }
            if f.values().iter().any(|v| v.im != 0.0) {
                return Err(Error::InvalidGrid(
                    "pullback coefficient is not real".into(),
                ));
            }
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> &Field {
        &self.alpha
    }

    pub fn beta(&self) -> &[Field] {
        &self.beta
    }

    pub fn gamma(&self) -> &Field {
        &self.gamma
    }

    pub fn spec(&self) -> &GridSpec {
        self.alpha.spec()
    }
}

fn y1_variation(f: &Field) -> f64 {
    let m = f.spec().stride(0);
    let first = &f.values()[..m];
    f.values()
        .chunks(m)
        .flat_map(|row| row.iter().zip(first).map(|(a, b)| (a - b).norm()))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct HatLaplacian {
    pub value: Field,
    /// Largest spectral energy fraction of a coefficient product beyond
    /// two thirds of the band.
    pub aliasing: f64,
    pub warning: Option<String>,
}

pub fn hat_laplacian(g: &Field, c: &PullbackCoefficients) -> Result<HatLaplacian> {
    g.spec().check_same(c.spec())?;
    let dim = g.spec().dim();
    let d1 = derivative(g, 0);
    let d11 = second_derivative(g, 0);
    let mut value = Field::zeros(g.spec());
    for j in 1..dim {
        value = value.add(&second_derivative(g, j));
    }
    let mut products = vec![c.alpha.mul(&d11), c.gamma.mul(&d1)];
    for (j, beta) in c.beta.iter().enumerate() {
        products.push(beta.mul(&derivative(&d1, j + 1)));
    }
    let aliasing = products.iter().map(high_band_fraction).fold(0.0, f64::max);
    for p in &products {
        value = value.add(p);
    }
    let warning = (aliasing > ALIASING_TOL).then(|| {
        format!("coefficient products carry {aliasing:.3e} of their energy beyond 2/3 of the band")
    });
    Ok(HatLaplacian {
        value,
        aliasing,
        warning,
    })
}

fn high_band_fraction(f: &Field) -> f64 {
    let spec = f.spec();
    let coeffs = fft::forward(f);
    let mut idx = vec![0; spec.dim()];
    let (mut high, mut total) = (0.0, 0.0);
    for (flat, c) in coeffs.iter().enumerate() {
        spec.multi_index(flat, &mut idx);
        let e = c.norm_sqr();
        total += e;
        let outside = (0..spec.dim())
            .any(|a| 3 * spec.signed_index(a, idx[a]).unsigned_abs() as usize > spec.sizes()[a]);
        if outside {
            high += e;
        }
    }
    if total > 0.0 {
        high / total
    } else {
        0.0
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutationReport {
    pub grid: Vec<usize>,
    pub support_radius: Option<f64>,
    /// `||E[restrict(Dh g)] - Dh E[g]|| / ||Dh g||`.
    pub residual: f64,
    /// Same comparison with the left side assembled from the reflected
    /// Dirichlet and Neumann pieces of `Dh` separately.
    pub chain_residual: f64,
    pub aliasing: f64,
    pub warnings: Vec<String>,
}

/// Support margin below `L1/2` required before applying the operator.
pub fn support_margin(spec: &GridSpec) -> f64 {
    half_len(spec) / 8.0
}

pub fn verify_commutation(g: &HalfField, c: &PullbackCoefficients) -> Result<CommutationReport> {
    let margin = support_margin(g.spec());
    if g.support_radius() > half_len(g.spec()) - margin {
        return Err(Error::SupportEscape {
            radius: g.support_radius(),
            margin,
        });
    }
    let mut report = commutation(g.field(), c, true)?;
    report.support_radius = Some(g.support_radius());
    Ok(report)
}

/// Commutation check for periodic input, decomposed on the full period.
/// Here `residual` is the chain residual: restriction does not commute with
/// the operator for data that fills the whole period.
pub fn verify_commutation_periodic(
    g: &Field,
    c: &PullbackCoefficients,
) -> Result<CommutationReport> {
    commutation(g, c, false)
}

fn commutation(g: &Field, c: &PullbackCoefficients, half: bool) -> Result<CommutationReport> {
    let direct = hat_laplacian(g, c)?;
    let scale = direct.value.norm_l2();
    let rhs = hat_laplacian(&extend_field(g), c)?;
    let lhs = extend_field(&restrict(&direct.value));

    let dn = decompose_field(g);
    let (gd, gn) = (dn.g_d(), dn.g_n());
    let dim = g.spec().dim();
    let piece = |same: &Field, other: &Field| {
        let mut acc = c.alpha.mul(&second_derivative(same, 0));
        for j in 1..dim {
            acc = acc.add(&second_derivative(same, j));
        }
        let d1 = derivative(other, 0);
        acc = acc.add(&c.gamma.mul(&d1));
        for (j, beta) in c.beta.iter().enumerate() {
            acc = acc.add(&beta.mul(&derivative(&d1, j + 1)));
        }
        acc
    };
    let chain = reflect(&restrict(&piece(&gd, &gn)), Parity::Odd)
        .add(&reflect(&piece(&gn, &gd), Parity::Even));

    let rel = |a: &Field| {
        if scale > 0.0 {
            a.sub(&rhs.value).norm_l2() / scale
        } else {
            0.0
        }
    };
    let warnings = [direct.warning, rhs.warning]
        .into_iter()
        .flatten()
        .collect();
    let chain_residual = rel(&chain);
    Ok(CommutationReport {
        grid: g.spec().sizes().to_vec(),
        support_radius: None,
        residual: if half { rel(&lhs) } else { chain_residual },
        chain_residual,
        aliasing: direct.aliasing.max(rhs.aliasing),
        warnings,
    })
}
