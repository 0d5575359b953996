//! Boundary coverings by balls `B(x_k, delta)` and the associated partition
//! of unity `chi_k` with companion cutoffs `eta_k` (2D).
//!
//! `chi_k = b_k / (sum_j b_j + b_far)` where `b_k` are radial bumps of radius
//! `delta` and `b_far` vanishes on `{|l| <= a}` for a level function `l` of
//! the boundary. The identity `sum chi_k = 1` is exact wherever `b_far = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::jet::{bump_jet, smooth_step_jet, transition_jet, Jet};
use crate::error::{Error, Result};
use crate::spectral::norms::periodic_offset;
use crate::spectral::{Field, GridSpec};

const DENOMINATOR_FLOOR: f64 = 1e-8;

/// Closed boundary curves of the 2D catalog. Circles are centered at the
/// box center; the flat line is `{x1 = 0}` with interior `x1 > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Boundary {
    FlatLine,
    Circle {
        radius: f64,
    },
    /// `r(theta) = radius (1 + amp cos(lobes theta))`.
    PerturbedCircle {
        radius: f64,
        amp: f64,
        lobes: u32,
    },
}

impl Boundary {
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "flat-line" | "half-space" => Self::FlatLine,
            "circle" => Self::Circle { radius: 1.0 },
            "perturbed-circle" => Self::PerturbedCircle {
                radius: 1.0,
                amp: 0.2,
                lobes: 3,
            },
            other => {
                return Err(Error::Format(format!(
                    "unknown boundary '{other}' (flat-line, circle, perturbed-circle)"
                )))
            }
        })
    }

    fn r_of(&self, theta: f64) -> f64 {
        match self {
            Self::FlatLine => f64::NAN,
            Self::Circle { radius } => *radius,
            Self::PerturbedCircle { radius, amp, lobes } => {
                radius * (1.0 + amp * (f64::from(*lobes) * theta).cos())
            }
        }
    }

    /// Offsets from the reference point (origin for the line, box center
    /// for circles), minimal image.
    fn offsets(&self, spec: &GridSpec, x: &[Jet; 2]) -> [Jet; 2] {
        let l = spec.box_len();
        let c = match self {
            Self::FlatLine => [0.0, 0.0],
            _ => [0.5 * l[0], 0.5 * l[1]],
        };
        let mut out = *x;
        for a in 0..2 {
            let shift = periodic_offset(x[a].v, c[a], l[a]) - x[a].v;
            out[a] = x[a].shift(shift);
        }
        out
    }

    /// Level function vanishing on the boundary, positive outside circles and
    /// in `x1 > 0` for the line.
    fn level(&self, p: [Jet; 2]) -> Jet {
        match self {
            Self::FlatLine => p[0],
            Self::Circle { radius } => (p[0] * p[0] + p[1] * p[1]).sqrt().shift(-radius),
            Self::PerturbedCircle { radius, amp, lobes } => {
                let rho = (p[0] * p[0] + p[1] * p[1]).sqrt();
                let theta = atan2_jet(p[1], p[0]);
                let r = (theta.scale(f64::from(*lobes)))
                    .cos()
                    .scale(radius * amp)
                    .shift(*radius);
                rho - r
            }
        }
    }

    /// Boundary points in absolute box coordinates.
    pub fn centers(&self, spec: &GridSpec, count: usize) -> Vec<[f64; 2]> {
        let l = spec.box_len();
        (0..count)
            .map(|k| match self {
                Self::FlatLine => [0.0, (k as f64 + 0.5) * l[1] / count as f64],
                _ => {
                    let th = 2.0 * PI * k as f64 / count as f64;
                    let r = self.r_of(th);
                    [0.5 * l[0] + r * th.cos(), 0.5 * l[1] + r * th.sin()]
                }
            })
            .collect()
    }

    /// Distance to the boundary, by dense sampling for curved boundaries.
    fn distance(&self, spec: &GridSpec, x: [f64; 2], samples: &[[f64; 2]]) -> f64 {
        match self {
            Self::FlatLine => periodic_offset(x[0], 0.0, spec.box_len()[0]).abs(),
            _ => {
                let p = self.offsets(spec, &[Jet::constant(x[0]), Jet::constant(x[1])]);
                samples
                    .iter()
                    .map(|s| ((p[0].v - s[0]).powi(2) + (p[1].v - s[1]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    fn samples(&self, count: usize) -> Vec<[f64; 2]> {
        match self {
            Self::FlatLine => Vec::new(),
            _ => (0..count)
                .map(|i| {
                    let th = 2.0 * PI * i as f64 / count as f64;
                    let r = self.r_of(th);
                    [r * th.cos(), r * th.sin()]
                })
                .collect(),
        }
    }
}

fn atan2_jet(y: Jet, x: Jet) -> Jet {
    // theta = atan2(y, x); derivatives through r^2 = x^2 + y^2
    let r2 = x.v * x.v + y.v * y.v;
    let d = (x.v * y.d - y.v * x.d) / r2;
    let num_d = x.v * y.dd - y.v * x.dd;
    let r2_d = 2.0 * (x.v * x.d + y.v * y.d);
    let dd = num_d / r2 - (x.v * y.d - y.v * x.d) * r2_d / (r2 * r2);
    Jet {
        v: y.v.atan2(x.v),
        d,
        dd,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartitionConfig {
    pub delta: f64,
    pub count: usize,
    /// `eta_k` falls from 1 at radius `delta` to 0 at `eta_factor * delta`.
    pub eta_factor: f64,
    /// Width of the far-field ramp beyond the band, relative to the band.
    pub far_ramp: f64,
}

impl PartitionConfig {
    pub fn new(delta: f64, count: usize) -> Self {
        Self {
            delta,
            count,
            eta_factor: 1.25,
            far_ramp: 1.5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PartitionOfUnity {
    pub boundary: Boundary,
    pub config: PartitionConfig,
    pub centers: Vec<[f64; 2]>,
    /// Half-width of the band `{|l| <= a}` on which `b_far` vanishes.
    pub level_band: f64,
    pub chi: Vec<Field>,
    pub eta: Vec<Field>,
    /// Nodes with distance to the boundary at most `delta / 2`.
    pub collar: Vec<bool>,
    /// `max |sum_k chi_k - 1|` over the collar.
    pub identity_residual: f64,
    /// Smallest `sum_k b_k` over the band `{|l| <= a}`.
    pub min_denominator: f64,
}

struct Eval {
    chi: Vec<Jet>,
    bump_sum: f64,
    level: f64,
}

fn evaluate(
    boundary: &Boundary,
    spec: &GridSpec,
    centers: &[[f64; 2]],
    delta: f64,
    band: f64,
    ramp: f64,
    x: [Jet; 2],
) -> Eval {
    let l = spec.box_len();
    let bumps: Vec<Jet> = centers
        .iter()
        .map(|c| {
            let dx = x[0].shift(periodic_offset(x[0].v, c[0], l[0]) - x[0].v);
            let dy = x[1].shift(periodic_offset(x[1].v, c[1], l[1]) - x[1].v);
            bump_jet(dx * dx + dy * dy, delta)
        })
        .collect();
    let level = boundary.level(boundary.offsets(spec, &x));
    let w = ramp * band;
    let far = smooth_step_jet((level * level).shift(-band * band).scale(1.0 / (w * w)));
    let sum = bumps.iter().fold(Jet::constant(0.0), |a, &b| a + b);
    let den = sum + far;
    let chi = bumps
        .iter()
        .map(|&b| {
            if b.v == 0.0 {
                Jet::constant(0.0)
            } else {
                b / den
            }
        })
        .collect();
    Eval {
        chi,
        bump_sum: sum.v,
        level: level.v,
    }
}

pub fn build_partition(
    boundary: &Boundary,
    spec: &GridSpec,
    config: &PartitionConfig,
) -> Result<PartitionOfUnity> {
    if spec.dim() != 2 {
        return Err(Error::InvalidGrid("partitions are built in 2D".into()));
    }
    if !(config.delta > 0.0) || config.count == 0 || !(config.eta_factor > 1.0) {
        return Err(Error::OutOfRange {
            what: "partition delta/count/eta factor",
            value: config.delta,
            range: "delta > 0, count >= 1, eta_factor > 1",
        });
    }
    let delta = config.delta;
    let centers = boundary.centers(spec, config.count);
    let samples = boundary.samples(4096);

    let coords: Vec<[f64; 2]> = (0..spec.len())
        .map(|flat| {
            let mut idx = [0; 2];
            spec.multi_index(flat, &mut idx);
            [spec.coord(0, idx[0]), spec.coord(1, idx[1])]
        })
        .collect();
    let dist: Vec<f64> = coords
        .par_iter()
        .map(|&x| boundary.distance(spec, x, &samples))
        .collect();
    let collar: Vec<bool> = dist.iter().map(|&d| d <= 0.5 * delta).collect();
    // The far term must vanish on the whole collar: take the band from the
    // largest level value found there.
    let band = coords
        .par_iter()
        .zip(&collar)
        .filter(|(_, &c)| c)
        .map(|(&x, _)| {
            let p = boundary.offsets(spec, &[Jet::constant(x[0]), Jet::constant(x[1])]);
            boundary.level(p).v.abs()
        })
        .reduce(|| 0.0, f64::max);
    if band == 0.0 {
        return Err(Error::Empty("collar"));
    }

    let evals: Vec<Eval> = coords
        .par_iter()
        .map(|&x| {
            evaluate(
                boundary,
                spec,
                &centers,
                delta,
                band,
                config.far_ramp,
                [Jet::constant(x[0]), Jet::constant(x[1])],
            )
        })
        .collect();

    let mut min_den = f64::INFINITY;
    let mut gap: Option<(usize, f64)> = None;
    for (i, e) in evals.iter().enumerate() {
        if e.level.abs() <= band {
            min_den = min_den.min(e.bump_sum);
            if e.bump_sum < DENOMINATOR_FLOOR && gap.is_none_or(|(_, d)| e.bump_sum < d) {
                gap = Some((i, e.bump_sum));
            }
        }
    }
    if let Some((i, d)) = gap {
        return Err(Error::CoveringGap {
            location: coords[i].to_vec(),
            denominator: d,
        });
    }

    let chi: Vec<Field> = (0..centers.len())
        .map(|k| {
            let v = evals
                .iter()
                .map(|e| Complex64::new(e.chi[k].v, 0.0))
                .collect();
            Field::new(spec.clone(), v)
        })
        .collect::<Result<_>>()?;
    let l = spec.box_len();
    let eta: Vec<Field> = centers
        .iter()
        .map(|c| {
            Field::from_real_fn(spec, |x| {
                let r = (periodic_offset(x[0], c[0], l[0]).powi(2)
                    + periodic_offset(x[1], c[1], l[1]).powi(2))
                .sqrt();
                let outer = config.eta_factor * delta;
                transition_jet(Jet::constant((outer - r) / (outer - delta))).v
            })
        })
        .collect();
    let identity_residual = evals
        .iter()
        .zip(&collar)
        .filter(|(_, &c)| c)
        .map(|(e, _)| (e.chi.iter().map(|j| j.v).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);

    Ok(PartitionOfUnity {
        boundary: boundary.clone(),
        config: config.clone(),
        centers,
        level_band: band,
        chi,
        eta,
        collar,
        identity_residual,
        min_denominator: min_den,
    })
}

impl PartitionOfUnity {
    pub fn spec(&self) -> &GridSpec {
        self.chi[0].spec()
    }

    /// Analytic `grad chi_k` and `Delta chi_k` by forward differentiation.
    pub fn analytic_derivatives(&self, k: usize) -> (Vec<Field>, Field) {
        let spec = self.spec().clone();
        let per_axis: Vec<Vec<Jet>> = (0..2)
            .map(|a| {
                (0..spec.len())
                    .into_par_iter()
                    .map(|flat| {
                        let mut idx = [0; 2];
                        spec.multi_index(flat, &mut idx);
                        let x = [spec.coord(0, idx[0]), spec.coord(1, idx[1])];
                        let mut p = [Jet::constant(x[0]), Jet::constant(x[1])];
                        p[a] = Jet::variable(x[a]);
                        evaluate(
                            &self.boundary,
                            &spec,
                            &self.centers,
                            self.config.delta,
                            self.level_band,
                            self.config.far_ramp,
                            p,
                        )
                        .chi[k]
                    })
                    .collect()
            })
            .collect();
        let grad = per_axis
            .iter()
            .map(|jets| {
                let v = jets.iter().map(|j| Complex64::new(j.d, 0.0)).collect();
                Field::new(spec.clone(), v).expect("finite derivatives")
            })
            .collect();
        let lap = (0..spec.len())
            .map(|i| Complex64::new(per_axis[0][i].dd + per_axis[1][i].dd, 0.0))
            .collect();
        (grad, Field::new(spec, lap).expect("finite derivatives"))
    }

    /// `sum_k chi_k` as a field.
    pub fn sum(&self) -> Field {
        self.chi
            .iter()
            .skip(1)
            .fold(self.chi[0].clone(), |acc, c| acc.add(c))
    }
}
