//! Local boundary graphs `x1 = phi(x')`, the flattening map
//! `y1 = x1 - phi(x')`, and the coefficients of the flattened Laplacian.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::PullbackCoefficients;
use crate::spectral::{Field, GridSpec};

/// Closed-form catalog of graph functions of `y' = (y2, .., yn)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryGraph {
    Flat,
    /// `phi = slope . y'`.
    Linear {
        slope: Vec<f64>,
    },
    /// `phi = eps sin(y2)`.
    Sine {
        eps: f64,
    },
    /// `phi = amp (1 - |y' - c|^2 / R^2)^4` inside the ball, zero outside.
    Bump {
        amp: f64,
        center: Vec<f64>,
        radius: f64,
    },
}

impl BoundaryGraph {
    pub fn from_name(name: &str, eps: f64, transverse_dim: usize) -> Result<Self> {
        Ok(match name {
            "flat" => Self::Flat,
            "linear" => Self::Linear {
                slope: vec![eps; transverse_dim],
            },
            "sine" => Self::Sine { eps },
            "bump" => Self::Bump {
                amp: eps,
                center: vec![std::f64::consts::PI; transverse_dim],
                radius: 1.0,
            },
            other => {
                return Err(Error::Format(format!(
                    "unknown boundary graph '{other}' (flat, linear, sine, bump)"
                )))
            }
        })
    }

    pub fn phi(&self, y: &[f64]) -> f64 {
        match self {
            Self::Flat => 0.0,
            Self::Linear { slope } => slope.iter().zip(y).map(|(s, v)| s * v).sum(),
            Self::Sine { eps } => eps * y[0].sin(),
            Self::Bump {
                amp,
                center,
                radius,
            } => {
                let q = bump_q(y, center, *radius);
                if q > 0.0 {
                    amp * q.powi(4)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn grad(&self, y: &[f64]) -> Vec<f64> {
        match self {
            Self::Flat => vec![0.0; y.len()],
            Self::Linear { slope } => slope.clone(),
            Self::Sine { eps } => {
                let mut g = vec![0.0; y.len()];
                g[0] = eps * y[0].cos();
                g
            }
            Self::Bump {
                amp,
                center,
                radius,
            } => {
                let q = bump_q(y, center, *radius);
                let r2 = radius * radius;
                y.iter()
                    .zip(center)
                    .map(|(v, c)| {
                        if q > 0.0 {
                            -8.0 * amp * q.powi(3) * (v - c) / r2
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn laplacian(&self, y: &[f64]) -> f64 {
        match self {
            Self::Flat | Self::Linear { .. } => 0.0,
            Self::Sine { eps } => -eps * y[0].sin(),
            Self::Bump {
                amp,
                center,
                radius,
            } => {
                let q = bump_q(y, center, *radius);
                if q <= 0.0 {
                    return 0.0;
                }
                let r2 = radius * radius;
                let rho2: f64 = y.iter().zip(center).map(|(v, c)| (v - c).powi(2)).sum();
                let d = y.len() as f64;
                -8.0 * amp / r2 * (d * q.powi(3) - 6.0 * q * q * rho2 / r2)
            }
        }
    }
}

fn bump_q(y: &[f64], center: &[f64], radius: f64) -> f64 {
    let rho2: f64 = y.iter().zip(center).map(|(v, c)| (v - c).powi(2)).sum();
    1.0 - rho2 / (radius * radius)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `x1 > phi(x')`, the `U+` piece.
    Interior,
    Exterior,
    Boundary,
}

/// Chart `U = B(center, radius)` in which the boundary is the graph of `phi`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChartDomain {
    pub center: Vec<f64>,
    pub radius: f64,
    pub graph: BoundaryGraph,
}

impl ChartDomain {
    pub fn new(center: Vec<f64>, radius: f64, graph: BoundaryGraph) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::OutOfRange {
                what: "chart radius",
                value: radius,
                range: "(0, inf)",
            });
        }
        Ok(Self {
            center,
            radius,
            graph,
        })
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        let d2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        if x.len() != self.center.len() || d2 > self.radius * self.radius {
            return Err(Error::OutOfChart {
                point: x.to_vec(),
                radius: self.radius,
            });
        }
        Ok(())
    }

    /// `y1 = x1 - phi(x')`, `y_j = x_j`.
    pub fn flatten(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        let mut y = x.to_vec();
        y[0] = x[0] - self.graph.phi(&x[1..]);
        Ok(y)
    }

    pub fn unflatten(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut x = y.to_vec();
        x[0] = y[0] + self.graph.phi(&y[1..]);
        self.check(&x)?;
        Ok(x)
    }

    pub fn side(&self, x: &[f64]) -> Result<Side> {
        let y1 = self.flatten(x)?[0];
        Ok(if y1 > 0.0 {
            Side::Interior
        } else if y1 < 0.0 {
            Side::Exterior
        } else {
            Side::Boundary
        })
    }

    /// Largest `|grad phi|` over transverse samples inside the chart, the
    /// logged heuristic for choosing the chart radius (target <= 1/2).
    pub fn max_slope(&self, samples: usize) -> f64 {
        let c = &self.center[1..];
        let mut worst: f64 = 0.0;
        let m = samples.max(2);
        if c.len() == 1 {
            for i in 0..m {
                let t = -1.0 + 2.0 * i as f64 / (m - 1) as f64;
                let y = [c[0] + t * self.radius];
                worst = worst.max(norm(&self.graph.grad(&y)));
            }
        } else {
            for i in 0..m {
                for j in 0..m {
                    let s = -1.0 + 2.0 * i as f64 / (m - 1) as f64;
                    let t = -1.0 + 2.0 * j as f64 / (m - 1) as f64;
                    let mut y = c.to_vec();
                    y[0] += s * self.radius;
                    y[1] += t * self.radius;
                    worst = worst.max(norm(&self.graph.grad(&y)));
                }
            }
        }
        worst
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// `alpha = 1 + |grad phi|^2`, `beta_j = -2 d_j phi`, `gamma = -Delta phi`,
/// sampled on the transverse coordinates of `spec` and constant in `y1`.
pub fn pullback_coefficients(phi: &BoundaryGraph, spec: &GridSpec) -> Result<PullbackCoefficients> {
    if spec.dim() < 2 {
        return Err(Error::InvalidGrid("flattening needs n >= 2".into()));
    }
    let alpha = Field::from_real_fn(spec, |x| {
        1.0 + phi.grad(&x[1..]).iter().map(|g| g * g).sum::<f64>()
    });
    let beta = (0..spec.dim() - 1)
        .map(|j| Field::from_real_fn(spec, |x| -2.0 * phi.grad(&x[1..])[j]))
        .collect();
    let gamma = Field::from_real_fn(spec, |x| -phi.laplacian(&x[1..]));
    PullbackCoefficients::new(alpha, beta, gamma)
}
