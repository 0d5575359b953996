//! Schrödinger evolution `i u_t + Delta u = F` on the torus, on the flat
//! half-space by reflection, and the Duhamel integral.

mod duhamel;
mod halfspace;
mod source;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::io::write_field;
use crate::spectral::{fft, Field, FourierMultiplier, GridSpec};

pub use duhamel::{
    duhamel, duhamel_backward, duhamel_residual, DuhamelStepper, DuhamelStream, Forcing,
};
pub use halfspace::{halfspace_evolve, halfspace_record, HalfspaceSolution};
pub use source::{commutator_source, commutator_source_with, CommutatorSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    Free,
    Dirichlet,
    Neumann,
}

/// Instants `t_m = m T / M`, `m = 0..=M`; two-sided grids also carry the
/// negative instants and are listed in increasing order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_max: f64,
    pub steps: usize,
    pub two_sided: bool,
}

impl TimeGrid {
    pub fn new(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::OutOfRange {
                what: "time horizon",
                value: t_max,
                range: "(0, inf)",
            });
        }
        if steps < 16 {
            return Err(Error::OutOfRange {
                what: "time steps",
                value: steps as f64,
                range: ">= 16",
            });
        }
        Ok(Self {
            t_max,
            steps,
            two_sided: false,
        })
    }

    pub fn two_sided(t_max: f64, steps: usize) -> Result<Self> {
        Ok(Self {
            two_sided: true,
            ..Self::new(t_max, steps)?
        })
    }

    pub fn step(&self) -> f64 {
        self.t_max / self.steps as f64
    }

    /// One-sided instants towards `sign * T`.
    pub fn branch(&self, sign: f64) -> Vec<f64> {
        (0..=self.steps)
            .map(|m| sign * m as f64 * self.step())
            .collect()
    }

    pub fn instants(&self) -> Vec<f64> {
        if self.two_sided {
            let mut t: Vec<f64> = self.branch(-1.0).into_iter().skip(1).rev().collect();
            t.extend(self.branch(1.0));
            t
        } else {
            self.branch(1.0)
        }
    }

    /// Trapezoid weights matching `instants`.
    pub fn weights(&self) -> Vec<f64> {
        let t = self.instants();
        let h = self.step();
        let last = t.len() - 1;
        (0..t.len())
            .map(|i| if i == 0 || i == last { 0.5 * h } else { h })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct EvolutionRecord {
    pub grid: TimeGrid,
    pub times: Vec<f64>,
    pub snapshots: Vec<Field>,
    pub bc: BoundaryCondition,
    pub mass_log: Vec<f64>,
}

#[derive(Serialize)]
struct RecordManifest<'a> {
    grid: &'a TimeGrid,
    times: &'a [f64],
    bc: BoundaryCondition,
    mass_log: &'a [f64],
    spatial_grid: &'a GridSpec,
    snapshot_file: &'a str,
}

impl EvolutionRecord {
    pub fn new(
        grid: TimeGrid,
        times: Vec<f64>,
        snapshots: Vec<Field>,
        bc: BoundaryCondition,
    ) -> Self {
        let mass_log = snapshots.iter().map(Field::norm_l2).collect();
        Self {
            grid,
            times,
            snapshots,
            bc,
            mass_log,
        }
    }

    /// `max |m_i - m_0| / m_0` over the mass log.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.mass_log[0];
        if m0 == 0.0 {
            return 0.0;
        }
        self.mass_log
            .iter()
            .map(|m| (m - m0).abs() / m0)
            .fold(0.0, f64::max)
    }

    /// Writes `snapshots.bin` (concatenated binary fields) and
    /// `manifest.json` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut w = BufWriter::new(File::create(dir.join("snapshots.bin"))?);
        for s in &self.snapshots {
            write_field(s, &mut w)?;
        }
        w.flush()?;
        let manifest = RecordManifest {
            grid: &self.grid,
            times: &self.times,
            bc: self.bc,
            mass_log: &self.mass_log,
            spatial_grid: self.snapshots[0].spec(),
            snapshot_file: "snapshots.bin",
        };
        serde_json::to_writer_pretty(File::create(dir.join("manifest.json"))?, &manifest)?;
        Ok(())
    }
}

/// `e^{it Delta} f`.
pub fn free_evolve(f: &Field, t: f64) -> Field {
    FourierMultiplier::schrodinger(t)
        .apply(f)
        .expect("unimodular symbol")
}

/// Free evolution at every instant, sharing one forward transform.
pub fn free_record(f: &Field, grid: &TimeGrid) -> EvolutionRecord {
    let spec = f.spec().clone();
    let hat = fft::forward(f);
    let k2 = spec.k_squared();
    let times = grid.instants();
    let snapshots = times
        .par_iter()
        .map(|&t| evolve_hat(&spec, &hat, &k2, t))
        .collect();
    EvolutionRecord::new(grid.clone(), times, snapshots, BoundaryCondition::Free)
}

pub(crate) fn evolve_hat(spec: &GridSpec, hat: &[Complex64], k2: &[f64], t: f64) -> Field {
    let c = hat
        .iter()
        .zip(k2)
        .map(|(v, &q)| v * Complex64::from_polar(1.0, -t * q))
        .collect();
    fft::inverse(spec, c)
}

/// Validity of a torus run as a stand-in for the whole space: the support
/// radius plus the group-velocity reach `2 K t` must stay within `L/2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WrapCertificate {
    pub support_radius: f64,
    pub band: f64,
    pub time: f64,
    pub reach: f64,
    pub limit: f64,
    pub valid: bool,
}

pub fn wrap_certificate(
    support_radius: f64,
    band: f64,
    time: f64,
    spec: &GridSpec,
) -> WrapCertificate {
    let reach = support_radius + 2.0 * band * time.abs();
    let limit = 0.5 * spec.box_len().iter().copied().fold(f64::INFINITY, f64::min);
    WrapCertificate {
        support_radius,
        band,
        time,
        reach,
        limit,
        valid: reach <= limit,
    }
}

/// Smallest `K` such that modes with `|k| > K` carry at most `tol` of the
/// spectral energy of `f`.
pub fn effective_band(f: &Field, tol: f64) -> f64 {
    let spec = f.spec();
    let hat = fft::forward(f);
    let k2 = spec.k_squared();
    let mut pairs: Vec<(f64, f64)> = hat
        .iter()
        .zip(&k2)
        .map(|(v, &q)| (q.sqrt(), v.norm_sqr()))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let mut tail = 0.0;
    for (k, e) in pairs {
        tail += e;
        if tail > tol * total {
            return k;
        }
    }
    0.0
}

/// Radius around `center` outside which `|f| <= tol max |f|`.
pub fn support_radius(f: &Field, center: &[f64], tol: f64) -> f64 {
    let spec = f.spec();
    let cut = tol * f.max_abs();
    let l = spec.box_len();
    let mut idx = vec![0; spec.dim()];
    let mut r: f64 = 0.0;
    for (flat, v) in f.values().iter().enumerate() {
        if v.norm() > cut {
            spec.multi_index(flat, &mut idx);
            let d2: f64 = (0..spec.dim())
                .map(|a| {
                    crate::spectral::norms::periodic_offset(spec.coord(a, idx[a]), center[a], l[a])
                        .powi(2)
                })
                .sum();
            r = r.max(d2.sqrt());
        }
    }
    r
}
