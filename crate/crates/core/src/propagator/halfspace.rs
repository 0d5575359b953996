use rayon::prelude::*;

use super::{evolve_hat, free_evolve, BoundaryCondition, EvolutionRecord, TimeGrid};
use crate::error::Result;
use crate::extension::{half_l2_norm, half_len, parity_extend, restrict, HalfField, Parity};
use crate::spectral::{fft, Field};

const OVERLAP_WARN: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct HalfspaceSolution {
    /// Solution on `[0, L1/2)`, zero-padded.
    pub field: Field,
    /// The reflected solution on the whole period.
    pub full: Field,
    /// Fraction of the half-space mass within `L1/16` of the image wall.
    pub overlap_mass: f64,
    pub warning: Option<String>,
    /// Trapezoid `L^2` norm over `[0, L1/2]`, wall row included.
    pub mass: f64,
}

fn parity(bc: BoundaryCondition) -> Option<Parity> {
    match bc {
        BoundaryCondition::Free => None,
        BoundaryCondition::Dirichlet => Some(Parity::Odd),
        BoundaryCondition::Neumann => Some(Parity::Even),
    }
}

fn extended(g: &HalfField, bc: BoundaryCondition) -> Field {
    match parity(bc) {
        Some(p) => parity_extend(g, p),
        None => g.field().clone(),
    }
}

/// Half-space evolution by the method of images: reflect with the parity of
/// the boundary condition, evolve freely, restrict.
pub fn halfspace_evolve(g: &HalfField, t: f64, bc: BoundaryCondition) -> Result<HalfspaceSolution> {
    let full = free_evolve(&extended(g, bc), t);
    Ok(finish(full, bc))
}

fn finish(full: Field, bc: BoundaryCondition) -> HalfspaceSolution {
    let field = if bc == BoundaryCondition::Free {
        full.clone()
    } else {
        restrict(&full)
    };
    let overlap_mass = wall_fraction(&full);
    let warning = (overlap_mass > OVERLAP_WARN)
        .then(|| format!("{overlap_mass:.3e} of the mass sits within L1/16 of the image wall"));
    HalfspaceSolution {
        field,
        mass: half_l2_norm(&full),
        full,
        overlap_mass,
        warning,
    }
}

fn wall_fraction(full: &Field) -> f64 {
    let spec = full.spec();
    let half = half_len(spec);
    let margin = half / 8.0;
    let m = spec.stride(0);
    let n = spec.sizes()[0];
    let total: f64 = full.values()[..(n / 2) * m]
        .iter()
        .map(|v| v.norm_sqr())
        .sum();
    let near: f64 = (0..n / 2)
        .filter(|&i| spec.coord(0, i) >= half - margin)
        .map(|i| {
            full.values()[i * m..(i + 1) * m]
                .iter()
                .map(|v| v.norm_sqr())
                .sum::<f64>()
        })
        .sum();
    if total > 0.0 {
        near / total
    } else {
        0.0
    }
}

/// Half-space evolution at every instant of `grid`. Mass is measured on the
/// half-period; the largest wall fraction is returned with the record.
pub fn halfspace_record(
    g: &HalfField,
    grid: &TimeGrid,
    bc: BoundaryCondition,
) -> Result<(EvolutionRecord, f64)> {
    let ext = extended(g, bc);
    let spec = ext.spec().clone();
    let hat = fft::forward(&ext);
    let k2 = spec.k_squared();
    let times = grid.instants();
    let sols: Vec<(Field, f64, f64)> = times
        .par_iter()
        .map(|&t| {
            let s = finish(evolve_hat(&spec, &hat, &k2, t), bc);
            (s.field, s.overlap_mass, s.mass)
        })
        .collect();
    let overlap = sols.iter().map(|s| s.1).fold(0.0, f64::max);
    let masses: Vec<f64> = sols.iter().map(|s| s.2).collect();
    let snapshots: Vec<Field> = sols.into_iter().map(|s| s.0).collect();
    let mut rec = EvolutionRecord::new(grid.clone(), times, snapshots, bc);
    if bc != BoundaryCondition::Free {
        rec.mass_log = masses;
    }
    Ok((rec, overlap))
}
