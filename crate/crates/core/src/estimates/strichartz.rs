//! Bounded-ratio estimator for `||u||_{L^p L^q} <= C ||f||_{H^s dot}`.

use serde::Serialize;

use super::admissible::AdmissibleTriple;
use super::mixed::{stream_free, time_norm};
use super::report::RatioReport;
use crate::error::{Error, Result};
use crate::extension::{half_lq_norm, parity_extend, HalfField, Parity};
use crate::families::gaussian_packet;
use crate::propagator::{
    effective_band, support_radius, wrap_certificate, BoundaryCondition, TimeGrid,
};
use crate::spectral::norms::sobolev_norm;
use crate::spectral::{Field, GridSpec};

#[derive(Clone, Debug, Serialize)]
pub struct StrichartzConfig {
    pub time: TimeGrid,
    pub bc: BoundaryCondition,
    /// Drop members whose torus run may wrap around.
    pub check_wrap: bool,
    pub support_tol: f64,
    pub band_tol: f64,
}

impl StrichartzConfig {
    pub fn new(time: TimeGrid, bc: BoundaryCondition) -> Self {
        Self {
            time,
            bc,
            check_wrap: true,
            support_tol: 1e-8,
            band_tol: 1e-12,
        }
    }
}

#[derive(Serialize)]
struct Dropped<'a> {
    label: &'a str,
    reach: f64,
    limit: f64,
}

fn argmax_coords(f: &Field) -> Vec<f64> {
    let spec = f.spec();
    let (flat, _) = f
        .values()
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, v)| {
            if v.norm() > best.1 {
                (i, v.norm())
            } else {
                best
            }
        });
    let mut idx = vec![0; spec.dim()];
    spec.multi_index(flat, &mut idx);
    (0..spec.dim()).map(|a| spec.coord(a, idx[a])).collect()
}

/// `(lhs, rhs)` for one member, or the certificate that rejected it.
fn member(
    f: &Field,
    triple: &AdmissibleTriple,
    cfg: &StrichartzConfig,
) -> Result<std::result::Result<(f64, f64), (f64, f64)>> {
    let parity = match cfg.bc {
        BoundaryCondition::Free => None,
        BoundaryCondition::Dirichlet => Some(Parity::Odd),
        BoundaryCondition::Neumann => Some(Parity::Even),
    };
    let data = match parity {
        None => f.clone(),
        Some(p) => {
            let l1 = f.spec().box_len()[0];
            parity_extend(&HalfField::new(f.clone(), 0.5 * l1)?, p)
        }
    };
    if cfg.check_wrap {
        let mut center = argmax_coords(&data);
        if parity.is_some() {
            center[0] = 0.0;
        }
        let r = support_radius(&data, &center, cfg.support_tol);
        let k = effective_band(&data, cfg.band_tol);
        let cert = wrap_certificate(r, k, cfg.time.t_max, data.spec());
        if !cert.valid {
            return Ok(Err((cert.reach, cert.limit)));
        }
    }
    let q = triple.q();
    let half = parity.is_some();
    let norms = stream_free(&data, &cfg.time, |u| {
        if half {
            half_lq_norm(u, q)
        } else {
            u.norm_lp(q)
        }
    });
    let lhs = time_norm(&cfg.time, &norms, triple.p())?;
    let mut rhs = sobolev_norm(&data, triple.s_f64())?;
    if parity.is_some() {
        rhs /= std::f64::consts::SQRT_2;
    }
    Ok(Ok((lhs, rhs)))
}

/// Ratio of the space-time norm over `[-T, T]` (or `[0, T]`) to the
/// homogeneous data norm, per family member. Half-space conditions take data
/// supported in `[0, L1/2]` and measure both sides over the half period.
pub fn strichartz_ratio(
    family: &[(String, Field)],
    triple: &AdmissibleTriple,
    cfg: &StrichartzConfig,
) -> Result<RatioReport> {
    if family.is_empty() {
        return Err(Error::Empty("Strichartz family"));
    }
    let spec = family[0].1.spec();
    if spec.dim() != triple.n() as usize {
        return Err(Error::NotAdmissible(format!(
            "triple is for n = {} but the grid has dimension {}",
            triple.n(),
            spec.dim()
        )));
    }
    let mut report = RatioReport::new(
        format!("strichartz {triple}"),
        format!("{:?}", cfg.bc).to_lowercase(),
    );
    let mut reach = Vec::new();
    for (label, f) in family {
        f.spec().check_same(spec)?;
        match member(f, triple, cfg)? {
            Ok((lhs, rhs)) => report.push(label.clone(), lhs, rhs)?,
            Err((r, limit)) => {
                reach.push((label.clone(), r, limit));
            }
        }
    }
    let log: Vec<Dropped> = reach
        .iter()
        .map(|(l, r, lim)| Dropped {
            label: l,
            reach: *r,
            limit: *lim,
        })
        .collect();
    report.set_meta("wrap_dropped", &log);
    report.set_meta("triple", triple);
    report.set_meta("grid", spec.sizes());
    report.set_meta("box", spec.box_len());
    report.set_meta("time", &cfg.time);
    Ok(report)
}

/// Base problem for dyadic rescaling: a Gaussian of `width` in a cube of
/// side `box_len` on `size^n` nodes, evolved over `[-T, T]` with `steps`
/// per side.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingSweep {
    pub size: usize,
    pub box_len: f64,
    pub t_max: f64,
    pub steps: usize,
    pub width: f64,
}

/// `f_l(x) = l^{n/2} f(l x)` on the box `L / l` over `[-T/l^2, T/l^2]`, one
/// member per `l`; the spread of the ratios measures scale invariance.
pub fn strichartz_scaling(
    sweep: &ScalingSweep,
    lambdas: &[f64],
    triple: &AdmissibleTriple,
) -> Result<RatioReport> {
    let n = triple.n() as usize;
    let mut report = RatioReport::new(format!("strichartz {triple}"), "dyadic scaling");
    let mut dropped = Vec::new();
    for &lam in lambdas {
        if !(lam > 0.0 && lam.is_finite()) {
            return Err(Error::OutOfRange {
                what: "scaling factor",
                value: lam,
                range: "(0, inf)",
            });
        }
        let spec = GridSpec::cube(n, sweep.size, sweep.box_len / lam)?;
        let center = vec![0.5 * sweep.box_len / lam; n];
        let f = gaussian_packet(&spec, &center, sweep.width / lam, &vec![0.0; n])
            .scale(lam.powf(0.5 * n as f64));
        let cfg = StrichartzConfig::new(
            TimeGrid::two_sided(sweep.t_max / (lam * lam), sweep.steps)?,
            BoundaryCondition::Free,
        );
        let one = strichartz_ratio(&[(format!("lambda={lam}"), f)], triple, &cfg)?;
        if one.members.is_empty() && one.skipped.is_empty() {
            dropped.push(lam);
        }
        report.merge(one);
    }
    report.metadata.remove("wrap_dropped");
    report.set_meta("wrap_dropped_lambdas", &dropped);
    report.metadata.remove("grid");
    report.metadata.remove("box");
    report.metadata.remove("time");
    report.set_meta("sweep", sweep);
    report.set_meta("lambdas", lambdas);
    Ok(report)
}
