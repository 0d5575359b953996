//! `||u||_X <= C ||<x>^{s0} D^{-1/2} F||_{L^2 L^2}` for the Duhamel solution
//! with zero data.

use serde::Serialize;

use super::admissible::AdmissibleTriple;
use super::mixed::time_norm;
use super::report::RatioReport;
use crate::error::{Error, Result};
use crate::propagator::{DuhamelStream, Forcing, TimeGrid};
use crate::spectral::multiplier::frac_laplacian;
use crate::spectral::norms::weight_field;
use crate::spectral::Field;

#[derive(Clone, Debug, Serialize)]
pub struct StrichartzSmoothingConfig {
    pub time: TimeGrid,
    /// Origin of the weight `<x - c>`.
    pub center: Vec<f64>,
}

/// One report per weight exponent in `s0s`; the left side is shared. The
/// mean of each forcing sample is projected out and its largest modulus is
/// kept in metadata `projected_mean`.
pub fn strichartz_smoothing_sweep<F: Forcing>(
    family: Vec<(String, F)>,
    s0s: &[f64],
    triple: &AdmissibleTriple,
    cfg: &StrichartzSmoothingConfig,
) -> Result<Vec<RatioReport>> {
    for &s0 in s0s {
        if !(s0 > 0.5 && s0.is_finite()) {
            return Err(Error::OutOfRange {
                what: "weight exponent s0",
                value: s0,
                range: "(1/2, inf)",
            });
        }
    }
    if family.is_empty() || s0s.is_empty() {
        return Err(Error::Empty("Strichartz-smoothing family"));
    }
    let mut reports: Vec<RatioReport> = s0s
        .iter()
        .map(|s0| {
            RatioReport::new(
                format!("strichartz-smoothing {triple}, s0 = {s0}"),
                "duhamel",
            )
        })
        .collect();
    let mut projected: f64 = 0.0;
    for (label, mut forcing) in family {
        let mut weights: Option<Vec<Field>> = None;
        let mut rows: Vec<(f64, f64, Vec<f64>)> = Vec::new();
        let signs: &[f64] = if cfg.time.two_sided {
            &[-1.0, 1.0]
        } else {
            &[1.0]
        };
        for &sign in signs {
            let times = cfg.time.branch(sign);
            let mut rhs = Vec::with_capacity(times.len());
            let mut mean_zero = |t: f64| -> Result<Field> {
                let f = forcing.at(t)?;
                let m = f.mean();
                projected = projected.max(m.norm());
                Ok(f.remove_mean())
            };
            let mut samples = |t: f64| -> Result<Field> {
                let f = mean_zero(t)?;
                let spec = f.spec();
                if cfg.center.len() != spec.dim() {
                    return Err(Error::GridMismatch(
                        "weight center has the wrong dimension".into(),
                    ));
                }
                let w = weights.get_or_insert_with(|| {
                    s0s.iter()
                        .map(|&a| weight_field(spec, a, &cfg.center))
                        .collect()
                });
                let d = frac_laplacian(&f, -0.5);
                rhs.push(w.iter().map(|w| w.mul(&d).norm_l2()).collect::<Vec<f64>>());
                Ok(f)
            };
            let first = samples(times[0])?;
            let spec = first.spec().clone();
            let mut pending = Some(first);
            let stream = DuhamelStream::new(&spec, times, None, |t: f64| match pending.take() {
                Some(f) => Ok(f),
                None => samples(t),
            })?;
            let us: Vec<(f64, f64)> = stream
                .map(|item| item.map(|(t, u)| (t, u.norm_lp(triple.q()))))
                .collect::<Result<_>>()?;
            for ((t, lq), r) in us.into_iter().zip(rhs) {
                if sign < 0.0 && t == 0.0 {
                    continue;
                }
                rows.push((t, lq, r));
            }
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let lq: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let lhs = time_norm(&cfg.time, &lq, triple.p())?;
        for (k, report) in reports.iter_mut().enumerate() {
            let r: Vec<f64> = rows.iter().map(|row| row.2[k]).collect();
            report.push(label.clone(), lhs, time_norm(&cfg.time, &r, 2.0)?)?;
        }
    }
    for (report, s0) in reports.iter_mut().zip(s0s) {
        report.set_meta("s0", s0);
        report.set_meta("triple", triple);
        report.set_meta("time", &cfg.time);
        report.set_meta("projected_mean", projected);
    }
    Ok(reports)
}

pub fn strichartz_smoothing_ratio<F: Forcing>(
    family: Vec<(String, F)>,
    s0: f64,
    triple: &AdmissibleTriple,
    cfg: &StrichartzSmoothingConfig,
) -> Result<RatioReport> {
    let mut v = strichartz_smoothing_sweep(family, &[s0], triple, cfg)?;
    Ok(v.remove(0))
}
