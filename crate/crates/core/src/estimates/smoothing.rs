//! Local smoothing: `||chi u||_{L^2 H^{s+1/2}} <= C ||f||_{H^s}` for the free
//! flow and `||chi u||_{L^2 H^{s+1}} <= C ||chi F||_{L^2 H^s}` for the
//! Duhamel term, with `H^s` norms diagonalized by the sine (Dirichlet) or
//! cosine (Neumann) series on `[0, L1/2]`.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use super::mixed::{stream_free, time_norm};
use super::report::RatioReport;
use crate::error::{Error, Result};
use crate::extension::{reflect, HalfField, Parity};
use crate::propagator::{BoundaryCondition, DuhamelStream, Forcing, TimeGrid};
use crate::spectral::norms::bessel_norm;
use crate::spectral::Field;

#[derive(Clone, Debug, Serialize)]
pub struct SmoothingConfig {
    pub time: TimeGrid,
    pub bc: BoundaryCondition,
}

fn parity(bc: BoundaryCondition) -> Option<Parity> {
    match bc {
        BoundaryCondition::Free => None,
        BoundaryCondition::Dirichlet => Some(Parity::Odd),
        BoundaryCondition::Neumann => Some(Parity::Even),
    }
}

/// Collar width used by the compactness check, per axis.
fn collar(len: f64) -> f64 {
    len / 16.0
}

/// Rejects cutoffs that reach the image wall `y1 = L1/2` (half-space) or the
/// periodic seam of any free axis, then returns the cutoff on the whole
/// period (even reflection for half-space conditions).
pub fn prepare_cutoff(chi: &Field, bc: BoundaryCondition) -> Result<Field> {
    let spec = chi.spec();
    let half = parity(bc).is_some();
    let mut idx = vec![0; spec.dim()];
    let mut worst: f64 = 0.0;
    for (flat, v) in chi.values().iter().enumerate() {
        spec.multi_index(flat, &mut idx);
        let near = (0..spec.dim()).any(|a| {
            let l = spec.box_len()[a];
            let y = spec.coord(a, idx[a]);
            if a == 0 && half {
                y <= 0.5 * l && y >= 0.5 * l - collar(l)
            } else {
                y.min(l - y) < collar(l)
            }
        });
        if near {
            worst = worst.max(v.norm());
        }
    }
    if worst > 1e-12 * chi.max_abs().max(1.0) {
        return Err(Error::CutoffNotCompact(worst));
    }
    Ok(if half {
        reflect(chi, Parity::Even)
    } else {
        chi.clone()
    })
}

fn extend(f: &Field, bc: BoundaryCondition) -> Result<Field> {
    match parity(bc) {
        None => Ok(f.clone()),
        Some(p) => {
            let l1 = f.spec().box_len()[0];
            Ok(reflect(HalfField::new(f.clone(), 0.5 * l1)?.field(), p))
        }
    }
}

/// `H^s` norm of a field given on the whole period; halved in mass for the
/// reflected half-space representation.
fn space_norm(full: &Field, s: f64, bc: BoundaryCondition) -> Result<f64> {
    let v = bessel_norm(full, s)?;
    Ok(if parity(bc).is_some() { v / SQRT_2 } else { v })
}

fn check_range(what: &'static str, s: f64, lo: f64, hi: f64, range: &'static str) -> Result<()> {
    if (lo..=hi).contains(&s) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            value: s,
            range,
        })
    }
}

/// `(lhs, rhs)` of the homogeneous estimate for one datum.
pub fn smoothing_member(
    f: &Field,
    chi_full: &Field,
    s: f64,
    cfg: &SmoothingConfig,
) -> Result<(f64, f64)> {
    f.spec().check_same(chi_full.spec())?;
    let data = extend(f, cfg.bc)?;
    let rhs = space_norm(&data, s, cfg.bc)?;
    let norms: Result<Vec<f64>> = stream_free(&data, &cfg.time, |u| {
        space_norm(&chi_full.mul(u), s + 0.5, cfg.bc)
    })
    .into_iter()
    .collect();
    let lhs = time_norm(&cfg.time, &norms?, 2.0)?;
    Ok((lhs, rhs))
}

/// Homogeneous estimate over a family of data, `s` in `[0, 1]`. Half-space
/// data lives on `[0, L1/2]`.
pub fn smoothing_ratio(
    family: &[(String, Field)],
    chi: &Field,
    s: f64,
    cfg: &SmoothingConfig,
) -> Result<RatioReport> {
    check_range("smoothing regularity s", s, 0.0, 1.0, "[0, 1]")?;
    if family.is_empty() {
        return Err(Error::Empty("smoothing family"));
    }
    let chi_full = prepare_cutoff(chi, cfg.bc)?;
    let mut report = RatioReport::new("local smoothing", format!("{:?}", cfg.bc).to_lowercase());
    for (label, f) in family {
        let (lhs, rhs) = smoothing_member(f, &chi_full, s, cfg)?;
        report.push(label.clone(), lhs, rhs)?;
    }
    report.set_meta("s", s);
    report.set_meta("time", &cfg.time);
    report.set_meta("grid", chi.spec().sizes());
    Ok(report)
}

/// Inhomogeneous estimate: zero data, forcing `chi F`, `s` in `[-1, 1]`.
/// Each forcing is sampled on the half space and reflected.
pub fn smoothing_ratio_inhomogeneous<F: Forcing>(
    family: Vec<(String, F)>,
    chi: &Field,
    s: f64,
    cfg: &SmoothingConfig,
) -> Result<RatioReport> {
    check_range("smoothing regularity s", s, -1.0, 1.0, "[-1, 1]")?;
    let chi_full = prepare_cutoff(chi, cfg.bc)?;
    let spec = chi.spec().clone();
    let bc = cfg.bc;
    let p = parity(bc);
    let mut report = RatioReport::new(
        "local smoothing, inhomogeneous",
        format!("{bc:?}").to_lowercase(),
    );
    for (label, mut forcing) in family {
        let mut local = |t: f64| -> Result<Field> {
            let g = forcing.at(t)?;
            let g = match p {
                Some(p) => reflect(&g, p),
                None => g,
            };
            Ok(chi_full.mul(&g))
        };
        let signs: &[f64] = if cfg.time.two_sided {
            &[-1.0, 1.0]
        } else {
            &[1.0]
        };
        let mut by_time: Vec<(f64, f64, f64)> = Vec::new();
        for &sign in signs {
            let times = cfg.time.branch(sign);
            let mut rhs_vals = Vec::with_capacity(times.len());
            for &t in &times {
                rhs_vals.push(space_norm(&local(t)?, s, bc)?);
            }
            let stream = DuhamelStream::new(&spec, times, None, &mut local)?;
            for (item, r) in stream.zip(rhs_vals) {
                let (t, u) = item?;
                if sign < 0.0 && t == 0.0 {
                    continue;
                }
                by_time.push((t, space_norm(&chi_full.mul(&u), s + 1.0, bc)?, r));
            }
        }
        by_time.sort_by(|a, b| a.0.total_cmp(&b.0));
        let lhs: Vec<f64> = by_time.iter().map(|v| v.1).collect();
        let rhs: Vec<f64> = by_time.iter().map(|v| v.2).collect();
        report.push(
            label,
            time_norm(&cfg.time, &lhs, 2.0)?,
            time_norm(&cfg.time, &rhs, 2.0)?,
        )?;
    }
    report.set_meta("s", s);
    report.set_meta("time", &cfg.time);
    Ok(report)
}

/// Data for the frequency sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepData {
    /// `sin(2^j y1) cos(y2)` scaled to the box: a Dirichlet eigenmode.
    Mode,
    /// Gaussian of width 0.3 at `y1 = L1/8` carrying
    /// frequency `2^j`, odd part kept; it leaves the cutoff region.
    Packet,
}

fn sweep_datum(spec: &crate::GridSpec, j: u32, kind: SweepData) -> Result<Field> {
    let l = spec.box_len().to_vec();
    let w1 = 2.0 * PI / l[0];
    let freq = (1u64 << j) as f64;
    let half = 0.5 * l[0];
    let f = match kind {
        SweepData::Mode => HalfField::from_real_fn(spec, half, move |x| {
            let trans: f64 = (1..x.len())
                .map(|a| (2.0 * PI * x[a] / l[a]).cos())
                .product();
            (freq * w1 * x[0]).sin() * trans
        })?,
        SweepData::Packet => {
            let c = l[0] / 8.0;
            HalfField::from_real_fn(spec, half, move |x| {
                let r2: f64 = (1..x.len()).map(|a| (x[a] - 0.5 * l[a]).powi(2)).sum();
                let g = |y: f64| {
                    (-0.5 * ((y - c).powi(2) + r2) / 0.09).exp() * (freq * w1 * (y - c)).sin()
                };
                g(x[0]) - g(-x[0])
            })?
        }
    };
    Ok(f.into_field())
}

/// Homogeneous ratios for data at frequency `2^j`; metadata `normalized`
/// holds `ratio / 2^{j/2}` and `band` its `(max - min) / mean`.
pub fn smoothing_frequency_sweep(
    spec: &crate::GridSpec,
    chi: &Field,
    s: f64,
    cfg: &SmoothingConfig,
    js: &[u32],
    kind: SweepData,
) -> Result<RatioReport> {
    let family: Result<Vec<(String, Field)>> = js
        .iter()
        .map(|&j| Ok((format!("j={j}"), sweep_datum(spec, j, kind)?)))
        .collect();
    let mut report = smoothing_ratio(&family?, chi, s, cfg)?;
    let normalized: Vec<f64> = report
        .members
        .iter()
        .zip(js)
        .map(|(m, &j)| m.ratio / 2f64.powf(0.5 * j as f64))
        .collect();
    let mean = normalized.iter().sum::<f64>() / normalized.len() as f64;
    let max = normalized.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = normalized.iter().copied().fold(f64::INFINITY, f64::min);
    report.family = format!("{} frequency sweep ({kind:?})", report.family).to_lowercase();
    report.set_meta("js", js);
    report.set_meta("normalized", &normalized);
    report.set_meta(
        "max_deviation",
        ((max - mean) / mean).max((mean - min) / mean),
    );
    Ok(report)
}

/// `sup_ratio` for each horizon `T` (two-sided, `steps_per_unit * T`
/// steps per side), for logging the time dependence.
pub fn smoothing_time_log(
    family: &[(String, Field)],
    chi: &Field,
    s: f64,
    bc: BoundaryCondition,
    horizons: &[f64],
    steps_per_unit: usize,
) -> Result<Vec<(f64, f64)>> {
    horizons
        .iter()
        .map(|&t| {
            let steps = ((steps_per_unit as f64 * t).ceil() as usize).max(16);
            let cfg = SmoothingConfig {
                time: TimeGrid::two_sided(t, steps)?,
                bc,
            };
            Ok((t, smoothing_ratio(family, chi, s, &cfg)?.sup_ratio))
        })
        .collect()
}
