//! The localized endpoint argument run numerically on the flat half-space:
//! `w_k = chi_k u` solves `i w_t + Delta w = [Delta, chi_k] u`, whose
//! Duhamel integral splits into the `(Delta chi_k) u` term (I) and the
//! divergence term `2 div((grad chi_k) u)` (II).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::admissible::AdmissibleTriple;
use super::mixed::time_norm;
use super::report::RatioReport;
use crate::error::{Error, Result};
use crate::extension::{half_l2_norm, half_lq_norm, reflect, HalfField, Parity};
use crate::geometry::PartitionOfUnity;
use crate::propagator::{BoundaryCondition, DuhamelStepper, TimeGrid};
use crate::spectral::multiplier::apply_sampled;
use crate::spectral::{fft, Field, FourierMultiplier};

/// Cutoffs `chi_k` on the whole period (even in `y1`) and the collar on
/// which they must sum to one.
#[derive(Clone, Debug)]
pub struct PipelineCharts {
    pub chi: Vec<Field>,
    pub collar: Vec<bool>,
}

impl PipelineCharts {
    pub fn from_partition(p: &PartitionOfUnity) -> Self {
        Self {
            chi: p.chi.clone(),
            collar: p.collar.clone(),
        }
    }

    /// One chart; the collar is where `chi = 1` to round-off.
    pub fn single(chi: Field) -> Self {
        let collar = chi
            .values()
            .iter()
            .map(|v| (v.re - 1.0).abs() < 1e-14)
            .collect();
        Self {
            chi: vec![chi],
            collar,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineConfig {
    pub time: TimeGrid,
    pub triple: AdmissibleTriple,
    pub bc: BoundaryCondition,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ChartDiagnostics {
    pub member: String,
    pub chart: usize,
    /// `||chi_k u||_{L^p L^q}` over the half period.
    pub endpoint: f64,
    pub term_i: f64,
    pub term_ii: f64,
    /// `||(Delta chi_k) u||_{L^2 L^2}`.
    pub source_i_l2: f64,
    /// Relative `L^2 L^2` gap between `chi_k u` and its Duhamel representation.
    pub duhamel_residual: f64,
    /// Max over instants of `max |form_a - form_b| / max |form_a|`.
    pub two_form: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineRun {
    pub endpoint: RatioReport,
    pub term_i: RatioReport,
    pub term_ii: RatioReport,
    pub charts: Vec<ChartDiagnostics>,
    /// Max over instants of `||sum_k chi_k u - u||_{L^2(collar)} / ||u||_{L^2}`.
    pub collar_residual: f64,
    pub max_duhamel_residual: f64,
    pub max_two_form: f64,
}

#[derive(Default)]
struct Series {
    endpoint: Vec<f64>,
    term_i: Vec<f64>,
    term_ii: Vec<f64>,
    source: Vec<f64>,
    gap: Vec<f64>,
    mass: Vec<f64>,
    two_form: f64,
}

impl Series {
    fn reverse(&mut self) {
        for v in [
            &mut self.endpoint,
            &mut self.term_i,
            &mut self.term_ii,
            &mut self.source,
            &mut self.gap,
            &mut self.mass,
        ] {
            v.reverse();
        }
    }

    fn append(&mut self, mut other: Series) {
        self.endpoint.append(&mut other.endpoint);
        self.term_i.append(&mut other.term_i);
        self.term_ii.append(&mut other.term_ii);
        self.source.append(&mut other.source);
        self.gap.append(&mut other.gap);
        self.mass.append(&mut other.mass);
        self.two_form = self.two_form.max(other.two_form);
    }
}

/// Cutoff with its spectral gradient and Laplacian (the Laplacian is the
/// divergence of the gradient, so both commutator forms use one stencil).
struct Chart {
    chi: Field,
    grad: Vec<Field>,
    lap: Field,
}

fn parity_of(bc: BoundaryCondition) -> Result<Parity> {
    match bc {
        BoundaryCondition::Dirichlet => Ok(Parity::Odd),
        BoundaryCondition::Neumann => Ok(Parity::Even),
        BoundaryCondition::Free => Err(Error::Format(
            "the pipeline needs a half-space boundary condition".into(),
        )),
    }
}

fn times_symbol(hat: &[Complex64], sym: &[Complex64]) -> Vec<Complex64> {
    hat.par_iter()
        .zip(sym.par_iter())
        .map(|(v, m)| v * m)
        .collect()
}

/// One branch of instants for one datum; negative branches drop `t = 0`.
fn run_branch(
    data: &Field,
    charts: &[Chart],
    collar: &[bool],
    cfg: &PipelineConfig,
    d: &[Vec<Complex64>],
    sign: f64,
) -> Result<(Vec<Series>, f64)> {
    let spec = data.spec().clone();
    let q = cfg.triple.q();
    let mut steppers: Vec<[DuhamelStepper; 3]> = charts
        .iter()
        .map(|c| {
            Ok([
                DuhamelStepper::new(&spec, 0.0, Some(&c.chi.mul(data)))?,
                DuhamelStepper::new(&spec, 0.0, None)?,
                DuhamelStepper::new(&spec, 0.0, None)?,
            ])
        })
        .collect::<Result<_>>()?;
    let mut series: Vec<Series> = charts.iter().map(|_| Series::default()).collect();
    let mut collar_residual: f64 = 0.0;
    let phase: Vec<Complex64> = spec
        .k_squared()
        .iter()
        .map(|&k| Complex64::from_polar(1.0, -sign * cfg.time.step() * k))
        .collect();
    let mut cur = fft::forward(data);
    for (m, &t) in cfg.time.branch(sign).iter().enumerate() {
        if m > 0 {
            cur.par_iter_mut()
                .zip(phase.par_iter())
                .for_each(|(v, e)| *v *= e);
        }
        let keep = !(sign < 0.0 && m == 0);
        let u = fft::inverse(&spec, cur.clone());
        let grad_u: Vec<Field> = d
            .iter()
            .map(|s| fft::inverse(&spec, times_symbol(&cur, s)))
            .collect();
        let mut total = Field::zeros(&spec);
        for ((c, st), out) in charts
            .iter()
            .zip(steppers.iter_mut())
            .zip(series.iter_mut())
        {
            let w = c.chi.mul(&u);
            let src_i = c.lap.mul(&u);
            let mut div_hat = vec![Complex64::new(0.0, 0.0); spec.len()];
            let mut dot = Field::zeros(&spec);
            for (a, g) in c.grad.iter().enumerate() {
                let gu = fft::forward(&g.mul(&u));
                div_hat
                    .par_iter_mut()
                    .zip(gu.par_iter().zip(d[a].par_iter()))
                    .for_each(|(acc, (v, s))| *acc += v * s);
                dot = dot.add(&g.mul(&grad_u[a]));
            }
            let div = fft::inverse(&spec, div_hat);
            // form_a = -(Delta chi) u - 2 grad chi . grad u, form_b = (Delta chi) u - 2 div((grad chi) u)
            let form_a = src_i.add(&dot.scale(2.0)).scale(-1.0);
            let form_b = src_i.sub(&div.scale(2.0));
            let top = form_a.max_abs();
            if top > 0.0 {
                out.two_form = out.two_form.max(form_a.max_abs_diff(&form_b) / top);
            }
            let w_rep = st[0].step(t, &form_a.scale(-1.0))?;
            let one = st[1].step(t, &src_i)?;
            let two = st[2].step(t, &div)?;
            if keep {
                out.endpoint.push(half_lq_norm(&w, q));
                out.term_i.push(half_lq_norm(&one, q));
                out.term_ii.push(2.0 * half_lq_norm(&two, q));
                out.source.push(half_l2_norm(&src_i));
                out.gap.push(half_l2_norm(&w.sub(&w_rep)));
                out.mass.push(half_l2_norm(&w));
            }
            total = total.add(&w);
        }
        let top = half_l2_norm(&u);
        if top > 0.0 {
            collar_residual = collar_residual.max(total.sub(&u).norm_lp_masked(2.0, collar) / top);
        }
    }
    Ok((series, collar_residual))
}

fn run_member(
    label: &str,
    f: &Field,
    charts: &[Chart],
    collar: &[bool],
    cfg: &PipelineConfig,
    d: &[Vec<Complex64>],
) -> Result<(Vec<ChartDiagnostics>, f64, f64)> {
    let l1 = f.spec().box_len()[0];
    let data = reflect(
        HalfField::new(f.clone(), 0.5 * l1)?.field(),
        parity_of(cfg.bc)?,
    );
    let (mut series, mut collar_residual) = if cfg.time.two_sided {
        let (mut back, c) = run_branch(&data, charts, collar, cfg, d, -1.0)?;
        back.iter_mut().for_each(Series::reverse);
        (back, c)
    } else {
        (charts.iter().map(|_| Series::default()).collect(), 0.0)
    };
    let (fwd, c) = run_branch(&data, charts, collar, cfg, d, 1.0)?;
    collar_residual = collar_residual.max(c);
    for (s, f) in series.iter_mut().zip(fwd) {
        s.append(f);
    }
    let p = cfg.triple.p();
    let tn = |v: &[f64], p: f64| time_norm(&cfg.time, v, p);
    let diag = series
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let gap = tn(&s.gap, 2.0)?;
            let mass = tn(&s.mass, 2.0)?;
            Ok(ChartDiagnostics {
                member: label.to_string(),
                chart: k,
                endpoint: tn(&s.endpoint, p)?,
                term_i: tn(&s.term_i, p)?,
                term_ii: tn(&s.term_ii, p)?,
                source_i_l2: tn(&s.source, 2.0)?,
                duhamel_residual: if mass > 0.0 { gap / mass } else { gap },
                two_form: s.two_form,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((diag, collar_residual, half_l2_norm(&data)))
}

/// Runs every datum of `family` (half-space data on `[0, L1/2]`) through
/// the localized argument. Reports carry one member per (datum, chart), all
/// against `||f||_{L^2}` of the half space.
pub fn endpoint_pipeline(
    family: &[(String, Field)],
    charts: &PipelineCharts,
    cfg: &PipelineConfig,
) -> Result<PipelineRun> {
    if family.is_empty() || charts.chi.is_empty() {
        return Err(Error::Empty("pipeline family or charts"));
    }
    let spec = family[0].1.spec().clone();
    if charts.collar.len() != spec.len() {
        return Err(Error::GridMismatch(
            "collar mask length differs from grid".into(),
        ));
    }
    let d: Vec<Vec<Complex64>> = (0..spec.dim())
        .map(|a| FourierMultiplier::derivative(a).sample(&spec))
        .collect::<Result<_>>()?;
    let prepared: Vec<Chart> = charts
        .chi
        .iter()
        .map(|chi| {
            spec.check_same(chi.spec())?;
            let grad: Vec<Field> = d.iter().map(|s| apply_sampled(chi, s)).collect();
            let mut lap = Field::zeros(&spec);
            for (g, s) in grad.iter().zip(&d) {
                lap = lap.add(&apply_sampled(g, s));
            }
            Ok(Chart {
                chi: chi.clone(),
                grad,
                lap,
            })
        })
        .collect::<Result<_>>()?;
    let rows = spec.sizes()[0] / 2;
    let stride = spec.stride(0);
    let collar: Vec<bool> = charts
        .collar
        .iter()
        .enumerate()
        .map(|(i, &c)| c && i / stride <= rows)
        .collect();
    let name = |what: &str| format!("{what} {}", cfg.triple);
    let mut endpoint = RatioReport::new(name("localized endpoint"), "pipeline");
    let mut term_i = RatioReport::new(name("duhamel term I"), "pipeline");
    let mut term_ii = RatioReport::new(name("duhamel term II"), "pipeline");
    let mut all = Vec::new();
    let mut collar_residual: f64 = 0.0;
    for (label, f) in family {
        spec.check_same(f.spec())?;
        let (diag, collar, mass) = run_member(label, f, &prepared, &collar, cfg, &d)?;
        collar_residual = collar_residual.max(collar);
        for c in &diag {
            let tag = format!("{label}/chart-{}", c.chart);
            endpoint.push(tag.clone(), c.endpoint, mass)?;
            term_i.push(tag.clone(), c.term_i, mass)?;
            term_ii.push(tag, c.term_ii, mass)?;
        }
        all.extend(diag);
    }
    let max_duhamel_residual = all.iter().map(|c| c.duhamel_residual).fold(0.0, f64::max);
    let max_two_form = all.iter().map(|c| c.two_form).fold(0.0, f64::max);
    for r in [&mut endpoint, &mut term_i, &mut term_ii] {
        r.set_meta("grid", spec.sizes());
        r.set_meta("time", &cfg.time);
        r.set_meta("charts", charts.chi.len());
    }
    Ok(PipelineRun {
        endpoint,
        term_i,
        term_ii,
        charts: all,
        collar_residual,
        max_duhamel_residual,
        max_two_form,
    })
}
