//! One function per suite. Each returns a JSON report, a table and the list
//! of failed assertions; nothing is written here.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use splab::commutators::*;
use splab::estimates::*;
use splab::extension::{
    verify_commutation, verify_parity_relations, HalfField, PullbackCoefficients,
};
use splab::families::{compact_bump, gaussian_family, gaussian_packet, random_bandlimited};
use splab::geometry::{
    build_partition, pullback_coefficients, Boundary, BoundaryGraph, PartitionConfig,
};
use splab::propagator::{duhamel, duhamel_residual, halfspace_record, BoundaryCondition, TimeGrid};
use splab::spectral::multiplier::frac_laplacian;
use splab::spectral::norms::sobolev_norm;
use splab::{Field, GridSpec};

use crate::config::ExperimentConfig;

pub type Column = (&'static str, &'static str);

pub struct SuiteOutput {
    pub report: Value,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
    pub failures: Vec<String>,
}

impl SuiteOutput {
    fn new(columns: Vec<Column>) -> Self {
        Self {
            report: Value::Null,
            columns,
            rows: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }
}

type Outcome = anyhow::Result<SuiteOutput>;

fn grid(cfg: &ExperimentConfig) -> splab::Result<GridSpec> {
    match cfg.grid.box_len {
        Some(l) => GridSpec::cube(cfg.grid.n, cfg.grid.size, l),
        None => GridSpec::periodic(cfg.grid.n, cfg.grid.size),
    }
}

fn time(cfg: &ExperimentConfig) -> splab::Result<TimeGrid> {
    if cfg.time.two_sided {
        TimeGrid::two_sided(cfg.time.t_max, cfg.time.steps)
    } else {
        TimeGrid::new(cfg.time.t_max, cfg.time.steps)
    }
}

fn bc(cfg: &ExperimentConfig) -> BoundaryCondition {
    match cfg.bc.as_str() {
        "free" => BoundaryCondition::Free,
        "neumann" => BoundaryCondition::Neumann,
        _ => BoundaryCondition::Dirichlet,
    }
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn triples(cfg: &ExperimentConfig) -> anyhow::Result<Vec<AdmissibleTriple>> {
    if let Some(t) = cfg.single_triple()? {
        return Ok(vec![t]);
    }
    Ok(enumerate_admissible(
        cfg.grid.n as u32,
        cfg.regularity()?,
        cfg.exponents.pairs - 2,
    )?)
}

/// Odd (Dirichlet) or even (Neumann) Gaussians about the wall, kept on the
/// half period, centered at `y1 = L1/8`.
fn wall_family(spec: &GridSpec, cfg: &ExperimentConfig) -> Vec<(String, Field)> {
    let sign = if bc(cfg) == BoundaryCondition::Neumann {
        1.0
    } else {
        -1.0
    };
    let l = spec.box_len().to_vec();
    let count = cfg.family.count;
    (0..count)
        .map(|m| {
            let t = if count > 1 {
                m as f64 / (count - 1) as f64
            } else {
                0.0
            };
            let w = cfg.family.w_min * (cfg.family.w_max / cfg.family.w_min).powf(t);
            let c1 = 0.125 * l[0];
            let l2 = l.clone();
            let f = Field::from_real_fn(spec, move |x| {
                if x[0] > 0.5 * l2[0] {
                    return 0.0;
                }
                let r2: f64 = (1..x.len()).map(|a| (x[a] - 0.5 * l2[a]).powi(2)).sum();
                let g = |y: f64| (-0.5 * ((y - c1).powi(2) + r2) / (w * w)).exp();
                g(x[0]) + sign * g(-x[0])
            });
            (format!("wall-w{w:.3}"), f)
        })
        .collect()
}

pub fn run(cfg: &ExperimentConfig) -> Outcome {
    match cfg.suite.as_str() {
        "extension" => extension(cfg),
        "parity" => parity(cfg),
        "partition" => partition(cfg),
        "propagator" => propagator(cfg),
        "commutators" => commutators(cfg),
        "strichartz" => strichartz(cfg),
        "smoothing" => smoothing(cfg),
        "strichartz-smoothing" => strichartz_smoothing(cfg),
        "endpoint-pipeline" => pipeline(cfg),
        "k-functional" => k_functional_scan(cfg),
        other => anyhow::bail!("unknown suite '{other}'"),
    }
}

fn extension(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let l1 = spec.box_len()[0];
    let unit = l1 / (2.0 * PI);
    let (c, sigma) = (0.25 * l1, 0.06 * unit);
    let lens = spec.box_len().to_vec();
    let g = HalfField::from_real_fn(&spec, c + 0.5 * unit, move |x| {
        let d = x[0] - c;
        let w: f64 = (1..x.len())
            .map(|a| {
                let y = 2.0 * PI * x[a] / lens[a];
                1.0 + 0.5 * y.cos() + 0.3 * (2.0 * y).sin()
            })
            .product();
        (-0.5 * d * d / (sigma * sigma)).exp() * w
    })?;
    let graph = BoundaryGraph::from_name(&cfg.geometry, cfg.eps, spec.dim() - 1)?;
    let flat = verify_commutation(&g, &PullbackCoefficients::flat(&spec))?;
    let bent = verify_commutation(&g, &pullback_coefficients(&graph, &spec)?)?;
    let mut out = SuiteOutput::new(vec![
        ("geometry", "boundary graph of the flattened Laplacian"),
        ("residual", "||E[Lg] - L E[g]|| / ||Lg||"),
        (
            "chain_residual",
            "same with the left side assembled from the reflected pieces",
        ),
        (
            "aliasing",
            "spectral energy fraction of coefficient products beyond 2/3 of the band",
        ),
    ]);
    for (name, r) in [("flat", &flat), (cfg.geometry.as_str(), &bent)] {
        out.row(vec![
            name.to_string(),
            num(r.residual),
            num(r.chain_residual),
            num(r.aliasing),
        ]);
    }
    let tol = &cfg.tolerances;
    out.expect(
        flat.residual <= tol.flat,
        format!("flat residual {:e} > {:e}", flat.residual, tol.flat),
    );
    let limit = if graph == BoundaryGraph::Flat {
        tol.flat
    } else {
        tol.curved
    };
    out.expect(
        bent.residual <= limit,
        format!("{} residual {:e} > {limit:e}", cfg.geometry, bent.residual),
    );
    out.report = json!({ "flat": flat, "graph": graph, "curved": bent });
    Ok(out)
}

fn parity(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let band = (cfg.grid.size / 4).clamp(1, 8);
    let fields: Vec<Field> = (0..cfg.family.count)
        .map(|_| random_bandlimited(&spec, band, &mut rng))
        .collect();
    let reports: Vec<_> = fields.par_iter().map(verify_parity_relations).collect();
    let mut out = SuiteOutput::new(vec![
        ("member", "index of the random field"),
        (
            "relation",
            "parity relation between the Dirichlet/Neumann pieces and their derivatives",
        ),
        ("residual", "max-norm discrepancy"),
    ]);
    let mut worst: f64 = 0.0;
    for (m, rep) in reports.iter().enumerate() {
        for rel in &rep.relations {
            out.row(vec![m.to_string(), rel.name.clone(), num(rel.residual)]);
        }
        worst = worst.max(rep.max_residual());
    }
    out.expect(
        worst <= cfg.tolerances.parity,
        format!("parity residual {worst:e} > {:e}", cfg.tolerances.parity),
    );
    out.report = json!({ "band": band, "max_residual": worst, "members": reports });
    Ok(out)
}

fn partition(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let boundary = Boundary::from_name(&cfg.geometry)?;
    let pc = PartitionConfig::new(cfg.partition.delta, cfg.partition.charts);
    let p = build_partition(&boundary, &spec, &pc)?;
    let mut out = SuiteOutput::new(vec![
        ("chart", "index k of chi_k"),
        ("center_x", "boundary center of the chart"),
        ("center_y", "boundary center of the chart"),
        ("max_chi", "largest value of chi_k"),
        (
            "support_fraction",
            "fraction of nodes where chi_k is nonzero",
        ),
    ]);
    for (k, (c, chi)) in p.centers.iter().zip(&p.chi).enumerate() {
        let support =
            chi.values().iter().filter(|v| v.norm() > 0.0).count() as f64 / spec.len() as f64;
        out.row(vec![
            k.to_string(),
            num(c[0]),
            num(c[1]),
            num(chi.max_abs()),
            num(support),
        ]);
    }
    let tol = cfg.tolerances.partition;
    out.expect(
        p.identity_residual <= tol,
        format!(
            "collar identity residual {:e} > {tol:e}",
            p.identity_residual
        ),
    );
    out.report = json!({
        "boundary": p.boundary,
        "config": p.config,
        "level_band": p.level_band,
        "identity_residual": p.identity_residual,
        "min_denominator": p.min_denominator,
        "collar_nodes": p.collar.iter().filter(|&&c| c).count(),
    });
    Ok(out)
}

fn propagator(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let bc = bc(cfg);
    let mut out = SuiteOutput::new(vec![
        ("t", "time instant"),
        ("mass", "half-space L2 mass"),
        (
            "trace",
            "max |u| on the wall relative to max |g| (Dirichlet only)",
        ),
    ]);
    let data = wall_family(&spec, cfg).remove(0).1;
    let half = 0.5 * spec.box_len()[0];
    let g = HalfField::new(data, half)?;
    let tg = time(cfg)?;
    let (rec, overlap) = halfspace_record(&g, &tg, bc)?;
    let cols = spec.stride(0);
    let scale = g.field().max_abs();
    let mut trace: f64 = 0.0;
    for (i, (t, u)) in rec.times.iter().zip(&rec.snapshots).enumerate() {
        let wall = u.values()[..cols]
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
            / scale;
        if bc == BoundaryCondition::Dirichlet {
            trace = trace.max(wall);
        }
        let mass = rec.mass_log.get(i).copied().unwrap_or_else(|| u.norm_l2());
        out.row(vec![
            num(*t),
            num(mass),
            if bc == BoundaryCondition::Dirichlet {
                num(wall)
            } else {
                String::new()
            },
        ]);
    }
    let drift = rec.mass_drift();
    // forcing e^{it} phi with a smooth periodic Gaussian of the widest family width
    let center: Vec<f64> = spec.box_len().iter().map(|l| 0.5 * l).collect();
    let phi = gaussian_packet(&spec, &center, cfg.family.w_max, &vec![0.0; spec.dim()]);
    let forcing = |t: f64| Ok(phi.scale_complex(Complex64::from_polar(1.0, t)));
    let forward = TimeGrid::new(cfg.time.t_max, cfg.time.steps)?;
    let drec = duhamel(&spec, &forward, None, forcing)?;
    let residual = duhamel_residual(&drec, forcing)?;
    let tol = &cfg.tolerances;
    out.expect(
        trace <= tol.trace,
        format!("Dirichlet trace {trace:e} > {:e}", tol.trace),
    );
    out.expect(
        drift <= tol.trace,
        format!("mass drift {drift:e} > {:e}", tol.trace),
    );
    out.expect(
        residual <= tol.duhamel,
        format!("Duhamel residual {residual:e} > {:e}", tol.duhamel),
    );
    out.report = json!({
        "bc": bc,
        "time": tg,
        "trace": trace,
        "mass_drift": drift,
        "wall_overlap": overlap,
        "duhamel_residual": residual,
    });
    Ok(out)
}

fn commutators(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let s = cfg.exponents.order;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let center: Vec<f64> = spec.box_len().iter().map(|l| 0.5 * l).collect();
    let band = (cfg.grid.size / 5).clamp(1, 12);
    let fields: Vec<Field> = (0..cfg.family.count)
        .map(|_| random_bandlimited(&spec, band, &mut rng).remove_mean())
        .collect();
    let one = Field::constant(&spec, Complex64::new(1.0, 0.0));
    let rows: Vec<(f64, f64)> = fields
        .par_iter()
        .map(|f| -> anyhow::Result<(f64, f64)> {
            let identity = commutator_weight_grad(f, 0.6, &center)?.identity_residual;
            let mut constant = commutator_ds(&one, f, s)?.max_abs();
            for j in 0..spec.dim() {
                constant = constant.max(commutator_riesz(&one, f, j)?.max_abs());
            }
            let flat = commutator_weight_grad(f, 0.0, &center)?;
            constant = flat
                .direct
                .iter()
                .map(|d| d.max_abs())
                .fold(constant, f64::max);
            Ok((identity, constant))
        })
        .collect::<anyhow::Result<_>>()?;
    let mut out = SuiteOutput::new(vec![
        ("member", "index of the random field"),
        (
            "identity_residual",
            "two-term splitting of [<x>^a, D^{-1/2} grad] against direct evaluation",
        ),
        ("constant", "largest commutator with a constant function"),
    ]);
    let (mut identity, mut constant): (f64, f64) = (0.0, 0.0);
    for (m, (i, c)) in rows.iter().enumerate() {
        out.row(vec![m.to_string(), num(*i), num(*c)]);
        identity = identity.max(*i);
        constant = constant.max(*c);
    }
    let kcfg = SingularKernelConfig::new(&spec, s)?;
    let h = Field::from_real_fn(&spec, |x| x.iter().map(|v| v.cos()).product());
    let pv_error = singular_integral_ds(&h, &kcfg)?.rel_l2_error(&frac_laplacian(&h, s));
    let n = spec.dim();
    let quad = normalization_quadrature(n, s)?;
    let closed = normalization_constant(n, s);
    let tol = cfg.tolerances.commutator;
    out.expect(
        identity <= tol,
        format!("two-term identity {identity:e} > {tol:e}"),
    );
    out.expect(
        constant <= 1e-12,
        format!("constant commutators {constant:e} > 1e-12"),
    );
    out.expect(
        (quad - closed).abs() <= 1e-6 * closed,
        format!("C(n,s) quadrature {quad} vs {closed}"),
    );
    out.report = json!({
        "order": s,
        "identity_residual": identity,
        "constant_commutator": constant,
        "principal_value_error": pv_error,
        "kernel": kcfg,
        "c_ns_quadrature": quad,
        "c_ns_closed": closed,
    });
    Ok(out)
}

fn ratio_columns() -> Vec<Column> {
    vec![
        ("member", "family member label"),
        ("lhs", "left side of the inequality"),
        ("rhs", "right side of the inequality"),
        ("ratio", "lhs / rhs"),
    ]
}

fn push_members(out: &mut SuiteOutput, prefix: &[String], rep: &RatioReport) {
    for m in &rep.members {
        let mut cells = prefix.to_vec();
        cells.extend([m.label.clone(), num(m.lhs), num(m.rhs), num(m.ratio)]);
        out.row(cells);
    }
}

fn strichartz(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let bc = bc(cfg);
    let family = if bc == BoundaryCondition::Free {
        gaussian_family(&spec, cfg.family.count, cfg.family.w_min, cfg.family.w_max)
    } else {
        wall_family(&spec, cfg)
    };
    let scfg = StrichartzConfig::new(time(cfg)?, bc);
    let list = triples(cfg)?;
    let reports: Vec<RatioReport> = list
        .par_iter()
        .map(|t| strichartz_ratio(&family, t, &scfg))
        .collect::<splab::Result<_>>()?;
    let mut columns = vec![("p", "time exponent"), ("q", "space exponent")];
    columns.extend(ratio_columns());
    let mut out = SuiteOutput::new(columns);
    for (t, rep) in list.iter().zip(&reports) {
        push_members(&mut out, &[t.p().to_string(), t.q().to_string()], rep);
        out.expect(
            rep.sup_ratio.is_finite(),
            format!("{t}: sup ratio not finite"),
        );
    }
    out.report = json!({ "reports": reports });
    Ok(out)
}

fn smoothing(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let l = spec.box_len().to_vec();
    let mut center = vec![0.0; spec.dim()];
    for a in 1..spec.dim() {
        center[a] = 0.5 * l[a];
    }
    let chi = compact_bump(&spec, &center, 1.5 * l[0] / (2.0 * PI));
    let s = cfg.regularity()?;
    let s = *s.numer() as f64 / *s.denom() as f64;
    let scfg = SmoothingConfig {
        time: time(cfg)?,
        bc: bc(cfg),
    };
    let rep = smoothing_frequency_sweep(&spec, &chi, s, &scfg, &cfg.exponents.js, SweepData::Mode)?;
    let mut out = SuiteOutput::new(vec![
        ("j", "frequency exponent"),
        ("lhs", "||chi u||_{L2 H^{s+1/2}}"),
        ("rhs", "||f||_{H^s}"),
        ("ratio", "lhs / rhs"),
        ("normalized", "ratio / 2^{j/2}"),
    ]);
    let normalized: Vec<f64> = serde_json::from_value(rep.metadata["normalized"].clone())?;
    for ((m, j), nz) in rep.members.iter().zip(&cfg.exponents.js).zip(&normalized) {
        out.row(vec![
            j.to_string(),
            num(m.lhs),
            num(m.rhs),
            num(m.ratio),
            num(*nz),
        ]);
    }
    let dev = rep.metadata["max_deviation"]
        .as_f64()
        .unwrap_or(f64::INFINITY);
    let band = cfg.tolerances.smoothing_band;
    out.expect(
        dev <= band,
        format!("normalized ratios deviate by {dev:.3} > {band}"),
    );
    out.report = serde_json::to_value(&rep)?;
    Ok(out)
}

fn strichartz_smoothing(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let center: Vec<f64> = spec.box_len().iter().map(|l| 0.5 * l).collect();
    let sscfg = StrichartzSmoothingConfig {
        time: time(cfg)?,
        center: center.clone(),
    };
    let data = gaussian_family(&spec, cfg.family.count, cfg.family.w_min, cfg.family.w_max);
    let list = triples(cfg)?;
    let s0s = cfg.exponents.s0.clone();
    let per_triple: Vec<Vec<RatioReport>> = list
        .par_iter()
        .map(|t| {
            let family: Vec<(String, _)> = data
                .iter()
                .map(|(label, f)| {
                    let f = f.clone();
                    (label.clone(), move |t: f64| {
                        Ok(f.scale_complex(Complex64::from_polar(1.0, t)))
                    })
                })
                .collect();
            strichartz_smoothing_sweep(family, &s0s, t, &sscfg)
        })
        .collect::<splab::Result<_>>()?;
    let mut columns = vec![
        ("p", "time exponent"),
        ("q", "space exponent"),
        ("s0", "weight exponent"),
    ];
    columns.extend(ratio_columns());
    let mut out = SuiteOutput::new(columns);
    for (t, reps) in list.iter().zip(&per_triple) {
        for (s0, rep) in s0s.iter().zip(reps) {
            push_members(
                &mut out,
                &[t.p().to_string(), t.q().to_string(), s0.to_string()],
                rep,
            );
            out.expect(
                rep.sup_ratio.is_finite(),
                format!("{t}, s0 = {s0}: sup ratio not finite"),
            );
        }
    }
    out.report = json!({ "reports": per_triple });
    Ok(out)
}

fn pipeline(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let part = build_partition(
        &Boundary::FlatLine,
        &spec,
        &PartitionConfig::new(cfg.partition.delta, cfg.partition.charts),
    )?;
    let triple = match cfg.single_triple()? {
        Some(t) => t,
        None => {
            let all = enumerate_admissible(2, cfg.regularity()?, 1)?;
            all[all.len() / 2]
        }
    };
    let pcfg = PipelineConfig {
        time: time(cfg)?,
        triple,
        bc: bc(cfg),
    };
    let family = wall_family(&spec, cfg);
    let run = endpoint_pipeline(&family, &PipelineCharts::from_partition(&part), &pcfg)?;
    let mut out = SuiteOutput::new(vec![
        ("member", "family member label"),
        ("chart", "partition chart index"),
        ("endpoint", "space-time norm of chi_k u"),
        ("term_i", "norm of the (Delta chi) u Duhamel term"),
        ("term_ii", "norm of the 2 div((grad chi) u) Duhamel term"),
        ("source_i_l2", "L2L2 norm of the term-I forcing"),
        (
            "duhamel_residual",
            "gap between chi u and its Duhamel representation",
        ),
        ("two_form", "discrepancy of the two commutator-source forms"),
    ]);
    for c in &run.charts {
        out.row(vec![
            c.member.clone(),
            c.chart.to_string(),
            num(c.endpoint),
            num(c.term_i),
            num(c.term_ii),
            num(c.source_i_l2),
            num(c.duhamel_residual),
            num(c.two_form),
        ]);
    }
    let tol = &cfg.tolerances;
    out.expect(
        run.collar_residual <= tol.partition,
        format!("collar residual {:e}", run.collar_residual),
    );
    out.expect(
        run.max_duhamel_residual <= tol.duhamel,
        format!(
            "Duhamel residual {:e} > {:e}",
            run.max_duhamel_residual, tol.duhamel
        ),
    );
    out.expect(
        run.max_two_form <= tol.two_form,
        format!(
            "two-form discrepancy {:e} > {:e}",
            run.max_two_form, tol.two_form
        ),
    );
    out.expect(
        run.term_i.sup_ratio.is_finite() && run.term_ii.sup_ratio.is_finite(),
        "term ratios not finite",
    );
    out.report = serde_json::to_value(&run)?;
    Ok(out)
}

fn k_functional_scan(cfg: &ExperimentConfig) -> Outcome {
    let spec = grid(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let fields: Vec<Field> = (0..cfg.family.count)
        .map(|m| random_bandlimited(&spec, 4 + 2 * (m % 6), &mut rng).remove_mean())
        .collect();
    let lambdas: Vec<f64> = (0..200).map(|j| 1e-6 * 1.1f64.powi(j)).collect();
    let rows: Vec<(f64, f64, bool)> = fields
        .par_iter()
        .map(|f| -> anyhow::Result<(f64, f64, bool)> {
            let k = KFunctional::new(f);
            let vals: Vec<f64> = lambdas.iter().map(|&l| k.eval(l)).collect();
            let mut shape = true;
            for i in 1..vals.len() {
                shape &= vals[i] >= vals[i - 1] - 1e-14;
                if i + 1 < vals.len() {
                    let (l0, l1, l2) = (lambdas[i - 1], lambdas[i], lambdas[i + 1]);
                    let chord = vals[i - 1] + (vals[i + 1] - vals[i - 1]) * (l1 - l0) / (l2 - l0);
                    shape &= vals[i] >= chord - 1e-12 * vals[i];
                }
            }
            Ok((k.interpolation_norm(1.0)?, sobolev_norm(f, 1.0)?, shape))
        })
        .collect::<anyhow::Result<_>>()?;
    let mut out = SuiteOutput::new(vec![
        ("member", "index of the random field"),
        (
            "interpolation",
            "(int (lambda^{-1/2} K(lambda, f))^2 dlambda/lambda)^{1/2}",
        ),
        ("h1", "homogeneous H^1 norm"),
        ("ratio", "interpolation / h1"),
        (
            "monotone_concave",
            "K is nondecreasing and concave on the lambda grid",
        ),
    ]);
    for (m, (i, h, shape)) in rows.iter().enumerate() {
        let ratio = i / h;
        out.row(vec![
            m.to_string(),
            num(*i),
            num(*h),
            num(ratio),
            shape.to_string(),
        ]);
        out.expect(
            (0.25..=4.0).contains(&ratio),
            format!("member {m}: ratio {ratio} outside [1/4, 4]"),
        );
        out.expect(*shape, format!("member {m}: K not monotone and concave"));
    }
    out.report = json!({ "lambdas": lambdas.len(), "cutoffs": splab::commutators::CUTOFFS });
    Ok(out)
}
