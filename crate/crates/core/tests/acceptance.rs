//! Acceptance run: every criterion at its stated tolerance and time budget,
//! one PASS/FAIL line each. Runs sequentially so timings are not skewed.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splab::commutators::*;
use splab::estimates::*;
use splab::extension::{
    verify_commutation, verify_parity_relations, HalfField, PullbackCoefficients,
};
use splab::families::{compact_bump, gaussian_family, random_bandlimited};
use splab::geometry::{
    build_partition, pullback_coefficients, Boundary, BoundaryGraph, PartitionConfig,
};
use splab::propagator::{duhamel, halfspace_record, BoundaryCondition, TimeGrid};
use splab::spectral::dyadic::{overlap_constants, DyadicPartition};
use splab::spectral::norms::{besov_norm, sobolev_norm};
use splab::{Field, GridSpec};

type Check = (bool, String);

fn r(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

fn w(y2: f64) -> f64 {
    1.0 + 0.5 * y2.cos() + 0.3 * (2.0 * y2).sin()
}

fn commutation() -> Check {
    let mut last = f64::INFINITY;
    let mut decreasing = true;
    let (mut flat, mut bent) = (0.0, 0.0);
    let mut log = Vec::new();
    for n in [64, 128, 256] {
        let spec = GridSpec::periodic(2, n).unwrap();
        let g = HalfField::from_real_fn(&spec, PI / 2.0 + 0.5, |x| {
            let d = x[0] - PI / 2.0;
            (-0.5 * d * d / 0.0036).exp() * w(x[1])
        })
        .unwrap();
        let sine = pullback_coefficients(&BoundaryGraph::Sine { eps: 0.1 }, &spec).unwrap();
        flat = verify_commutation(&g, &PullbackCoefficients::flat(&spec))
            .unwrap()
            .residual;
        bent = verify_commutation(&g, &sine).unwrap().residual;
        decreasing &= bent < last;
        last = bent;
        log.push(format!("{bent:.1e}"));
    }
    (
        flat <= 1e-10 && bent <= 1e-8 && decreasing,
        format!(
            "flat {flat:.2e}, curved {bent:.2e}, curved by size [{}]",
            log.join(", ")
        ),
    )
}

fn parity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut relations = 0;
    for m in 0..20 {
        let spec = if m % 2 == 0 {
            GridSpec::periodic(2, 64).unwrap()
        } else {
            GridSpec::periodic(3, 16).unwrap()
        };
        let g = random_bandlimited(&spec, 4 + m % 5, &mut rng);
        let rep = verify_parity_relations(&g);
        relations = relations.max(rep.relations.len());
        worst = worst.max(rep.max_residual());
    }
    (
        worst <= 1e-9,
        format!("{relations} relations, max residual {worst:.2e} over 20 fields"),
    )
}

fn propagator() -> Check {
    let spec = GridSpec::periodic(2, 256).unwrap();
    let rng = std::cell::RefCell::new(ChaCha8Rng::seed_from_u64(9));
    let g = HalfField::from_fn(&spec, 2.5, |_| {
        let mut r = rng.borrow_mut();
        Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    })
    .unwrap();
    let grid = TimeGrid::new(1.0, 63).unwrap();
    let (rec, _) = halfspace_record(&g, &grid, BoundaryCondition::Dirichlet).unwrap();
    let rows = spec.sizes()[0] / 2 + 1;
    let cols = spec.stride(0);
    let scale = g.field().max_abs();
    let (mut trace, mut image): (f64, f64) = (0.0, 0.0);
    for (t, u) in rec.times.iter().zip(&rec.snapshots) {
        trace = trace.max(
            u.values()[..cols]
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max)
                / scale,
        );
        let oracle = common::series_evolve(g.field(), *t, true);
        let e = u.values()[..rows * cols]
            .iter()
            .zip(&oracle.values()[..rows * cols])
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        image = image.max(e / scale);
    }
    (
        trace <= 1e-10 && image <= 1e-10 && rec.times.len() == 64,
        format!(
            "{} instants, trace {trace:.2e}, image vs series {image:.2e}",
            rec.times.len()
        ),
    )
}

fn manufactured_error(spec: &GridSpec, steps: usize) -> f64 {
    let p = Field::from_real_fn(spec, |x| {
        let (a, b) = (x[0] - PI, x[1] - PI);
        (-(a * a + b * b)).exp()
    });
    let grid = TimeGrid::new(1.0, steps).unwrap();
    let forcing = |t: f64| Ok(p.scale_complex(Complex64::from_polar(1.0, t)));
    let rec = duhamel(spec, &grid, None, forcing).unwrap();
    let (mut num, mut den) = (0.0, 0.0);
    for (t, u) in rec.times.iter().zip(&rec.snapshots) {
        let exact = common::manufactured_duhamel(&p, *t);
        num += u.sub(&exact).norm_l2().powi(2);
        den += exact.norm_l2().powi(2);
    }
    (num / den).sqrt()
}

fn duhamel_order() -> Check {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let errs: Vec<f64> = [64, 128, 256, 512]
        .iter()
        .map(|&m| manufactured_error(&spec, m))
        .collect();
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    (
        errs[2] <= 5e-3 && orders.iter().all(|o| (o - 2.0).abs() <= 0.2),
        format!("error at M=256 {:.2e}, orders {:.3?}", errs[2], orders),
    )
}

fn admissibility() -> Check {
    let mut exact = true;
    let mut total = 0;
    for n in 1..=5u32 {
        for s in [r(0, 1), r(1, 4), r(1, 2)] {
            let Ok(list) = enumerate_admissible(n, s, 8) else {
                continue;
            };
            for t in &list {
                let nn = Rational64::from_integer(n as i64);
                exact &= t.inv_p() * 2 + nn * t.inv_q() == nn / 2 - s;
                total += 1;
            }
        }
    }
    let three = enumerate_admissible(3, r(0, 1), 8).unwrap();
    let endpoint = three
        .iter()
        .any(|t| t.inv_p() == r(1, 2) && t.inv_q() == r(1, 6));
    let energy = three
        .iter()
        .any(|t| t.inv_p() == r(0, 1) && t.inv_q() == r(1, 2));
    let plane = enumerate_admissible(2, r(0, 1), 8).unwrap();
    let no_inf = plane.iter().all(|t| t.inv_q() != r(0, 1));
    (
        exact && endpoint && energy && no_inf,
        format!("{total} triples exact: {exact}, (2,6): {endpoint}, (inf,2): {energy}, n=2 without q=inf: {no_inf}"),
    )
}

fn strichartz() -> Check {
    let triple = AdmissibleTriple::from_exponents(3, r(0, 1), Some(2), Some(6)).unwrap();
    let sweep = ScalingSweep {
        size: 64,
        box_len: 32.0,
        t_max: 0.5,
        steps: 32,
        width: 1.0,
    };
    let scaling = strichartz_scaling(&sweep, &[0.25, 0.5, 1.0, 2.0, 4.0], &triple).unwrap();
    let spread = scaling.spread();
    let sup = |size: usize, steps: usize| {
        let spec = GridSpec::cube(3, size, 32.0).unwrap();
        let family = gaussian_family(&spec, 20, 0.5, 1.5);
        let cfg = StrichartzConfig::new(
            TimeGrid::two_sided(0.5, steps).unwrap(),
            BoundaryCondition::Free,
        );
        let rep = strichartz_ratio(&family, &triple, &cfg).unwrap();
        (rep.sup_ratio, rep.members.len())
    };
    let (coarse, kept_c) = sup(64, 32);
    let (fine, kept_f) = sup(128, 64);
    let rel = (fine - coarse).abs() / fine;
    (
        scaling.members.len() == 5 && spread <= 0.02 && rel <= 0.1 && kept_c > 0 && kept_f > 0,
        format!(
            "scaling spread {spread:.2e}; sup 64^3 {coarse:.5} ({kept_c} kept), 128^3 {fine:.5} ({kept_f} kept), change {:.2}%",
            100.0 * rel
        ),
    )
}

fn smoothing() -> Check {
    let spec = GridSpec::periodic(2, 256).unwrap();
    let chi = compact_bump(&spec, &[0.0, PI], 1.5);
    let cfg = SmoothingConfig {
        time: TimeGrid::two_sided(1.0, 16).unwrap(),
        bc: BoundaryCondition::Dirichlet,
    };
    let rep = smoothing_frequency_sweep(&spec, &chi, 0.0, &cfg, &[2, 3, 4, 5, 6], SweepData::Mode)
        .unwrap();
    let dev = rep.metadata["max_deviation"].as_f64().unwrap();
    (
        dev <= 0.2,
        format!(
            "normalized ratios {}, max deviation {:.1}%",
            rep.metadata["normalized"],
            100.0 * dev
        ),
    )
}

fn commutator_algebra() -> Check {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut identity: f64 = 0.0;
    let mut constant: f64 = 0.0;
    let c = Field::constant(&spec, Complex64::new(2.5, 0.0));
    for _ in 0..20 {
        let f = random_bandlimited(&spec, 12, &mut rng).remove_mean();
        identity = identity.max(
            commutator_weight_grad(&f, 0.6, &[PI, PI])
                .unwrap()
                .identity_residual,
        );
        constant = constant
            .max(commutator_ds(&c, &f, 0.5).unwrap().max_abs())
            .max(commutator_riesz(&c, &f, 0).unwrap().max_abs())
            .max(commutator_riesz(&c, &f, 1).unwrap().max_abs());
        // the weight <x>^0 is the constant multiplier
        let direct = commutator_weight_grad(&f, 0.0, &[PI, PI]).unwrap().direct;
        constant = direct.iter().map(|d| d.max_abs()).fold(constant, f64::max);
    }
    (
        identity <= 1e-9 && constant <= 1e-12,
        format!("two-term identity {identity:.2e}, constant commutators {constant:.2e}"),
    )
}

/// Adaptive Simpson on `[a, b]`.
fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64 + Copy>(
        f: F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn singular_integral() -> Check {
    let mut errors = Vec::new();
    for n in [32, 64, 128] {
        let spec = GridSpec::periodic(1, n).unwrap();
        let h = Field::from_real_fn(&spec, |x| x[0].cos());
        let cfg = SingularKernelConfig::new(&spec, 0.5).unwrap();
        errors.push(singular_integral_ds(&h, &cfg).unwrap().rel_l2_error(&h));
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let near = simpson(
        |u: f64| {
            if u == 0.0 {
                0.0
            } else {
                2.0 * (1.0 - (u * u).cos()) / (u * u)
            }
        },
        0.0,
        1.0,
        1e-14,
    );
    let end = 400.0 * PI;
    let mut body = simpson(
        |t: f64| (1.0 - t.cos()) * t.powf(-1.5),
        1.0,
        2.0 * PI,
        1e-14,
    );
    for k in 1..200 {
        let a = 2.0 * PI * k as f64;
        body += simpson(
            |t: f64| (1.0 - t.cos()) * t.powf(-1.5),
            a,
            a + 2.0 * PI,
            1e-14,
        );
    }
    let oracle = 1.0 / (2.0 * (near + body + 2.0 / end.sqrt()));
    let c = normalization_quadrature(1, 0.5).unwrap();
    let rel = (c - oracle).abs() / oracle;
    (
        errors[2] <= 1e-3 && monotone && rel <= 1e-6,
        format!(
            "errors [{}], C(1,1/2) {c:.12} vs oracle {oracle:.12} ({rel:.1e})",
            errors
                .iter()
                .map(|e| format!("{e:.2e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn k_functional_checks() -> Check {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let f = Field::from_real_fn(&spec, |x| (3.0 * x[0] + 4.0 * x[1]).cos());
    let l2 = f.norm_l2();
    let k = KFunctional::new(&f);
    let single = (-30..30)
        .map(|j| {
            let lambda = 2f64.powf(j as f64 / 3.0);
            (k.eval(lambda) - l2.min(25.0 * lambda * l2)).abs() / l2
        })
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut shape, mut lo, mut hi) = (true, f64::INFINITY, 0.0f64);
    let lambdas: Vec<f64> = (0..200).map(|j| 1e-6 * 1.1f64.powi(j)).collect();
    for m in 0..10 {
        let g = random_bandlimited(&spec, 4 + 2 * m, &mut rng).remove_mean();
        let k = KFunctional::new(&g);
        let vals: Vec<f64> = lambdas.iter().map(|&l| k.eval(l)).collect();
        for i in 1..vals.len() {
            shape &= vals[i] >= vals[i - 1] - 1e-14;
            if i + 1 < vals.len() {
                let (l0, l1, l2) = (lambdas[i - 1], lambdas[i], lambdas[i + 1]);
                let chord = vals[i - 1] + (vals[i + 1] - vals[i - 1]) * (l1 - l0) / (l2 - l0);
                shape &= vals[i] >= chord - 1e-12 * vals[i];
            }
        }
        let ratio = k.interpolation_norm(1.0).unwrap() / sobolev_norm(&g, 1.0).unwrap();
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    (
        single <= 1e-12 && shape && lo >= 0.25 && hi <= 4.0,
        format!(
            "single mode {single:.1e}, monotone+concave {shape}, s=1 ratios in [{lo:.4}, {hi:.4}]"
        ),
    )
}

fn pipeline() -> Check {
    let run = |size: usize| {
        let spec = GridSpec::periodic(2, size).unwrap();
        let part =
            build_partition(&Boundary::FlatLine, &spec, &PartitionConfig::new(3.0, 2)).unwrap();
        let l = spec.box_len()[0];
        let f = Field::from_real_fn(&spec, move |x| {
            if x[0] > 0.5 * l {
                return 0.0;
            }
            let g = |y: f64| (-0.5 * ((y - 0.8).powi(2) + (x[1] - 2.6).powi(2)) / 0.09).exp();
            g(x[0]) - g(-x[0])
        });
        let cfg = PipelineConfig {
            time: TimeGrid::two_sided(0.25, 64).unwrap(),
            triple: AdmissibleTriple::from_exponents(2, r(0, 1), Some(4), Some(4)).unwrap(),
            bc: BoundaryCondition::Dirichlet,
        };
        endpoint_pipeline(
            &[("wall-gaussian".into(), f)],
            &PipelineCharts::from_partition(&part),
            &cfg,
        )
        .unwrap()
    };
    let coarse = run(512);
    let fine = run(1024);
    let finite = [&coarse, &fine].iter().all(|p| {
        p.term_i.sup_ratio.is_finite()
            && p.term_ii.sup_ratio.is_finite()
            && p.term_i.sup_ratio > 0.0
    });
    let change = |a: f64, b: f64| (a - b).abs() / b;
    let di = change(coarse.term_i.sup_ratio, fine.term_i.sup_ratio);
    let dii = change(coarse.term_ii.sup_ratio, fine.term_ii.sup_ratio);
    let collar = coarse.collar_residual.max(fine.collar_residual);
    let duh = coarse.max_duhamel_residual.max(fine.max_duhamel_residual);
    (
        collar <= 1e-10 && fine.max_two_form <= 1e-9 && duh <= 5e-3 && finite && di <= 0.1 && dii <= 0.1,
        format!(
            "collar {collar:.1e}, two-form {:.1e} (512^2: {:.1e}), Duhamel {duh:.2e}, I {:.4} ({:.1e}), II {:.4} ({:.1e})",
            fine.max_two_form, coarse.max_two_form, fine.term_i.sup_ratio, di, fine.term_ii.sup_ratio, dii
        ),
    )
}

fn dyadic() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let part = DyadicPartition {
        j_min: -20,
        j_max: 20,
    };
    let sum = (0..1000)
        .map(|_| (part.sum_at(2f64.powf(rng.gen_range(-15.0..15.0))) - 1.0).abs())
        .fold(0.0, f64::max);
    let (c, cc) = overlap_constants(4096);
    let spec = GridSpec::periodic(2, 64).unwrap();
    let (mut inside, mut interp) = (true, 0.0f64);
    for m in 0..20 {
        let f = random_bandlimited(&spec, 4 + m, &mut rng).remove_mean();
        let b2 = besov_norm(&f, 0.0, 2.0, 2.0).unwrap().powi(2);
        let l2 = f.norm_l2().powi(2);
        inside &= b2 >= c * l2 * (1.0 - 1e-12) && b2 <= cc * l2 * (1.0 + 1e-12);
        let h1 = sobolev_norm(&f, 1.0).unwrap();
        let h2 = sobolev_norm(&f, 2.0).unwrap();
        interp = interp.max(h1 / (f.norm_l2() * h2).sqrt());
    }
    (
        sum <= 1e-12 && inside && interp <= 1.0 + 1e-10,
        format!("partition sum {sum:.1e}, overlap [{c:.4}, {cc:.4}] respected {inside}, interpolation C {interp:.12}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, f64, fn() -> Check); 12] = [
        ("extension commutation", 10.0, commutation),
        ("parity relations", 5.0, parity),
        ("half-space propagator", 30.0, propagator),
        ("Duhamel convergence", 120.0, duhamel_order),
        ("admissibility", 1.0, admissibility),
        ("endpoint Strichartz scaling", 600.0, strichartz),
        ("local smoothing sweep", 120.0, smoothing),
        ("commutator algebra", 10.0, commutator_algebra),
        ("singular integral", 30.0, singular_integral),
        ("K-functional", 10.0, k_functional_checks),
        ("endpoint pipeline", 300.0, pipeline),
        ("dyadic and Besov", 5.0, dyadic),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check();
        let secs = start.elapsed().as_secs_f64();
        let pass = ok && secs <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {}  {detail}; {secs:.1} s of {budget} s",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
