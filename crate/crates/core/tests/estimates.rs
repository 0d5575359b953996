mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;

use splab::estimates::*;
use splab::families::gaussian_packet;
use splab::propagator::{free_record, BoundaryCondition, EvolutionRecord, TimeGrid};
use splab::{Error, Field, GridSpec};

fn r(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

#[test]
fn admissible_endpoints_and_plane_exclusion() {
    let three = enumerate_admissible(3, r(0, 1), 5).unwrap();
    assert_eq!(three.len(), 7);
    assert!(three.iter().any(|t| t.p() == 2.0 && t.q() == 6.0));
    assert!(three.iter().any(|t| t.p().is_infinite() && t.q() == 2.0));

    let two = enumerate_admissible(2, r(0, 1), 5).unwrap();
    assert!(two.iter().any(|t| t.p().is_infinite() && t.q() == 2.0));
    assert!(two.iter().all(|t| t.q().is_finite()));
    assert_eq!(two.len(), 6);

    for t in enumerate_admissible(3, r(1, 2), 4).unwrap() {
        assert_eq!(t.inv_p() * 2 + t.inv_q() * 3, r(1, 1));
    }
    assert!(matches!(
        enumerate_admissible(3, r(3, 2), 2),
        Err(Error::NotAdmissible(_))
    ));
    assert!(enumerate_admissible(3, r(-1, 4), 2).is_err());
}

#[test]
fn admissible_interior_points_are_evenly_spaced() {
    let t = enumerate_admissible(3, r(0, 1), 3).unwrap();
    let inv: Vec<Rational64> = t.iter().map(|t| t.inv_p()).collect();
    assert_eq!(inv, vec![r(0, 1), r(1, 8), r(1, 4), r(3, 8), r(1, 2)]);
}

proptest! {
    #[test]
    fn enumerated_triples_satisfy_scaling_exactly(n in 1u32..=5, num in 0i64..20, count in 0usize..12) {
        let s = Rational64::new(num, 8);
        prop_assume!(s < Rational64::new(n as i64, 2));
        let list = enumerate_admissible(n, s, count).unwrap();
        for t in &list {
            prop_assert_eq!(t.defect(), Rational64::from_integer(0));
            let nn = Rational64::from_integer(n as i64);
            prop_assert_eq!(t.inv_p() * 2 + t.inv_q() * nn, nn / 2 - s);
            prop_assert!(t.p() >= 2.0 && t.q() >= 2.0);
            prop_assert!(n != 2 || t.q().is_finite());
        }
    }
}

fn record(
    spec: &GridSpec,
    times: Vec<f64>,
    f: impl Fn(f64, &[f64]) -> Complex64 + Copy,
) -> EvolutionRecord {
    let grid = TimeGrid::new(*times.last().unwrap(), times.len() - 1).unwrap();
    let snaps = times
        .iter()
        .map(|&t| Field::from_fn(spec, move |x| f(t, x)))
        .collect();
    EvolutionRecord::new(grid, times, snaps, BoundaryCondition::Free)
}

#[test]
fn mixed_norm_of_constant() {
    let spec = GridSpec::new(vec![16, 8], vec![3.0, 2.0]).unwrap();
    let t_max = 1.5;
    let times: Vec<f64> = (0..=20).map(|m| t_max * m as f64 / 20.0).collect();
    let rec = record(&spec, times, |_, _| Complex64::new(0.0, -2.5));
    for (p, q) in [
        (2.0, 2.0),
        (4.0, 3.0),
        (f64::INFINITY, 6.0),
        (1.0, f64::INFINITY),
    ] {
        let expect = 2.5 * t_max.powf(1.0 / p) * 6f64.powf(1.0 / q);
        let got = mixed_norm(&rec, p, q, None).unwrap();
        assert!((got - expect).abs() < 1e-12 * expect, "p={p} q={q}");
    }
}

#[test]
fn mixed_norm_of_separable_matches_one_dimensional_quadratures() {
    let spec = GridSpec::periodic(2, 32).unwrap();
    let steps = 40;
    let times: Vec<f64> = (0..=steps).map(|m| 2.0 * m as f64 / steps as f64).collect();
    let a = |t: f64| 1.0 + t * t;
    let b = |x: &[f64]| (x[0].sin() + 0.3 * x[1].cos()).abs() + 0.1;
    let rec = record(&spec, times.clone(), move |t, x| {
        Complex64::new(a(t) * b(x), 0.0)
    });
    let (p, q) = (3.0, 4.0);
    // Time: trapezoid rule written out. Space: plain node sum.
    let h = 2.0 / steps as f64;
    let mut at = 0.0;
    for (m, &t) in times.iter().enumerate() {
        let w = if m == 0 || m == steps { 0.5 * h } else { h };
        at += w * a(t).powf(p);
    }
    let mut bx = 0.0;
    let d = 2.0 * PI / 32.0;
    for i in 0..32 {
        for j in 0..32 {
            bx += b(&[i as f64 * d, j as f64 * d]).powf(q) * d * d;
        }
    }
    let expect = at.powf(1.0 / p) * bx.powf(1.0 / q);
    let got = mixed_norm(&rec, p, q, None).unwrap();
    assert!((got - expect).abs() < 1e-12 * expect);
}

#[test]
fn mixed_norm_masks_holder_and_unitarity() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let f = gaussian_packet(&spec, &[PI, PI], 0.6, &[1.0, -2.0]);
    let grid = TimeGrid::new(0.8, 32).unwrap();
    let rec = free_record(&f, &grid);
    let sup = mixed_norm(&rec, f64::INFINITY, 2.0, None).unwrap();
    assert!((sup - f.norm_l2()).abs() < 1e-12 * sup);
    let l2 = mixed_norm(&rec, 2.0, 2.0, None).unwrap();
    assert!(l2 <= 0.8f64.sqrt() * sup + 1e-12);

    let half: Vec<bool> = (0..spec.len()).map(|i| i % 3 != 0).collect();
    let third: Vec<bool> = (0..spec.len()).map(|i| i % 3 == 1).collect();
    let all = mixed_norm(&rec, 4.0, 4.0, None).unwrap();
    let m1 = mixed_norm(&rec, 4.0, 4.0, Some(&half)).unwrap();
    let m2 = mixed_norm(&rec, 4.0, 4.0, Some(&third)).unwrap();
    assert!(m2 <= m1 && m1 <= all);

    let empty = EvolutionRecord::new(grid, vec![], vec![], BoundaryCondition::Free);
    assert!(matches!(
        mixed_norm(&empty, 2.0, 2.0, None),
        Err(Error::Empty(_))
    ));
    assert!(mixed_norm(&rec, 0.5, 2.0, None).is_err());
}

#[test]
fn single_mode_energy_ratio_is_one() {
    let spec = GridSpec::periodic(3, 16).unwrap();
    let f = Field::from_fn(&spec, |x| Complex64::from_polar(1.0, 2.0 * x[0] - x[2]));
    let triple = AdmissibleTriple::from_exponents(3, r(0, 1), None, Some(2)).unwrap();
    let mut cfg = StrichartzConfig::new(
        TimeGrid::two_sided(1.0, 16).unwrap(),
        BoundaryCondition::Free,
    );
    cfg.check_wrap = false;
    let rep = strichartz_ratio(&[("mode".into(), f)], &triple, &cfg).unwrap();
    assert!((rep.sup_ratio - 1.0).abs() < 1e-12);
}

/// `g(y1 - c) - g(y1 + c)` (odd) or `+` (even) built from the closed form,
/// kept on `[0, L1/2]` and zero beyond.
fn mirrored_gaussian(spec: &GridSpec, c: f64, w: f64, sign: f64, half_only: bool) -> Field {
    let l = spec.box_len().to_vec();
    Field::from_real_fn(spec, move |x| {
        if half_only && x[0] > 0.5 * l[0] {
            return 0.0;
        }
        let d = |y: f64, c: f64| {
            let mut v = (y - c).rem_euclid(l[0]);
            if v > 0.5 * l[0] {
                v -= l[0];
            }
            v
        };
        let t = x[1] - 0.5 * l[1];
        let g = |y: f64| (-0.5 * (y * y + t * t) / (w * w)).exp();
        g(d(x[0], c)) + sign * g(d(x[0], -c))
    })
}

#[test]
fn half_space_ratio_is_the_reflected_ratio_rescaled() {
    let spec = GridSpec::new(vec![128, 64], vec![16.0, 8.0]).unwrap();
    let triple = AdmissibleTriple::from_exponents(2, r(0, 1), Some(4), Some(4)).unwrap();
    let grid = TimeGrid::two_sided(0.5, 32).unwrap();
    for (bc, sign) in [
        (BoundaryCondition::Dirichlet, -1.0),
        (BoundaryCondition::Neumann, 1.0),
    ] {
        let data = mirrored_gaussian(&spec, 2.0, 0.5, sign, true);
        let full = mirrored_gaussian(&spec, 2.0, 0.5, sign, false);
        let mut cfg = StrichartzConfig::new(grid.clone(), bc);
        cfg.check_wrap = false;
        let rep = strichartz_ratio(&[("g".into(), data)], &triple, &cfg).unwrap();
        assert_eq!(rep.members.len(), 1);
        let rec = free_record(&full, &grid);
        let full_ratio = mixed_norm(&rec, 4.0, 4.0, None).unwrap() / full.norm_l2();
        let expect = 2f64.powf(0.5 - 0.25) * full_ratio;
        assert!(
            (rep.sup_ratio - expect).abs() < 1e-10 * expect,
            "{bc:?}: {} vs {expect}",
            rep.sup_ratio
        );
    }
}

#[test]
fn wrapping_members_are_dropped() {
    let spec = GridSpec::cube(2, 128, 32.0).unwrap();
    let triple = AdmissibleTriple::from_exponents(2, r(0, 1), Some(4), Some(4)).unwrap();
    let narrow = gaussian_packet(&spec, &[16.0, 16.0], 0.7, &[0.0, 0.0]);
    let fast = gaussian_packet(&spec, &[16.0, 16.0], 0.7, &[8.0, 0.0]);
    let cfg = StrichartzConfig::new(
        TimeGrid::two_sided(0.5, 16).unwrap(),
        BoundaryCondition::Free,
    );
    let rep = strichartz_ratio(
        &[("narrow".into(), narrow), ("fast".into(), fast)],
        &triple,
        &cfg,
    )
    .unwrap();
    assert_eq!(rep.members.len(), 1);
    assert_eq!(rep.metadata["wrap_dropped"][0]["label"], "fast");

    let wrong = AdmissibleTriple::from_exponents(3, r(0, 1), Some(2), Some(6)).unwrap();
    assert!(strichartz_ratio(&[("x".into(), Field::zeros(&spec))], &wrong, &cfg).is_err());
}

#[test]
fn scaling_sweep_is_flat_for_admissible_exponents() {
    let sweep = ScalingSweep {
        size: 32,
        box_len: 24.0,
        t_max: 0.5,
        steps: 16,
        width: 1.0,
    };
    let triple = AdmissibleTriple::from_exponents(2, r(0, 1), Some(4), Some(4)).unwrap();
    let rep = strichartz_scaling(&sweep, &[0.5, 1.0, 2.0], &triple).unwrap();
    assert_eq!(rep.members.len(), 3);
    assert!(rep.spread() < 1e-10, "spread {}", rep.spread());
}

/// `||g||_{H^sigma}` of the Dirichlet Laplacian on `[0, pi] x T`, from a
/// direct sine transform in `y1` and a direct DFT in `y2`.
fn dirichlet_sobolev(g: &Field, sigma: f64) -> f64 {
    let spec = g.spec();
    let (n1, n2) = (spec.sizes()[0], spec.sizes()[1]);
    let m = n1 / 2;
    let h = PI / m as f64;
    let mut total = 0.0;
    for mode in 1..m {
        let b: Vec<Complex64> = (0..n2)
            .map(|j| {
                (1..m)
                    .map(|i| g.values()[i * n2 + j] * (mode as f64 * i as f64 * h).sin())
                    .sum::<Complex64>()
                    * (2.0 / PI * h)
            })
            .collect();
        for k in -(n2 as i64 / 2)..(n2 as i64 / 2) {
            let c: Complex64 = b
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    v * Complex64::from_polar(1.0, -(k as f64) * 2.0 * PI * j as f64 / n2 as f64)
                })
                .sum::<Complex64>()
                / n2 as f64;
            let lam = 1.0 + (mode * mode) as f64 + (k * k) as f64;
            total += lam.powf(sigma) * c.norm_sqr();
        }
    }
    (total * PI * PI).sqrt()
}

fn half_mode(spec: &GridSpec, m: f64) -> Field {
    splab::extension::HalfField::from_real_fn(spec, PI, move |x| (m * x[0]).sin() * x[1].cos())
        .unwrap()
        .into_field()
}

fn smoothing_cfg(t: f64, steps: usize) -> SmoothingConfig {
    SmoothingConfig {
        time: TimeGrid::two_sided(t, steps).unwrap(),
        bc: BoundaryCondition::Dirichlet,
    }
}

#[test]
fn smoothing_mode_matches_sine_series() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let chi = splab::families::compact_bump(&spec, &[0.0, PI], 1.5);
    let f = half_mode(&spec, 3.0);
    let t = 0.7;
    for s in [0.0, 0.5, 1.0] {
        let rep =
            smoothing_ratio(&[("m3".into(), f.clone())], &chi, s, &smoothing_cfg(t, 16)).unwrap();
        let rhs = (11f64).powf(0.5 * s) * PI / 2f64.sqrt();
        let chi_f = chi.mul(&f);
        let lhs = (2.0 * t).sqrt() * dirichlet_sobolev(&chi_f, s + 0.5);
        let m = &rep.members[0];
        assert!(
            (m.rhs - rhs).abs() < 1e-10 * rhs,
            "s={s} rhs {} vs {rhs}",
            m.rhs
        );
        assert!(
            (m.lhs - lhs).abs() < 1e-10 * lhs,
            "s={s} lhs {} vs {lhs}",
            m.lhs
        );
    }
}

#[test]
fn smoothing_trivial_cutoff_and_rejections() {
    let spec = GridSpec::periodic(2, 32).unwrap();
    let f = half_mode(&spec, 2.0);
    let rep = smoothing_ratio(
        &[("z".into(), f.clone())],
        &Field::zeros(&spec),
        0.0,
        &smoothing_cfg(0.5, 16),
    )
    .unwrap();
    assert_eq!(rep.sup_ratio, 0.0);
    assert_eq!(rep.members[0].lhs, 0.0);

    let wall = splab::families::compact_bump(&spec, &[PI - 0.2, PI], 0.6);
    let err = smoothing_ratio(
        &[("w".into(), f.clone())],
        &wall,
        0.0,
        &smoothing_cfg(0.5, 16),
    );
    assert!(matches!(err, Err(Error::CutoffNotCompact(_))));
    let seam = splab::families::compact_bump(&spec, &[1.0, 0.1], 0.6);
    assert!(matches!(
        smoothing_ratio(
            &[("s".into(), f.clone())],
            &seam,
            0.0,
            &smoothing_cfg(0.5, 16)
        ),
        Err(Error::CutoffNotCompact(_))
    ));
    let chi = splab::families::compact_bump(&spec, &[0.0, PI], 1.5);
    assert!(smoothing_ratio(&[("f".into(), f)], &chi, 1.5, &smoothing_cfg(0.5, 16)).is_err());
}

#[test]
fn inhomogeneous_smoothing_matches_manufactured_solution() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let chi = splab::families::compact_bump(&spec, &[0.0, PI], 1.5);
    let psi = half_mode(&spec, 2.0);
    let full = Field::from_real_fn(&spec, |x| (2.0 * x[0]).sin() * x[1].cos());
    let phi = chi.mul(&full);
    let t_max = 0.5;
    let steps = 256;
    let cfg = smoothing_cfg(t_max, steps);
    let forcing = move |t: f64| Ok(psi.scale_complex(Complex64::from_polar(1.0, t)));
    let s = 0.5;
    let rep =
        smoothing_ratio_inhomogeneous(vec![("e^it".to_string(), forcing)], &chi, s, &cfg).unwrap();

    let times = cfg.time.instants();
    let w = trapezoid_weights(&times);
    let lhs2: f64 = times
        .iter()
        .zip(&w)
        .map(|(&t, &w)| {
            w * dirichlet_sobolev(&chi.mul(&common::manufactured_duhamel(&phi, t)), s + 1.0).powi(2)
        })
        .sum();
    let rhs = (2.0 * t_max).sqrt() * dirichlet_sobolev(&phi, s);
    let m = &rep.members[0];
    assert!((m.rhs - rhs).abs() < 1e-10 * rhs, "rhs {} vs {rhs}", m.rhs);
    assert!(
        (m.lhs - lhs2.sqrt()).abs() < 1e-4 * m.lhs,
        "lhs {} vs {}",
        m.lhs,
        lhs2.sqrt()
    );
    assert!(smoothing_ratio_inhomogeneous(
        vec![("x".to_string(), |_t: f64| Ok(Field::zeros(&spec)))],
        &chi,
        -1.5,
        &cfg
    )
    .is_err());
}

#[test]
fn mode_sweep_scales_like_half_derivative() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let chi = splab::families::compact_bump(&spec, &[0.0, PI], 1.5);
    let rep = smoothing_frequency_sweep(
        &spec,
        &chi,
        0.0,
        &smoothing_cfg(0.5, 16),
        &[1, 2, 3, 4],
        SweepData::Mode,
    )
    .unwrap();
    assert_eq!(rep.members.len(), 4);
    let dev = rep.metadata["max_deviation"].as_f64().unwrap();
    assert!(dev < 0.2, "deviation {dev}");
}

fn ss_cfg(t: f64, steps: usize) -> StrichartzSmoothingConfig {
    StrichartzSmoothingConfig {
        time: TimeGrid::two_sided(t, steps).unwrap(),
        center: vec![PI, PI],
    }
}

fn plane_pair() -> AdmissibleTriple {
    AdmissibleTriple::from_exponents(2, r(0, 1), Some(4), Some(4)).unwrap()
}

#[test]
fn strichartz_smoothing_zero_forcing_is_skipped() {
    let spec = GridSpec::periodic(2, 32).unwrap();
    let zero = move |_t: f64| Ok(Field::zeros(&spec));
    let rep = strichartz_smoothing_ratio(
        vec![("zero".to_string(), zero)],
        0.8,
        &plane_pair(),
        &ss_cfg(0.5, 16),
    )
    .unwrap();
    assert!(rep.members.is_empty());
    assert_eq!(rep.skipped, vec!["zero".to_string()]);
}

#[test]
fn strichartz_smoothing_weight_monotonicity() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let bump = splab::families::compact_bump(&spec, &[2.0, 4.0], 1.0).remove_mean();
    let forcing = move |t: f64| Ok(bump.scale((3.0 * t).cos()));
    let reps = strichartz_smoothing_sweep(
        vec![("bump".to_string(), forcing)],
        &[0.6, 0.8, 1.0],
        &plane_pair(),
        &ss_cfg(0.5, 32),
    )
    .unwrap();
    let rhs: Vec<f64> = reps.iter().map(|r| r.members[0].rhs).collect();
    let lhs: Vec<f64> = reps.iter().map(|r| r.members[0].lhs).collect();
    assert!(rhs[0] < rhs[1] && rhs[1] < rhs[2], "{rhs:?}");
    assert!(lhs.iter().all(|&v| v == lhs[0]));
    assert!(reps
        .iter()
        .all(|r| r.sup_ratio.is_finite() && r.sup_ratio > 0.0));

    let spec = GridSpec::periodic(2, 16).unwrap();
    let f = move |_t: f64| Ok(Field::zeros(&spec));
    assert!(strichartz_smoothing_ratio(
        vec![("x".to_string(), f)],
        0.5,
        &plane_pair(),
        &ss_cfg(0.5, 16)
    )
    .is_err());
}

#[test]
fn strichartz_smoothing_matches_manufactured_solution() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let phi = Field::from_real_fn(&spec, |x| (2.0 * x[0]).cos() + (3.0 * x[1]).sin());
    let d_phi = Field::from_real_fn(&spec, |x| {
        (2.0 * x[0]).cos() / 2f64.sqrt() + (3.0 * x[1]).sin() / 3f64.sqrt()
    });
    let (t_max, steps, s0) = (0.5, 256, 0.75);
    let cfg = ss_cfg(t_max, steps);
    let p2 = phi.clone();
    let with_mean = move |t: f64| {
        Ok(p2
            .add(&Field::constant(p2.spec(), Complex64::new(1.0, 0.0)))
            .scale_complex(Complex64::from_polar(1.0, t)))
    };
    let rep = strichartz_smoothing_ratio(
        vec![("manufactured".to_string(), with_mean)],
        s0,
        &plane_pair(),
        &cfg,
    )
    .unwrap();
    assert!((rep.metadata["projected_mean"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let times = cfg.time.instants();
    let w = trapezoid_weights(&times);
    let lhs4: f64 = times
        .iter()
        .zip(&w)
        .map(|(&t, &w)| w * common::manufactured_duhamel(&phi, t).norm_lp(4.0).powi(4))
        .sum();
    let lhs = lhs4.powf(0.25);
    let weight = Field::from_real_fn(&spec, |x| {
        let r2: f64 = x.iter().map(|v| (v - PI).powi(2)).sum();
        (1.0 + r2).powf(0.5 * s0)
    });
    let rhs = (2.0 * t_max).sqrt() * weight.mul(&d_phi).norm_l2();
    let m = &rep.members[0];
    assert!((m.rhs - rhs).abs() < 1e-10 * rhs, "rhs {} vs {rhs}", m.rhs);
    assert!((m.lhs - lhs).abs() < 1e-4 * lhs, "lhs {} vs {lhs}", m.lhs);
}

fn wall_gaussian(spec: &GridSpec, c: [f64; 2], w: f64) -> Field {
    let l = spec.box_len().to_vec();
    Field::from_real_fn(spec, move |x| {
        if x[0] > 0.5 * l[0] {
            return 0.0;
        }
        let g = |y: f64| (-0.5 * ((y - c[0]).powi(2) + (x[1] - c[1]).powi(2)) / (w * w)).exp();
        g(x[0]) - g(-x[0])
    })
}

fn pipeline_cfg(t: f64, steps: usize) -> PipelineConfig {
    PipelineConfig {
        time: TimeGrid::two_sided(t, steps).unwrap(),
        triple: plane_pair(),
        bc: BoundaryCondition::Dirichlet,
    }
}

#[test]
fn pipeline_pieces_are_consistent() {
    use splab::geometry::{build_partition, Boundary, PartitionConfig};
    let spec = GridSpec::periodic(2, 128).unwrap();
    let part = build_partition(&Boundary::FlatLine, &spec, &PartitionConfig::new(3.0, 2)).unwrap();
    let charts = PipelineCharts::from_partition(&part);
    let cfg = pipeline_cfg(0.25, 128);
    let family: Vec<(String, Field)> = [(0.8, PI, 0.4), (0.6, 2.0, 0.35), (1.0, 4.5, 0.45)]
        .iter()
        .map(|&(a, b, w)| (format!("g{a}"), wall_gaussian(&spec, [a, b], w)))
        .collect();
    let run = endpoint_pipeline(&family, &charts, &cfg).unwrap();
    assert_eq!(run.endpoint.members.len(), 6);
    assert!(
        run.collar_residual < 1e-10,
        "collar {}",
        run.collar_residual
    );
    assert!(run.max_two_form < 1e-2, "two forms {}", run.max_two_form);
    assert!(
        run.max_duhamel_residual < 2e-3,
        "duhamel {}",
        run.max_duhamel_residual
    );

    // triangle inequality through the representation chi u = e^{it Delta} chi f + I + II
    let mut scfg = StrichartzConfig::new(cfg.time.clone(), BoundaryCondition::Dirichlet);
    scfg.check_wrap = false;
    for c in &run.charts {
        let f = &family.iter().find(|m| m.0 == c.member).unwrap().1;
        let local = part.chi[c.chart].mul(f);
        let free = strichartz_ratio(&[("x".into(), local)], &plane_pair(), &scfg)
            .unwrap()
            .members[0]
            .lhs;
        assert!(
            c.endpoint <= (free + c.term_i + c.term_ii) * (1.0 + 1e-3),
            "{c:?}"
        );
        assert!(c.term_i > 0.0 && c.term_ii > 0.0);
    }
}

#[test]
fn pipeline_with_one_flat_chart_is_plain_strichartz() {
    let spec = GridSpec::periodic(2, 128).unwrap();
    let l = spec.box_len()[0];
    let ramp = |r: f64| {
        let s = ((r - 2.2) / 0.8).clamp(0.0, 1.0);
        if s <= 0.0 {
            1.0
        } else if s >= 1.0 {
            0.0
        } else {
            let a = (-1.0 / (1.0 - s)).exp();
            let b = (-1.0 / s).exp();
            a / (a + b)
        }
    };
    let chi = Field::from_real_fn(&spec, move |x| ramp(x[0].min(l - x[0])));
    let charts = PipelineCharts::single(chi);
    let cfg = pipeline_cfg(0.01, 16);
    let f = wall_gaussian(&spec, [0.5, PI], 0.15);
    let run = endpoint_pipeline(&[("g".into(), f.clone())], &charts, &cfg).unwrap();
    let mut scfg = StrichartzConfig::new(cfg.time.clone(), BoundaryCondition::Dirichlet);
    scfg.check_wrap = false;
    let plain = strichartz_ratio(&[("g".into(), f)], &plane_pair(), &scfg).unwrap();
    let (a, b) = (run.endpoint.sup_ratio, plain.sup_ratio);
    assert!((a - b).abs() < 1e-8 * b, "{a} vs {b}");
    assert!(
        run.term_i.sup_ratio < 1e-5 && run.term_ii.sup_ratio < 1e-5,
        "{} {}",
        run.term_i.sup_ratio,
        run.term_ii.sup_ratio
    );
    assert!(run.collar_residual < 1e-12);
}

#[test]
fn pipeline_rejects_free_boundary() {
    let spec = GridSpec::periodic(2, 32).unwrap();
    let charts = PipelineCharts::single(Field::zeros(&spec));
    let mut cfg = pipeline_cfg(0.1, 16);
    cfg.bc = BoundaryCondition::Free;
    let f = wall_gaussian(&spec, [0.8, PI], 0.3);
    assert!(endpoint_pipeline(&[("g".into(), f)], &charts, &cfg).is_err());
    assert!(endpoint_pipeline(&[], &charts, &pipeline_cfg(0.1, 16)).is_err());
}
