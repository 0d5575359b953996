mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splab::extension::HalfField;
use splab::families::{gaussian_packet, random_bandlimited};
use splab::propagator::*;
use splab::spectral::multiplier::derivative;
use splab::{Field, GridSpec};

fn half_rows(f: &Field, rows: usize) -> Vec<Complex64> {
    f.values()[..rows * f.spec().stride(0)].to_vec()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn free_evolution_basics() {
    let spec = GridSpec::periodic(2, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = random_bandlimited(&spec, 10, &mut rng);
    assert!(free_evolve(&f, 0.0).max_abs_diff(&f) < 1e-15);
    let wave = Field::from_fn(&spec, |x| {
        Complex64::from_polar(1.0, 2.0 * x[0] + 3.0 * x[1])
    });
    let t = 0.37;
    let expect = wave.scale_complex(Complex64::from_polar(1.0, -13.0 * t));
    assert!(free_evolve(&wave, t).max_abs_diff(&expect) < 1e-12);
}

#[test]
fn gaussian_matches_closed_form() {
    let spec = GridSpec::cube(2, 128, 40.0).unwrap();
    let c = [20.0, 20.0];
    let f = gaussian_packet(&spec, &c, 1.0, &[0.0, 0.0]);
    let t = 0.5;
    let cert = wrap_certificate(
        support_radius(&f, &c, 1e-8),
        effective_band(&f, 1e-16),
        t,
        &spec,
    );
    assert!(cert.valid, "{cert:?}");
    let got = free_evolve(&f, t);
    let exact = common::gaussian_free_solution(&spec, 1.0, t);
    assert!(got.max_abs_diff(&exact) < 1e-6);
}

#[test]
fn sine_and_cosine_modes_evolve_by_phase() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let t = 0.8;
    let g = HalfField::from_real_fn(&spec, PI, |x| x[0].sin() * (2.0 * x[1]).cos()).unwrap();
    let sol = halfspace_evolve(&g, t, BoundaryCondition::Dirichlet).unwrap();
    let expect = g
        .field()
        .scale_complex(Complex64::from_polar(1.0, -5.0 * t));
    assert!(sol.field.max_abs_diff(&expect) < 1e-12);
    let m = spec.stride(0);
    assert!(sol.field.values()[..m].iter().all(|v| v.norm() < 1e-14));

    let g = HalfField::from_real_fn(&spec, PI, |x| x[0].cos() * (2.0 * x[1]).cos()).unwrap();
    let sol = halfspace_evolve(&g, t, BoundaryCondition::Neumann).unwrap();
    let expect = Field::from_real_fn(&spec, |x| x[0].cos() * (2.0 * x[1]).cos())
        .scale_complex(Complex64::from_polar(1.0, -5.0 * t));
    assert!(sol.full.max_abs_diff(&expect) < 1e-12);
    let dn = derivative(&sol.full, 0);
    assert!(dn.values()[..m].iter().all(|v| v.norm() < 1e-9));
}

#[test]
fn image_method_matches_series_oracle() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = HalfField::from_fn(&spec, 2.0, |_| Complex64::new(rng_val(), rng_val())).unwrap();
    let rows = spec.sizes()[0] / 2 + 1;
    for (bc, dir) in [
        (BoundaryCondition::Dirichlet, true),
        (BoundaryCondition::Neumann, false),
    ] {
        for t in [0.1, 0.7, 1.0] {
            let sol = halfspace_evolve(&g, t, bc).unwrap();
            let oracle = common::series_evolve(g.field(), t, dir);
            let e = max_diff(&half_rows(&sol.full, rows), &half_rows(&oracle, rows));
            assert!(e < 1e-10, "{bc:?} t = {t}: {e:e}");
        }
    }
    let _ = rng.gen::<f64>();
}

fn rng_val() -> f64 {
    use std::cell::RefCell;
    thread_local!(static R: RefCell<ChaCha8Rng> = RefCell::new(ChaCha8Rng::seed_from_u64(21)));
    R.with(|r| r.borrow_mut().gen_range(-1.0..1.0))
}

#[test]
fn records_conserve_mass() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let g = HalfField::from_real_fn(&spec, 2.0, |x| {
        let d = x[0] - 1.0;
        (-8.0 * d * d).exp() * (1.0 + x[1].cos())
    })
    .unwrap();
    let grid = TimeGrid::new(1.0, 32).unwrap();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let (rec, _overlap) = halfspace_record(&g, &grid, bc).unwrap();
        assert_eq!(rec.snapshots.len(), 33);
        assert!(rec.mass_drift() < 1e-10, "{bc:?} {}", rec.mass_drift());
    }
    let free = free_record(g.field(), &TimeGrid::two_sided(0.5, 16).unwrap());
    assert_eq!(free.times.len(), 33);
    assert_eq!(free.times[0], -0.5);
    assert!(free.mass_drift() < 1e-12);
    let dir = tempfile::tempdir().unwrap();
    free.write_dir(dir.path()).unwrap();
    let bytes = std::fs::read(dir.path().join("snapshots.bin")).unwrap();
    let back = splab::spectral::io::read_field(&bytes[..]).unwrap();
    assert_eq!(back.values(), free.snapshots[0].values());
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn overlap_warning_near_image_wall() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let g = HalfField::from_real_fn(&spec, PI, |x| {
        let d = x[0] - 2.9;
        (-20.0 * d * d).exp()
    })
    .unwrap();
    let sol = halfspace_evolve(&g, 0.1, BoundaryCondition::Dirichlet).unwrap();
    assert!(sol.warning.is_some());
    assert!(sol.overlap_mass > 1e-3, "{}", sol.overlap_mass);
}

#[test]
fn time_grid_validation() {
    assert!(TimeGrid::new(1.0, 8).is_err());
    assert!(TimeGrid::new(0.0, 32).is_err());
    let g = TimeGrid::two_sided(1.0, 16).unwrap();
    let w: f64 = g.weights().iter().sum();
    assert!((w - 2.0).abs() < 1e-14);
}

#[test]
fn commutator_source_forms() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let one = Field::constant(&spec, Complex64::new(1.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let u = random_bandlimited(&spec, 12, &mut rng);
    let s = commutator_source(&u, &one).unwrap();
    assert!(s.form_a.max_abs() < 1e-12 && s.form_b.max_abs() < 1e-12);

    // chi = exp(cos x1 + cos x2), u = e^{i(2 x1 - x2)}
    let chi = Field::from_real_fn(&spec, |x| (x[0].cos() + x[1].cos()).exp());
    let wave = Field::from_fn(&spec, |x| Complex64::from_polar(1.0, 2.0 * x[0] - x[1]));
    let s = commutator_source(&wave, &chi).unwrap();
    let oracle = Field::from_fn(&spec, |x| {
        let c = (x[0].cos() + x[1].cos()).exp();
        let g1 = -x[0].sin() * c;
        let g2 = -x[1].sin() * c;
        let lap = (x[0].sin().powi(2) - x[0].cos() + x[1].sin().powi(2) - x[1].cos()) * c;
        let e = Complex64::from_polar(1.0, 2.0 * x[0] - x[1]);
        -lap * e - Complex64::new(0.0, 2.0) * (2.0 * g1 - g2) * e
    });
    assert!(s.form_a.max_abs_diff(&oracle) < 1e-9);
    let s = commutator_source(&u, &chi).unwrap();
    assert!(s.discrepancy() < 1e-9);
}

fn phi(spec: &GridSpec) -> Field {
    Field::from_real_fn(spec, |x| {
        let (a, b) = (x[0] - PI, x[1] - PI);
        (-(a * a + b * b)).exp()
    })
}

#[test]
fn duhamel_without_forcing_is_free_flow() {
    let spec = GridSpec::periodic(2, 32).unwrap();
    let f = phi(&spec);
    let grid = TimeGrid::two_sided(0.5, 16).unwrap();
    let rec = duhamel(&spec, &grid, Some(&f), |_| Ok(Field::zeros(&spec))).unwrap();
    for (t, u) in rec.times.iter().zip(&rec.snapshots) {
        assert!(u.max_abs_diff(&free_evolve(&f, *t)) < 1e-12);
    }
}

fn manufactured_error(spec: &GridSpec, steps: usize) -> f64 {
    let p = phi(spec);
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

#[test]
fn duhamel_manufactured_solution_converges_at_second_order() {
    let spec = GridSpec::periodic(2, 64).unwrap();
    let errs: Vec<f64> = [64, 128, 256, 512]
        .iter()
        .map(|&m| manufactured_error(&spec, m))
        .collect();
    eprintln!("{errs:?}");
    assert!(errs[2] <= 5e-3);
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() <= 0.2, "order {order}");
    }
}

#[test]
fn duhamel_residual_and_backward_run() {
    let spec = GridSpec::periodic(2, 32).unwrap();
    let p = phi(&spec);
    let grid = TimeGrid::new(1.0, 256).unwrap();
    let forcing = |t: f64| Ok(p.scale_complex(Complex64::from_polar(1.0, t)));
    let rec = duhamel(&spec, &grid, None, forcing).unwrap();
    let r = duhamel_residual(&rec, forcing).unwrap();
    assert!(r <= 5e-3, "{r}");
    let back = duhamel_backward(rec.snapshots.last().unwrap(), &grid, forcing).unwrap();
    assert!(
        back.norm_l2() <= 1e-10 * rec.snapshots.last().unwrap().norm_l2(),
        "{}",
        back.norm_l2()
    );
    let bad = |_t: f64| Ok(Field::constant(&spec, Complex64::new(f64::NAN, 0.0)));
    assert!(duhamel(&spec, &grid, None, bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn free_flow_is_unitary_group(seed in 0u64..500, t in -2.0f64..2.0, s in -2.0f64..2.0) {
        let spec = GridSpec::periodic(2, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_bandlimited(&spec, 7, &mut rng);
        let a = free_evolve(&free_evolve(&f, t), s);
        let b = free_evolve(&f, t + s);
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
        prop_assert!((free_evolve(&f, t).norm_l2() - f.norm_l2()).abs() < 1e-12 * f.norm_l2());
    }
}
