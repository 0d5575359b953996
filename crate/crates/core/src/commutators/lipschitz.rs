//! Sampled Hölder seminorm `sup |f(x) - f(y)| / |x - y|^alpha`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::Field;

const RANDOM_OFFSETS: usize = 1000;
const SEED: u64 = 0x4c69_7073;

/// Lattice offsets: powers of two along each axis up to a quarter period,
/// then 1000 seeded random offsets. Every offset is applied at every node,
/// so the sample is invariant under grid translations.
fn offsets(sizes: &[usize]) -> Vec<Vec<i64>> {
    let n = sizes.len();
    let mut out = Vec::new();
    for a in 0..n {
        let mut m = 1usize;
        while m <= sizes[a] / 4 {
            let mut o = vec![0i64; n];
            o[a] = m as i64;
            out.push(o);
            m *= 2;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let axis = out.len();
    while out.len() < axis + RANDOM_OFFSETS {
        let o: Vec<i64> = sizes
            .iter()
            .map(|&s| rng.gen_range(-(s as i64) / 2..(s as i64) / 2))
            .collect();
        if o.iter().any(|&v| v != 0) {
            out.push(o);
        }
    }
    out
}

/// A lower bound for `||f||_{Lip alpha}` that grows as the grid refines.
pub fn lipschitz_norm(f: &Field, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::OutOfRange {
            what: "Lipschitz exponent alpha",
            value: alpha,
            range: "(0, 1]",
        });
    }
    let spec = f.spec();
    let sizes = spec.sizes();
    let n = spec.dim();
    let h: Vec<f64> = (0..n).map(|a| spec.spacing(a)).collect();
    let v = f.values();
    let mut idx = vec![0; n];
    let mut best: f64 = 0.0;
    for o in offsets(sizes) {
        let dist = o
            .iter()
            .zip(&h)
            .map(|(&m, &d)| (m as f64 * d).powi(2))
            .sum::<f64>()
            .sqrt();
        let scale = dist.powf(-alpha);
        let mut top: f64 = 0.0;
        for (flat, x) in v.iter().enumerate() {
            spec.multi_index(flat, &mut idx);
            let other = idx
                .iter()
                .zip(&o)
                .zip(sizes)
                .fold(0usize, |acc, ((&i, &m), &s)| {
                    acc * s + (i as i64 + m).rem_euclid(s as i64) as usize
                });
            top = top.max((v[other] - x).norm());
        }
        best = best.max(top * scale);
    }
    Ok(best)
}
