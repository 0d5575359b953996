//! Deterministic test-data families: random band-limited fields, Gaussian
//! packets and localized bumps.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::spectral::fft;
use crate::spectral::norms::periodic_offset;
use crate::spectral::{Field, GridSpec};

/// Real field whose Fourier support lies in `max_j |k_j| <= band` (lattice
/// index units), with Gaussian random coefficients.
pub fn random_bandlimited<R: Rng>(spec: &GridSpec, band: usize, rng: &mut R) -> Field {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); spec.len()];
    let mut idx = vec![0; spec.dim()];
    for (flat, c) in coeffs.iter_mut().enumerate() {
        spec.multi_index(flat, &mut idx);
        let inside = idx.iter().enumerate().all(|(a, &i)| {
            !spec.is_nyquist(a, i) && spec.signed_index(a, i).unsigned_abs() as usize <= band
        });
        if inside {
            *c = Complex64::new(gauss(rng), gauss(rng));
        }
    }
    let f = fft::inverse(spec, coeffs).real_part();
    let scale = f.max_abs();
    if scale > 0.0 {
        f.scale(1.0 / scale)
    } else {
        f
    }
}

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    // Box–Muller
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

/// Gaussian packet `exp(-|x-c|^2 / (2 w^2) + i k.x)` with periodic
/// minimal-image distance, coordinates on `[0, L)`.
pub fn gaussian_packet(spec: &GridSpec, center: &[f64], width: f64, momentum: &[f64]) -> Field {
    let lens = spec.box_len().to_vec();
    let center = center.to_vec();
    let momentum = momentum.to_vec();
    Field::from_fn(spec, move |x| {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for a in 0..x.len() {
            let d = periodic_offset(x[a], center[a], lens[a]);
            r2 += d * d;
            phase += momentum[a] * d;
        }
        Complex64::from_polar((-0.5 * r2 / (width * width)).exp(), phase)
    })
}

/// Compactly supported radial bump `exp(-1/(1-(r/R)^2))`.
pub fn compact_bump(spec: &GridSpec, center: &[f64], radius: f64) -> Field {
    let lens = spec.box_len().to_vec();
    let center = center.to_vec();
    Field::from_real_fn(spec, move |x| {
        let r2: f64 = (0..x.len())
            .map(|a| periodic_offset(x[a], center[a], lens[a]).powi(2))
            .sum();
        crate::spectral::dyadic::smooth_bump(r2.sqrt() / radius)
    })
}

/// Zeroes every node with `y1 >= cut` (axis 0), leaving `[0, cut)`.
pub fn truncate_y1(f: &Field, cut: f64) -> Field {
    let spec = f.spec().clone();
    let stride = spec.stride(0);
    let h = spec.spacing(0);
    let mut out = f.clone();
    for (i, v) in out.values_mut().iter_mut().enumerate() {
        if (i / stride) as f64 * h >= cut {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    out
}

/// Gaussians with widths spread geometrically over `[w_min, w_max]`, placed
/// at shifted centers; every other member adds a weaker copy shifted by one width.
pub fn gaussian_family(
    spec: &GridSpec,
    count: usize,
    w_min: f64,
    w_max: f64,
) -> Vec<(String, Field)> {
    let dim = spec.dim();
    let lens = spec.box_len().to_vec();
    let zero = vec![0.0; dim];
    (0..count)
        .map(|m| {
            let t = if count > 1 {
                m as f64 / (count - 1) as f64
            } else {
                0.0
            };
            let w = w_min * (w_max / w_min).powf(t);
            let shift = (m % 4) as f64 / 32.0 - 3.0 / 64.0;
            let center: Vec<f64> = lens.iter().map(|l| l * (0.5 + shift)).collect();
            let mut f = gaussian_packet(spec, &center, w, &zero);
            let mut label = format!("gauss-w{w:.3}");
            if m % 2 == 1 {
                let mut other = center.clone();
                other[0] += w;
                f = f.add(&gaussian_packet(spec, &other, w, &zero).scale(0.7));
                label = format!("pair-w{w:.3}");
            }
            (label, f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bandlimited_has_compact_spectrum() {
        let g = GridSpec::periodic(2, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_bandlimited(&g, 5, &mut rng);
        assert!(f.values().iter().all(|v| v.im.abs() < 1e-15));
        let c = fft::forward(&f);
        let mut idx = [0; 2];
        for (flat, v) in c.iter().enumerate() {
            g.multi_index(flat, &mut idx);
            let m = (0..2)
                .map(|a| g.signed_index(a, idx[a]).abs())
                .max()
                .unwrap();
            if m > 5 {
                assert!(v.norm() < 1e-10);
            }
        }
    }
}
