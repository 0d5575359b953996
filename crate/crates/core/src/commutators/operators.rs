//! `[D^s, f]`, `[R_j, f]` and `[<x>^a, D^{-1/2} grad]`, all applied
//! spectrally on the torus.

use serde::Serialize;

use super::exponents::CommutatorExponents;
use super::lipschitz::lipschitz_norm;
use crate::error::{Error, Result};
use crate::estimates::RatioReport;
use crate::spectral::multiplier::{frac_laplacian, riesz, FourierMultiplier};
use crate::spectral::norms::{vector_magnitude, weight_field};
use crate::spectral::{fft, Field};

/// `D^s (f g) - f D^s g` for `s` in `(0, 1)`.
pub fn commutator_ds(f: &Field, g: &Field, s: f64) -> Result<Field> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::OutOfRange {
            what: "commutator order s",
            value: s,
            range: "(0, 1)",
        });
    }
    f.spec().check_same(g.spec())?;
    Ok(frac_laplacian(&f.mul(g), s).sub(&f.mul(&frac_laplacian(g, s))))
}

/// `R_j (f g) - f R_j g`.
pub fn commutator_riesz(f: &Field, g: &Field, j: usize) -> Result<Field> {
    f.spec().check_same(g.spec())?;
    Ok(riesz(&f.mul(g), j)?.sub(&f.mul(&riesz(g, j)?)))
}

/// Largest share of spectral energy (of `f` or `g`) outside the 2/3 band,
/// i.e. on modes whose index exceeds `N/3` on some axis. Products of fields
/// with no such energy alias only onto the discarded modes.
pub fn alias_excess(f: &Field, g: &Field) -> f64 {
    let share = |h: &Field| {
        let spec = h.spec();
        let hat = fft::forward(h);
        let mut idx = vec![0; spec.dim()];
        let (mut out, mut total) = (0.0, 0.0);
        for (flat, c) in hat.iter().enumerate() {
            spec.multi_index(flat, &mut idx);
            let e = c.norm_sqr();
            total += e;
            let far = idx.iter().enumerate().any(|(a, &i)| {
                3 * spec.signed_index(a, i).unsigned_abs() as usize > spec.sizes()[a]
            });
            if far {
                out += e;
            }
        }
        if total > 0.0 {
            out / total
        } else {
            0.0
        }
    };
    share(f).max(share(g))
}

/// Warning text when [`alias_excess`] is above `tol`.
pub fn alias_warning(f: &Field, g: &Field, tol: f64) -> Option<String> {
    let e = alias_excess(f, g);
    (e > tol)
        .then(|| format!("{e:.3e} of the spectral energy lies beyond the 2/3 band; products alias"))
}

/// `[<x - c>^a, D^{-1/2} partial_j] f` computed directly and through
/// `D^{-1/2} partial_j = -R_j D^{1/2}`:
/// `-[<x>^a, R_j] D^{1/2} f - R_j [<x>^a, D^{1/2}] f`.
#[derive(Clone, Debug)]
pub struct WeightGradCommutator {
    pub direct: Vec<Field>,
    pub riesz_term: Vec<Field>,
    pub frac_term: Vec<Field>,
    /// `max_j max |direct - riesz_term - frac_term|`, relative to
    /// `max_j max |direct|` when that is nonzero.
    pub identity_residual: f64,
    /// `1/2 < a <= 1`.
    pub in_hypothesis: bool,
}

pub fn commutator_weight_grad(f: &Field, a: f64, center: &[f64]) -> Result<WeightGradCommutator> {
    let spec = f.spec();
    if center.len() != spec.dim() {
        return Err(Error::GridMismatch(
            "weight center has the wrong dimension".into(),
        ));
    }
    let w = weight_field(spec, a, center);
    let wf = w.mul(f);
    let d = frac_laplacian(f, 0.5);
    let wd = w.mul(&d);
    let frac_comm = wd.sub(&frac_laplacian(&wf, 0.5));
    let mut out = WeightGradCommutator {
        direct: Vec::new(),
        riesz_term: Vec::new(),
        frac_term: Vec::new(),
        identity_residual: 0.0,
        in_hypothesis: a > 0.5 && a <= 1.0,
    };
    let (mut gap, mut top) = (0.0f64, 0.0f64);
    for j in 0..spec.dim() {
        let h = FourierMultiplier::half_gradient(j);
        let direct = w.mul(&h.apply(f)?).sub(&h.apply(&wf)?);
        let riesz_term = w.mul(&riesz(&d, j)?).sub(&riesz(&wd, j)?).scale(-1.0);
        let frac_term = riesz(&frac_comm, j)?.scale(-1.0);
        gap = gap.max(direct.max_abs_diff(&riesz_term.add(&frac_term)));
        top = top.max(direct.max_abs());
        out.direct.push(direct);
        out.riesz_term.push(riesz_term);
        out.frac_term.push(frac_term);
    }
    out.identity_residual = if top > 0.0 { gap / top } else { gap };
    Ok(out)
}

/// `||[<x>^a, D^{-1/2} grad] f||_q` against
/// `||D^{1/2}(<x>^{a0} f)||_q + ||f||_p + ||f||_{p0}`. Members have their
/// mean removed first. Metadata `weighted_step` holds
/// `||D^{1/2} f||_r / ||<x>^{a0} D^{1/2} f||_q` per member; it depends on the
/// box and is reported, not bounded.
pub fn weight_grad_ratio(
    family: &[(String, Field)],
    exps: &CommutatorExponents,
    center: &[f64],
) -> Result<RatioReport> {
    if family.is_empty() {
        return Err(Error::Empty("weighted commutator family"));
    }
    let spec = family[0].1.spec();
    if exps.n() as usize != spec.dim() {
        return Err(Error::InvalidExponents(format!(
            "exponents are for n = {}, grid has dimension {}",
            exps.n(),
            spec.dim()
        )));
    }
    let (a, a0) = (exps.a_f64(), exps.a0_f64());
    let w0 = weight_field(spec, a0, center);
    let mut report = RatioReport::new("weighted half-gradient commutator", "mean-zero bumps");
    let mut steps = Vec::new();
    let mut residual: f64 = 0.0;
    for (label, f) in family {
        spec.check_same(f.spec())?;
        let f = f.remove_mean();
        let c = commutator_weight_grad(&f, a, center)?;
        residual = residual.max(c.identity_residual);
        let lhs = vector_magnitude(&c.direct).norm_lp(exps.q());
        let rhs = frac_laplacian(&w0.mul(&f), 0.5).norm_lp(exps.q())
            + f.norm_lp(exps.p())
            + f.norm_lp(exps.p0());
        report.push(label.clone(), lhs, rhs)?;
        let d = frac_laplacian(&f, 0.5);
        let den = w0.mul(&d).norm_lp(exps.q());
        steps.push(if den > 0.0 {
            d.norm_lp(exps.r()) / den
        } else {
            0.0
        });
    }
    report.set_meta("exponents", exps);
    report.set_meta("center", center);
    report.set_meta("identity_residual", residual);
    report.set_meta("weighted_step", &steps);
    Ok(report)
}

/// Exponent bookkeeping for the Riesz commutator sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RieszSweep {
    pub axis: usize,
    pub alpha: f64,
    pub p: f64,
}

impl RieszSweep {
    /// `1/q = 1/p - alpha/n`, required in `(0, 1/p)`.
    pub fn q(&self, n: usize) -> Result<f64> {
        let inv_q = 1.0 / self.p - self.alpha / n as f64;
        if !(self.alpha > 0.0 && self.alpha <= 1.0) || !(self.p > 1.0) || !(inv_q > 0.0) {
            return Err(Error::InvalidExponents(format!(
                "need 0 < alpha <= 1, 1 < p and 1/p - alpha/n > 0 (alpha = {}, p = {})",
                self.alpha, self.p
            )));
        }
        Ok(1.0 / inv_q)
    }
}

/// `||[R_j, f] g||_q / (||f||_{Lip alpha} ||g||_p)` over `(label, f, g)`.
/// The Lipschitz norm is a sampled lower bound, so ratios err upward.
pub fn riesz_commutator_ratio(
    family: &[(String, Field, Field)],
    sweep: &RieszSweep,
) -> Result<RatioReport> {
    if family.is_empty() {
        return Err(Error::Empty("Riesz commutator family"));
    }
    let n = family[0].1.spec().dim();
    if sweep.axis >= n {
        return Err(Error::OutOfRange {
            what: "Riesz axis",
            value: sweep.axis as f64,
            range: "0..dim",
        });
    }
    let q = sweep.q(n)?;
    let mut report = RatioReport::new("Riesz commutator", "band-limited pairs");
    for (label, f, g) in family {
        let lhs = commutator_riesz(f, g, sweep.axis)?.norm_lp(q);
        let rhs = lipschitz_norm(f, sweep.alpha)? * g.norm_lp(sweep.p);
        report.push(label.clone(), lhs, rhs)?;
    }
    report.set_meta("sweep", sweep);
    report.set_meta("q", q);
    report.set_meta("lipschitz", "sampled lower bound");
    Ok(report)
}
