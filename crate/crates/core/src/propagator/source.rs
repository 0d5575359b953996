//! The commutator `[chi, Delta] u` in its two algebraic forms.

use crate::error::Result;
use crate::spectral::multiplier::{derivative, laplacian};
use crate::spectral::Field;

#[derive(Clone, Debug)]
pub struct CommutatorSource {
    /// `-(Delta chi) u - 2 grad chi . grad u`.
    pub form_a: Field,
    /// `(Delta chi) u - 2 div((grad chi) u)`.
    pub form_b: Field,
}

impl CommutatorSource {
    /// Max-norm disagreement between the two forms.
    pub fn discrepancy(&self) -> f64 {
        self.form_a.max_abs_diff(&self.form_b)
    }
}

/// Both forms with spectral derivatives of `chi`.
pub fn commutator_source(u: &Field, chi: &Field) -> Result<CommutatorSource> {
    u.spec().check_same(chi.spec())?;
    let grad: Vec<Field> = (0..chi.spec().dim()).map(|a| derivative(chi, a)).collect();
    commutator_source_with(u, &grad, &laplacian(chi))
}

/// Both forms with supplied `grad chi` and `Delta chi`.
pub fn commutator_source_with(
    u: &Field,
    grad_chi: &[Field],
    lap_chi: &Field,
) -> Result<CommutatorSource> {
    u.spec().check_same(lap_chi.spec())?;
    let lu = lap_chi.mul(u);
    let mut a = lu.scale(-1.0);
    let mut div = Field::zeros(u.spec());
    for (axis, g) in grad_chi.iter().enumerate() {
        u.spec().check_same(g.spec())?;
        a = a.sub(&g.mul(&derivative(u, axis)).scale(2.0));
        div = div.add(&derivative(&g.mul(u), axis));
    }
    let b = lu.sub(&div.scale(2.0));
    Ok(CommutatorSource {
        form_a: a,
        form_b: b,
    })
}
