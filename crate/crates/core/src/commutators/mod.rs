//! Fractional commutators and the tools around them: `[D^s, f]`,
//! `[R_j, f]`, the weighted half-gradient commutator with its two-term
//! splitting, the principal-value form of `D^s`, sampled Lipschitz norms and
//! the K-functional.

mod exponents;
mod kfunctional;
mod lipschitz;
mod operators;
mod singular;

pub use exponents::CommutatorExponents;
pub use kfunctional::{k_functional, KFunctional, CUTOFFS};
pub use lipschitz::lipschitz_norm;
pub use operators::{
    alias_excess, alias_warning, commutator_ds, commutator_riesz, commutator_weight_grad,
    riesz_commutator_ratio, weight_grad_ratio, RieszSweep, WeightGradCommutator,
};
pub use singular::{
    normalization_constant, normalization_quadrature, singular_integral_ds, SingularKernelConfig,
};
