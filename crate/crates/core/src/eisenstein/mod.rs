//! Local Whittaker data at `s = 0`, the Fourier coefficients of the central
//! derivative `E*'(tau, 0)` and the Arakelov degrees of the CM cycles.
//!
//! Holomorphic coefficients are exact [`LogLinear`](crate::arith::LogLinear)
//! values and the factor `q^alpha` is left implicit. Mixed-signature and
//! constant terms depend on `v1, v2` and are returned as [`BigFloat`]s.
//!
//! [`BigFloat`]: crate::oracle::BigFloat

mod coefficients;
mod degree;
mod whittaker;

pub use coefficients::{
    a_alpha, a_alpha_mixed, a_zero, assemble_coefficient, assemble_incoherent_derivative, coherent_coefficient,
    identity_check_lem311, IdentityCheck,
};
pub use degree::{deg_t_m, deg_t_m_paths, deg_x_alpha, CoefficientReport};
pub use whittaker::{whittaker_arch, whittaker_finite, Section, WhittakerData, WhittakerDerivative, WhittakerPlace};
