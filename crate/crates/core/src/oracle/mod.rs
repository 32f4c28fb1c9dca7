//! Independent floating-point checks: reduced forms, j-invariants, Hilbert
//! class polynomials, resultants, the exponential integral and L-values at
//! `s = 0`.

mod bigfloat;
mod classpoly;
mod complex;
mod forms;
mod jfunc;
mod lfunc;
mod resultant;
mod singular;

pub mod special;

pub use bigfloat::BigFloat;
pub use classpoly::{default_precision, hilbert_class_poly, hilbert_class_poly_auto, ClassPolynomial};
pub use complex::BigComplex;
pub use forms::{class_number, class_reps, ReducedForm};
pub use jfunc::{j_coefficients, j_evaluation, j_value, JEvaluation};
pub use lfunc::{lambda_at_zero, LambdaAtZero};
pub use resultant::{resultant, sylvester_resultant, IntPoly};
pub use singular::{hecke_two_check, singular_moduli_check, HeckeTwoReport, SingularModuliReport};

pub use special::{e1, e1_quadrature, ln_gamma};
