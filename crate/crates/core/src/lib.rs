//! Exact arithmetic for the central derivative of Hecke's weight-one Hilbert
//! Eisenstein series over F = Q(sqrt(d1 d2)), the Arakelov degrees of the
//! matching CM moduli stacks, and a floating-point singular-moduli oracle that
//! checks both.
//!
//! Layout:
//!
//! * [`arith`]: integers, rationals, symbols, factorization and the
//!   [`LogLinear`](arith::LogLinear) value type `sum c_p log p`.
//! * [`field`]: the real quadratic field F, its prime ideals, valuations, the
//!   different and trace slices.
//! * [`genus`]: the Hecke character of K/F, `Diff(alpha)`, `rho` and `f_p`.
//! * [`eisenstein`]: local Whittaker data, Fourier coefficients and degrees.
//! * [`oracle`]: reduced forms, j-invariants, class polynomials, resultants,
//!   special functions and L-values in arbitrary precision.
//! * [`record`] and [`verify`]: serialization and the invariant harness behind
//!   the `cmeis` binary.

pub mod arith;
pub mod eisenstein;
pub mod error;
pub mod field;
pub mod genus;
pub mod oracle;
pub mod record;
pub mod verify;

pub use error::{Error, Result};
