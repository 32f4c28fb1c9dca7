use super::special::ln_gamma;
use super::BigFloat;
use crate::arith::{is_fundamental_discriminant, kronecker_i64};
use crate::{Error, Result};

/// `L(0, chi_d)`, `L'(0, chi_d)` and the completed values
/// `Lambda(s) = |d|^(s/2) Gamma_R(s + 1) L(s, chi_d)` at `s = 0`.
#[derive(Clone, Debug)]
pub struct LambdaAtZero {
    pub l_value: BigFloat,
    pub l_derivative: BigFloat,
    pub value: BigFloat,
    pub derivative: BigFloat,
}

pub fn lambda_at_zero(d: i64, precision: u32) -> Result<LambdaAtZero> {
    if d >= 0 || !is_fundamental_discriminant(d) {
        return Err(Error::InvalidSetup(format!("{d} is not a negative fundamental discriminant")));
    }
    let w = precision + 32;
    let n = -d;
    let nf = BigFloat::from_i64(n, w);
    let half = BigFloat::one(w).ldexp(-1);
    let ln_n = nf.ln();
    let pi = BigFloat::pi(w);
    let half_ln_2pi = &pi.ldexp(1).ln() * &half;
    let mut l0 = BigFloat::zero(w);
    let mut l1 = BigFloat::zero(w);
    for a in 1..n {
        let chi = kronecker_i64(d, a);
        if chi == 0 {
            continue;
        }
        let x = &BigFloat::from_i64(a, w) / &nf;
        let lin = &half - &x;
        let t = &(&ln_gamma(&x)? - &half_ln_2pi) - &(&ln_n * &lin);
        if chi > 0 {
            l0 = &l0 + &lin;
            l1 = &l1 + &t;
        } else {
            l0 = &l0 - &lin;
            l1 = &l1 - &t;
        }
    }
    // Lambda'(0)/Lambda(0) = ln|d|/2 - ln(pi)/2 + psi(1/2)/2 + L'(0)/L(0),
    // psi(1/2) = -gamma - 2 ln 2.
    let psi_half = &(-&BigFloat::euler_gamma(w)) - &BigFloat::ln2(w).ldexp(1);
    let k = &(&(&ln_n - &pi.ln()) + &psi_half) * &half;
    let derivative = &(&l0 * &k) + &l1;
    Ok(LambdaAtZero {
        l_value: l0.with_precision(precision),
        l_derivative: l1.with_precision(precision),
        value: l0.with_precision(precision),
        derivative: derivative.with_precision(precision),
    })
}
