//! The quadratic Hecke character of K/F, where K = F(sqrt d1) is the
//! biquadratic field containing both imaginary quadratic fields, together
//! with `Diff(alpha)`, the ideal counts `rho` and the local multiplicities
//! `f_p`.
//!
//! `chi` is evaluated through `chi_{K/F} = chi_{d_i} o N_{F/Q}`, choosing `i`
//! with `p` prime to `d_i`. The character is evaluated on the factored ideal
//! `alpha D`.

use std::collections::HashMap;

use crate::arith::{factor_u64, kronecker_i64, LogLinear, Rational};
use crate::field::{factor_prime_in_f, principal_ideal, FElem, FIdealFactored, FPrimeIdeal, PrimeKind, Setup};
use crate::{Error, Result};

/// `chi(P)`: +1 when P splits in K, -1 when it is inert.
pub fn chi_prime(setup: &Setup, prime: &FPrimeIdeal) -> i8 {
    let p = prime.p() as i64;
    let n = prime.norm() as i64;
    let choices: Vec<i8> =
        [setup.d1(), setup.d2()].into_iter().filter(|d| d % p != 0).map(|d| kronecker_i64(d, n)).collect();
    assert!(!choices.is_empty(), "p divides both discriminants");
    assert!(choices.iter().all(|&c| c == choices[0]), "characters disagree at {prime}");
    assert_ne!(choices[0], 0, "K/F ramified at {prime}");
    choices[0]
}

/// `chi` on a factored fractional ideal.
pub fn chi_ideal(setup: &Setup, ideal: &FIdealFactored) -> i8 {
    ideal.factors().map(|(p, e)| if e % 2 == 0 { 1 } else { chi_prime(setup, p) }).product()
}

/// The ideal `alpha D = (alpha sqrt D)`.
pub fn alpha_different(setup: &Setup, alpha: &FElem) -> Result<FIdealFactored> {
    principal_ideal(setup, &setup.mul(alpha, &setup.sqrt_d()))
}

/// `Diff(alpha)`: primes with `chi(P) = -1` and `ord_P(alpha D)` odd.
pub fn diff_set(setup: &Setup, alpha: &FElem) -> Result<Vec<FPrimeIdeal>> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !setup.is_totally_positive(alpha) {
        return Err(Error::NotTotallyPositive(alpha.to_string()));
    }
    Ok(diff_of_ideal(setup, &alpha_different(setup, alpha)?))
}

pub(crate) fn diff_of_ideal(setup: &Setup, ideal: &FIdealFactored) -> Vec<FPrimeIdeal> {
    ideal.factors().filter(|(p, e)| e % 2 != 0 && chi_prime(setup, p) == -1).map(|(p, _)| p.clone()).collect()
}

fn local_rho(chi: i8, e: i64) -> u64 {
    match (e < 0, chi) {
        (true, _) => 0,
        (false, 1) => e as u64 + 1,
        _ => u64::from(e % 2 == 0),
    }
}

/// Number of ideals of K with relative norm `b`; zero unless `b` is integral.
pub fn rho(setup: &Setup, ideal: &FIdealFactored) -> u64 {
    ideal.factors().map(|(p, e)| local_rho(chi_prime(setup, p), e)).product()
}

/// `rho_P(a, s) = sum_{r=0}^{t} (eps N(P)^(-s))^r`, kept as `(N(P), eps, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoPolynomial {
    /// Residue characteristic.
    pub p: u64,
    /// `N(P)`, either `p` or `p^2`.
    pub norm: u64,
    pub sign: i8,
    pub degree: u32,
}

impl RhoPolynomial {
    pub fn value_at_zero(&self) -> u64 {
        if self.sign == 1 {
            self.degree as u64 + 1
        } else {
            u64::from(self.degree.is_multiple_of(2))
        }
    }

    /// `-log N(P) sum_r r eps^r`.
    pub fn derivative_at_zero(&self) -> LogLinear {
        let s: i64 = (0..=self.degree as i64).map(|r| if self.sign == -1 && r % 2 == 1 { -r } else { r }).sum();
        let log_n = if self.norm == self.p { 1 } else { 2 };
        LogLinear::term(self.p, Rational::from_integer((-s * log_n).into()))
    }
}

pub fn rho_poly(setup: &Setup, ideal: &FIdealFactored, prime: &FPrimeIdeal) -> Result<RhoPolynomial> {
    let t = ideal.exponent(prime);
    if t < 0 {
        return Err(Error::Precondition(format!("negative exponent {t} of {prime} in {ideal}")));
    }
    Ok(RhoPolynomial { p: prime.p(), norm: prime.norm(), sign: chi_prime(setup, prime), degree: t as u32 })
}

fn nonsplit_in_both(setup: &Setup, p: u64) -> bool {
    kronecker_i64(setup.d1(), p as i64) != 1 && kronecker_i64(setup.d2(), p as i64) != 1
}

/// Local orbital integral value at `l` for the reflex prime `reflex`: the
/// local factor of `rho(alpha D)` at `l`, or of `rho(alpha D reflex^-1)` when
/// `l` lies under `reflex`.
pub fn orbital_value(setup: &Setup, alpha: &FElem, l: u64, reflex: &FPrimeIdeal) -> Result<u64> {
    if !nonsplit_in_both(setup, reflex.p()) {
        return Err(Error::Precondition(format!("{reflex} lies over a prime split in K1 or K2")));
    }
    let mut ideal = alpha_different(setup, alpha)?;
    if l == reflex.p() {
        ideal = ideal.mul_prime(reflex, -1);
    }
    Ok(factor_prime_in_f(setup, l)?.iter().map(|q| local_rho(chi_prime(setup, q), ideal.exponent(q))).product())
}

/// `f_p(b) = sum_{P | p} ord_P(b P) rho(b P^-1)` when `p` is nonsplit in
/// both K1 and K2 and `b` is integral; zero otherwise.
pub fn f_p(setup: &Setup, ideal: &FIdealFactored, p: u64) -> Result<u64> {
    if !nonsplit_in_both(setup, p) || !ideal.is_integral() {
        return Ok(0);
    }
    let mut total = 0;
    for prime in factor_prime_in_f(setup, p)? {
        let ord = ideal.exponent(&prime) + 1;
        total += ord as u64 * rho(setup, &ideal.mul_prime(&prime, -1));
    }
    Ok(total)
}

/// `sum_{N b = n} rho(b)` for `1 <= n <= n_max`, by listing every integral
/// ideal of each norm. Index 0 is unused.
pub fn rho_norm_sums(setup: &Setup, n_max: usize) -> Result<Vec<u64>> {
    let mut primes: HashMap<u64, Vec<FPrimeIdeal>> = HashMap::new();
    let mut out = vec![0u64; n_max + 1];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        // Local choices for every prime power exactly dividing n.
        let mut locals: Vec<Vec<FIdealFactored>> = Vec::new();
        for (p, k) in factor_u64(n as u64) {
            let ps = match primes.get(&p) {
                Some(v) => v,
                None => primes.entry(p).or_insert(factor_prime_in_f(setup, p)?),
            };
            let k = k as i64;
            let options = match ps[0].kind() {
                PrimeKind::SplitPlus | PrimeKind::SplitMinus => (0..=k)
                    .map(|a| FIdealFactored::from_factors([(ps[0].clone(), a), (ps[1].clone(), k - a)]))
                    .collect(),
                PrimeKind::Inert if k % 2 == 0 => {
                    vec![FIdealFactored::from_factors([(ps[0].clone(), k / 2)])]
                }
                PrimeKind::Inert => Vec::new(),
                PrimeKind::Ramified => vec![FIdealFactored::from_factors([(ps[0].clone(), k)])],
            };
            locals.push(options);
        }
        let mut ideals = vec![FIdealFactored::unit()];
        for options in locals {
            ideals = ideals.iter().flat_map(|b| options.iter().map(move |o| b.mul(o))).collect();
        }
        *slot = ideals.iter().map(|b| rho(setup, b)).sum();
    }
    Ok(out)
}

/// Coefficients of `zeta(s) L(s, chi_d1) L(s, chi_d2) L(s, chi_D)` up to
/// `n_max` by Dirichlet convolution. Index 0 is unused.
pub fn zeta_k_coefficients(setup: &Setup, n_max: usize) -> Vec<i64> {
    let mut acc = vec![0i64; n_max + 1];
    if n_max >= 1 {
        acc[1] = 1;
    }
    let chars = [1i64, setup.d1(), setup.d2(), setup.big_d()];
    for d in chars {
        let f: Vec<i64> = (0..=n_max as i64).map(|n| if n == 0 { 0 } else { kronecker_i64(d, n) as i64 }).collect();
        let mut next = vec![0i64; n_max + 1];
        for a in 1..=n_max {
            if acc[a] == 0 {
                continue;
            }
            let mut b = 1;
            while a * b <= n_max {
                next[a * b] += acc[a] * f[b];
                b += 1;
            }
        }
        acc = next;
    }
    acc
}
