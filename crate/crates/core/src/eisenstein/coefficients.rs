use std::cmp::Ordering;

use super::whittaker::{finite_at, sigma_big, whittaker_arch, AlphaData, Section, WhittakerData, WhittakerDerivative};
use crate::arith::{GaussianRational, LogLinear, Rational};
use crate::field::{FElem, FPrimeIdeal, Setup};
use crate::genus::{alpha_different, rho};
use crate::oracle::{e1, lambda_at_zero, BigFloat};
use crate::{Error, Result};

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn require_totally_positive(setup: &Setup, alpha: &FElem) -> Result<()> {
    if setup.is_totally_positive(alpha) {
        Ok(())
    } else {
        Err(Error::NotTotallyPositive(alpha.to_string()))
    }
}

fn in_inverse_different(setup: &Setup, alpha: &FElem) -> bool {
    setup.is_integral(&setup.mul(alpha, &setup.sqrt_d()))
}

/// `log N(P)` in units of `log p`.
fn log_norm_units(prime: &FPrimeIdeal) -> i64 {
    if prime.norm() == prime.p() {
        1
    } else {
        2
    }
}

/// `a_alpha` for totally positive `alpha`:
/// `2 ord_P(alpha P D) rho(alpha D P^-1) log N(P)` when `Diff(alpha) = {P}`
/// and `alpha` lies in the inverse different, zero otherwise.
pub fn a_alpha(setup: &Setup, alpha: &FElem) -> Result<LogLinear> {
    require_totally_positive(setup, alpha)?;
    if !in_inverse_different(setup, alpha) {
        return Ok(LogLinear::zero());
    }
    Ok(closed_form(setup, &AlphaData::new(setup, alpha)?))
}

pub(crate) fn closed_form(setup: &Setup, data: &AlphaData) -> LogLinear {
    let [p] = data.diff.as_slice() else {
        return LogLinear::zero();
    };
    if !data.ideal.is_integral() {
        return LogLinear::zero();
    }
    let ord = data.ideal.exponent(p) + 1;
    let r = rho(setup, &data.ideal.mul_prime(p, -1)) as i64;
    LogLinear::term(p.p(), int(2 * ord * r * log_norm_units(p)))
}

/// `2 rho(alpha D) beta_1(4 pi |sigma_l(alpha)| v_l)` for `alpha` with
/// `sigma_k(alpha) > 0 > sigma_l(alpha)`. The precision is that of `v1`.
pub fn a_alpha_mixed(setup: &Setup, alpha: &FElem, v1: &BigFloat, v2: &BigFloat) -> Result<BigFloat> {
    let s1 = setup.sign(alpha, 1);
    let s2 = setup.sign(alpha, 2);
    let l = match (s1, s2) {
        (Ordering::Greater, Ordering::Less) => 2,
        (Ordering::Less, Ordering::Greater) => 1,
        _ => return Err(Error::Precondition(format!("{alpha} does not have mixed signature"))),
    };
    if !v1.is_positive() || !v2.is_positive() {
        return Err(Error::Domain("v1 and v2 must be positive".into()));
    }
    let prec = v1.precision().min(v2.precision());
    if !in_inverse_different(setup, alpha) {
        return Ok(BigFloat::zero(prec));
    }
    let r = rho(setup, &alpha_different(setup, alpha)?);
    if r == 0 {
        return Ok(BigFloat::zero(prec));
    }
    let v = if l == 1 { v1 } else { v2 };
    let w = prec + 16;
    let sigma = sigma_big(setup, alpha, l, w).abs();
    let x = &(&BigFloat::pi(w).ldexp(2) * &sigma) * &v.with_precision(w);
    let b = e1(&x)?;
    Ok((&b * &BigFloat::from_u64(2 * r, w)).with_precision(prec))
}

/// Constant term
/// `2 Lambda(0) (-Lambda'(0)/Lambda(0) + log(v1 v2)/2)` with
/// `Lambda = Lambda(s, chi_d1) Lambda(s, chi_d2)`.
pub fn a_zero(setup: &Setup, v1: &BigFloat, v2: &BigFloat) -> Result<BigFloat> {
    if !v1.is_positive() || !v2.is_positive() {
        return Err(Error::Domain("v1 and v2 must be positive".into()));
    }
    let prec = v1.precision().min(v2.precision());
    let w = prec + 16;
    let l1 = lambda_at_zero(setup.d1(), w)?;
    let l2 = lambda_at_zero(setup.d2(), w)?;
    let value = &l1.value * &l2.value;
    let log_deriv = &(&l1.derivative / &l1.value) + &(&l2.derivative / &l2.value);
    let log_v = (&v1.with_precision(w) * &v2.with_precision(w)).ln().ldexp(-1);
    let inner = &log_v - &log_deriv;
    Ok((&value.ldexp(1) * &inner).with_precision(prec))
}

/// `g * L` for a Gaussian rational `g`, required to be real.
fn real_times(g: &GaussianRational, l: &LogLinear) -> Result<LogLinear> {
    if !g.is_real() {
        return Err(Error::Inconsistent(format!("assembled coefficient {g} * ({l}) is not real")));
    }
    Ok(l.scale(&g.re))
}

fn exact(w: &WhittakerData) -> Result<LogLinear> {
    w.exact_derivative().cloned().ok_or_else(|| Error::Inconsistent("missing finite derivative".into()))
}

/// Product of the archimedean values at `s = 0` for totally positive `alpha`.
fn archimedean_values(setup: &Setup, alpha: &FElem) -> Result<GaussianRational> {
    let v = BigFloat::one(64);
    let mut out = GaussianRational::one();
    for l in [1, 2] {
        out = &out * &whittaker_arch(setup, alpha, l, &v)?.value0;
    }
    Ok(out)
}

/// Product of the standard local values at the relevant primes other than
/// `skip`, and the archimedean values.
fn other_values(setup: &Setup, data: &AlphaData, skip: &FPrimeIdeal) -> Result<GaussianRational> {
    let mut factor = archimedean_values(setup, &data.alpha)?;
    for q in data.relevant_primes().iter().filter(|q| *q != skip) {
        factor = &factor * &finite_at(setup, data, q, Section::IncoherentPlus)?.value0;
    }
    Ok(factor)
}

fn single_diff_prime(data: &AlphaData) -> Result<&FPrimeIdeal> {
    match data.diff.as_slice() {
        [p] => Ok(p),
        d => Err(Error::Precondition(format!("Diff({}) has {} elements, expected 1", data.alpha, d.len()))),
    }
}

/// `W'_P * prod_{Q != P} W_Q(0) * (-2i)^2` for the single prime `P` of
/// `Diff(alpha)`, from the local Whittaker data alone.
pub fn assemble_incoherent_derivative(setup: &Setup, alpha: &FElem) -> Result<LogLinear> {
    require_totally_positive(setup, alpha)?;
    if !in_inverse_different(setup, alpha) {
        return Err(Error::Precondition(format!("{alpha} is not in the inverse different")));
    }
    incoherent_derivative(setup, &AlphaData::new(setup, alpha)?)
}

fn incoherent_derivative(setup: &Setup, data: &AlphaData) -> Result<LogLinear> {
    let p = single_diff_prime(data)?;
    let deriv = exact(&finite_at(setup, data, p, Section::IncoherentPlus)?)?;
    let out = real_times(&other_values(setup, data, p)?, &deriv)?;
    if !out.is_nonnegative() {
        return Err(Error::Inconsistent(format!("negative coefficient {out} at {}", data.alpha)));
    }
    Ok(out)
}

/// The holomorphic coefficient of a totally positive `alpha` by the product
/// rule over all places: zero if `alpha` is outside the inverse different or
/// two or more local values vanish, otherwise the derivative at the unique
/// vanishing place times the other values.
pub fn assemble_coefficient(setup: &Setup, alpha: &FElem) -> Result<LogLinear> {
    require_totally_positive(setup, alpha)?;
    if !in_inverse_different(setup, alpha) {
        return Ok(LogLinear::zero());
    }
    let data = AlphaData::new(setup, alpha)?;
    let mut zeros = Vec::new();
    let mut factor = archimedean_values(setup, alpha)?;
    for q in data.relevant_primes() {
        let w = finite_at(setup, &data, &q, Section::IncoherentPlus)?;
        if w.value0.is_zero() {
            zeros.push(w);
        } else {
            factor = &factor * &w.value0;
        }
    }
    match zeros.as_slice() {
        [] => Err(Error::Inconsistent(format!("no local value vanishes at {alpha}; the collection is not incoherent"))),
        [w] => match &w.deriv0 {
            Some(WhittakerDerivative::Exact(d)) => real_times(&factor, d),
            _ => Err(Error::Inconsistent("missing finite derivative".into())),
        },
        _ => Ok(LogLinear::zero()),
    }
}

/// Coefficient of `q^alpha` in the coherent Eisenstein series swapped at
/// `P`: `(-1) * prod_{Q != P} W_Q(0) * (-2i)^2`. Checked against
/// `4 rho(alpha D P^-1)`.
pub fn coherent_coefficient(setup: &Setup, alpha: &FElem, prime: &FPrimeIdeal) -> Result<Rational> {
    require_totally_positive(setup, alpha)?;
    let data = AlphaData::new(setup, alpha)?;
    if single_diff_prime(&data)? != prime {
        return Err(Error::Precondition(format!("{prime} is not the unique prime of Diff({alpha})")));
    }
    coherent(setup, &data, prime)
}

fn coherent(setup: &Setup, data: &AlphaData, prime: &FPrimeIdeal) -> Result<Rational> {
    let swap = finite_at(setup, data, prime, Section::CoherentSwap)?.value0;
    let factor = &swap * &other_values(setup, data, prime)?;
    if !factor.is_real() {
        return Err(Error::Inconsistent(format!("coherent coefficient {factor} is not real")));
    }
    let expect = int(4 * rho(setup, &data.ideal.mul_prime(prime, -1)) as i64);
    if factor.re != expect {
        return Err(Error::Inconsistent(format!("coherent coefficient {} differs from 4 rho = {expect}", factor.re)));
    }
    Ok(factor.re)
}

/// The three quantities compared by [`identity_check_lem311`].
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub a_alpha: LogLinear,
    pub coherent: Rational,
    pub nu: Rational,
    pub prime: FPrimeIdeal,
    /// `W'_P(0)` for the standard section.
    pub incoherent_derivative: LogLinear,
    /// `W_P(0)` for the swapped section.
    pub coherent_value: Rational,
}

impl IdentityCheck {
    /// `a_alpha = nu log p * coherent` and `W'_P = nu log N(P) * W*_P`.
    pub fn holds(&self) -> bool {
        let log_n = LogLinear::term(self.prime.p(), int(log_norm_units(&self.prime)));
        let lhs = LogLinear::log_prime(self.prime.p()).scale(&(&self.nu * &self.coherent));
        let local = log_n.scale(&(&self.nu * &self.coherent_value));
        self.a_alpha == lhs && self.incoherent_derivative == local
    }
}

/// Compares the derivative of the incoherent coefficient with the coherent
/// coefficient at the prime of `Diff(alpha)`, with
/// `nu = ord_P(alpha P D) / 2`.
pub fn identity_check_lem311(setup: &Setup, alpha: &FElem) -> Result<IdentityCheck> {
    require_totally_positive(setup, alpha)?;
    if !in_inverse_different(setup, alpha) {
        return Err(Error::Precondition(format!("{alpha} is not in the inverse different")));
    }
    let data = AlphaData::new(setup, alpha)?;
    let p = single_diff_prime(&data)?;
    let nu = Rational::new((data.ideal.exponent(p) + 1).into(), 2.into());
    let w = finite_at(setup, &data, p, Section::IncoherentPlus)?;
    let swap = finite_at(setup, &data, p, Section::CoherentSwap)?;
    Ok(IdentityCheck {
        a_alpha: incoherent_derivative(setup, &data)?,
        coherent: coherent(setup, &data, p)?,
        nu,
        prime: p.clone(),
        incoherent_derivative: exact(&w)?,
        coherent_value: swap.value0.re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::field::enumerate_trace_slice;
    use crate::genus::diff_set;

    #[test]
    fn closed_form_examples() {
        let s = Setup::new(-3, -7).unwrap();
        let a = FElem::new(rat(1, 2), rat(1, 42));
        assert_eq!(a_alpha(&s, &a).unwrap(), LogLinear::term(5, rat(4, 1)));
        let t = Setup::new(-3, -4).unwrap();
        assert_eq!(a_alpha(&t, &FElem::new(rat(1, 2), rat(0, 1))).unwrap(), LogLinear::term(3, rat(4, 1)));
        assert!(a_alpha(&s, &FElem::new(rat(1, 2), rat(-5, 42))).is_err());
        // not in the inverse different
        assert!(a_alpha(&s, &FElem::new(rat(1, 3), rat(0, 1))).unwrap().is_zero());
    }

    #[test]
    fn assembly_matches_closed_form() {
        for (d1, d2) in [(-3, -7), (-3, -4), (-4, -7), (-3, -8), (-7, -23)] {
            let s = Setup::new(d1, d2).unwrap();
            for m in 1..=6 {
                for t in enumerate_trace_slice(&s, m).unwrap() {
                    let closed = a_alpha(&s, &t.alpha).unwrap();
                    assert_eq!(assemble_coefficient(&s, &t.alpha).unwrap(), closed);
                    if diff_set(&s, &t.alpha).unwrap().len() == 1 {
                        assert_eq!(assemble_incoherent_derivative(&s, &t.alpha).unwrap(), closed);
                        assert!(identity_check_lem311(&s, &t.alpha).unwrap().holds());
                    } else {
                        assert!(closed.is_zero());
                        assert!(assemble_incoherent_derivative(&s, &t.alpha).is_err());
                    }
                }
            }
        }
    }

    #[test]
    fn coherent_examples() {
        let s = Setup::new(-3, -7).unwrap();
        let a = FElem::new(rat(1, 2), rat(1, 42));
        let p = diff_set(&s, &a).unwrap().remove(0);
        assert_eq!(coherent_coefficient(&s, &a, &p).unwrap(), rat(4, 1));
        let c = identity_check_lem311(&s, &a).unwrap();
        assert_eq!(c.nu, rat(1, 1));
        assert!(c.holds());
    }

    #[test]
    fn mixed_coefficients() {
        let s = Setup::new(-3, -7).unwrap();
        let a = FElem::new(rat(1, 2), rat(-5, 42));
        let one = BigFloat::one(96);
        let v = a_alpha_mixed(&s, &a, &one, &one).unwrap();
        // sigma_1 = (1 - 5/sqrt 21)/2
        let sigma = (1.0 - 5.0 / 21f64.sqrt()) / 2.0;
        let x = 4.0 * std::f64::consts::PI * sigma.abs();
        let r = rho(&s, &alpha_different(&s, &a).unwrap()) as f64;
        let b = e1(&BigFloat::from_f64(x, 96)).unwrap().to_f64();
        assert!((v.to_f64() - 2.0 * r * b).abs() < 1e-12, "{} vs {}", v.to_f64(), 2.0 * r * b);
        let mut last = f64::INFINITY;
        for k in 1..20 {
            let vk = a_alpha_mixed(&s, &a, &BigFloat::from_f64(k as f64 * 0.5, 96), &one).unwrap().to_f64();
            assert!(vk <= last);
            last = vk;
        }
        assert!(a_alpha_mixed(&s, &FElem::new(rat(1, 2), rat(1, 42)), &one, &one).is_err());
    }

    #[test]
    fn constant_term() {
        let s = Setup::new(-3, -7).unwrap();
        let one = BigFloat::one(96);
        let a0 = a_zero(&s, &one, &one).unwrap();
        let l1 = lambda_at_zero(-3, 96).unwrap();
        let l2 = lambda_at_zero(-7, 96).unwrap();
        let d = &(&l1.derivative * &l2.value) + &(&l1.value * &l2.derivative);
        assert!((&a0 + &d.ldexp(1)).abs() < BigFloat::from_f64(1e-25, 96));
        assert!(((&l1.value * &l2.value).to_f64() - 1.0 / 3.0).abs() < 1e-20);
        // scaling v by t adds 2 Lambda(0) log t
        let t = BigFloat::from_i64(3, 96);
        let shifted = a_zero(&s, &t, &t).unwrap();
        let expect = &(&(&l1.value * &l2.value).ldexp(1) * &t.ln()) + &a0;
        assert!((&shifted - &expect).abs() < BigFloat::from_f64(1e-25, 96));
    }
}
