use std::cmp::Ordering;

use crate::arith::{GaussianRational, LogLinear, Rational};
use crate::field::{different_ideal, FElem, FIdealFactored, FPrimeIdeal, Setup};
use crate::genus::{alpha_different, diff_of_ideal, rho_poly};
use crate::oracle::{e1, BigFloat};
use crate::{Error, Result};

/// Where a local Whittaker function lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WhittakerPlace {
    Finite(FPrimeIdeal),
    /// Real embedding `sigma_l`, `l` in {1, 2}.
    Archimedean(u8),
}

/// The local section: the standard one of the incoherent collection, or the
/// one swapped at a single prime of `Diff(alpha)` to make it coherent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    IncoherentPlus,
    CoherentSwap,
}

#[derive(Clone, Debug, PartialEq)]
pub enum WhittakerDerivative {
    /// Exact derivative at a finite prime.
    Exact(LogLinear),
    /// `factor * beta_1(x)` at an archimedean place.
    Archimedean { factor: GaussianRational, beta1: BigFloat },
}

/// Value and derivative at `s = 0` of a normalized local Whittaker function.
/// At archimedean places the factor `e(sigma_l(alpha) tau_l)` is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct WhittakerData {
    pub place: WhittakerPlace,
    pub value0: GaussianRational,
    pub deriv0: Option<WhittakerDerivative>,
}

impl WhittakerData {
    pub fn exact_derivative(&self) -> Option<&LogLinear> {
        match &self.deriv0 {
            Some(WhittakerDerivative::Exact(l)) => Some(l),
            _ => None,
        }
    }
}

fn log_norm(prime: &FPrimeIdeal) -> LogLinear {
    // N(P) is p or p^2
    let k = if prime.norm() == prime.p() { 1 } else { 2 };
    LogLinear::term(prime.p(), Rational::from_integer(k.into()))
}

/// Local data at a finite prime for `alpha` in the inverse different.
///
/// For the standard section the value is `rho_P(alpha D)` and the derivative
/// is that of `N(P)^(s ord_P(D)/2) rho_P(alpha D, -s)`:
/// `ord_P(D)/2 log N(P) rho_P(alpha D) + log N(P) sum_r r eps^r`.
/// When `chi_P(alpha D) = -1` this is `-ord_P(alpha P D)/2 log N(P)`.
pub fn whittaker_finite(setup: &Setup, alpha: &FElem, prime: &FPrimeIdeal, section: Section) -> Result<WhittakerData> {
    finite_at(setup, &AlphaData::new(setup, alpha)?, prime, section)
}

/// `alpha D`, `Diff(alpha)` and the different, shared by the local
/// computations at one `alpha`.
pub(crate) struct AlphaData {
    pub alpha: FElem,
    pub ideal: FIdealFactored,
    pub diff: Vec<FPrimeIdeal>,
    pub different: FIdealFactored,
}

impl AlphaData {
    pub(crate) fn new(setup: &Setup, alpha: &FElem) -> Result<Self> {
        let ideal = alpha_different(setup, alpha)?;
        Ok(Self { alpha: alpha.clone(), diff: diff_of_ideal(setup, &ideal), ideal, different: different_ideal(setup) })
    }

    /// Primes dividing `alpha D` or `D`; the local value is 1 with
    /// derivative 0 everywhere else.
    pub(crate) fn relevant_primes(&self) -> Vec<FPrimeIdeal> {
        let mut ps: Vec<FPrimeIdeal> =
            self.ideal.factors().chain(self.different.factors()).map(|(p, _)| p.clone()).collect();
        ps.sort();
        ps.dedup();
        ps
    }
}

pub(crate) fn finite_at(
    setup: &Setup,
    data: &AlphaData,
    prime: &FPrimeIdeal,
    section: Section,
) -> Result<WhittakerData> {
    let t = data.ideal.exponent(prime);
    if t < 0 {
        return Err(Error::Precondition(format!("{} is not in the inverse different at {prime}", data.alpha)));
    }
    let place = WhittakerPlace::Finite(prime.clone());
    match section {
        Section::CoherentSwap => {
            if !data.diff.contains(prime) {
                return Err(Error::Precondition(format!("coherent swap at {prime} outside Diff({})", data.alpha)));
            }
            Ok(WhittakerData { place, value0: GaussianRational::real(-Rational::from_integer(1.into())), deriv0: None })
        }
        Section::IncoherentPlus => {
            let poly = rho_poly(setup, &data.ideal, prime)?;
            let value = poly.value_at_zero();
            let ord_d = data.different.exponent(prime);
            let log_n = log_norm(prime);
            let d_part = log_n.scale(&Rational::new((ord_d * value as i64).into(), 2.into()));
            let deriv = &d_part - &poly.derivative_at_zero();
            Ok(WhittakerData {
                place,
                value0: GaussianRational::real(Rational::from_integer(value.into())),
                deriv0: Some(WhittakerDerivative::Exact(deriv)),
            })
        }
    }
}

/// Local data at the real place `sigma_l` with imaginary part `v_l`.
pub fn whittaker_arch(setup: &Setup, alpha: &FElem, l: u8, v: &BigFloat) -> Result<WhittakerData> {
    if l != 1 && l != 2 {
        return Err(Error::Precondition(format!("archimedean index {l} not in {{1, 2}}")));
    }
    if !v.is_positive() {
        return Err(Error::Domain(format!("v_{l} must be positive")));
    }
    let place = WhittakerPlace::Archimedean(l);
    if alpha.is_zero() {
        return Ok(WhittakerData { place, value0: GaussianRational::imaginary(-1), deriv0: None });
    }
    match setup.sign(alpha, l) {
        Ordering::Greater => Ok(WhittakerData { place, value0: GaussianRational::imaginary(-2), deriv0: None }),
        Ordering::Less => {
            let prec = v.precision();
            let sigma = sigma_big(setup, alpha, l, prec + 16).abs();
            let x = &(&BigFloat::pi(prec + 16).ldexp(2) * &sigma) * &v.with_precision(prec + 16);
            let beta1 = e1(&x)?.with_precision(prec);
            Ok(WhittakerData {
                place,
                value0: GaussianRational::zero(),
                deriv0: Some(WhittakerDerivative::Archimedean { factor: GaussianRational::imaginary(-1), beta1 }),
            })
        }
        Ordering::Equal => unreachable!("nonzero element with a zero embedding"),
    }
}

/// `sigma_l(alpha)` as a float.
pub(crate) fn sigma_big(setup: &Setup, alpha: &FElem, l: u8, prec: u32) -> BigFloat {
    let root = BigFloat::from_i64(setup.big_d(), prec).sqrt();
    let u = BigFloat::from_rational(&alpha.u, prec);
    let v = &BigFloat::from_rational(&alpha.v, prec) * &root;
    if l == 1 {
        &u + &v
    } else {
        &u - &v
    }
}
