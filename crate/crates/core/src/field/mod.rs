//! The real quadratic field F = Q(sqrt D), D = d1 d2, attached to a pair of
//! coprime negative fundamental discriminants.
//!
//! Elements are written `u + v sqrt(D)` with rational `u, v`. The ring of
//! integers is `Z[(D + sqrt D)/2]` and the different is `sqrt(D) O_F`.

mod ideal;
mod local;
mod slice;

pub use ideal::{
    different_ideal, element_valuation, factor_prime_in_f, principal_ideal, FIdealFactored, FPrimeIdeal, PrimeKind,
};
pub use local::{local_invariant, local_invariant_star, quadratic_form_diagonal, support};
pub use slice::{enumerate_mixed, enumerate_trace_slice, TraceSliceElement};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, is_fundamental_discriminant, Rational};
use crate::{Error, Result};

/// A pair of coprime negative fundamental discriminants and the data derived
/// from it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Setup {
    d1: i64,
    d2: i64,
    d: i64,
    w1: u32,
    w2: u32,
}

fn unit_count(d: i64) -> u32 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

impl Setup {
    pub fn new(d1: i64, d2: i64) -> Result<Self> {
        for d in [d1, d2] {
            if d >= 0 || !is_fundamental_discriminant(d) {
                return Err(Error::InvalidSetup(format!("{d} is not a negative fundamental discriminant")));
            }
        }
        if d1.gcd(&d2) != 1 {
            return Err(Error::InvalidSetup(format!("gcd({d1}, {d2}) != 1")));
        }
        let d = d1.checked_mul(d2).ok_or_else(|| Error::InvalidSetup("d1 d2 overflows".into()))?;
        if exact_sqrt(&BigInt::from(d)).is_some() {
            return Err(Error::InvalidSetup(format!("{d} is a perfect square")));
        }
        Ok(Self { d1, d2, d, w1: unit_count(d1), w2: unit_count(d2) })
    }

    pub fn d1(&self) -> i64 {
        self.d1
    }

    pub fn d2(&self) -> i64 {
        self.d2
    }

    /// `D = d1 d2`.
    pub fn big_d(&self) -> i64 {
        self.d
    }

    pub fn w1(&self) -> u32 {
        self.w1
    }

    pub fn w2(&self) -> u32 {
        self.w2
    }

    /// `sqrt(D)` as an element of F.
    pub fn sqrt_d(&self) -> FElem {
        FElem::new(Rational::zero(), Rational::from_integer(1.into()))
    }

    pub fn mul(&self, a: &FElem, b: &FElem) -> FElem {
        let d = Rational::from_integer(self.d.into());
        FElem::new(&a.u * &b.u + &a.v * &b.v * d, &a.u * &b.v + &a.v * &b.u)
    }

    pub fn norm(&self, a: &FElem) -> Rational {
        &a.u * &a.u - &a.v * &a.v * Rational::from_integer(self.d.into())
    }

    /// True when `a` lies in `O_F = Z[(D + sqrt D)/2]`.
    pub fn is_integral(&self, a: &FElem) -> bool {
        let two_v = &a.v * Rational::from_integer(2.into());
        let shifted = &a.u - &a.v * Rational::from_integer(self.d.into());
        two_v.is_integer() && shifted.is_integer()
    }

    /// Sign of `sigma_l(a)` for `l` in {1, 2}, decided exactly.
    pub fn sign(&self, a: &FElem, l: u8) -> Ordering {
        let v = if l == 1 { a.v.clone() } else { -a.v.clone() };
        let (su, sv) = (sgn(&a.u), sgn(&v));
        if su == sv || sv == Ordering::Equal {
            return su;
        }
        if su == Ordering::Equal {
            return sv;
        }
        // opposite signs: compare u^2 with v^2 D
        let lhs = &a.u * &a.u;
        let rhs = &v * &v * Rational::from_integer(self.d.into());
        match lhs.cmp(&rhs) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_totally_positive(&self, a: &FElem) -> bool {
        self.sign(a, 1) == Ordering::Greater && self.sign(a, 2) == Ordering::Greater
    }

    /// `sigma_l(a)` in floating point.
    pub fn sigma_f64(&self, a: &FElem, l: u8) -> f64 {
        let s = (self.d as f64).sqrt();
        let u = a.u.to_f64().unwrap_or(f64::NAN);
        let v = a.v.to_f64().unwrap_or(f64::NAN);
        if l == 1 {
            u + v * s
        } else {
            u - v * s
        }
    }
}

fn sgn(x: &Rational) -> Ordering {
    if x.is_positive() {
        Ordering::Greater
    } else if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// `u + v sqrt(D)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[String; 2]", try_from = "[String; 2]")]
pub struct FElem {
    pub u: Rational,
    pub v: Rational,
}

impl FElem {
    pub fn new(u: Rational, v: Rational) -> Self {
        Self { u, v }
    }

    pub fn from_i64(u: i64, v: i64) -> Self {
        Self::new(Rational::from_integer(u.into()), Rational::from_integer(v.into()))
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn trace(&self) -> Rational {
        &self.u * Rational::from_integer(2.into())
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.u.clone(), -self.v.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(&self.u * c, &self.v * c)
    }
}

impl fmt::Display for FElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})*sqrt(D)", self.u, self.v)
    }
}

impl From<FElem> for [String; 2] {
    fn from(a: FElem) -> Self {
        [a.u.to_string(), a.v.to_string()]
    }
}

impl TryFrom<[String; 2]> for FElem {
    type Error = Error;
    fn try_from(s: [String; 2]) -> Result<Self> {
        let parse = |t: &str| t.parse::<Rational>().map_err(|e| Error::Parse(format!("bad rational {t:?}: {e}")));
        Ok(Self::new(parse(&s[0])?, parse(&s[1])?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn setup_validation() {
        let s = Setup::new(-3, -7).unwrap();
        assert_eq!((s.big_d(), s.w1(), s.w2()), (21, 6, 2));
        assert_eq!(Setup::new(-3, -4).unwrap().w2(), 4);
        assert!(Setup::new(-3, -3).is_err());
        assert!(Setup::new(-4, -8).is_err());
        assert!(Setup::new(-3, -12).is_err());
        assert!(Setup::new(-3, 5).is_err());
        assert!(Setup::new(-15, -7).is_ok());
    }

    #[test]
    fn signs_and_integrality() {
        let s = Setup::new(-3, -7).unwrap();
        let a = FElem::new(rat(1, 2), rat(1, 42));
        assert!(s.is_totally_positive(&a));
        let b = FElem::new(rat(1, 2), rat(-5, 42));
        assert_eq!(s.sign(&b, 1), Ordering::Less);
        assert_eq!(s.sign(&b, 2), Ordering::Greater);
        assert!(s.is_integral(&FElem::new(rat(1, 2), rat(1, 2))));
        assert!(!s.is_integral(&FElem::new(rat(1, 2), rat(0, 1))));
        assert!(s.is_integral(&s.mul(&a, &s.sqrt_d())));
        assert_eq!(s.norm(&FElem::new(rat(1, 2), rat(1, 2))), rat(-5, 1));
    }

    #[test]
    fn serde_pair() {
        let a = FElem::new(rat(1, 2), rat(-5, 42));
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(j, r#"["1/2","-5/42"]"#);
        let back: FElem = serde_json::from_str(&j).unwrap();
        assert_eq!(back, a);
    }
}
