use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{FElem, Setup};
use crate::arith::{factor, kronecker_i64, ord_p, ord_p_rational, sqrt_mod_prime_power, Rational};
use crate::{Error, Result};

/// How a rational prime decomposes in F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeKind {
    /// The prime where `sqrt(D)` maps to the canonical p-adic root `r`.
    SplitPlus,
    /// The prime where `sqrt(D)` maps to `-r`.
    SplitMinus,
    Inert,
    Ramified,
}

/// A prime ideal of `O_F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FPrimeIdeal {
    p: u64,
    kind: PrimeKind,
    /// Canonical root of D modulo p (modulo 8 when p = 2), split primes only.
    root: Option<BigInt>,
}

impl FPrimeIdeal {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> PrimeKind {
        self.kind
    }

    pub fn root(&self) -> Option<&BigInt> {
        self.root.as_ref()
    }

    pub fn is_split(&self) -> bool {
        matches!(self.kind, PrimeKind::SplitPlus | PrimeKind::SplitMinus)
    }

    /// Absolute norm `N(p)`.
    pub fn norm(&self) -> u64 {
        match self.kind {
            PrimeKind::Inert => self.p * self.p,
            _ => self.p,
        }
    }

    /// Ramification index times residue degree contribution: `e` for
    /// ramified, `f` for inert, 1 for split.
    pub fn local_degree(&self) -> u32 {
        match self.kind {
            PrimeKind::Inert | PrimeKind::Ramified => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for FPrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            PrimeKind::SplitPlus => "+",
            PrimeKind::SplitMinus => "-",
            PrimeKind::Inert => "",
            PrimeKind::Ramified => "r",
        };
        write!(f, "P{}{}", self.p, tag)
    }
}

/// The primes of F above `p`: two split primes, or one inert or ramified
/// prime.
pub fn factor_prime_in_f(setup: &Setup, p: u64) -> Result<Vec<FPrimeIdeal>> {
    if !crate::arith::is_prime_u64(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let d = BigInt::from(setup.big_d());
    let k = kronecker_i64(setup.big_d(), p as i64);
    Ok(match k {
        0 => vec![FPrimeIdeal { p, kind: PrimeKind::Ramified, root: None }],
        -1 => vec![FPrimeIdeal { p, kind: PrimeKind::Inert, root: None }],
        _ => {
            let r = sqrt_mod_prime_power(&d, p, if p == 2 { 3 } else { 1 })?;
            vec![
                FPrimeIdeal { p, kind: PrimeKind::SplitPlus, root: Some(r.clone()) },
                FPrimeIdeal { p, kind: PrimeKind::SplitMinus, root: Some(r) },
            ]
        }
    })
}

/// `ord_P(beta)` for nonzero `beta`.
pub fn element_valuation(setup: &Setup, beta: &FElem, prime: &FPrimeIdeal) -> Result<i64> {
    if beta.is_zero() {
        return Err(Error::ZeroElement);
    }
    let p = prime.p;
    let n = setup.norm(beta);
    match prime.kind {
        PrimeKind::Inert => Ok(ord_p_rational(&n, p) / 2),
        PrimeKind::Ramified => Ok(ord_p_rational(&n, p)),
        PrimeKind::SplitPlus | PrimeKind::SplitMinus => {
            // c beta = a + b sqrt(D) with integers a, b.
            let c = beta.u.denom().lcm(beta.v.denom());
            let a = (&beta.u * Rational::from_integer(c.clone())).to_integer();
            let b = (&beta.v * Rational::from_integer(c.clone())).to_integer();
            let cn = &a * &a - &b * &b * BigInt::from(setup.big_d());
            let t = ord_p(&cn, p);
            let k = t + 2;
            let r = sqrt_mod_prime_power(&BigInt::from(setup.big_d()), p, k)?;
            let modulus = num_traits::pow(BigInt::from(p), k as usize);
            let image = match prime.kind {
                PrimeKind::SplitPlus => &a + &b * &r,
                _ => &a - &b * &r,
            }
            .mod_floor(&modulus);
            let v = if image.is_zero() { k } else { ord_p(&image, p) };
            Ok(v.min(t) as i64 - ord_p(&c, p) as i64)
        }
    }
}

/// A fractional ideal of `O_F` in factored form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FIdealFactored {
    factors: BTreeMap<FPrimeIdeal, i64>,
}

impl FIdealFactored {
    /// The unit ideal `O_F`.
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn prime(p: &FPrimeIdeal) -> Self {
        Self::from_factors([(p.clone(), 1)])
    }

    pub fn from_factors<I: IntoIterator<Item = (FPrimeIdeal, i64)>>(it: I) -> Self {
        let mut out = Self::unit();
        for (p, e) in it {
            out.add(&p, e);
        }
        out
    }

    fn add(&mut self, p: &FPrimeIdeal, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.factors.entry(p.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(p);
        }
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&FPrimeIdeal, i64)> {
        self.factors.iter().map(|(p, e)| (p, *e))
    }

    pub fn exponent(&self, p: &FPrimeIdeal) -> i64 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in other.factors() {
            out.add(p, e);
        }
        out
    }

    pub fn inv(&self) -> Self {
        Self::from_factors(self.factors().map(|(p, e)| (p.clone(), -e)))
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::from_factors(self.factors().map(|(p, e)| (p.clone(), e * k)))
    }

    pub fn mul_prime(&self, p: &FPrimeIdeal, e: i64) -> Self {
        let mut out = self.clone();
        out.add(p, e);
        out
    }

    /// True when every exponent is nonnegative.
    pub fn is_integral(&self) -> bool {
        self.factors.values().all(|&e| e >= 0)
    }

    /// Absolute norm as a positive rational.
    pub fn norm(&self) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in self.factors() {
            let q = num_traits::pow(BigInt::from(p.norm()), e.unsigned_abs() as usize);
            if e > 0 {
                num *= q;
            } else {
                den *= q;
            }
        }
        Rational::new(num, den)
    }

    /// Rational primes below the factors, without repetition.
    pub fn rational_primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.factors.keys().map(|p| p.p).collect();
        v.dedup();
        v
    }
}

impl fmt::Display for FIdealFactored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("(1)");
        }
        let parts: Vec<String> =
            self.factors().map(|(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect();
        f.write_str(&parts.join("*"))
    }
}

/// The factored principal ideal `(beta)`.
pub fn principal_ideal(setup: &Setup, beta: &FElem) -> Result<FIdealFactored> {
    if beta.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n = setup.norm(beta);
    let mut primes: Vec<u64> = Vec::new();
    for part in [n.numer(), n.denom()] {
        let f = factor(&part.abs())?;
        for (p, _) in &f.factors {
            primes.push(p.to_u64().ok_or_else(|| Error::Overflow(p.to_string()))?);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut out = FIdealFactored::unit();
    for p in primes {
        for prime in factor_prime_in_f(setup, p)? {
            let e = element_valuation(setup, beta, &prime)?;
            out.add(&prime, e);
        }
    }
    debug_assert_eq!(
        out.norm(),
        crate::arith::Rational::from_integer(n.numer().abs()) / Rational::from_integer(n.denom().clone())
    );
    Ok(out)
}

/// The different `sqrt(D) O_F`.
pub fn different_ideal(setup: &Setup) -> FIdealFactored {
    principal_ideal(setup, &setup.sqrt_d()).expect("sqrt(D) is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{is_prime_u64, rat};
    use proptest::prelude::*;

    fn setup(d1: i64, d2: i64) -> Setup {
        Setup::new(d1, d2).unwrap()
    }

    fn prime(s: &Setup, p: u64, kind: PrimeKind) -> FPrimeIdeal {
        factor_prime_in_f(s, p).unwrap().into_iter().find(|q| q.kind() == kind).unwrap()
    }

    #[test]
    fn splitting_of_small_primes() {
        let s = setup(-3, -7);
        let five = factor_prime_in_f(&s, 5).unwrap();
        assert_eq!(five.len(), 2);
        assert_eq!(five[0].root(), Some(&BigInt::from(1)));
        assert_eq!(factor_prime_in_f(&s, 3).unwrap()[0].kind(), PrimeKind::Ramified);
        assert_eq!(factor_prime_in_f(&s, 2).unwrap()[0].kind(), PrimeKind::Inert);
        assert!(factor_prime_in_f(&s, 9).is_err());
    }

    #[test]
    fn valuation_examples() {
        let s = setup(-3, -7);
        let beta = FElem::new(rat(1, 2), rat(1, 2));
        assert_eq!(element_valuation(&s, &beta, &prime(&s, 5, PrimeKind::SplitPlus)).unwrap(), 0);
        assert_eq!(element_valuation(&s, &beta, &prime(&s, 5, PrimeKind::SplitMinus)).unwrap(), 1);
        assert_eq!(element_valuation(&s, &s.sqrt_d(), &prime(&s, 3, PrimeKind::Ramified)).unwrap(), 1);
        let one = FElem::from_i64(1, 0);
        for p in [2, 3, 5, 7, 11] {
            for q in factor_prime_in_f(&s, p).unwrap() {
                assert_eq!(element_valuation(&s, &one, &q).unwrap(), 0);
            }
        }
        assert!(element_valuation(&s, &FElem::from_i64(0, 0), &prime(&s, 3, PrimeKind::Ramified)).is_err());
    }

    #[test]
    fn principal_ideals() {
        let s = setup(-3, -7);
        let i = principal_ideal(&s, &FElem::new(rat(1, 2), rat(1, 2))).unwrap();
        assert_eq!(i, FIdealFactored::prime(&prime(&s, 5, PrimeKind::SplitMinus)));
        assert!(principal_ideal(&s, &FElem::from_i64(1, 0)).unwrap().is_unit());
        let d = different_ideal(&s);
        assert_eq!(d.to_string(), "P3r*P7r");
        assert_eq!(d.norm(), rat(21, 1));
        let s12 = setup(-3, -4);
        let d = different_ideal(&s12);
        assert_eq!(d.exponent(&prime(&s12, 2, PrimeKind::Ramified)), 2);
        assert_eq!(d.exponent(&prime(&s12, 3, PrimeKind::Ramified)), 1);
        assert_eq!(d.norm(), rat(12, 1));
    }

    #[test]
    fn local_degrees_sum_to_two() {
        for (d1, d2) in [(-3, -7), (-3, -4), (-4, -7), (-3, -8), (-7, -8), (-3, -11), (-4, -11), (-8, -11), (-7, -23)] {
            let s = setup(d1, d2);
            for p in (2..=500).filter(|&p| is_prime_u64(p)) {
                let total: u32 = factor_prime_in_f(&s, p).unwrap().iter().map(|q| q.local_degree()).sum();
                assert_eq!(total, 2, "({d1},{d2}) p = {p}");
            }
        }
    }

    proptest! {
        #[test]
        fn valuations_add_up_to_the_norm(
            a in -400i64..400, b in -400i64..400,
            c in 1i64..60, pick in 0usize..9,
        ) {
            prop_assume!(a != 0 || b != 0);
            let matrix = [(-3, -7), (-3, -4), (-4, -7), (-3, -8), (-7, -8), (-3, -11), (-4, -11), (-8, -11), (-7, -23)];
            let (d1, d2) = matrix[pick];
            let s = setup(d1, d2);
            let beta = FElem::new(rat(a, c), rat(b, 2 * c));
            let n = s.norm(&beta);
            for p in [2u64, 3, 5, 7, 11, 13, 23] {
                let primes = factor_prime_in_f(&s, p).unwrap();
                let total: i64 = primes
                    .iter()
                    .map(|q| element_valuation(&s, &beta, q).unwrap() * if q.kind() == PrimeKind::Inert { 2 } else { 1 })
                    .sum();
                prop_assert_eq!(total, ord_p_rational(&n, p));
            }
            let ideal = principal_ideal(&s, &beta).unwrap();
            prop_assert_eq!(ideal.norm(), n.abs());
        }
    }
}
