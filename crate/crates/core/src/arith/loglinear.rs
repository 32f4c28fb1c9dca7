use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{is_prime_u64, Rational};
use crate::oracle::BigFloat;
use crate::{Error, Result};

/// An exact real number `sum_p c_p log p` with rational `c_p`.
///
/// Keys are rational primes and no zero coefficient is ever stored, so
/// structural equality is equality of the represented numbers (the logs of
/// distinct primes are linearly independent over Q).
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LogLinear {
    terms: BTreeMap<u64, Rational>,
}

impl LogLinear {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c * log p`.
    pub fn term(p: u64, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(p, c);
        out
    }

    /// `log p`.
    pub fn log_prime(p: u64) -> Self {
        Self::term(p, Rational::from_integer(1.into()))
    }

    /// Builds a value from (prime, coefficient) pairs, rejecting non-prime keys.
    pub fn from_terms<I: IntoIterator<Item = (u64, Rational)>>(terms: I) -> Result<Self> {
        let mut out = Self::zero();
        for (p, c) in terms {
            if !is_prime_u64(p) {
                return Err(Error::Precondition(format!("log-linear key {p} is not prime")));
            }
            out.add_term(p, c);
        }
        Ok(out)
    }

    pub fn add_term(&mut self, p: u64, c: Rational) {
        debug_assert!(is_prime_u64(p), "{p} is not prime");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(p).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: u64) -> Rational {
        self.terms.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Primes with a nonzero coefficient.
    pub fn support(&self) -> Vec<u64> {
        self.terms.keys().copied().collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(p, x)| (*p, x * c)).collect() }
    }

    /// True if every coefficient is nonnegative (so the value is >= 0).
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Evaluates `sum c_p log p` at the given binary precision.
    pub fn to_float(&self, precision: u32) -> BigFloat {
        let work = precision + 32;
        let mut acc = BigFloat::zero(work);
        for (p, c) in &self.terms {
            let log_p = BigFloat::from_u64(*p, work).ln();
            acc = &acc + &(&log_p * &BigFloat::from_rational(c, work));
        }
        acc.with_precision(precision)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| {
                let c = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
                c * (*p as f64).ln()
            })
            .sum()
    }
}

impl fmt::Debug for LogLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogLinear({self})")
    }
}

impl fmt::Display for LogLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*log({p})")?;
        }
        Ok(())
    }
}

/// Serialized as a map from prime strings to reduced rational strings, keys in
/// increasing numeric order.
impl Serialize for LogLinear {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (p, c) in &self.terms {
            map.serialize_entry(&p.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LogLinear {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            let p = k.parse::<u64>().map_err(|e| D::Error::custom(format!("bad prime {k:?}: {e}")))?;
            let c = v.parse::<Rational>().map_err(|e| D::Error::custom(format!("bad rational {v:?}: {e}")))?;
            if c.is_zero() {
                return Err(D::Error::custom(format!("zero coefficient at {p}")));
            }
            terms.push((p, c));
        }
        LogLinear::from_terms(terms).map_err(D::Error::custom)
    }
}

impl Add for &LogLinear {
    type Output = LogLinear;
    fn add(self, rhs: &LogLinear) -> LogLinear {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LogLinear {
    type Output = LogLinear;
    fn add(mut self, rhs: LogLinear) -> LogLinear {
        self += &rhs;
        self
    }
}

impl AddAssign<&LogLinear> for LogLinear {
    fn add_assign(&mut self, rhs: &LogLinear) {
        for (p, c) in &rhs.terms {
            self.add_term(*p, c.clone());
        }
    }
}

impl Neg for &LogLinear {
    type Output = LogLinear;
    fn neg(self) -> LogLinear {
        LogLinear { terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect() }
    }
}

impl Sub for &LogLinear {
    type Output = LogLinear;
    fn sub(self, rhs: &LogLinear) -> LogLinear {
        self + &(-rhs)
    }
}

impl Sum for LogLinear {
    fn sum<I: Iterator<Item = LogLinear>>(iter: I) -> Self {
        let mut acc = LogLinear::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}
