use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ord_p_rational, unit_residue, Rational};
use crate::{Error, Result};

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// (2/n) for odd n, indexed by n mod 8.
const TWO_TABLE: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// The Kronecker symbol (a/n).
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    let mut a = a.clone();
    let mut b = n.clone();
    if b.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    if a.is_even() && b.is_even() {
        return 0;
    }
    let v = b.trailing_zeros().unwrap_or(0);
    b >>= v;
    let mut k: i8 = if v.is_multiple_of(2) { 1 } else { TWO_TABLE[mod_small(&a, 8)] };
    if b.is_negative() {
        b = -b;
        if a.is_negative() {
            k = -k;
        }
    }
    // b is odd and positive from here on.
    loop {
        if a.is_zero() {
            return if b.is_one() { k } else { 0 };
        }
        let v = a.trailing_zeros().unwrap_or(0);
        a >>= v;
        if v % 2 == 1 {
            k *= TWO_TABLE[mod_small(&b, 8)];
        }
        if mod_small(&a, 4) == 3 && mod_small(&b, 4) == 3 {
            k = -k;
        }
        let r = a.abs();
        a = b.mod_floor(&r);
        b = r;
    }
}

pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

fn mod_small(a: &BigInt, m: u32) -> usize {
    let r = a.mod_floor(&BigInt::from(m));
    r.iter_u32_digits().next().unwrap_or(0) as usize
}

fn legendre_u64(a: u64, p: u64) -> i8 {
    kronecker(&BigInt::from(a), &BigInt::from(p))
}

/// The Hilbert symbol (a, b) at a place of Q, by the closed-form rules
/// (signs at infinity, Legendre symbols of unit parts at odd p, and the
/// epsilon/omega invariants mod 8 at p = 2).
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Precondition("Hilbert symbol of zero".into()));
    }
    let p = match place {
        Place::Infinity => return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(p) => p,
    };
    let alpha = ord_p_rational(a, p);
    let beta = ord_p_rational(b, p);
    if p == 2 {
        let u = unit_residue(a, 2, 8);
        let v = unit_residue(b, 2, 8);
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let e = eps(u) * eps(v) + (alpha.rem_euclid(2) as u64) * omega(v) + (beta.rem_euclid(2) as u64) * omega(u);
        return Ok(if e.is_multiple_of(2) { 1 } else { -1 });
    }
    let u = unit_residue(a, p, p);
    let v = unit_residue(b, p, p);
    let mut s: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
        s = -s;
    }
    if beta.rem_euclid(2) == 1 {
        s *= legendre_u64(u, p);
    }
    if alpha.rem_euclid(2) == 1 {
        s *= legendre_u64(v, p);
    }
    Ok(s)
}

/// Hasse invariant `prod_{i<j} (a_i, a_j)` of a diagonal form.
pub fn hasse_invariant(diag: &[Rational], place: Place) -> Result<i8> {
    if diag.is_empty() {
        return Err(Error::Precondition("empty diagonal form".into()));
    }
    let mut s = 1;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            s *= hilbert_symbol(&diag[i], &diag[j], place)?;
        }
    }
    Ok(s)
}
