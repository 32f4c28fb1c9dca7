//! Exact arithmetic: rationals, Kronecker and Hilbert symbols, factorization,
//! Hensel square roots and the formal log-linear value type.

mod factor;
mod gaussian;
mod loglinear;
mod sqrtmod;
mod symbols;

pub use factor::{factor, factor_u64, is_prime, is_prime_u64, Factorization};
pub use gaussian::GaussianRational;
pub use loglinear::LogLinear;
pub use sqrtmod::sqrt_mod_prime_power;
pub use symbols::{hasse_invariant, hilbert_symbol, kronecker, kronecker_i64, Place};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The field Q. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// p-adic valuation of a nonzero integer.
pub fn ord_p(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn ord_p_rational(x: &Rational, p: u64) -> i64 {
    ord_p(x.numer(), p) as i64 - ord_p(x.denom(), p) as i64
}

/// Residue of the p-adic unit part of a nonzero rational, modulo `modulus`
/// (a power of p). The unit part is `x / p^ord_p(x)`.
pub(crate) fn unit_residue(x: &Rational, p: u64, modulus: u64) -> u64 {
    let pb = BigInt::from(p);
    let strip = |n: &BigInt| {
        let mut n = n.clone();
        while (&n % &pb).is_zero() {
            n /= &pb;
        }
        n
    };
    let m = BigInt::from(modulus);
    let num = strip(x.numer()).mod_floor(&m);
    let den = strip(x.denom()).mod_floor(&m);
    let inv = mod_inverse(&den, &m).expect("unit part is invertible");
    (num * inv).mod_floor(&m).to_u64().expect("residue fits")
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn is_squarefree(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

/// True when `d` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_discriminants() {
        let fundamental: Vec<i64> = (-40..0).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(fundamental, vec![-40, -39, -35, -31, -24, -23, -20, -19, -15, -11, -8, -7, -4, -3]);
        assert!(is_fundamental_discriminant(5));
        assert!(is_fundamental_discriminant(12));
        assert!(!is_fundamental_discriminant(-12));
        assert!(!is_fundamental_discriminant(-16));
    }
}
