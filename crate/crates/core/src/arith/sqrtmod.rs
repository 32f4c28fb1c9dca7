use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{kronecker, mod_inverse};
use crate::{Error, Result};

/// A square root of `d` modulo `p^k`.
///
/// For odd `p` the result is the Hensel lift of the least nonnegative root
/// modulo `p`; for `p = 2` it is the 2-adic root congruent to 1 mod 4, reduced
/// modulo `2^k`. These choices fix the labelling of the two primes above a
/// split `p`.
pub fn sqrt_mod_prime_power(d: &BigInt, p: u64, k: u32) -> Result<BigInt> {
    let no_root = || Error::NoSquareRoot { value: d.to_string(), prime: p, exponent: k };
    if k == 0 {
        return Ok(BigInt::zero());
    }
    if p == 2 {
        if d.mod_floor(&BigInt::from(8)) != BigInt::one() {
            return Err(no_root());
        }
        return Ok(sqrt_mod_two_power(d, k));
    }
    if kronecker(d, &BigInt::from(p)) != 1 {
        return Err(no_root());
    }
    let residue = d.mod_floor(&BigInt::from(p)).to_u64().expect("residue < p");
    let mut r = BigInt::from(tonelli_shanks(residue, p));
    let pb = BigInt::from(p);
    let mut precision = 1u32;
    while precision < k {
        precision = (2 * precision).min(k);
        let modulus = num_traits::pow(pb.clone(), precision as usize);
        let fx = (&r * &r - d).mod_floor(&modulus);
        let inv = mod_inverse(&(&r * 2), &modulus).expect("2r is a unit");
        r = (&r - fx * inv).mod_floor(&modulus);
    }
    Ok(r)
}

fn sqrt_mod_two_power(d: &BigInt, k: u32) -> BigInt {
    if k <= 2 {
        return BigInt::one();
    }
    // Invariant: r == 1 mod 4 and r^2 == d mod 2^(j+1).
    let mut r = BigInt::one();
    for j in 3..=k {
        let modulus = BigInt::one() << (j + 1);
        if (&r * &r - d).mod_floor(&modulus) != BigInt::zero() {
            r += BigInt::one() << (j - 1);
        }
    }
    r.mod_floor(&(BigInt::one() << k))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Least nonnegative square root of a quadratic residue modulo an odd prime.
fn tonelli_shanks(a: u64, p: u64) -> u64 {
    if a == 0 {
        return 0;
    }
    let root = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let mut z = 2;
        while pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    root.min(p - root)
}
