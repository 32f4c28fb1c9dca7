use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Bases that make Miller-Rabin deterministic below 3.3 * 10^24.
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Signed prime factorization of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// +1 or -1.
    pub sign: i8,
    /// Primes in strictly increasing order with positive exponents.
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn product(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map(|(_, e)| *e).unwrap_or(0)
    }
}

/// Factors a nonzero integer: trial division below 10^6, then Miller-Rabin and
/// Brent's variant of Pollard rho on whatever cofactor remains.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::FactorZero);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();

    if let Some(small) = rest.to_u64() {
        let factors = factor_u64(small);
        return Ok(Factorization { sign, factors: factors.into_iter().map(|(p, e)| (BigInt::from(p), e)).collect() });
    }

    let mut d = 2u64;
    while d < TRIAL_LIMIT {
        let db = BigInt::from(d);
        if &db * &db > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&db);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            primes.push((db, e));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    if !rest.is_one() {
        let mut large = Vec::new();
        split_large(rest, &mut large);
        large.sort();
        for p in large {
            match primes.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => primes.push((p, 1)),
            }
        }
    }
    primes.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { sign, factors: primes })
}

fn split_large(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        for (p, e) in factor_u64(small) {
            out.extend(std::iter::repeat_n(BigInt::from(p), e as usize));
        }
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    // Rho is hopeless on p^k with large p; take exact roots first.
    for k in 2..=(n.bits() / 20) as u32 {
        let r = n.nth_root(k);
        if num_traits::pow(r.clone(), k as usize) == n {
            for _ in 0..k {
                split_large(r.clone(), out);
            }
            return;
        }
    }
    let d = pollard_brent(&n);
    let q = &n / &d;
    split_large(d, out);
    split_large(q, out);
}

fn pollard_brent(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r = 1u64;
        let mut q = BigInt::one();
        let m = 128u64;
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

/// Miller-Rabin with the first thirteen prime bases; deterministic below
/// 3.3 * 10^24.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1: BigInt = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
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

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Factors a positive machine integer into (prime, exponent) pairs, primes
/// increasing. `factor_u64(1)` is empty.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n != 0, "cannot factor zero");
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut rest = n;
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    };
    let mut d = 2u64;
    while d * d <= rest && d < TRIAL_LIMIT {
        while rest.is_multiple_of(d) {
            push(d, &mut out);
            rest /= d;
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            push(m, &mut out);
        } else {
            let f = rho_u64(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn small_examples() {
        let f = factor(&big(3375)).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, vec![(big(3), 3), (big(5), 3)]);

        let f = factor(&big(1)).unwrap();
        assert!(f.is_unit());
        assert_eq!(f.sign, 1);

        let f = factor(&big(-1728)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, vec![(big(2), 6), (big(3), 3)]);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(factor(&big(0)), Err(Error::FactorZero));
    }

    #[test]
    fn large_semiprime_needs_rho() {
        // (10^9 + 7) * (10^9 + 9) * 2^3
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(1_000_000_009u64);
        let n = &p * &q * 8;
        let f = factor(&n).unwrap();
        assert_eq!(f.factors, vec![(big(2), 3), (p, 1), (q, 1)]);
        assert_eq!(f.product(), n);
    }

    #[test]
    fn beyond_u64() {
        let p = BigInt::from(18_446_744_073_709_551_557u64); // largest prime below 2^64
        let n = &p * &p * 3 * -1;
        let f = factor(&n).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, vec![(big(3), 1), (p, 2)]);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..200).filter(|&n| is_prime_u64(n)).collect();
        let sieve: Vec<u64> = (2..200u64).filter(|n| (2..*n).take_while(|d| d * d <= *n).all(|d| n % d != 0)).collect();
        assert_eq!(primes, sieve);
        assert!(is_prime(&BigInt::parse_bytes(b"170141183460469231731687303715884105727", 10).unwrap()));
        assert!(!is_prime(&BigInt::parse_bytes(b"170141183460469231731687303715884105729", 10).unwrap()));
    }
}
