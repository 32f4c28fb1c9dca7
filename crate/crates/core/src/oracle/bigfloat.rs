use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rational;

/// Binary floating point number `mantissa * 2^exponent` carrying its own
/// precision in bits.
///
/// Basic operations (`+ - * /`, `sqrt`) round to nearest-even from the exact
/// result. Binary operations work at the smaller of the operand precisions.
/// Transcendental functions are evaluated with guard bits and then rounded.
#[derive(Clone)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

const GUARD: u32 = 32;

impl BigFloat {
    pub fn zero(precision: u32) -> Self {
        Self { mantissa: BigInt::zero(), exponent: 0, precision }
    }

    pub fn one(precision: u32) -> Self {
        Self::from_i64(1, precision)
    }

    pub fn from_i64(n: i64, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), precision)
    }

    pub fn from_u64(n: u64, precision: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), precision)
    }

    pub fn from_bigint(n: &BigInt, precision: u32) -> Self {
        Self::normalize(n.clone(), 0, precision)
    }

    pub fn from_rational(x: &Rational, precision: u32) -> Self {
        let n = Self::from_bigint(x.numer(), precision + 2);
        let d = Self::from_bigint(x.denom(), precision + 2);
        div_exact(&n, &d, precision)
    }

    /// Exact conversion of a finite f64, then rounded.
    pub fn from_f64(x: f64, precision: u32) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Self::zero(precision);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0x000f_ffff_ffff_ffff;
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
        Self::normalize(BigInt::from(m) * sign, e, precision)
    }

    /// Value `m * 2^e` rounded to `precision` bits.
    pub fn from_parts(m: BigInt, e: i64, precision: u32) -> Self {
        Self::normalize(m, e, precision)
    }

    fn normalize(mut m: BigInt, mut e: i64, precision: u32) -> Self {
        assert!(precision >= 2, "precision must be at least 2 bits");
        if m.is_zero() {
            return Self::zero(precision);
        }
        let bits = m.bits();
        if bits > precision as u64 {
            let s = bits - precision as u64;
            m = round_shift(&m, s);
            e += s as i64;
            if m.bits() > precision as u64 {
                m >>= 1;
                e += 1;
            }
        }
        Self { mantissa: m, exponent: e, precision }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        Self::normalize(self.mantissa.clone(), self.exponent, precision)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self { mantissa: self.mantissa.abs(), ..self.clone() }
    }

    /// `self * 2^k`, exact.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { exponent: self.exponent + k, ..self.clone() }
    }

    /// `floor(log2 |x|) + 1` for nonzero x; `i64::MIN` for zero.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exponent + self.mantissa.bits() as i64
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let (m, e) = if bits > 64 {
            let s = bits - 64;
            ((&self.mantissa >> s).to_f64().unwrap(), self.exponent + s as i64)
        } else {
            (self.mantissa.to_f64().unwrap(), self.exponent)
        };
        m * 2f64.powi(e.clamp(-1100, 1100) as i32)
    }

    /// Nearest integer, ties away from zero.
    pub fn round_to_bigint(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            let s = (-self.exponent) as u64;
            let a = self.mantissa.abs();
            let q = (&a + (BigInt::one() << (s - 1))) >> s;
            if self.mantissa.is_negative() {
                -q
            } else {
                q
            }
        }
    }

    pub fn floor_to_bigint(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            let den = BigInt::one() << (-self.exponent) as u64;
            self.mantissa.div_floor(&den)
        }
    }

    /// `round(x * 2^w)`, the fixed-point image with `w` fraction bits.
    pub(crate) fn to_fixed(&self, w: u32) -> BigInt {
        let shift = self.exponent + w as i64;
        if shift >= 0 {
            &self.mantissa << shift as u64
        } else {
            round_shift(&self.mantissa, (-shift) as u64)
        }
    }

    pub(crate) fn from_fixed(v: BigInt, w: u32, precision: u32) -> Self {
        Self::normalize(v, -(w as i64), precision)
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.mantissa.sign(), other.mantissa.sign()) {
            (a, b) if a != b => return sign_rank(a).cmp(&sign_rank(b)),
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        a.cmp(&b)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        let p = self.precision as u64;
        let bits = self.mantissa.bits();
        let mut t = (2 * p + 4).saturating_sub(bits);
        if (self.exponent - t as i64).rem_euclid(2) == 1 {
            t += 1;
        }
        let n = &self.mantissa << t;
        let r = n.sqrt();
        let exact = &r * &r == n;
        let r = (r << 1) + if exact { 0 } else { 1 };
        Self::normalize(r, (self.exponent - t as i64) / 2 - 1, self.precision)
    }

    pub fn pi(precision: u32) -> Self {
        let w = precision + GUARD;
        Self::from_fixed(pi_fixed(w), w, precision)
    }

    pub fn ln2(precision: u32) -> Self {
        let w = precision + GUARD;
        Self::from_fixed(ln2_fixed(w), w, precision)
    }

    /// Euler's constant by the Brent-McMillan formula.
    pub fn euler_gamma(precision: u32) -> Self {
        let w = precision + GUARD;
        let n = ((w as f64) * std::f64::consts::LN_2 / 4.0).ceil() as u64 + 2;
        let one = BigInt::one() << w;
        let ln_n = Self::from_u64(n, w + 8).ln().to_fixed(w);
        let n2 = BigInt::from(n) * n;
        let mut a = -ln_n;
        let mut b = one;
        let mut u = a.clone();
        let mut v = b.clone();
        let mut k = 1u64;
        loop {
            b = &b * &n2 / (k * k);
            a = (&a * &n2 / k + &b) / k;
            u += &a;
            v += &b;
            if a.is_zero() && b.is_zero() {
                break;
            }
            k += 1;
        }
        Self::from_fixed((u << w) / v, w, precision)
    }

    pub fn exp(&self) -> Self {
        let prec = self.precision;
        if self.is_zero() {
            return Self::one(prec);
        }
        assert!(self.magnitude() < 48, "exp argument out of range");
        let w = prec + GUARD;
        let k = (self.to_f64() / std::f64::consts::LN_2).round() as i64;
        let wide = w + 64;
        let r = &self.with_precision(wide + 64) - &(&Self::ln2(wide + 64) * &Self::from_i64(k, wide + 64));
        let s = (w as f64).sqrt() as u32 / 2 + 1;
        let big_w = w + s + 16;
        let x = r.ldexp(-(s as i64)).to_fixed(big_w);
        let mut sum = BigInt::one() << big_w;
        let mut term = sum.clone();
        let mut n = 1u64;
        loop {
            term = ((&term * &x) >> big_w) / n;
            if term.is_zero() {
                break;
            }
            sum += &term;
            n += 1;
        }
        for _ in 0..s {
            sum = (&sum * &sum) >> big_w;
        }
        Self::normalize(sum, k - big_w as i64, prec)
    }

    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "logarithm of a non-positive number");
        let prec = self.precision;
        let bits = self.mantissa.bits() as i64;
        let mut e = self.exponent + bits;
        // f = m / 2^bits in [1/2, 1); move it into [1/sqrt 2, sqrt 2).
        let mut f = Self { mantissa: self.mantissa.clone(), exponent: -bits, precision: prec + GUARD };
        if f.mantissa.clone() * 1000 < (BigInt::one() << bits as u64) * 707 {
            f = f.ldexp(1);
            e -= 1;
        }
        let e_bits = 64 - (e.unsigned_abs()).leading_zeros();
        let w = prec + GUARD + e_bits;
        let one = BigInt::one() << w;
        let fx = f.to_fixed(w);
        let t = ((&fx - &one) << w) / (&fx + &one);
        let t2 = (&t * &t) >> w;
        let mut sum = t.clone();
        let mut power = t;
        let mut k = 1u64;
        loop {
            power = (&power * &t2) >> w;
            let term = &power / (2 * k + 1);
            if term.is_zero() {
                break;
            }
            sum += term;
            k += 1;
        }
        let total = ln2_fixed(w) * e + (sum << 1);
        Self::from_fixed(total, w, prec)
    }

    /// (sin x, cos x).
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.precision;
        let w = prec + GUARD;
        let two_pi_f = 2.0 * std::f64::consts::PI;
        let k = (self.to_f64() / two_pi_f).round() as i64;
        let wide = w + 64 + (64 - k.unsigned_abs().leading_zeros());
        let two_pi = Self::pi(wide).ldexp(1);
        let r = &self.with_precision(wide) - &(&two_pi * &Self::from_i64(k, wide));
        let s = (w as f64).sqrt() as u32 / 2 + 1;
        let big_w = w + 2 * s + 16;
        let x = r.ldexp(-(s as i64)).to_fixed(big_w);
        let mut c = BigInt::one() << big_w;
        let mut sn = x.clone();
        let mut term = x.clone();
        let mut n = 2u64;
        loop {
            term = ((&term * &x) >> big_w) / n;
            if term.is_zero() {
                break;
            }
            // term = x^n / n!
            match n % 4 {
                0 => c += &term,
                1 => sn += &term,
                2 => c -= &term,
                _ => sn -= &term,
            }
            n += 1;
        }
        for _ in 0..s {
            let c2 = ((&c * &c) - (&sn * &sn)) >> big_w;
            sn = (&c * &sn) >> (big_w - 1);
            c = c2;
        }
        (Self::from_fixed(sn, big_w, prec), Self::from_fixed(c, big_w, prec))
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        assert!(digits >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let bits = self.mantissa.bits();
        let top = if bits > 60 {
            (&self.mantissa.abs() >> (bits - 60)).to_f64().unwrap().log2() + (bits - 60) as f64
        } else {
            self.mantissa.abs().to_f64().unwrap().log2()
        };
        let log2 = top + self.exponent as f64;
        let mut e10 = (log2 * std::f64::consts::LOG10_2).floor() as i64;
        let lower = num_traits::pow(BigInt::from(10), digits - 1);
        let upper = &lower * 10;
        let n = loop {
            let j = digits as i64 - 1 - e10;
            let mut num = self.mantissa.abs();
            let mut den = BigInt::one();
            if j >= 0 {
                num *= num_traits::pow(BigInt::from(10), j as usize);
            } else {
                den *= num_traits::pow(BigInt::from(10), (-j) as usize);
            }
            if self.exponent >= 0 {
                num <<= self.exponent as u64;
            } else {
                den <<= (-self.exponent) as u64;
            }
            let n: BigInt = (2 * num + &den) / (2 * den);
            if n >= upper {
                e10 += 1;
            } else if n < lower {
                e10 -= 1;
            } else {
                break n;
            }
        };
        let s = n.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if (0..digits as i64).contains(&e10) {
            let (a, b) = s.split_at(e10 as usize + 1);
            if b.is_empty() {
                format!("{sign}{a}")
            } else {
                format!("{sign}{a}.{b}")
            }
        } else if (-6..0).contains(&e10) {
            format!("{sign}0.{}{s}", "0".repeat((-e10 - 1) as usize))
        } else {
            let (a, b) = s.split_at(1);
            format!("{sign}{a}.{b}e{e10}")
        }
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// `m / 2^s` rounded to nearest, ties to even.
fn round_shift(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let a = m.abs();
    let mut q = &a >> s;
    let rem = &a - (&q << s);
    let half = BigInt::one() << (s - 1);
    match rem.cmp(&half) {
        Ordering::Greater => q += 1,
        Ordering::Equal if q.is_odd() => q += 1,
        _ => {}
    }
    if m.is_negative() {
        -q
    } else {
        q
    }
}

fn div_exact(a: &BigFloat, b: &BigFloat, precision: u32) -> BigFloat {
    assert!(!b.is_zero(), "division by zero");
    if a.is_zero() {
        return BigFloat::zero(precision);
    }
    let shift = (precision as i64 + 3 + b.mantissa.bits() as i64 - a.mantissa.bits() as i64).max(0);
    let num = &a.mantissa << shift as u64;
    let (q, r) = num.div_rem(&b.mantissa);
    // Sticky bit keeps round-to-nearest exact.
    let q = (q << 1u32) + if r.is_zero() { 0 } else { q_sign(&num, &b.mantissa) };
    BigFloat::normalize(q, a.exponent - b.exponent - shift - 1, precision)
}

fn q_sign(n: &BigInt, d: &BigInt) -> i32 {
    if n.is_negative() != d.is_negative() {
        -1
    } else {
        1
    }
}

/// `sum (-1)^k / ((2k+1) n^(2k+1))` in fixed point.
fn atan_inv(n: u64, w: u32) -> BigInt {
    let n2 = BigInt::from(n) * n;
    let mut power = (BigInt::one() << w) / n;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &n2;
        let term = &power / (2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn atanh_inv(n: u64, w: u32) -> BigInt {
    let n2 = BigInt::from(n) * n;
    let mut power = (BigInt::one() << w) / n;
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &n2;
        let term = &power / (2 * k + 1);
        if term.is_zero() {
            break;
        }
        sum += term;
        k += 1;
    }
    sum
}

fn pi_fixed(w: u32) -> BigInt {
    let g = w + 16;
    let v = (atan_inv(5, g) * 4 - atan_inv(239, g)) * 4;
    round_shift(&v, 16)
}

fn ln2_fixed(w: u32) -> BigInt {
    let g = w + 16;
    round_shift(&(atanh_inv(3, g) * 2), 16)
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, {} bits)", self.to_decimal_string(20), self.precision)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision as f64) * std::f64::consts::LOG10_2).floor().max(1.0);
        f.write_str(&self.to_decimal_string(digits as usize))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Add for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        let prec = self.precision.min(rhs.precision);
        if self.is_zero() {
            return rhs.with_precision(prec);
        }
        if rhs.is_zero() {
            return self.with_precision(prec);
        }
        let (hi, lo) = if self.magnitude() >= rhs.magnitude() { (self, rhs) } else { (rhs, self) };
        // A summand far below the rounding position only matters as a sticky bit.
        let window = hi.magnitude() - prec as i64 - 8;
        if lo.magnitude() < window && lo.exponent < hi.exponent {
            let k = (hi.exponent - window).max(2);
            let m = (&hi.mantissa << k as u64) + lo.mantissa.signum();
            return BigFloat::normalize(m, hi.exponent - k, prec);
        }
        let e = hi.exponent.min(lo.exponent);
        let m = (&hi.mantissa << (hi.exponent - e) as u64) + (&lo.mantissa << (lo.exponent - e) as u64);
        BigFloat::normalize(m, e, prec)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mantissa: -&self.mantissa, ..self.clone() }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -&self
    }
}

impl Sub for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self + &(-rhs)
    }
}

impl Mul for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        let prec = self.precision.min(rhs.precision);
        BigFloat::normalize(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent, prec)
    }
}

impl Div for &BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &BigFloat) -> BigFloat {
        div_exact(self, rhs, self.precision.min(rhs.precision))
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    fn f(x: f64) -> BigFloat {
        BigFloat::from_f64(x, 200)
    }

    fn close(a: &BigFloat, b: f64, tol: f64) {
        assert!((a.to_f64() - b).abs() <= tol * b.abs().max(1.0), "{a:?} vs {b}");
    }

    #[test]
    fn constants() {
        let pi = BigFloat::pi(256);
        assert!(pi.to_decimal_string(60).starts_with("3.14159265358979323846264338327950288419716939937510582097494"));
        let ln2 = BigFloat::ln2(256);
        assert!(ln2.to_decimal_string(50) == ("0.69314718055994530941723212145817656807550013436026"));
        let gamma = BigFloat::euler_gamma(256);
        assert!(gamma.to_decimal_string(50).starts_with("0.57721566490153286060651209008240243104215933593992"));
    }

    #[test]
    fn exp_and_ln_round_trip() {
        for x in [-30.5, -3.0, -0.001, 0.25, 1.0, 2.5, 17.0, 100.0] {
            let v = f(x);
            close(&v.exp(), x.exp(), 1e-15);
            let back = v.exp().ln();
            assert!((&back - &v).abs() < BigFloat::from_f64(1e-55, 200));
        }
        let e = BigFloat::one(256).exp();
        assert!(e.to_decimal_string(50) == ("2.7182818284590452353602874713526624977572470937000"));
        let ln10 = BigFloat::from_i64(10, 256).ln();
        assert!(ln10.to_decimal_string(40).starts_with("2.302585092994045684017991454684364207601"));
    }

    #[test]
    fn sin_cos_values() {
        for x in [-7.0, -1.0, 0.1, 0.5, 1.0, 3.0, 12.0] {
            let (s, c) = f(x).sin_cos();
            close(&s, x.sin(), 1e-15);
            close(&c, x.cos(), 1e-15);
            let one = &(&s * &s) + &(&c * &c);
            assert!((&one - &BigFloat::one(200)).abs() < BigFloat::from_f64(1e-55, 200));
        }
    }

    #[test]
    fn sqrt_and_division_are_correctly_rounded() {
        let two = BigFloat::from_i64(2, 300);
        let r = two.sqrt();
        assert!(r.to_decimal_string(40) == ("1.414213562373095048801688724209698078570"));
        let third = &BigFloat::one(64) / &BigFloat::from_i64(3, 64);
        // 1/3 rounded to 64 bits: mantissa 0xAAAA...AAAB.
        assert_eq!(third.mantissa().to_str_radix(16), "aaaaaaaaaaaaaaab");
        assert_eq!(BigFloat::from_i64(144, 64).sqrt(), BigFloat::from_i64(12, 64));
    }

    #[test]
    fn addition_with_sticky_tail() {
        let big = BigFloat::from_i64(1, 10);
        let tiny = BigFloat::from_parts(BigInt::one(), -200, 10);
        let s = &big + &tiny;
        assert_eq!(s, BigFloat::one(10));
        let d = &big - &tiny;
        assert_eq!(d, BigFloat::one(10));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(BigFloat::from_i64(1728, 64).to_decimal_string(6), "1728.00");
        assert_eq!(BigFloat::from_i64(-3375, 64).to_decimal_string(4), "-3375");
        assert_eq!(f(0.001234).to_decimal_string(3), "0.00123");
        assert_eq!(f(1.5e40).to_decimal_string(3), "1.50e40");
    }
}
