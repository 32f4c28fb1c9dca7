use std::ops::{Add, Mul, Neg, Sub};

use super::BigFloat;

/// Complex number with [`BigFloat`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigFloat) -> Self {
        let im = BigFloat::zero(re.precision());
        Self { re, im }
    }

    pub fn zero(precision: u32) -> Self {
        Self::real(BigFloat::zero(precision))
    }

    pub fn one(precision: u32) -> Self {
        Self::real(BigFloat::one(precision))
    }

    pub fn from_i64(n: i64, precision: u32) -> Self {
        Self::real(BigFloat::from_i64(n, precision))
    }

    /// `r * e^(i theta)`.
    pub fn from_polar(r: &BigFloat, theta: &BigFloat) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(r * &c, r * &s)
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().min(self.im.precision())
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        Self::new(self.re.with_precision(precision), self.im.with_precision(precision))
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self::new(&self.re / &n, &(-&self.im) / &n)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self * &rhs.recip()
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powu(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.precision());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&(&self.re * &rhs.re) - &(&self.im * &rhs.im), &(&self.re * &rhs.im) + &(&self.im * &rhs.re))
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let a = BigComplex::new(BigFloat::from_i64(3, 128), BigFloat::from_i64(4, 128));
        assert_eq!(a.abs(), BigFloat::from_i64(5, 128));
        let one = a.div(&a);
        assert!((&one.re - &BigFloat::one(128)).abs() < BigFloat::from_f64(1e-35, 128));
        assert!(one.im.abs() < BigFloat::from_f64(1e-35, 128));
        let p = a.powu(3);
        assert_eq!(p.re, BigFloat::from_i64(-117, 128));
        assert_eq!(p.im, BigFloat::from_i64(44, 128));
    }

    #[test]
    fn polar_form() {
        let pi = BigFloat::pi(128);
        let z = BigComplex::from_polar(&BigFloat::from_i64(2, 128), &pi.ldexp(-1));
        assert!(z.re.abs() < BigFloat::from_f64(1e-35, 128));
        assert!((&z.im - &BigFloat::from_i64(2, 128)).abs() < BigFloat::from_f64(1e-35, 128));
    }
}
