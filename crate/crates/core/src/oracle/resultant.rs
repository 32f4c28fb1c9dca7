use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Integer polynomial, coefficients from the constant term up, with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn div_scalar(&self, s: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % s).is_zero());
                    c / s
                })
                .collect(),
        )
    }

    /// Pseudo-remainder of `self` by `b`: `lc(b)^(deg self - deg b + 1) self mod b`.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("nonzero divisor");
        let lb = b.leading();
        let mut r = self.coeffs.clone();
        let mut e = self.coeffs.len() - db;
        while r.len() > db && !r.is_empty() {
            let lr = r.last().cloned().unwrap();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[shift + i] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            e -= 1;
        }
        let scale = num_traits::pow(lb, e);
        Self::new(r.into_iter().map(|c| c * &scale).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                _ => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => f.write_str("X")?,
                _ => write!(f, "X^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Resultant by the subresultant algorithm, with the convention
/// `Res(P, Q) = lc(P)^deg(Q) * prod_{P(r) = 0} Q(r)`, which is the Sylvester
/// determinant with the coefficients of `P` in the first rows.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> Result<BigInt> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::Precondition("resultant of the zero polynomial".into()));
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut sign = BigInt::one();
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            sign = -sign;
        }
    }
    let (da0, db0) = (a.degree().unwrap(), b.degree().unwrap());
    if db0 == 0 {
        return Ok(sign * num_traits::pow(b.leading(), da0));
    }
    let (ca, cb) = (a.content(), b.content());
    a = a.div_scalar(&ca);
    b = b.div_scalar(&cb);
    let t = num_traits::pow(ca, db0) * num_traits::pow(cb, da0);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = r.div_scalar(&divisor);
        g = a.leading();
        // h = g^delta / h^(delta - 1)
        h = if delta == 0 { h } else { num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1) };
        match b.degree() {
            None => return Ok(BigInt::zero()),
            Some(0) => {
                let da = a.degree().unwrap();
                let lb = b.leading();
                let h = if da == 0 { h } else { num_traits::pow(lb, da) / num_traits::pow(h, da - 1) };
                return Ok(sign * t * h);
            }
            Some(_) => {}
        }
    }
}

/// Sylvester matrix determinant by fraction-free Gaussian elimination.
pub fn sylvester_resultant(p: &IntPoly, q: &IntPoly) -> Result<BigInt> {
    let (m, n) = match (p.degree(), q.degree()) {
        (Some(m), Some(n)) => (m, n),
        _ => return Err(Error::Precondition("resultant of the zero polynomial".into())),
    };
    let size = m + n;
    if size == 0 {
        return Ok(BigInt::one());
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for (i, row) in mat.iter_mut().enumerate().take(n) {
        for (j, c) in p.coeffs.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in q.coeffs.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

pub(crate) fn bareiss_det(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let size = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_cases() {
        let x = IntPoly::from_i64(&[0, 1]);
        assert_eq!(resultant(&x, &IntPoly::from_i64(&[3375, 1])).unwrap(), BigInt::from(3375));
        assert_eq!(resultant(&x, &IntPoly::from_i64(&[-1728, 1])).unwrap(), BigInt::from(-1728));
    }

    #[test]
    fn common_root_gives_zero() {
        let p = IntPoly::from_i64(&[-6, 11, -6, 1]);
        assert_eq!(resultant(&p, &p).unwrap(), BigInt::zero());
        let q = IntPoly::from_i64(&[-2, 1]);
        assert_eq!(resultant(&p, &q).unwrap(), BigInt::zero());
    }

    #[test]
    fn rejects_zero() {
        assert!(resultant(&IntPoly::new(vec![]), &IntPoly::from_i64(&[1])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[3375, 1]).to_string(), "X + 3375");
        assert_eq!(IntPoly::from_i64(&[-1, 0, -2, 1]).to_string(), "X^3 - 2*X^2 - 1");
    }

    proptest! {
        #[test]
        fn matches_sylvester(
            p in prop::collection::vec(-20i64..20, 1..6),
            q in prop::collection::vec(-20i64..20, 1..6),
        ) {
            let p = IntPoly::from_i64(&p);
            let q = IntPoly::from_i64(&q);
            prop_assume!(!p.is_zero() && !q.is_zero());
            prop_assert_eq!(resultant(&p, &q).unwrap(), sylvester_resultant(&p, &q).unwrap());
        }

        #[test]
        fn product_of_root_values(
            roots in prop::collection::vec(-9i64..9, 1..4),
            q in prop::collection::vec(-9i64..9, 1..5),
        ) {
            let mut p = IntPoly::from_i64(&[1]);
            for r in &roots {
                let mut c = vec![BigInt::zero(); p.coeffs().len() + 1];
                for (i, a) in p.coeffs().iter().enumerate() {
                    c[i + 1] += a;
                    c[i] -= a * r;
                }
                p = IntPoly::new(c);
            }
            let q = IntPoly::from_i64(&q);
            prop_assume!(!q.is_zero());
            let expect: BigInt = roots.iter().map(|r| q.eval(&BigInt::from(*r))).product();
            prop_assert_eq!(resultant(&p, &q).unwrap(), expect);
        }
    }
}
