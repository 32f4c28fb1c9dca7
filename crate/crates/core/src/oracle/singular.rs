use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{hilbert_class_poly_auto, resultant, ClassPolynomial, IntPoly};
use crate::arith::{factor, LogLinear, Rational};
use crate::eisenstein::deg_t_m;
use crate::field::Setup;
use crate::{Error, Result};

/// Precision doublings allowed before a class polynomial is given up on.
const ATTEMPTS: u32 = 4;

/// Both sides of `deg T_1 = 8/(w1 w2) sum_p ord_p(Res(H_d1, H_d2)) log p`.
#[derive(Clone, Debug, Serialize)]
pub struct SingularModuliReport {
    pub d1: i64,
    pub d2: i64,
    pub h1: usize,
    pub h2: usize,
    #[serde(serialize_with = "display")]
    pub class_poly1: IntPoly,
    #[serde(serialize_with = "display")]
    pub class_poly2: IntPoly,
    /// `|Res(H_d1, H_d2)|`.
    #[serde(serialize_with = "display")]
    pub resultant: BigInt,
    /// Prime factorization of `|Res|` as (prime, exponent) string pairs.
    pub factorization: Vec<(String, u32)>,
    /// `deg T_1` from the exact formulas.
    pub lhs: LogLinear,
    /// `8/(w1 w2) log|Res|`.
    pub rhs: LogLinear,
    pub passed: bool,
    /// Bits used for the class polynomials.
    pub precision: [u32; 2],
    /// Largest coefficient rounding distance of either class polynomial.
    pub max_rounding_distance: f64,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn class_polys(setup: &Setup, precision: Option<u32>) -> Result<(ClassPolynomial, ClassPolynomial)> {
    let h1 = hilbert_class_poly_auto(setup.d1(), precision, ATTEMPTS)?;
    let h2 = hilbert_class_poly_auto(setup.d2(), precision, ATTEMPTS)?;
    Ok((h1, h2))
}

/// `c log|n|` as an exact log-linear value; `n` must be a nonzero integer
/// whose prime factors fit in 64 bits.
fn scaled_log(n: &BigInt, c: &Rational) -> Result<(LogLinear, Vec<(String, u32)>)> {
    let f = factor(n)?;
    let mut out = LogLinear::zero();
    let mut pairs = Vec::with_capacity(f.factors.len());
    for (p, e) in &f.factors {
        let q = p.to_u64().ok_or_else(|| Error::Overflow(format!("prime factor {p}")))?;
        out.add_term(q, c * Rational::from_integer((*e).into()));
        pairs.push((p.to_string(), *e));
    }
    Ok((out, pairs))
}

/// The calibrated Gross-Zagier check at `m = 1`. The class polynomials start at
/// `precision` bits (default from the class group) and double on rounding
/// failure.
pub fn singular_moduli_check(setup: &Setup, precision: Option<u32>) -> Result<SingularModuliReport> {
    let (h1, h2) = class_polys(setup, precision)?;
    let r = resultant(&h1.poly, &h2.poly)?.abs();
    if r.is_zero() {
        return Err(Error::Inconsistent("class polynomials share a root".into()));
    }
    let c = Rational::new(8.into(), (setup.w1() * setup.w2()).into());
    let (rhs, factorization) = scaled_log(&r, &c)?;
    let lhs = deg_t_m(setup, 1)?;
    Ok(SingularModuliReport {
        d1: setup.d1(),
        d2: setup.d2(),
        h1: h1.roots.len(),
        h2: h2.roots.len(),
        passed: lhs == rhs,
        class_poly1: h1.poly.clone(),
        class_poly2: h2.poly.clone(),
        resultant: r,
        factorization,
        lhs,
        rhs,
        precision: [h1.precision, h2.precision],
        max_rounding_distance: h1.max_rounding_distance.max(h2.max_rounding_distance),
    })
}

/// The classical modular polynomial `Phi_2(X, Y)` as `(i, j, c)` with
/// `c X^i Y^j`.
const PHI2: [(u32, u32, i64); 11] = [
    (3, 0, 1),
    (0, 3, 1),
    (2, 2, -1),
    (2, 1, 1488),
    (1, 2, 1488),
    (2, 0, -162_000),
    (0, 2, -162_000),
    (1, 1, 40_773_375),
    (1, 0, 8_748_000_000),
    (0, 1, 8_748_000_000),
    (0, 0, -157_464_000_000_000),
];

/// `Phi_2(x, Y)` as a polynomial in `Y`.
fn phi2_at(x: &BigInt) -> IntPoly {
    let mut c = vec![BigInt::zero(); 4];
    for &(i, j, k) in &PHI2 {
        c[j as usize] += BigInt::from(k) * num_traits::pow(x.clone(), i as usize);
    }
    IntPoly::new(c)
}

/// Integer polynomial of degree at most `n - 1` through `(x_i, y_i)`,
/// `x_i = 0..n`, by Newton divided differences.
fn interpolate(ys: &[BigInt]) -> Result<IntPoly> {
    let n = ys.len();
    let mut dd: Vec<Rational> = ys.iter().map(|y| Rational::from_integer(y.clone())).collect();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / Rational::from_integer(BigInt::from(k));
        }
    }
    // expand sum dd[k] prod_{i<k} (X - i)
    let mut out = vec![Rational::zero(); n];
    let mut basis = vec![Rational::one()];
    for (k, d) in dd.iter().enumerate() {
        for (o, b) in out.iter_mut().zip(&basis) {
            *o += d * b;
        }
        let mut next = vec![Rational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b;
            next[i] -= b * Rational::from_integer(BigInt::from(k));
        }
        basis = next;
    }
    let coeffs = out
        .into_iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::Inconsistent(format!("non-integral interpolated coefficient {c}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPoly::new(coeffs))
}

/// Experimental `m = 2` analogue: both sides of
/// `deg T_2 = 8/(w1 w2) log|prod Phi_2(j1, j2)|`. No agreement is claimed.
#[derive(Clone, Debug, Serialize)]
pub struct HeckeTwoReport {
    pub d1: i64,
    pub d2: i64,
    #[serde(serialize_with = "display")]
    pub norm: BigInt,
    pub lhs: LogLinear,
    pub rhs: LogLinear,
    pub passed: bool,
}

pub fn hecke_two_check(setup: &Setup, precision: Option<u32>) -> Result<HeckeTwoReport> {
    let (h1, h2) = class_polys(setup, precision)?;
    // G(x) = Res_Y(H_d2(Y), Phi_2(x, Y)) has degree 3 h2 in x.
    let deg = 3 * h2.roots.len();
    let ys = (0..=deg).map(|a| resultant(&h2.poly, &phi2_at(&BigInt::from(a)))).collect::<Result<Vec<_>>>()?;
    let g = interpolate(&ys)?;
    let norm = resultant(&h1.poly, &g)?.abs();
    if norm.is_zero() {
        return Err(Error::Inconsistent("Phi_2 vanishes on a pair of singular moduli".into()));
    }
    let c = Rational::new(8.into(), (setup.w1() * setup.w2()).into());
    let (rhs, _) = scaled_log(&norm, &c)?;
    let lhs = deg_t_m(setup, 2)?;
    Ok(HeckeTwoReport { d1: setup.d1(), d2: setup.d2(), passed: lhs == rhs, norm, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn classical_examples() {
        let r = singular_moduli_check(&Setup::new(-3, -7).unwrap(), None).unwrap();
        assert_eq!(r.resultant, BigInt::from(3375));
        assert_eq!(r.factorization, vec![("3".to_string(), 3), ("5".to_string(), 3)]);
        assert_eq!(r.rhs, LogLinear::from_terms([(3, rat(2, 1)), (5, rat(2, 1))]).unwrap());
        assert!(r.passed);
        let r = singular_moduli_check(&Setup::new(-3, -4).unwrap(), None).unwrap();
        assert_eq!(r.resultant, BigInt::from(1728));
        assert!(r.passed);
        let r = singular_moduli_check(&Setup::new(-4, -7).unwrap(), None).unwrap();
        assert_eq!(r.resultant, BigInt::from(5103));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = IntPoly::from_i64(&[-7, 0, 3, -2, 1]);
        let ys: Vec<BigInt> = (0..5).map(|a| p.eval(&BigInt::from(a))).collect();
        assert_eq!(interpolate(&ys).unwrap(), p);
    }

    #[test]
    fn phi2_is_symmetric_and_vanishes_on_isogenous_pairs() {
        // j = 1728 is 2-isogenous to j = 287496 (CM by Z[2i]).
        let p = phi2_at(&BigInt::from(1728));
        assert!(p.eval(&BigInt::from(287_496)).is_zero());
        let q = phi2_at(&BigInt::from(287_496));
        assert!(q.eval(&BigInt::from(1728)).is_zero());
    }
}
