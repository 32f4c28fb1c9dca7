use num_bigint::BigInt;
use num_integer::Roots;

use super::{principal_ideal, FElem, FIdealFactored, Setup};
use crate::arith::Rational;
use crate::{Error, Result};

/// A totally positive `alpha` in the inverse different with trace `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSliceElement {
    pub m: i64,
    /// `alpha = m/2 + (x / 2D) sqrt(D)`.
    pub x: i64,
    pub alpha: FElem,
    /// `|N(alpha sqrt D)| = (m^2 D - x^2) / 4`.
    pub n: BigInt,
    /// The factored ideal `alpha D = (alpha sqrt D)`.
    pub ideal: FIdealFactored,
}

fn element(setup: &Setup, m: i64, x: i64) -> FElem {
    let d = setup.big_d();
    FElem::new(Rational::new(m.into(), 2.into()), Rational::new(x.into(), (2 * d).into()))
}

/// Elements `alpha = m/2 + (x/2D) sqrt(D)` with `x = mD mod 2` and
/// `x^2 < m^2 D`, sorted by `x`.
pub fn enumerate_trace_slice(setup: &Setup, m: i64) -> Result<Vec<TraceSliceElement>> {
    if m < 1 {
        return Err(Error::Precondition(format!("trace must be positive, got {m}")));
    }
    let d = setup.big_d();
    let bound =
        m.checked_mul(m).and_then(|v| v.checked_mul(d)).ok_or_else(|| Error::Overflow(format!("m^2 D for m = {m}")))?;
    let mut x_max = (bound - 1).sqrt();
    if (x_max - m * d).rem_euclid(2) != 0 {
        x_max -= 1;
    }
    let mut out = Vec::new();
    let mut x = -x_max;
    while x <= x_max {
        let alpha = element(setup, m, x);
        let beta = setup.mul(&alpha, &setup.sqrt_d());
        debug_assert!(setup.is_integral(&beta) && setup.is_totally_positive(&alpha));
        out.push(TraceSliceElement {
            m,
            x,
            n: BigInt::from((bound - x * x) / 4),
            ideal: principal_ideal(setup, &beta)?,
            alpha,
        });
        x += 2;
    }
    Ok(out)
}

/// Mixed-signature elements `m/2 + (x/2D) sqrt(D)` of the inverse different
/// with `|sigma_1| + |sigma_2| <= bound`, that is `m^2 D < x^2 <= bound^2 D`.
/// Sorted by `(m, x)`. Each returns `(m, x, alpha)`.
pub fn enumerate_mixed(setup: &Setup, bound: i64) -> Result<Vec<(i64, i64, FElem)>> {
    if bound < 1 {
        return Err(Error::Precondition(format!("bound must be positive, got {bound}")));
    }
    let d = setup.big_d();
    let top = bound
        .checked_mul(bound)
        .and_then(|v| v.checked_mul(d))
        .ok_or_else(|| Error::Overflow(format!("bound^2 D for {bound}")))?;
    let x_max = top.sqrt();
    let mut out = Vec::new();
    for m in -(bound - 1)..bound {
        for x in -x_max..=x_max {
            if (x - m * d).rem_euclid(2) != 0 || x * x <= m * m * d {
                continue;
            }
            out.push((m, x, element(setup, m, x)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn slices_of_small_setups() {
        let s = Setup::new(-3, -7).unwrap();
        let e = enumerate_trace_slice(&s, 1).unwrap();
        assert_eq!(e.iter().map(|t| t.x).collect::<Vec<_>>(), vec![-3, -1, 1, 3]);
        assert_eq!(e.iter().map(|t| t.n.clone()).collect::<Vec<_>>(), [3, 5, 5, 3].map(BigInt::from));
        let s = Setup::new(-3, -4).unwrap();
        let e = enumerate_trace_slice(&s, 1).unwrap();
        assert_eq!(e.iter().map(|t| t.x).collect::<Vec<_>>(), vec![-2, 0, 2]);
        assert_eq!(e.iter().map(|t| t.n.clone()).collect::<Vec<_>>(), [2, 3, 2].map(BigInt::from));
        assert!(enumerate_trace_slice(&s, 0).is_err());
    }

    #[test]
    fn slice_invariants() {
        for (d1, d2) in [(-3, -7), (-3, -4), (-4, -7), (-3, -8), (-7, -23)] {
            let s = Setup::new(d1, d2).unwrap();
            for m in 1..=8 {
                let e = enumerate_trace_slice(&s, m).unwrap();
                let xs: Vec<i64> = e.iter().map(|t| t.x).collect();
                assert!(xs.windows(2).all(|w| w[0] < w[1]));
                let mut neg: Vec<i64> = xs.iter().map(|x| -x).collect();
                neg.reverse();
                assert_eq!(xs, neg);
                for t in &e {
                    assert_eq!(t.alpha.trace(), Rational::from_integer(m.into()));
                    assert!(s.is_totally_positive(&t.alpha));
                    assert!(s.is_integral(&s.mul(&t.alpha, &s.sqrt_d())));
                    assert_eq!(t.ideal.norm(), Rational::from_integer(t.n.clone()));
                }
            }
        }
    }

    #[test]
    fn mixed_elements_have_mixed_signs() {
        let s = Setup::new(-3, -7).unwrap();
        let e = enumerate_mixed(&s, 2).unwrap();
        assert!(!e.is_empty());
        for (_, _, a) in &e {
            assert_ne!(s.sign(a, 1), s.sign(a, 2));
            assert_ne!(s.sign(a, 1), Ordering::Equal);
            assert!(s.is_integral(&s.mul(a, &s.sqrt_d())));
        }
        assert!(e.iter().any(|(m, x, _)| (*m, *x) == (1, 5)));
    }
}
