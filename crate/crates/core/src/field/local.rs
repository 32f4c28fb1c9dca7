use num_traits::Zero;

use super::{FElem, Setup};
use crate::arith::{factor, hasse_invariant, hilbert_symbol, Place, Rational};
use crate::{Error, Result};

/// Diagonal of `x -> Tr(alpha N_{K/F}(x))` over Q, as the orthogonal sum of
/// `t -> Tr(alpha t^2)` and `t -> Tr(-d1 alpha t^2)`.
///
/// For `beta = u + v sqrt(D)` with `u != 0`, the Gram matrix of
/// `Tr(beta t^2)` in the basis `{1, sqrt D}` is `[[2u, 2Dv], [2Dv, 2Du]]`,
/// which is congruent to `diag(2u, 2D N(beta) / u)`.
pub fn quadratic_form_diagonal(setup: &Setup, alpha: &FElem) -> Result<[Rational; 4]> {
    if !setup.is_totally_positive(alpha) {
        return Err(Error::NotTotallyPositive(alpha.to_string()));
    }
    let d = Rational::from_integer(setup.big_d().into());
    let two = Rational::from_integer(2.into());
    let binary = |b: &FElem| {
        let n = setup.norm(b);
        [&two * &b.u, &two * &d * n / &b.u]
    };
    let second = alpha.scale(&Rational::from_integer((-setup.d1()).into()));
    let [a, b] = binary(alpha);
    let [c, e] = binary(&second);
    Ok([a, b, c, e])
}

/// `inv_l(alpha)`: the Hasse invariant of the form above times `(-1,-1)_l`.
pub fn local_invariant(setup: &Setup, alpha: &FElem, place: Place) -> Result<i8> {
    let diag = quadratic_form_diagonal(setup, alpha)?;
    let minus_one = -Rational::from_integer(1.into());
    Ok(hasse_invariant(&diag, place)? * hilbert_symbol(&minus_one, &minus_one, place)?)
}

/// `inv*_l(alpha)`: `inv_l` with the sign flipped at infinity.
pub fn local_invariant_star(setup: &Setup, alpha: &FElem, place: Place) -> Result<i8> {
    let v = local_invariant(setup, alpha, place)?;
    Ok(if place == Place::Infinity { -v } else { v })
}

/// The places where `inv*` is `-1`. Only 2 and the primes dividing the
/// diagonal entries can occur. Infinity never does for totally positive
/// `alpha`, so the result is a sorted list of rational primes.
pub fn support(setup: &Setup, alpha: &FElem) -> Result<Vec<u64>> {
    let diag = quadratic_form_diagonal(setup, alpha)?;
    let mut candidates = vec![2u64];
    for x in &diag {
        debug_assert!(!x.is_zero());
        for part in [x.numer(), x.denom()] {
            for (p, _) in factor(part)?.factors {
                candidates.push(p.try_into().map_err(|_| Error::Overflow("prime above u64".into()))?);
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    let mut out = Vec::new();
    for p in candidates {
        if local_invariant_star(setup, alpha, Place::Finite(p))? == -1 {
            out.push(p);
        }
    }
    if local_invariant_star(setup, alpha, Place::Infinity)? == -1 {
        return Err(Error::Precondition(format!("support of {alpha} contains infinity")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::field::enumerate_trace_slice;

    #[test]
    fn diagonal_of_a_small_element() {
        let s = Setup::new(-3, -7).unwrap();
        let a = FElem::new(rat(1, 2), rat(1, 42));
        let diag = quadratic_form_diagonal(&s, &a).unwrap();
        assert_eq!(diag, [rat(1, 1), rat(20, 1), rat(3, 1), rat(60, 1)]);
        assert_eq!(local_invariant(&s, &a, Place::Finite(5)).unwrap(), -1);
        assert_eq!(local_invariant(&s, &a, Place::Finite(3)).unwrap(), 1);
        assert_eq!(support(&s, &a).unwrap(), vec![5]);
        assert!(support(&s, &FElem::new(rat(1, 2), rat(-5, 42))).is_err());
    }

    #[test]
    fn product_formula_and_odd_support() {
        for (d1, d2) in [(-3, -7), (-3, -4), (-4, -7), (-7, -8), (-7, -23)] {
            let s = Setup::new(d1, d2).unwrap();
            for m in 1..=5 {
                for t in enumerate_trace_slice(&s, m).unwrap() {
                    let sup = support(&s, &t.alpha).unwrap();
                    assert_eq!(sup.len() % 2, 1, "({d1},{d2}) {}", t.alpha);
                    // inv over finite places times inv at infinity is +1
                    let finite: i8 = if sup.len() % 2 == 1 { -1 } else { 1 };
                    let inf = local_invariant(&s, &t.alpha, Place::Infinity).unwrap();
                    assert_eq!(finite * inf, 1);
                }
            }
        }
    }
}
