use num_traits::Zero;
use rayon::prelude::*;

use super::coefficients::closed_form;
use super::whittaker::AlphaData;
use crate::arith::{LogLinear, Rational};
use crate::field::{enumerate_trace_slice, FElem, FPrimeIdeal, Setup};
use crate::genus::{f_p, rho};
use crate::{Error, Result};

/// Degree of the CM cycle attached to `alpha`, with the data behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientReport {
    pub alpha: FElem,
    pub diff: Vec<FPrimeIdeal>,
    /// `a_alpha` from the coefficient formula.
    pub a_alpha: LogLinear,
    /// `deg X_alpha`.
    pub deg_x: LogLinear,
    pub reflex_prime: Option<FPrimeIdeal>,
    /// `nu_P(alpha) = ord_P(alpha P D) / 2`.
    pub nu: Option<Rational>,
}

/// `deg X_alpha = ord_P(alpha P D) rho(alpha D P^-1) log p / 2` when
/// `Diff(alpha) = {P}` and `alpha` lies in the inverse different; the cycle
/// is empty otherwise.
pub fn deg_x_alpha(setup: &Setup, alpha: &FElem) -> Result<CoefficientReport> {
    if !setup.is_totally_positive(alpha) {
        return Err(Error::NotTotallyPositive(alpha.to_string()));
    }
    let data = AlphaData::new(setup, alpha)?;
    let mut report = CoefficientReport {
        alpha: alpha.clone(),
        diff: data.diff.clone(),
        a_alpha: closed_form(setup, &data),
        deg_x: LogLinear::zero(),
        reflex_prime: None,
        nu: None,
    };
    let AlphaData { ideal, diff, .. } = data;
    if !ideal.is_integral() {
        return Ok(report);
    }
    if let [p] = diff.as_slice() {
        let ord = ideal.exponent(p) + 1;
        let r = rho(setup, &ideal.mul_prime(p, -1)) as i64;
        report.deg_x = LogLinear::term(p.p(), Rational::new((ord * r).into(), 2.into()));
        report.nu = Some(Rational::new(ord.into(), 2.into()));
        report.reflex_prime = Some(p.clone());
    }
    Ok(report)
}

/// `deg T_m` computed as the sum of `deg X_alpha` over the trace slice and as
/// `(1/2) sum_alpha sum_p f_p(alpha D) log p`.
pub fn deg_t_m_paths(setup: &Setup, m: i64) -> Result<(LogLinear, LogLinear)> {
    let slice = enumerate_trace_slice(setup, m)?;
    let parts: Vec<(LogLinear, LogLinear)> = slice
        .par_iter()
        .map(|t| {
            let a = deg_x_alpha(setup, &t.alpha)?.deg_x;
            let mut b = LogLinear::zero();
            for p in t.ideal.rational_primes() {
                let f = f_p(setup, &t.ideal, p)?;
                if f != 0 {
                    b.add_term(p, Rational::new((f as i64).into(), 2.into()));
                }
            }
            Ok((a, b))
        })
        .collect::<Result<_>>()?;
    let (a, b) = parts.into_iter().fold((LogLinear::zero(), LogLinear::zero()), |(x, y), (a, b)| (x + a, y + b));
    Ok((a, b))
}

/// `deg T_m`, failing if the two computations disagree.
pub fn deg_t_m(setup: &Setup, m: i64) -> Result<LogLinear> {
    let (a, b) = deg_t_m_paths(setup, m)?;
    if a != b {
        return Err(Error::Inconsistent(format!("deg T_{m}: slice sum {a} differs from f_p sum {b}")));
    }
    debug_assert!(a.terms().all(|(_, c)| !c.is_zero()));
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn single_cycles() {
        let s = Setup::new(-3, -7).unwrap();
        let r = deg_x_alpha(&s, &FElem::new(rat(1, 2), rat(1, 42))).unwrap();
        assert_eq!(r.deg_x, LogLinear::log_prime(5));
        assert_eq!(r.nu, Some(rat(1, 1)));
        assert_eq!(r.a_alpha, r.deg_x.scale(&rat(4, 1)));
        let t = Setup::new(-3, -4).unwrap();
        let r = deg_x_alpha(&t, &FElem::new(rat(1, 2), rat(2, 24))).unwrap();
        assert_eq!(r.deg_x, LogLinear::log_prime(2));
    }

    #[test]
    fn degrees_of_t1() {
        let s = Setup::new(-3, -7).unwrap();
        assert_eq!(deg_t_m(&s, 1).unwrap(), LogLinear::from_terms([(3, rat(2, 1)), (5, rat(2, 1))]).unwrap());
        let t = Setup::new(-3, -4).unwrap();
        assert_eq!(deg_t_m(&t, 1).unwrap(), LogLinear::from_terms([(2, rat(2, 1)), (3, rat(1, 1))]).unwrap());
        let u = Setup::new(-4, -7).unwrap();
        assert_eq!(deg_t_m(&u, 1).unwrap(), LogLinear::from_terms([(3, rat(6, 1)), (7, rat(1, 1))]).unwrap());
    }

    #[test]
    fn paths_agree() {
        for (d1, d2) in [(-3, -7), (-3, -4), (-8, -11), (-7, -23)] {
            let s = Setup::new(d1, d2).unwrap();
            for m in 1..=10 {
                let (a, b) = deg_t_m_paths(&s, m).unwrap();
                assert_eq!(a, b, "({d1},{d2}) m = {m}");
            }
        }
    }
}
