use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::BigFloat;
use crate::arith::Rational;
use crate::{Error, Result};

/// Crossover between the power series and the continued fraction for `e1`.
pub const E1_CROSSOVER: f64 = 4.0;

/// Exponential integral `E1(x) = int_1^inf e^(-ux) du/u` for `x > 0`.
pub fn e1(x: &BigFloat) -> Result<BigFloat> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("e1 needs x > 0, got {x}")));
    }
    if x.to_f64() <= E1_CROSSOVER {
        Ok(e1_series(x))
    } else {
        Ok(e1_continued_fraction(x))
    }
}

/// `-gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!)`.
pub fn e1_series(x: &BigFloat) -> BigFloat {
    let prec = x.precision();
    // Terms grow to about e^x before decaying, so carry extra bits.
    let w = prec + 32 + (x.to_f64() * std::f64::consts::LOG2_E).ceil().max(0.0) as u32;
    let xw = x.with_precision(w);
    let mut term = xw.clone();
    let mut sum = xw.clone();
    let mut k = 1u64;
    loop {
        k += 1;
        term = &(&term * &xw) / &BigFloat::from_u64(k, w);
        let t = &term / &BigFloat::from_u64(k, w);
        if t.is_zero() || t.magnitude() < -(w as i64) - 4 {
            break;
        }
        sum = if k.is_multiple_of(2) { &sum - &t } else { &sum + &t };
    }
    let v = &(&sum - &BigFloat::euler_gamma(w)) - &xw.ln();
    v.with_precision(prec)
}

/// `e^(-x) / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))` by the modified Lentz
/// method.
pub fn e1_continued_fraction(x: &BigFloat) -> BigFloat {
    let prec = x.precision();
    let w = prec + 32;
    let xw = x.with_precision(w);
    let one = BigFloat::one(w);
    let tiny = BigFloat::from_parts(BigInt::one(), -(4 * w as i64), w);
    let eps = BigFloat::from_parts(BigInt::one(), -(w as i64) + 4, w);
    let mut b = &xw + &one;
    let mut f = b.clone();
    let mut c = f.clone();
    let mut d = BigFloat::zero(w);
    let mut i = 1i64;
    loop {
        let a = BigFloat::from_i64(-i * i, w);
        b = &b + &BigFloat::from_i64(2, w);
        d = &b + &(&a * &d);
        if d.is_zero() {
            d = tiny.clone();
        }
        d = &one / &d;
        c = &b + &(&a / &c);
        if c.is_zero() {
            c = tiny.clone();
        }
        let delta = &c * &d;
        f = &f * &delta;
        if (&delta - &one).abs() < eps {
            break;
        }
        i += 1;
        assert!(i < 1_000_000, "continued fraction failed to converge");
    }
    (&(-&xw).exp() / &f).with_precision(prec)
}

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli numbers `B_0 .. B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= n {
        let m = cache.len();
        if m == 0 {
            cache.push(Rational::one());
            continue;
        }
        // B_m = -1/(m+1) sum_{k<m} C(m+1, k) B_k
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (k, bk) in cache.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * Rational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        let v = -acc / Rational::from_integer(BigInt::from(m + 1));
        cache.push(v);
    }
    cache[..=n].to_vec()
}

/// `ln Gamma(x)` for `x > 0` by the Stirling series after shifting `x` up.
pub fn ln_gamma(x: &BigFloat) -> Result<BigFloat> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("ln_gamma needs x > 0, got {x}")));
    }
    let prec = x.precision();
    let w = prec + 32;
    let threshold = (0.12 * w as f64 + 2.0).max(16.0);
    let mut z = x.with_precision(w);
    let mut shift = BigFloat::one(w);
    while z.to_f64() < threshold {
        shift = &shift * &z;
        z = &z + &BigFloat::one(w);
    }
    let half = BigFloat::one(w).ldexp(-1);
    let two_pi = BigFloat::pi(w).ldexp(1);
    let mut sum = &(&(&(&z - &half) * &z.ln()) - &z) + &(&two_pi.ln() * &half);
    let z2 = &z * &z;
    let mut zpow = z.clone();
    let limit = -(w as i64) - 2;
    let mut n = 1usize;
    let mut last = None::<BigFloat>;
    loop {
        let b = bernoulli(2 * n).pop().expect("nonempty");
        let denom = Rational::from_integer(BigInt::from(2 * n * (2 * n - 1)));
        let coeff = BigFloat::from_rational(&(b / denom), w);
        let term = &coeff / &zpow;
        if term.is_zero() || term.magnitude() < limit {
            break;
        }
        if let Some(prev) = &last {
            if term.abs() >= prev.abs() {
                return Err(Error::InsufficientPrecision("Stirling series stopped decreasing".into()));
            }
        }
        sum = &sum + &term;
        last = Some(term);
        zpow = &zpow * &z2;
        n += 1;
    }
    Ok((&sum - &shift.ln()).with_precision(prec))
}

/// Adaptive Simpson quadrature of `e1(x) = int_0^1 e^(-x/w)/w dw` after
/// the substitution `u = 1/w`, in double precision. Independent of [`e1`].
pub fn e1_quadrature(x: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn simpson(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let f = |w: f64| if w == 0.0 { 0.0 } else { (-x / w).exp() / w };
    let (a, b) = (0.0, 1.0);
    let (fa, fm, fb) = (f(a), f(0.5), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, 1e-16, 60)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(x: f64) -> BigFloat {
        BigFloat::from_f64(x, 128)
    }

    #[test]
    fn e1_at_one() {
        let v = e1(&bf(1.0)).unwrap();
        assert!(v.to_decimal_string(17).starts_with("0.21938393439552027"));
    }

    #[test]
    fn e1_matches_quadrature() {
        for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let v = e1(&bf(x)).unwrap().to_f64();
            let q = e1_quadrature(x);
            assert!((v - q).abs() < 1e-12, "x = {x}: {v} vs {q}");
        }
    }

    #[test]
    fn branches_agree_at_crossover() {
        for x in [3.5, 4.0, 4.5] {
            let a = e1_series(&BigFloat::from_f64(x, 200));
            let b = e1_continued_fraction(&BigFloat::from_f64(x, 200));
            let diff = (&a - &b).abs();
            assert!(diff < BigFloat::from_parts(BigInt::one(), -192, 200), "x = {x}");
        }
    }

    #[test]
    fn e1_bounds_and_monotonicity() {
        let grid: Vec<f64> = (1..60).map(|k| k as f64 * 0.25).collect();
        let vals: Vec<f64> = grid.iter().map(|&x| e1(&bf(x)).unwrap().to_f64()).collect();
        for (x, v) in grid.iter().zip(&vals) {
            assert!(*v < (-x).exp() / x);
        }
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(e1(&bf(0.0)).is_err());
        assert!(e1(&bf(-1.0)).is_err());
    }

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(12);
        assert_eq!(b[1], Rational::new((-1).into(), 2.into()));
        assert_eq!(b[2], Rational::new(1.into(), 6.into()));
        assert_eq!(b[3], Rational::zero());
        assert_eq!(b[12], Rational::new((-691).into(), 2730.into()));
    }

    #[test]
    fn log_gamma_values() {
        // Gamma(1/2) = sqrt(pi)
        let v = ln_gamma(&BigFloat::from_f64(0.5, 160)).unwrap();
        let expect = BigFloat::pi(160).ln().ldexp(-1);
        assert!((&v - &expect).abs() < BigFloat::from_f64(1e-44, 160));
        // Gamma(10) = 9!
        let v = ln_gamma(&BigFloat::from_i64(10, 160)).unwrap();
        let expect = BigFloat::from_i64(362_880, 160).ln();
        assert!((&v - &expect).abs() < BigFloat::from_f64(1e-44, 160));
        assert!(ln_gamma(&BigFloat::zero(64)).is_err());
    }
}
