use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BigComplex, BigFloat, ReducedForm};
use crate::{Error, Result};

/// A j-invariant computed two ways.
#[derive(Clone, Debug)]
pub struct JEvaluation {
    /// `E4^3 / Delta` from the eta product.
    pub value: BigComplex,
    /// The direct q-expansion `1/q + 744 + 196884 q + ...`.
    pub direct: BigComplex,
    /// `|value - direct| / max(1, |value|)`.
    pub relative_gap: BigFloat,
    pub precision: u32,
}

impl JEvaluation {
    /// Agreement bound `2^(-precision + 16)`.
    pub fn tolerance(&self) -> BigFloat {
        BigFloat::from_parts(BigInt::one(), 16 - self.precision as i64, 64)
    }

    pub fn agrees(&self) -> bool {
        self.relative_gap <= self.tolerance()
    }
}

/// `j((-b + sqrt(d)) / 2a)` at `precision` bits.
pub fn j_value(form: &ReducedForm, precision: u32) -> Result<BigComplex> {
    Ok(j_evaluation(form, precision)?.value)
}

/// Both evaluations of `j` at the CM point of `form`. Fails when they disagree
/// beyond [`JEvaluation::tolerance`].
pub fn j_evaluation(form: &ReducedForm, precision: u32) -> Result<JEvaluation> {
    if precision < 64 {
        return Err(Error::Precondition(format!("j_value needs at least 64 bits, got {precision}")));
    }
    let d = form.discriminant();
    if d >= 0 || form.a <= 0 {
        return Err(Error::Precondition(format!("{form:?} is not positive definite")));
    }
    let w = precision + 48;
    let sqrt_d = BigFloat::from_i64(-d, w + 16).sqrt();
    let pi = BigFloat::pi(w + 16);
    let a = BigFloat::from_i64(form.a, w + 16);
    // q = exp(2 pi i tau) with |q| = exp(-pi sqrt|d| / a), arg q = -pi b / a.
    let log_inv_q = &(&pi * &sqrt_d) / &a;
    let radius = (-&log_inv_q).exp().with_precision(w);
    let angle = &(&pi * &BigFloat::from_i64(-form.b, w + 16)) / &a;
    let q = BigComplex::from_polar(&radius, &angle).with_precision(w);
    let lq = log_inv_q.to_f64();
    let target = w as f64 * std::f64::consts::LN_2;

    // Eta product and E4.
    let n_terms = (1..)
        .find(|&n: &u64| n as f64 * lq - 4.0 * ((n + 1) as f64).ln() - 960f64.ln() > target + 8.0)
        .expect("bound exists");
    let one = BigComplex::one(w);
    let mut prod = one.clone();
    let mut qn = one.clone();
    for _ in 0..n_terms {
        qn = &qn * &q;
        prod = &prod * &(&one - &qn);
    }
    let delta = &q * &prod.powu(24);
    let mut e4 = BigComplex::zero(w);
    for n in (1..=n_terms).rev() {
        let c = BigFloat::from_bigint(&(BigInt::from(sigma3(n)) * 240), w);
        e4 = &(&e4 + &BigComplex::real(c)) * &q;
    }
    let e4 = &e4 + &one;
    let value = e4.powu(3).div(&delta);

    // Direct expansion: sum of c_k q^k for k >= -1.
    let k_max = (1..)
        .find(|&k: &u64| {
            let kf = k as f64;
            kf > (4.0 * std::f64::consts::PI / lq).powi(2)
                && 4.0 * std::f64::consts::PI * kf.sqrt() - kf * lq < -target - 12.0
        })
        .expect("bound exists");
    let coeffs = j_coefficients(k_max as usize + 1);
    let mut acc = BigComplex::zero(w);
    for c in coeffs[2..].iter().rev() {
        acc = &(&acc + &BigComplex::real(BigFloat::from_bigint(c, w))) * &q;
    }
    let constant = BigComplex::real(BigFloat::from_bigint(&coeffs[1], w));
    let direct = &(&acc + &constant) + &q.recip();

    let scale = {
        let m = value.abs();
        if m > BigFloat::one(w) {
            m
        } else {
            BigFloat::one(w)
        }
    };
    let relative_gap = (&(&value - &direct).abs() / &scale).with_precision(64);
    let eval = JEvaluation {
        value: value.with_precision(precision),
        direct: direct.with_precision(precision),
        relative_gap,
        precision,
    };
    if !eval.agrees() {
        return Err(Error::InsufficientPrecision(format!(
            "j evaluations for {form:?} differ by {} at {precision} bits",
            eval.relative_gap
        )));
    }
    Ok(eval)
}

fn sigma3(n: u64) -> u64 {
    (1..=n).filter(|k| n.is_multiple_of(*k)).map(|k| k * k * k).sum()
}

/// Coefficients of `q j(q) = 1 + 744 q + 196884 q^2 + ...`, that is `c_{k-1}`
/// at index `k`, for `k < len`.
pub fn j_coefficients(len: usize) -> Vec<BigInt> {
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut e4 = vec![BigInt::zero(); len];
    e4[0] = BigInt::one();
    for (n, c) in e4.iter_mut().enumerate().skip(1) {
        *c = BigInt::from(sigma3(n as u64)) * 240;
    }
    let e4_cubed = mul(&mul(&e4, &e4), &e4);
    let mut eta = vec![BigInt::zero(); len];
    eta[0] = BigInt::one();
    for n in 1..len {
        for k in (n..len).rev() {
            let t = eta[k - n].clone();
            eta[k] -= t;
        }
    }
    let mut eta24 = eta.clone();
    for _ in 1..24 {
        eta24 = mul(&eta24, &eta);
    }
    // Invert the unit power series eta24.
    let mut inv = vec![BigInt::zero(); len];
    inv[0] = BigInt::one();
    for k in 1..len {
        let mut s = BigInt::zero();
        for i in 1..=k {
            s += &eta24[i] * &inv[k - i];
        }
        inv[k] = -s;
    }
    mul(&e4_cubed, &inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(a: i64, b: i64, c: i64) -> ReducedForm {
        ReducedForm { a, b, c }
    }

    fn close_to(z: &BigComplex, re: i64, tol: f64) {
        let t = BigFloat::from_f64(tol, 64);
        assert!((&z.re - &BigFloat::from_i64(re, z.re.precision())).abs() < t, "{z:?}");
        assert!(z.im.abs() < t, "{z:?}");
    }

    #[test]
    fn j_series_coefficients() {
        let c = j_coefficients(5);
        let expect = [1i64, 744, 196_884, 21_493_760, 864_299_970];
        assert_eq!(c, expect.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    }

    #[test]
    fn rational_singular_moduli() {
        close_to(&j_value(&form(1, 1, 1), 128).unwrap(), 0, 1e-25);
        close_to(&j_value(&form(1, 0, 1), 128).unwrap(), 1728, 1e-20);
        close_to(&j_value(&form(1, 1, 2), 128).unwrap(), -3375, 1e-20);
        close_to(&j_value(&form(1, 0, 2), 128).unwrap(), 8000, 1e-20);
        close_to(&j_value(&form(1, 1, 3), 128).unwrap(), -32768, 1e-20);
        let j163 = j_value(&form(1, 1, 41), 192).unwrap();
        assert_eq!(j163.re.round_to_bigint(), BigInt::from(-262_537_412_640_768_000i64));
    }

    #[test]
    fn both_methods_agree() {
        for f in [form(1, 1, 6), form(2, -1, 3), form(2, 1, 3), form(1, 0, 1)] {
            for prec in [64, 128, 256] {
                let e = j_evaluation(&f, prec).unwrap();
                assert!(e.agrees());
            }
        }
        assert!(j_value(&form(1, 1, 1), 32).is_err());
    }
}
