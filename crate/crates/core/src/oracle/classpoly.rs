use rayon::prelude::*;

use super::{class_reps, j_evaluation, BigComplex, BigFloat, IntPoly, JEvaluation};
use crate::{Error, Result};

/// A Hilbert class polynomial with its rounding certificate.
#[derive(Clone, Debug)]
pub struct ClassPolynomial {
    pub discriminant: i64,
    pub poly: IntPoly,
    /// Precision of the successful attempt, in bits.
    pub precision: u32,
    /// Largest distance of a real part from its rounded integer.
    pub max_rounding_distance: f64,
    /// Largest imaginary part among the computed coefficients.
    pub max_imaginary: f64,
    /// Largest `|H(j)|` over the computed roots.
    pub max_residual: f64,
    pub roots: Vec<JEvaluation>,
}

/// Starting precision `max(128, 3.5 pi sqrt|d| sum 1/a / ln 2 + 64)`.
pub fn default_precision(d: i64) -> Result<u32> {
    let reps = class_reps(d)?;
    let s: f64 = reps.iter().map(|f| 1.0 / f.a as f64).sum();
    let bits = 3.5 * std::f64::consts::PI * (-d as f64).sqrt() * s / std::f64::consts::LN_2;
    Ok((bits.ceil() as u32 + 64).max(128))
}

/// `prod (X - j(f))` over reduced forms `f` of discriminant `d`, rounded to
/// integers. Fails with a precision error unless every coefficient lies
/// within 0.25 of an integer with imaginary part below 0.25.
pub fn hilbert_class_poly(d: i64, precision: u32) -> Result<ClassPolynomial> {
    let reps = class_reps(d)?;
    let roots: Vec<JEvaluation> = reps.par_iter().map(|f| j_evaluation(f, precision)).collect::<Result<_>>()?;
    let w = precision;
    let mut coeffs = vec![BigComplex::one(w)];
    for r in &roots {
        // multiply by (X - r)
        let mut next = vec![BigComplex::zero(w); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * &r.value);
        }
        coeffs = next;
    }
    let mut ints = Vec::with_capacity(coeffs.len());
    let mut max_dist = 0f64;
    let mut max_im = 0f64;
    for c in &coeffs {
        let n = c.re.round_to_bigint();
        let dist = (&c.re - &BigFloat::from_bigint(&n, w)).abs().to_f64();
        let im = c.im.abs().to_f64();
        max_dist = max_dist.max(dist);
        max_im = max_im.max(im);
        ints.push(n);
    }
    if max_dist >= 0.25 || max_im >= 0.25 {
        return Err(Error::InsufficientPrecision(format!(
            "class polynomial of {d} at {precision} bits: rounding distance {max_dist:.3e}, imaginary part {max_im:.3e}"
        )));
    }
    let poly = IntPoly::new(ints);
    let max_residual = roots.iter().map(|r| eval_complex(&poly, &r.value).abs().to_f64()).fold(0f64, f64::max);
    Ok(ClassPolynomial {
        discriminant: d,
        poly,
        precision,
        max_rounding_distance: max_dist,
        max_imaginary: max_im,
        max_residual,
        roots,
    })
}

/// Retry [`hilbert_class_poly`] with doubled precision up to `attempts` times.
pub fn hilbert_class_poly_auto(d: i64, start: Option<u32>, attempts: u32) -> Result<ClassPolynomial> {
    let mut prec = match start {
        Some(p) => p.max(64),
        None => default_precision(d)?,
    };
    let mut last = None;
    for _ in 0..attempts.max(1) {
        match hilbert_class_poly(d, prec) {
            Ok(h) => return Ok(h),
            Err(e) if e.is_precision() => {
                last = Some(e);
                prec = prec.saturating_mul(2);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn eval_complex(p: &IntPoly, z: &BigComplex) -> BigComplex {
    let w = z.precision();
    p.coeffs()
        .iter()
        .rev()
        .fold(BigComplex::zero(w), |acc, c| &(&acc * z) + &BigComplex::real(BigFloat::from_bigint(c, w)))
}
