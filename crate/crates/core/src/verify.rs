//! Invariant suites behind `cmeis verify`. Every check compares two
//! independently computed quantities; a seed drives the random samples.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    factor, hilbert_symbol, is_fundamental_discriminant, is_prime, kronecker, LogLinear, Place, Rational,
};
use crate::eisenstein::{
    a_alpha, a_alpha_mixed, assemble_coefficient, deg_t_m_paths, deg_x_alpha, identity_check_lem311,
};
use crate::field::{
    different_ideal, enumerate_mixed, enumerate_trace_slice, factor_prime_in_f, local_invariant, principal_ideal,
    support, FElem, FIdealFactored, PrimeKind, Setup,
};
use crate::genus::{chi_ideal, diff_set, rho_norm_sums, zeta_k_coefficients};
use crate::oracle::{
    class_reps, e1, e1_quadrature, hilbert_class_poly_auto, j_evaluation, lambda_at_zero, singular_moduli_check,
    special, BigFloat,
};
use crate::{Error, Result};

/// Coprime discriminant pairs every suite runs over.
pub const TEST_MATRIX: [(i64, i64); 9] =
    [(-3, -7), (-3, -4), (-4, -7), (-3, -8), (-7, -8), (-3, -11), (-4, -11), (-8, -11), (-7, -23)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Arith,
    Field,
    Genus,
    Eisenstein,
    Oracle,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Arith => "arith",
            Suite::Field => "field",
            Suite::Genus => "genus",
            Suite::Eisenstein => "eisenstein",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "arith" => Suite::Arith,
            "field" => Suite::Field,
            "genus" => Suite::Genus,
            "eisenstein" => Suite::Eisenstein,
            "oracle" => Suite::Oracle,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub seed: u64,
    /// Name of an invariant whose first comparison is inverted, to exercise
    /// the failure path.
    pub fault: Option<String>,
    /// Starting precision for class polynomials.
    pub precision: Option<u32>,
}

/// Result of one invariant.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub suite: Suite,
    pub invariant: &'static str,
    /// Number of comparisons made.
    pub cases: usize,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failure.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.failure.is_some())
    }
}

/// Per-invariant state: a private random stream and the comparison counter.
pub struct Ctx {
    rng: ChaCha8Rng,
    cases: usize,
    fault: bool,
    precision: Option<u32>,
}

type Check = std::result::Result<(), String>;

impl Ctx {
    fn ensure(&mut self, ok: bool, what: impl FnOnce() -> String) -> Check {
        self.cases += 1;
        let ok = if std::mem::take(&mut self.fault) { !ok } else { ok };
        if ok {
            Ok(())
        } else {
            Err(what())
        }
    }

    fn equal<T: PartialEq + fmt::Debug>(&mut self, lhs: T, rhs: T, what: impl FnOnce() -> String) -> Check {
        let ok = lhs == rhs;
        self.ensure(ok, || format!("{}: {lhs:?} != {rhs:?}", what()))
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn setups() -> impl Iterator<Item = Setup> {
    TEST_MATRIX.iter().map(|&(a, b)| Setup::new(a, b).expect("matrix setups are valid"))
}

type Invariant = (Suite, &'static str, fn(&mut Ctx) -> Check);

const INVARIANTS: &[Invariant] = &[
    (Suite::Arith, "factor_roundtrip", factor_roundtrip),
    (Suite::Arith, "kronecker_multiplicative", kronecker_multiplicative),
    (Suite::Arith, "hilbert_reciprocity", hilbert_reciprocity),
    (Suite::Arith, "loglinear_group", loglinear_group),
    (Suite::Field, "prime_decomposition", prime_decomposition),
    (Suite::Field, "ideal_norm_is_element_norm", ideal_norm_is_element_norm),
    (Suite::Field, "different_norm", different_norm),
    (Suite::Field, "local_invariant_product", local_invariant_product),
    (Suite::Genus, "zeta_k_convolution", zeta_k_convolution),
    (Suite::Genus, "diff_odd_and_support", diff_odd_and_support),
    (Suite::Genus, "chi_multiplicative", chi_multiplicative),
    (Suite::Eisenstein, "degree_is_quarter_coefficient", degree_is_quarter_coefficient),
    (Suite::Eisenstein, "vanishing_outside_single_diff", vanishing_outside_single_diff),
    (Suite::Eisenstein, "degree_paths_agree", degree_paths_agree),
    (Suite::Eisenstein, "coherent_identity", coherent_identity),
    (Suite::Eisenstein, "mixed_monotone", mixed_monotone),
    (Suite::Oracle, "class_number_bruteforce", class_number_bruteforce),
    (Suite::Oracle, "j_two_methods", j_two_methods),
    (Suite::Oracle, "class_poly_certificate", class_poly_certificate),
    (Suite::Oracle, "e1_quadrature", e1_against_quadrature),
    (Suite::Oracle, "lambda_class_number", lambda_class_number),
    (Suite::Oracle, "singular_moduli", singular_moduli),
];

/// Names of all invariants, in execution order.
pub fn invariant_names() -> Vec<&'static str> {
    INVARIANTS.iter().map(|(_, n, _)| *n).collect()
}

/// Runs the invariants of `suite` in parallel. Outcomes come back in table
/// order regardless of scheduling.
pub fn run(suite: Suite, opts: &Options) -> Report {
    let outcomes = INVARIANTS
        .par_iter()
        .enumerate()
        .filter(|(_, (s, _, _))| suite.includes(*s))
        .map(|(i, &(s, name, check))| {
            let mut ctx = Ctx {
                rng: ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ i as u64),
                cases: 0,
                fault: opts.fault.as_deref() == Some(name),
                precision: opts.precision,
            };
            let failure = check(&mut ctx).err();
            Outcome { suite: s, invariant: name, cases: ctx.cases, failure }
        })
        .collect();
    Report { seed: opts.seed, outcomes }
}

fn factor_roundtrip(ctx: &mut Ctx) -> Check {
    for _ in 0..64 {
        let bits = ctx.rng.gen_range(2..90);
        let mut n = BigInt::from(ctx.rng.gen::<u128>() >> (128 - bits));
        if n.is_zero() {
            n = BigInt::one();
        }
        if ctx.rng.gen_bool(0.5) {
            n = -n;
        }
        let f = lift(factor(&n))?;
        let sorted = f.factors.windows(2).all(|w| w[0].0 < w[1].0);
        let primes = f.factors.iter().all(|(p, e)| *e > 0 && is_prime(p));
        ctx.ensure(sorted && primes, || format!("factors of {n} not sorted primes"))?;
        ctx.equal(f.product(), n.clone(), || format!("product of factors of {n}"))?;
    }
    Ok(())
}

fn kronecker_multiplicative(ctx: &mut Ctx) -> Check {
    for _ in 0..400 {
        let a = BigInt::from(ctx.rng.gen_range(-500i64..500));
        let b = BigInt::from(ctx.rng.gen_range(-500i64..500));
        let n = BigInt::from(ctx.rng.gen_range(1i64..500));
        let k = BigInt::from(ctx.rng.gen_range(1i64..500));
        let ab = kronecker(&(&a * &b), &n);
        ctx.equal(ab, kronecker(&a, &n) * kronecker(&b, &n), || format!("({a}*{b} / {n})"))?;
        let nk = kronecker(&a, &(&n * &k));
        ctx.equal(nk, kronecker(&a, &n) * kronecker(&a, &k), || format!("({a} / {n}*{k})"))?;
    }
    Ok(())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut n = rng.gen_range(1i64..2000);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    Rational::new(n.into(), rng.gen_range(1i64..300).into())
}

fn hilbert_reciprocity(ctx: &mut Ctx) -> Check {
    for _ in 0..200 {
        let a = random_rational(&mut ctx.rng);
        let b = random_rational(&mut ctx.rng);
        let mut places = vec![Place::Infinity, Place::Finite(2)];
        for x in [&a, &b] {
            for part in [x.numer(), x.denom()] {
                for (p, _) in lift(factor(part))?.factors {
                    places.push(Place::Finite(p.try_into().expect("small prime")));
                }
            }
        }
        places.sort();
        places.dedup();
        let mut prod = 1i8;
        for v in places {
            prod *= lift(hilbert_symbol(&a, &b, v))?;
        }
        ctx.equal(prod, 1, || format!("product of ({a}, {b})_v"))?;
    }
    Ok(())
}

fn random_log_linear(rng: &mut ChaCha8Rng) -> LogLinear {
    const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    let mut out = LogLinear::zero();
    for _ in 0..rng.gen_range(0..5) {
        out.add_term(PRIMES[rng.gen_range(0..PRIMES.len())], random_rational(rng));
    }
    out
}

fn loglinear_group(ctx: &mut Ctx) -> Check {
    for _ in 0..200 {
        let x = random_log_linear(&mut ctx.rng);
        let y = random_log_linear(&mut ctx.rng);
        let s = &x + &y;
        ctx.equal(&s - &y, x.clone(), || format!("({x}) + ({y}) - ({y})"))?;
        let z = &x + &(-&x);
        ctx.ensure(z.is_zero(), || format!("({x}) - ({x}) = {z}"))?;
        let f = (s.to_f64() - x.to_f64() - y.to_f64()).abs();
        ctx.ensure(f < 1e-9, || format!("float sum of ({x}) and ({y}) off by {f}"))?;
    }
    Ok(())
}

fn prime_decomposition(ctx: &mut Ctx) -> Check {
    for s in setups() {
        for p in (2u64..200).filter(|&p| is_prime(&BigInt::from(p))) {
            let ps = lift(factor_prime_in_f(&s, p))?;
            let ram = ps.iter().any(|q| q.kind() == PrimeKind::Ramified);
            let total: u64 = ps.iter().map(|q| q.norm()).product::<u64>() * if ram { p } else { 1 };
            ctx.equal(total, p * p, || format!("norms above {p} in Q(sqrt {})", s.big_d()))?;
            let expect_ram = s.big_d() % p as i64 == 0;
            ctx.equal(ram, expect_ram, || format!("ramification of {p} in Q(sqrt {})", s.big_d()))?;
        }
    }
    Ok(())
}

fn ideal_norm_is_element_norm(ctx: &mut Ctx) -> Check {
    for s in setups() {
        for _ in 0..40 {
            // a + b (D + sqrt D)/2 in O_F
            let a = ctx.rng.gen_range(-60i64..60);
            let b = ctx.rng.gen_range(-60i64..60);
            let beta =
                FElem::new(Rational::new((2 * a + b * s.big_d()).into(), 2.into()), Rational::new(b.into(), 2.into()));
            if beta.is_zero() {
                continue;
            }
            let ideal = lift(principal_ideal(&s, &beta))?;
            let (lhs, rhs) = (ideal.norm(), s.norm(&beta).abs());
            ctx.ensure(lhs == rhs, || format!("N(({beta})) = {lhs}, |N({beta})| = {rhs}"))?;
        }
    }
    Ok(())
}

fn different_norm(ctx: &mut Ctx) -> Check {
    for s in setups() {
        let d = different_ideal(&s);
        let n = d.norm();
        ctx.ensure(n == Rational::from_integer(s.big_d().abs().into()), || {
            format!("norm of the different of Q(sqrt {}) is {n}", s.big_d())
        })?;
    }
    Ok(())
}

fn local_invariant_product(ctx: &mut Ctx) -> Check {
    for s in setups() {
        for m in 1..=5 {
            for t in lift(enumerate_trace_slice(&s, m))? {
                let sup = lift(support(&s, &t.alpha))?;
                let inf = lift(local_invariant(&s, &t.alpha, Place::Infinity))?;
                let finite = if sup.len() % 2 == 1 { -1 } else { 1 };
                ctx.equal(finite * inf, 1, || format!("product of local invariants at {}", t.alpha))?;
            }
        }
    }
    Ok(())
}

/// Bound for the Dirichlet-series comparison.
pub const ZETA_BOUND: usize = 10_000;

fn zeta_k_convolution(ctx: &mut Ctx) -> Check {
    let results: Vec<(Setup, Result<Vec<u64>>)> = setups()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| {
            let r = rho_norm_sums(&s, ZETA_BOUND);
            (s, r)
        })
        .collect();
    for (s, r) in results {
        let sums = lift(r)?;
        let conv = zeta_k_coefficients(&s, ZETA_BOUND);
        let bad = (1..=ZETA_BOUND).find(|&n| sums[n] as i64 != conv[n]);
        ctx.ensure(bad.is_none(), || {
            let n = bad.unwrap_or(0);
            format!("({},{}) n = {n}: rho sum {} vs convolution {}", s.d1(), s.d2(), sums[n], conv[n])
        })?;
    }
    Ok(())
}

fn diff_odd_and_support(ctx: &mut Ctx) -> Check {
    for s in setups() {
        for m in 1..=8 {
            for t in lift(enumerate_trace_slice(&s, m))? {
                let diff = lift(diff_set(&s, &t.alpha))?;
                ctx.ensure(diff.len() % 2 == 1, || format!("|Diff({})| = {}", t.alpha, diff.len()))?;
                if let [p] = diff.as_slice() {
                    let sup = lift(support(&s, &t.alpha))?;
                    ctx.equal(sup, vec![p.p()], || format!("support of {}", t.alpha))?;
                }
            }
        }
    }
    Ok(())
}

fn chi_multiplicative(ctx: &mut Ctx) -> Check {
    for s in setups() {
        let mut primes = Vec::new();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29] {
            primes.extend(lift(factor_prime_in_f(&s, p))?);
        }
        for _ in 0..40 {
            let pick = |rng: &mut ChaCha8Rng| {
                FIdealFactored::from_factors(
                    (0..rng.gen_range(0..4))
                        .map(|_| (primes[rng.gen_range(0..primes.len())].clone(), rng.gen_range(1..3))),
                )
            };
            let a = pick(&mut ctx.rng);
            let b = pick(&mut ctx.rng);
            let lhs = chi_ideal(&s, &a.mul(&b));
            ctx.equal(lhs, chi_ideal(&s, &a) * chi_ideal(&s, &b), || format!("chi({a} * {b})"))?;
        }
    }
    Ok(())
}

/// Largest trace used by the slice-based checks.
const TRACE_MAX: i64 = 10;

fn degree_is_quarter_coefficient(ctx: &mut Ctx) -> Check {
    for s in setups() {
        for m in 1..=TRACE_MAX {
            for t in lift(enumerate_trace_slice(&s, m))? {
                let deg = lift(deg_x_alpha(&s, &t.alpha))?.deg_x;
                let assembled = lift(assemble_coefficient(&s, &t.alpha))?;
                ctx.equal(deg.scale(&Rational::from_integer(4.into())), assembled, || {
                    format!("4 deg X vs assembled a at {}", t.alpha)
                })?;
            }
        }
    }
    Ok(())
}

fn vanishing_outside_single_diff(ctx: &mut Ctx) -> Check {
    for s in setups() {
        for m in 1..=TRACE_MAX {
            for t in lift(enumerate_trace_slice(&s, m))? {
                if lift(diff_set(&s, &t.alpha))?.len() > 1 {
                    let a = lift(a_alpha(&s, &t.alpha))?;
                    let d = lift(deg_x_alpha(&s, &t.alpha))?.deg_x;
                    ctx.ensure(a.is_zero() && d.is_zero(), || format!("nonzero at {}: a = {a}, deg = {d}", t.alpha))?;
                }
            }
        }
    }
    Ok(())
}

fn degree_paths_agree(ctx: &mut Ctx) -> Check {
    for s in setups() {
        for m in 1..=TRACE_MAX {
            let (a, b) = lift(deg_t_m_paths(&s, m))?;
            ctx.equal(a, b, || format!("deg T_{m} for ({},{})", s.d1(), s.d2()))?;
        }
    }
    Ok(())
}

fn coherent_identity(ctx: &mut Ctx) -> Check {
    for s in setups() {
        for m in 1..=TRACE_MAX {
            for t in lift(enumerate_trace_slice(&s, m))? {
                if lift(diff_set(&s, &t.alpha))?.len() == 1 {
                    let c = lift(identity_check_lem311(&s, &t.alpha))?;
                    let closed = lift(a_alpha(&s, &t.alpha))?;
                    ctx.ensure(c.holds() && c.a_alpha == closed, || {
                        format!("coherent identity at {}: {c:?}", t.alpha)
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn mixed_monotone(ctx: &mut Ctx) -> Check {
    for s in setups().take(4) {
        let mixed = lift(enumerate_mixed(&s, 3))?;
        for _ in 0..6 {
            let (_, _, alpha) = &mixed[ctx.rng.gen_range(0..mixed.len())];
            let v = ctx.rng.gen_range(0.2..2.0);
            let lo = BigFloat::from_f64(v, 80);
            let hi = BigFloat::from_f64(v * 1.5, 80);
            let a = lift(a_alpha_mixed(&s, alpha, &lo, &lo))?;
            let b = lift(a_alpha_mixed(&s, alpha, &hi, &hi))?;
            ctx.ensure(!a.is_negative() && b <= a, || format!("mixed coefficient at {alpha} not monotone: {a} < {b}"))?;
        }
    }
    Ok(())
}

/// Number of primitive reduced forms of discriminant `d`, by scanning
/// every `(a, b, c)` with `|b| <= a <= c`.
fn brute_class_number(d: i64) -> usize {
    let mut count = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            if b < 0 && (-b == a || a == c) {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    count
}

fn class_number_bruteforce(ctx: &mut Ctx) -> Check {
    for d in (-200..0).filter(|&d| is_fundamental_discriminant(d)) {
        let n = lift(class_reps(d))?.len();
        ctx.equal(n, brute_class_number(d), || format!("h({d})"))?;
    }
    Ok(())
}

fn matrix_discriminants() -> Vec<i64> {
    let mut ds: Vec<i64> = TEST_MATRIX.iter().flat_map(|&(a, b)| [a, b]).collect();
    ds.sort_unstable();
    ds.dedup();
    ds
}

fn j_two_methods(ctx: &mut Ctx) -> Check {
    for d in matrix_discriminants() {
        for f in lift(class_reps(d))? {
            let j = lift(j_evaluation(&f, 128))?;
            ctx.ensure(j.agrees(), || format!("j at {f:?}: gap {}", j.relative_gap))?;
        }
    }
    Ok(())
}

fn class_poly_certificate(ctx: &mut Ctx) -> Check {
    for d in matrix_discriminants() {
        let h = lift(hilbert_class_poly_auto(d, ctx.precision, 4))?;
        let bound = 2f64.powi(-(h.precision as i32) / 2);
        let ok = h.max_rounding_distance < 0.25 && h.max_imaginary < 0.25 && h.max_residual < bound;
        ctx.ensure(ok, || format!("H_{d} certificate: {h:?}"))?;
    }
    Ok(())
}

fn e1_against_quadrature(ctx: &mut Ctx) -> Check {
    for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let v = lift(e1(&BigFloat::from_f64(x, 128)))?.to_f64();
        let q = e1_quadrature(x);
        ctx.ensure((v - q).abs() < 1e-12, || format!("e1({x}) = {v}, quadrature {q}"))?;
    }
    let x = BigFloat::from_f64(special::E1_CROSSOVER, 200);
    let gap = (&special::e1_series(&x) - &special::e1_continued_fraction(&x)).abs();
    ctx.ensure(gap < BigFloat::from_f64(1e-50, 200), || format!("e1 branches differ by {gap} at the crossover"))
}

fn lambda_class_number(ctx: &mut Ctx) -> Check {
    for d in (-200..0).filter(|&d| is_fundamental_discriminant(d)) {
        let h = lift(class_reps(d))?.len() as f64;
        let w = match d {
            -3 => 6.0,
            -4 => 4.0,
            _ => 2.0,
        };
        let l = lift(lambda_at_zero(d, 96))?.value.to_f64();
        ctx.ensure((l - 2.0 * h / w).abs() < 1e-9, || format!("Lambda(0, chi_{d}) = {l}, 2h/w = {}", 2.0 * h / w))?;
    }
    Ok(())
}

fn singular_moduli(ctx: &mut Ctx) -> Check {
    for s in setups() {
        let r = lift(singular_moduli_check(&s, ctx.precision))?;
        ctx.ensure(r.passed, || {
            format!("({},{}): deg T_1 = {} but 8/(w1 w2) log|Res| = {}", r.d1, r.d2, r.lhs, r.rhs)
        })?;
    }
    Ok(())
}
