//! Output records for the `cmeis` binary: JSON Lines and CSV with identical
//! fields. The schema is documented in `docs/schema/v1.md`.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{LogLinear, Rational};
use crate::eisenstein::{a_alpha_mixed, a_zero, deg_t_m, deg_x_alpha};
use crate::field::{enumerate_mixed, enumerate_trace_slice, FElem, FPrimeIdeal, PrimeKind, Setup};
use crate::oracle::BigFloat;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// CSV column order. Every record kind uses a subset.
pub const CSV_COLUMNS: [&str; 11] =
    ["kind", "m", "x", "alpha", "diff", "a_alpha", "deg_X", "nu", "v1", "v2", "a_alpha_float"];

/// A prime of `Diff(alpha)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub p: String,
    pub kind: PrimeKind,
}

impl From<&FPrimeIdeal> for DiffEntry {
    fn from(q: &FPrimeIdeal) -> Self {
        Self { p: q.p().to_string(), kind: q.kind() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolomorphicRecord {
    pub m: i64,
    pub x: i64,
    pub alpha: FElem,
    pub diff: Vec<DiffEntry>,
    pub a_alpha: LogLinear,
    #[serde(rename = "deg_X")]
    pub deg_x: LogLinear,
    /// `ord_P(alpha P D) / 2` as a rational string, null unless `|Diff| = 1`.
    pub nu: Option<String>,
    pub a_alpha_float: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedRecord {
    pub m: i64,
    pub x: i64,
    pub alpha: FElem,
    pub v1: String,
    pub v2: String,
    pub a_alpha_float: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantRecord {
    pub v1: String,
    pub v2: String,
    pub a_alpha_float: String,
}

/// One Fourier coefficient, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientRecord {
    Holomorphic(HolomorphicRecord),
    Mixed(MixedRecord),
    Constant(ConstantRecord),
}

/// `deg T_m` with its decimal value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub d1: i64,
    pub d2: i64,
    pub m: i64,
    #[serde(rename = "deg_T")]
    pub deg_t: LogLinear,
    pub value: String,
}

/// Numeric output settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Display {
    pub digits: usize,
}

impl Default for Display {
    fn default() -> Self {
        Self { digits: 30 }
    }
}

impl Display {
    /// Binary precision that carries `digits` decimal digits with a guard.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    pub fn format(&self, x: &BigFloat) -> String {
        x.to_decimal_string(self.digits)
    }

    pub fn log_linear(&self, x: &LogLinear) -> String {
        if x.is_zero() {
            return "0".into();
        }
        self.format(&x.to_float(self.bits()))
    }
}

fn holomorphic_slice(setup: &Setup, m: i64, display: Display) -> Result<Vec<CoefficientRecord>> {
    enumerate_trace_slice(setup, m)?
        .into_iter()
        .map(|t| {
            let r = deg_x_alpha(setup, &t.alpha)?;
            Ok(CoefficientRecord::Holomorphic(HolomorphicRecord {
                m: t.m,
                x: t.x,
                alpha: t.alpha,
                diff: r.diff.iter().map(DiffEntry::from).collect(),
                a_alpha_float: display.log_linear(&r.a_alpha),
                a_alpha: r.a_alpha,
                deg_x: r.deg_x,
                nu: r.nu.map(|n| n.to_string()),
            }))
        })
        .collect()
}

/// Records for every trace slice with `1 <= m <= trace_max`, ordered by
/// `(m, x)`.
pub fn holomorphic_records(setup: &Setup, trace_max: i64, display: Display) -> Result<Vec<CoefficientRecord>> {
    if trace_max < 1 {
        return Err(Error::Precondition(format!("trace bound must be at least 1, got {trace_max}")));
    }
    let chunks =
        (1..=trace_max).into_par_iter().map(|m| holomorphic_slice(setup, m, display)).collect::<Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// The constant term followed by the mixed-signature coefficients with
/// `|sigma_1| + |sigma_2| <= bound`, for imaginary parts `v1, v2`.
pub fn nonholomorphic_records(
    setup: &Setup,
    bound: i64,
    v1: &Rational,
    v2: &Rational,
    display: Display,
) -> Result<Vec<CoefficientRecord>> {
    let bits = display.bits();
    let (f1, f2) = (BigFloat::from_rational(v1, bits), BigFloat::from_rational(v2, bits));
    let (s1, s2) = (v1.to_string(), v2.to_string());
    let mut out = vec![CoefficientRecord::Constant(ConstantRecord {
        v1: s1.clone(),
        v2: s2.clone(),
        a_alpha_float: display.format(&a_zero(setup, &f1, &f2)?),
    })];
    let mixed = enumerate_mixed(setup, bound)?
        .into_par_iter()
        .map(|(m, x, alpha)| {
            let value = a_alpha_mixed(setup, &alpha, &f1, &f2)?;
            Ok(CoefficientRecord::Mixed(MixedRecord {
                m,
                x,
                alpha,
                v1: s1.clone(),
                v2: s2.clone(),
                a_alpha_float: display.format(&value),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    out.extend(mixed);
    Ok(out)
}

pub fn degree_record(setup: &Setup, m: i64, display: Display) -> Result<DegreeRecord> {
    if m < 1 {
        return Err(Error::Precondition(format!("m must be at least 1, got {m}")));
    }
    let deg = deg_t_m(setup, m)?;
    Ok(DegreeRecord { d1: setup.d1(), d2: setup.d2(), m, value: display.log_linear(&deg), deg_t: deg })
}

/// Writes one compact JSON object per line.
pub fn write_json_lines<W: Write, T: Serialize>(mut out: W, records: &[T]) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| Error::Parse(e.to_string()))?;
    }
    Ok(())
}

/// Parses JSON Lines output back into records.
pub fn read_json_lines(text: &str) -> Result<Vec<CoefficientRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::Parse(format!("{e}: {l}"))))
        .collect()
}

/// The CSV cells of a record, derived from its JSON form: strings verbatim,
/// numbers as written, lists and maps as compact JSON, absent fields empty.
pub fn csv_row(record: &CoefficientRecord) -> Result<Vec<String>> {
    let value = serde_json::to_value(record).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(CSV_COLUMNS
        .iter()
        .map(|c| match value.get(*c) {
            None | Some(serde_json::Value::Null) => String::new(),
            Some(serde_json::Value::String(s)) => s.clone(),
            Some(v) => v.to_string(),
        })
        .collect())
}

pub fn write_csv<W: Write>(out: W, records: &[CoefficientRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(err)?;
    for r in records {
        w.write_record(csv_row(r)?).map_err(err)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

/// Parses `[-]digits[.digits][e[-]digits]` or `p/q` as an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad number {s:?}"));
    let t = s.trim();
    if t.contains('/') {
        return t.parse::<Rational>().map_err(|_| bad());
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg && !q.is_zero() {
        q = -q;
    }
    Ok(q)
}
