use num_integer::Integer;

use crate::arith::is_fundamental_discriminant;
use crate::{Error, Result};

/// Reduced primitive positive definite form `a x^2 + b x y + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }
}

/// One reduced form per class of discriminant `d`, sorted by `(a, b)`.
pub fn class_reps(d: i64) -> Result<Vec<ReducedForm>> {
    if d >= 0 || !is_fundamental_discriminant(d) {
        return Err(Error::InvalidSetup(format!("{d} is not a negative fundamental discriminant")));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = ReducedForm { a, b, c };
            if f.is_reduced() && a.gcd(&b).gcd(&c) == 1 {
                out.push(f);
            }
        }
        a += 1;
    }
    Ok(out)
}

pub fn class_number(d: i64) -> Result<usize> {
    Ok(class_reps(d)?.len())
}
