use proptest::prelude::*;

use cmeis::arith::{rat, LogLinear, Rational};
use cmeis::eisenstein::{a_alpha, assemble_coefficient, deg_x_alpha};
use cmeis::field::{enumerate_trace_slice, FElem, Setup};
use cmeis::genus::{alpha_different, rho};
use cmeis::record::parse_decimal;
use cmeis::verify::TEST_MATRIX;

/// A random trace-slice element of a matrix setup.
fn slice_element() -> impl Strategy<Value = (Setup, FElem)> {
    (0..TEST_MATRIX.len(), 1i64..40, any::<u32>()).prop_map(|(i, m, k)| {
        let (d1, d2) = TEST_MATRIX[i];
        let s = Setup::new(d1, d2).unwrap();
        let slice = enumerate_trace_slice(&s, m).unwrap();
        let a = slice[k as usize % slice.len()].alpha.clone();
        (s, a)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn assembly_agrees_with_degree((s, a) in slice_element()) {
        let deg = deg_x_alpha(&s, &a).unwrap().deg_x;
        prop_assert_eq!(deg.scale(&rat(4, 1)), assemble_coefficient(&s, &a).unwrap());
        prop_assert!(deg.is_nonnegative());
    }

    #[test]
    fn galois_conjugates_have_equal_coefficients((s, a) in slice_element()) {
        let c = a.conjugate();
        prop_assert_eq!(a_alpha(&s, &a).unwrap(), a_alpha(&s, &c).unwrap());
    }

    #[test]
    fn rho_is_multiplicative_on_coprime_parts((s, a) in slice_element(), (_, b) in slice_element()) {
        let ia = alpha_different(&s, &a).unwrap();
        let ib = alpha_different(&s, &b).unwrap();
        let coprime = ia.rational_primes().iter().all(|p| !ib.rational_primes().contains(p));
        if coprime {
            prop_assert_eq!(rho(&s, &ia.mul(&ib)), rho(&s, &ia) * rho(&s, &ib));
        }
    }

    #[test]
    fn log_linear_json_round_trip(terms in prop::collection::vec((0usize..6, -50i64..50, 1i64..20), 0..6)) {
        const P: [u64; 6] = [2, 3, 5, 7, 101, 65_537];
        let x = LogLinear::from_terms(terms.iter().map(|&(i, n, d)| (P[i], rat(n, d)))).unwrap();
        let j = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<LogLinear>(&j).unwrap(), x);
    }

    #[test]
    fn decimal_strings_parse_exactly(n in -1_000_000i64..1_000_000, k in 0u32..6) {
        let text = if k == 0 {
            n.to_string()
        } else {
            let s = format!("{:0>width$}", n.unsigned_abs(), width = k as usize + 1);
            let (a, b) = s.split_at(s.len() - k as usize);
            format!("{}{a}.{b}", if n < 0 { "-" } else { "" })
        };
        let expect = Rational::new(n.into(), 10i64.pow(k).into());
        prop_assert_eq!(parse_decimal(&text).unwrap(), expect);
    }
}
