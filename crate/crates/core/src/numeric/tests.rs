use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn elem(beta: &Beta, c: &[i64]) -> FieldValue {
    c.iter()
        .rev()
        .fold(beta.zero(), |acc, &k| acc * beta.value() + beta.from_int(k))
}

#[test]
fn make_beta_examples() {
    let g = Beta::golden();
    assert!((g.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
    let s3 = Beta::parse("poly:x^2-3@1,2").unwrap();
    assert!((s3.to_f64() - 3f64.sqrt()).abs() < 1e-15);
    let d = Beta::decimal("1.9", 128).unwrap();
    assert!(d.is_decimal());
    assert_eq!(d.precision_bits(), Some(128));
    assert!(matches!(Beta::parse("poly:x^2-5"), Err(Error::NoRootInInterval)));
    assert!(matches!(Beta::parse("poly:x-3/2@1,2"), Err(Error::Parse(_))));
    assert!(matches!(Beta::parse("2.5"), Err(Error::RootOutsideUnitRange)));
    assert!(matches!(Beta::parse("poly:x^2-x-1@2,3"), Err(Error::NoRootInInterval)));
    assert!(matches!(Beta::parse("poly:x^2-x-1@-1,1.5"), Err(Error::RootOutsideUnitRange)));
    assert!(matches!(Beta::parse("poly:x^2-x-1@-2,2"), Err(Error::MultipleRootsInInterval(2))));
    assert!(Beta::parse("poly:4x^2-9x+5@0.9,2").is_err());
    assert!(Beta::parse("banana").is_err());
}

#[test]
fn display_round_trips() {
    let g = Beta::golden();
    let again = Beta::parse(&g.to_string()).unwrap();
    assert_eq!(again.to_f64(), g.to_f64());
    assert_eq!(Beta::parse("1.9").unwrap().to_string(), "1.9");
}

#[test]
fn arithmetic_examples() {
    let g = Beta::golden();
    let b = g.value();
    let sq = &b * &b;
    assert_eq!(sq, elem(&g, &[1, 1]));
    assert_eq!(sq.coefficients().unwrap().0, vec![BigInt::from(1), BigInt::from(1)]);
    assert_eq!((&b - &g.one()) * b.clone(), g.one());
    let d = Beta::decimal("1.9", 128).unwrap();
    let inv = d.one().div_by_beta().forget_exact();
    let (lo, hi) = inv.bounds(0);
    assert!(lo <= q(10, 19) && q(10, 19) <= hi);
    assert!(inv.width() < 1e-30);
    assert!(fv_arith(&g.one(), &d.one(), ArithOp::Add).is_err());
    assert_eq!(fv_arith(&g.one(), &g.one(), ArithOp::MulByBeta).unwrap(), b);
}

#[test]
fn sign_examples() {
    let g = Beta::golden();
    let b = g.value();
    assert_eq!(fv_sign(&(&(&b * &b) - &b - g.one())), Some(0));
    let t = b.inverse().unwrap() - g.from_rational(&q(3, 5));
    assert_eq!(fv_sign(&t), Some(1));
    let d = Beta::decimal("1.5", 256).unwrap();
    let tiny = BigRational::new(1.into(), BigInt::from(1) << 200);
    let straddle = d.interval_value(&-tiny.clone(), &tiny).unwrap();
    assert_eq!(fv_sign(&straddle), None);
    assert!(matches!(straddle.sign_checked(), Err(Error::Undecided)));
}

#[test]
fn decimal_rendering() {
    let g = Beta::golden();
    assert_eq!(fv_to_decimal(&g.value(), 7), "1.6180340");
    assert_eq!(fv_to_decimal(&g.one(), 3), "1.000");
    assert_eq!(fv_to_decimal(&(g.value() - g.one()), 7), "0.6180340");
    assert_eq!(fv_to_decimal(&g.from_rational(&q(-1, 8)), 2), "-0.12");
    assert_eq!(fv_to_decimal(&g.from_rational(&q(1, 3)), 0), "0");
    let d = Beta::decimal("1.9", 128).unwrap();
    assert_eq!(fv_to_decimal(&d.value(), 4), "1.9000");
    assert_eq!(fv_to_decimal(&d.one().div_by_beta().forget_exact(), 6), "0.526316");
}

#[test]
fn minimal_polynomial_vanishes_at_beta() {
    for spec in ["poly:x^2-x-1", "poly:x^3-x-1", "poly:x^2-3", "poly:x^4-x^3-x^2-x-1@1,2"] {
        let beta = Beta::parse(spec).unwrap();
        let p = beta.minimal_polynomial().unwrap().to_vec();
        let v = p.iter().rev().fold(beta.zero(), |acc, c| {
            acc * beta.value() + beta.from_rational(&BigRational::from_integer(c.clone()))
        });
        assert!(v.is_exact_zero(), "{spec}");
    }
}

#[test]
fn reducible_input_polynomial() {
    // (x^2 - x - 1)(x - 5): the root in (1, 2) is still the golden ratio.
    let beta = Beta::parse("poly:x^3-6x^2+4x+5").unwrap();
    assert!((beta.to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
    let b = beta.value();
    assert_eq!(fv_sign(&(&(&b * &b) - &b - beta.one())), Some(0));
}

#[test]
fn escalation_doubles_precision() {
    let beta = Beta::decimal("1.7", 64).unwrap().with_precision_cap(1024);
    let mut seen = Vec::new();
    let out = with_escalation(&beta, |b| {
        seen.push(b.precision_bits().unwrap());
        if b.precision_bits().unwrap() < 512 {
            Err(Error::Undecided)
        } else {
            Ok(b.precision_bits().unwrap())
        }
    })
    .unwrap();
    assert_eq!(out, 512);
    assert_eq!(seen, vec![64, 128, 256, 512]);
    let capped = with_escalation(&beta.with_precision_cap(128), |_| -> Result<()> { Err(Error::Undecided) });
    assert!(matches!(capped, Err(Error::Undecided)));
}

#[test]
fn expressions() {
    let g = Beta::golden();
    let x = eval_expr("1/(2*beta)", &g).unwrap();
    assert_eq!(x.mul_int(2).mul_by_beta(), g.one());
    assert_eq!(eval_expr("beta^2 - beta", &g).unwrap(), g.one());
    assert_eq!(eval_expr("2beta - (1 + 1)", &g).unwrap(), (g.value() - g.one()).mul_int(2));
    assert_eq!(eval_expr("beta^-1", &g).unwrap(), g.value() - g.one());
    assert_eq!(eval_expr("-0.5 + 1/2", &g).unwrap(), g.zero());
    assert!(eval_expr("1/(beta^2-beta-1)", &g).is_err());
    assert!(eval_expr("2*", &g).is_err());
    assert!(eval_expr("gamma", &g).is_err());
    let spec: XSpec = "random:42".parse().unwrap();
    let a = spec.resolve(&g).unwrap();
    assert_eq!(a, spec.resolve(&g).unwrap());
    assert_eq!(a.sign(), Some(Ordering::Greater));
    assert_eq!(a.cmp_int(1).unwrap(), Ordering::Less);
    assert_eq!("val:11".parse::<XSpec>().unwrap().resolve(&g).unwrap(), g.one());
    assert_eq!("3/7".parse::<XSpec>().unwrap().resolve(&g).unwrap(), g.from_rational(&q(3, 7)));
}

static AGREEMENT_BASES: std::sync::LazyLock<(Beta, Beta)> = std::sync::LazyLock::new(|| {
    (Beta::parse("poly:10x-17").unwrap(), Beta::decimal("1.7", 128).unwrap())
});

fn small_coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..20, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws_hold_exactly(a in small_coeffs(), b in small_coeffs(), c in small_coeffs()) {
        for beta in [Beta::golden(), Beta::parse("poly:x^3-x-1").unwrap()] {
            let (x, y, z) = (elem(&beta, &a), elem(&beta, &b), elem(&beta, &c));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(x.mul_by_beta().div_by_beta(), x.clone());
            if !x.is_exact_zero() {
                prop_assert_eq!(&x * &x.inverse().unwrap(), beta.one());
            }
        }
    }

    #[test]
    fn backends_agree_on_sign(a in small_coeffs(), n in 1i64..50, d in 1i64..50) {
        // The golden ratio as a decimal literal is not exactly G, so compare
        // against a rational base expressed both ways.
        let (alg, dec) = &*AGREEMENT_BASES;
        let r = q(n, d);
        let ea = elem(alg, &a) - alg.from_rational(&r);
        let ed = (elem(dec, &a) - dec.from_rational(&r)).forget_exact();
        if let Some(s) = ed.sign() {
            prop_assert_eq!(Some(s), ea.sign());
        }
    }

    #[test]
    fn sign_matches_rendering(a in small_coeffs()) {
        let g = Beta::golden();
        let x = elem(&g, &a);
        let text = fv_to_decimal(&x, 30);
        match x.sign().unwrap() {
            Ordering::Greater => prop_assert!(!text.starts_with('-') && text.chars().any(|c| c.is_ascii_digit() && c != '0')),
            Ordering::Less => prop_assert!(text.starts_with('-')),
            Ordering::Equal => prop_assert!(text.trim_start_matches('-').chars().all(|c| c == '0' || c == '.')),
        }
    }
}
