//! Text formats for polynomials, decimal literals and rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Parses a decimal literal such as `1.9`, `-0.25` or `3` into an exact
/// rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !all_digits(int_part) || !all_digits(frac_part)
    {
        return Err(Error::Parse(format!("not a decimal literal: {text:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| Error::Parse(format!("bad digits in {text:?}")))?
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// Parses `p/q` or a decimal literal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    match text.split_once('/') {
        Some((n, d)) => {
            let n = parse_decimal(n)?;
            let d = parse_decimal(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(n / d)
        }
        None => parse_decimal(text),
    }
}

/// Parses an integer polynomial in `x`, e.g. `x^2-x-1`, `10x-19`,
/// `2*x^3 - x + 1`. Returns coefficients lowest degree first.
pub fn parse_polynomial(text: &str) -> Result<Vec<BigInt>> {
    let err = |msg: &str| Error::Parse(format!("{msg} in polynomial {text:?}"));
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty input"));
    }
    let bytes = s.as_bytes();
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(err("expected '+' or '-'"));
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: Option<BigInt> = if i > start {
            Some(s[start..i].parse().map_err(|_| err("bad coefficient"))?)
        } else {
            None
        };
        if i < bytes.len() && bytes[i] == b'*' {
            if coeff.is_none() {
                return Err(err("dangling '*'"));
            }
            i += 1;
            if i >= bytes.len() || bytes[i] != b'x' {
                return Err(err("expected 'x' after '*'"));
            }
        }
        let mut degree = 0usize;
        if i < bytes.len() && bytes[i] == b'x' {
            i += 1;
            degree = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let es = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if es == i {
                    return Err(err("missing exponent"));
                }
                degree = s[es..i].parse().map_err(|_| err("bad exponent"))?;
            }
        } else if coeff.is_none() {
            return Err(err("expected a term"));
        }
        if degree > 64 {
            return Err(err("degree too large"));
        }
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, BigInt::zero());
        }
        coeffs[degree] += sign * coeff.unwrap_or_else(BigInt::one);
    }
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(err("polynomial must have positive degree"));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn polynomials() {
        assert_eq!(parse_polynomial("x^2-x-1").unwrap(), ints(&[-1, -1, 1]));
        assert_eq!(parse_polynomial("10x-19").unwrap(), ints(&[-19, 10]));
        assert_eq!(parse_polynomial("10*x - 19").unwrap(), ints(&[-19, 10]));
        assert_eq!(parse_polynomial("-3+x^2").unwrap(), ints(&[-3, 0, 1]));
        assert_eq!(parse_polynomial("x^3-x-1").unwrap(), ints(&[-1, -1, 0, 1]));
        assert!(parse_polynomial("7").is_err());
        assert!(parse_polynomial("x^").is_err());
        assert!(parse_polynomial("x^2 x").is_err());
        assert!(parse_polynomial("").is_err());
    }

    #[test]
    fn decimals_and_fractions() {
        assert_eq!(parse_decimal("1.9").unwrap(), BigRational::new(19.into(), 10.into()));
        assert_eq!(parse_decimal("-0.25").unwrap(), BigRational::new((-1).into(), 4.into()));
        assert_eq!(parse_decimal("3").unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(parse_rational("1/3").unwrap(), BigRational::new(1.into(), 3.into()));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
