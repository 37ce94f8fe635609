//! Fixed-point interval arithmetic for bases given as decimal literals.
//!
//! Every value of one base shares the scale `2^bits`; endpoints are
//! rounded outward after each multiplication so the enclosure is rigorous.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct DecimalBase {
    /// Exact value of the decimal literal.
    pub value: BigRational,
    pub literal: String,
    pub bits: u32,
    beta: Iv,
}

/// `[lo, hi] / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Iv {
    pub lo: BigInt,
    pub hi: BigInt,
}

fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

fn shr_floor(n: BigInt, bits: u32) -> BigInt {
    // num-bigint's `>>` on negative values rounds toward negative infinity.
    n >> bits
}

fn shr_ceil(n: BigInt, bits: u32) -> BigInt {
    -((-n) >> bits)
}

impl DecimalBase {
    pub fn new(literal: &str, value: BigRational, bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::PrecisionTooLow(bits));
        }
        let one = BigRational::one();
        let two = BigRational::from_integer(2.into());
        if value <= one || value >= two {
            return Err(Error::RootOutsideUnitRange);
        }
        let mut base = DecimalBase {
            literal: literal.to_string(),
            bits,
            beta: Iv {
                lo: BigInt::zero(),
                hi: BigInt::zero(),
            },
            value: value.clone(),
        };
        base.beta = base.from_rational(&value);
        Ok(base)
    }

    /// Whether an exact rational is small enough to keep alongside its
    /// enclosure.
    pub fn keeps_exact(&self, q: &BigRational) -> bool {
        q.numer().bits() + q.denom().bits() <= (4 * u64::from(self.bits)).min(2048)
    }

    pub fn scale(&self) -> BigInt {
        BigInt::one() << self.bits
    }

    pub fn from_rational(&self, q: &BigRational) -> Iv {
        let n = q.numer() << self.bits;
        Iv {
            lo: floor_div(&n, q.denom()),
            hi: ceil_div(&n, q.denom()),
        }
    }

    pub fn generator(&self) -> Iv {
        self.beta.clone()
    }

    pub fn add(&self, a: &Iv, b: &Iv) -> Iv {
        Iv {
            lo: &a.lo + &b.lo,
            hi: &a.hi + &b.hi,
        }
    }

    pub fn neg(&self, a: &Iv) -> Iv {
        Iv {
            lo: -&a.hi,
            hi: -&a.lo,
        }
    }

    pub fn mul(&self, a: &Iv, b: &Iv) -> Iv {
        if !a.lo.is_negative() && !b.lo.is_negative() {
            return Iv {
                lo: shr_floor(&a.lo * &b.lo, self.bits),
                hi: shr_ceil(&a.hi * &b.hi, self.bits),
            };
        }
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().unwrap().clone();
        let max = products.iter().max().unwrap().clone();
        Iv {
            lo: shr_floor(min, self.bits),
            hi: shr_ceil(max, self.bits),
        }
    }

    pub fn mul_int(&self, a: &Iv, k: &BigInt) -> Iv {
        let (x, y) = (&a.lo * k, &a.hi * k);
        if k.is_negative() {
            Iv { lo: y, hi: x }
        } else {
            Iv { lo: x, hi: y }
        }
    }

    pub fn mul_rational(&self, a: &Iv, q: &BigRational) -> Iv {
        let t = self.mul_int(a, q.numer());
        Iv {
            lo: floor_div(&t.lo, q.denom()),
            hi: ceil_div(&t.hi, q.denom()),
        }
    }

    /// Multiplies by the exact rational `β = p/q`: linear in the operand
    /// size, and no wider than the operand scaled by `β` plus one unit.
    pub fn mul_by_beta(&self, a: &Iv) -> Iv {
        let (p, q) = (self.value.numer(), self.value.denom());
        Iv {
            lo: floor_div(&(&a.lo * p), q),
            hi: ceil_div(&(&a.hi * p), q),
        }
    }

    pub fn div_by_beta(&self, a: &Iv) -> Iv {
        let (p, q) = (self.value.numer(), self.value.denom());
        Iv {
            lo: floor_div(&(&a.lo * q), p),
            hi: ceil_div(&(&a.hi * q), p),
        }
    }

    pub fn inverse(&self, a: &Iv) -> Result<Iv> {
        if !a.lo.is_positive() && !a.hi.is_negative() {
            return Err(if a.lo.is_zero() && a.hi.is_zero() {
                Error::DivisionByZero
            } else {
                Error::Undecided
            });
        }
        // 1/[l, h] = [1/h, 1/l] (same sign), scaled: 2^(2·bits) / endpoint.
        let num = BigInt::one() << (2 * self.bits);
        Ok(Iv {
            lo: floor_div(&num, &a.hi),
            hi: ceil_div(&num, &a.lo),
        })
    }

    pub fn sign(&self, a: &Iv) -> Option<Ordering> {
        if a.lo.is_positive() {
            Some(Ordering::Greater)
        } else if a.hi.is_negative() {
            Some(Ordering::Less)
        } else if a.lo.is_zero() && a.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn to_f64(&self, a: &Iv) -> f64 {
        let mid = BigRational::new(&a.lo + &a.hi, BigInt::one() << (self.bits + 1));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn width_f64(&self, a: &Iv) -> f64 {
        BigRational::new(&a.hi - &a.lo, self.scale())
            .to_f64()
            .unwrap_or(f64::INFINITY)
    }

    pub fn bounds(&self, a: &Iv) -> (BigRational, BigRational) {
        (
            BigRational::new(a.lo.clone(), self.scale()),
            BigRational::new(a.hi.clone(), self.scale()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(lit: &str, bits: u32) -> DecimalBase {
        let v = crate::numeric::parse::parse_decimal(lit).unwrap();
        DecimalBase::new(lit, v, bits).unwrap()
    }

    #[test]
    fn enclosures_contain_exact_values() {
        let b = base("1.9", 128);
        let inv = b.div_by_beta(&b.from_rational(&BigRational::one()));
        let (lo, hi) = b.bounds(&inv);
        let exact = BigRational::new(10.into(), 19.into());
        assert!(lo <= exact && exact <= hi);
        assert!(b.width_f64(&inv) < 1e-30);
    }

    #[test]
    fn straddling_interval_is_undecided() {
        let b = base("1.5", 256);
        let tiny: BigInt = BigInt::one() << 56; // 2^-200 at 256 bits
        let iv = Iv {
            lo: -tiny.clone(),
            hi: tiny,
        };
        assert_eq!(b.sign(&iv), None);
        assert_eq!(b.sign(&b.from_rational(&BigRational::zero())), Some(Ordering::Equal));
    }

    #[test]
    fn rejects_low_precision_and_out_of_range() {
        let v = BigRational::new(3.into(), 2.into());
        assert!(matches!(DecimalBase::new("1.5", v.clone(), 32), Err(Error::PrecisionTooLow(32))));
        let two = BigRational::from_integer(2.into());
        assert!(matches!(DecimalBase::new("2", two, 128), Err(Error::RootOutsideUnitRange)));
    }
}
