//! Arithmetic over a base `β ∈ (1, 2)`.
//!
//! A [`Beta`] is either algebraic (an integer polynomial plus an isolating
//! interval for the intended root) or a decimal literal handled with
//! rigorous fixed-point intervals. [`FieldValue`]s are attached to one
//! `Beta`; the algebraic backend is exact and always decides signs, the
//! decimal backend may answer "undecided" and relies on precision
//! escalation ([`with_escalation`]).

mod algebraic;
mod expr;
mod interval;
pub mod parse;
pub mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::QuasiGreedy;

pub use algebraic::RootInterval;
pub use expr::{eval_expr, XSpec};

use algebraic::{AlgebraicBase, Elem};
use interval::{DecimalBase, Iv};

/// Default working precision for decimal bases.
pub const DEFAULT_PRECISION_BITS: u32 = 128;
/// Default escalation cap; overridable through [`PRECISION_CAP_ENV`].
pub const DEFAULT_PRECISION_CAP_BITS: u32 = 4096;
pub const PRECISION_CAP_ENV: &str = "BETAEXP_PRECISION_CAP";
/// Digits of the expansion of one computed when a base is built.
pub const QUASI_GREEDY_HORIZON: usize = 512;

static NEXT_BETA_ID: AtomicU64 = AtomicU64::new(1);

/// Escalation cap from the environment, falling back to the default.
pub fn default_precision_cap() -> u32 {
    std::env::var(PRECISION_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &u32| v >= 64)
        .unwrap_or(DEFAULT_PRECISION_CAP_BITS)
}

#[derive(Clone, Debug)]
enum Backend {
    Algebraic(AlgebraicBase),
    Decimal(DecimalBase),
}

#[derive(Debug)]
struct BetaInner {
    id: u64,
    backend: Backend,
    cap_bits: u32,
    quasi: Option<QuasiGreedy>,
}

/// The base of numeration. Cheap to clone; immutable.
#[derive(Clone)]
pub struct Beta(Arc<BetaInner>);

impl fmt::Debug for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Beta({self})")
    }
}

impl fmt::Display for Beta {
    /// The spec string this base parses back from.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.backend {
            Backend::Algebraic(a) => write!(
                f,
                "poly:{}@{},{}",
                format_polynomial(&a.original),
                a.isolating.lo_rational(),
                a.isolating.hi_rational()
            ),
            Backend::Decimal(d) => f.write_str(&d.literal),
        }
    }
}

/// Serializable description of a base.
#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BetaDescription {
    Algebraic {
        polynomial: String,
        root_interval: (String, String),
        approx: f64,
    },
    Decimal {
        literal: String,
        precision_bits: u32,
        approx: f64,
    },
}

impl Beta {
    fn finish(backend: Backend, cap_bits: u32) -> Beta {
        let id = NEXT_BETA_ID.fetch_add(1, AtomicOrdering::Relaxed);
        let provisional = Beta(Arc::new(BetaInner {
            id,
            backend: backend.clone(),
            cap_bits,
            quasi: None,
        }));
        let quasi = QuasiGreedy::compute(&provisional, QUASI_GREEDY_HORIZON);
        Beta(Arc::new(BetaInner {
            id,
            backend,
            cap_bits,
            quasi: Some(quasi),
        }))
    }

    /// Algebraic base: the unique root of `poly` (lowest degree first) in
    /// the open interval `(lo, hi)`, which must lie in `(1, 2)`.
    pub fn algebraic(poly: &[BigInt], lo: &BigRational, hi: &BigRational) -> Result<Beta> {
        let base = AlgebraicBase::new(poly, lo, hi)?;
        Ok(Beta::finish(Backend::Algebraic(base), default_precision_cap()))
    }

    /// Algebraic base from text such as `x^2-x-1`, searching `(1, 2)`.
    pub fn from_polynomial(text: &str) -> Result<Beta> {
        let poly = parse::parse_polynomial(text)?;
        Beta::algebraic(&poly, &BigRational::one(), &BigRational::from_integer(2.into()))
    }

    /// The golden ratio, root of `x^2 - x - 1`.
    pub fn golden() -> Beta {
        Beta::from_polynomial("x^2-x-1").expect("golden ratio polynomial")
    }

    /// Decimal base at the given working precision.
    pub fn decimal(literal: &str, bits: u32) -> Result<Beta> {
        let value = parse::parse_decimal(literal)?;
        let base = DecimalBase::new(literal.trim(), value, bits)?;
        Ok(Beta::finish(Backend::Decimal(base), default_precision_cap()))
    }

    /// Parses `poly:<polynomial>[@lo,hi]` or a decimal literal.
    pub fn parse(spec: &str) -> Result<Beta> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("poly:") {
            let (poly_text, interval) = match rest.split_once('@') {
                Some((p, iv)) => (p, Some(iv)),
                None => (rest, None),
            };
            let poly = parse::parse_polynomial(poly_text)?;
            let (lo, hi) = match interval {
                Some(iv) => {
                    let (a, b) = iv
                        .split_once(',')
                        .ok_or_else(|| Error::Parse(format!("interval must be lo,hi: {iv:?}")))?;
                    (parse::parse_rational(a)?, parse::parse_rational(b)?)
                }
                None => (BigRational::one(), BigRational::from_integer(2.into())),
            };
            Beta::algebraic(&poly, &lo, &hi)
        } else if spec == "golden" {
            Ok(Beta::golden())
        } else {
            Beta::decimal(spec, DEFAULT_PRECISION_BITS)
        }
    }

    /// Same base with a different escalation cap.
    pub fn with_precision_cap(&self, cap_bits: u32) -> Beta {
        Beta(Arc::new(BetaInner {
            id: self.0.id,
            backend: self.0.backend.clone(),
            cap_bits,
            quasi: self.0.quasi.clone(),
        }))
    }

    /// A fresh decimal base at `bits` working precision. Algebraic bases are
    /// returned unchanged.
    pub fn with_precision(&self, bits: u32) -> Result<Beta> {
        match &self.0.backend {
            Backend::Algebraic(_) => Ok(self.clone()),
            Backend::Decimal(d) => {
                let base = DecimalBase::new(&d.literal, d.value.clone(), bits)?;
                Ok(Beta::finish(Backend::Decimal(base), self.0.cap_bits))
            }
        }
    }

    /// Same decimal base at `bits`, without the quasi-greedy cache.
    pub(crate) fn provisional_at(&self, bits: u32) -> Result<Beta> {
        match &self.0.backend {
            Backend::Algebraic(_) => Ok(self.clone()),
            Backend::Decimal(d) => {
                let base = DecimalBase::new(&d.literal, d.value.clone(), bits)?;
                Ok(Beta(Arc::new(BetaInner {
                    id: NEXT_BETA_ID.fetch_add(1, AtomicOrdering::Relaxed),
                    backend: Backend::Decimal(base),
                    cap_bits: self.0.cap_bits,
                    quasi: None,
                })))
            }
        }
    }

    pub fn is_algebraic(&self) -> bool {
        matches!(self.0.backend, Backend::Algebraic(_))
    }

    pub fn is_decimal(&self) -> bool {
        !self.is_algebraic()
    }

    /// Working precision in bits (`None` for the exact backend).
    pub fn precision_bits(&self) -> Option<u32> {
        match &self.0.backend {
            Backend::Algebraic(_) => None,
            Backend::Decimal(d) => Some(d.bits),
        }
    }

    pub fn precision_cap(&self) -> u32 {
        self.0.cap_bits
    }

    pub fn same_base(&self, other: &Beta) -> bool {
        self.0.id == other.0.id
    }

    /// Minimal polynomial actually used for arithmetic (algebraic only).
    pub fn minimal_polynomial(&self) -> Option<&[BigInt]> {
        match &self.0.backend {
            Backend::Algebraic(a) => Some(&a.minpoly),
            Backend::Decimal(_) => None,
        }
    }

    pub fn root_interval(&self) -> Option<&RootInterval> {
        match &self.0.backend {
            Backend::Algebraic(a) => Some(&a.root),
            Backend::Decimal(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0.backend {
            Backend::Algebraic(a) => a.beta_f64(),
            Backend::Decimal(d) => d.value.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn describe(&self) -> BetaDescription {
        match &self.0.backend {
            Backend::Algebraic(a) => BetaDescription::Algebraic {
                polynomial: format_polynomial(&a.original),
                root_interval: (
                    format!("{}", a.root.lo_rational()),
                    format!("{}", a.root.hi_rational()),
                ),
                approx: a.beta_f64(),
            },
            Backend::Decimal(d) => BetaDescription::Decimal {
                literal: d.literal.clone(),
                precision_bits: d.bits,
                approx: self.to_f64(),
            },
        }
    }

    pub(crate) fn quasi_greedy_cache(&self) -> Option<&QuasiGreedy> {
        self.0.quasi.as_ref()
    }

    // ---- constructors for values ----

    fn wrap(&self, repr: Repr) -> FieldValue {
        FieldValue {
            beta: self.clone(),
            repr,
        }
    }

    pub fn zero(&self) -> FieldValue {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_int(1)
    }

    pub fn from_int(&self, k: i64) -> FieldValue {
        self.from_rational(&BigRational::from_integer(k.into()))
    }

    pub fn from_rational(&self, q: &BigRational) -> FieldValue {
        match &self.0.backend {
            Backend::Algebraic(a) => self.wrap(Repr::Exact(a.from_rational(q))),
            Backend::Decimal(d) => {
                self.wrap(decimal_repr(d, Some(q.clone()), || d.from_rational(q)))
            }
        }
    }

    /// A decimal-backend value known only through the enclosure
    /// `[lo, hi]` (rounded outward to the working precision).
    pub fn interval_value(&self, lo: &BigRational, hi: &BigRational) -> Result<FieldValue> {
        match &self.0.backend {
            Backend::Algebraic(_) => Err(Error::BackendUnsupported),
            Backend::Decimal(d) => {
                if lo > hi {
                    return Err(Error::OutOfDomain("empty interval".into()));
                }
                let iv = Iv {
                    lo: d.from_rational(lo).lo,
                    hi: d.from_rational(hi).hi,
                };
                Ok(self.wrap(Repr::Interval(iv, None)))
            }
        }
    }

    /// The value `β` itself.
    pub fn value(&self) -> FieldValue {
        match &self.0.backend {
            Backend::Algebraic(a) => self.wrap(Repr::Exact(a.generator())),
            Backend::Decimal(d) => {
                self.wrap(Repr::Interval(d.generator(), Some(d.value.clone())))
            }
        }
    }

    /// `β^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> FieldValue {
        let mut v = self.one();
        for _ in 0..k.unsigned_abs() {
            v = if k > 0 { v.mul_by_beta() } else { v.div_by_beta() };
        }
        v
    }

    /// Upper end of the expansion interval, `1/(β-1)`.
    pub fn max_value(&self) -> FieldValue {
        (self.value() - self.one())
            .inverse()
            .expect("β - 1 is nonzero")
    }

    /// Exact order of `x` against `1/(β-1)`, computed as `x(β-1)` vs `1`.
    pub fn cmp_with_max(&self, x: &FieldValue) -> Result<Ordering> {
        let t = x * &(self.value() - self.one());
        t.cmp_checked(&self.one())
    }
}

fn format_polynomial(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (deg, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let show_coeff = !mag.is_one() || deg == 0;
        if show_coeff {
            out.push_str(&mag.to_string());
        }
        match deg {
            0 => {}
            1 => out.push('x'),
            _ => out.push_str(&format!("x^{deg}")),
        }
    }
    out
}

/// Runs `f`, doubling the working precision of a decimal base whenever it
/// fails for lack of precision, up to the base's cap.
pub fn with_escalation<T>(beta: &Beta, mut f: impl FnMut(&Beta) -> Result<T>) -> Result<T> {
    let mut current = beta.clone();
    loop {
        match f(&current) {
            Err(e) if e.is_precision_related() => {
                let Some(bits) = current.precision_bits() else {
                    return Err(e);
                };
                let next = bits.saturating_mul(2);
                if next > current.precision_cap() {
                    return Err(e);
                }
                current = current.with_precision(next)?;
            }
            other => return other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Exact(Elem),
    /// Enclosure, plus the exact rational value while it stays small.
    /// Decimal literals are rationals, so short computations (word values,
    /// normalizing finite words) keep deciding ties exactly.
    Interval(Iv, Option<BigRational>),
}

/// An element of the ring generated by `β` (exact), or an enclosing
/// interval of a real (decimal backend).
#[derive(Clone)]
pub struct FieldValue {
    beta: Beta,
    repr: Repr,
}

impl PartialEq for FieldValue {
    /// Structural equality: exact elements compare by reduced coefficients,
    /// intervals by their endpoints.
    fn eq(&self, other: &Self) -> bool {
        self.beta.same_base(&other.beta) && self.repr == other.repr
    }
}

impl Eq for FieldValue {}

impl std::hash::Hash for FieldValue {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl fmt::Debug for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(e) => write!(f, "FieldValue({:?}/{} ≈ {})", e.coeffs, e.den, self.to_f64()),
            Repr::Interval(_, Some(q)) => write!(f, "FieldValue({q})"),
            Repr::Interval(_, None) => {
                write!(f, "FieldValue(≈{} ± {:e})", self.to_f64(), self.width() / 2.0)
            }
        }
    }
}

/// Binary operations exposed for checked arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    MulByBeta,
    DivByBeta,
}

/// Checked arithmetic entry point; the second operand is ignored for the
/// unary β-scalings.
pub fn fv_arith(a: &FieldValue, b: &FieldValue, op: ArithOp) -> Result<FieldValue> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::MulByBeta => Ok(a.mul_by_beta()),
        ArithOp::DivByBeta => Ok(a.div_by_beta()),
    }
}

impl FieldValue {
    pub fn beta(&self) -> &Beta {
        &self.beta
    }

    fn with(&self, repr: Repr) -> FieldValue {
        FieldValue {
            beta: self.beta.clone(),
            repr,
        }
    }

    fn check_base(&self, other: &FieldValue) -> Result<()> {
        if self.beta.same_base(&other.beta) {
            Ok(())
        } else {
            Err(Error::MixedBase)
        }
    }

    fn binary(
        &self,
        other: &FieldValue,
        exact: impl Fn(&AlgebraicBase, &Elem, &Elem) -> Elem,
        approx: impl Fn(&DecimalBase, &Iv, &Iv) -> Iv,
        rational: impl Fn(&DecimalBase, &BigRational, &BigRational) -> BigRational,
    ) -> Result<FieldValue> {
        self.check_base(other)?;
        let repr = match (&self.beta.0.backend, &self.repr, &other.repr) {
            (Backend::Algebraic(a), Repr::Exact(x), Repr::Exact(y)) => Repr::Exact(exact(a, x, y)),
            (Backend::Decimal(d), Repr::Interval(x, qx), Repr::Interval(y, qy)) => {
                let q = match (qx, qy) {
                    (Some(qx), Some(qy)) => Some(rational(d, qx, qy)),
                    _ => None,
                };
                decimal_repr(d, q, || approx(d, x, y))
            }
            _ => unreachable!("representation matches backend"),
        };
        Ok(self.with(repr))
    }

    fn unary(
        &self,
        exact: impl Fn(&AlgebraicBase, &Elem) -> Elem,
        approx: impl Fn(&DecimalBase, &Iv) -> Iv,
        rational: impl Fn(&DecimalBase, &BigRational) -> BigRational,
    ) -> FieldValue {
        let repr = match (&self.beta.0.backend, &self.repr) {
            (Backend::Algebraic(a), Repr::Exact(x)) => Repr::Exact(exact(a, x)),
            (Backend::Decimal(d), Repr::Interval(x, q)) => {
                decimal_repr(d, q.as_ref().map(|q| rational(d, q)), || approx(d, x))
            }
            _ => unreachable!("representation matches backend"),
        };
        self.with(repr)
    }

    pub fn try_add(&self, other: &FieldValue) -> Result<FieldValue> {
        self.binary(other, |a, x, y| a.add(x, y), |d, x, y| d.add(x, y), |_, x, y| x + y)
    }

    pub fn try_sub(&self, other: &FieldValue) -> Result<FieldValue> {
        self.binary(
            other,
            |a, x, y| a.add(x, &a.neg(y)),
            |d, x, y| d.add(x, &d.neg(y)),
            |_, x, y| x - y,
        )
    }

    pub fn try_mul(&self, other: &FieldValue) -> Result<FieldValue> {
        self.binary(other, |a, x, y| a.mul(x, y), |d, x, y| d.mul(x, y), |_, x, y| x * y)
    }

    pub fn try_div(&self, other: &FieldValue) -> Result<FieldValue> {
        self.check_base(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn mul_by_beta(&self) -> FieldValue {
        self.unary(|a, x| a.mul_by_beta(x), |d, x| d.mul_by_beta(x), |d, q| q * &d.value)
    }

    pub fn div_by_beta(&self) -> FieldValue {
        self.unary(|a, x| a.div_by_beta(x), |d, x| d.div_by_beta(x), |d, q| q / &d.value)
    }

    /// Multiplies by `β^k`.
    pub fn scale_by_beta_pow(&self, k: i64) -> FieldValue {
        let mut v = self.clone();
        for _ in 0..k.unsigned_abs() {
            v = if k > 0 { v.mul_by_beta() } else { v.div_by_beta() };
        }
        v
    }

    pub fn mul_rational(&self, q: &BigRational) -> FieldValue {
        self.unary(|a, x| a.scale(x, q), |d, x| d.mul_rational(x, q), |_, x| x * q)
    }

    pub fn mul_int(&self, k: i64) -> FieldValue {
        let k = BigInt::from(k);
        self.unary(
            |a, x| a.scale(x, &BigRational::from_integer(k.clone())),
            |d, x| d.mul_int(x, &k),
            |_, x| x * BigRational::from_integer(k.clone()),
        )
    }

    pub fn add_int(&self, k: i64) -> FieldValue {
        self + &self.beta.from_int(k)
    }

    pub fn inverse(&self) -> Result<FieldValue> {
        let repr = match (&self.beta.0.backend, &self.repr) {
            (Backend::Algebraic(a), Repr::Exact(x)) => Repr::Exact(a.inverse(x)?),
            (Backend::Decimal(d), Repr::Interval(x, q)) => match q {
                Some(q) if q.is_zero() => return Err(Error::DivisionByZero),
                Some(q) if d.keeps_exact(&q.recip()) => decimal_repr(d, Some(q.recip()), || x.clone()),
                _ => Repr::Interval(d.inverse(x)?, None),
            },
            _ => unreachable!("representation matches backend"),
        };
        Ok(self.with(repr))
    }

    /// Sign, or `None` when an interval straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        match (&self.beta.0.backend, &self.repr) {
            (Backend::Algebraic(a), Repr::Exact(x)) => Some(a.sign(x)),
            (Backend::Decimal(_), Repr::Interval(_, Some(q))) => Some(q.cmp(&BigRational::zero())),
            (Backend::Decimal(d), Repr::Interval(x, None)) => d.sign(x),
            _ => unreachable!("representation matches backend"),
        }
    }

    pub fn sign_checked(&self) -> Result<Ordering> {
        self.sign().ok_or(Error::Undecided)
    }

    pub fn cmp_checked(&self, other: &FieldValue) -> Result<Ordering> {
        self.try_sub(other)?.sign_checked()
    }

    pub fn cmp_int(&self, k: i64) -> Result<Ordering> {
        self.add_int(-k).sign_checked()
    }

    /// True only for the exact zero of the algebraic backend or a
    /// degenerate `[0, 0]` interval.
    pub fn is_exact_zero(&self) -> bool {
        match &self.repr {
            Repr::Exact(e) => e.is_zero(),
            Repr::Interval(_, Some(q)) => q.is_zero(),
            Repr::Interval(iv, None) => iv.lo.is_zero() && iv.hi.is_zero(),
        }
    }

    /// True when the value is known exactly (algebraic element, or a
    /// decimal-backend value still carrying its rational form).
    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_) | Repr::Interval(_, Some(_)))
    }

    /// Exact rational value, when known (decimal backend).
    pub fn exact_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Interval(_, q) => q.as_ref(),
            Repr::Exact(_) => None,
        }
    }

    /// The same number attached to `beta`, when it can be rebuilt exactly:
    /// a decimal-backend value still carrying its rational form, or any value
    /// already attached to `beta`.
    pub fn transfer_to(&self, beta: &Beta) -> Option<FieldValue> {
        if self.beta.same_base(beta) {
            return Some(self.clone());
        }
        match (&self.repr, beta.is_decimal()) {
            (Repr::Interval(_, Some(q)), true) => Some(beta.from_rational(q)),
            _ => None,
        }
    }

    /// Drops the exact rational form, leaving only the enclosure.
    pub fn forget_exact(&self) -> FieldValue {
        match &self.repr {
            Repr::Interval(iv, Some(_)) => self.with(Repr::Interval(iv.clone(), None)),
            _ => self.clone(),
        }
    }

    /// Reduced coefficients `c_0..c_{d-1}` over the common denominator
    /// (algebraic backend only).
    pub fn coefficients(&self) -> Option<(Vec<BigInt>, BigInt)> {
        match &self.repr {
            Repr::Exact(e) => Some((e.coeffs.clone(), e.den.clone())),
            Repr::Interval(..) => None,
        }
    }

    /// Rational coefficients (algebraic backend only).
    pub fn rational_coefficients(&self) -> Option<Vec<BigRational>> {
        self.coefficients().map(|(c, d)| {
            c.into_iter()
                .map(|x| BigRational::new(x, d.clone()))
                .collect()
        })
    }

    /// Width of the enclosure; zero for exact values.
    pub fn width(&self) -> f64 {
        match (&self.beta.0.backend, &self.repr) {
            (Backend::Decimal(d), Repr::Interval(x, None)) => d.width_f64(x),
            _ => 0.0,
        }
    }

    /// Rational lower/upper bounds; for exact values, bounds tighter than
    /// `2^-bits`.
    pub fn bounds(&self, bits: u32) -> (BigRational, BigRational) {
        match (&self.beta.0.backend, &self.repr) {
            (Backend::Algebraic(a), Repr::Exact(x)) => a.enclose(x, bits),
            (Backend::Decimal(_), Repr::Interval(_, Some(q))) => (q.clone(), q.clone()),
            (Backend::Decimal(d), Repr::Interval(x, None)) => d.bounds(x),
            _ => unreachable!("representation matches backend"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match (&self.beta.0.backend, &self.repr) {
            (Backend::Algebraic(a), Repr::Exact(x)) => {
                let (lo, hi) = a.enclose(x, 64);
                ((lo + hi) / BigRational::from_integer(2.into()))
                    .to_f64()
                    .unwrap_or(f64::NAN)
            }
            (Backend::Decimal(d), Repr::Interval(x, _)) => d.to_f64(x),
            _ => unreachable!("representation matches backend"),
        }
    }

    /// Decimal rendering with `digits` places after the point: correctly
    /// rounded (half up) for exact values, the rounded interval midpoint
    /// otherwise (see [`FieldValue::width`]).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let half = BigRational::new(1.into(), 2.into());
        let m = match &self.repr {
            Repr::Interval(_, Some(q)) => {
                (q * BigRational::from_integer(scale) + half).floor().to_integer()
            }
            Repr::Exact(_) => {
                let t = self.mul_rational(&BigRational::from_integer(scale.clone()))
                    + self.beta.from_rational(&half);
                let (lo, _) = t.bounds(4);
                let mut m = lo.floor().to_integer();
                loop {
                    let below = t
                        .try_sub(&self.beta.from_rational(&BigRational::from_integer(m.clone())))
                        .expect("same base");
                    if below.sign() == Some(Ordering::Less) {
                        m -= 1;
                        continue;
                    }
                    let above = t
                        .try_sub(&self.beta.from_rational(&BigRational::from_integer(&m + 1)))
                        .expect("same base");
                    if above.sign() != Some(Ordering::Less) {
                        m += 1;
                        continue;
                    }
                    break m;
                }
            }
            Repr::Interval(_, None) => {
                let (lo, hi) = self.bounds(0);
                let mid = (lo + hi) * &half;
                (mid * BigRational::from_integer(scale) + half).floor().to_integer()
            }
        };
        format_scaled(&m, digits)
    }
}

fn decimal_repr(d: &DecimalBase, exact: Option<BigRational>, approx: impl FnOnce() -> Iv) -> Repr {
    match exact {
        Some(q) if d.keeps_exact(&q) => Repr::Interval(d.from_rational(&q), Some(q)),
        _ => Repr::Interval(approx(), None),
    }
}

fn format_scaled(m: &BigInt, digits: usize) -> String {
    let neg = m.is_negative();
    let mut s = m.abs().to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    if digits > 0 {
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

/// `fv_to_decimal` under its conventional name.
pub fn fv_to_decimal(a: &FieldValue, digits: usize) -> String {
    a.to_decimal(digits)
}

/// `fv_sign`: `Some(-1 | 0 | 1)` or `None` when undecided.
pub fn fv_sign(a: &FieldValue) -> Option<i8> {
    a.sign().map(|o| o as i8)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldValue> for &FieldValue {
            type Output = FieldValue;
            /// Panics when the operands come from different bases; use the
            /// checked variant to get [`Error::MixedBase`] instead.
            fn $method(self, rhs: &FieldValue) -> FieldValue {
                self.$checked(rhs).expect("operands from the same base")
            }
        }
        impl $trait<FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: FieldValue) -> FieldValue {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: &FieldValue) -> FieldValue {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.unary(|a, x| a.neg(x), |d, x| d.neg(x), |_, x| -x)
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        -&self
    }
}

#[cfg(test)]
mod tests;
