//! Exact arithmetic in `Q[x]/(p)` evaluated at an isolated real root of `p`.
//!
//! Elements are integer coefficient vectors over a common positive
//! denominator. Signs are decided by evaluating over a dyadic isolating
//! interval of the root and bisecting it when the enclosure straddles zero.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{count_roots_open, Poly};
use crate::error::{Error, Result};

/// Bits of the isolating interval kept on the base; sign queries refine
/// a local copy past this when needed.
const STORED_ROOT_BITS: u32 = 256;

/// Dyadic interval `[lo / 2^shift, hi / 2^shift]` around the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub shift: u32,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.shift)
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.shift)
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraicBase {
    /// Square-free, primitive, positive leading coefficient, nonzero constant.
    pub minpoly: Vec<BigInt>,
    pub root: RootInterval,
    /// The caller's original polynomial, for display.
    pub original: Vec<BigInt>,
    /// Coarsest dyadic interval isolating the root, for display.
    pub isolating: RootInterval,
    beta_f64: f64,
}

impl AlgebraicBase {
    /// Isolates the unique root of `poly` inside `(lo, hi) ∩ (1, 2)`.
    pub fn new(poly: &[BigInt], lo: &BigRational, hi: &BigRational) -> Result<Self> {
        let p = Poly::from_ints(poly);
        let Some(deg) = p.degree() else {
            return Err(Error::Parse("zero polynomial".into()));
        };
        if deg == 0 {
            return Err(Error::Parse("constant polynomial".into()));
        }
        let mut sf = p.square_free();
        // Strip the root at zero; β > 1 so it cannot be the intended root.
        while sf.coeffs()[0].is_zero() {
            sf = Poly::new(sf.coeffs()[1..].to_vec());
        }
        if lo >= hi {
            return Err(Error::Parse("empty root interval".into()));
        }
        let in_user = count_roots_open(&sf, lo, hi);
        match in_user {
            0 => return Err(Error::NoRootInInterval),
            1 => {}
            n => return Err(Error::MultipleRootsInInterval(n)),
        }
        let one = BigRational::one();
        let two = BigRational::from_integer(2.into());
        let ulo = lo.max(&one).clone();
        let uhi = hi.min(&two).clone();
        if ulo >= uhi || count_roots_open(&sf, &ulo, &uhi) != 1 {
            return Err(Error::RootOutsideUnitRange);
        }
        let minpoly = sf.primitive_integer();

        // Bisect the dyadic grid on [1, 2] until the interval holds exactly
        // one root of the square-free polynomial.
        let mut root = RootInterval {
            lo: BigInt::one(),
            hi: BigInt::from(2),
            shift: 0,
        };
        loop {
            let (l, h) = (root.lo_rational(), root.hi_rational());
            let endpoints_clear = !sf.eval(&l).is_zero() && !sf.eval(&h).is_zero();
            if endpoints_clear && count_roots_open(&sf, &l, &h) == 1 {
                break;
            }
            let mid_num = &root.lo + &root.hi;
            let shift = root.shift + 1;
            let mid = BigRational::new(mid_num.clone(), BigInt::one() << shift);
            if sf.eval(&mid).is_zero() && mid > ulo && mid < uhi {
                root = RootInterval {
                    lo: mid_num.clone(),
                    hi: mid_num,
                    shift,
                };
                break;
            }
            let left_lo = l.clone().max(ulo.clone());
            let left_hi = mid.clone().min(uhi.clone());
            let in_left = count_roots_open(&sf, &left_lo, &left_hi) == 1;
            root = if in_left {
                RootInterval {
                    lo: &root.lo << 1,
                    hi: mid_num,
                    shift,
                }
            } else {
                RootInterval {
                    lo: mid_num,
                    hi: &root.hi << 1,
                    shift,
                }
            };
        }
        let mut base = AlgebraicBase {
            minpoly,
            isolating: root.clone(),
            root,
            original: poly.to_vec(),
            beta_f64: f64::NAN,
        };
        while !base.root.is_exact() && base.root.shift < STORED_ROOT_BITS {
            base.root = base.bisect(&base.root);
        }
        let r = &base.root;
        base.beta_f64 = BigRational::new(&r.lo + &r.hi, BigInt::one() << (r.shift + 1))
            .to_f64()
            .unwrap_or(f64::NAN);
        Ok(base)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Sign of the minimal polynomial at `num / 2^shift`.
    fn minpoly_sign_at(&self, num: &BigInt, shift: u32) -> Ordering {
        let d = self.degree();
        let mut acc = BigInt::zero();
        let mut pow = BigInt::one();
        for (i, m) in self.minpoly.iter().enumerate() {
            acc += (m * &pow) << (shift as usize * (d - i));
            pow *= num;
        }
        acc.sign_ordering()
    }

    fn bisect(&self, r: &RootInterval) -> RootInterval {
        let shift = r.shift + 1;
        let lo = &r.lo << 1;
        let hi = &r.hi << 1;
        let mid = &r.lo + &r.hi;
        let s_mid = self.minpoly_sign_at(&mid, shift);
        if s_mid == Ordering::Equal {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
                shift,
            };
        }
        let s_lo = self.minpoly_sign_at(&lo, shift);
        if s_lo == s_mid {
            RootInterval { lo: mid, hi, shift }
        } else {
            RootInterval { lo, hi: mid, shift }
        }
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta_f64
    }

    // ---- element arithmetic (coefficient vectors of length `degree`) ----

    pub fn zero(&self) -> Elem {
        Elem {
            coeffs: vec![BigInt::zero(); self.degree()],
            den: BigInt::one(),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Elem {
        let mut e = self.zero();
        e.coeffs[0] = q.numer().clone();
        e.den = q.denom().clone();
        e.normalized()
    }

    /// The element `β` itself.
    pub fn generator(&self) -> Elem {
        let mut e = self.zero();
        if self.degree() == 1 {
            // p = m1 x + m0, β = -m0/m1
            return self.from_rational(&BigRational::new(-&self.minpoly[0], self.minpoly[1].clone()));
        }
        e.coeffs[1] = BigInt::one();
        e
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        if a.den == b.den {
            Elem {
                coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
                den: a.den.clone(),
            }
            .normalized()
        } else {
            Elem {
                coeffs: a
                    .coeffs
                    .iter()
                    .zip(&b.coeffs)
                    .map(|(x, y)| x * &b.den + y * &a.den)
                    .collect(),
                den: &a.den * &b.den,
            }
            .normalized()
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        Elem {
            coeffs: a.coeffs.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    pub fn scale(&self, a: &Elem, k: &BigRational) -> Elem {
        Elem {
            coeffs: a.coeffs.iter().map(|c| c * k.numer()).collect(),
            den: &a.den * k.denom(),
        }
        .normalized()
    }

    /// Reduces an integer coefficient vector of arbitrary length modulo the
    /// minimal polynomial, returning the element `wide / den`.
    fn reduce(&self, mut wide: Vec<BigInt>, mut den: BigInt) -> Elem {
        let d = self.degree();
        let lead = &self.minpoly[d];
        while wide.len() > d {
            let k = wide.len() - 1;
            let top = wide.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            if !lead.is_one() {
                for c in wide.iter_mut() {
                    *c *= lead;
                }
                den *= lead;
            }
            for (i, m) in self.minpoly[..d].iter().enumerate() {
                wide[k - d + i] -= &top * m;
            }
        }
        wide.resize(d, BigInt::zero());
        Elem { coeffs: wide, den }.normalized()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let d = self.degree();
        let mut wide = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                wide[i + j] += x * y;
            }
        }
        self.reduce(wide, &a.den * &b.den)
    }

    pub fn mul_by_beta(&self, a: &Elem) -> Elem {
        let mut wide = Vec::with_capacity(a.coeffs.len() + 1);
        wide.push(BigInt::zero());
        wide.extend(a.coeffs.iter().cloned());
        self.reduce(wide, a.den.clone())
    }

    pub fn div_by_beta(&self, a: &Elem) -> Elem {
        let d = self.degree();
        let m0 = &self.minpoly[0];
        let c0 = &a.coeffs[0];
        // c/β = (c_1 + c_2 β + ...) - c_0 (m_1 + m_2 β + ... + m_d β^{d-1}) / m_0
        let coeffs = (0..d)
            .map(|i| {
                let shifted = a.coeffs.get(i + 1).cloned().unwrap_or_default();
                shifted * m0 - c0 * &self.minpoly[i + 1]
            })
            .collect();
        Elem {
            coeffs,
            den: &a.den * m0,
        }
        .normalized()
    }

    /// Inverse by solving `a · u = 1` in the quotient ring.
    pub fn inverse(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.degree();
        // Columns: a·β^j reduced, as rationals.
        let mut col = Elem {
            coeffs: a.coeffs.clone(),
            den: a.den.clone(),
        };
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d + 1]; d];
        for j in 0..d {
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = BigRational::new(col.coeffs[i].clone(), col.den.clone());
            }
            col = self.mul_by_beta(&col);
        }
        m[0][d] = BigRational::one();
        // Gauss-Jordan elimination.
        for c in 0..d {
            let Some(p) = (c..d).find(|&r| !m[r][c].is_zero()) else {
                return Err(Error::NotInvertible);
            };
            m.swap(c, p);
            let pivot = m[c][c].clone();
            for v in m[c].iter_mut() {
                *v /= &pivot;
            }
            for r in 0..d {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in c..=d {
                        let t = &f * &m[c][k];
                        m[r][k] -= t;
                    }
                }
            }
        }
        let den = m
            .iter()
            .fold(BigInt::one(), |acc, row| acc.lcm(row[d].denom()));
        let coeffs = m
            .iter()
            .map(|row| (&row[d] * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        Ok(Elem { coeffs, den }.normalized())
    }

    /// Lower/upper bounds of `Σ c_i β^i` over the interval, scaled by
    /// `2^(shift·(d-1))`; the denominator is positive and ignored.
    fn eval_bounds(&self, coeffs: &[BigInt], r: &RootInterval) -> (BigInt, BigInt) {
        let d = self.degree();
        let mut low = BigInt::zero();
        let mut high = BigInt::zero();
        let mut plo = BigInt::one();
        let mut phi = BigInt::one();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let scale = r.shift as usize * (d - 1 - i);
                let a = (c * &plo) << scale;
                let b = (c * &phi) << scale;
                if c.is_positive() {
                    low += a;
                    high += b;
                } else {
                    low += b;
                    high += a;
                }
            }
            plo *= &r.lo;
            phi *= &r.hi;
        }
        (low, high)
    }

    fn fast_sign(&self, coeffs: &[BigInt]) -> Option<Ordering> {
        let beta = self.beta_f64();
        let mut acc = 0.0f64;
        let mut mag = 0.0f64;
        let mut pow = 1.0f64;
        for c in coeffs {
            let cf = c.to_f64()?;
            if !cf.is_finite() {
                return None;
            }
            acc += cf * pow;
            mag += cf.abs() * pow;
            pow *= beta;
        }
        if !acc.is_finite() || !mag.is_finite() {
            return None;
        }
        if acc.abs() > mag * 1e-9 + f64::MIN_POSITIVE {
            Some(if acc > 0.0 { Ordering::Greater } else { Ordering::Less })
        } else {
            None
        }
    }

    fn vanishes_via_gcd(&self, coeffs: &[BigInt], r: &RootInterval) -> bool {
        let c = Poly::from_ints(coeffs);
        let g = c.gcd(&Poly::from_ints(&self.minpoly));
        match g.degree() {
            Some(k) if k >= 1 => {
                let (lo, hi) = (r.lo_rational(), r.hi_rational());
                if r.is_exact() {
                    g.eval(&lo).is_zero()
                } else {
                    // The isolating interval holds no other root of the
                    // minimal polynomial, hence none of its factor g.
                    count_roots_open(&g, &lo, &hi) >= 1
                }
            }
            _ => false,
        }
    }

    pub fn sign(&self, a: &Elem) -> Ordering {
        if a.is_zero() {
            return Ordering::Equal;
        }
        if a.coeffs[1..].iter().all(Zero::is_zero) {
            return a.coeffs[0].sign_ordering();
        }
        if let Some(s) = self.fast_sign(&a.coeffs) {
            return s;
        }
        let mut r = self.root.clone();
        let mut gcd_checked = false;
        loop {
            let (low, high) = self.eval_bounds(&a.coeffs, &r);
            if low.is_positive() {
                return Ordering::Greater;
            }
            if high.is_negative() {
                return Ordering::Less;
            }
            if r.is_exact() {
                return Ordering::Equal;
            }
            if !gcd_checked {
                gcd_checked = true;
                if self.vanishes_via_gcd(&a.coeffs, &r) {
                    return Ordering::Equal;
                }
            }
            r = self.bisect(&r);
        }
    }

    /// Rational enclosure of the element with width below `2^-bits`.
    pub fn enclose(&self, a: &Elem, bits: u32) -> (BigRational, BigRational) {
        let mut r = self.root.clone();
        loop {
            let (low, high) = self.eval_bounds(&a.coeffs, &r);
            let scale = BigInt::one() << (r.shift as usize * (self.degree() - 1));
            let den = &scale * &a.den;
            let lo = BigRational::new(low, den.clone());
            let hi = BigRational::new(high, den);
            let width = &hi - &lo;
            if r.is_exact() || width * BigRational::from_integer(BigInt::one() << bits) < BigRational::one() {
                return (lo, hi);
            }
            r = self.bisect(&r);
        }
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// `Σ coeffs[i] β^i / den`, kept in lowest terms with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elem {
    pub coeffs: Vec<BigInt>,
    pub den: BigInt,
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn normalized(mut self) -> Elem {
        if self.is_zero() {
            self.den = BigInt::one();
            return self;
        }
        if self.den.is_negative() {
            self.den = -self.den;
            for c in &mut self.coeffs {
                *c = -&*c;
            }
        }
        if !self.den.is_one() {
            let g = self
                .coeffs
                .iter()
                .fold(self.den.clone(), |acc, c| acc.gcd(c));
            if !g.is_one() {
                self.den /= &g;
                for c in &mut self.coeffs {
                    *c /= &g;
                }
            }
        }
        self
    }
}
