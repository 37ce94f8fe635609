use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{quasi_greedy_prefix, Word};
use crate::numeric::Beta;

/// Largest number of significant digits [`komornik_loreti`] accepts.
pub const KL_DIGITS_CAP: usize = 1000;

/// Longest word length [`estimate_unique_dim`] accepts.
pub const DIM_LENGTH_CAP: usize = 1000;

fn tm_digit(k: u64) -> u8 {
    (k.count_ones() % 2) as u8
}

/// The first `n` digits `𝔪_1 𝔪_2 …` of the Thue–Morse sequence, with
/// `𝔪_1 = 0`.
pub fn thue_morse(n: usize) -> Word {
    Word::from_digits((0..n as u64).map(tm_digit).collect()).expect("0-1 digits")
}

/// `w_n = 𝔪_2 … 𝔪_{2^n + 1}`, of length `2^n`.
pub fn tm_word(n: u32) -> Word {
    let len = 1u64 << n;
    Word::from_digits((1..=len).map(tm_digit).collect()).expect("0-1 digits")
}

/// Fixed-point enclosure of `S(q) = Σ_{n>=2} 𝔪_n q^{1-n}` at scale `2^bits`,
/// using `N` terms plus the tail bound `q^{1-N}/(q-1)`.
fn series_bounds(q: &BigRational, terms: usize, bits: u64) -> (BigInt, BigInt) {
    let scale = BigInt::one() << bits;
    let y = q.recip();
    let y_lo = (&y * BigRational::from_integer(scale.clone())).floor().to_integer();
    let y_hi = &y_lo + 1;
    let mut p_lo = scale.clone();
    let mut p_hi = scale.clone();
    let mut s_lo = BigInt::zero();
    let mut s_hi = BigInt::zero();
    for n in 2..=terms as u64 {
        p_lo = (&p_lo * &y_lo) >> bits;
        p_hi = ((&p_hi * &y_hi) >> bits) + 1;
        if tm_digit(n - 1) == 1 {
            s_lo += &p_lo;
            s_hi += &p_hi;
        }
    }
    // Remaining terms are at most Σ_{n>N} y^{n-1} = y^N / (1 - y).
    let tail_num = (&p_hi * &y_hi) >> bits;
    let denom = &scale - &y_hi;
    let tail = (tail_num << bits) / denom + 1;
    (s_lo, s_hi + tail)
}

/// Sign of `F(q) = S(q) - 1`, which is strictly decreasing on `(1, 2)`.
fn kl_sign(q: &BigRational, bits: u64) -> Result<std::cmp::Ordering> {
    let one = BigInt::one() << bits;
    let mut terms = 64usize;
    while terms <= 1 << 20 {
        let (lo, hi) = series_bounds(q, terms, bits);
        if lo > one {
            return Ok(std::cmp::Ordering::Greater);
        }
        if hi < one {
            return Ok(std::cmp::Ordering::Less);
        }
        terms *= 2;
    }
    Err(Error::Undecided)
}

/// Rational bracket `[lo, hi]` of width `2^{-bits}` around the constant `β_*`
/// solving `Σ 𝔪_n β^{1-n} = 1`.
pub fn komornik_loreti_bracket(bits: u32) -> Result<(BigRational, BigRational)> {
    let mut lo = BigRational::new(3.into(), 2.into());
    let mut hi = BigRational::from_integer(2.into());
    let work = bits as u64 + 32;
    let half = BigRational::new(1.into(), 2.into());
    for _ in 0..bits {
        let mid = (&lo + &hi) * &half;
        match kl_sign(&mid, work)? {
            std::cmp::Ordering::Greater => lo = mid,
            _ => hi = mid,
        }
    }
    Ok((lo, hi))
}

/// `β_*` to `digits` significant digits, correctly rounded: the bracket is
/// refined until both ends round to the same decimal.
pub fn komornik_loreti(digits: usize) -> Result<String> {
    if digits == 0 || digits > KL_DIGITS_CAP {
        return Err(Error::PrecisionCapExceeded(KL_DIGITS_CAP));
    }
    let places = digits - 1;
    let mut bits = (digits as f64 * std::f64::consts::LOG2_10) as u32 + 8;
    loop {
        let (lo, hi) = komornik_loreti_bracket(bits)?;
        let (a, b) = (round_places(&lo, places), round_places(&hi, places));
        if a == b {
            return Ok(render(&a, places));
        }
        bits += 16;
        if bits as usize > 8 * KL_DIGITS_CAP {
            return Err(Error::PrecisionCapExceeded(KL_DIGITS_CAP));
        }
    }
}

fn round_places(q: &BigRational, places: usize) -> BigInt {
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    (q * scale).round().to_integer()
}

fn render(m: &BigInt, places: usize) -> String {
    let mut s = m.abs().to_string();
    if places > 0 {
        if s.len() <= places {
            s = format!("{}{}", "0".repeat(places + 1 - s.len()), s);
        }
        s.insert(s.len() - places, '.');
    }
    s
}

/// Growth-rate estimate for the language of unique expansions.
#[derive(Clone, Debug, Serialize)]
pub struct DimEstimate {
    pub n: usize,
    /// Number of words `u` of length `n` with `ā_1… <= u_{k+1}… <= a_1…`
    /// (compared on common length) for every `k`.
    #[serde(serialize_with = "as_decimal_string")]
    pub count: BigUint,
    /// `log(count) / (n log β)`.
    pub estimate: f64,
}

fn as_decimal_string<S: serde::Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// Counts length-`n` words whose every suffix lies between the prefixes of
/// the inverted and plain quasi-greedy expansion of one, and returns
/// `log(count) / (n log β)`. An estimate of the growth rate, not a certified
/// dimension.
pub fn estimate_unique_dim(beta: &Beta, n: usize) -> Result<DimEstimate> {
    if n == 0 || n > DIM_LENGTH_CAP {
        return Err(Error::LengthCapExceeded { len: n, cap: DIM_LENGTH_CAP });
    }
    let a = quasi_greedy_prefix(beta, n).map_err(|_| Error::QuasiGreedyUnavailable)?;
    let a = a.digits();
    // State (i, j): the current suffix matches a_1…a_i (upper constraint
    // tight) and ā_1…ā_j (lower constraint tight). Self-bounding of (a_i)
    // makes a loose digit reset the match to length zero.
    let width = n + 1;
    let mut counts = vec![BigUint::zero(); width * width];
    counts[0] = BigUint::one();
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); width * width];
        for i in 0..n {
            for j in 0..n {
                let c = &counts[i * width + j];
                if c.is_zero() {
                    continue;
                }
                for d in 0..=1u8 {
                    let (hi, lo) = (a[i], 1 - a[j]);
                    if d > hi || d < lo {
                        continue;
                    }
                    let ni = if d == hi { i + 1 } else { 0 };
                    let nj = if d == lo { j + 1 } else { 0 };
                    next[ni * width + nj] += c;
                }
            }
        }
        counts = next;
    }
    let count: BigUint = counts.into_iter().sum();
    let estimate = count.to_f64().unwrap_or(f64::INFINITY).ln() / (n as f64 * beta.to_f64().ln());
    Ok(DimEstimate { n, count, estimate })
}
