//! Normalization of 0-1 words, cover words and the splice step that plants
//! an arbitrary word into an expansion, plus the universal-expansion
//! builders on top of it.

mod equivalence;
mod universal;

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{
    admissible_against, is_admissible, quasi_greedy_prefix, val_beta, DigitStream, Word,
};
use crate::numeric::{Beta, FieldValue};

pub use equivalence::{
    enumerate_equivalent_words, enumerate_equivalent_words_capped, DEFAULT_EQUIVALENCE_CAP,
};
pub use universal::{
    finitary_universalize, universal_expansion, universal_expansion_escalating, embeddable,
    SpliceRecord, UniversalParams, UniversalRun, Universalizer, DEFAULT_SCAN_HORIZON,
};

/// Output of [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalized {
    pub word: Word,
    /// The greedy remainder hit exact zero within the output length, so the
    /// output has exactly the value of the input.
    pub finite: bool,
}

/// First `out_len` digits of the greedy expansion of `val_β(w)`, which
/// must not exceed one.
pub fn normalize(w: &Word, beta: &Beta, out_len: usize) -> Result<Normalized> {
    let x = val_beta(w, beta);
    if x.cmp_int(1)? == Ordering::Greater {
        return Err(Error::ValueExceedsOne);
    }
    let mut stream = DigitStream::greedy(&x)?;
    let word = stream.take_word(out_len)?;
    Ok(Normalized {
        word,
        finite: stream.remainder().is_exact_zero(),
    })
}

/// A target word together with the admissible word used to make room for
/// it.
#[derive(Clone, Debug)]
pub struct CoverWord {
    pub w: Word,
    pub v: Word,
    /// `val(v) - val(w)`.
    pub a: FieldValue,
    /// `val(ṽ) - val(w)`, with `ṽ` the largest admissible sequence
    /// starting with `v`.
    pub b: FieldValue,
}

/// Scan limit for the greedy digits of `val(w)` in [`find_cover_word`].
pub const COVER_SEARCH_HORIZON: usize = 10_000;

/// Builds the cover word of `w`: with `ε = greedy(val(w))` and `k = |w|`,
/// take the least `n >= 1` such that `ε_{k+n} = 0` and `ε_1 … ε_{k+n-1} 1`
/// is admissible, and set `v = ε_1 … ε_{k+n-1} 1`.
pub fn find_cover_word(w: &Word, beta: &Beta) -> Result<CoverWord> {
    let vw = val_beta(w, beta);
    if vw.cmp_int(1)? != Ordering::Less {
        return Err(Error::ValueExceedsOne);
    }
    let mut stream = DigitStream::greedy(&vw)?;
    let mut eps = stream.take_word(w.len())?;
    let k = w.len();
    let mut a_prefix = quasi_greedy_prefix(beta, k + 64)?;
    for _ in 0..COVER_SEARCH_HORIZON {
        let d = stream.next_digit()?;
        if d == 0 {
            let mut cand = eps.clone();
            cand.push(1);
            if a_prefix.len() < cand.len() {
                a_prefix = quasi_greedy_prefix(beta, 2 * cand.len())?;
            }
            if admissible_against(cand.digits(), a_prefix.digits()) {
                return cover_from(w, cand, &vw, beta);
            }
        }
        eps.push(d);
    }
    Err(Error::HorizonExhausted(COVER_SEARCH_HORIZON))
}

fn cover_from(w: &Word, v: Word, vw: &FieldValue, beta: &Beta) -> Result<CoverWord> {
    let vv = val_beta(&v, beta);
    let a = &vv - vw;
    let b = &sup_extension_value(&v, beta)? - vw;
    Ok(CoverWord {
        w: w.clone(),
        v,
        a,
        b,
    })
}

/// Length of the longest suffix of `v` that is a prefix of `a`.
fn longest_suffix_in_prefix(v: &[u8], a: &[u8]) -> usize {
    (0..=v.len())
        .rev()
        .find(|&m| v[v.len() - m..] == a[..m])
        .unwrap_or(0)
}

/// `val(ṽ)`: the supremum of the values of admissible sequences starting
/// with the admissible word `v`. With `m` the longest suffix of `v` that is
/// a prefix of `(a_i)`, the supremum continues `v` by `a_{m+1} a_{m+2} …`,
/// whose value is `β^m (1 - val(a_1 … a_m))`. It is not attained.
pub fn sup_extension_value(v: &Word, beta: &Beta) -> Result<FieldValue> {
    let a = quasi_greedy_prefix(beta, v.len())?;
    let m = longest_suffix_in_prefix(v.digits(), a.digits());
    let tail = (&beta.one() - &val_beta(&a.prefix(m), beta)).scale_by_beta_pow(m as i64);
    Ok(&val_beta(v, beta) + &tail.scale_by_beta_pow(-(v.len() as i64)))
}

/// First `out_len` digits of `ṽ`: after `v`, append 1 whenever the word
/// stays admissible, else 0.
pub fn max_admissible_extension(v: &Word, beta: &Beta, out_len: usize) -> Result<Word> {
    if !is_admissible(v, beta)? {
        return Err(Error::NotAdmissible(v.clone()));
    }
    let a = quasi_greedy_prefix(beta, out_len.max(v.len()))?;
    let mut u = v.prefix(out_len);
    while u.len() < out_len {
        u.push(1);
        if !admissible_against(u.digits(), a.digits()) {
            u.pop();
            u.push(0);
        }
    }
    Ok(u)
}

/// One splice: the greedy digits of `x` up to an occurrence of the cover
/// word `v` are kept, `v` is replaced by `w`, and the new remainder `y`
/// absorbs the difference.
#[derive(Clone, Debug)]
pub struct SpliceStep {
    /// Index (0-based) where `v` starts in the greedy expansion of `x`.
    pub position: usize,
    /// The greedy digits before `position`, followed by `w`.
    pub spliced_prefix: Word,
    /// Remainder after the spliced prefix:
    /// `x = val(spliced_prefix) + β^{-|spliced_prefix|} y`.
    pub y: FieldValue,
    pub cover: CoverWord,
}

/// Splices `w` into the greedy expansion of `x ∈ (0, 1)` at the first
/// occurrence of its cover word starting at or after `start`.
///
/// Writing `t = T_β^{j+|v|} x`, the identity
/// `val(v) + β^{-|v|} t = val(w) + β^{-|w|} y` gives
/// `y = β^{|w|} (val(v) - val(w)) + β^{|w|-|v|} t`, so `β^{-|w|} y` lies in
/// `[a(w), b(w))` and `y` in `(0, 1)`.
pub fn anti_normalize_step(
    x: &FieldValue,
    w: &Word,
    start: usize,
    horizon: usize,
) -> Result<SpliceStep> {
    let cover = find_cover_word(w, x.beta())?;
    let stream = DigitStream::greedy(x)?;
    splice_with_cover(stream, cover, start, horizon)
}

pub(crate) fn splice_with_cover(
    mut stream: DigitStream,
    cover: CoverWord,
    start: usize,
    horizon: usize,
) -> Result<SpliceStep> {
    let v = cover.v.digits();
    let mut digits: Vec<u8> = Vec::new();
    let limit = start + horizon;
    while digits.len() < limit {
        digits.push(stream.next_digit()?);
        let n = digits.len();
        if n >= v.len() && n - v.len() >= start && digits[n - v.len()..] == *v {
            let j = n - v.len();
            let t = stream.remainder();
            let wl = cover.w.len() as i64;
            let y = &cover.a.scale_by_beta_pow(wl) + &t.scale_by_beta_pow(wl - v.len() as i64);
            digits.truncate(j);
            let mut prefix = Word::from_digits(digits).expect("0-1 digits");
            prefix.extend_from(&cover.w);
            return Ok(SpliceStep {
                position: j,
                spliced_prefix: prefix,
                y,
                cover,
            });
        }
    }
    Err(Error::OccurrenceNotFound {
        target: cover.w.clone(),
        cover: cover.v.clone(),
        horizon,
    })
}
