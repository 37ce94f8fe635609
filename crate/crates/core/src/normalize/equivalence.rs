use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::expansion::{val_beta, Word};
use crate::numeric::{Beta, FieldValue};

/// Longest word accepted by [`enumerate_equivalent_words`].
pub const DEFAULT_EQUIVALENCE_CAP: usize = 24;

/// All 0-1 words of length `|w|` whose value equals `val_β(w)`, in
/// lexicographic order.
///
/// Depth-first search on the scaled remainder `R_k = β^k (val(w) - val(u_1 … u_k))`.
/// A branch survives only while `0 <= R_k <= val(1^{N-k})`, and a leaf is kept
/// when `R_N` is exactly zero.
pub fn enumerate_equivalent_words(w: &Word, beta: &Beta) -> Result<Vec<Word>> {
    enumerate_equivalent_words_capped(w, beta, DEFAULT_EQUIVALENCE_CAP)
}

pub fn enumerate_equivalent_words_capped(w: &Word, beta: &Beta, cap: usize) -> Result<Vec<Word>> {
    if !beta.is_algebraic() {
        return Err(Error::BackendUnsupported);
    }
    if w.len() > cap {
        return Err(Error::LengthCapExceeded { len: w.len(), cap });
    }
    let n = w.len();
    // ones[j] = val(1^j)
    let mut ones = Vec::with_capacity(n + 1);
    ones.push(beta.zero());
    for j in 1..=n {
        ones.push(val_beta(&Word::ones(j), beta));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    search(&val_beta(w, beta), n, &ones, &mut prefix, &mut out)?;
    Ok(out)
}

fn search(
    r: &FieldValue,
    n: usize,
    ones: &[FieldValue],
    prefix: &mut Vec<u8>,
    out: &mut Vec<Word>,
) -> Result<()> {
    let k = prefix.len();
    if k == n {
        if r.is_exact_zero() {
            out.push(Word::from_digits(prefix.clone()).expect("0-1 digits"));
        }
        return Ok(());
    }
    let scaled = r.mul_by_beta();
    let bound = &ones[n - k - 1];
    for d in 0..=1u8 {
        let next = if d == 1 { scaled.add_int(-1) } else { scaled.clone() };
        if next.sign_checked()? == Ordering::Less || next.cmp_checked(bound)? == Ordering::Greater {
            continue;
        }
        prefix.push(d);
        search(&next, n, ones, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}
