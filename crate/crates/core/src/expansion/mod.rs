//! Digits of β-expansions: the β-transformation, greedy and lazy
//! expansions, the quasi-greedy expansion of one, admissibility and word
//! values.

mod word;

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{Beta, FieldValue};

pub use word::{EventuallyPeriodicSeq, Word};

/// Which expansion a [`DigitStream`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StreamMode {
    /// Lexicographically largest: digit 1 whenever `βr >= 1`.
    Greedy,
    /// Lexicographically smallest: digit 0 whenever `βr <= 1/(β-1)`.
    Lazy,
}

/// Pull-based digit generator. After `n` digits, the point equals
/// `val(digits) + β^{-n}·remainder` exactly (enclosed, for decimal bases),
/// and the remainder lies in `[0, 1/(β-1)]`.
#[derive(Clone, Debug)]
pub struct DigitStream {
    beta: Beta,
    remainder: FieldValue,
    mode: StreamMode,
    emitted: usize,
}

impl DigitStream {
    pub fn new(x: &FieldValue, mode: StreamMode) -> Result<Self> {
        check_expansion_domain(x)?;
        Ok(DigitStream {
            beta: x.beta().clone(),
            remainder: x.clone(),
            mode,
            emitted: 0,
        })
    }

    pub fn greedy(x: &FieldValue) -> Result<Self> {
        Self::new(x, StreamMode::Greedy)
    }

    pub fn lazy(x: &FieldValue) -> Result<Self> {
        Self::new(x, StreamMode::Lazy)
    }

    pub fn mode(&self) -> StreamMode {
        self.mode
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    /// Scaled tail `r` with `x = val(emitted) + β^{-n} r`.
    pub fn remainder(&self) -> &FieldValue {
        &self.remainder
    }

    /// Upper bound on the value still unaccounted for after `n` digits.
    pub fn error_bound(&self, n: usize) -> FieldValue {
        stream_truncation_bound(n, &self.beta)
    }

    pub fn next_digit(&mut self) -> Result<u8> {
        let t = self.remainder.mul_by_beta();
        let digit = match self.mode {
            StreamMode::Greedy => u8::from(t.cmp_int(1)? != Ordering::Less),
            StreamMode::Lazy => u8::from(self.beta.cmp_with_max(&t)? == Ordering::Greater),
        };
        self.remainder = if digit == 1 { t.add_int(-1) } else { t };
        self.emitted += 1;
        Ok(digit)
    }

    pub fn take_word(&mut self, n: usize) -> Result<Word> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.next_digit()?);
        }
        Ok(Word::from_digits_unchecked(out))
    }
}

impl Iterator for DigitStream {
    type Item = Result<u8>;

    fn next(&mut self) -> Option<Result<u8>> {
        Some(self.next_digit())
    }
}

/// Checks `0 <= x <= 1/(β-1)`.
pub fn check_expansion_domain(x: &FieldValue) -> Result<()> {
    if x.sign_checked()? == Ordering::Less {
        return Err(Error::OutOfDomain("x must be nonnegative".into()));
    }
    if x.beta().cmp_with_max(x)? == Ordering::Greater {
        return Err(Error::OutOfDomain("x exceeds 1/(β-1)".into()));
    }
    Ok(())
}

/// One step of `T_β(x) = βx mod 1` on `[0, 1)`.
pub fn t_beta(x: &FieldValue) -> Result<(u8, FieldValue)> {
    if x.sign_checked()? == Ordering::Less || x.cmp_int(1)? != Ordering::Less {
        return Err(Error::OutOfDomain("T_β needs 0 <= x < 1".into()));
    }
    let t = x.mul_by_beta();
    if t.cmp_int(1)? == Ordering::Less {
        Ok((0, t))
    } else {
        Ok((1, t.add_int(-1)))
    }
}

/// First `n` digits of the greedy expansion of `x ∈ [0, 1/(β-1)]`. For
/// `x >= 1` this emits ones until the remainder drops below one, then
/// continues with `T_β`.
pub fn greedy_expansion(x: &FieldValue, n: usize) -> Result<Word> {
    DigitStream::greedy(x)?.take_word(n)
}

/// First `n` digits of the lazy expansion of `x ∈ [0, 1/(β-1)]`.
pub fn lazy_expansion(x: &FieldValue, n: usize) -> Result<Word> {
    DigitStream::lazy(x)?.take_word(n)
}

/// `val_β(w) = Σ w_k β^{-k}`.
pub fn val_beta(w: &Word, beta: &Beta) -> FieldValue {
    let mut acc = beta.zero();
    for &d in w.digits().iter().rev() {
        if d == 1 {
            acc = acc.add_int(1);
        }
        acc = acc.div_by_beta();
    }
    acc
}

/// Exact value of an eventually periodic sequence:
/// `val(pre) + β^{-|pre|} val(period) / (1 - β^{-|period|})`.
pub fn val_seq(seq: &EventuallyPeriodicSeq, beta: &Beta) -> Result<FieldValue> {
    let p = seq.period().len() as i64;
    let denom = &beta.one() - &beta.pow(-p);
    let cycle = val_beta(seq.period(), beta).try_div(&denom)?;
    let shift = -(seq.preperiod().len() as i64);
    Ok(&val_beta(seq.preperiod(), beta) + &cycle.scale_by_beta_pow(shift))
}

/// `β^{-n}/(β-1)`, the largest possible value of a tail starting after
/// position `n`.
pub fn stream_truncation_bound(n: usize, beta: &Beta) -> FieldValue {
    beta.max_value().scale_by_beta_pow(-(n as i64))
}

/// Outcome of running the greedy algorithm on 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyOfOne {
    /// The expansion terminates; the word ends in 1.
    Finite(Word),
    /// The remainder orbit cycles.
    EventuallyPeriodic(EventuallyPeriodicSeq),
    /// Neither detected within the horizon.
    Unresolved,
}

/// The quasi-greedy expansion `(a_i)` of one.
#[derive(Clone, Debug)]
pub struct QuasiGreedy {
    digits: Word,
    exact: Option<EventuallyPeriodicSeq>,
    greedy_of_one: GreedyOfOne,
}

impl QuasiGreedy {
    /// Runs the greedy algorithm on 1 for up to `horizon` digits. Decimal
    /// bases are recomputed at a precision large enough for the horizon.
    pub(crate) fn compute(beta: &Beta, horizon: usize) -> QuasiGreedy {
        if let Some(bits) = beta.precision_bits() {
            let needed = (horizon as u32).saturating_add(128);
            if bits < needed {
                if let Ok(fine) = beta.provisional_at(needed) {
                    return Self::compute(&fine, horizon);
                }
            }
        }
        let mut digits = Vec::with_capacity(horizon);
        let mut seen: HashMap<FieldValue, usize> = HashMap::new();
        // A decimal literal is a non-integer rational, so the greedy
        // expansion of 1 never terminates; plain enclosures suffice.
        let mut r = beta.one().forget_exact();
        let exact_orbit = beta.is_algebraic();
        for i in 0..horizon {
            if exact_orbit {
                if let Some(&j) = seen.get(&r) {
                    let d = Word::from_digits_unchecked(digits);
                    let seq = EventuallyPeriodicSeq::new(d.prefix(j), d.slice(j..i))
                        .expect("nonempty period");
                    return QuasiGreedy {
                        digits: d,
                        exact: Some(seq.clone()),
                        greedy_of_one: GreedyOfOne::EventuallyPeriodic(seq),
                    };
                }
                seen.insert(r.clone(), i);
            }
            let t = r.mul_by_beta();
            let d = match t.cmp_int(1) {
                Ok(o) => u8::from(o != Ordering::Less),
                Err(_) => break,
            };
            digits.push(d);
            r = if d == 1 { t.add_int(-1) } else { t };
            if r.is_exact_zero() {
                let g = Word::from_digits_unchecked(digits);
                let mut period = g.clone();
                period.pop();
                period.push(0);
                let seq = EventuallyPeriodicSeq::periodic(period).expect("nonempty period");
                return QuasiGreedy {
                    digits: seq.prefix(horizon),
                    exact: Some(seq),
                    greedy_of_one: GreedyOfOne::Finite(g),
                };
            }
        }
        QuasiGreedy {
            digits: Word::from_digits_unchecked(digits),
            exact: None,
            greedy_of_one: GreedyOfOne::Unresolved,
        }
    }

    /// Exact periodic form, when the greedy expansion of 1 was resolved.
    pub fn exact(&self) -> Option<&EventuallyPeriodicSeq> {
        self.exact.as_ref()
    }

    pub fn greedy_of_one(&self) -> &GreedyOfOne {
        &self.greedy_of_one
    }

    /// Number of digits available without the exact form.
    pub fn certified_len(&self) -> usize {
        if self.exact.is_some() {
            usize::MAX
        } else {
            self.digits.len()
        }
    }

    /// The first `n` digits, if known.
    pub fn prefix(&self, n: usize) -> Option<Word> {
        match &self.exact {
            Some(seq) => Some(seq.prefix(n)),
            None => (n <= self.digits.len()).then(|| self.digits.prefix(n)),
        }
    }
}

/// Result of [`quasi_greedy_of_one`].
#[derive(Clone, Debug, Serialize)]
pub struct QuasiGreedyOfOne {
    pub digits: Word,
    /// Exact `pre(period)` form; withheld when the orbit of 1 was not
    /// resolved within the horizon.
    pub exact: Option<EventuallyPeriodicSeq>,
}

/// First `n` digits of `(a_i)`, plus the exact form when detected.
pub fn quasi_greedy_of_one(beta: &Beta, n: usize) -> Result<QuasiGreedyOfOne> {
    let q = quasi_greedy(beta);
    let q = match q.prefix(n) {
        Some(_) => q.clone(),
        None => QuasiGreedy::compute(beta, n),
    };
    let digits = q
        .prefix(n)
        .ok_or(Error::UndeterminedWithinHorizon(q.certified_len()))?;
    Ok(QuasiGreedyOfOne {
        digits,
        exact: q.exact.clone(),
    })
}

/// The cached quasi-greedy expansion of one for `beta`.
pub fn quasi_greedy(beta: &Beta) -> &QuasiGreedy {
    beta.quasi_greedy_cache()
        .expect("quasi-greedy expansion is computed when a base is built")
}

/// `a_1 … a_n`, recomputing past the cached horizon if needed.
pub fn quasi_greedy_prefix(beta: &Beta, n: usize) -> Result<Word> {
    if let Some(p) = quasi_greedy(beta).prefix(n) {
        return Ok(p);
    }
    let q = QuasiGreedy::compute(beta, n);
    q.prefix(n)
        .ok_or(Error::UndeterminedWithinHorizon(q.certified_len()))
}

/// Parry admissibility of a finite word: every shift, padded with `0^∞`, is
/// strictly below `(a_i)`. Since `(a_i)` never ends in `0^∞`, this is
/// `w_{k+1} … w_N <= a_1 … a_{N-k}` for every `k`.
pub fn is_admissible(w: &Word, beta: &Beta) -> Result<bool> {
    let a = quasi_greedy_prefix(beta, w.len())?;
    Ok(admissible_against(w.digits(), a.digits()))
}

/// Admissibility test against a known prefix `a` of `(a_i)` with
/// `a.len() >= w.len()`.
pub(crate) fn admissible_against(w: &[u8], a: &[u8]) -> bool {
    (0..w.len()).all(|k| w[k..] <= a[..w.len() - k])
}

/// Parry admissibility of an eventually periodic sequence: exact when
/// `(a_i)` has a known periodic form, otherwise decided within the cached
/// horizon when possible.
pub fn is_admissible_seq(seq: &EventuallyPeriodicSeq, beta: &Beta) -> Result<bool> {
    let q = quasi_greedy(beta);
    match q.exact() {
        Some(a) => Ok((0..seq.orbit_len()).all(|k| seq.shift(k).lex_cmp(a) == Ordering::Less)),
        None => {
            let horizon = q.certified_len();
            let a = q.prefix(horizon).expect("certified digits");
            for k in 0..seq.orbit_len() {
                let s = seq.shift(k).prefix(horizon);
                match s.cmp(&a) {
                    Ordering::Less => {}
                    Ordering::Greater => return Ok(false),
                    Ordering::Equal => return Err(Error::UndeterminedWithinHorizon(horizon)),
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests;
