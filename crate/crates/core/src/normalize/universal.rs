//! Universal expansions: every 0-1 word up to a given length is planted
//! into an expansion of `x`, either by splicing cover words (any base) or
//! by swapping equal-valued words in place (finitary algebraic bases).

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_rational::BigRational;
use serde::Serialize;

use super::{find_cover_word, normalize, splice_with_cover};
use crate::error::{Error, Result};
use crate::expansion::{val_beta, DigitStream, Word};
use crate::numeric::{with_escalation, Beta, FieldValue};

/// Default number of greedy digits scanned per target word.
pub const DEFAULT_SCAN_HORIZON: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct UniversalParams {
    /// Every word of length `1..=max_word_len` is a target.
    pub max_word_len: usize,
    /// Digit budget for the emitted prefix.
    pub max_digits: usize,
    /// Greedy digits scanned per target before giving up.
    pub horizon: usize,
    /// How many times the full target list is queued. Values above one
    /// re-embed every word periodically.
    pub rounds: usize,
}

impl UniversalParams {
    pub fn new(max_word_len: usize, max_digits: usize) -> Self {
        UniversalParams {
            max_word_len,
            max_digits,
            horizon: DEFAULT_SCAN_HORIZON,
            rounds: 1,
        }
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds;
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    fn targets(&self) -> VecDeque<Word> {
        (0..self.rounds.max(1))
            .flat_map(|_| Word::length_lex(self.max_word_len))
            .collect()
    }
}

/// Progress record for one target word.
#[derive(Clone, Debug, Serialize)]
pub struct SpliceRecord {
    pub target_word: Word,
    /// The word actually planted: the target, left-padded with zeros when
    /// its value is not below one.
    pub embedded_word: Word,
    /// The admissible word that was located and replaced.
    pub cover_word: Word,
    pub splice_position: usize,
    pub prefix_length_after: usize,
    /// Decimal bounds on the remainder after the spliced prefix.
    pub y_interval: (String, String),
}

/// Result of a universal-expansion run.
#[derive(Clone, Debug, Serialize)]
pub struct UniversalRun {
    pub output: Word,
    pub report: Vec<SpliceRecord>,
    pub complete: bool,
    pub targets_total: usize,
    /// Working precision of the final attempt (decimal bases).
    pub precision_bits: Option<u32>,
    /// `x = val(output) + β^{-|output|} · remainder`.
    #[serde(skip)]
    pub remainder: Option<FieldValue>,
}

/// Shortest `0^s w` whose value is below one.
pub fn embeddable(w: &Word, beta: &Beta) -> Result<Word> {
    let mut value = val_beta(w, beta);
    let mut s = 0;
    while value.cmp_int(1)? != Ordering::Less {
        value = value.div_by_beta();
        s += 1;
    }
    Ok(Word::zeros(s).concat(w))
}

fn y_interval(y: &FieldValue) -> (String, String) {
    let (lo, hi) = y.bounds(96);
    (render_floor(&lo, 24), render_ceil(&hi, 24))
}

fn render_floor(q: &BigRational, digits: usize) -> String {
    let scale = BigRational::from_integer(num_traits::pow(10.into(), digits));
    let m = (q * &scale).floor().to_integer();
    place_point(m, digits)
}

fn render_ceil(q: &BigRational, digits: usize) -> String {
    let scale = BigRational::from_integer(num_traits::pow(10.into(), digits));
    let m = (q * &scale).ceil().to_integer();
    place_point(m, digits)
}

fn place_point(m: num_bigint::BigInt, digits: usize) -> String {
    use num_traits::Signed;
    let neg = m.is_negative();
    let mut s = m.abs().to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    s.insert(s.len() - digits, '.');
    if neg {
        s.insert(0, '-');
    }
    s
}

/// Single-owner state of the splicing construction.
#[derive(Clone, Debug)]
pub struct Universalizer {
    params: UniversalParams,
    targets: VecDeque<Word>,
    targets_total: usize,
    prefix: Word,
    remainder: FieldValue,
    report: Vec<SpliceRecord>,
}

impl Universalizer {
    /// Starts from `x ∈ (0, 1)`.
    pub fn new(x: &FieldValue, params: UniversalParams) -> Result<Self> {
        if x.sign_checked()? != Ordering::Greater || x.cmp_int(1)? != Ordering::Less {
            return Err(Error::OutOfDomain("universal expansion needs 0 < x < 1".into()));
        }
        if params.max_word_len == 0 || params.max_digits == 0 {
            return Err(Error::OutOfDomain("word length and digit budget must be positive".into()));
        }
        let targets = params.targets();
        Ok(Universalizer {
            targets_total: targets.len(),
            targets,
            params,
            prefix: Word::new(),
            remainder: x.clone(),
            report: Vec::new(),
        })
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn remainder(&self) -> &FieldValue {
        &self.remainder
    }

    pub fn targets_remaining(&self) -> usize {
        self.targets.len()
    }

    /// Embeds the next target. Returns `Ok(None)` once all are done.
    pub fn step(&mut self) -> Result<Option<&SpliceRecord>> {
        let Some(target) = self.targets.front().cloned() else {
            return Ok(None);
        };
        let beta = self.remainder.beta().clone();
        let embedded = embeddable(&target, &beta)?;
        let cover = find_cover_word(&embedded, &beta)?;
        let stream = DigitStream::greedy(&self.remainder)?;
        let step = splice_with_cover(stream, cover, 0, self.params.horizon)?;
        let after = self.prefix.len() + step.spliced_prefix.len();
        if after > self.params.max_digits {
            return Err(Error::BudgetExhausted {
                partial: Box::new(self.snapshot(false)),
            });
        }
        self.targets.pop_front();
        let position = self.prefix.len() + step.position;
        self.prefix.extend_from(&step.spliced_prefix);
        self.report.push(SpliceRecord {
            target_word: target,
            embedded_word: embedded,
            cover_word: step.cover.v.clone(),
            splice_position: position,
            prefix_length_after: after,
            y_interval: y_interval(&step.y),
        });
        self.remainder = step.y;
        Ok(self.report.last())
    }

    fn snapshot(&self, complete: bool) -> UniversalRun {
        UniversalRun {
            output: self.prefix.clone(),
            report: self.report.clone(),
            complete,
            targets_total: self.targets_total,
            precision_bits: self.remainder.beta().precision_bits(),
            remainder: Some(self.remainder.clone()),
        }
    }

    pub fn run(mut self) -> Result<UniversalRun> {
        while self.step()?.is_some() {}
        Ok(self.snapshot(true))
    }
}

/// Builds a prefix of a β-expansion of `x ∈ (0, 1)` containing every word
/// of length at most `max_word_len`, splicing targets in length-lexicographic
/// order. Runs at the working precision of `x`'s base.
pub fn universal_expansion(x: &FieldValue, params: &UniversalParams) -> Result<UniversalRun> {
    Universalizer::new(x, params.clone())?.run()
}

/// [`universal_expansion`] with precision escalation for decimal bases:
/// when a digit cannot be decided, the run restarts with doubled working
/// precision (up to the base's cap). Requires `x` to be known exactly.
pub fn universal_expansion_escalating(
    x: &FieldValue,
    params: &UniversalParams,
) -> Result<UniversalRun> {
    with_escalation(x.beta(), |beta| {
        let x = x.transfer_to(beta).ok_or(Error::Undecided)?;
        universal_expansion(&x, params)
    })
}

/// Length of the extra zero padding tried when looking for a finite normal
/// form of a target word.
const FINITARY_PAD_CAP: usize = 16;

/// A target word `u` (possibly padded with zeros) and its finite normal
/// form of the same length.
fn finitary_pair(w: &Word, beta: &Beta) -> Result<(Word, Word)> {
    let base = embeddable(w, beta)?;
    for pad in 0..=FINITARY_PAD_CAP {
        let u = base.concat(&Word::zeros(pad));
        let n = normalize(&u, beta, u.len())?;
        if n.finite {
            return Ok((u, n.word));
        }
    }
    Err(Error::NotFinitary(w.clone()))
}

/// Universal expansion by in-place substitution: the greedy expansion of
/// `x` is scanned left to right, and at the next occurrence of the normal
/// form of each target the target itself is written instead. Values are
/// preserved exactly. Occurrences are separated by at least the longest
/// substituted word. Algebraic bases only.
pub fn finitary_universalize(x: &FieldValue, params: &UniversalParams) -> Result<UniversalRun> {
    let beta = x.beta().clone();
    if !beta.is_algebraic() {
        return Err(Error::BackendUnsupported);
    }
    if x.sign_checked()? != Ordering::Greater || x.cmp_int(1)? != Ordering::Less {
        return Err(Error::OutOfDomain("universal expansion needs 0 < x < 1".into()));
    }
    let targets = params.targets();
    let pairs = targets
        .iter()
        .map(|w| finitary_pair(w, &beta))
        .collect::<Result<Vec<_>>>()?;
    let margin = pairs.iter().map(|(u, _)| u.len()).max().unwrap_or(0);

    let mut stream = DigitStream::greedy(x)?;
    let mut greedy: Vec<u8> = Vec::new();
    let mut output: Vec<u8> = Vec::new();
    let mut report = Vec::new();
    let mut next_start = 0usize;
    let snapshot = |output: &[u8], report: &Vec<SpliceRecord>, complete: bool| {
        let out = Word::from_digits(output.to_vec()).expect("0-1 digits");
        let rem = (x - &val_beta(&out, &beta)).scale_by_beta_pow(out.len() as i64);
        UniversalRun {
            output: out,
            report: report.clone(),
            complete,
            targets_total: targets.len(),
            precision_bits: None,
            remainder: Some(rem),
        }
    };
    for (target, (u, nu)) in targets.iter().zip(&pairs) {
        let found = loop {
            let n = greedy.len();
            if n >= nu.len() && n - nu.len() >= next_start && greedy[n - nu.len()..] == *nu.digits() {
                break n - nu.len();
            }
            if n >= params.max_digits {
                return Err(Error::BudgetExhausted {
                    partial: Box::new(snapshot(&output, &report, false)),
                });
            }
            greedy.push(stream.next_digit()?);
        };
        output.extend_from_slice(&greedy[output.len()..found]);
        output.extend_from_slice(u.digits());
        next_start = found + u.len() + margin;
        let done = Word::from_digits(output.clone()).expect("0-1 digits");
        let rem = (x - &val_beta(&done, &beta)).scale_by_beta_pow(done.len() as i64);
        report.push(SpliceRecord {
            target_word: target.clone(),
            embedded_word: u.clone(),
            cover_word: nu.clone(),
            splice_position: found,
            prefix_length_after: output.len(),
            y_interval: y_interval(&rem),
        });
    }
    Ok(snapshot(&output, &report, true))
}
