//! Factor complexity, block frequencies and random expansions.
//!
//! Random digits come from `ChaCha8Rng::seed_from_u64(seed)`: each `u64`
//! drawn supplies 64 digits, least significant bit first.

use std::collections::{HashMap, HashSet};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::branching::digit_options;
use crate::error::{Error, Result};
use crate::expansion::{check_expansion_domain, stream_truncation_bound, val_beta, Word};
use crate::numeric::{Beta, FieldValue};

/// Distinct factor counts `p(1), …, p(max_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityProfile {
    pub max_n: usize,
    /// `counts[n - 1] = p(n)`.
    pub counts: Vec<u64>,
}

impl ComplexityProfile {
    pub fn p(&self, n: usize) -> u64 {
        self.counts[n - 1]
    }
}

/// Codes of all length-`n` windows, for `n <= 64`.
fn window_codes(d: &[u8], n: usize) -> impl Iterator<Item = u64> + '_ {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut code = 0u64;
    d.iter().enumerate().filter_map(move |(i, &b)| {
        code = ((code << 1) | b as u64) & mask;
        (i + 1 >= n).then_some(code)
    })
}

fn distinct_factors(w: &Word, n: usize) -> u64 {
    if n > w.len() {
        return 0;
    }
    if n <= 64 {
        window_codes(w.digits(), n).collect::<HashSet<_>>().len() as u64
    } else {
        w.digits().windows(n).collect::<HashSet<_>>().len() as u64
    }
}

/// Number of distinct factors of each length up to `max_n`.
pub fn complexity(w: &Word, max_n: usize) -> Result<ComplexityProfile> {
    if max_n > w.len() {
        return Err(Error::OutOfDomain(format!(
            "max_n {max_n} exceeds word length {}",
            w.len()
        )));
    }
    Ok(ComplexityProfile {
        max_n,
        counts: (1..=max_n).map(|n| distinct_factors(w, n)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniversalityCheck {
    pub level: usize,
    pub universal: bool,
    /// Absent factors of length at most `level`, shortest first.
    pub missing: Vec<Word>,
}

/// Whether every word of length at most `level` occurs in `w`.
pub fn is_universal_prefix(w: &Word, level: usize) -> UniversalityCheck {
    let mut missing = Vec::new();
    for n in 1..=level {
        let seen: HashSet<&[u8]> = if n <= w.len() {
            w.digits().windows(n).collect()
        } else {
            HashSet::new()
        };
        missing.extend(Word::all_of_length(n).filter(|u| !seen.contains(u.digits())));
    }
    UniversalityCheck {
        level,
        universal: missing.is_empty(),
        missing,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockRow {
    pub block: Word,
    pub count: u64,
    pub freq: f64,
}

/// Overlapping sliding-window counts of the length-`k` blocks of a word.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockFrequencyTable {
    pub k: usize,
    /// Number of windows, `|w| - k + 1`.
    pub windows: u64,
    /// Every block of length `k` in lexicographic order when `k` is at
    /// most [`FULL_TABLE_MAX_K`]; otherwise only the blocks that occur.
    pub rows: Vec<BlockRow>,
}

pub const FULL_TABLE_MAX_K: usize = 16;

pub fn block_frequencies(w: &Word, k: usize) -> Result<BlockFrequencyTable> {
    if k == 0 || k > w.len() {
        return Err(Error::OutOfDomain(format!(
            "block length {k} must be in 1..={}",
            w.len()
        )));
    }
    let windows = (w.len() - k + 1) as u64;
    let rows = if k <= FULL_TABLE_MAX_K {
        let mut counts = vec![0u64; 1 << k];
        for c in window_codes(w.digits(), k) {
            counts[c as usize] += 1;
        }
        counts
            .into_iter()
            .enumerate()
            .map(|(i, count)| BlockRow {
                block: Word::from_index(k, i as u64),
                count,
                freq: count as f64 / windows as f64,
            })
            .collect()
    } else {
        let mut counts: HashMap<&[u8], u64> = HashMap::new();
        for win in w.digits().windows(k) {
            *counts.entry(win).or_default() += 1;
        }
        let mut rows: Vec<BlockRow> = counts
            .into_iter()
            .map(|(b, count)| BlockRow {
                block: Word::from(b),
                count,
                freq: count as f64 / windows as f64,
            })
            .collect();
        rows.sort_by(|a, b| a.block.cmp(&b.block));
        rows
    };
    Ok(BlockFrequencyTable { k, windows, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalityDeviation {
    /// `max |freq(B) - 2^{-|B|}|` over blocks of length at most `max_k`.
    pub deviation: f64,
    pub block: Word,
}

pub fn normality_deviation(w: &Word, max_k: usize) -> Result<NormalityDeviation> {
    if max_k == 0 || max_k > FULL_TABLE_MAX_K || max_k > w.len() {
        return Err(Error::OutOfDomain(format!(
            "max_k must be in 1..={}",
            FULL_TABLE_MAX_K.min(w.len())
        )));
    }
    let mut best = NormalityDeviation {
        deviation: -1.0,
        block: Word::new(),
    };
    for k in 1..=max_k {
        let target = 0.5f64.powi(k as i32);
        for row in block_frequencies(w, k)?.rows {
            let dev = (row.freq - target).abs();
            if dev > best.deviation {
                best = NormalityDeviation {
                    deviation: dev,
                    block: row.block,
                };
            }
        }
    }
    Ok(best)
}

/// `n` fair digits from the seeded generator.
pub fn fair_coin_word(seed: u64, n: usize) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut digits = Vec::with_capacity(n);
    while digits.len() < n {
        let bits = rng.next_u64();
        let take = (n - digits.len()).min(64);
        digits.extend((0..take).map(|i| ((bits >> i) & 1) as u8));
    }
    Word::from_digits(digits).expect("0-1 digits")
}

/// A fair-coin digit word and the point it expands.
#[derive(Clone, Debug)]
pub struct BernoulliSample {
    pub word: Word,
    /// `val_β(word)`; the point lies in `[value, value + tail_bound]`.
    pub value: FieldValue,
    pub tail_bound: FieldValue,
}

pub fn sample_bernoulli_expansion(beta: &Beta, seed: u64, n: usize) -> BernoulliSample {
    let word = fair_coin_word(seed, n);
    BernoulliSample {
        value: val_beta(&word, beta),
        tail_bound: stream_truncation_bound(n, beta),
        word,
    }
}

/// A uniformly random path through the expansion tree of `x`: a fair coin
/// decides at every branch node.
pub fn random_branch_expansion(x: &FieldValue, seed: u64, n: usize) -> Result<Word> {
    check_expansion_domain(x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = x.clone();
    let mut out = Word::new();
    for _ in 0..n {
        let opts = digit_options(&r)?;
        let d = match opts.forced() {
            Some(d) => d,
            None => u8::from(rng.gen::<bool>()),
        };
        let t = r.mul_by_beta();
        r = if d == 1 { t.add_int(-1) } else { t };
        out.push(d);
    }
    Ok(out)
}
