//! Finite 0-1 words and eventually periodic 0-1 sequences.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over `{0, 1}`. Ordered lexicographically, a proper prefix
/// sorting first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d > 1) {
            return Err(Error::Parse(format!("digit {d} is not 0 or 1")));
        }
        Ok(Word(digits))
    }

    pub(crate) fn from_digits_unchecked(digits: Vec<u8>) -> Self {
        debug_assert!(digits.iter().all(|&d| d <= 1));
        Word(digits)
    }

    pub fn zeros(n: usize) -> Self {
        Word(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        Word(vec![1; n])
    }

    /// The `index`-th word of length `len` in lexicographic order, i.e. the
    /// binary digits of `index`.
    pub fn from_index(len: usize, index: u64) -> Self {
        Word(
            (0..len)
                .rev()
                .map(|k| if k < 64 { ((index >> k) & 1) as u8 } else { 0 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.0
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.0.get(i).copied()
    }

    pub fn push(&mut self, d: u8) {
        assert!(d <= 1, "digit out of range");
        self.0.push(d);
    }

    pub fn pop(&mut self) -> Option<u8> {
        self.0.pop()
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn slice(&self, range: Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    /// Digitwise inversion `0 ↔ 1`.
    pub fn complement(&self) -> Word {
        Word(self.0.iter().map(|d| 1 - d).collect())
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&d| d == 1).count()
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Pads with zeros (or truncates) to exactly `len` digits.
    pub fn padded(&self, len: usize) -> Word {
        let mut d = self.0.clone();
        d.resize(len, 0);
        Word(d)
    }

    /// First position `>= from` where `factor` occurs.
    pub fn find_factor(&self, factor: &Word, from: usize) -> Option<usize> {
        if factor.is_empty() {
            return (from <= self.len()).then_some(from);
        }
        if self.len() < factor.len() {
            return None;
        }
        (from..=self.len() - factor.len()).find(|&i| self.0[i..i + factor.len()] == factor.0[..])
    }

    pub fn contains_factor(&self, factor: &Word) -> bool {
        self.find_factor(factor, 0).is_some()
    }

    /// All words of length `1..=max_len` in length-lexicographic order.
    pub fn length_lex(max_len: usize) -> impl Iterator<Item = Word> {
        (1..=max_len).flat_map(|len| (0..1u64 << len).map(move |i| Word::from_index(len, i)))
    }

    /// All `2^len` words of the given length, lexicographically.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        assert!(len < 64, "too many words");
        (0..1u64 << len).map(move |i| Word::from_index(len, i))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            f.write_str(if *d == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("not a 0-1 word: {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl From<&[u8]> for Word {
    /// Panics on digits other than 0 and 1.
    fn from(d: &[u8]) -> Self {
        Word::from_digits(d.to_vec()).expect("0-1 digits")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `preperiod · period^∞`, kept in canonical form: the period is primitive
/// and the preperiod as short as possible.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicSeq {
    pre: Word,
    period: Word,
}

impl EventuallyPeriodicSeq {
    pub fn new(pre: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("period must be nonempty".into()));
        }
        Ok(Self::canonical(pre, period))
    }

    pub fn periodic(period: Word) -> Result<Self> {
        Self::new(Word::new(), period)
    }

    /// A finite word followed by `0^∞`.
    pub fn zero_padded(w: &Word) -> Self {
        Self::canonical(w.clone(), Word::zeros(1))
    }

    fn canonical(mut pre: Word, mut period: Word) -> Self {
        let p = period.len();
        if let Some(d) = (1..=p).find(|d| p % d == 0 && period.0.chunks(*d).all(|c| c == &period.0[..*d])) {
            period.truncate(d);
        }
        while let (Some(a), Some(&b)) = (pre.0.last(), period.0.last()) {
            if *a != b {
                break;
            }
            pre.0.pop();
            period.0.rotate_right(1);
        }
        EventuallyPeriodicSeq { pre, period }
    }

    pub fn preperiod(&self) -> &Word {
        &self.pre
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn digit(&self, i: usize) -> u8 {
        if i < self.pre.len() {
            self.pre.0[i]
        } else {
            self.period.0[(i - self.pre.len()) % self.period.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.digit(i)).collect())
    }

    /// `σ^k`.
    pub fn shift(&self, k: usize) -> Self {
        if k <= self.pre.len() {
            Self::canonical(self.pre.slice(k..self.pre.len()), self.period.clone())
        } else {
            let r = (k - self.pre.len()) % self.period.len();
            let mut period = self.period.clone();
            period.0.rotate_left(r);
            Self::canonical(Word::new(), period)
        }
    }

    /// Number of distinct shifts `σ^k`, `k >= 0`.
    pub fn orbit_len(&self) -> usize {
        self.pre.len() + self.period.len()
    }

    pub fn complement(&self) -> Self {
        Self::canonical(self.pre.complement(), self.period.complement())
    }

    /// True when the sequence ends in `0^∞`.
    pub fn is_finite(&self) -> bool {
        self.period.0 == [0]
    }

    /// Lexicographic comparison of the infinite sequences; exact.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        let n = self.pre.len().max(other.pre.len()) + self.period.len().lcm(&other.period.len());
        (0..n)
            .map(|i| self.digit(i).cmp(&other.digit(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for EventuallyPeriodicSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pre, self.period)
    }
}

impl fmt::Debug for EventuallyPeriodicSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seq(\"{self}\")")
    }
}

impl FromStr for EventuallyPeriodicSeq {
    type Err = Error;

    /// Parses `pre(period)`; a bare word means the word followed by `0^∞`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('(') {
            Some((pre, rest)) => {
                let period = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("missing ')' in {s:?}")))?;
                Self::new(pre.parse()?, period.parse()?)
            }
            None => Ok(Self::zero_padded(&s.parse()?)),
        }
    }
}

impl Serialize for EventuallyPeriodicSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EventuallyPeriodicSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn seq(s: &str) -> EventuallyPeriodicSeq {
        s.parse().unwrap()
    }

    #[test]
    fn word_round_trip_and_order() {
        assert_eq!(w("0110").to_string(), "0110");
        assert!(w("01").lt(&w("010")));
        assert!(w("011") > w("0101"));
        assert!("012".parse::<Word>().is_err());
        assert_eq!(w("").len(), 0);
        assert_eq!(Word::from_index(4, 5), w("0101"));
        let all: Vec<String> = Word::length_lex(2).map(|x| x.to_string()).collect();
        assert_eq!(all, ["0", "1", "00", "01", "10", "11"]);
    }

    #[test]
    fn factors() {
        let x = w("0010110");
        assert_eq!(x.find_factor(&w("1"), 0), Some(2));
        assert_eq!(x.find_factor(&w("1"), 3), Some(4));
        assert_eq!(x.find_factor(&w("111"), 0), None);
        assert!(x.contains_factor(&w("0101")));
        assert!(!x.contains_factor(&w("0111")));
        assert!(x.contains_factor(&w("1011")));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(seq("1010(10)").to_string(), "(10)");
        assert_eq!(seq("(1010)").to_string(), "(10)");
        assert_eq!(seq("0(10)").to_string(), "(01)");
        assert_eq!(seq("11(0)").to_string(), "11(0)");
        assert_eq!(seq("110").to_string(), "11(0)");
        assert_eq!(seq("1(01)").shift(1).to_string(), "(01)");
        assert_eq!(seq("(10)").shift(3).to_string(), "(01)");
        assert!("1()".parse::<EventuallyPeriodicSeq>().is_err());
    }

    #[test]
    fn lexicographic_comparison_is_exact() {
        assert_eq!(seq("(10)").lex_cmp(&seq("10(10)")), Ordering::Equal);
        assert_eq!(seq("(10)").lex_cmp(&seq("(100)")), Ordering::Greater);
        assert_eq!(seq("1(0)").lex_cmp(&seq("0(1)")), Ordering::Greater);
        assert_eq!(seq("(110)").lex_cmp(&seq("(1101)")), Ordering::Less);
    }
}
