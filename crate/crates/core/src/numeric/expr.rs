//! Point specifications: rationals, word values, expressions in `beta`,
//! and seeded random points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{parse, Beta, FieldValue};
use crate::error::{Error, Result};
use crate::expansion::{val_beta, Word};

/// How a point `x` is described on the command line or in configs.
///
/// * `3/7`, `0.25` — a rational;
/// * `val:0110` — the β-value of a word;
/// * `expr:1/(2*beta)` — a rational expression in `beta`;
/// * `random:42` — a seeded uniform dyadic point of `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XSpec {
    Rational(BigRational),
    Value(Word),
    Expr(String),
    Random(u64),
}

impl FromStr for XSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(w) = s.strip_prefix("val:") {
            Ok(XSpec::Value(w.parse()?))
        } else if let Some(e) = s.strip_prefix("expr:") {
            Ok(XSpec::Expr(e.to_string()))
        } else if let Some(seed) = s.strip_prefix("random:") {
            seed.trim()
                .parse()
                .map(XSpec::Random)
                .map_err(|_| Error::Parse(format!("bad seed {seed:?}")))
        } else {
            parse::parse_rational(s).map(XSpec::Rational)
        }
    }
}

impl fmt::Display for XSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XSpec::Rational(q) => write!(f, "{q}"),
            XSpec::Value(w) => write!(f, "val:{w}"),
            XSpec::Expr(e) => write!(f, "expr:{e}"),
            XSpec::Random(s) => write!(f, "random:{s}"),
        }
    }
}

impl XSpec {
    /// The exact dyadic point behind `random:<seed>`: draws one `u64` `k`
    /// from `ChaCha8Rng::seed_from_u64(seed)` and returns `(2k+1)/2^65`.
    pub fn random_point(seed: u64) -> BigRational {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = BigInt::from(rng.next_u64());
        BigRational::new(k * 2 + 1, BigInt::from(1) << 65)
    }

    pub fn resolve(&self, beta: &Beta) -> Result<FieldValue> {
        match self {
            XSpec::Rational(q) => Ok(beta.from_rational(q)),
            XSpec::Value(w) => Ok(val_beta(w, beta)),
            XSpec::Expr(e) => eval_expr(e, beta),
            XSpec::Random(seed) => Ok(beta.from_rational(&XSpec::random_point(*seed))),
        }
    }
}

/// Evaluates an arithmetic expression over `beta` (alias `b`), decimal
/// literals, `+ - * / ^` and parentheses. Juxtaposition multiplies
/// (`2beta`). Exponents are integers and may be negative.
pub fn eval_expr(text: &str, beta: &Beta) -> Result<FieldValue> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        beta,
    };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input in expression {text:?}")));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Beta,
    Op(char),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse::parse_decimal(&lit)?));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            match name.as_str() {
                "beta" | "b" => out.push(Tok::Beta),
                _ => return Err(Error::Parse(format!("unknown identifier {name:?}"))),
            }
        } else if "+-*/^".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '(' {
            out.push(Tok::Open);
            i += 1;
        } else if c == ')' {
            out.push(Tok::Close);
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in expression")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    beta: &'a Beta,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<FieldValue> {
        let mut v = self.term()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            v = if op == '+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<FieldValue> {
        let mut v = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    v = v * self.unary()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if rhs.is_exact_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    v = v.try_div(&rhs)?;
                }
                Some(Tok::Beta | Tok::Open | Tok::Num(_)) => v = v * self.power()?,
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self) -> Result<FieldValue> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldValue> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let mut neg = false;
        if self.peek() == Some(&Tok::Op('-')) {
            neg = true;
            self.pos += 1;
        }
        let exp = match self.peek().cloned() {
            Some(Tok::Num(q)) if q.is_integer() => {
                self.pos += 1;
                q.to_integer()
            }
            _ => return Err(Error::Parse("exponent must be an integer".into())),
        };
        let exp: u32 = exp
            .try_into()
            .map_err(|_| Error::Parse("exponent too large".into()))?;
        let mut acc = self.beta.one();
        for _ in 0..exp {
            acc = &acc * &base;
        }
        if neg {
            acc = acc.inverse()?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<FieldValue> {
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(self.beta.from_rational(&q))
            }
            Some(Tok::Beta) => {
                self.pos += 1;
                Ok(self.beta.value())
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
