//! Finitely supported elements of the complex group algebra of a free group,
//! with exact Gaussian-rational coefficients.
//!
//! The trace picks out the identity coefficient, so group elements are an
//! orthonormal family for the trace inner product and the conditional
//! expectation onto a subgroup algebra is coefficient filtration.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::scalar::{rat_to_f64, sqrt_bounds, GaussRat};
use crate::stallings::Subgroup;
use crate::words::{Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("{0}")]
    Precondition(String),
}

/// A finitely supported coefficient function on the free group. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    rank: usize,
    terms: BTreeMap<Word, GaussRat>,
}

impl Element {
    pub fn zero(rank: usize) -> Element {
        Element {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(rank: usize) -> Element {
        Element::from_word(Word::identity(rank))
    }

    pub fn from_word(w: Word) -> Element {
        Element::term(GaussRat::one(), w)
    }

    pub fn term(coefficient: GaussRat, w: Word) -> Element {
        let mut e = Element::zero(w.rank());
        e.accumulate(w, &coefficient);
        e
    }

    pub fn from_terms(
        rank: usize,
        terms: impl IntoIterator<Item = (Word, GaussRat)>,
    ) -> Result<Element, AlgebraError> {
        let mut e = Element::zero(rank);
        for (w, c) in terms {
            if w.rank() != rank {
                return Err(AlgebraError::RankMismatch {
                    left: rank,
                    right: w.rank(),
                });
            }
            e.accumulate(w, &c);
        }
        Ok(e)
    }

    fn accumulate(&mut self, w: Word, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &BTreeMap<Word, GaussRat> {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coefficient(&self, w: &Word) -> GaussRat {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest word in the support.
    pub fn radius(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    fn same_rank(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(AlgebraError::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_rank(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.add(&other.scale(&GaussRat::from_int(-1)))
    }

    pub fn scale(&self, c: &GaussRat) -> Element {
        let mut out = Element::zero(self.rank);
        for (w, d) in &self.terms {
            out.accumulate(w.clone(), &(c * d));
        }
        out
    }

    pub fn multiply(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_rank(other)?;
        let mut out = Element::zero(self.rank);
        for (u, c) in &self.terms {
            for (v, d) in &other.terms {
                out.accumulate(u.mul_same_rank(v), &(c * d));
            }
        }
        Ok(out)
    }

    /// `x ↦ x*`: conjugate coefficients, invert words.
    pub fn adjoint(&self) -> Element {
        let mut out = Element::zero(self.rank);
        for (w, c) in &self.terms {
            out.accumulate(w.invert(), &c.conj());
        }
        out
    }

    /// Normalized trace: the identity coefficient.
    pub fn trace(&self) -> GaussRat {
        self.coefficient(&Word::identity(self.rank))
    }

    /// `‖x‖₂² = Σ|c_g|²`, exact.
    pub fn norm2_sq(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c.abs_sq())
    }

    pub fn norm2(&self) -> f64 {
        rat_to_f64(&self.norm2_sq()).sqrt()
    }

    /// Certified bracket on `‖x‖₂`.
    pub fn norm2_bounds(&self) -> (BigRational, BigRational) {
        sqrt_bounds(&self.norm2_sq())
    }

    /// Certified bracket on `Σ|c_g|`, an upper bound for the operator norm.
    pub fn norm1_bounds(&self) -> (BigRational, BigRational) {
        self.terms.values().fold(
            (BigRational::zero(), BigRational::zero()),
            |(lo, hi), c| {
                let (l, h) = c.abs_bounds();
                (lo + l, hi + h)
            },
        )
    }

    /// `Σ|c_g|` when every `|c_g|` is rational.
    pub fn norm1_exact(&self) -> Option<BigRational> {
        let (lo, hi) = self.norm1_bounds();
        (lo == hi).then_some(lo)
    }

    pub fn norm1(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rat_to_f64(&c.abs_sq()).sqrt())
            .sum()
    }

    /// Trace-preserving conditional expectation onto the subgroup algebra:
    /// keeps exactly the terms whose word lies in `subgroup`.
    pub fn expect<S: Subgroup + ?Sized>(&self, subgroup: &S) -> Result<Element, AlgebraError> {
        if subgroup.rank() != self.rank {
            return Err(AlgebraError::RankMismatch {
                left: self.rank,
                right: subgroup.rank(),
            });
        }
        let mut out = Element::zero(self.rank);
        for (w, c) in &self.terms {
            if subgroup.contains(w)? {
                out.accumulate(w.clone(), c);
            }
        }
        Ok(out)
    }

    /// `(I − E)(x)`.
    pub fn expect_complement<S: Subgroup + ?Sized>(&self, subgroup: &S) -> Result<Element, AlgebraError> {
        self.sub(&self.expect(subgroup)?)
    }

    /// `n⁻¹ Σ_{j=1..n} a⁻ʲ x aʲ`.
    pub fn cesaro_average(&self, a: &Word, n: usize) -> Result<Element, AlgebraError> {
        if a.rank() != self.rank {
            return Err(AlgebraError::RankMismatch {
                left: self.rank,
                right: a.rank(),
            });
        }
        if n == 0 {
            return Err(AlgebraError::Precondition("Cesàro average needs n ≥ 1".into()));
        }
        let weight = GaussRat::from_ratio(1, n as i64);
        let mut out = Element::zero(self.rank);
        for j in 1..=n as i64 {
            let left = a.pow(-j);
            let right = a.pow(j);
            for (w, c) in &self.terms {
                let conj = left.mul_same_rank(w).mul_same_rank(&right);
                out.accumulate(conj, &(c * &weight));
            }
        }
        Ok(out)
    }

    /// Parses literals such as `"2*e + 3*a - 1/2*aB + i*bb"`. Within a term
    /// every factor but the last is a scalar (`p`, `p/q` or `i`); the last
    /// factor is a word, or a number standing for a multiple of `e`.
    pub fn parse(text: &str, rank: usize) -> Result<Element, AlgebraError> {
        let mut out = Element::zero(rank);
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut sign = 1i64;
        let mut expect_term = true;
        let mut saw_term = false;
        while pos < bytes.len() {
            let c = bytes[pos] as char;
            if c.is_whitespace() {
                pos += 1;
                continue;
            }
            if c == '+' || c == '-' {
                if !expect_term {
                    expect_term = true;
                    sign = 1;
                }
                if c == '-' {
                    sign = -sign;
                }
                pos += 1;
                continue;
            }
            if !expect_term {
                return Err(AlgebraError::Parse {
                    position: pos,
                    message: "expected '+' or '-' between terms".into(),
                });
            }
            let start = pos;
            while pos < bytes.len() && !matches!(bytes[pos] as char, '+' | '-') {
                pos += 1;
            }
            let (coefficient, word) = parse_term(&text[start..pos], start, rank)?;
            out.accumulate(word, &coefficient.scaled(sign));
            sign = 1;
            expect_term = false;
            saw_term = true;
        }
        if !saw_term || expect_term {
            return Err(AlgebraError::Parse {
                position: text.len(),
                message: "expected a term".into(),
            });
        }
        Ok(out)
    }

    /// `[[word, [[re_num, re_den], [im_num, im_den]]], …]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| json!([w.to_string(), c.to_json()]))
                .collect(),
        )
    }
}

trait Scaled {
    fn scaled(&self, sign: i64) -> Self;
}

impl Scaled for GaussRat {
    fn scaled(&self, sign: i64) -> GaussRat {
        if sign < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

fn parse_rational(text: &str, position: usize) -> Result<BigRational, AlgebraError> {
    let bad = || AlgebraError::Parse {
        position,
        message: format!("invalid number {text:?}"),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(AlgebraError::Parse {
            position,
            message: "zero denominator".into(),
        });
    }
    Ok(BigRational::new(num, den))
}

fn parse_term(text: &str, offset: usize, rank: usize) -> Result<(GaussRat, Word), AlgebraError> {
    let mut coefficient = GaussRat::one();
    let factors: Vec<(usize, &str)> = {
        let mut v = Vec::new();
        let mut start = 0;
        for (i, c) in text.char_indices() {
            if c == '*' {
                v.push((start, &text[start..i]));
                start = i + 1;
            }
        }
        v.push((start, &text[start..]));
        v
    };
    let last = factors.len() - 1;
    for (k, (start, raw)) in factors.iter().enumerate() {
        let factor = raw.trim();
        let position = offset + start + (raw.len() - raw.trim_start().len());
        if factor.is_empty() {
            return Err(AlgebraError::Parse {
                position,
                message: "empty factor".into(),
            });
        }
        let numeric = factor.starts_with(|c: char| c.is_ascii_digit());
        if k == last && !numeric {
            let w = Word::parse(factor, rank).map_err(|e| match e {
                WordError::Parse {
                    position: p,
                    message,
                } => AlgebraError::Parse {
                    position: position + p,
                    message,
                },
                other => AlgebraError::Word(other),
            })?;
            return Ok((coefficient, w));
        }
        let value = if factor == "i" {
            GaussRat::i()
        } else if numeric {
            GaussRat::real(parse_rational(factor, position)?)
        } else {
            return Err(AlgebraError::Parse {
                position,
                message: format!("expected a scalar factor, found {factor:?}"),
            });
        };
        coefficient = &coefficient * &value;
    }
    Ok((coefficient, Word::identity(rank)))
}

fn write_real_term(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    value: &BigRational,
    imaginary: bool,
    word: &Word,
) -> fmt::Result {
    if value.is_zero() {
        return Ok(());
    }
    let negative = value.is_negative();
    match (*first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    *first = false;
    let magnitude = value.abs();
    if !magnitude.is_one() {
        write!(f, "{magnitude}*")?;
    }
    if imaginary {
        f.write_str("i*")?;
    }
    write!(f, "{word}")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            write_real_term(f, &mut first, &c.re, false, w)?;
            write_real_term(f, &mut first, &c.im, true, w)?;
        }
        Ok(())
    }
}

/// A group-element unitary `phase·γ` with `|phase| = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupUnitary {
    phase: GaussRat,
    word: Word,
}

impl GroupUnitary {
    pub fn new(phase: GaussRat, word: Word) -> Result<GroupUnitary, AlgebraError> {
        if !phase.abs_sq().is_one() {
            return Err(AlgebraError::Precondition(format!(
                "phase {phase} does not have modulus one"
            )));
        }
        Ok(GroupUnitary { phase, word })
    }

    pub fn word(w: Word) -> GroupUnitary {
        GroupUnitary {
            phase: GaussRat::one(),
            word: w,
        }
    }

    pub fn phase(&self) -> &GaussRat {
        &self.phase
    }

    pub fn group_element(&self) -> &Word {
        &self.word
    }

    pub fn to_element(&self) -> Element {
        Element::term(self.phase.clone(), self.word.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::stallings::CyclicSubgroup;

    fn el(s: &str) -> Element {
        Element::parse(s, 2).unwrap()
    }

    fn a() -> Word {
        Word::parse("a", 2).unwrap()
    }

    #[test]
    fn telescoping_product() {
        assert_eq!(el("e + a").multiply(&el("e - a")).unwrap(), el("e - aa"));
    }

    #[test]
    fn adjoints() {
        assert_eq!(el("2*ab").adjoint(), el("2*BA"));
        assert_eq!(el("i*a").adjoint(), el("-i*A"));
        let x = el("1/2*ab - 3*i*b + 7");
        assert_eq!(x.adjoint().adjoint(), x);
    }

    #[test]
    fn traces_and_norms() {
        assert_eq!(el("3*e + 2*a").trace(), GaussRat::from_int(3));
        assert!(el("a").trace().is_zero());
        let x = el("e + a");
        assert_eq!(x.adjoint().multiply(&x).unwrap().trace(), GaussRat::from_int(2));
        assert_eq!(el("e + a + b").norm2_sq(), rat(3, 1));
        assert_eq!(el("b").norm2_sq(), rat(1, 1));
        let half = el("1/2*e + 1/2*a");
        assert_eq!(half.norm2_sq(), rat(1, 2));
        assert_eq!(half.norm1_exact(), Some(rat(1, 1)));
        // |3/5 + 4/5 i| = 1 exactly
        assert_eq!(el("3/5*a + 4/5*i*a").norm1_exact(), Some(rat(1, 1)));
        assert_eq!(el("a + i*a").norm1_exact(), None);
    }

    #[test]
    fn expectation_filters() {
        let h = CyclicSubgroup::new(a());
        assert_eq!(el("2*e + 3*a + 5*b").expect(&h).unwrap(), el("2*e + 3*a"));
        assert!(el("aba").expect(&h).unwrap().is_zero());
    }

    #[test]
    fn cesaro() {
        let b = el("b");
        let avg = b.cesaro_average(&a(), 4).unwrap();
        assert_eq!(avg.norm2_sq(), rat(1, 4));
        assert_eq!(el("aa").cesaro_average(&a(), 10).unwrap(), el("aa"));
        assert_eq!(b.cesaro_average(&a(), 1).unwrap(), el("Aba"));
        assert!(b.cesaro_average(&a(), 0).is_err());
    }

    #[test]
    fn literal_round_trip() {
        let x = el("2*e + 3*a - 1/2*aB + i*bb");
        assert_eq!(x.to_string(), "2*e + 3*a - 1/2*aB + i*bb");
        assert_eq!(el(&x.to_string()), x);
        assert_eq!(el("a - a").to_string(), "0");
        assert_eq!(el("0"), Element::zero(2));
        assert_eq!(el("-a"), el("-1*a"));
        assert_eq!(el("3"), el("3*e"));
    }

    #[test]
    fn literal_errors() {
        match Element::parse("2*a + 3*x", 2) {
            Err(AlgebraError::Parse { position, .. }) => assert_eq!(position, 8),
            other => panic!("{other:?}"),
        }
        assert!(Element::parse("2*a 3", 2).is_err());
        assert!(Element::parse("", 2).is_err());
        assert!(Element::parse("a +", 2).is_err());
        assert!(Element::parse("1/0*a", 2).is_err());
    }

    #[test]
    fn rank_mismatch() {
        let three = Element::parse("c", 3).unwrap();
        assert!(matches!(
            el("a").multiply(&three),
            Err(AlgebraError::RankMismatch { .. })
        ));
    }

    #[test]
    fn unitary_phase_check() {
        assert!(GroupUnitary::new(GaussRat::new(rat(3, 5), rat(4, 5)), a()).is_ok());
        assert!(GroupUnitary::new(GaussRat::from_int(2), a()).is_err());
    }
}
