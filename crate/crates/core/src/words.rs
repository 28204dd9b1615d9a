//! Reduced words in a free group of finite rank.
//!
//! Words are always stored freely reduced, so equality is structural. The
//! textual form uses a lowercase letter for a generator and the matching
//! uppercase letter for its inverse (`"abA"` is `a·b·a⁻¹`); `"e"` and `""`
//! both denote the identity.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use thiserror::Error;

/// Largest rank that the letter syntax can express.
pub const MAX_RANK: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i32, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank must be between 1 and {MAX_RANK}, got {0}")]
    BadRank(usize),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("operation undefined on the identity word")]
    Identity,
}

/// A signed generator: `+i` is the `i`-th generator, `-i` its inverse (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(signed_index: i32) -> Option<Letter> {
        (signed_index != 0).then_some(Letter(signed_index))
    }

    pub fn generator(index: usize) -> Letter {
        Letter(index as i32)
    }

    pub fn signed_index(self) -> i32 {
        self.0
    }

    /// 1-based generator index.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the alphabet order `a < A < b < B < …`.
    pub fn order_key(self) -> usize {
        2 * (self.index() - 1) + usize::from(self.is_inverse())
    }

    /// Inverse of [`Letter::order_key`].
    pub fn from_order_key(key: usize) -> Letter {
        let index = (key / 2 + 1) as i32;
        if key.is_multiple_of(2) {
            Letter(index)
        } else {
            Letter(-index)
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + (self.index() - 1) as u8) as char
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A freely reduced word in the free group of the given rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

/// Length-lexicographic order with `a < A < b < B < …`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_rank(rank: usize) -> Result<(), WordError> {
    if rank == 0 || rank > MAX_RANK {
        Err(WordError::BadRank(rank))
    } else {
        Ok(())
    }
}

fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if stack.last() == Some(&letter.inverse()) {
        stack.pop();
    } else {
        stack.push(letter);
    }
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The `index`-th generator (1-based).
    pub fn generator(rank: usize, index: usize) -> Result<Word, WordError> {
        check_rank(rank)?;
        if index == 0 || index > rank {
            return Err(WordError::IndexOutOfRange {
                index: index as i32,
                rank,
            });
        }
        Ok(Word {
            rank,
            letters: vec![Letter::generator(index)],
        })
    }

    /// Freely reduces a list of signed generator indices.
    pub fn reduce(raw: &[i32], rank: usize) -> Result<Word, WordError> {
        check_rank(rank)?;
        let mut stack = Vec::with_capacity(raw.len());
        for &signed in raw {
            if signed == 0 || signed.unsigned_abs() as usize > rank {
                return Err(WordError::IndexOutOfRange {
                    index: signed,
                    rank,
                });
            }
            push_reduced(&mut stack, Letter(signed));
        }
        Ok(Word {
            rank,
            letters: stack,
        })
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>, rank: usize) -> Result<Word, WordError> {
        let raw: Vec<i32> = letters.into_iter().map(Letter::signed_index).collect();
        Word::reduce(&raw, rank)
    }

    /// Parses the letter syntax. A lone `e` (or an empty string) is the identity;
    /// inside longer words `e`/`E` is the fifth generator.
    pub fn parse(text: &str, rank: usize) -> Result<Word, WordError> {
        check_rank(rank)?;
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "e" {
            return Ok(Word::identity(rank));
        }
        let offset = text.len() - text.trim_start().len();
        let mut raw = Vec::with_capacity(trimmed.len());
        for (i, c) in trimmed.char_indices() {
            let signed = match c {
                'a'..='z' => (c as u8 - b'a' + 1) as i32,
                'A'..='Z' => -((c as u8 - b'A' + 1) as i32),
                _ => {
                    return Err(WordError::Parse {
                        position: offset + i,
                        message: format!("unexpected character {c:?} in word"),
                    })
                }
            };
            if signed.unsigned_abs() as usize > rank {
                return Err(WordError::Parse {
                    position: offset + i,
                    message: format!("letter {c:?} exceeds rank {rank}"),
                });
            }
            raw.push(signed);
        }
        Word::reduce(&raw, rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// The largest generator index that occurs in the word.
    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    fn same_rank(&self, other: &Word) -> Result<(), WordError> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        self.same_rank(other)?;
        Ok(self.mul_same_rank(other))
    }

    /// Product of words already known to share a rank.
    pub(crate) fn mul_same_rank(&self, other: &Word) -> Word {
        debug_assert_eq!(self.rank, other.rank);
        let mut cancel = 0;
        let (left, right) = (&self.letters, &other.letters);
        while cancel < left.len()
            && cancel < right.len()
            && left[left.len() - 1 - cancel] == right[cancel].inverse()
        {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(left.len() + right.len() - 2 * cancel);
        letters.extend_from_slice(&left[..left.len() - cancel]);
        letters.extend_from_slice(&right[cancel..]);
        Word {
            rank: self.rank,
            letters,
        }
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `x·self·x⁻¹`, reduced.
    pub fn conjugate(&self, x: &Word) -> Result<Word, WordError> {
        self.same_rank(x)?;
        Ok(x.mul_same_rank(self).mul_same_rank(&x.invert()))
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.invert() } else { self.clone() };
        let (core, conj) = base.cyclic_reduce();
        let n = exponent.unsigned_abs() as usize;
        if n == 0 || base.is_identity() {
            return Word::identity(self.rank);
        }
        // core^n is reduced as written because core is cyclically reduced
        let mut letters = Vec::with_capacity(core.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&core.letters);
        }
        let power = Word {
            rank: self.rank,
            letters,
        };
        conj.mul_same_rank(&power).mul_same_rank(&conj.invert())
    }

    /// Splits `self = conjugator·core·conjugator⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut strip = 0;
        while 2 * strip + 1 < n && self.letters[strip] == self.letters[n - 1 - strip].inverse() {
            strip += 1;
        }
        let core = Word {
            rank: self.rank,
            letters: self.letters[strip..n - strip].to_vec(),
        };
        let conjugator = Word {
            rank: self.rank,
            letters: self.letters[..strip].to_vec(),
        };
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Writes `self = root^exponent` with the exponent maximal.
    pub fn root_power(&self) -> Result<(Word, usize), WordError> {
        if self.is_identity() {
            return Err(WordError::Identity);
        }
        let (core, conjugator) = self.cyclic_reduce();
        let len = core.len();
        let period = (1..=len)
            .filter(|d| len % d == 0)
            .find(|&d| (d..len).all(|i| core.letters[i] == core.letters[i - d]))
            .unwrap_or(len);
        let block = Word {
            rank: self.rank,
            letters: core.letters[..period].to_vec(),
        };
        let root = conjugator
            .mul_same_rank(&block)
            .mul_same_rank(&conjugator.invert());
        Ok((root, len / period))
    }

    /// True when the word is not a proper power.
    pub fn is_prime(&self) -> Result<bool, WordError> {
        Ok(self.root_power()?.1 == 1)
    }

    /// Uniformly random reduced word of exactly `len` letters.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let key = rng.random_range(0..2 * rank);
            let letter = Letter::from_order_key(key);
            if letters.last() != Some(&letter.inverse()) {
                letters.push(letter);
            }
        }
        Word { rank, letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for letter in &self.letters {
            write!(f, "{}", letter.to_char())?;
        }
        Ok(())
    }
}

/// All reduced words of length at most `radius`, in length-lexicographic order.
pub fn enumerate_ball(rank: usize, radius: usize) -> Vec<Word> {
    let mut ball = vec![Word::identity(rank)];
    let mut sphere = ball.clone();
    for _ in 0..radius {
        let mut next = Vec::with_capacity(sphere.len() * (2 * rank).max(1));
        for word in &sphere {
            for key in 0..2 * rank {
                let letter = Letter::from_order_key(key);
                if word.last() == Some(letter.inverse()) {
                    continue;
                }
                let mut letters = word.letters.clone();
                letters.push(letter);
                next.push(Word { rank, letters });
            }
        }
        ball.extend(next.iter().cloned());
        sphere = next;
    }
    ball
}

/// Number of reduced words of length exactly `k`.
pub fn sphere_size(rank: usize, k: usize) -> usize {
    if k == 0 {
        1
    } else {
        2 * rank * (2 * rank - 1).pow(k as u32 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn reduce_cancels() {
        assert_eq!(Word::reduce(&[1, -1, 2], 2).unwrap(), w("b"));
        assert_eq!(Word::reduce(&[1, 2, -2], 2).unwrap(), w("a"));
        assert!(Word::reduce(&[], 2).unwrap().is_identity());
        assert_eq!(
            Word::reduce(&[3], 2),
            Err(WordError::IndexOutOfRange { index: 3, rank: 2 })
        );
    }

    #[test]
    fn group_operations() {
        assert!(w("a").multiply(&w("A")).unwrap().is_identity());
        let c = w("a").conjugate(&w("b")).unwrap();
        assert_eq!(c, w("baB"));
        assert_eq!(c.len(), 3);
        assert_eq!(w("ab").invert(), w("BA"));
        assert!(Word::identity(2).conjugate(&w("ab")).unwrap().is_identity());
        let three = Word::parse("c", 3).unwrap();
        assert!(matches!(
            w("a").multiply(&three),
            Err(WordError::RankMismatch { .. })
        ));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("abBA").to_string(), "e");
        assert_eq!(w("").to_string(), "e");
        assert_eq!(w("aB").to_string(), "aB");
        match Word::parse("ab1", 2) {
            Err(WordError::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Word::parse("ac", 2), Err(WordError::Parse { position: 1, .. })));
        // `e` inside a longer word is the fifth generator
        assert_eq!(Word::parse("ae", 5).unwrap().len(), 2);
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w("Aba").cyclic_reduce(), (w("b"), w("A")));
        assert_eq!(w("b").cyclic_reduce(), (w("b"), Word::identity(2)));
        assert_eq!(w("abAB").cyclic_reduce(), (w("abAB"), Word::identity(2)));
    }

    #[test]
    fn roots() {
        assert_eq!(w("aa").root_power().unwrap(), (w("a"), 2));
        assert_eq!(w("abab").root_power().unwrap(), (w("ab"), 2));
        assert_eq!(w("abAB").root_power().unwrap(), (w("abAB"), 1));
        assert_eq!(w("baaB").root_power().unwrap(), (w("baB"), 2));
        assert_eq!(Word::identity(2).root_power(), Err(WordError::Identity));
    }

    #[test]
    fn powers() {
        assert_eq!(w("ab").pow(3), w("ababab"));
        assert_eq!(w("ab").pow(-2), w("BABA"));
        assert_eq!(w("bAB").pow(2), w("bAAB"));
        assert!(w("ab").pow(0).is_identity());
    }

    #[test]
    fn balls() {
        assert_eq!(enumerate_ball(2, 0), vec![Word::identity(2)]);
        let one: Vec<String> = enumerate_ball(2, 1).iter().map(|w| w.to_string()).collect();
        assert_eq!(one, ["e", "a", "A", "b", "B"]);
        assert_eq!(enumerate_ball(2, 2).len(), 17);
    }
}
