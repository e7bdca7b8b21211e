//! Letters, cyclic words and multi-words over the rank-two free group.
//!
//! A [`CyclicWord`] is always stored in canonical form: cyclically reduced and
//! rotated to its lexicographically least spelling under `a < b < A < B`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word")]
    EmptyWord,
    #[error("illegal character {ch:?} at offset {offset} (expected one of a, b, A, B)")]
    IllegalCharacter { ch: char, offset: usize },
    #[error("word is not cyclically reduced: letters {0} and {1} cancel at offset {2}")]
    NotCyclicallyReduced(Letter, Letter, usize),
}

/// Letter family: `a`/`A` or `b`/`B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
}

/// One of the four symbols `a`, `b`, `A = a⁻¹`, `B = b⁻¹`.
///
/// The discriminants give the fixed total order `a < b < A < B` used for
/// canonical spellings; inversion flips bit 1 and the family is bit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Letter {
    #[serde(rename = "a")]
    A = 0,
    #[serde(rename = "b")]
    B = 1,
    #[serde(rename = "A")]
    AInv = 2,
    #[serde(rename = "B")]
    BInv = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::AInv, Letter::BInv];

    #[inline]
    pub const fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub const fn from_code(code: u8) -> Letter {
        match code & 3 {
            0 => Letter::A,
            1 => Letter::B,
            2 => Letter::AInv,
            _ => Letter::BInv,
        }
    }

    #[inline]
    pub const fn inverse(self) -> Letter {
        Letter::from_code(self.code() ^ 2)
    }

    #[inline]
    pub const fn family(self) -> Family {
        if self.code() & 1 == 0 {
            Family::A
        } else {
            Family::B
        }
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        match ch {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            'A' => Some(Letter::AInv),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }

    pub const fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::AInv => 'A',
            Letter::BInv => 'B',
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

fn parse_letters(text: &str) -> Result<Vec<Letter>, WordError> {
    if text.is_empty() {
        return Err(WordError::EmptyWord);
    }
    text.chars()
        .enumerate()
        .map(|(offset, ch)| Letter::from_char(ch).ok_or(WordError::IllegalCharacter { ch, offset }))
        .collect()
}

fn render(letters: &[Letter]) -> String {
    letters.iter().map(|l| l.to_char()).collect()
}

/// Start index of the lexicographically least rotation (Booth's algorithm).
///
/// For periodic input the smallest such index is returned.
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n < 2 {
        return 0;
    }
    let at = |i: isize| &s[i as usize % n];
    let mut fail = vec![-1isize; 2 * n];
    let mut k: isize = 0;
    for j in 1..(2 * n) as isize {
        let sj = at(j);
        let mut i = fail[(j - k - 1) as usize];
        while i != -1 && sj != at(k + i + 1) {
            if sj < at(k + i + 1) {
                k = j - i - 1;
            }
            i = fail[i as usize];
        }
        if sj != at(k + i + 1) {
            if sj < at(k) {
                k = j;
            }
            fail[(j - k) as usize] = -1;
        } else {
            fail[(j - k) as usize] = i + 1;
        }
    }
    k as usize % n
}

/// Position of the first adjacent cancelling pair, reading cyclically.
fn first_cyclic_cancellation(letters: &[Letter]) -> Option<usize> {
    let n = letters.len();
    (0..n).find(|&i| letters[(i + 1) % n] == letters[i].inverse())
}

/// A reduced linear word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearWord {
    letters: Vec<Letter>,
}

impl LinearWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::EmptyWord);
        }
        if let Some(i) = letters.windows(2).position(|p| p[1] == p[0].inverse()) {
            return Err(WordError::NotCyclicallyReduced(letters[i], letters[i + 1], i));
        }
        Ok(Self { letters })
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

    pub fn inverse(&self) -> LinearWord {
        LinearWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }
}

impl fmt::Display for LinearWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.letters))
    }
}

/// A cyclically reduced cyclic word, stored as its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    letters: Vec<Letter>,
    alpha: usize,
    beta: usize,
}

impl CyclicWord {
    /// Parses a cyclically reduced spelling over `a, b, A, B`.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        Self::from_letters(parse_letters(text)?)
    }

    /// Canonicalizes an arbitrary rotation of a cyclically reduced word.
    pub fn from_letters(letters: Vec<Letter>) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::EmptyWord);
        }
        if let Some(i) = first_cyclic_cancellation(&letters) {
            let n = letters.len();
            return Err(WordError::NotCyclicallyReduced(letters[i], letters[(i + 1) % n], i));
        }
        Ok(Self::canonicalize(letters))
    }

    /// Freely and cyclically reduces `letters`; returns `None` for the trivial word.
    pub fn reduce(letters: &[Letter]) -> Option<Self> {
        let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
        for &l in letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        let (mut lo, mut hi) = (0usize, stack.len());
        while hi - lo >= 2 && stack[hi - 1] == stack[lo].inverse() {
            lo += 1;
            hi -= 1;
        }
        if lo == hi {
            None
        } else {
            Some(Self::canonicalize(stack[lo..hi].to_vec()))
        }
    }

    fn canonicalize(mut letters: Vec<Letter>) -> Self {
        let k = least_rotation(&letters);
        letters.rotate_left(k);
        Self::from_canonical(letters)
    }

    /// Wraps letters already known to be a canonical cyclically reduced spelling.
    pub(crate) fn from_canonical(letters: Vec<Letter>) -> Self {
        debug_assert!(!letters.is_empty());
        debug_assert!(first_cyclic_cancellation(&letters).is_none());
        debug_assert_eq!(least_rotation(&letters), 0);
        let alpha = letters.iter().filter(|l| l.family() == Family::A).count();
        let beta = letters.len() - alpha;
        Self { letters, alpha, beta }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn at(&self, i: usize) -> Letter {
        self.letters[i % self.letters.len()]
    }

    /// Occurrences of `a` and `A`.
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// Occurrences of `b` and `B`.
    pub fn beta(&self) -> usize {
        self.beta
    }

    /// The letters read cyclically starting at `start`.
    pub fn rotated(&self, start: usize) -> Vec<Letter> {
        let n = self.len();
        (0..n).map(|t| self.letters[(start + t) % n]).collect()
    }

    pub fn inverse(&self) -> CyclicWord {
        Self::canonicalize(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Number of distinct letters used.
    pub fn distinct_letters(&self) -> usize {
        let mut seen = [false; 4];
        for l in &self.letters {
            seen[l.code() as usize] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }

    pub fn is_pure_power(&self) -> bool {
        self.letters.iter().all(|&l| l == self.letters[0])
    }

    pub fn is_primitive(&self) -> bool {
        self.power_decomposition().exponent == 1
    }

    pub fn power_decomposition(&self) -> PowerDecomposition {
        let n = self.len();
        let period = (1..=n)
            .filter(|p| n.is_multiple_of(*p))
            .find(|&p| (p..n).all(|i| self.letters[i] == self.letters[i - p]))
            .unwrap_or(n);
        let root = if period == n {
            self.clone()
        } else {
            Self::canonicalize(self.letters[..period].to_vec())
        };
        PowerDecomposition { root, exponent: n / period }
    }

    pub fn block_decomposition(&self) -> BlockDecomposition {
        let n = self.len();
        let letters = &self.letters;
        let Some(first) = (0..n).find(|&i| letters[(i + n - 1) % n] != letters[i]) else {
            return BlockDecomposition {
                blocks: vec![Block { letter: letters[0], exponent: n, start: 0 }],
                h: 0,
                alpha: self.alpha,
                beta: self.beta,
            };
        };
        let mut blocks: Vec<Block> = Vec::new();
        for t in 0..n {
            let i = (first + t) % n;
            match blocks.last_mut() {
                Some(b) if b.letter == letters[i] => b.exponent += 1,
                _ => blocks.push(Block { letter: letters[i], exponent: 1, start: i }),
            }
        }
        BlockDecomposition {
            h: blocks.len() / 2,
            blocks,
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    /// Number of block-pairs.
    pub fn block_pairs(&self) -> usize {
        let n = self.len();
        let boundaries = (0..n)
            .filter(|&i| self.letters[i] != self.letters[(i + 1) % n])
            .count();
        boundaries / 2
    }

    /// Applies a letter substitution that commutes with inversion.
    pub fn relabel(&self, map: impl Fn(Letter) -> Letter) -> CyclicWord {
        Self::from_letters(self.letters.iter().map(|&l| map(l)).collect())
            .expect("relabeling by an inversion-compatible map preserves reducedness")
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.letters))
    }
}

impl FromStr for CyclicWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CyclicWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        CyclicWord::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Convenience wrapper for [`CyclicWord::parse`].
pub fn parse_word(text: &str) -> Result<CyclicWord, WordError> {
    CyclicWord::parse(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub letter: Letter,
    pub exponent: usize,
    /// Index of the block's first letter in the canonical spelling.
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Maximal runs, read cyclically from the first run boundary.
    pub blocks: Vec<Block>,
    pub h: usize,
    pub alpha: usize,
    pub beta: usize,
}

impl BlockDecomposition {
    /// `(letter, exponent)` view of the blocks.
    pub fn runs(&self) -> Vec<(Letter, usize)> {
        self.blocks.iter().map(|b| (b.letter, b.exponent)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerDecomposition {
    pub root: CyclicWord,
    pub exponent: usize,
}

/// An ordered list of cyclic words describing a multi-component curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiWord {
    components: Vec<CyclicWord>,
}

impl MultiWord {
    pub fn new(components: Vec<CyclicWord>) -> Self {
        Self { components }
    }

    pub fn single(word: CyclicWord) -> Self {
        Self { components: vec![word] }
    }

    pub fn components(&self) -> &[CyclicWord] {
        &self.components
    }

    pub fn alpha(&self) -> usize {
        self.components.iter().map(|c| c.alpha()).sum()
    }

    pub fn beta(&self) -> usize {
        self.components.iter().map(|c| c.beta()).sum()
    }

    pub fn block_pairs(&self) -> usize {
        self.components.iter().map(|c| c.block_pairs()).sum()
    }
}

impl fmt::Display for MultiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}
