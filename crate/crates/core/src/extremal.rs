//! Closed-form extremal values, extremal word generators and bound reports.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linking::{self_intersection, Exactness, SurfaceOrder};
use crate::word::{CyclicWord, Family, Letter};

/// Largest length for which the pants formulas are backed by a census.
pub const PANTS_VALIDATED_MAX: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("pants formulas are only validated for lengths 1..={PANTS_VALIDATED_MAX} (got {0}); pass the force flag to extrapolate")]
    UnvalidatedLength(usize),
    #[error("word {0} does not have one of the closed-form shapes")]
    UnknownShape(String),
    #[error("exponents must be positive")]
    ZeroExponent,
    #[error("word {0} is a proper power of a word with two or more letters; only a bound is available")]
    NotPrimitive(CyclicWord),
    #[error("length must be at least 1")]
    ZeroLength,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Surface {
    #[default]
    Torus,
    Pants,
}

impl Surface {
    pub fn order(self) -> SurfaceOrder {
        match self {
            Surface::Torus => SurfaceOrder::TORUS,
            Surface::Pants => SurfaceOrder::PANTS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Surface::Torus => "torus",
            Surface::Pants => "pants",
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Surface {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "torus" => Ok(Surface::Torus),
            "pants" => Ok(Surface::Pants),
            _ => Err(format!("unknown surface {s:?} (expected torus or pants)")),
        }
    }
}

/// Maximal SI of a primitive word of length `l` on the punctured torus.
pub fn torus_max_si(l: usize) -> u64 {
    let l = l as u64;
    if l < 2 {
        0
    } else if l.is_multiple_of(2) {
        (l - 2) * (l - 2) / 4
    } else {
        (l - 1) * (l - 3) / 4
    }
}

/// Maximal SI of a primitive word of length `l` on the pair of pants.
pub fn pants_max_si(l: usize) -> u64 {
    let l = l as u64;
    match l {
        0 => 0,
        2 => 1,
        _ if l % 2 == 1 => (l * l - 1) / 4,
        _ if l.is_multiple_of(4) => l * l / 4 - 1,
        _ => l * l / 4 - 2,
    }
}

/// Maximal SI over all words (primitive or not) of length `l` on the pair of pants.
pub fn pants_nonprimitive_max_si(l: usize) -> u64 {
    let l = l as u64;
    if l % 2 == 1 {
        (l * l - 1) / 4
    } else {
        l * l / 4 + l / 2 - 1
    }
}

/// Minimal SI of a primitive word of length `l` on the pair of pants.
pub fn pants_min_si(l: usize) -> u64 {
    if l <= 2 {
        0
    } else {
        l as u64 / 2
    }
}

pub fn max_si(l: usize, surface: Surface, force: bool) -> Result<u64, ExtremalError> {
    if l == 0 {
        return Err(ExtremalError::ZeroLength);
    }
    match surface {
        Surface::Torus => Ok(torus_max_si(l)),
        Surface::Pants if l > PANTS_VALIDATED_MAX && !force => Err(ExtremalError::UnvalidatedLength(l)),
        Surface::Pants => Ok(pants_max_si(l)),
    }
}

/// `(r, s)` with `r` and `s` from different families, in both role assignments.
fn letter_pairs() -> impl Iterator<Item = (Letter, Letter)> {
    Letter::ALL
        .into_iter()
        .flat_map(|r| Letter::ALL.into_iter().map(move |s| (r, s)))
        .filter(|(r, s)| r.family() != s.family())
}

fn spell(blocks: &[(Letter, usize)]) -> Option<CyclicWord> {
    if blocks.iter().any(|&(_, e)| e == 0) {
        return None;
    }
    let letters = blocks.iter().flat_map(|&(l, e)| std::iter::repeat_n(l, e)).collect();
    CyclicWord::from_letters(letters).ok()
}

fn collect(shapes: impl Iterator<Item = Vec<(Letter, usize)>>) -> Vec<CyclicWord> {
    let set: BTreeSet<CyclicWord> = shapes.filter_map(|b| spell(&b)).filter(CyclicWord::is_primitive).collect();
    set.into_iter().collect()
}

/// Words `r^i s^j r^(p-i) S^(q-j)` over all letter choices and `1 ≤ i < p`, `1 ≤ j < q`.
fn rsrs_family(p: usize, q: usize, inverse_third: bool) -> impl Iterator<Item = Vec<(Letter, usize)>> {
    letter_pairs().flat_map(move |(r, s)| {
        (1..p).flat_map(move |i| {
            (1..q).map(move |j| {
                let third = if inverse_third { r.inverse() } else { r };
                vec![(r, i), (s, j), (third, p - i), (s.inverse(), q - j)]
            })
        })
    })
}

/// The primitive words of length `l` with maximal SI on the punctured torus.
///
/// Empty for `l < 4`, where every primitive word has SI 0.
pub fn maximal_words(l: usize) -> Vec<CyclicWord> {
    if l < 4 {
        return Vec::new();
    }
    let halves = if l.is_multiple_of(2) { vec![(l / 2, l / 2)] } else { vec![(l.div_ceil(2), l / 2), (l / 2, l.div_ceil(2))] };
    collect(halves.into_iter().flat_map(|(p, q)| {
        letter_pairs().map(move |(r, s)| vec![(r, p), (s, q)]).chain(rsrs_family(p, q, false))
    }))
}

pub fn count_maximal(l: usize) -> u64 {
    let l = l as u64;
    if l.is_multiple_of(2) {
        (l - 2) * (l - 2) + 4
    } else {
        2 * (l - 1) * (l - 3) + 8
    }
}

/// The primitive words of length `l ≥ 4` whose SI is one less than the maximum.
pub fn submaximal_words(l: usize) -> Vec<CyclicWord> {
    if l < 4 {
        return Vec::new();
    }
    let mut shapes: Vec<Vec<(Letter, usize)>> = Vec::new();
    if l % 2 == 1 {
        for p in [l / 2, l.div_ceil(2)] {
            shapes.extend(rsrs_family(p, l - p, true));
        }
    } else {
        let n = l / 2;
        shapes.extend(letter_pairs().map(|(r, s)| vec![(r, n - 1), (s, n + 1)]));
        shapes.extend(rsrs_family(n, n, true));
        for p in [n - 1, n + 1] {
            shapes.extend(rsrs_family(p, l - p, false));
        }
    }
    collect(shapes.into_iter())
}

pub fn count_submaximal(l: usize) -> u64 {
    let l = l as u64;
    if l.is_multiple_of(2) {
        5 * (l - 2) * (l - 2) / 2
    } else {
        (l - 1) * (l - 3)
    }
}

/// Number of maximal plus submaximal words, from its own polynomial.
pub fn count_extremal_combined(l: usize) -> u64 {
    let l = l as u64;
    if l % 2 == 1 {
        3 * l * l - 12 * l + 17
    } else {
        7 * l * l / 2 - 14 * l + 18
    }
}

/// The odd-length pants maximizers `r (r s)^((L-1)/2)`.
pub fn pants_odd_maximal_words(l: usize) -> Vec<CyclicWord> {
    use Letter::*;
    if l.is_multiple_of(2) {
        return Vec::new();
    }
    let set: BTreeSet<CyclicWord> = [(A, BInv), (BInv, A), (AInv, B), (B, AInv)]
        .into_iter()
        .map(|(r, s)| {
            let mut letters = vec![r];
            for _ in 0..l / 2 {
                letters.extend([r, s]);
            }
            CyclicWord::from_letters(letters).expect("alternating word is reduced")
        })
        .collect();
    set.into_iter().collect()
}

/// Least length at which a primitive word can have SI at least `k`: `⌈2√k + 2⌉`.
pub fn min_length_for_si(k: u64) -> usize {
    // ⌈2√k⌉ = ⌈√(4k)⌉
    let n = 4 * k;
    let s = n.isqrt();
    let ceil = if s * s == n { s } else { s + 1 };
    (ceil + 2) as usize
}

/// Word shapes with known closed-form self-intersection numbers (exponents ≥ 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    /// `a^i b^j`
    Ab { i: usize, j: usize },
    /// `a^i b^j a^k b^l`
    Abab { i: usize, j: usize, k: usize, l: usize },
    /// `a^i b^j a^k B^l`
    AbaBInv { i: usize, j: usize, k: usize, l: usize },
    /// `a^i b^j A^k B^l`
    AbAB { i: usize, j: usize, k: usize, l: usize },
    /// `a^i b^j a^k b^l a^m B^n`
    AbabaB { i: usize, j: usize, k: usize, l: usize, m: usize, n: usize },
}

/// Pairs of word shapes with closed-form intersection numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PairShape {
    /// `(a^i b^j, a^m B^n)`
    AbWithAB { i: usize, j: usize, m: usize, n: usize },
    /// `(a^i b^j a^k b^l, a^m B^n)`
    AbabWithAB { i: usize, j: usize, k: usize, l: usize, m: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub value: u64,
    pub exactness: Exactness,
}

impl Shape {
    fn exponents(&self) -> Vec<usize> {
        match *self {
            Shape::Ab { i, j } => vec![i, j],
            Shape::Abab { i, j, k, l } | Shape::AbaBInv { i, j, k, l } | Shape::AbAB { i, j, k, l } => vec![i, j, k, l],
            Shape::AbabaB { i, j, k, l, m, n } => vec![i, j, k, l, m, n],
        }
    }

    fn pattern(&self) -> &'static [Letter] {
        use Letter::*;
        match self {
            Shape::Ab { .. } => &[A, B],
            Shape::Abab { .. } => &[A, B, A, B],
            Shape::AbaBInv { .. } => &[A, B, A, BInv],
            Shape::AbAB { .. } => &[A, B, AInv, BInv],
            Shape::AbabaB { .. } => &[A, B, A, B, A, BInv],
        }
    }

    /// The word of this shape.
    pub fn word(&self) -> Result<CyclicWord, ExtremalError> {
        let blocks: Vec<(Letter, usize)> = self.pattern().iter().copied().zip(self.exponents()).collect();
        if blocks.iter().any(|&(_, e)| e == 0) {
            return Err(ExtremalError::ZeroExponent);
        }
        Ok(spell(&blocks).expect("shape words are cyclically reduced"))
    }

    /// Recognizes `w` as one of the shapes, up to rotation and the eight letter
    /// relabelings that preserve the torus ring.
    pub fn recognize(w: &CyclicWord) -> Result<Shape, ExtremalError> {
        let runs = w.block_decomposition().runs();
        let unknown = || ExtremalError::UnknownShape(w.to_string());
        if runs.len() < 2 || ![2, 4, 6].contains(&runs.len()) {
            return Err(unknown());
        }
        let candidates: [fn(&[usize]) -> Shape; 5] = [
            |e| Shape::Ab { i: e[0], j: e[1] },
            |e| Shape::Abab { i: e[0], j: e[1], k: e[2], l: e[3] },
            |e| Shape::AbaBInv { i: e[0], j: e[1], k: e[2], l: e[3] },
            |e| Shape::AbAB { i: e[0], j: e[1], k: e[2], l: e[3] },
            |e| Shape::AbabaB { i: e[0], j: e[1], k: e[2], l: e[3], m: e[4], n: e[5] },
        ];
        for make in candidates {
            let pattern = make(&[1; 6]).pattern();
            if pattern.len() != runs.len() {
                continue;
            }
            for map in torus_symmetries() {
                for rot in 0..runs.len() {
                    let matches = (0..runs.len()).all(|t| map(runs[(rot + t) % runs.len()].0) == pattern[t]);
                    if matches {
                        let exps: Vec<usize> = (0..runs.len()).map(|t| runs[(rot + t) % runs.len()].1).collect();
                        return Ok(make(&exps));
                    }
                }
            }
        }
        Err(unknown())
    }
}

/// The eight letter permutations commuting with inversion and preserving the
/// torus ring up to reflection.
pub fn torus_symmetries() -> Vec<impl Fn(Letter) -> Letter + Copy> {
    let mut out = Vec::with_capacity(8);
    for image_a in Letter::ALL {
        for image_b in Letter::ALL.into_iter().filter(|l| l.family() != image_a.family()) {
            out.push(move |l: Letter| {
                let base = if l.family() == Family::A { image_a } else { image_b };
                if l.code() >= 2 {
                    base.inverse()
                } else {
                    base
                }
            });
        }
    }
    out
}

/// Closed-form SI for a shape. The square `(a^i b^j)^2` only has an upper bound,
/// which is exact (= 1) when `i = 1` or `j = 1`.
pub fn closed_form_si(shape: &Shape) -> Result<ClosedForm, ExtremalError> {
    if shape.exponents().contains(&0) {
        return Err(ExtremalError::ZeroExponent);
    }
    let exact = |value: i64| ClosedForm { value: value as u64, exactness: Exactness::Exact };
    let c = |x: usize| x as i64;
    Ok(match *shape {
        Shape::Ab { i, j } => exact((c(i) - 1) * (c(j) - 1)),
        Shape::Abab { i, j, k, l } if i == k && j == l => {
            if i == 1 || j == 1 {
                exact(1)
            } else {
                ClosedForm { value: ((c(i + k) - 2) * (c(j + l) - 2) + 1) as u64, exactness: Exactness::Bound }
            }
        }
        Shape::Abab { i, j, k, l } => {
            exact((c(i + k) - 2) * (c(j + l) - 2) + (c(i) - c(k)).abs() + (c(j) - c(l)).abs() - 1)
        }
        Shape::AbaBInv { i, j, k, l } => exact((c(i + k) - 1) * (c(j + l) - 1)),
        Shape::AbAB { i, j, k, l } => exact((c(i + k) - 1) * (c(j + l) - 1) - 1),
        Shape::AbabaB { i, j, k, l, m, n } => {
            exact((c(i + k + m) - 1) * (c(j + l + n) - 1) - 2 * (c(k) + c(j.min(l)) - 1))
        }
    })
}

impl PairShape {
    pub fn words(&self) -> Result<(CyclicWord, CyclicWord), ExtremalError> {
        let (first, m, n) = match *self {
            PairShape::AbWithAB { i, j, m, n } => (Shape::Ab { i, j }, m, n),
            PairShape::AbabWithAB { i, j, k, l, m, n } => (Shape::Abab { i, j, k, l }, m, n),
        };
        let second = spell(&[(Letter::A, m), (Letter::BInv, n)]).ok_or(ExtremalError::ZeroExponent)?;
        Ok((first.word()?, second))
    }
}

/// Closed-form intersection number for a pair shape.
pub fn closed_form_in(shape: &PairShape) -> Result<u64, ExtremalError> {
    shape.words()?;
    Ok(match *shape {
        PairShape::AbWithAB { i, j, m, n } => (i * n + m * j) as u64,
        PairShape::AbabWithAB { i, j, k, l, m, n } => ((i + k) * n + m * (j + l)) as u64,
    })
}

/// Exact SI of a two-letter square `⟨(r^i s^j)^2⟩` when `i = 1` or `j = 1` (it is 1).
pub fn exact_square_si(w: &CyclicWord) -> Option<u64> {
    match Shape::recognize(w) {
        Ok(Shape::Abab { i, j, k, l }) if i == k && j == l && (i == 1 || j == 1) => Some(1),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// `(α-1)(β-1)`
    General,
    /// `(α-1)(β-1) - h + 2`, for `h ≥ 2`
    Blockpair,
    /// the maximal SI for the length
    Length,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub word: CyclicWord,
    pub si: u64,
    pub bound: i64,
    /// `bound - si`; negative only for short pure powers.
    pub slack: i64,
    pub bound_kind: BoundKind,
    /// Set for pure powers, whose SI is not governed by the length bound.
    pub pure_power_exception: bool,
}

/// Exact torus SI of `w` together with the tightest applicable upper bound.
pub fn bound_report(w: &CyclicWord) -> Result<BoundReport, ExtremalError> {
    let si = self_intersection(w, &SurfaceOrder::TORUS);
    let Some(si) = si.exact_value() else {
        return Err(ExtremalError::NotPrimitive(w.clone()));
    };
    let length_bound = torus_max_si(w.len()) as i64;
    let (bound, bound_kind) = if w.is_pure_power() && w.len() > 1 {
        (length_bound, BoundKind::Length)
    } else {
        let general = (w.alpha() as i64 - 1) * (w.beta() as i64 - 1);
        let h = w.block_pairs() as i64;
        // candidates in order of preference on ties
        let mut candidates = Vec::new();
        if h >= 2 {
            candidates.push((general - h + 2, BoundKind::Blockpair));
        }
        if h >= 1 {
            candidates.push((general, BoundKind::General));
        }
        candidates.push((length_bound, BoundKind::Length));
        candidates.into_iter().min_by_key(|&(b, _)| b).expect("length bound always applies")
    };
    Ok(BoundReport {
        word: w.clone(),
        si,
        bound,
        slack: bound - si as i64,
        bound_kind,
        pure_power_exception: w.is_pure_power() && w.len() > 1,
    })
}
