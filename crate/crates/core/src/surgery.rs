//! Cross-corner surgery on cyclic words and the reduction to at most two block-pairs.
//!
//! A site `p` of a word is the adjacent pair `(w[p], w[p+1])`, read cyclically.
//! Equal letters form a transversal; letters from different families form a
//! corner. Two corners `(p, q)` and `(q, p)` are opposite with the same
//! orientation, `(p, q)` and `(P, Q)` with reversed orientation. Surgery cuts the
//! word at both corners and reassembles it so that both become transversals.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Block, CyclicWord, Family, Letter, MultiWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("the corners have the wrong relative orientation for this surgery")]
    WrongOrientation,
    #[error("splitting at a single site would leave an empty component")]
    DegenerateSplit,
    #[error("sites {0} and {1} are not opposite corners")]
    NotOppositeCorners(usize, usize),
    #[error("site {0} is out of range or not a corner")]
    InvalidSite(usize),
    #[error("merging needs exactly two components (got {0})")]
    ComponentCount(usize),
    #[error("word {0} is a pure power and has no block-pairs")]
    PurePower(CyclicWord),
    #[error("no reduction rule applies to {0}")]
    NoApplicableRule(CyclicWord),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteKind {
    Transversal,
    Corner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CornerSite {
    pub position: usize,
    pub kind: SiteKind,
    pub letters: (Letter, Letter),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Same,
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OppositeCornerPair {
    pub site1: CornerSite,
    pub site2: CornerSite,
    pub orientation: Orientation,
}

pub fn site(letters: &[Letter], position: usize) -> CornerSite {
    let n = letters.len();
    let pair = (letters[position % n], letters[(position + 1) % n]);
    let kind = if pair.0.family() == pair.1.family() { SiteKind::Transversal } else { SiteKind::Corner };
    CornerSite { position: position % n, kind, letters: pair }
}

/// Every site of `w`, one per position.
pub fn sites(w: &CyclicWord) -> Vec<CornerSite> {
    (0..w.len()).map(|p| site(w.letters(), p)).collect()
}

fn opposite(a: (Letter, Letter), b: (Letter, Letter)) -> Option<Orientation> {
    if a.0.family() == a.1.family() {
        None
    } else if b == (a.1, a.0) {
        Some(Orientation::Same)
    } else if b == (a.0.inverse(), a.1.inverse()) {
        Some(Orientation::Reversed)
    } else {
        None
    }
}

/// The opposite corner pair at sites `i` and `j` of `w`, if they form one.
pub fn opposite_pair(w: &CyclicWord, i: usize, j: usize) -> Result<OppositeCornerPair, SurgeryError> {
    for p in [i, j] {
        if p >= w.len() {
            return Err(SurgeryError::InvalidSite(p));
        }
    }
    let (s1, s2) = (site(w.letters(), i), site(w.letters(), j));
    match opposite(s1.letters, s2.letters) {
        Some(orientation) if i != j => Ok(OppositeCornerPair { site1: s1, site2: s2, orientation }),
        _ => Err(SurgeryError::NotOppositeCorners(i, j)),
    }
}

/// All unordered opposite corner pairs, ordered by `(position1, position2)`.
pub fn find_opposite_corner_pairs(w: &CyclicWord) -> Vec<OppositeCornerPair> {
    let all = sites(w);
    let mut out = Vec::new();
    for (i, s1) in all.iter().enumerate() {
        for s2 in &all[i + 1..] {
            if let Some(orientation) = opposite(s1.letters, s2.letters) {
                out.push(OppositeCornerPair { site1: *s1, site2: *s2, orientation });
            }
        }
    }
    out
}

/// Letters `w[from+1 ..= to]`, cyclically (the whole word when `from == to`).
fn arc(letters: &[Letter], from: usize, to: usize) -> Vec<Letter> {
    let n = letters.len();
    let len = (to + n - from) % n;
    let len = if len == 0 { n } else { len };
    (1..=len).map(|k| letters[(from + k) % n]).collect()
}

fn rebuild(letters: Vec<Letter>) -> CyclicWord {
    CyclicWord::from_letters(letters).expect("surgery seams are transversals, never cancellations")
}

fn check_sites(w: &CyclicWord, pair: &OppositeCornerPair) -> Result<(), SurgeryError> {
    let found = opposite_pair(w, pair.site1.position, pair.site2.position)?;
    if found != *pair {
        return Err(SurgeryError::NotOppositeCorners(pair.site1.position, pair.site2.position));
    }
    Ok(())
}

/// `⟨x r|s y R|S z⟩ → ⟨x r r Y S S z⟩`: one word, one block-pair fewer.
pub fn surgery_reversed(w: &CyclicWord, pair: &OppositeCornerPair) -> Result<CyclicWord, SurgeryError> {
    if pair.orientation != Orientation::Reversed {
        return Err(SurgeryError::WrongOrientation);
    }
    check_sites(w, pair)?;
    let (i, j) = (pair.site1.position, pair.site2.position);
    let first = arc(w.letters(), i, j); // s y R
    let mut out = arc(w.letters(), j, i); // S z x r
    out.extend(first.iter().rev().map(|l| l.inverse())); // r Y S
    Ok(rebuild(out))
}

/// `⟨x r|s y s|r z⟩ → [⟨x r r z⟩, ⟨s y s⟩]`: two words, one block-pair fewer in total.
pub fn surgery_same(w: &CyclicWord, pair: &OppositeCornerPair) -> Result<MultiWord, SurgeryError> {
    if pair.orientation != Orientation::Same {
        return Err(SurgeryError::WrongOrientation);
    }
    let (i, j) = (pair.site1.position, pair.site2.position);
    if i == j {
        return Err(SurgeryError::DegenerateSplit);
    }
    check_sites(w, pair)?;
    let inner = arc(w.letters(), i, j); // s y s
    let outer = arc(w.letters(), j, i); // r z x r
    Ok(MultiWord::new(vec![rebuild(outer), rebuild(inner)]))
}

/// Merges the two components of `mw` at site `i` of the first and site `j` of the second.
///
/// With pairs `(r, s)` and `(s, r)`: `[⟨x r|s y⟩, ⟨z s|r v⟩] → ⟨x r r v z s s y⟩`.
/// With pairs `(r, s)` and `(R, S)` the second component is inverted first.
pub fn surgery_merge(mw: &MultiWord, i: usize, j: usize) -> Result<CyclicWord, SurgeryError> {
    let [c0, c1] = mw.components() else {
        return Err(SurgeryError::ComponentCount(mw.components().len()));
    };
    if i >= c0.len() {
        return Err(SurgeryError::InvalidSite(i));
    }
    if j >= c1.len() {
        return Err(SurgeryError::InvalidSite(j));
    }
    let s0 = site(c0.letters(), i).letters;
    let s1 = site(c1.letters(), j).letters;
    let (second, j) = match opposite(s0, s1) {
        Some(Orientation::Same) => (c1.letters().to_vec(), j),
        Some(Orientation::Reversed) => {
            let n = c1.len();
            let inv: Vec<Letter> = c1.letters().iter().rev().map(|l| l.inverse()).collect();
            (inv, (2 * n - 2 - j) % n)
        }
        None => return Err(SurgeryError::NotOppositeCorners(i, j)),
    };
    let (n0, n1) = (c0.len(), second.len());
    let mut out: Vec<Letter> = (1..=n0).map(|k| c0.letters()[(i + k) % n0]).collect();
    out.extend((1..=n1).map(|k| second[(j + k) % n1]));
    Ok(rebuild(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Reversed-orientation surgery (words with all four letters).
    Reversed,
    /// Same-orientation surgery into two components.
    Split,
    /// Joining two components at opposite corners.
    Merge,
    /// Replacing a word or two-component multi-word by a two-block-pair word
    /// with the same letter counts and at least as many crossings.
    Substitution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub before: Vec<CyclicWord>,
    pub after: Vec<CyclicWord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub initial: CyclicWord,
    pub steps: Vec<TraceStep>,
    #[serde(rename = "final")]
    pub final_word: CyclicWord,
    /// Lower bound on `SI(final) - SI(initial)`.
    pub guaranteed_gain: u64,
}

fn step(rule: Rule, before: Vec<CyclicWord>, after: Vec<CyclicWord>) -> TraceStep {
    TraceStep { rule, before, after }
}

/// Split at the least same-orientation pair whose components can be merged
/// back along a same-orientation cross pair, then merge at the least such pair.
fn split_then_merge(w: &CyclicWord, steps: &mut Vec<TraceStep>) -> Option<CyclicWord> {
    for pair in find_opposite_corner_pairs(w).into_iter().filter(|p| p.orientation == Orientation::Same) {
        let Ok(mw) = surgery_same(w, &pair) else { continue };
        let [c0, c1] = mw.components() else { continue };
        let cross = sites(c0).into_iter().find_map(|a| {
            sites(c1)
                .into_iter()
                .find(|b| opposite(a.letters, b.letters) == Some(Orientation::Same))
                .map(|b| (a.position, b.position))
        });
        if let Some((i, j)) = cross {
            let merged = surgery_merge(&mw, i, j).expect("cross pair is opposite");
            steps.push(step(Rule::Split, vec![w.clone()], mw.components().to_vec()));
            steps.push(step(Rule::Merge, mw.components().to_vec(), vec![merged.clone()]));
            return Some(merged);
        }
    }
    None
}

fn spell(blocks: &[(Letter, usize)]) -> CyclicWord {
    rebuild(blocks.iter().flat_map(|&(l, e)| std::iter::repeat_n(l, e)).collect())
}

/// Blocks rotated so that the first one uses the family with a single letter.
/// Returns `None` unless `w` uses exactly three letters.
fn three_letter_blocks(w: &CyclicWord) -> Option<(Letter, Vec<Block>)> {
    if w.distinct_letters() != 3 {
        return None;
    }
    let blocks = w.block_decomposition().blocks;
    let single = |f: Family| {
        let mut ls: Vec<Letter> = blocks.iter().map(|b| b.letter).filter(|l| l.family() == f).collect();
        ls.sort();
        ls.dedup();
        ls.len() == 1
    };
    let t_family = if single(Family::A) { Family::A } else { Family::B };
    let offset = usize::from(blocks[0].letter.family() != t_family);
    let mut rotated = blocks[offset..].to_vec();
    rotated.extend_from_slice(&blocks[..offset]);
    Some((rotated[0].letter, rotated))
}

/// Rotates the block list by whole block-pairs so that the other-family letters
/// read `pattern` (as "same as first" / "inverse of first"), trying both choices
/// of which letter counts as `s`.
fn align(blocks: &[Block], pattern: &[bool]) -> Option<Vec<Block>> {
    let h = blocks.len() / 2;
    for shift in 0..h {
        let rot: Vec<Block> = (0..blocks.len()).map(|k| blocks[(k + 2 * shift) % blocks.len()]).collect();
        let s = rot[1].letter;
        if (0..h).all(|p| (rot[2 * p + 1].letter == s) == pattern[p]) {
            return Some(rot);
        }
    }
    None
}

/// `⟨t^i s^j t^k s^l t^m S^n⟩ → ⟨t^(i+k) s^(j+l) t^m S^n⟩`.
fn merge_like_blocks(b: &[Block]) -> CyclicWord {
    let (t, s, s_inv) = (b[0].letter, b[1].letter, b[5].letter);
    spell(&[
        (t, b[0].exponent + b[2].exponent),
        (s, b[1].exponent + b[3].exponent),
        (t, b[4].exponent),
        (s_inv, b[5].exponent),
    ])
}

/// Rewrites `w` (with `h ≥ 1`) into a word with one or two block-pairs and the same
/// letter counts, following the case analysis on the number of distinct letters.
///
/// Every step raises SI by at least one per block-pair removed.
pub fn reduce_to_two_blockpairs(w: &CyclicWord) -> Result<ReductionTrace, SurgeryError> {
    let h0 = w.block_pairs();
    if h0 == 0 {
        return Err(SurgeryError::PurePower(w.clone()));
    }
    let mut steps = Vec::new();
    let mut current = w.clone();
    while current.block_pairs() > 2 {
        let h = current.block_pairs();
        let next = match current.distinct_letters() {
            4 => find_opposite_corner_pairs(&current)
                .into_iter()
                .find(|p| p.orientation == Orientation::Reversed)
                .map(|pair| {
                    let out = surgery_reversed(&current, &pair).expect("pair was found in this word");
                    steps.push(step(Rule::Reversed, vec![current.clone()], vec![out.clone()]));
                    out
                }),
            3 if h == 3 => {
                let (_, blocks) = three_letter_blocks(&current).expect("three letters");
                align(&blocks, &[true, true, false]).map(|b| {
                    let out = merge_like_blocks(&b);
                    steps.push(step(Rule::Substitution, vec![current.clone()], vec![out.clone()]));
                    out
                })
            }
            3 if h == 4 => {
                let (_, blocks) = three_letter_blocks(&current).expect("three letters");
                match align(&blocks, &[true, true, false, false]) {
                    Some(b) => {
                        // split at t2|S2 and S3|t0
                        let (t, s, s_inv) = (b[0].letter, b[1].letter, b[5].letter);
                        let e = |k: usize| b[k].exponent;
                        let parts = vec![
                            spell(&[(t, e(4) + e(0)), (s, e(1)), (t, e(2)), (s, e(3))]),
                            spell(&[(t, e(6)), (s_inv, e(5) + e(7))]),
                        ];
                        let out = spell(&[(t, e(4) + e(0) + e(2)), (s, e(1) + e(3)), (t, e(6)), (s_inv, e(5) + e(7))]);
                        steps.push(step(Rule::Split, vec![current.clone()], parts.clone()));
                        steps.push(step(Rule::Substitution, parts, vec![out.clone()]));
                        Some(out)
                    }
                    None => split_then_merge(&current, &mut steps),
                }
            }
            _ => split_then_merge(&current, &mut steps),
        };
        current = next.ok_or_else(|| SurgeryError::NoApplicableRule(current.clone()))?;
    }
    Ok(ReductionTrace {
        initial: w.clone(),
        steps,
        final_word: current,
        guaranteed_gain: h0.saturating_sub(2) as u64,
    })
}
