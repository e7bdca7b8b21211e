//! Linked pairs and the self-intersection / intersection numbers they count.
//!
//! Two equal-length occurrences `p1·y·p2` and `q1·y'·q2` are linked when their
//! end letters diverge on opposite sides of the common (or inverse) interior
//! `y`, as measured by the rotational sense of letter triples on the ring of
//! boundary directions around the basepoint ([`SurfaceOrder`]).
//!
//! Two independent counters are provided:
//!
//! * [`linked_pairs`] / [`linked_pairs_between`] walk every pair of positioned
//!   occurrences and classify it with [`classify_pair`];
//! * [`self_intersection`] / [`intersection_number`] walk pairs of *gaps*
//!   (cut points between consecutive letters), extend the common interior as far
//!   as it goes and test the single candidate pair found there.
//!
//! Every linked pair diverges at both ends, so it is found by exactly one gap
//! pair; the two counters therefore agree, which the tests check exhaustively.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{CyclicWord, Letter, MultiWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("occurrences have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("an occurrence cannot be paired with itself")]
    SameOccurrence,
    #[error("occurrences must have length at least 2 (got {0})")]
    TooShort(usize),
    #[error("common interior reached the cap of {cap} letters; the single-period count is not reliable for this input")]
    CapExceeded { cap: usize },
    #[error("word {0} is not primitive")]
    NonPrimitiveInput(CyclicWord),
    #[error("ring {0:?} is not a permutation of a, b, A, B")]
    InvalidRing([Letter; 4]),
}

/// The cyclic arrangement of the four letter directions around the basepoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceOrder {
    ring: [Letter; 4],
    position: [u8; 4],
}

impl SurfaceOrder {
    /// Punctured torus: `a, b, A, B` clockwise.
    pub const TORUS: SurfaceOrder = SurfaceOrder::from_ring([Letter::A, Letter::B, Letter::AInv, Letter::BInv]);
    /// Pair of pants: `a, A, b, B`.
    pub const PANTS: SurfaceOrder = SurfaceOrder::from_ring([Letter::A, Letter::AInv, Letter::B, Letter::BInv]);
    /// Alternate pants ring with the `b` directions swapped.
    pub const PANTS_ALT: SurfaceOrder = SurfaceOrder::from_ring([Letter::A, Letter::AInv, Letter::BInv, Letter::B]);

    const fn from_ring(ring: [Letter; 4]) -> SurfaceOrder {
        let mut position = [0u8; 4];
        let mut i = 0;
        while i < 4 {
            position[ring[i].code() as usize] = i as u8;
            i += 1;
        }
        SurfaceOrder { ring, position }
    }

    pub fn new(ring: [Letter; 4]) -> Result<SurfaceOrder, LinkError> {
        let mut seen = [false; 4];
        for l in ring {
            seen[l.code() as usize] = true;
        }
        if seen.iter().all(|&s| s) {
            Ok(Self::from_ring(ring))
        } else {
            Err(LinkError::InvalidRing(ring))
        }
    }

    pub fn ring(&self) -> [Letter; 4] {
        self.ring
    }

    #[inline]
    fn pos(&self, l: Letter) -> u8 {
        self.position[l.code() as usize]
    }

    /// `Some(true)` if `p → q → r` runs forward around the ring, `Some(false)`
    /// if backward, `None` if two of the letters coincide.
    #[inline]
    pub fn orientation(&self, p: Letter, q: Letter, r: Letter) -> Option<bool> {
        let base = self.pos(p);
        let dq = (self.pos(q) + 4 - base) & 3;
        let dr = (self.pos(r) + 4 - base) & 3;
        if dq == 0 || dr == 0 || dq == dr {
            None
        } else {
            Some(dq < dr)
        }
    }

    /// Whether the chords `x1–y1` and `x2–y2` cross inside the disc bounded by the ring.
    #[inline]
    pub fn chords_interleave(&self, (x1, y1): (Letter, Letter), (x2, y2): (Letter, Letter)) -> bool {
        let base = self.pos(x1);
        let rel = |l: Letter| (self.pos(l) + 4 - base) & 3;
        let (dy1, dx2, dy2) = (rel(y1), rel(x2), rel(y2));
        if dy1 == 0 || dx2 == 0 || dy2 == 0 || dx2 == dy1 || dy2 == dy1 || dx2 == dy2 {
            return false;
        }
        (dx2 < dy1) != (dy2 < dy1)
    }
}

impl Default for SurfaceOrder {
    fn default() -> Self {
        SurfaceOrder::TORUS
    }
}

impl fmt::Display for SurfaceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.ring {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// True iff both triples consist of distinct letters and run around the ring
/// in the same rotational sense.
pub fn similarly_oriented(t1: [Letter; 3], t2: [Letter; 3], order: &SurfaceOrder) -> bool {
    match (order.orientation(t1[0], t1[1], t1[2]), order.orientation(t2[0], t2[1], t2[2])) {
        (Some(o1), Some(o2)) => o1 == o2,
        _ => false,
    }
}

/// A positioned linear subword, read cyclically (and periodically) from `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    /// Index of the host word (0 for a single word; 0 or 1 within a pair of words).
    pub host: usize,
    pub start: usize,
    pub len: usize,
}

impl Occurrence {
    pub fn new(host: usize, start: usize, len: usize) -> Self {
        Self { host, start, len }
    }

    pub fn letters(&self, word: &CyclicWord) -> Vec<Letter> {
        (0..self.len).map(|t| word.at(self.start + t)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairKind {
    /// Empty interior: `{rr, ss}` style crossing chords.
    I,
    /// Common interior.
    II,
    /// Interior of one occurrence is the inverse of the other's.
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkedPair {
    pub first: Occurrence,
    pub second: Occurrence,
    pub kind: PairKind,
}

/// Decides whether two equal-length linear words `p1 y p2`, `q1 y' q2` are linked.
fn classify_letters(u: &[Letter], v: &[Letter], order: &SurfaceOrder) -> Option<PairKind> {
    let n = u.len();
    let (p1, p2, q1, q2) = (u[0], u[n - 1], v[0], v[n - 1]);
    if n == 2 {
        return order
            .chords_interleave((p1.inverse(), p2), (q1.inverse(), q2))
            .then_some(PairKind::I);
    }
    let (yu, yv) = (&u[1..n - 1], &v[1..n - 1]);
    let (x1, x2) = (yu[0], yu[yu.len() - 1]);
    if yu == yv {
        let linked = similarly_oriented([p1.inverse(), q1.inverse(), x1], [p2, q2, x2.inverse()], order);
        return linked.then_some(PairKind::II);
    }
    let inverse_interior = yu.iter().zip(yv.iter().rev()).all(|(&a, &b)| a == b.inverse());
    if inverse_interior {
        let linked = similarly_oriented([p1.inverse(), q2, x1], [p2, q1.inverse(), x2.inverse()], order);
        return linked.then_some(PairKind::III);
    }
    None
}

/// Classifies a pair of occurrences (in `host1` and `host2`, which may be the same word).
pub fn classify_pair(
    host1: &CyclicWord,
    o1: Occurrence,
    host2: &CyclicWord,
    o2: Occurrence,
    order: &SurfaceOrder,
) -> Result<Option<LinkedPair>, LinkError> {
    if o1.len != o2.len {
        return Err(LinkError::LengthMismatch(o1.len, o2.len));
    }
    if o1.len < 2 {
        return Err(LinkError::TooShort(o1.len));
    }
    if o1.host == o2.host && host1 == host2 && o1.start % host1.len() == o2.start % host2.len() {
        return Err(LinkError::SameOccurrence);
    }
    let (u, v) = (o1.letters(host1), o2.letters(host2));
    Ok(classify_letters(&u, &v, order).map(|kind| LinkedPair { first: o1, second: o2, kind }))
}

/// All linked pairs of a single word, by direct enumeration of occurrence pairs
/// of lengths `2..=L+2`.
pub fn linked_pairs(w: &CyclicWord, order: &SurfaceOrder) -> Vec<LinkedPair> {
    let n = w.len();
    let mut out = Vec::new();
    for len in 2..=n + 2 {
        let occ: Vec<Vec<Letter>> = (0..n).map(|s| Occurrence::new(0, s, len).letters(w)).collect();
        for s1 in 0..n {
            for s2 in s1 + 1..n {
                if let Some(kind) = classify_letters(&occ[s1], &occ[s2], order) {
                    out.push(LinkedPair {
                        first: Occurrence::new(0, s1, len),
                        second: Occurrence::new(0, s2, len),
                        kind,
                    });
                }
            }
        }
    }
    out
}

/// All ordered linked pairs `(u ⊂ v, u' ⊂ w)` by direct enumeration, with
/// interiors up to `|v| + |w|` letters.
pub fn linked_pairs_between(v: &CyclicWord, w: &CyclicWord, order: &SurfaceOrder) -> Result<Vec<LinkedPair>, LinkError> {
    let cap = v.len() + w.len();
    let mut out = Vec::new();
    for len in 2..=cap + 2 {
        let occ_w: Vec<Vec<Letter>> = (0..w.len()).map(|s| Occurrence::new(1, s, len).letters(w)).collect();
        for s1 in 0..v.len() {
            let u = Occurrence::new(0, s1, len).letters(v);
            for (s2, u2) in occ_w.iter().enumerate() {
                if let Some(kind) = classify_letters(&u, u2, order) {
                    if len == cap + 2 {
                        return Err(LinkError::CapExceeded { cap });
                    }
                    out.push(LinkedPair {
                        first: Occurrence::new(0, s1, len),
                        second: Occurrence::new(1, s2, len),
                        kind,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    Exact,
    /// Upper bound; returned for proper powers that are not pure letter powers.
    Bound,
}

/// A self-intersection value tagged as exact or as an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SiValue {
    pub value: u64,
    pub exactness: Exactness,
}

impl SiValue {
    pub fn exact(value: u64) -> Self {
        Self { value, exactness: Exactness::Exact }
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    /// The value if exact.
    pub fn exact_value(&self) -> Option<u64> {
        self.is_exact().then_some(self.value)
    }
}

impl fmt::Display for SiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exactness {
            Exactness::Exact => write!(f, "{}", self.value),
            Exactness::Bound => write!(f, "≤ {}", self.value),
        }
    }
}

enum GapOutcome {
    Unlinked,
    Linked,
    /// The two readings agree for `cap` letters without diverging.
    Saturated,
}

/// Tests the unique candidate pair cut at gap `i` of `x` (before `x[i]`) and gap
/// `j` of `y`. With `allow_empty = false` a pair with empty interior is ignored.
#[inline]
fn gap_link(x: &[Letter], i: usize, y: &[Letter], j: usize, cap: usize, allow_empty: bool, order: &SurfaceOrder) -> GapOutcome {
    let (n, m) = (x.len(), y.len());
    let p1 = x[(i + n - 1) % n];
    let q1 = y[(j + m - 1) % m];
    if p1 == q1 {
        return GapOutcome::Unlinked;
    }
    let mut k = 0;
    while x[(i + k) % n] == y[(j + k) % m] {
        k += 1;
        if k >= cap {
            return GapOutcome::Saturated;
        }
    }
    let p2 = x[(i + k) % n];
    let q2 = y[(j + k) % m];
    let linked = if k == 0 {
        allow_empty && order.chords_interleave((p1.inverse(), p2), (q1.inverse(), q2))
    } else {
        let x1 = x[i % n];
        let x2 = x[(i + k - 1) % n];
        similarly_oriented([p1.inverse(), q1.inverse(), x1], [p2, q2, x2.inverse()], order)
    };
    if linked {
        GapOutcome::Linked
    } else {
        GapOutcome::Unlinked
    }
}

fn reversed_inverse(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// Number of linked pairs of a single word, counted through gap pairs.
///
/// Pairs of gaps whose readings never diverge (possible only for proper powers)
/// contribute nothing.
pub fn count_linked_pairs(w: &CyclicWord, order: &SurfaceOrder) -> u64 {
    let x = w.letters();
    let n = x.len();
    let inv = reversed_inverse(x);
    let mut same = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if let GapOutcome::Linked = gap_link(x, i, x, j, n, true, order) {
                same += 1;
            }
        }
    }
    let mut inverse = 0u64;
    for i in 0..n {
        for j in 0..n {
            if let GapOutcome::Linked = gap_link(x, i, &inv, j, n, false, order) {
                inverse += 1;
            }
        }
    }
    // each type III pair is seen once from either end
    debug_assert_eq!(inverse % 2, 0);
    same + inverse / 2
}

/// Self-intersection number.
///
/// Exact for primitive words and for pure letter powers `r^L` (value `L - 1`);
/// for other proper powers `u^k` returns the upper bound `(k - 1)` plus the
/// number of linked pairs.
pub fn self_intersection(w: &CyclicWord, order: &SurfaceOrder) -> SiValue {
    if w.is_pure_power() {
        return SiValue::exact(w.len() as u64 - 1);
    }
    let k = w.power_decomposition().exponent;
    let count = count_linked_pairs(w, order);
    if k == 1 {
        SiValue::exact(count)
    } else {
        SiValue { value: count + (k as u64 - 1), exactness: Exactness::Bound }
    }
}

/// Intersection number of two primitive words: the number of ordered linked pairs
/// with one occurrence in each word's periodic extension.
pub fn intersection_number(v: &CyclicWord, w: &CyclicWord, order: &SurfaceOrder) -> Result<u64, LinkError> {
    for word in [v, w] {
        if !word.is_primitive() {
            return Err(LinkError::NonPrimitiveInput(word.clone()));
        }
    }
    count_linked_pairs_between(v, w, order)
}

/// Ordered linked pairs between one period of `v` and one period of `w`, with no
/// primitivity requirement. For `v = u^k` and primitive `w` this is `k·IN(u, w)`.
pub fn count_linked_pairs_between(v: &CyclicWord, w: &CyclicWord, order: &SurfaceOrder) -> Result<u64, LinkError> {
    let cap = v.len() + w.len();
    // aligned readings of the same class (or its inverse) never diverge
    if v == w || *v == w.inverse() {
        return Err(LinkError::CapExceeded { cap });
    }
    let (x, y) = (v.letters(), w.letters());
    let y_inv = reversed_inverse(y);
    let mut count = 0u64;
    for (target, allow_empty) in [(y, true), (&y_inv[..], false)] {
        for i in 0..x.len() {
            for j in 0..target.len() {
                match gap_link(x, i, target, j, cap, allow_empty, order) {
                    GapOutcome::Linked => count += 1,
                    GapOutcome::Unlinked => {}
                    GapOutcome::Saturated => return Err(LinkError::CapExceeded { cap }),
                }
            }
        }
    }
    Ok(count)
}

/// Self-intersection of a multi-word: component SIs plus pairwise intersection numbers.
pub fn multiword_si(mw: &MultiWord, order: &SurfaceOrder) -> Result<u64, LinkError> {
    let comps = mw.components();
    let mut total = 0u64;
    for (i, c) in comps.iter().enumerate() {
        if !c.is_primitive() {
            return Err(LinkError::NonPrimitiveInput(c.clone()));
        }
        total += self_intersection(c, order).value;
        for d in &comps[i + 1..] {
            total += intersection_number(c, d, order)?;
        }
    }
    Ok(total)
}
