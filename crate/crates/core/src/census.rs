//! Exhaustive enumeration of reduced cyclic words and self-intersection histograms.
//!
//! Canonical spellings are generated directly as necklaces (least rotations)
//! with the cyclic-reduction constraint, so every class is visited once. The
//! word space is sharded by canonical prefix; shard histograms are merged by
//! addition, so results do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extremal::{self, Surface};
use crate::linking::{self_intersection, SurfaceOrder};
use crate::word::{CyclicWord, Letter};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("length {0} is outside the range covered by the pants census (1..=15); pass the force flag to extrapolate")]
    UnvalidatedLength(usize),
    #[error("malformed table: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(
        "pants self-test failed for ring {ring}: {detail}; try the alternate ring {alternate}"
    )]
    SelfTest { ring: String, detail: String, alternate: String },
}

/// Longest prefix used to split enumeration work into shards.
const SHARD_PREFIX: usize = 3;

/// Depth-first generation of reduced prenecklaces.
///
/// `period` is the length of the longest Lyndon prefix; a prenecklace of length
/// `n` is a necklace iff `period` divides `n`, and a Lyndon word iff `period == n`.
fn extend(
    buf: &mut Vec<Letter>,
    period: usize,
    target: usize,
    primitive_only: bool,
    visit: &mut dyn FnMut(&[Letter]),
) {
    let t = buf.len();
    if t == target {
        let reduced = buf[t - 1] != buf[0].inverse();
        let necklace = if primitive_only { period == t } else { t.is_multiple_of(period) };
        if reduced && necklace {
            visit(buf);
        }
        return;
    }
    let floor = buf[t - period];
    let last = buf[t - 1];
    for code in floor.code()..4 {
        let c = Letter::from_code(code);
        if c == last.inverse() {
            continue;
        }
        let next_period = if c == floor { period } else { t + 1 };
        buf.push(c);
        extend(buf, next_period, target, primitive_only, visit);
        buf.pop();
    }
}

/// Reduced prenecklace prefixes `(letters, period)` of length `min(L, depth)`.
fn shard_prefixes(length: usize, depth: usize) -> Vec<(Vec<Letter>, usize)> {
    let depth = depth.min(length);
    let mut out = Vec::new();
    fn grow(buf: &mut Vec<Letter>, period: usize, depth: usize, out: &mut Vec<(Vec<Letter>, usize)>) {
        if buf.len() == depth {
            out.push((buf.clone(), period));
            return;
        }
        let t = buf.len();
        let floor = buf[t - period];
        for code in floor.code()..4 {
            let c = Letter::from_code(code);
            if c == buf[t - 1].inverse() {
                continue;
            }
            let p = if c == floor { period } else { t + 1 };
            buf.push(c);
            grow(buf, p, depth, out);
            buf.pop();
        }
    }
    for first in Letter::ALL {
        let mut buf = vec![first];
        grow(&mut buf, 1, depth, &mut out);
    }
    out
}

fn visit_shard(prefix: &[Letter], period: usize, length: usize, primitive_only: bool, visit: &mut dyn FnMut(&[Letter])) {
    let mut buf = Vec::with_capacity(length);
    buf.extend_from_slice(prefix);
    extend(&mut buf, period, length, primitive_only, visit);
}

/// Calls `visit` on the canonical spelling of every reduced cyclic word of the
/// given length, in increasing lexicographic order.
pub fn for_each_word(length: usize, primitive_only: bool, mut visit: impl FnMut(&[Letter])) {
    if length == 0 {
        return;
    }
    for (prefix, period) in shard_prefixes(length, SHARD_PREFIX) {
        visit_shard(&prefix, period, length, primitive_only, &mut visit);
    }
}

/// Every canonical reduced cyclic word of length `length`, optionally only the primitive ones.
pub fn enumerate_words(length: usize, primitive_only: bool) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    for_each_word(length, primitive_only, |letters| out.push(CyclicWord::from_canonical(letters.to_vec())));
    out
}

/// Number of words (optionally primitive) of each length, without building them.
pub fn count_words(length: usize, primitive_only: bool) -> u64 {
    let mut n = 0u64;
    for_each_word(length, primitive_only, |_| n += 1);
    n
}

/// Folds `f` over all words (or only the primitive ones) of one length in
/// parallel shards and merges the shard accumulators with `merge`.
pub fn fold_words<A, F, M>(
    length: usize,
    primitive_only: bool,
    init: impl Fn() -> A + Sync + Send,
    f: F,
    merge: M,
) -> A
where
    A: Send,
    F: Fn(&mut A, CyclicWord) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    shard_prefixes(length, SHARD_PREFIX)
        .into_par_iter()
        .map(|(prefix, period)| {
            let mut acc = init();
            visit_shard(&prefix, period, length, primitive_only, &mut |letters| {
                f(&mut acc, CyclicWord::from_canonical(letters.to_vec()))
            });
            acc
        })
        .reduce(&init, &merge)
}

/// Counts of primitive classes of one length by self-intersection number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiHistogram {
    pub length: usize,
    pub surface: String,
    /// `counts[k]` = number of classes with SI `k`; no trailing zeros.
    pub counts: Vec<u64>,
    pub total: u64,
}

impl SiHistogram {
    pub fn from_counts(length: usize, surface: &str, mut counts: Vec<u64>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        let total = counts.iter().sum();
        Self { length, surface: surface.to_string(), counts, total }
    }

    pub fn count(&self, si: usize) -> u64 {
        self.counts.get(si).copied().unwrap_or(0)
    }

    /// Largest SI with a nonzero count.
    pub fn max_si(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    /// Smallest SI with a nonzero count.
    pub fn min_si(&self) -> Option<usize> {
        self.counts.iter().position(|&c| c > 0)
    }
}

fn merge_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

pub fn si_histogram(length: usize, surface: Surface) -> SiHistogram {
    si_histogram_with_order(length, &surface.order(), surface.name())
}

/// Histogram with an explicit boundary ring.
pub fn si_histogram_with_order(length: usize, order: &SurfaceOrder, label: &str) -> SiHistogram {
    let counts = fold_words(
        length,
        true,
        Vec::new,
        |acc: &mut Vec<u64>, w| {
            let si = self_intersection(&w, order).value as usize;
            if acc.len() <= si {
                acc.resize(si + 1, 0);
            }
            acc[si] += 1;
        },
        merge_counts,
    );
    SiHistogram::from_counts(length, label, counts)
}

/// Extremes of the pants census at one length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsExtremes {
    pub length: usize,
    pub max_si: u64,
    pub max_count: usize,
    pub max_words: Vec<CyclicWord>,
    pub min_si: u64,
}

#[derive(Default)]
struct Extremes {
    max: Option<(u64, Vec<CyclicWord>)>,
    min: Option<u64>,
}

impl Extremes {
    fn push(&mut self, si: u64, w: CyclicWord) {
        self.min = Some(self.min.map_or(si, |m| m.min(si)));
        match &mut self.max {
            Some((m, words)) if *m == si => words.push(w),
            Some((m, _)) if *m > si => {}
            _ => self.max = Some((si, vec![w])),
        }
    }

    fn merge(mut self, other: Extremes) -> Extremes {
        self.min = match (self.min, other.min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max = match (self.max, other.max) {
            (Some((a, mut wa)), Some((b, wb))) => match a.cmp(&b) {
                std::cmp::Ordering::Greater => Some((a, wa)),
                std::cmp::Ordering::Less => Some((b, wb)),
                std::cmp::Ordering::Equal => {
                    wa.extend(wb);
                    Some((a, wa))
                }
            },
            (a, b) => a.or(b),
        };
        self
    }
}

/// Maximal and minimal self-intersection over primitive classes of one length
/// with the given ring, together with the maximizing words.
pub fn extremes_with_order(length: usize, order: &SurfaceOrder) -> PantsExtremes {
    let ext = fold_words(
        length,
        true,
        Extremes::default,
        |acc, w| acc.push(self_intersection(&w, order).value, w),
        Extremes::merge,
    );
    let (max_si, mut max_words) = ext.max.unwrap_or_default();
    max_words.sort();
    PantsExtremes {
        length,
        max_si,
        max_count: max_words.len(),
        max_words,
        min_si: ext.min.unwrap_or(0),
    }
}

/// Pants census extremes; lengths beyond 15 need `force`.
pub fn pants_extremes(length: usize, force: bool) -> Result<PantsExtremes, CensusError> {
    if !(1..=extremal::PANTS_VALIDATED_MAX).contains(&length) && !force {
        return Err(CensusError::UnvalidatedLength(length));
    }
    Ok(extremes_with_order(length, &SurfaceOrder::PANTS))
}

/// Maximum over every class of one length except pure letter powers, where
/// proper powers contribute their upper bound rather than an exact value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllWordMaximum {
    pub length: usize,
    pub max_si: u64,
    pub max_words: Vec<CyclicWord>,
    /// True when every maximizer is primitive, so `max_si` is attained exactly.
    pub exact: bool,
}

pub fn all_word_maximum(length: usize, order: &SurfaceOrder) -> AllWordMaximum {
    let ext = fold_words(
        length,
        false,
        Extremes::default,
        |acc, w| {
            if !w.is_pure_power() || length == 1 {
                acc.push(self_intersection(&w, order).value, w)
            }
        },
        Extremes::merge,
    );
    let (max_si, mut max_words) = ext.max.unwrap_or_default();
    max_words.sort();
    let exact = max_words.iter().all(CyclicWord::is_primitive);
    AllWordMaximum { length, max_si, max_words, exact }
}

/// Checks the pants formulas for `L ≤ 7` against a census with `order`.
pub fn pants_self_test(order: &SurfaceOrder) -> Result<(), CensusError> {
    let alternate = if *order == SurfaceOrder::PANTS { SurfaceOrder::PANTS_ALT } else { SurfaceOrder::PANTS };
    for length in 1..=7 {
        let ext = extremes_with_order(length, order);
        let want_max = extremal::pants_max_si(length);
        let want_min = extremal::pants_min_si(length);
        let fail = |detail: String| CensusError::SelfTest {
            ring: order.to_string(),
            detail,
            alternate: alternate.to_string(),
        };
        if ext.max_si != want_max {
            return Err(fail(format!("L={length}: max SI {} (expected {want_max})", ext.max_si)));
        }
        if ext.min_si != want_min {
            return Err(fail(format!("L={length}: min SI {} (expected {want_min})", ext.min_si)));
        }
        if length % 2 == 1 && length > 1 && ext.max_words != extremal::pants_odd_maximal_words(length) {
            return Err(fail(format!("L={length}: maximal words differ")));
        }
    }
    Ok(())
}

/// Returns the first candidate pants ring passing [`pants_self_test`].
pub fn locate_pants_ring() -> Result<SurfaceOrder, CensusError> {
    let mut last = None;
    for order in [SurfaceOrder::PANTS, SurfaceOrder::PANTS_ALT] {
        match pants_self_test(&order) {
            Ok(()) => return Ok(order),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one candidate ring"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    /// Long form: `length,si,count`.
    Csv,
    Json,
    /// One line per length, counts separated by spaces.
    Plain,
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    length: usize,
    counts: BTreeMap<usize, u64>,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    surface: String,
    rows: Vec<JsonRow>,
}

/// Histograms for lengths `1..=max_length`.
pub fn census_table(max_length: usize, surface: Surface) -> Vec<SiHistogram> {
    (1..=max_length).map(|l| si_histogram(l, surface)).collect()
}

pub fn render_table(rows: &[SiHistogram], surface: &str, format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("length,si,count\n");
            for row in rows {
                for (si, c) in row.counts.iter().enumerate() {
                    writeln!(out, "{},{},{}", row.length, si, c).unwrap();
                }
            }
        }
        TableFormat::Plain => {
            for row in rows {
                let cells: Vec<String> = row.counts.iter().map(u64::to_string).collect();
                writeln!(out, "{}", cells.join(" ")).unwrap();
            }
        }
        TableFormat::Json => {
            let table = JsonTable {
                surface: surface.to_string(),
                rows: rows
                    .iter()
                    .map(|r| JsonRow { length: r.length, counts: r.counts.iter().copied().enumerate().collect() })
                    .collect(),
            };
            out = serde_json::to_string(&table).expect("table serializes");
            out.push('\n');
        }
    }
    out
}

/// Census table for lengths `1..=max_length`, rendered.
pub fn emit_table(max_length: usize, surface: Surface, format: TableFormat) -> String {
    render_table(&census_table(max_length, surface), surface.name(), format)
}

/// Parses the JSON table format back into histograms.
pub fn parse_table_json(text: &str) -> Result<Vec<SiHistogram>, CensusError> {
    let table: JsonTable = serde_json::from_str(text)?;
    table
        .rows
        .into_iter()
        .map(|row| {
            let len = row.counts.keys().next_back().map_or(0, |k| k + 1);
            let mut counts = vec![0u64; len];
            for (si, c) in row.counts {
                counts[si] = c;
            }
            Ok(SiHistogram::from_counts(row.length, &table.surface, counts))
        })
        .collect()
}

/// Parses the long-form CSV table format back into histograms.
pub fn parse_table_csv(text: &str, surface: &str) -> Result<Vec<SiHistogram>, CensusError> {
    let mut lines = text.lines();
    if lines.next() != Some("length,si,count") {
        return Err(CensusError::Parse("missing header `length,si,count`".into()));
    }
    let mut rows: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |s: &str| s.trim().parse::<u64>().map_err(|e| CensusError::Parse(format!("{line:?}: {e}")));
        let [l, si, c] = fields[..] else {
            return Err(CensusError::Parse(format!("expected three fields in {line:?}")));
        };
        let (l, si, c) = (parse(l)? as usize, parse(si)? as usize, parse(c)?);
        let counts = rows.entry(l).or_default();
        if counts.len() <= si {
            counts.resize(si + 1, 0);
        }
        counts[si] = c;
    }
    Ok(rows.into_iter().map(|(l, c)| SiHistogram::from_counts(l, surface, c)).collect())
}
