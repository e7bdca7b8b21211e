//! Self-checking suites: the closed forms, surgery invariants, the torus census
//! table, the extremal theorems and the pants statements, each recomputed from
//! scratch and compared.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::census::{self, all_word_maximum, extremes_with_order, for_each_word, locate_pants_ring};
use crate::extremal::{self, closed_form_si, PairShape, Shape, Surface};
use crate::linking::{count_linked_pairs_between, multiword_si, self_intersection, Exactness, SurfaceOrder};
use crate::surgery::{
    find_opposite_corner_pairs, reduce_to_two_blockpairs, sites, surgery_merge, surgery_reversed, surgery_same,
    Orientation,
};
use crate::word::{CyclicWord, Letter, MultiWord};

/// Primitive class counts by SI for the punctured torus, lengths 1 to 12.
pub const TORUS_REFERENCE_TABLE: [&[u64]; 12] = [
    &[4],
    &[4],
    &[8],
    &[10, 8],
    &[16, 8, 24],
    &[8, 16, 32, 40, 20],
    &[24, 16, 32, 48, 112, 24, 56],
    &[16, 24, 52, 76, 116, 156, 136, 104, 90, 40],
    &[24, 32, 64, 120, 144, 240, 384, 208, 376, 136, 304, 48, 104],
    &[16, 32, 72, 168, 272, 332, 492, 628, 644, 700, 700, 548, 464, 360, 224, 160, 68],
    &[40, 48, 80, 160, 272, 584, 664, 1200, 1280, 1368, 1608, 1368, 2048, 976, 1704, 528, 1072, 264, 592, 80, 168],
    &[
        16, 40, 104, 208, 372, 660, 1048, 1408, 2044, 2696, 3088, 3580, 3866, 3792, 3816, 3612, 3272, 2820, 2276, 1808,
        1308, 960, 680, 392, 250, 104,
    ],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    AppendixOracle,
    SurgeryInvariants,
    Table1,
    Extremal,
    Pants,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::AppendixOracle, Suite::SurgeryInvariants, Suite::Table1, Suite::Extremal, Suite::Pants];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AppendixOracle => "appendix-oracle",
            Suite::SurgeryInvariants => "surgery-invariants",
            Suite::Table1 => "table1",
            Suite::Extremal => "extremal",
            Suite::Pants => "pants",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn run(self) -> SuiteReport {
        match self {
            Suite::AppendixOracle => appendix_oracle(4),
            Suite::SurgeryInvariants => surgery_invariants(10, 10_000, 12, 0x5eed),
            Suite::Table1 => table1(12),
            Suite::Extremal => extremal_suite(14, 30),
            Suite::Pants => pants_suite(13),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.to_string(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} checks, {} failures", self.suite, self.checks, self.failures.len())?;
        if let Some(first) = self.failures.first() {
            write!(f, "\nfirst failure: {first}")?;
        }
        Ok(())
    }
}

fn grid(dims: usize, max: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = max.pow(dims as u32);
    (0..total).map(move |mut code| {
        (0..dims)
            .map(|_| {
                let e = code % max + 1;
                code /= max;
                e
            })
            .collect()
    })
}

/// Closed forms against linked-pair counts over exponents `1..=max`.
pub fn appendix_oracle(max: usize) -> SuiteReport {
    let torus = SurfaceOrder::TORUS;
    let mut report = SuiteReport::new("appendix-oracle");
    let check_shape = |report: &mut SuiteReport, shape: Shape| {
        let word = shape.word().expect("positive exponents");
        let want = closed_form_si(&shape).expect("positive exponents");
        let got = self_intersection(&word, &torus);
        let ok = match want.exactness {
            Exactness::Exact => got.value == want.value,
            // squares: the linked-pair bound must not exceed the closed-form bound
            Exactness::Bound => got.exactness == Exactness::Bound && got.value <= want.value,
        };
        report.check(ok, || format!("{shape:?} = {word}: linked pairs give {got}, closed form {}", want.value));
    };
    for e in grid(2, max) {
        check_shape(&mut report, Shape::Ab { i: e[0], j: e[1] });
    }
    for e in grid(4, max) {
        let (i, j, k, l) = (e[0], e[1], e[2], e[3]);
        check_shape(&mut report, Shape::Abab { i, j, k, l });
        check_shape(&mut report, Shape::AbaBInv { i, j, k, l });
        check_shape(&mut report, Shape::AbAB { i, j, k, l });
    }
    for e in grid(6, max) {
        let (i, j, k, l, m, n) = (e[0], e[1], e[2], e[3], e[4], e[5]);
        check_shape(&mut report, Shape::AbabaB { i, j, k, l, m, n });
        check_pair(&mut report, PairShape::AbabWithAB { i, j, k, l, m, n });
    }
    for e in grid(4, max) {
        check_pair(&mut report, PairShape::AbWithAB { i: e[0], j: e[1], m: e[2], n: e[3] });
    }
    report
}

fn check_pair(report: &mut SuiteReport, pair: PairShape) {
    let (v, w) = pair.words().expect("positive exponents");
    let want = extremal::closed_form_in(&pair).expect("positive exponents");
    let got = count_linked_pairs_between(&v, &w, &SurfaceOrder::TORUS);
    report.check(got == Ok(want), || format!("{pair:?}: linked pairs give {got:?}, closed form {want}"));
}

fn exact_si(words: &[CyclicWord]) -> Option<u64> {
    match words {
        [w] => self_intersection(w, &SurfaceOrder::TORUS).exact_value(),
        _ => multiword_si(&MultiWord::new(words.to_vec()), &SurfaceOrder::TORUS).ok(),
    }
}

fn totals(words: &[CyclicWord]) -> (usize, usize, usize) {
    words.iter().fold((0, 0, 0), |(a, b, h), w| (a + w.alpha(), b + w.beta(), h + w.block_pairs()))
}

/// Checks one rewrite `before → after`: letter counts kept, one block-pair fewer,
/// and SI raised by at least one when both sides are exact.
fn check_step(report: &mut SuiteReport, label: &str, before: &[CyclicWord], after: &[CyclicWord]) {
    let (a0, b0, h0) = totals(before);
    let (a1, b1, h1) = totals(after);
    report.check(a0 == a1 && b0 == b1, || format!("{label}: {before:?} → {after:?} changes letter counts"));
    report.check(h1 + 1 == h0, || format!("{label}: {before:?} → {after:?} block-pairs {h0} → {h1}"));
    if let (Some(s0), Some(s1)) = (exact_si(before), exact_si(after)) {
        report.check(s1 > s0, || format!("{label}: {before:?} → {after:?} SI {s0} → {s1}"));
    }
}

/// All single surgeries on `w` (and merges of every split), plus the reduction pipeline.
pub fn check_surgeries(report: &mut SuiteReport, w: &CyclicWord) {
    let one = std::slice::from_ref(w);
    for pair in find_opposite_corner_pairs(w) {
        match pair.orientation {
            Orientation::Reversed => {
                let out = surgery_reversed(w, &pair).expect("pair taken from the word");
                check_step(report, "reversed", one, &[out]);
            }
            Orientation::Same => {
                let mw = surgery_same(w, &pair).expect("pair taken from the word");
                let parts = mw.components().to_vec();
                check_step(report, "split", one, &parts);
                for a in sites(&parts[0]) {
                    for b in sites(&parts[1]) {
                        if let Ok(merged) = surgery_merge(&mw, a.position, b.position) {
                            check_step(report, "merge", &parts, &[merged]);
                        }
                    }
                }
            }
        }
    }
    if w.block_pairs() == 0 {
        return;
    }
    match reduce_to_two_blockpairs(w) {
        Ok(trace) => {
            for step in &trace.steps {
                check_step(report, "pipeline", &step.before, &step.after);
            }
            let f = &trace.final_word;
            report.check(f.block_pairs() <= 2 && f.alpha() == w.alpha() && f.beta() == w.beta(), || {
                format!("pipeline on {w} ends at {f}")
            });
            if let (Some(s0), Some(s1)) = (exact_si(one), exact_si(std::slice::from_ref(f))) {
                report.check(s1 >= s0 + trace.guaranteed_gain, || {
                    format!("pipeline on {w}: SI {s0} → {s1}, guaranteed gain {}", trace.guaranteed_gain)
                });
            }
        }
        Err(e) => report.check(false, || format!("pipeline on {w}: {e}")),
    }
}

/// A uniformly chosen cyclically reduced spelling of length `len`.
pub fn random_word(rng: &mut impl Rng, len: usize) -> CyclicWord {
    loop {
        let mut letters = vec![Letter::from_code(rng.gen_range(0..4))];
        while letters.len() < len {
            let last = *letters.last().expect("nonempty");
            let next = Letter::from_code(rng.gen_range(0..4));
            if next != last.inverse() {
                letters.push(next);
            }
        }
        if let Ok(w) = CyclicWord::from_letters(letters) {
            return w;
        }
    }
}

pub fn surgery_invariants(exhaustive_max: usize, random_count: usize, random_max: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("surgery-invariants");
    for length in 1..=exhaustive_max {
        for_each_word(length, false, |letters| {
            check_surgeries(&mut report, &CyclicWord::from_letters(letters.to_vec()).expect("canonical"));
        });
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..random_count {
        let len = rng.gen_range(1..=random_max);
        check_surgeries(&mut report, &random_word(&mut rng, len));
    }
    report
}

pub fn table1(max_length: usize) -> SuiteReport {
    let mut report = SuiteReport::new("table1");
    for row in census::census_table(max_length.min(TORUS_REFERENCE_TABLE.len()), Surface::Torus) {
        let want = TORUS_REFERENCE_TABLE[row.length - 1];
        report.check(row.counts == want, || format!("length {}: census {:?}, reference {:?}", row.length, row.counts, want));
        let l = row.length;
        if l >= 4 {
            let top = extremal::torus_max_si(l) as usize;
            report.check(row.max_si() == Some(top), || format!("length {l}: largest SI {:?}, expected {top}", row.max_si()));
            report.check(row.count(top) == extremal::count_maximal(l), || format!("length {l}: maximal count {}", row.count(top)));
            report.check(row.count(top - 1) == extremal::count_submaximal(l), || {
                format!("length {l}: submaximal count {}", row.count(top - 1))
            });
        }
        if l >= 3 && l % 2 == 1 && (2..l).all(|d| l % d != 0) {
            report.check(row.count(0) == 4 * (l as u64 - 1), || format!("prime length {l}: {} simple classes", row.count(0)));
        }
        if l % 2 == 0 {
            report.check(row.count(1) == 4 * (l as u64 - 2), || format!("length {l}: {} classes with SI 1", row.count(1)));
        }
    }
    report
}

pub fn extremal_suite(census_max: usize, arithmetic_max: usize) -> SuiteReport {
    use std::collections::BTreeSet;
    let mut report = SuiteReport::new("extremal");
    for l in 4..=arithmetic_max {
        let (m, s) = (extremal::maximal_words(l).len() as u64, extremal::submaximal_words(l).len() as u64);
        report.check(m == extremal::count_maximal(l), || format!("L={l}: {m} maximal shapes"));
        report.check(s == extremal::count_submaximal(l), || format!("L={l}: {s} submaximal shapes"));
        report.check(extremal::count_maximal(l) + extremal::count_submaximal(l) == extremal::count_extremal_combined(l), || {
            format!("L={l}: combined count identity")
        });
    }
    for l in 4..=census_max {
        let top = extremal::torus_max_si(l);
        let found = census::fold_words(
            l,
            true,
            || (BTreeSet::new(), BTreeSet::new(), 0u64),
            |acc, w| {
                let si = self_intersection(&w, &SurfaceOrder::TORUS).value;
                acc.2 = acc.2.max(si);
                if si == top {
                    acc.0.insert(w);
                } else if si + 1 == top {
                    acc.1.insert(w);
                }
            },
            |mut a, b| {
                a.0.extend(b.0);
                a.1.extend(b.1);
                a.2 = a.2.max(b.2);
                a
            },
        );
        report.check(found.2 == top, || format!("L={l}: census maximum {} vs {top}", found.2));
        let maximal: BTreeSet<_> = extremal::maximal_words(l).into_iter().collect();
        let submaximal: BTreeSet<_> = extremal::submaximal_words(l).into_iter().collect();
        report.check(found.0 == maximal, || format!("L={l}: maximal words differ from the generated shapes"));
        report.check(found.1 == submaximal, || format!("L={l}: submaximal words differ from the generated shapes"));
        report.check(found.0.len() as u64 == extremal::count_maximal(l), || format!("L={l}: {} maximal", found.0.len()));
        report.check(found.1.len() as u64 == extremal::count_submaximal(l), || format!("L={l}: {} submaximal", found.1.len()));
    }
    for k in 1..=25u64 {
        let least = (1..).find(|&l| extremal::torus_max_si(l) >= k).expect("max grows");
        report.check(extremal::min_length_for_si(k) == least, || format!("k={k}: formula vs least length {least}"));
    }
    report
}

pub fn pants_suite(max_length: usize) -> SuiteReport {
    let mut report = SuiteReport::new("pants");
    let order = match locate_pants_ring() {
        Ok(order) => order,
        Err(e) => {
            report.check(false, || e.to_string());
            return report;
        }
    };
    for l in 1..=max_length {
        let ext = extremes_with_order(l, &order);
        report.check(ext.max_si == extremal::pants_max_si(l), || format!("L={l}: max {} vs {}", ext.max_si, extremal::pants_max_si(l)));
        report.check(ext.min_si == extremal::pants_min_si(l), || format!("L={l}: min {} vs {}", ext.min_si, extremal::pants_min_si(l)));
        if l % 2 == 1 {
            report.check(ext.max_words == extremal::pants_odd_maximal_words(l), || format!("L={l}: maximal words {:?}", ext.max_words));
            report.check(ext.max_count == 4, || format!("L={l}: {} maximizers", ext.max_count));
        } else if l >= 4 {
            let all = all_word_maximum(l, &order);
            report.check(all.max_si == extremal::pants_nonprimitive_max_si(l), || {
                format!("L={l}: all-word max {} vs {}", all.max_si, extremal::pants_nonprimitive_max_si(l))
            });
            report.check(all.max_words.len() == 2, || format!("L={l}: all-word maximizers {:?}", all.max_words));
        } else {
            report.check(ext.max_count == 2, || format!("L={l}: {} maximizers", ext.max_count));
        }
    }
    report
}
