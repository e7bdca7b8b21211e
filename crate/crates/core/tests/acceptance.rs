//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any fails. Reference values are frozen here or computed
//! from closed forms written out below, never taken from the library.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use torsi::census::{self, fold_words};
use torsi::extremal;
use torsi::{
    count_linked_pairs_between, find_opposite_corner_pairs, intersection_number, multiword_si, parse_word,
    reduce_to_two_blockpairs, self_intersection, surgery_merge, surgery_reversed, surgery_same, CyclicWord,
    Orientation, SiHistogram, Surface, SurfaceOrder, TableFormat,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

/// Reference torus census, transcribed: row `L` lists the number of primitive classes of
/// length `L` with SI = 0, 1, ...
const TORUS_TABLE: [&[u64]; 12] = [
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
    &[
        40, 48, 80, 160, 272, 584, 664, 1200, 1280, 1368, 1608, 1368, 2048, 976, 1704, 528, 1072, 264, 592, 80, 168,
    ],
    &[
        16, 40, 104, 208, 372, 660, 1048, 1408, 2044, 2696, 3088, 3580, 3866, 3792, 3816, 3612, 3272, 2820, 2276,
        1808, 1308, 960, 680, 392, 250, 104,
    ],
];

fn rank(c: char) -> u8 {
    match c {
        'a' => 0,
        'b' => 1,
        'A' => 2,
        'B' => 3,
        _ => panic!("bad letter {c}"),
    }
}

/// Least rotation by brute force, in the order a < b < A < B.
fn canon(s: &str) -> String {
    let chars: Vec<char> = s.chars().collect();
    let n = chars.len();
    (0..n)
        .map(|r| (0..n).map(|k| chars[(r + k) % n]).collect::<Vec<_>>())
        .min_by_key(|rot| rot.iter().map(|&c| rank(c)).collect::<Vec<_>>())
        .unwrap()
        .into_iter()
        .collect()
}

fn inv(c: char) -> char {
    if c.is_ascii_lowercase() {
        c.to_ascii_uppercase()
    } else {
        c.to_ascii_lowercase()
    }
}

fn spell(blocks: &[(char, usize)]) -> String {
    blocks.iter().map(|&(c, e)| c.to_string().repeat(e)).collect()
}

fn word(s: &str) -> CyclicWord {
    parse_word(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn torus_si(s: &str) -> torsi::SiValue {
    self_intersection(&word(s), &SurfaceOrder::TORUS)
}

fn torus_max(l: usize) -> u64 {
    let l = l as u64;
    if l.is_multiple_of(2) {
        (l - 2) * (l - 2) / 4
    } else {
        (l - 1) * (l - 3) / 4
    }
}

/// Torus census for lengths 1..12, rendered as CSV and parsed back. Computed once.
fn census_rows() -> &'static [SiHistogram] {
    static ROWS: OnceLock<Vec<SiHistogram>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let csv = census::emit_table(12, Surface::Torus, TableFormat::Csv);
        census::parse_table_csv(&csv, "torus").expect("census csv parses")
    })
}

fn criterion_1(rows: &[SiHistogram]) -> Outcome {
    if rows.len() != TORUS_TABLE.len() {
        return Err(format!("{} rows, expected 12", rows.len()));
    }
    for (row, want) in rows.iter().zip(TORUS_TABLE) {
        if row.counts != want {
            return Err(format!("length {}: {:?} != {:?}", row.length, row.counts, want));
        }
    }
    Ok("12 rows, every cell exact".into())
}

fn criterion_2() -> Outcome {
    let e = 1..=4usize;
    let mut checks = 0;
    let mut expect = |what: String, got: u64, want: u64| -> Result<(), String> {
        checks += 1;
        if got == want {
            Ok(())
        } else {
            Err(format!("{what}: {got} != {want}"))
        }
    };
    for i in e.clone() {
        for j in e.clone() {
            let w = spell(&[('a', i), ('b', j)]);
            expect(format!("SI {w}"), torus_si(&w).value, ((i - 1) * (j - 1)) as u64)?;
            for m in e.clone() {
                for n in e.clone() {
                    let v = spell(&[('a', m), ('B', n)]);
                    let got = intersection_number(&word(&w), &word(&v), &SurfaceOrder::TORUS).map_err(|x| x.to_string())?;
                    expect(format!("IN {w},{v}"), got, (i * n + m * j) as u64)?;
                }
            }
            for k in e.clone() {
                for l in e.clone() {
                    let w = spell(&[('a', i), ('b', j), ('a', k), ('b', l)]);
                    let base = ((i + k - 2) * (j + l - 2)) as u64;
                    let si = torus_si(&w);
                    if (i, j) != (k, l) {
                        let want = base + i.abs_diff(k) as u64 + j.abs_diff(l) as u64 - 1;
                        if !si.is_exact() {
                            return Err(format!("SI {w} should be exact"));
                        }
                        expect(format!("SI {w}"), si.value, want)?;
                    } else {
                        let within = u64::from(si.value <= base + 1);
                        expect(format!("SI {w} = {} within the bound {}", si.value, base + 1), within, 1)?;
                        if i == 1 || j == 1 {
                            expect(format!("SI {w} (square)"), si.value, 1)?;
                            let note = extremal::exact_square_si(&word(&w));
                            expect(format!("exact note {w}"), note.unwrap_or(0), 1)?;
                        }
                    }
                    for m in e.clone() {
                        for n in e.clone() {
                            let v = spell(&[('a', m), ('B', n)]);
                            let (wc, vc) = (word(&w), word(&v));
                            let got = if wc.is_primitive() {
                                intersection_number(&wc, &vc, &SurfaceOrder::TORUS)
                            } else {
                                count_linked_pairs_between(&wc, &vc, &SurfaceOrder::TORUS)
                            }
                            .map_err(|x| x.to_string())?;
                            expect(format!("IN {w},{v}"), got, ((i + k) * n + m * (j + l)) as u64)?;
                        }
                    }
                    let w = spell(&[('a', i), ('b', j), ('a', k), ('B', l)]);
                    expect(format!("SI {w}"), torus_si(&w).value, ((i + k - 1) * (j + l - 1)) as u64)?;
                    let w = spell(&[('a', i), ('b', j), ('A', k), ('B', l)]);
                    expect(format!("SI {w}"), torus_si(&w).value, ((i + k - 1) * (j + l - 1) - 1) as u64)?;
                    for m in e.clone() {
                        for n in e.clone() {
                            let w = spell(&[('a', i), ('b', j), ('a', k), ('b', l), ('a', m), ('B', n)]);
                            let want = (i + k + m - 1) * (j + l + n - 1) - 2 * (k + j.min(l) - 1);
                            expect(format!("SI {w}"), torus_si(&w).value, want as u64)?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checks} closed-form checks over exponents 1..4"))
}

/// Letter pairs `(r, s)` with `r` from one family and `s` from the other, both role assignments.
fn role_pairs() -> Vec<(char, char)> {
    let mut out = Vec::new();
    for r in ['a', 'A'] {
        for s in ['b', 'B'] {
            out.push((r, s));
            out.push((s, r));
        }
    }
    out
}

fn shape_set(words: impl IntoIterator<Item = String>) -> BTreeSet<String> {
    words.into_iter().map(|w| canon(&w)).collect()
}

/// Maximal words as listed by the classification for length `l`.
fn maximal_shapes(l: usize) -> BTreeSet<String> {
    let mut out = Vec::new();
    for (r, s) in role_pairs() {
        let big_s = inv(s);
        if l.is_multiple_of(2) {
            let h = l / 2;
            out.push(spell(&[(r, h), (s, h)]));
            for i in 1..h {
                for j in 1..h {
                    out.push(spell(&[(r, i), (s, j), (r, h - i), (big_s, h - j)]));
                }
            }
        } else {
            let (hi, lo) = (l.div_ceil(2), (l - 1) / 2);
            out.push(spell(&[(r, hi), (s, lo)]));
            for (p, q) in [(hi, lo), (lo, hi)] {
                for i in 1..p {
                    for j in 1..q {
                        out.push(spell(&[(r, i), (s, j), (r, p - i), (big_s, q - j)]));
                    }
                }
            }
        }
    }
    shape_set(out)
}

/// Words one below the maximum, as listed by the classification for length `l`.
fn submaximal_shapes(l: usize) -> BTreeSet<String> {
    let mut out = Vec::new();
    let four = |out: &mut Vec<String>, r: char, s: char, third: char, fourth: char, sums: &[usize]| {
        for &rk in sums {
            for i in 1..rk {
                for j in 1..(l - rk) {
                    out.push(spell(&[(r, i), (s, j), (third, rk - i), (fourth, l - rk - j)]));
                }
            }
        }
    };
    for (r, s) in role_pairs() {
        let (big_r, big_s) = (inv(r), inv(s));
        if l % 2 == 1 {
            four(&mut out, r, s, big_r, big_s, &[(l - 1) / 2, l.div_ceil(2)]);
        } else {
            out.push(spell(&[(r, l / 2 - 1), (s, l / 2 + 1)]));
            four(&mut out, r, s, big_r, big_s, &[l / 2]);
            four(&mut out, r, s, r, big_s, &[l / 2 - 1, l / 2 + 1]);
        }
    }
    shape_set(out)
}

fn max_count_formula(l: usize) -> u64 {
    let l = l as u64;
    if l.is_multiple_of(2) {
        (l - 2) * (l - 2) + 4
    } else {
        2 * (l - 1) * (l - 3) + 8
    }
}

fn submax_count_formula(l: usize) -> u64 {
    let l = l as u64;
    if l.is_multiple_of(2) {
        5 * (l - 2) * (l - 2) / 2
    } else {
        (l - 1) * (l - 3)
    }
}

fn criterion_3() -> Outcome {
    for l in 4..=14usize {
        let top = torus_max(l);
        let (maxw, subw) = fold_words(
            l,
            true,
            || (BTreeSet::new(), BTreeSet::new()),
            |acc: &mut (BTreeSet<String>, BTreeSet<String>), w| {
                let si = self_intersection(&w, &SurfaceOrder::TORUS).value;
                if si > top {
                    acc.0.insert(format!("!{w}"));
                } else if si == top {
                    acc.0.insert(w.to_string());
                } else if si + 1 == top {
                    acc.1.insert(w.to_string());
                }
            },
            |mut a, b| {
                a.0.extend(b.0);
                a.1.extend(b.1);
                a
            },
        );
        if let Some(bad) = maxw.iter().find(|w| w.starts_with('!')) {
            return Err(format!("L={l}: {} exceeds the maximum {top}", &bad[1..]));
        }
        if maxw.len() as u64 != max_count_formula(l) {
            return Err(format!("L={l}: {} maximal words, expected {}", maxw.len(), max_count_formula(l)));
        }
        if subw.len() as u64 != submax_count_formula(l) {
            return Err(format!("L={l}: {} submaximal words, expected {}", subw.len(), submax_count_formula(l)));
        }
        if maxw != maximal_shapes(l) {
            return Err(format!("L={l}: maximal words differ from the listed shapes"));
        }
        if subw != submaximal_shapes(l) {
            return Err(format!("L={l}: submaximal words differ from the listed shapes"));
        }
    }
    for l in 4..=30usize {
        let lib = [
            ("count_maximal", extremal::count_maximal(l), max_count_formula(l)),
            ("maximal_words", extremal::maximal_words(l).len() as u64, max_count_formula(l)),
            ("count_submaximal", extremal::count_submaximal(l), submax_count_formula(l)),
            ("submaximal_words", extremal::submaximal_words(l).len() as u64, submax_count_formula(l)),
            ("listed maximal shapes", maximal_shapes(l).len() as u64, max_count_formula(l)),
            ("listed submaximal shapes", submaximal_shapes(l).len() as u64, submax_count_formula(l)),
        ];
        for (what, got, want) in lib {
            if got != want {
                return Err(format!("L={l}: {what} = {got}, expected {want}"));
            }
        }
        let lib_max: BTreeSet<String> = extremal::maximal_words(l).iter().map(|w| w.to_string()).collect();
        if lib_max != maximal_shapes(l) {
            return Err(format!("L={l}: generated maximal words differ from the listed shapes"));
        }
    }
    Ok("census sets and counts for L 4..14, generator sizes for L 4..30".into())
}

struct Tally {
    checks: u64,
    words: u64,
}

fn exact_si(w: &CyclicWord) -> Option<u64> {
    self_intersection(w, &SurfaceOrder::TORUS).exact_value()
}

fn surgery_invariants(w: &CyclicWord, t: &mut Tally) -> Result<(), String> {
    let torus = SurfaceOrder::TORUS;
    let h = w.block_pairs();
    let si = exact_si(w);
    t.words += 1;
    let mut check = |ok: bool, what: &dyn Fn() -> String| {
        t.checks += 1;
        if ok {
            Ok(())
        } else {
            Err(what())
        }
    };
    for pair in find_opposite_corner_pairs(w) {
        let at = (pair.site1.position, pair.site2.position);
        match pair.orientation {
            Orientation::Reversed => {
                let v = surgery_reversed(w, &pair).map_err(|e| e.to_string())?;
                check(v.alpha() == w.alpha() && v.beta() == w.beta(), &|| format!("{w} {at:?} → {v}: letter counts"))?;
                check(v.block_pairs() + 1 == h, &|| format!("{w} {at:?} → {v}: block-pairs"))?;
                if let (Some(a), Some(b)) = (si, exact_si(&v)) {
                    check(b > a, &|| format!("{w} {at:?} → {v}: SI {a} → {b}"))?;
                }
            }
            Orientation::Same => {
                let mw = surgery_same(w, &pair).map_err(|e| e.to_string())?;
                check(mw.alpha() == w.alpha() && mw.beta() == w.beta(), &|| format!("{w} {at:?} → {mw}: letter counts"))?;
                check(mw.block_pairs() + 1 == h, &|| format!("{w} {at:?} → {mw}: block-pairs"))?;
                let split_si = multiword_si(&mw, &torus).ok();
                if let (Some(a), Some(b)) = (si, split_si) {
                    check(b > a, &|| format!("{w} {at:?} → {mw}: SI {a} → {b}"))?;
                }
                let [c0, c1] = mw.components() else {
                    return Err(format!("{w} {at:?}: {} components", mw.components().len()));
                };
                for i in 0..c0.len() {
                    for j in 0..c1.len() {
                        let Ok(v) = surgery_merge(&mw, i, j) else { continue };
                        check(v.alpha() == w.alpha() && v.beta() == w.beta(), &|| format!("{mw} ({i},{j}) → {v}: letter counts"))?;
                        check(v.block_pairs() + 1 == mw.block_pairs(), &|| format!("{mw} ({i},{j}) → {v}: block-pairs"))?;
                        if let (Some(a), Some(b)) = (split_si, exact_si(&v)) {
                            check(b > a, &|| format!("{mw} ({i},{j}) → {v}: SI {a} → {b}"))?;
                        }
                    }
                }
            }
        }
    }
    if h > 0 {
        let trace = reduce_to_two_blockpairs(w).map_err(|e| format!("{w}: {e}"))?;
        let f = &trace.final_word;
        check(f.block_pairs() <= 2 && f.alpha() == w.alpha() && f.beta() == w.beta(), &|| format!("{w} reduces to {f}"))?;
        if let (Some(a), Some(b)) = (si, exact_si(f)) {
            check(b as i64 >= a as i64 + h as i64 - 2, &|| format!("{w} → {f}: SI {a} → {b} with h = {h}"))?;
        }
    }
    Ok(())
}

fn random_reduced(rng: &mut StdRng, len: usize) -> String {
    loop {
        let mut s: Vec<char> = Vec::with_capacity(len);
        while s.len() < len {
            let c = ['a', 'b', 'A', 'B'][rng.gen_range(0..4)];
            if s.last().is_some_and(|&p| p == inv(c)) {
                continue;
            }
            s.push(c);
        }
        if len == 1 || s[0] != inv(s[len - 1]) {
            return s.into_iter().collect();
        }
    }
}

fn criterion_4() -> Outcome {
    let mut t = Tally { checks: 0, words: 0 };
    for l in 1..=10 {
        for w in torsi::enumerate_words(l, false) {
            surgery_invariants(&w, &mut t)?;
        }
    }
    let exhaustive = t.words;
    let mut rng = StdRng::seed_from_u64(20_240_601);
    let mut sampled = 0;
    while sampled < 10_000 {
        let len = rng.gen_range(2..=12);
        let w = word(&random_reduced(&mut rng, len));
        if find_opposite_corner_pairs(&w).is_empty() {
            continue;
        }
        surgery_invariants(&w, &mut t)?;
        sampled += 1;
    }
    Ok(format!("{exhaustive} words up to length 10 and {sampled} random words, {} checks, 0 violations", t.checks))
}

fn criterion_5(rows: &[SiHistogram]) -> Outcome {
    for k in 1..=25u64 {
        let want = (2.0 * (k as f64).sqrt() + 2.0).ceil() as usize;
        let lib = extremal::min_length_for_si(k);
        let by_formula = (2..).find(|&l| torus_max(l) >= k).unwrap();
        let by_census = rows
            .iter()
            .find(|r| r.counts.len() as u64 > k)
            .map(|r| r.length)
            .ok_or_else(|| format!("k={k}: no census row reaches SI {k}"))?;
        if lib != want || by_formula != want || by_census != want {
            return Err(format!("k={k}: ceiling {want}, library {lib}, formula {by_formula}, census {by_census}"));
        }
        let row = &rows[want - 1];
        if row.counts[k as usize] == 0 {
            return Err(format!("k={k}: no class of length {want} has SI exactly {k}"));
        }
    }
    Ok("k = 1..25".into())
}

fn pants_max(l: usize) -> u64 {
    let l = l as u64;
    match l {
        2 => 1,
        _ if l % 2 == 1 => (l * l - 1) / 4,
        _ if l.is_multiple_of(4) => l * l / 4 - 1,
        _ => l * l / 4 - 2,
    }
}

fn criterion_6() -> Outcome {
    let order = census::locate_pants_ring().map_err(|e| e.to_string())?;
    let mut notes = vec![format!("ring {order}")];
    for l in 1..=15usize {
        let start = Instant::now();
        let ext = census::extremes_with_order(l, &order);
        if ext.max_si != pants_max(l) {
            return Err(format!("L={l}: max SI {} expected {}", ext.max_si, pants_max(l)));
        }
        let min = if l <= 2 { 0 } else { (l / 2) as u64 };
        if ext.min_si != min {
            return Err(format!("L={l}: min SI {} expected {min}", ext.min_si));
        }
        let got: BTreeSet<String> = ext.max_words.iter().map(|w| w.to_string()).collect();
        if l % 2 == 1 && l >= 3 {
            let n = (l - 1) / 2;
            let want: BTreeSet<String> = [('a', 'B'), ('B', 'a'), ('A', 'b'), ('b', 'A')]
                .iter()
                .map(|&(r, s)| canon(&format!("{r}{}", format!("{r}{s}").repeat(n))))
                .collect();
            if got != want {
                return Err(format!("L={l}: maximal words {got:?}, expected {want:?}"));
            }
        } else if l == 2 {
            if ext.max_count != 2 {
                return Err(format!("L=2: {} maximal words, expected 2", ext.max_count));
            }
        } else if l >= 4 {
            let all = census::all_word_maximum(l, &order);
            let want_si = (l * l / 4 + l / 2 - 1) as u64;
            let want: BTreeSet<String> = ["aB", "Ab"].iter().map(|p| canon(&p.repeat(l / 2))).collect();
            let got: BTreeSet<String> = all.max_words.iter().map(|w| w.to_string()).collect();
            if all.max_si != want_si || got != want {
                return Err(format!("L={l}: all-word maximum {} at {got:?}, expected {want_si} at {want:?}", all.max_si));
            }
        }
        if l >= 14 {
            notes.push(format!("L={l} in {:.1}s", start.elapsed().as_secs_f64()));
        }
    }
    Ok(format!("L 1..15, {}", notes.join(", ")))
}

fn relabelings() -> Vec<[char; 4]> {
    // images of a, b, A, B
    let rotate = |m: [char; 4]| m.map(|c| match c {
        'a' => 'b',
        'b' => 'A',
        'A' => 'B',
        _ => 'a',
    });
    let mut out = Vec::new();
    for start in [['a', 'b', 'A', 'B'], ['b', 'a', 'B', 'A']] {
        let mut m = start;
        for _ in 0..4 {
            out.push(m);
            m = rotate(m);
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let maps = relabelings();
    let mut checks = 0u64;
    for l in 1..=8 {
        for w in torsi::enumerate_words(l, false) {
            let text = w.to_string();
            let si = self_intersection(&w, &SurfaceOrder::TORUS);
            let inverse: String = text.chars().rev().map(inv).collect();
            if torus_si(&inverse) != si {
                return Err(format!("{text}: inverse {inverse} has SI {}, not {si}", torus_si(&inverse)));
            }
            for m in &maps {
                let image: String = text.chars().map(|c| m[rank(c) as usize]).collect();
                if torus_si(&image) != si {
                    return Err(format!("{text}: image {image} has SI {}, not {si}", torus_si(&image)));
                }
            }
            checks += 1 + maps.len() as u64;
        }
    }
    Ok(format!("{checks} comparisons for L ≤ 8"))
}

fn criterion_8(rows: &[SiHistogram]) -> Outcome {
    let mut ratios = Vec::new();
    for row in &rows[7..12] {
        let l = row.length;
        let expected = 3f64.powi(l as i32) / l as f64;
        let ratio = row.total as f64 / expected;
        if (ratio - 1.0).abs() > 0.25 {
            return Err(format!("L={l}: total {} vs 3^L/L = {expected:.0}", row.total));
        }
        ratios.push(format!("{ratio:.3}"));
    }
    for (l, want) in [(5, 16), (7, 24), (11, 40)] {
        if rows[l - 1].count(0) != want {
            return Err(format!("L={l}: {} simple classes, expected {want}", rows[l - 1].count(0)));
        }
    }
    Ok(format!("total/(3^L/L) for L 8..12: {}", ratios.join(" ")))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("torus census table", Box::new(|| criterion_1(census_rows()))),
        ("closed-form intersection numbers", Box::new(criterion_2)),
        ("extremal words", Box::new(criterion_3)),
        ("surgery invariants", Box::new(criterion_4)),
        ("minimal length for SI", Box::new(|| criterion_5(census_rows()))),
        ("pants tables", Box::new(criterion_6)),
        ("symmetry", Box::new(criterion_7)),
        ("growth trend", Box::new(|| criterion_8(census_rows()))),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {why}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
