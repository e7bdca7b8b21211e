//! Linked-pair counting against direct enumeration, plus bounds the counts must respect.

use torsi::extremal::{bound_report, torus_max_si};
use torsi::linking::linked_pairs_between;
use torsi::{
    classify_pair, count_linked_pairs, count_linked_pairs_between, enumerate_words, intersection_number,
    linked_pairs, parse_word, self_intersection, CyclicWord, Letter, LinkError, Occurrence, SurfaceOrder,
};

const ORDERS: [SurfaceOrder; 2] = [SurfaceOrder::TORUS, SurfaceOrder::PANTS];

#[test]
fn gap_counter_equals_enumeration() {
    for order in &ORDERS {
        for l in 1..=9 {
            for w in enumerate_words(l, true) {
                assert_eq!(count_linked_pairs(&w, order), linked_pairs(&w, order).len() as u64, "{w} on {order}");
            }
        }
    }
}

#[test]
fn intersection_counter_equals_enumeration() {
    let words: Vec<CyclicWord> = (1..=4).flat_map(|l| enumerate_words(l, true)).collect();
    for order in &ORDERS {
        for v in &words {
            for w in &words {
                let fast = count_linked_pairs_between(v, w, order);
                if *w == *v || *w == v.inverse() {
                    assert!(matches!(fast, Err(LinkError::CapExceeded { .. })), "{v}, {w}: {fast:?}");
                    continue;
                }
                let slow = linked_pairs_between(v, w, order).unwrap();
                assert_eq!(fast, Ok(slow.len() as u64), "{v}, {w} on {order}");
            }
        }
    }
}

#[test]
fn intersection_number_is_symmetric() {
    let words: Vec<CyclicWord> = (1..=5).flat_map(|l| enumerate_words(l, true)).collect();
    for v in &words {
        for w in &words {
            if let Ok(a) = intersection_number(v, w, &SurfaceOrder::TORUS) {
                assert_eq!(Ok(a), intersection_number(w, v, &SurfaceOrder::TORUS), "{v}, {w}");
                assert_eq!(Ok(a), intersection_number(&v.inverse(), w, &SurfaceOrder::TORUS), "{v}, {w}");
            }
        }
    }
}

/// Linked occurrences of a primitive word never need more than `L + 1` letters.
#[test]
fn linked_pairs_are_short() {
    for l in 1..=10 {
        for w in enumerate_words(l, true) {
            for p in linked_pairs(&w, &SurfaceOrder::TORUS) {
                assert!(p.first.len <= l + 1, "{w}: {p:?}");
            }
        }
    }
}

#[test]
fn classification_is_symmetric() {
    for l in 2..=7 {
        for w in enumerate_words(l, true) {
            for len in 2..=l + 2 {
                for s1 in 0..l {
                    for s2 in 0..l {
                        if s1 == s2 {
                            continue;
                        }
                        let (o1, o2) = (Occurrence::new(0, s1, len), Occurrence::new(0, s2, len));
                        let ab = classify_pair(&w, o1, &w, o2, &SurfaceOrder::TORUS).unwrap();
                        let ba = classify_pair(&w, o2, &w, o1, &SurfaceOrder::TORUS).unwrap();
                        assert_eq!(ab.map(|p| p.kind), ba.map(|p| p.kind), "{w} {o1:?} {o2:?}");
                    }
                }
            }
        }
    }
}

/// On the torus an occurrence spelled `r s … s R` with `r ≠ s` is never linked.
#[test]
fn corner_occurrences_never_link() {
    let corner = |u: &[Letter]| {
        let n = u.len();
        n >= 4 && u[0] != u[1] && u[n - 2] == u[1] && u[n - 1] == u[0].inverse()
    };
    for l in 1..=8 {
        for w in enumerate_words(l, true) {
            for p in linked_pairs(&w, &SurfaceOrder::TORUS) {
                assert!(!corner(&p.first.letters(&w)), "{w}: {p:?}");
                assert!(!corner(&p.second.letters(&w)), "{w}: {p:?}");
            }
        }
    }
}

#[test]
fn bounds_hold_through_length_12() {
    for l in 1..=12usize {
        let length_bound = if l % 2 == 0 { (l as i64 - 2).pow(2) / 4 } else { (l as i64 - 1) * (l as i64 - 3) / 4 };
        for w in enumerate_words(l, true) {
            if w.is_pure_power() {
                continue;
            }
            let si = self_intersection(&w, &SurfaceOrder::TORUS).value as i64;
            let general = (w.alpha() as i64 - 1) * (w.beta() as i64 - 1);
            let h = w.block_pairs() as i64;
            let mut tightest = general.min(length_bound);
            assert!(si <= general && si <= length_bound, "{w}: SI {si}");
            if h >= 2 {
                assert!(si <= general - h + 2, "{w}: SI {si} with h = {h}");
                tightest = tightest.min(general - h + 2);
            }
            let r = bound_report(&w).unwrap();
            assert_eq!((r.si as i64, r.bound, r.slack), (si, tightest, tightest - si), "{w}");
        }
    }
}

/// From length 7 on, the length bound also covers proper powers.
#[test]
fn length_bound_covers_all_words_from_seven() {
    for l in 7..=11 {
        let top = torus_max_si(l);
        for w in enumerate_words(l, false) {
            assert!(self_intersection(&w, &SurfaceOrder::TORUS).value <= top, "{w}");
        }
    }
}

#[test]
fn pure_powers() {
    for order in &ORDERS {
        for l in 1..=9 {
            for c in ["a", "b", "A", "B"] {
                let w = parse_word(&c.repeat(l)).unwrap();
                let si = self_intersection(&w, order);
                assert!(si.is_exact());
                assert_eq!(si.value, l as u64 - 1);
            }
        }
    }
}
