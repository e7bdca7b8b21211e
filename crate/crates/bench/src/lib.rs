//! Fixtures shared by the benchmarks under `benches/`.

use torsi::CyclicWord;

/// Primitive words of lengths 12, 24 and 48 mixing all four letters.
pub const MIXED: [&str; 3] = [
    "abbAABBaaabb",
    "abbAABBaaabAAABaaabAAABB",
    "abbAABBaaabAAABaaabAAABBBabbABaaabAAABBabbbABBab",
];

pub fn mixed_words() -> Vec<CyclicWord> {
    MIXED.iter().map(|s| torsi::parse_word(s).expect("fixture is cyclically reduced")).collect()
}
