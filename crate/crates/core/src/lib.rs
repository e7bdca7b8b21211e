//! Exact self-intersection numbers for free homotopy classes of curves on the
//! punctured torus (and, with a different boundary ring, the pair of pants),
//! computed from reduced cyclic words in `a, b, A, B`.

pub mod census;
pub mod extremal;
pub mod linking;
pub mod surgery;
pub mod verify;
pub mod word;

pub use census::{enumerate_words, si_histogram, CensusError, PantsExtremes, SiHistogram, TableFormat};
pub use extremal::{BoundKind, BoundReport, ClosedForm, ExtremalError, PairShape, Shape, Surface};
pub use linking::{
    classify_pair, count_linked_pairs, count_linked_pairs_between, intersection_number, linked_pairs, multiword_si, self_intersection, similarly_oriented, Exactness,
    LinkError, LinkedPair, Occurrence, PairKind, SiValue, SurfaceOrder,
};
pub use surgery::{
    find_opposite_corner_pairs, reduce_to_two_blockpairs, surgery_merge, surgery_reversed, surgery_same, CornerSite,
    OppositeCornerPair, Orientation, ReductionTrace, SiteKind, SurgeryError,
};
pub use word::{parse_word, Block, BlockDecomposition, CyclicWord, Family, Letter, LinearWord, MultiWord, PowerDecomposition, WordError};
