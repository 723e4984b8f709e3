//! Finite-depth gauge premeasures on Cantor space: cylinder tries, the
//! optimal-cover dynamic program, an exhaustive oracle, the pushforward
//! comparison through the tree, and transport to the unit interval.

mod brute;
mod premeasure;
mod trie;

pub use brute::{brute_force_premeasure, BRUTE_FORCE_MAX_COVERS, BRUTE_FORCE_MAX_DEPTH};
pub use premeasure::{
    map_to_unit_interval, premeasure, premeasure_within, pushforward_check, CoverResult, CoverTerm, PushforwardReport,
    COVER_WORD_CAP,
};
pub use trie::CylinderTrie;
