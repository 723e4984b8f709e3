//! A computable upper-bound proxy for description length, the liminf-style
//! dimension estimator built on it, and the block codelength bound.

mod estimate;
mod lz;

pub use estimate::{
    codelength_bound, default_depths, estimate_dim, CodelengthBound, DimensionEstimate, DimensionRow, ESTIMATE_LABEL,
};
pub use lz::{lz_complexity, phrase_bits, phrase_count, phrase_starts, prefix_phrase_counts};
