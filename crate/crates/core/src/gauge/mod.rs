//! Gauge functions in log-domain piecewise-linear form, the separating gauge
//! generator, and domination queries.

mod domination;
mod profile;
mod separating;

pub use domination::{
    classify_dless, dominated_eventually, find_witness, is_nontrivial_at_lebesgue, undominated_above, DlessVerdict,
    DominationVerdict,
};
pub use profile::{Block, GaugeFile, PiecewiseGauge, TailRule};
pub use separating::{construct_separating, first_index, SeparatingBlock, SeparatingBlocks, Threshold};
