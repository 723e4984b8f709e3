//! Continued fractions, approximation witnesses, lacunary test vectors,
//! prefix revelation from a good rational approximation, the Jarník-type
//! series test, and the end-to-end separation report.

mod cf;
mod jarnik;
mod separation;
mod witness;

pub use cf::{
    cf_expand_digits, cf_expand_enclosure, cf_expand_rational, convergents, digits_enclosure, golden_digits, CfSource,
    ContinuedFraction,
};
pub use jarnik::{jarnik_series, JarnikOptions, JarnikReport, SeriesVerdict};
pub use separation::{
    separation_report, witness_grid, PropertyChecks, SeparationReport, WitnessRow, WITNESS_BUDGET,
};
pub use witness::{
    exponent_lower_bound, is_witness, liouville_digits, reveal_prefix, Decision, ExponentBound, GapSchedule,
    LiouvilleNumber, RealValue, Revelation,
};
