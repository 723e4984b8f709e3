//! Exact arithmetic substrate: rationals, log-domain values, binary words,
//! dyadic intervals and outward-rounded float intervals.

mod bits;
mod interval;
mod log2value;
mod rational;

pub use bits::{pi_map, BitWord, DyadicInterval};
pub use interval::{log2_bounds, pow2_f64, pow2_neg, Interval};
pub use log2value::{log2_compare, Log2Value};
pub(crate) use log2value::pow2_neg as pow2_neg_exact;
pub use rational::{ceil_mul, Rational};
pub(crate) use rational::{biguint_pow, to_biguint};
