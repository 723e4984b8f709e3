//! The dimension-controlling tree: schedule recursion, membership, split
//! counts and the dilution map with its inverse.

mod dilution;
mod schedule;

pub use schedule::{build_schedule, conditions_at, Conditions, RSequence, ScheduleRow, TreeSchedule};
