use num_bigint::BigUint;
use serde::Serialize;

use super::lz::{phrase_bits, prefix_phrase_counts};
use crate::error::{Error, Result};
use crate::numeric::{log2_bounds, BitWord, Interval, Rational};
use crate::tree::TreeSchedule;

/// Label attached to every emitted dimension number.
pub const ESTIMATE_LABEL: &str = "proxy upper-bound estimate";

/// Default number of sampled prefix lengths.
const DEFAULT_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionRow {
    pub depth: usize,
    pub bits: u64,
    pub ratio: f64,
}

/// Per-prefix complexity bounds and their trailing-window minimum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub label: &'static str,
    pub rows: Vec<DimensionRow>,
    /// Rows with `depth ≥ stream length − window` enter the minimum.
    pub window: usize,
    pub estimate: f64,
}

/// Evenly spaced prefix lengths ending at `len`.
pub fn default_depths(len: usize) -> Vec<usize> {
    let step = len.div_ceil(DEFAULT_SAMPLES).max(1);
    (1..=len.div_ceil(step)).map(|k| (k * step).min(len)).collect()
}

/// Liminf-style dimension proxy: minimum of `bits/depth` over sampled depths
/// in the trailing window (default: the last quarter of the stream).
pub fn estimate_dim(stream: &BitWord, depths: Option<&[usize]>, window: Option<usize>) -> Result<DimensionEstimate> {
    let depths = match depths {
        Some(d) => d.to_vec(),
        None => default_depths(stream.len()),
    };
    if depths.is_empty() {
        return Err(Error::Empty("depth list"));
    }
    if depths.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition("depths must be sorted".into()));
    }
    let last = *depths.last().unwrap();
    if last > stream.len() {
        return Err(Error::Precondition(format!("depth {last} exceeds stream length {}", stream.len())));
    }
    let window = window.unwrap_or(stream.len() / 4);
    let counts = prefix_phrase_counts(stream, &depths);
    let rows: Vec<DimensionRow> = depths
        .iter()
        .zip(counts)
        .map(|(&depth, c)| {
            let bits = phrase_bits(c);
            let ratio = if depth == 0 { 0.0 } else { bits as f64 / depth as f64 };
            DimensionRow { depth, bits, ratio }
        })
        .collect();
    let from = stream.len().saturating_sub(window);
    let estimate = rows
        .iter()
        .filter(|r| r.depth >= from && r.depth > 0)
        .map(|r| r.ratio)
        .reduce(f64::min)
        .unwrap_or_else(|| rows.last().unwrap().ratio);
    Ok(DimensionEstimate { label: ESTIMATE_LABEL, rows, window, estimate })
}

/// The block-boundary codelength bound `r*_n·l_{n+1} + 2(n+1)·log₂ l_{n+1} + C`.
#[derive(Clone, Debug, Serialize)]
pub struct CodelengthBound {
    pub block: usize,
    pub l_next: u64,
    pub bits: Interval,
    /// `bits / l_{n+1}`.
    pub ratio: Interval,
    /// `r*_n + 2(log₂ l_{n+1} + 1)·log₂ l_{n+1} / l_{n+1}`, which dominates the
    /// ratio for `C = 0` and tends to the schedule's limit.
    pub limit_check: Interval,
}

pub fn codelength_bound(sch: &TreeSchedule, n: usize, c: &Rational) -> Result<CodelengthBound> {
    if n >= sch.blocks() {
        return Err(Error::ScheduleTooShort { len: n as u64 + 1, limit: sch.blocks() as u64 });
    }
    let l = sch.l[n + 1];
    let (lg_lo, lg_hi) = log2_bounds(&BigUint::from(l));
    let log_l = Interval::new(lg_lo.max(0.0), lg_hi);
    let head = Interval::from_rational(&(&sch.r_star[n] * &Rational::from(l) + c.clone()));
    let bits = head.add(&log_l.scale(2.0 * (n + 1) as f64));
    let inv_l = Interval::from_rational(&Rational::new(1, l));
    let ratio = bits.mul_nonneg(&inv_l);
    let overhead = log_l.add(&Interval::point(1.0)).mul_nonneg(&log_l).scale(2.0).mul_nonneg(&inv_l);
    let limit_check = Interval::from_rational(&sch.r_star[n]).add(&overhead);
    Ok(CodelengthBound { block: n, l_next: l, bits, ratio, limit_check })
}
