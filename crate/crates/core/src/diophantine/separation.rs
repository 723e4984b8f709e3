use serde::Serialize;

use super::jarnik::{jarnik_series, JarnikOptions, JarnikReport};
use crate::error::{Error, Result};
use crate::gauge::{
    classify_dless, construct_separating, dominated_eventually, find_witness, is_nontrivial_at_lebesgue,
    undominated_above, DlessVerdict, DominationVerdict,
};
use crate::numeric::Rational;

/// Search budget (in depths past the stored horizon) for the first witness.
pub const WITNESS_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessRow {
    pub r: Rational,
    /// Least depth beyond the stored blocks with `E(n) < r·n`.
    pub first_beyond_horizon: Option<u64>,
    /// Least witness in each of several blocks.
    pub witnesses: Vec<u64>,
    pub found: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyChecks {
    pub doubling_monotone: bool,
    pub lebesgue_nontrivial: bool,
    pub ratio_diverges: Option<bool>,
    pub undominated_above: Option<bool>,
    pub dless: DlessVerdict,
}

impl PropertyChecks {
    pub fn all_pass(&self) -> bool {
        self.doubling_monotone
            && self.lebesgue_nontrivial
            && self.ratio_diverges == Some(true)
            && self.undominated_above == Some(true)
            && self.dless == DlessVerdict::Holds
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub s: Rational,
    pub blocks: usize,
    pub breakpoints: Vec<u64>,
    pub slopes: Vec<Rational>,
    /// The series at exponent `2/s`; convergence is the small-side criterion.
    pub series: JarnikReport,
    /// Witnesses that `f` is not dominated by `x^r` for `r` above `s`.
    pub witness_table: Vec<WitnessRow>,
    pub properties: PropertyChecks,
    pub series_converges: bool,
    pub witnesses_found: bool,
}

/// Exponents above `s` probed for witnesses.
pub fn witness_grid(s: &Rational) -> Vec<Rational> {
    let one = Rational::one();
    let mut grid = vec![
        s + &Rational::new(1, 100),
        s + &Rational::new(1, 10),
        (s + &one) / Rational::from(2i64),
        one.clone(),
    ];
    grid.retain(|r| r > s && *r <= one);
    grid.sort();
    grid.dedup();
    grid
}

/// Builds the separating gauge for `s` and checks both sides of the separation.
pub fn separation_report(s: &Rational, blocks: usize) -> Result<SeparationReport> {
    if !(s.is_positive() && *s < Rational::one()) {
        return Err(Error::Precondition(format!("need 0 < s < 1, got {s}")));
    }
    let f = construct_separating(s, blocks)?;
    let t = Rational::from(2i64) / s;
    let series = jarnik_series(&f, &t, &JarnikOptions::default())?;
    let horizon = f.horizon();
    let witness_table: Vec<WitnessRow> = witness_grid(s)
        .into_iter()
        .map(|r| {
            let first_beyond_horizon = find_witness(&f, &r, horizon + 1, WITNESS_BUDGET).ok();
            let witnesses = match dominated_eventually(&f, &r) {
                DominationVerdict::FailsWithWitnesses(w) => w,
                _ => vec![],
            };
            let found = first_beyond_horizon.is_some() && !witnesses.is_empty();
            WitnessRow { r, first_beyond_horizon, witnesses, found }
        })
        .collect();
    let properties = PropertyChecks {
        doubling_monotone: f.is_doubling_monotone(),
        lebesgue_nontrivial: is_nontrivial_at_lebesgue(&f).unwrap_or(false),
        ratio_diverges: f.ratio_diverges(),
        undominated_above: undominated_above(&f, s),
        dless: classify_dless(&f, s),
    };
    let series_converges = series.verdict.converges();
    let witnesses_found = witness_table.iter().all(|w| w.found);
    Ok(SeparationReport {
        s: s.clone(),
        blocks,
        breakpoints: f.breakpoints().to_vec(),
        slopes: f.slopes().to_vec(),
        series,
        witness_table,
        properties,
        series_converges,
        witnesses_found,
    })
}
