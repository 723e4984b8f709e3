use serde::Serialize;

use super::profile::{PiecewiseGauge, TailRule};
use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Outcome of an eventual-domination query `f ≤* x^r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum DominationVerdict {
    Holds,
    /// Depths `n` with `E(n) < r·n`; never empty.
    FailsWithWitnesses(Vec<u64>),
    UnknownAtHorizon(u64),
}

impl DominationVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, DominationVerdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, DominationVerdict::FailsWithWitnesses(_))
    }
}

/// Outcome of the `∀ r < s: f ≤* x^r` test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DlessVerdict {
    Holds,
    Fails { r: Rational, witnesses: Vec<u64> },
    UnknownAtHorizon { horizon: u64 },
}

/// How many witnesses a failing verdict reports.
const WITNESS_COUNT: usize = 8;
/// Generated tails are searched no deeper than this.
const WITNESS_DEPTH_CAP: u64 = 2_000_000;

/// Least `n` in `[lo, hi]` within one linear piece where `E(n) < r·n`.
///
/// On the piece, `E(n) − r·n = c + d·(n − a)` with `c = E(a) − r·a`, `d = slope − r`.
fn least_in_piece(a: u64, e_a: &Rational, slope: &Rational, r: &Rational, lo: u64, hi: u64) -> Option<u64> {
    if lo > hi {
        return None;
    }
    let c = e_a - &(r * &Rational::from(a));
    let d = slope - r;
    let g = |n: u64| &c + &(&d * &Rational::from(n - a));
    if g(lo).is_negative() {
        return Some(lo);
    }
    if !d.is_negative() {
        return None;
    }
    // g(n) < 0  <=>  n > a + c/(-d)
    let cut = Rational::from(a) + &c / &(-d);
    let n = cut.floor() + num_bigint::BigInt::from(1);
    let n: u64 = num_traits::ToPrimitive::to_u64(&n)?;
    (n >= lo && n <= hi).then_some(n)
}

/// Least depth `n ∈ [from, to]` with `E(n) < r·n`, using only stored blocks.
fn scan_stored(g: &PiecewiseGauge, r: &Rational, from: u64, to: u64) -> Option<u64> {
    g.blocks().find_map(|b| {
        let lo = from.max(b.start);
        let hi = b.end.map_or(to, |e| to.min(e - 1));
        least_in_piece(b.start, b.start_value, b.slope, r, lo, hi)
    })
}

/// The least witness in each stored block that has one, up to `limit`.
fn witnesses_per_block(g: &PiecewiseGauge, r: &Rational, to: u64, limit: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for b in g.blocks() {
        if out.len() >= limit || b.start > to {
            break;
        }
        let hi = b.end.map_or(to, |e| to.min(e - 1));
        if let Some(n) = least_in_piece(b.start, b.start_value, b.slope, r, b.start, hi) {
            out.push(n);
            if b.end.is_none() {
                // an open-ended power block: list consecutive witnesses
                out.extend((n + 1..).take(limit.saturating_sub(out.len())));
            }
        }
    }
    out.truncate(limit);
    out
}

/// Least `n ∈ [start, start + budget]` with `f(2^-n) > 2^(-r·n)`, i.e. `E(n) < r·n`.
pub fn find_witness(f: &PiecewiseGauge, r: &Rational, start: u64, budget: u64) -> Result<u64> {
    let from = start.max(f.start_depth());
    let to = start.saturating_add(budget);
    if !matches!(f.tail_rule(), Some(TailRule::Separating { .. })) {
        return scan_stored(f, r, from, to).ok_or(Error::WitnessBudgetExhausted { from: start, to });
    }
    // generate the tail lazily: generated blocks past `reach` are never scanned
    let mut reach = from.max(f.horizon()).saturating_mul(2).min(to);
    loop {
        let g = f.extended_to(reach);
        if let Some(n) = scan_stored(&g, r, from, reach) {
            return Ok(n);
        }
        if reach >= to {
            return Err(Error::WitnessBudgetExhausted { from: start, to });
        }
        reach = reach.saturating_mul(2).min(to);
    }
}

/// Decides whether `E(n) ≥ r·n` for all large `n`, i.e. `f ≤* x^r` near 0.
pub fn dominated_eventually(f: &PiecewiseGauge, r: &Rational) -> DominationVerdict {
    let horizon = f.horizon();
    let Some(limit) = f.limit_exponent() else {
        return DominationVerdict::UnknownAtHorizon(horizon);
    };
    if limit > r {
        return DominationVerdict::Holds;
    }
    match f.tail_rule() {
        None => {
            if limit < r {
                let w = witnesses_per_block(f, r, horizon, WITNESS_COUNT);
                if !w.is_empty() {
                    return DominationVerdict::FailsWithWitnesses(w);
                }
            }
            DominationVerdict::UnknownAtHorizon(horizon)
        }
        Some(TailRule::Power) => {
            // last block is x^limit up to a constant; E(n) − r·n is eventually monotone
            let w = witnesses_per_block(f, r, u64::MAX, WITNESS_COUNT);
            let last = f.blocks().last().unwrap();
            let tail_fails = least_in_piece(last.start, last.start_value, last.slope, r, last.start, u64::MAX).is_some();
            if tail_fails {
                DominationVerdict::FailsWithWitnesses(w)
            } else {
                DominationVerdict::Holds
            }
        }
        Some(TailRule::Separating { .. }) => {
            if limit == r {
                // every slope exceeds the limit, so E(n) − r·n never decreases past the start
                let start = f.start_depth();
                let e0 = f.eval_log(start).unwrap();
                return if e0 >= r * &Rational::from(start) {
                    DominationVerdict::Holds
                } else {
                    DominationVerdict::UnknownAtHorizon(horizon)
                };
            }
            let g = extend_until_witnesses(f, r);
            let w = witnesses_per_block(&g, r, g.horizon(), WITNESS_COUNT);
            if w.is_empty() {
                DominationVerdict::UnknownAtHorizon(g.horizon())
            } else {
                DominationVerdict::FailsWithWitnesses(w)
            }
        }
    }
}

/// Generates tail blocks until the slope drops below `r` and a few witnesses
/// are in range, or the depth cap is hit.
fn extend_until_witnesses(f: &PiecewiseGauge, r: &Rational) -> PiecewiseGauge {
    let mut depth = f.horizon().max(64);
    loop {
        let g = f.extended_to(depth).into_owned();
        let found = witnesses_per_block(&g, r, g.horizon(), WITNESS_COUNT).len();
        if found >= WITNESS_COUNT || depth >= WITNESS_DEPTH_CAP {
            return g;
        }
        depth = (depth * 2).min(WITNESS_DEPTH_CAP);
    }
}

/// The Dless criterion: `f ≤* x^r` for every `r ∈ (0, s)`.
pub fn classify_dless(f: &PiecewiseGauge, s: &Rational) -> DlessVerdict {
    let Some(limit) = f.limit_exponent().cloned() else {
        return DlessVerdict::UnknownAtHorizon { horizon: f.horizon() };
    };
    if f.tail_rule().is_none() {
        return DlessVerdict::UnknownAtHorizon { horizon: f.horizon() };
    }
    if limit >= *s {
        return DlessVerdict::Holds;
    }
    let r = (&limit + s) / Rational::from(2i64);
    match dominated_eventually(f, &r) {
        DominationVerdict::FailsWithWitnesses(witnesses) => DlessVerdict::Fails { r, witnesses },
        DominationVerdict::UnknownAtHorizon(h) => DlessVerdict::UnknownAtHorizon { horizon: h },
        DominationVerdict::Holds => unreachable!("limit below r cannot dominate"),
    }
}

/// Whether `liminf x^-1 f(x) > 0`. With slopes in `[0, 1]`, `n − E(n)` never
/// decreases, so this holds for every admissible gauge.
pub fn is_nontrivial_at_lebesgue(f: &PiecewiseGauge) -> Result<bool> {
    if !f.is_doubling_monotone() {
        return Err(Error::NotDoublingMonotone);
    }
    if f.tail_rule().is_none() {
        return Err(Error::Precondition("table-only gauge: behaviour past the horizon is unknown".into()));
    }
    Ok(true)
}

/// Whether `f ≰* x^r` for every `r ∈ (s, 1]`; `None` when the stored table
/// cannot decide it.
pub fn undominated_above(f: &PiecewiseGauge, s: &Rational) -> Option<bool> {
    let limit = f.limit_exponent()?;
    if limit > s {
        // any r strictly between s and the limit dominates
        return Some(false);
    }
    f.tail_rule()?;
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::construct_separating;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn power_domination() {
        assert_eq!(dominated_eventually(&PiecewiseGauge::power(q("7/10")), &q("3/5")), DominationVerdict::Holds);
        match dominated_eventually(&PiecewiseGauge::power(q("1/2")), &q("3/5")) {
            DominationVerdict::FailsWithWitnesses(w) => {
                assert_eq!(w[0], 1);
                for n in w {
                    assert!(Rational::from(n) * q("1/2") < Rational::from(n) * q("3/5"));
                }
            }
            v => panic!("{v:?}"),
        }
        // equal exponents: E(n) = r·n is never strictly below
        assert_eq!(dominated_eventually(&PiecewiseGauge::power(q("1/2")), &q("1/2")), DominationVerdict::Holds);
    }

    #[test]
    fn find_witness_examples() {
        assert_eq!(find_witness(&PiecewiseGauge::power(q("1/2")), &q("3/4"), 5, 100).unwrap(), 5);
        let err = find_witness(&PiecewiseGauge::power(q("2/5")), &q("2/5"), 17, 1000).unwrap_err();
        assert!(matches!(err, Error::WitnessBudgetExhausted { .. }));
    }

    #[test]
    fn find_witness_matches_linear_scan() {
        let f = construct_separating(&q("1/2"), 10).unwrap();
        let r = q("7/10");
        let w = find_witness(&f, &r, 0, 5000).unwrap();
        let brute = (0..=5000u64).find(|&n| f.eval_log(n).unwrap() < &r * &Rational::from(n)).unwrap();
        assert_eq!(w, brute);
    }

    #[test]
    fn separating_fails_for_r_above_s() {
        let f = construct_separating(&q("1/2"), 12).unwrap();
        match dominated_eventually(&f, &q("51/100")) {
            DominationVerdict::FailsWithWitnesses(w) => {
                assert!(!w.is_empty());
                for n in w {
                    assert!(f.eval_log(n).unwrap() < q("51/100") * Rational::from(n));
                }
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(dominated_eventually(&f, &q("1/2")), DominationVerdict::Holds);
    }

    #[test]
    fn find_witness_on_separating_gauge() {
        let f = construct_separating(&q("1/3"), 12).unwrap();
        let n = find_witness(&f, &q("2/5"), 1000, 100_000).unwrap();
        assert!(n >= 1000);
        assert!(f.eval_log(n).unwrap() < q("2/5") * Rational::from(n));
    }

    #[test]
    fn dless_examples() {
        let s = q("1/2");
        assert_eq!(classify_dless(&PiecewiseGauge::power(s.clone()), &s), DlessVerdict::Holds);
        match classify_dless(&PiecewiseGauge::power(q("1/4")), &s) {
            DlessVerdict::Fails { r, witnesses } => {
                assert_eq!(r, q("3/8"));
                assert!(!witnesses.is_empty());
            }
            v => panic!("{v:?}"),
        }
        let f = construct_separating(&s, 6).unwrap();
        assert_eq!(classify_dless(&f, &s), DlessVerdict::Holds);
    }

    #[test]
    fn table_gauges_are_unknown() {
        let g = PiecewiseGauge::table(vec![0, 10], vec![q("1"), q("1/2")], q("0")).unwrap();
        assert_eq!(dominated_eventually(&g, &q("3/5")), DominationVerdict::UnknownAtHorizon(10));
        assert!(is_nontrivial_at_lebesgue(&g).is_err());
    }

    #[test]
    fn lebesgue_nontriviality() {
        assert!(is_nontrivial_at_lebesgue(&PiecewiseGauge::power(q("1"))).unwrap());
        assert!(is_nontrivial_at_lebesgue(&PiecewiseGauge::power(q("1/2"))).unwrap());
        let bad = PiecewiseGauge::new(0, q("0"), vec![0], vec![q("6/5")], None, Some(TailRule::Power)).unwrap();
        assert_eq!(is_nontrivial_at_lebesgue(&bad), Err(Error::NotDoublingMonotone));
    }

    #[test]
    fn undominated_above_verdicts() {
        let s = q("1/2");
        assert_eq!(undominated_above(&construct_separating(&s, 4).unwrap(), &s), Some(true));
        assert_eq!(undominated_above(&PiecewiseGauge::power(s.clone()), &s), Some(true));
        assert_eq!(undominated_above(&PiecewiseGauge::power(q("3/4")), &s), Some(false));
    }
}
