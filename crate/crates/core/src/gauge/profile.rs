use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use super::separating::SeparatingBlocks;
use crate::error::{Error, Result};
use crate::numeric::{Log2Value, Rational};

/// How a gauge continues past its stored blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TailRule {
    /// The last stored slope continues forever.
    Power,
    /// Slopes `s + 1/n` with breakpoints from the tail-sum recursion.
    Separating { s: Rational },
}

/// A gauge given by its log-domain profile: `f(2^-n) = 2^-E(n)`, with `E`
/// continuous and piecewise linear in `n`.
///
/// Block `k` covers depths `[breakpoints[k], breakpoints[k+1])` with slope
/// `slopes[k]`; the final stored block is open-ended.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseGauge {
    breakpoints: Vec<u64>,
    slopes: Vec<Rational>,
    /// `E` at each breakpoint.
    anchors: Vec<Rational>,
    limit_exponent: Option<Rational>,
    tail: Option<TailRule>,
}

/// On-disk gauge description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeFile {
    pub anchor_depth: u64,
    #[serde(rename = "anchor_E")]
    pub anchor_e: Rational,
    pub breakpoints: Vec<u64>,
    pub slopes: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_exponent: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_rule: Option<TailRule>,
}

/// One linear piece of the profile.
#[derive(Clone, Debug, PartialEq)]
pub struct Block<'a> {
    pub start: u64,
    /// Exclusive end; `None` for the open-ended last block.
    pub end: Option<u64>,
    pub slope: &'a Rational,
    pub start_value: &'a Rational,
}

impl PiecewiseGauge {
    pub fn new(
        anchor_depth: u64,
        anchor_e: Rational,
        breakpoints: Vec<u64>,
        slopes: Vec<Rational>,
        limit_exponent: Option<Rational>,
        tail: Option<TailRule>,
    ) -> Result<Self> {
        if slopes.is_empty() {
            return Err(Error::InvalidGauge("no slopes".into()));
        }
        if breakpoints.len() != slopes.len() {
            return Err(Error::InvalidGauge(format!(
                "{} breakpoints for {} slopes",
                breakpoints.len(),
                slopes.len()
            )));
        }
        if breakpoints[0] != anchor_depth {
            return Err(Error::InvalidGauge("first breakpoint must equal the anchor depth".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGauge("breakpoints must be strictly increasing".into()));
        }
        if let Some(TailRule::Separating { s }) = &tail {
            if !(s.is_positive() && *s < Rational::one()) {
                return Err(Error::InvalidGauge("separating tail needs 0 < s < 1".into()));
            }
        }
        let mut anchors = Vec::with_capacity(slopes.len());
        anchors.push(anchor_e);
        for k in 1..slopes.len() {
            let len = Rational::from(breakpoints[k] - breakpoints[k - 1]);
            let next = &anchors[k - 1] + &(&slopes[k - 1] * &len);
            anchors.push(next);
        }
        Ok(PiecewiseGauge { breakpoints, slopes, anchors, limit_exponent, tail })
    }

    /// The power gauge `x^r`.
    pub fn power(r: Rational) -> Self {
        PiecewiseGauge {
            breakpoints: vec![0],
            anchors: vec![Rational::zero()],
            limit_exponent: Some(r.clone()),
            slopes: vec![r],
            tail: Some(TailRule::Power),
        }
    }

    /// A gauge known only on its stored blocks.
    pub fn table(breakpoints: Vec<u64>, slopes: Vec<Rational>, anchor_e: Rational) -> Result<Self> {
        let start = *breakpoints.first().ok_or_else(|| Error::InvalidGauge("no breakpoints".into()))?;
        Self::new(start, anchor_e, breakpoints, slopes, None, None)
    }

    pub fn from_file(file: GaugeFile) -> Result<Self> {
        Self::new(
            file.anchor_depth,
            file.anchor_e,
            file.breakpoints,
            file.slopes,
            file.limit_exponent,
            file.tail_rule,
        )
    }

    pub fn to_file(&self) -> GaugeFile {
        GaugeFile {
            anchor_depth: self.start_depth(),
            anchor_e: self.anchors[0].clone(),
            breakpoints: self.breakpoints.clone(),
            slopes: self.slopes.clone(),
            limit_exponent: self.limit_exponent.clone(),
            tail_rule: self.tail.clone(),
        }
    }

    pub fn start_depth(&self) -> u64 {
        self.breakpoints[0]
    }

    pub fn breakpoints(&self) -> &[u64] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    pub fn tail_rule(&self) -> Option<&TailRule> {
        self.tail.as_ref()
    }

    /// Declared limit of the slopes, or the persisting slope of a power tail.
    pub fn limit_exponent(&self) -> Option<&Rational> {
        match (&self.limit_exponent, &self.tail) {
            (Some(l), _) => Some(l),
            (None, Some(TailRule::Power)) => self.slopes.last(),
            (None, Some(TailRule::Separating { s })) => Some(s),
            (None, None) => None,
        }
    }

    /// Last depth at which the stored data pins the profile down.
    pub fn horizon(&self) -> u64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn block_count(&self) -> usize {
        self.slopes.len()
    }

    pub fn blocks(&self) -> impl Iterator<Item = Block<'_>> {
        (0..self.slopes.len()).map(move |k| Block {
            start: self.breakpoints[k],
            end: self.breakpoints.get(k + 1).copied(),
            slope: &self.slopes[k],
            start_value: &self.anchors[k],
        })
    }

    fn block_index(&self, n: u64) -> usize {
        match self.breakpoints.binary_search(&n) {
            Ok(k) => k,
            Err(k) => k - 1,
        }
    }

    /// Returns a copy whose stored blocks reach past `depth`, generating them
    /// from the tail rule when needed. Gauges without a generating tail are
    /// returned unchanged.
    pub fn extended_to(&self, depth: u64) -> Cow<'_, PiecewiseGauge> {
        let Some(TailRule::Separating { s }) = &self.tail else {
            return Cow::Borrowed(self);
        };
        if self.horizon() > depth {
            return Cow::Borrowed(self);
        }
        let mut g = self.clone();
        let stored = g.slopes.len();
        for block in SeparatingBlocks::new(s).skip(stored) {
            let k = g.slopes.len();
            let len = Rational::from(block.start_depth - g.breakpoints[k - 1]);
            let next = &g.anchors[k - 1] + &(&g.slopes[k - 1] * &len);
            g.breakpoints.push(block.start_depth);
            g.slopes.push(block.slope);
            g.anchors.push(next);
            if block.start_depth > depth {
                break;
            }
        }
        Cow::Owned(g)
    }

    /// Exact `E(n)` with `f(2^-n) = 2^-E(n)`.
    pub fn eval_log(&self, n: u64) -> Result<Rational> {
        if n < self.start_depth() {
            return Err(Error::BelowStartDepth { depth: n, start: self.start_depth() });
        }
        let g = self.extended_to(n);
        Ok(g.eval_stored(n))
    }

    /// `E(n)` using only the stored blocks (the last one extended linearly).
    pub(crate) fn eval_stored(&self, n: u64) -> Rational {
        let k = self.block_index(n);
        &self.anchors[k] + &(&self.slopes[k] * &Rational::from(n - self.breakpoints[k]))
    }

    /// `E` at a real depth, as a float (for plotting and float-side estimates).
    pub fn eval_log_f64(&self, depth: f64) -> f64 {
        let k = self.block_index(depth.max(self.start_depth() as f64).floor() as u64);
        self.anchors[k].to_f64() + self.slopes[k].to_f64() * (depth - self.breakpoints[k] as f64)
    }

    /// `f(2^-n)` as a log-domain value.
    pub fn value_at(&self, n: u64) -> Result<Log2Value> {
        Ok(Log2Value::from_exponent(self.eval_log(n)?))
    }

    /// True iff every slope, stored or generated, lies in `[0, 1]`; equivalently
    /// `f` is non-decreasing and `f(x)/x` is non-increasing at dyadic scales.
    pub fn is_doubling_monotone(&self) -> bool {
        let stored = self.slopes.iter().all(|r| !r.is_negative() && *r <= Rational::one());
        let tail = match &self.tail {
            // separating slopes start at the first index with s + 1/n <= 1 and decrease
            Some(TailRule::Separating { s }) => s.is_positive() && *s < Rational::one(),
            _ => true,
        };
        stored && tail
    }

    /// Whether `x^-1 f(x) → ∞` as `x → 0`, i.e. `n − E(n)` is unbounded.
    /// `None` when the stored table cannot decide it.
    pub fn ratio_diverges(&self) -> Option<bool> {
        match &self.tail {
            Some(TailRule::Power) => Some(*self.slopes.last().unwrap() < Rational::one()),
            Some(TailRule::Separating { s }) => Some(*s < Rational::one()),
            None => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    pub(crate) fn two_block() -> PiecewiseGauge {
        PiecewiseGauge::new(0, Rational::zero(), vec![0, 10], vec![q("1"), q("3/4")], None, Some(TailRule::Power))
            .unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(PiecewiseGauge::power(q("1/2")).eval_log(10).unwrap(), q("5"));
        assert_eq!(PiecewiseGauge::power(q("1")).eval_log(7).unwrap(), q("7"));
        assert_eq!(two_block().eval_log(14).unwrap(), q("13"));
        assert_eq!(two_block().eval_log(10).unwrap(), q("10"));
    }

    #[test]
    fn eval_below_start_fails() {
        let g = PiecewiseGauge::new(5, q("2"), vec![5], vec![q("1/2")], None, Some(TailRule::Power)).unwrap();
        assert_eq!(g.eval_log(4), Err(Error::BelowStartDepth { depth: 4, start: 5 }));
        assert_eq!(g.eval_log(7).unwrap(), q("3"));
    }

    #[test]
    fn rejects_malformed() {
        assert!(PiecewiseGauge::new(0, q("0"), vec![0, 0], vec![q("1"), q("1")], None, None).is_err());
        assert!(PiecewiseGauge::new(1, q("0"), vec![0], vec![q("1")], None, None).is_err());
        assert!(PiecewiseGauge::new(0, q("0"), vec![0], vec![], None, None).is_err());
    }

    #[test]
    fn monotone_check() {
        assert!(PiecewiseGauge::power(q("1/2")).is_doubling_monotone());
        let bad = PiecewiseGauge::table(vec![0, 4], vec![q("1/2"), q("6/5")], q("0")).unwrap();
        assert!(!bad.is_doubling_monotone());
        let neg = PiecewiseGauge::power(q("-1/3"));
        assert!(!neg.is_doubling_monotone());
    }

    #[test]
    fn file_roundtrip() {
        let g = two_block();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        assert!(text.contains("\"anchor_E\":\"0/1\""));
        let back = PiecewiseGauge::from_file(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
