//! Block generator for the gauge that separates well-approximable reals from
//! reals of small effective dimension.
//!
//! Block `n` has slope `r_n = s + 1/n`. Its threshold `p_n` is the least
//! `p > p_{n-1}` whose certified bound on `Σ_{q≥p} q·(q^{-2/s})^{r_n}` is at most
//! `2^-n`, and the block starts at depth `m_n = ⌈(2/s)·log2 p_n⌉` (forced to be
//! strictly increasing). The first block starts at depth 0.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::profile::{PiecewiseGauge, TailRule};
use crate::error::{Error, Result};
use crate::numeric::{biguint_pow, to_biguint, Rational};

/// Thresholds below this are searched as exact integers.
const EXACT_P_LIMIT: u64 = 1 << 50;

/// The threshold `p_n`: exact while small, otherwise the certified real bound
/// `2^(m_n/t)` it was snapped to.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Threshold {
    Exact(u64),
    Log2AtMost(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparatingBlock {
    pub n: u64,
    pub slope: Rational,
    pub threshold: Threshold,
    pub start_depth: u64,
}

/// Least `n ≥ 1` with `s + 1/n ≤ 1`.
pub fn first_index(s: &Rational) -> u64 {
    let inv = (Rational::one() - s).recip();
    inv.ceil().to_u64().expect("first index overflow").max(1)
}

/// Certified tail bound for the block's zeta-like sum.
struct TailSum {
    /// exponent α = 1 − (2/s)·r_n  (< −1)
    alpha: f64,
    /// log2(−α − 1)
    log2_beta: f64,
}

impl TailSum {
    fn new(t: &Rational, r: &Rational) -> Self {
        let alpha = Rational::one() - t * r;
        let beta = -(&alpha) - Rational::one();
        debug_assert!(beta.is_positive());
        TailSum { alpha: alpha.to_f64(), log2_beta: beta.to_f64().log2() }
    }

    /// Upper bound on `log2(A^α + A^(α+1)/β)` where `log2 A = l`.
    fn log2_bound(&self, l: f64) -> f64 {
        let a = self.alpha * l;
        let b = (self.alpha + 1.0) * l - self.log2_beta;
        let hi = a.max(b);
        let lo = a.min(b);
        let v = hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2;
        v + 1e-12 * (a.abs() + b.abs() + 1.0)
    }

    fn certified(&self, l: f64, n: u64) -> bool {
        self.log2_bound(l) <= -(n as f64)
    }
}

/// Iterator over the blocks of the separating gauge for a given `s`.
pub struct SeparatingBlocks {
    s: Rational,
    t: Rational,
    n: u64,
    prev_p: u64,
    prev_depth: Option<u64>,
    exact: bool,
    first: bool,
}

impl SeparatingBlocks {
    pub fn new(s: &Rational) -> Self {
        SeparatingBlocks {
            s: s.clone(),
            t: Rational::from(2i64) / s,
            n: first_index(s),
            prev_p: 0,
            prev_depth: None,
            exact: true,
            first: true,
        }
    }

    /// Least integer `m` with `2^m ≥ p^t`, decided exactly.
    fn snap_exact(&self, p: u64) -> u64 {
        let num = to_biguint(self.t.numer()).unwrap();
        let den = to_biguint(self.t.denom()).unwrap().to_u64().unwrap();
        let rhs = biguint_pow(&BigUint::from(p), num.to_u64().unwrap());
        let guess = (self.t.to_f64() * (p as f64).log2()).ceil().max(0.0) as u64;
        let fits = |m: u64| (BigUint::one() << (m * den)) >= rhs;
        let mut m = guess.saturating_sub(2);
        while !fits(m) {
            m += 1;
        }
        m
    }

    fn next_exact(&self, tail: &TailSum) -> Option<u64> {
        let pred = |p: u64| tail.certified((p as f64).log2(), self.n);
        let mut lo = self.prev_p;
        let mut hi = (self.prev_p + 1).max(2);
        if pred(self.prev_p + 1) {
            return Some(self.prev_p + 1);
        }
        while !pred(hi) {
            lo = hi;
            hi = hi.checked_mul(2)?;
            if hi > EXACT_P_LIMIT {
                return None;
            }
        }
        // pred(lo) false (or lo = prev_p), pred(hi) true
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if pred(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }
}

impl Iterator for SeparatingBlocks {
    type Item = SeparatingBlock;

    fn next(&mut self) -> Option<SeparatingBlock> {
        let slope = &self.s + &Rational::new(1, self.n);
        let tail = TailSum::new(&self.t, &slope);
        let floor_depth = self.prev_depth.map_or(0, |d| d + 1);
        let (threshold, depth) = match self.exact.then(|| self.next_exact(&tail)).flatten() {
            Some(p) => {
                self.prev_p = p;
                (Threshold::Exact(p), self.snap_exact(p).max(floor_depth))
            }
            None => {
                self.exact = false;
                let t = self.t.to_f64();
                let mut m = floor_depth;
                while !tail.certified(m as f64 / t, self.n) {
                    m += 1;
                }
                (Threshold::Log2AtMost(m as f64 / t), m)
            }
        };
        let start_depth = if self.first { 0 } else { depth };
        self.first = false;
        self.prev_depth = Some(depth);
        let block = SeparatingBlock { n: self.n, slope, threshold, start_depth };
        self.n += 1;
        Some(block)
    }
}

/// Builds the separating gauge with `blocks` stored blocks and a tail rule
/// that regenerates the rest.
pub fn construct_separating(s: &Rational, blocks: usize) -> Result<PiecewiseGauge> {
    if !(s.is_positive() && *s < Rational::one()) {
        return Err(Error::Degenerate(format!("separating gauge needs 0 < s < 1, got {s}")));
    }
    if blocks == 0 {
        return Err(Error::Degenerate("at least one block is required".into()));
    }
    let (breakpoints, slopes): (Vec<u64>, Vec<Rational>) =
        SeparatingBlocks::new(s).take(blocks).map(|b| (b.start_depth, b.slope)).unzip();
    PiecewiseGauge::new(
        0,
        Rational::zero(),
        breakpoints,
        slopes,
        Some(s.clone()),
        Some(TailRule::Separating { s: s.clone() }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn first_index_admits_slope_one() {
        assert_eq!(first_index(&q("1/2")), 2);
        assert_eq!(first_index(&q("2/3")), 3);
        assert_eq!(first_index(&q("1/3")), 2);
        assert_eq!(first_index(&q("9/10")), 10);
    }

    #[test]
    fn half_gauge_slopes() {
        let g = construct_separating(&q("1/2"), 4).unwrap();
        assert_eq!(g.slopes(), &[q("1"), q("5/6"), q("3/4"), q("7/10")]);
        assert_eq!(g.breakpoints()[0], 0);
        assert!(g.is_doubling_monotone());
    }

    #[test]
    fn exact_thresholds_satisfy_tail_bound() {
        // direct check of the defining inequality with the float oracle
        let s = q("1/2");
        for b in SeparatingBlocks::new(&s).take(6) {
            let Threshold::Exact(p) = b.threshold else { continue };
            let alpha = 1.0 - 4.0 * b.slope.to_f64();
            let p = p as f64;
            let bound = p.powf(alpha) + p.powf(alpha + 1.0) / (-alpha - 1.0);
            assert!(bound <= 2f64.powi(-(b.n as i32)) * (1.0 + 1e-9), "n={}", b.n);
        }
    }

    #[test]
    fn depths_strictly_increase() {
        for s in ["1/3", "1/2", "2/3", "9/10"] {
            let d: Vec<u64> = SeparatingBlocks::new(&q(s)).take(60).map(|b| b.start_depth).collect();
            assert!(d.windows(2).all(|w| w[0] < w[1]), "s={s}");
        }
    }

    #[test]
    fn degenerate_s() {
        assert!(construct_separating(&q("0"), 3).is_err());
        assert!(construct_separating(&q("1"), 3).is_err());
        assert!(construct_separating(&q("1/2"), 0).is_err());
    }
}
