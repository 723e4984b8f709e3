use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::{find_witness, PiecewiseGauge};
use crate::numeric::{ceil_mul, Rational};

/// Rule producing the descending exponent sequence `r_0 > r_1 > … → s`.
#[derive(Clone, Debug, PartialEq)]
pub enum RSequence {
    /// `r_n = s + (1 − s)/(n + 1)`.
    Harmonic,
    /// Explicit values; one more than the number of blocks is needed.
    Explicit(Vec<Rational>),
}

impl RSequence {
    fn values(&self, s: &Rational, count: usize) -> Result<Vec<Rational>> {
        let r: Vec<Rational> = match self {
            RSequence::Harmonic => {
                let gap = Rational::one() - s;
                (0..count as u64).map(|n| s + &(&gap / &Rational::from(n + 1))).collect()
            }
            RSequence::Explicit(v) => {
                if v.len() < count {
                    return Err(Error::InvalidSequence(format!("{} values given, {count} needed", v.len())));
                }
                v[..count].to_vec()
            }
        };
        if r.iter().any(|x| x <= s || *x > Rational::one()) {
            return Err(Error::InvalidSequence("values must lie in (s, 1]".into()));
        }
        if r.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidSequence("values must strictly decrease".into()));
        }
        Ok(r)
    }
}

/// Block data of the dimension-controlling tree.
///
/// Block `n` spans depths `[l[n], l[n+1])`; its first `c[n]` positions are free
/// and the rest are forced to 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeSchedule {
    pub s: Rational,
    /// `r_n`, one per block.
    pub r: Vec<Rational>,
    /// `l_0 = 0, l_1, …, l_blocks`.
    pub l: Vec<u64>,
    /// `r*_n = ⌈r_n·l_{n+1}⌉ / l_{n+1}`.
    pub r_star: Vec<Rational>,
    /// Free positions per block.
    pub c: Vec<u64>,
}

/// One line of a schedule file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRow {
    pub n: usize,
    pub s: Rational,
    pub r_n: Rational,
    pub l_next: u64,
    pub r_star: Rational,
    pub c_n: u64,
}

/// Outcome of the three defining conditions at a candidate `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conditions {
    pub clears_gap: bool,
    pub free_count_nonnegative: bool,
    pub gauge_beats_exponent: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.clears_gap && self.free_count_nonnegative && self.gauge_beats_exponent
    }
}

/// `⌊bound⌋ + 1` where `bound = 2^n + l_n + 2/(r_n − r_{n+1})`.
fn gap_floor(n: usize, l_n: u64, r_n: &Rational, r_next: &Rational) -> BigInt {
    let bound = Rational::from_integer(BigInt::one() << n)
        + Rational::from(l_n)
        + Rational::from(2i64) / (r_n - r_next);
    bound.floor() + 1
}

/// Evaluates the three conditions for `l` as block `n`'s right end.
pub fn conditions_at(
    f: &PiecewiseGauge,
    n: usize,
    l_n: u64,
    prev_ceiling: u64,
    r_n: &Rational,
    r_next: &Rational,
    l: u64,
) -> Result<Conditions> {
    let ceiling = ceil_mul(r_n, l);
    let e = f.eval_log(l)?;
    Ok(Conditions {
        clears_gap: BigInt::from(l) >= gap_floor(n, l_n, r_n, r_next),
        free_count_nonnegative: ceiling >= prev_ceiling,
        gauge_beats_exponent: e < Rational::from(ceiling),
    })
}

/// Builds the minimal schedule with `blocks` blocks.
pub fn build_schedule(
    f: &PiecewiseGauge,
    s: &Rational,
    r_seq: &RSequence,
    blocks: usize,
    depth_budget: u64,
) -> Result<TreeSchedule> {
    if !f.is_doubling_monotone() {
        return Err(Error::NotDoublingMonotone);
    }
    if !(s.is_positive() && *s < Rational::one()) {
        return Err(Error::Degenerate(format!("need 0 < s < 1, got {s}")));
    }
    if blocks == 0 {
        return Err(Error::Degenerate("at least one block is required".into()));
    }
    let r = r_seq.values(s, blocks + 1)?;
    let mut l = vec![0u64];
    let mut r_star = Vec::with_capacity(blocks);
    let mut c = Vec::with_capacity(blocks);
    let mut prev_ceiling = 0u64;
    for n in 0..blocks {
        let budget_err = || Error::ScheduleBudget { block: n, depth: depth_budget };
        let l_n = l[n];
        let gap = gap_floor(n, l_n, &r[n], &r[n + 1]).to_u64().ok_or_else(budget_err)?;
        // least l with ⌈r_n·l⌉ ≥ prev_ceiling, i.e. r_n·l > prev_ceiling − 1
        let ceil_lo = if prev_ceiling == 0 {
            0
        } else {
            (Rational::from(prev_ceiling - 1) / &r[n]).floor().to_u64().ok_or_else(budget_err)? + 1
        };
        let lo = gap.max(ceil_lo).max(f.start_depth());
        if lo > depth_budget {
            return Err(budget_err());
        }
        // E(l) < r_n·l is sufficient, so the first such depth bounds the scan
        let sure = find_witness(f, &r[n], lo, depth_budget - lo).map_err(|_| budget_err())?;
        let cand = (lo..sure)
            .find(|&m| f.eval_log(m).unwrap() < Rational::from(ceil_mul(&r[n], m)))
            .unwrap_or(sure);
        let ceiling = ceil_mul(&r[n], cand);
        r_star.push(Rational::new(ceiling, cand));
        c.push(ceiling - prev_ceiling);
        l.push(cand);
        prev_ceiling = ceiling;
    }
    let mut r = r;
    r.truncate(blocks);
    Ok(TreeSchedule { s: s.clone(), r, l, r_star, c })
}

impl TreeSchedule {
    pub fn blocks(&self) -> usize {
        self.c.len()
    }

    /// Constructed depth `l_blocks`.
    pub fn depth(&self) -> u64 {
        *self.l.last().unwrap()
    }

    /// Total free positions, `k` at the constructed depth.
    pub fn total_free(&self) -> u64 {
        self.c.iter().sum()
    }

    /// `r*_{n-1}` with `r*_{-1} = 1`.
    fn r_star_before(&self, n: usize) -> Rational {
        if n == 0 {
            Rational::one()
        } else {
            self.r_star[n - 1].clone()
        }
    }

    /// First forced position of block `n`, `l_n + c_n`.
    pub fn forced_start(&self, n: usize) -> u64 {
        self.l[n] + self.c[n]
    }

    /// The forced-zone start written as `r*_n·l_{n+1} + (1 − r*_{n−1})·l_n`.
    pub fn forced_start_rational(&self, n: usize) -> Rational {
        &self.r_star[n] * &Rational::from(self.l[n + 1])
            + (Rational::one() - self.r_star_before(n)) * Rational::from(self.l[n])
    }

    /// Block containing depth `p`; `None` past the constructed depth.
    pub fn block_of(&self, p: u64) -> Option<usize> {
        if p >= self.depth() {
            return None;
        }
        Some(self.l.partition_point(|&x| x <= p) - 1)
    }

    pub fn is_free(&self, p: u64) -> bool {
        self.block_of(p).is_some_and(|n| p < self.forced_start(n))
    }

    /// Free positions strictly below depth `d`.
    pub fn split_count(&self, d: u64) -> Result<u64> {
        if d > self.depth() {
            return Err(Error::ScheduleTooShort { len: d, limit: self.depth() });
        }
        let n = self.l.partition_point(|&x| x <= d).saturating_sub(1).min(self.blocks());
        let before: u64 = self.c[..n].iter().sum();
        if n == self.blocks() {
            return Ok(before);
        }
        Ok(before + (d - self.l[n]).min(self.c[n]))
    }

    /// Lists every violated invariant; empty when the schedule is sound for `f`.
    pub fn violations(&self, f: &PiecewiseGauge, r_next_last: Option<&Rational>) -> Vec<String> {
        let mut out = Vec::new();
        let mut prev_ceiling = 0u64;
        for n in 0..self.blocks() {
            let l_next = self.l[n + 1];
            let ceiling = ceil_mul(&self.r[n], l_next);
            if let Some(r_next) = self.r.get(n + 1).or(r_next_last) {
                let bound = Rational::from_integer(BigInt::one() << n)
                    + Rational::from(self.l[n])
                    + Rational::from(2i64) / (&self.r[n] - r_next);
                if Rational::from(l_next) <= bound {
                    out.push(format!("block {n}: l = {l_next} does not exceed {bound}"));
                }
            }
            if ceiling < prev_ceiling {
                out.push(format!("block {n}: ceiling {ceiling} below previous {prev_ceiling}"));
            }
            if self.r_star[n] != Rational::new(ceiling, l_next) {
                out.push(format!("block {n}: r* mismatch"));
            }
            if self.c[n] != ceiling.wrapping_sub(prev_ceiling) {
                out.push(format!("block {n}: free count mismatch"));
            }
            match f.eval_log(l_next) {
                Ok(e) if e < &self.r_star[n] * &Rational::from(l_next) => {}
                _ => out.push(format!("block {n}: gauge does not beat r* at depth {l_next}")),
            }
            if n > 0 && self.r_star[n] > self.r_star[n - 1] {
                out.push(format!("block {n}: r* increased"));
            }
            if self.r_star[n] <= self.s {
                out.push(format!("block {n}: r* not above s"));
            }
            prev_ceiling = ceiling;
        }
        out
    }

    /// Blocks whose `l_{n+1} − 1` also satisfies all three conditions.
    pub fn non_minimal_blocks(&self, f: &PiecewiseGauge, r_next_last: &Rational) -> Vec<usize> {
        let mut prev_ceiling = 0u64;
        let mut out = Vec::new();
        for n in 0..self.blocks() {
            let r_next = self.r.get(n + 1).unwrap_or(r_next_last);
            let l = self.l[n + 1] - 1;
            let ok = conditions_at(f, n, self.l[n], prev_ceiling, &self.r[n], r_next, l).is_ok_and(|c| c.all());
            if ok {
                out.push(n);
            }
            prev_ceiling = ceil_mul(&self.r[n], self.l[n + 1]);
        }
        out
    }

    pub fn rows(&self) -> Vec<ScheduleRow> {
        (0..self.blocks())
            .map(|n| ScheduleRow {
                n,
                s: self.s.clone(),
                r_n: self.r[n].clone(),
                l_next: self.l[n + 1],
                r_star: self.r_star[n].clone(),
                c_n: self.c[n],
            })
            .collect()
    }

    pub fn from_rows(rows: &[ScheduleRow]) -> Result<TreeSchedule> {
        let first = rows.first().ok_or(Error::Empty("schedule"))?;
        let mut sch =
            TreeSchedule { s: first.s.clone(), r: vec![], l: vec![0], r_star: vec![], c: vec![] };
        for (k, row) in rows.iter().enumerate() {
            if row.n != k || row.s != sch.s {
                return Err(Error::Parse(format!("schedule row {k} out of sequence")));
            }
            if row.l_next <= *sch.l.last().unwrap() || row.c_n > row.l_next - sch.l[k] {
                return Err(Error::Parse(format!("schedule row {k} is inconsistent")));
            }
            sch.r.push(row.r_n.clone());
            sch.l.push(row.l_next);
            sch.r_star.push(row.r_star.clone());
            sch.c.push(row.c_n);
        }
        Ok(sch)
    }

    /// Writes one JSON object per block.
    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        for row in self.rows() {
            serde_json::to_writer(&mut out, &row)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl(input: impl BufRead) -> Result<TreeSchedule> {
        let mut rows = Vec::new();
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            rows.push(serde_json::from_str(&line)?);
        }
        Self::from_rows(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::PiecewiseGauge;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn half() -> TreeSchedule {
        build_schedule(&PiecewiseGauge::power(q("1/2")), &q("1/2"), &RSequence::Harmonic, 12, 1 << 40).unwrap()
    }

    #[test]
    fn first_blocks_match_hand_recursion() {
        let sch = half();
        assert_eq!(&sch.l[..3], &[0, 10, 37]);
        assert_eq!(sch.r_star[0], q("1"));
        assert_eq!(sch.r_star[1], q("28/37"));
        assert_eq!(&sch.c[..2], &[10, 18]);
        assert_eq!(&sch.r[..3], &[q("1"), q("3/4"), q("2/3")]);
    }

    #[test]
    fn longer_schedule_matches_independent_recursion() {
        // values from a separate big-integer implementation of the recursion
        let sch = half();
        assert_eq!(sch.l[1..], [10, 37, 90, 179, 316, 517, 806, 1223, 1840, 2793, 4346, 7019]);
        assert_eq!(sch.total_free(), 3802);
    }

    #[test]
    fn invariants_and_minimality() {
        for s in ["1/10", "1/3", "1/2", "2/3", "9/10"] {
            let s = q(s);
            let f = PiecewiseGauge::power(s.clone());
            let sch = build_schedule(&f, &s, &RSequence::Harmonic, 8, 1 << 40).unwrap();
            let r_next = &s + &((Rational::one() - &s) / Rational::from(9i64));
            assert!(sch.violations(&f, Some(&r_next)).is_empty(), "{:?}", sch.violations(&f, Some(&r_next)));
            assert!(sch.non_minimal_blocks(&f, &r_next).is_empty());
            for n in 0..sch.blocks() {
                assert_eq!(Rational::from(sch.forced_start(n)), sch.forced_start_rational(n));
                let bound = (&sch.r[n] - &s) + Rational::new(1, sch.l[n + 1]);
                assert!((&sch.r_star[n] - &s).abs() <= bound);
            }
        }
    }

    #[test]
    fn split_counts() {
        let sch = half();
        assert_eq!(sch.split_count(0).unwrap(), 0);
        assert_eq!(sch.split_count(10).unwrap(), 10);
        assert_eq!(sch.split_count(37).unwrap(), 28);
        assert_eq!(sch.split_count(30).unwrap(), 28);
        assert_eq!(sch.split_count(15).unwrap(), 15);
        assert_eq!(sch.split_count(sch.depth()).unwrap(), sch.total_free());
        assert!(sch.split_count(sch.depth() + 1).is_err());
    }

    #[test]
    fn rejects_bad_sequences() {
        let f = PiecewiseGauge::power(q("1/2"));
        let up = RSequence::Explicit(vec![q("3/4"), q("4/5")]);
        assert!(matches!(build_schedule(&f, &q("1/2"), &up, 1, 1000), Err(Error::InvalidSequence(_))));
        let low = RSequence::Explicit(vec![q("1"), q("1/2")]);
        assert!(build_schedule(&f, &q("1/2"), &low, 1, 1000).is_err());
    }

    #[test]
    fn budget_exhaustion() {
        let f = PiecewiseGauge::power(q("1/2"));
        assert!(matches!(
            build_schedule(&f, &q("1/2"), &RSequence::Harmonic, 5, 50),
            Err(Error::ScheduleBudget { .. })
        ));
        // a gauge steeper than every r_n never beats the exponent
        let steep = PiecewiseGauge::power(q("1"));
        assert!(matches!(
            build_schedule(&steep, &q("1/2"), &RSequence::Harmonic, 3, 10_000),
            Err(Error::ScheduleBudget { block: 0, .. })
        ));
    }

    #[test]
    fn jsonl_roundtrip() {
        let sch = half();
        let mut buf = Vec::new();
        sch.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().next().unwrap().contains("\"r_star\":\"1/1\""));
        assert_eq!(TreeSchedule::read_jsonl(&buf[..]).unwrap(), sch);
    }
}
