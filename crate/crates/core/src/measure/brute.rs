use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::premeasure::{CoverResult, CoverTerm};
use super::trie::CylinderTrie;
use crate::error::{Error, Result};
use crate::gauge::PiecewiseGauge;
use crate::numeric::{pow2_neg, pow2_neg_exact, BitWord, Interval, Rational};

/// Deepest trie the exhaustive search accepts.
pub const BRUTE_FORCE_MAX_DEPTH: usize = 12;
/// Largest number of candidate covers kept for any one node.
pub const BRUTE_FORCE_MAX_COVERS: usize = 200_000;

#[derive(Clone)]
struct Candidate {
    words: Vec<BitWord>,
    iv: Interval,
    exact: Option<Rational>,
}

/// Exhaustive minimum over every antichain cover of `a` by cylinders of depth
/// in `[n, a.max_depth()]`. Only for small tries.
pub fn brute_force_premeasure(a: &CylinderTrie, f: &PiecewiseGauge, n: u64) -> Result<CoverResult> {
    let d_max = a.max_depth();
    if d_max > BRUTE_FORCE_MAX_DEPTH {
        return Err(Error::Intractable(format!("depth {d_max} exceeds {BRUTE_FORCE_MAX_DEPTH}")));
    }
    if n > d_max as u64 {
        return Err(Error::DepthOutOfRange { min_depth: n, max_depth: d_max as u64 });
    }
    let exps: Vec<Option<Rational>> = (0..=d_max as u64)
        .map(|d| if d >= n { f.eval_log(d).ok() } else { None })
        .collect();
    let exact = exps.iter().flatten().all(Rational::is_integer);
    let words = a.words();
    let search = Search { words: &words, exps: &exps, exact, d_max };
    let all = search.covers(&BitWord::new())?;
    let best = all
        .into_iter()
        .reduce(|x, y| {
            let y_better = match (&x.exact, &y.exact) {
                (Some(a), Some(b)) => b < a,
                _ => y.iv.hi < x.iv.lo,
            };
            let mut keep = if y_better { y.clone() } else { x.clone() };
            if !exact {
                keep.iv = x.iv.min(&y.iv);
            }
            keep
        })
        .ok_or_else(|| Error::Intractable("no cover exists".into()))?;
    let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
    for w in &best.words {
        *counts.entry(w.len() as u64).or_default() += 1u32;
    }
    let terms = counts
        .into_iter()
        .map(|(depth, count)| CoverTerm { depth, count, exponent: exps[depth as usize].clone().unwrap() })
        .collect();
    Ok(CoverResult { cost: best.iv, exact: best.exact, terms, cover: Some(best.words) })
}

struct Search<'a> {
    words: &'a [BitWord],
    exps: &'a [Option<Rational>],
    exact: bool,
    d_max: usize,
}

impl Search<'_> {
    fn meets(&self, sigma: &BitWord) -> bool {
        self.words.iter().any(|w| w.is_prefix_of(sigma) || sigma.is_prefix_of(w))
    }

    fn covers(&self, sigma: &BitWord) -> Result<Vec<Candidate>> {
        if !self.meets(sigma) {
            return Ok(vec![Candidate { words: vec![], iv: Interval::ZERO, exact: self.exact.then(Rational::zero) }]);
        }
        let mut out = Vec::new();
        if let Some(e) = &self.exps[sigma.len()] {
            out.push(Candidate {
                words: vec![sigma.clone()],
                iv: pow2_neg(e),
                exact: self.exact.then(|| pow2_neg_exact(e)),
            });
        }
        if sigma.len() < self.d_max {
            let left = self.covers(&sigma.child(false))?;
            let right = self.covers(&sigma.child(true))?;
            if out.len() + left.len() * right.len() > BRUTE_FORCE_MAX_COVERS {
                return Err(Error::Intractable(format!("more than {BRUTE_FORCE_MAX_COVERS} covers")));
            }
            for x in &left {
                for y in &right {
                    out.push(Candidate {
                        words: x.words.iter().chain(&y.words).cloned().collect(),
                        iv: x.iv.add(&y.iv),
                        exact: x.exact.as_ref().zip(y.exact.as_ref()).map(|(a, b)| a + b),
                    });
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn small_cases() {
        let id = PiecewiseGauge::power(q("1"));
        let empty = CylinderTrie::new(3);
        assert_eq!(brute_force_premeasure(&empty, &id, 1).unwrap().exact, Some(q("0")));
        let full1 = CylinderTrie::from_words(&["".parse().unwrap()], Some(1)).unwrap();
        assert_eq!(brute_force_premeasure(&full1, &id, 1).unwrap().exact, Some(q("1")));
        let pair = CylinderTrie::from_words(&["0000".parse().unwrap(), "1111".parse().unwrap()], None).unwrap();
        assert_eq!(brute_force_premeasure(&pair, &id, 0).unwrap().exact, Some(q("1/8")));
    }

    #[test]
    fn guards() {
        let deep = CylinderTrie::new(13);
        assert!(matches!(brute_force_premeasure(&deep, &PiecewiseGauge::power(q("1")), 0), Err(Error::Intractable(_))));
        let full = CylinderTrie::from_words(&["".parse().unwrap()], Some(6)).unwrap();
        assert!(matches!(brute_force_premeasure(&full, &PiecewiseGauge::power(q("1")), 0), Err(Error::Intractable(_))));
    }
}
