use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::trie::CylinderTrie;
use crate::error::{Error, Result};
use crate::gauge::PiecewiseGauge;
use crate::numeric::{pi_map, pow2_neg, pow2_neg_exact, BitWord, DyadicInterval, Interval, Rational};
use crate::tree::TreeSchedule;

/// Covers with more cylinders than this are reported by depth counts only.
pub const COVER_WORD_CAP: u64 = 1 << 20;

/// `count` cylinders of depth `depth`, each costing `2^-exponent`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverTerm {
    pub depth: u64,
    #[serde(serialize_with = "ser_biguint")]
    pub count: BigUint,
    pub exponent: Rational,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Minimum-cost cover of a cylinder union.
#[derive(Clone, Debug, Serialize)]
pub struct CoverResult {
    /// Encloses the minimum cost.
    pub cost: Interval,
    /// The minimum cost exactly, when every exponent involved is an integer.
    pub exact: Option<Rational>,
    /// The chosen cover grouped by depth.
    pub terms: Vec<CoverTerm>,
    /// The chosen cover's cylinders, when requested and not too many.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<BitWord>>,
}

impl CoverResult {
    pub fn cover_size(&self) -> BigUint {
        self.terms.iter().map(|t| &t.count).sum()
    }

    /// Encloses the total cost of the chosen cover.
    pub fn cover_cost(&self) -> Interval {
        self.terms.iter().fold(Interval::ZERO, |acc, t| {
            let each = pow2_neg(&t.exponent);
            let count = t.count.to_f64().unwrap_or(f64::INFINITY);
            acc.add(&each.mul_nonneg(&Interval::around(count, f64::EPSILON)))
        })
    }
}

#[derive(Clone, Debug)]
struct Cost {
    iv: Interval,
    exact: Option<Rational>,
}

impl Cost {
    fn zero(exact: bool) -> Self {
        Cost { iv: Interval::ZERO, exact: exact.then(Rational::zero) }
    }

    fn add(&self, o: &Cost) -> Cost {
        Cost {
            iv: self.iv.add(&o.iv),
            exact: match (&self.exact, &o.exact) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    fn double(&self) -> Cost {
        self.add(self)
    }
}

/// Picks between covering a node by itself and covering its parts.
/// Returns the cost and whether the node itself is taken. Ambiguous float
/// comparisons take the node itself and widen the cost to the elementwise min.
fn choose(own: Option<&Cost>, split: Option<Cost>) -> Option<(Cost, bool)> {
    match (own, split) {
        (None, None) => None,
        (Some(o), None) => Some((o.clone(), true)),
        (None, Some(s)) => Some((s, false)),
        (Some(o), Some(s)) => {
            if let (Some(a), Some(b)) = (&o.exact, &s.exact) {
                return Some(if b < a { (s, false) } else { (o.clone(), true) });
            }
            if s.iv.certainly_lt(&o.iv) {
                Some((s, false))
            } else if o.iv.hi <= s.iv.lo {
                Some((o.clone(), true))
            } else {
                Some((Cost { iv: o.iv.min(&s.iv), exact: None }, true))
            }
        }
    }
}

struct Tables {
    /// Gauge exponent by depth, where a cylinder of that depth may be used.
    exponent: Vec<Option<Rational>>,
    /// Cost of covering a full (restricted) subtree rooted at each depth.
    full: Vec<Cost>,
    /// Depth at which a full subtree rooted at each depth is covered.
    full_target: Vec<u64>,
    branching: Vec<bool>,
}

fn tables(f: &PiecewiseGauge, n: u64, d_max: u64, branching: &dyn Fn(u64) -> bool) -> Result<Tables> {
    if n > d_max {
        return Err(Error::DepthOutOfRange { min_depth: n, max_depth: d_max });
    }
    if !f.is_doubling_monotone() {
        return Err(Error::NotDoublingMonotone);
    }
    f.eval_log(d_max)?;
    let g = f.extended_to(d_max);
    let from = n.max(f.start_depth());
    let exponent: Vec<Option<Rational>> =
        (0..=d_max).map(|d| (d >= from).then(|| g.eval_log(d).unwrap())).collect();
    let exact = exponent.iter().flatten().all(Rational::is_integer);
    let own: Vec<Option<Cost>> = exponent
        .iter()
        .map(|e| e.as_ref().map(|e| Cost { iv: pow2_neg(e), exact: exact.then(|| pow2_neg_exact(e)) }))
        .collect();
    let branching: Vec<bool> = (0..d_max).map(branching).collect();
    let len = d_max as usize + 1;
    let mut full = vec![Cost::zero(exact); len];
    let mut full_target = vec![d_max; len];
    for d in (0..len).rev() {
        let split = (d < len - 1).then(|| {
            let below = &full[d + 1];
            if branching[d] {
                below.double()
            } else {
                below.clone()
            }
        });
        let (cost, take) = choose(own[d].as_ref(), split).expect("bottom depth is always coverable");
        full[d] = cost;
        if !take {
            full_target[d] = full_target[d + 1];
        } else {
            full_target[d] = d as u64;
        }
    }
    Ok(Tables { exponent, full, full_target, branching })
}

/// Minimum-cost cover of `a` by cylinders of depth in `[n, a.max_depth()]`.
pub fn premeasure(a: &CylinderTrie, f: &PiecewiseGauge, n: u64, emit_cover: bool) -> Result<CoverResult> {
    premeasure_within(a, f, n, &|_| true, emit_cover)
}

/// As [`premeasure`], inside a subtree of Cantor space that branches only at
/// depths where `branching` holds; a terminal trie node stands for every
/// branch of that subtree through it.
pub fn premeasure_within(
    a: &CylinderTrie,
    f: &PiecewiseGauge,
    n: u64,
    branching: &dyn Fn(u64) -> bool,
    emit_cover: bool,
) -> Result<CoverResult> {
    let d_max = a.max_depth() as u64;
    let t = tables(f, n, d_max, branching)?;
    let exact = t.full[0].exact.is_some();
    let own = |d: usize| {
        t.exponent[d].as_ref().map(|e| Cost { iv: pow2_neg(e), exact: exact.then(|| pow2_neg_exact(e)) })
    };
    let mut cost: Vec<Option<Cost>> = vec![None; a.nodes.len()];
    let mut take = vec![false; a.nodes.len()];
    for id in (0..a.nodes.len()).rev() {
        let node = &a.nodes[id];
        let d = node.depth as usize;
        if node.terminal {
            cost[id] = Some(t.full[d].clone());
            continue;
        }
        let mut split = Cost::zero(exact);
        for c in node.child {
            if c != 0 {
                split = split.add(cost[c as usize].as_ref().unwrap());
            }
        }
        let empty = node.child == [0, 0];
        let (c, own_taken) = if empty { (split, false) } else { choose(own(d).as_ref(), Some(split)).unwrap() };
        cost[id] = Some(c);
        take[id] = own_taken;
    }
    let root = cost[0].take().unwrap();

    // walk the choices; each root is (depth, path, covers a full subtree)
    let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
    let mut roots: Vec<(usize, BitWord, bool)> = Vec::new();
    let mut stack = vec![(0usize, BitWord::new())];
    while let Some((id, w)) = stack.pop() {
        let node = &a.nodes[id];
        let d = node.depth as usize;
        if node.terminal {
            let target = t.full_target[d];
            let free = (d..target as usize).filter(|&k| t.branching[k]).count();
            *counts.entry(target).or_insert_with(BigUint::zero) += BigUint::one() << free;
            roots.push((d, w, true));
        } else if take[id] {
            *counts.entry(d as u64).or_insert_with(BigUint::zero) += 1u32;
            roots.push((d, w, false));
        } else {
            for b in [true, false] {
                let c = node.child[b as usize];
                if c != 0 {
                    stack.push((c as usize, w.child(b)));
                }
            }
        }
    }
    let terms: Vec<CoverTerm> = counts
        .into_iter()
        .map(|(depth, count)| CoverTerm { depth, count, exponent: t.exponent[depth as usize].clone().unwrap() })
        .collect();
    let total: BigUint = terms.iter().map(|x| &x.count).sum();
    let cover = (emit_cover && total <= BigUint::from(COVER_WORD_CAP)).then(|| {
        let mut out = Vec::new();
        for (d, w, terminal) in roots {
            if terminal {
                expand(&w, d, t.full_target[d] as usize, &t.branching, &mut out);
            } else {
                out.push(w);
            }
        }
        out.sort();
        out
    });
    Ok(CoverResult { cost: root.iv, exact: root.exact, terms, cover })
}

fn expand(w: &BitWord, d: usize, target: usize, branching: &[bool], out: &mut Vec<BitWord>) {
    if d == target {
        out.push(w.clone());
        return;
    }
    expand(&w.child(false), d + 1, target, branching, out);
    if branching[d] {
        expand(&w.child(true), d + 1, target, branching, out);
    }
}

/// Both sides of the finite-depth pushforward comparison.
#[derive(Clone, Debug, Serialize)]
pub struct PushforwardReport {
    pub block: usize,
    /// `l_{n+1}`: cover depth on the image side.
    pub image_depth: u64,
    /// `k` at `l_{n+1}`: cover depth on the source side.
    pub source_depth: u64,
    /// Gauge premeasure of the diluted set.
    pub image: CoverResult,
    /// Identity-gauge premeasure of the original set.
    pub source: CoverResult,
    /// `image ≥ source`, certified.
    pub holds: bool,
}

/// Compares the `f`-premeasure of the diluted set at depth `l_{n+1}` with the
/// identity-gauge premeasure of the original set at depth `k_{l_{n+1}}`.
pub fn pushforward_check(
    a: &CylinderTrie,
    sch: &TreeSchedule,
    f: &PiecewiseGauge,
    block: usize,
) -> Result<PushforwardReport> {
    if block >= sch.blocks() {
        return Err(Error::ScheduleTooShort { len: block as u64 + 1, limit: sch.blocks() as u64 });
    }
    let image_depth = sch.l[block + 1];
    let source_depth = sch.split_count(image_depth)?;
    if a.max_depth() as u64 > source_depth {
        return Err(Error::ScheduleTooShort { len: a.max_depth() as u64, limit: source_depth });
    }
    let words = a.words();
    let source_trie = CylinderTrie::from_words(&words, Some(source_depth as usize))?;
    let mut image_trie = CylinderTrie::new(image_depth as usize);
    for w in &words {
        image_trie.insert(&sch.dilute(w)?)?;
    }
    let image = premeasure_within(&image_trie, f, image_depth, &|d| sch.is_free(d), false)?;
    let source = premeasure(&source_trie, &PiecewiseGauge::power(Rational::one()), source_depth, false)?;
    let holds = match (&image.exact, &source.exact) {
        (Some(p1), Some(p2)) => p1 >= p2,
        _ => image.cost.lo >= source.cost.hi,
    };
    Ok(PushforwardReport { block, image_depth, source_depth, image, source, holds })
}

/// Transports cover cylinders to dyadic subintervals of `[0, 1]`.
pub fn map_to_unit_interval(cover: &[BitWord]) -> Vec<DyadicInterval> {
    cover.iter().map(pi_map).collect()
}
