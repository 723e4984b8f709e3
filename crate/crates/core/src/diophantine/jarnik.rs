use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::{PiecewiseGauge, TailRule};
use crate::numeric::{pow2_f64, Interval, Rational};

/// Verdict on `Σ_{q≥1} q·f(q^{-t})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SeriesVerdict {
    ConvergesWithBound { upper: f64 },
    DivergesCertified { reason: String },
    Unknown { reason: String },
}

impl SeriesVerdict {
    pub fn converges(&self) -> bool {
        matches!(self, SeriesVerdict::ConvergesWithBound { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JarnikReport {
    pub exponent: Rational,
    pub verdict: SeriesVerdict,
    /// Terms `q < head_terms` summed directly.
    pub head_terms: u64,
    pub head: Interval,
    pub tail_upper: f64,
    /// Whether `x^-1 f(x) → ∞`, the criterion's standing hypothesis.
    pub ratio_diverges: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JarnikOptions {
    pub initial_head: u64,
    pub max_head: u64,
    /// Head grows until the tail bound is at most this fraction of the head.
    pub tail_fraction: f64,
}

impl Default for JarnikOptions {
    fn default() -> Self {
        JarnikOptions { initial_head: 1 << 10, max_head: 1 << 22, tail_fraction: 0.1 }
    }
}

/// One linear piece in float form for fast head summation.
struct Piece {
    start: f64,
    anchor: f64,
    slope: f64,
}

fn pieces(g: &PiecewiseGauge) -> Vec<Piece> {
    g.blocks()
        .map(|b| Piece { start: b.start as f64, anchor: b.start_value.to_f64(), slope: b.slope.to_f64() })
        .collect()
}

/// Encloses `Σ_{q=from}^{to-1} q·2^{-E(t·log₂ q)}`.
fn head_sum(ps: &[Piece], t: f64, from: u64, to: u64) -> Interval {
    let mut acc = Interval::ZERO;
    let mut k = 0usize;
    for q in from..to {
        let lg = (q as f64).log2();
        let depth = t * lg;
        while k + 1 < ps.len() && ps[k + 1].start <= depth {
            k += 1;
        }
        let p = &ps[k];
        let e = p.anchor + p.slope * (depth - p.start);
        let x = lg - e;
        let err = 1e-13 * (1.0 + depth.abs() + e.abs());
        acc = acc.add(&pow2_f64(x, err));
    }
    acc
}

/// Upper bound on `log₂ Σ_{q≥A} q^α` for `α < −1`, `A ≥ 1`, with `log₂ A = l`.
fn log2_zeta_tail(alpha: f64, l: f64) -> f64 {
    let beta = -alpha - 1.0;
    let a = alpha * l;
    let b = (alpha + 1.0) * l - beta.log2();
    let hi = a.max(b);
    let v = hi + (a.min(b) - hi).exp2().ln_1p() / std::f64::consts::LN_2;
    v + 1e-12 * (1.0 + a.abs() + b.abs())
}

enum Tail {
    Bound(f64),
    Diverges(String),
    Unknown(String),
}

/// Bounds the terms with `q ≥ p` block by block.
fn tail_bound(f: &PiecewiseGauge, t: &Rational, p: u64) -> Tail {
    if let Some(TailRule::Separating { s }) = f.tail_rule() {
        let needed = Rational::from(2i64) / s;
        if t > &needed && f.is_doubling_monotone() {
            // f is non-decreasing, so each term is at most its value at exponent 2/s
            return tail_bound(f, &needed, p);
        }
    }
    let tf = t.to_f64();
    let log_p = (p as f64).log2();
    let (g, generated_from) = match f.tail_rule() {
        None => return Tail::Unknown("gauge has no tail information".into()),
        Some(TailRule::Power) => (f.clone(), None),
        Some(TailRule::Separating { s }) => {
            let needed = Rational::from(2i64) / s;
            if t < &needed {
                return Tail::Unknown(format!("exponent {t} is below 2/s = {needed}"));
            }
            // one generated block closes the last stored one
            let ext = f.extended_to(f.horizon()).into_owned();
            (ext, Some(f.block_count()))
        }
    };
    let blocks: Vec<_> = g.blocks().collect();
    let stored = generated_from.unwrap_or(blocks.len());
    let mut total = 0.0f64;
    for (k, b) in blocks.iter().enumerate().take(stored) {
        let end = if k + 1 < blocks.len() { Some(blocks[k + 1].start) } else { b.end };
        if let Some(e) = end {
            if (e as f64) / tf < log_p - 1e-9 {
                continue;
            }
        }
        let alpha_exact = Rational::one() - t * b.slope;
        let alpha = alpha_exact.to_f64();
        // log₂ of the block constant: r·a − E(a)
        let log_c = (b.slope * &Rational::from(b.start) - b.start_value).to_f64();
        let log_c = log_c + 1e-12 * (1.0 + log_c.abs());
        let start_log = if k == 0 { 0.0 } else { b.start as f64 / tf * (1.0 - 1e-12) };
        let l = log_p.max(start_log);
        if alpha_exact >= -Rational::one() {
            match end {
                None => return Tail::Diverges(format!("tail terms behave like q^{alpha_exact}")),
                Some(e) => {
                    // finitely many terms, each at most C·max(A^α, B^α)
                    let log_b = e as f64 / tf + 1e-9;
                    let log_terms = log_b + 1.0;
                    let log_max = (alpha * l).max(alpha * log_b);
                    total += (log_c + log_terms + log_max).exp2() * (1.0 + 1e-12);
                }
            }
        } else {
            total += (log_c + log2_zeta_tail(alpha, l)).exp2() * (1.0 + 1e-12);
        }
    }
    if let (Some(first), Some(TailRule::Separating { s })) = (generated_from, f.tail_rule()) {
        // generated block n contributes at most 2^-n once E ≥ r_n·depth holds at its start
        let b = &blocks[first];
        if *b.start_value < b.slope * &Rational::from(b.start) {
            return Tail::Unknown("stored blocks do not lead into the generated tail".into());
        }
        let n = (b.slope - s).recip().to_f64();
        total += (1.0 - n).exp2();
    }
    Tail::Bound(total.next_up())
}

/// Jarník-type series test for `Σ_q q·f(q^{-t})`.
pub fn jarnik_series(f: &PiecewiseGauge, t: &Rational, opts: &JarnikOptions) -> Result<JarnikReport> {
    if !t.is_positive() {
        return Err(Error::Precondition("series exponent must be positive".into()));
    }
    let tf = t.to_f64();
    let reach = (tf * (opts.max_head as f64).log2()).ceil() as u64 + 1;
    let ext = f.extended_to(reach);
    let ps = pieces(&ext);
    let mut p = opts.initial_head.max(2);
    let mut head = head_sum(&ps, tf, 1, p);
    let ratio_diverges = f.ratio_diverges();
    loop {
        let tail = tail_bound(f, t, p);
        let (verdict, tail_upper) = match tail {
            Tail::Diverges(reason) => (SeriesVerdict::DivergesCertified { reason }, f64::INFINITY),
            Tail::Unknown(reason) => (SeriesVerdict::Unknown { reason }, f64::INFINITY),
            Tail::Bound(b) => {
                if b > opts.tail_fraction * head.lo && p < opts.max_head {
                    let next = (p * 2).min(opts.max_head);
                    head = head.add(&head_sum(&ps, tf, p, next));
                    p = next;
                    continue;
                }
                (SeriesVerdict::ConvergesWithBound { upper: (head.hi + b).next_up() }, b)
            }
        };
        return Ok(JarnikReport { exponent: t.clone(), verdict, head_terms: p, head, tail_upper, ratio_diverges });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::construct_separating;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn harmonic_diverges() {
        let r = jarnik_series(&PiecewiseGauge::power(q("1")), &q("2"), &JarnikOptions::default()).unwrap();
        assert!(matches!(r.verdict, SeriesVerdict::DivergesCertified { .. }));
    }

    #[test]
    fn steep_power_converges_above_partial_sums() {
        let f = PiecewiseGauge::power(q("11/10"));
        let r = jarnik_series(&f, &q("2"), &JarnikOptions::default()).unwrap();
        let SeriesVerdict::ConvergesWithBound { upper } = r.verdict else { panic!("{r:?}") };
        let partial: f64 = (1..=1_000_000u64).map(|q| (q as f64).powf(-1.2)).sum();
        assert!(upper >= partial, "{upper} < {partial}");
        // ζ(1.2) ≈ 5.5916
        assert!(upper < 5.5916 * 1.2);
    }

    #[test]
    fn separating_gauge_converges_at_its_exponent() {
        for s in ["1/2", "2/3"] {
            let s = q(s);
            let f = construct_separating(&s, 8).unwrap();
            let t = Rational::from(2i64) / &s;
            let r = jarnik_series(&f, &t, &JarnikOptions::default()).unwrap();
            assert!(r.verdict.converges(), "{r:?}");
            assert_eq!(r.ratio_diverges, Some(true));
            let below = jarnik_series(&f, &(t - q("1/10")), &JarnikOptions::default()).unwrap();
            assert!(matches!(below.verdict, SeriesVerdict::Unknown { .. }));
        }
    }

    #[test]
    fn table_gauge_is_unknown() {
        let g = PiecewiseGauge::table(vec![0, 5], vec![q("1"), q("1/2")], q("0")).unwrap();
        let r = jarnik_series(&g, &q("4"), &JarnikOptions::default()).unwrap();
        assert!(matches!(r.verdict, SeriesVerdict::Unknown { .. }));
    }
}
