use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::cf::{convergents, ContinuedFraction};
use crate::error::{Error, Result};
use crate::numeric::{biguint_pow, log2_bounds, to_biguint, BitWord, Rational};

/// A real given exactly or by a certified enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum RealValue {
    Exact(Rational),
    Enclosed { lo: Rational, hi: Rational },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    True,
    False,
    Unknown,
}

/// Exact test of `d < q^{-s}` for `d ≥ 0`, `q ≥ 1`, `s > 0`.
fn below_power(d: &Rational, q: &BigUint, s: &Rational) -> bool {
    if d.is_zero() {
        return true;
    }
    // d = a/b, s = u/v:  d < q^{-u/v}  <=>  a^v·q^u < b^v
    let a = to_biguint(d.numer()).unwrap();
    let b = to_biguint(d.denom()).unwrap();
    let u = to_biguint(s.numer()).unwrap().to_u64().expect("exponent numerator too large");
    let v = to_biguint(s.denom()).unwrap().to_u64().expect("exponent denominator too large");
    biguint_pow(&a, v) * biguint_pow(q, u) < biguint_pow(&b, v)
}

/// Decides `|x − p/q| < q^{-s}`.
pub fn is_witness(x: &RealValue, p: &BigInt, q: &BigUint, s: &Rational) -> Result<Decision> {
    if q.is_zero() {
        return Err(Error::Precondition("q must be positive".into()));
    }
    if !s.is_positive() {
        return Err(Error::Precondition("exponent must be positive".into()));
    }
    let c = Rational::new(p.clone(), BigInt::from(q.clone()));
    let (near, far) = match x {
        RealValue::Exact(v) => {
            let d = (v - &c).abs();
            (d.clone(), d)
        }
        RealValue::Enclosed { lo, hi } => {
            let far = (lo - &c).abs().max((hi - &c).abs());
            let near = if lo <= &c && &c <= hi { Rational::zero() } else { (lo - &c).abs().min((hi - &c).abs()) };
            (near, far)
        }
    };
    Ok(if below_power(&far, q, s) {
        Decision::True
    } else if !below_power(&near, q, s) {
        Decision::False
    } else {
        Decision::Unknown
    })
}

/// Certified lower bounds `1 + log q_{k+1} / log q_k` from consecutive convergents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentBound {
    /// Bound from the last usable pair; tends to the irrationality exponent
    /// along the sequence.
    pub trailing: Rational,
    /// Largest bound over all usable pairs.
    pub max: Rational,
    pub per_pair: Vec<Rational>,
}

/// Rounds a certified float lower bound down to a rational on a `2^-40` grid.
fn floor_rational(v: f64) -> Rational {
    let scaled = (v * (1u64 << 40) as f64).floor();
    Rational::new(BigInt::from(scaled as i128), BigInt::one() << 40)
}

pub fn exponent_lower_bound(cf: &ContinuedFraction) -> Result<ExponentBound> {
    let conv = convergents(cf);
    let qs: Vec<BigUint> = conv.iter().map(|(_, q)| q.magnitude().clone()).collect();
    let mut per_pair = Vec::new();
    for w in qs.windows(2) {
        if w[0] < BigUint::from(2u32) {
            continue;
        }
        let (a_lo, _) = log2_bounds(&w[1]);
        let (_, b_hi) = log2_bounds(&w[0]);
        let v = 1.0 + a_lo / b_hi;
        per_pair.push(floor_rational(v.next_down()));
    }
    let trailing = per_pair.last().cloned().ok_or(Error::Precondition("need two convergents with q ≥ 2".into()))?;
    let max = per_pair.iter().cloned().reduce(Rational::max).unwrap();
    Ok(ExponentBound { trailing, max, per_pair })
}

/// Gap schedule of a lacunary binary expansion `Σ 2^{-g(k)}`.
#[derive(Clone, Debug, PartialEq)]
pub enum GapSchedule {
    /// `g(k) = k!`
    Factorial,
    /// Explicit strictly increasing gaps.
    Explicit(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiouvilleNumber {
    pub gaps: GapSchedule,
    /// Number of terms; `None` for the infinite series.
    pub terms: Option<usize>,
}

impl LiouvilleNumber {
    pub fn factorial() -> Self {
        LiouvilleNumber { gaps: GapSchedule::Factorial, terms: None }
    }

    /// `g(k)` for `k ≥ 1`, or `None` past the schedule or on overflow.
    pub fn gap(&self, k: usize) -> Option<u64> {
        if k == 0 || self.terms.is_some_and(|t| k > t) {
            return None;
        }
        match &self.gaps {
            GapSchedule::Factorial => (1..=k as u64).try_fold(1u64, |a, b| a.checked_mul(b)),
            GapSchedule::Explicit(v) => v.get(k - 1).copied(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let GapSchedule::Explicit(v) = &self.gaps {
            if v.first() == Some(&0) || v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Precondition("gaps must be positive and strictly increasing".into()));
            }
        }
        Ok(())
    }

    /// The sum of the first `k` terms and an enclosure of the full value.
    pub fn enclosure(&self, k: usize) -> Result<(Rational, Rational, Rational)> {
        self.validate()?;
        let mut sum = Rational::zero();
        for j in 1..=k {
            let g = self.gap(j).ok_or(Error::Precondition(format!("term {j} is not defined")))?;
            sum = sum + Rational::new(1, BigInt::one() << g);
        }
        match self.gap(k + 1) {
            // gaps increase by at least 1, so the tail is at most twice its first term
            Some(g) => {
                let first = Rational::new(1, BigInt::one() << g);
                let lo = &sum + &first;
                let hi = &sum + &(first * Rational::from(2i64));
                Ok((sum, lo, hi))
            }
            None if self.terms.is_some() || matches!(self.gaps, GapSchedule::Explicit(_)) => {
                Ok((sum.clone(), sum.clone(), sum))
            }
            None => Err(Error::Precondition("gap overflow".into())),
        }
    }
}

/// First `n` binary digits of `Σ_k 2^{-g(k)}`: ones exactly at positions `g(k) − 1`.
pub fn liouville_digits(number: &LiouvilleNumber, n: usize) -> Result<BitWord> {
    number.validate()?;
    let mut w = BitWord::zeros(n);
    for k in 1.. {
        match number.gap(k) {
            Some(g) if (g as usize) <= n => w.set(g as usize - 1, true),
            _ => break,
        }
    }
    Ok(w)
}

/// Depth-`k` prefixes compatible with a witness `(p, q)` at exponent `2/s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Revelation {
    pub candidates: Vec<BitWord>,
    /// `log₂ p + log₂ q + log₂ k` (the constant is omitted).
    pub codelength_bits: f64,
}

/// The depth-`k` dyadic cells meeting `(p/q − q^{-2/s}, p/q + q^{-2/s})`.
pub fn reveal_prefix(p: &BigUint, q: &BigUint, s: &Rational, k: u64) -> Result<Revelation> {
    if q.is_zero() || p > q {
        return Err(Error::Precondition("need 0 ≤ p/q ≤ 1".into()));
    }
    if !(s.is_positive()) {
        return Err(Error::Precondition("s must be positive".into()));
    }
    let t = Rational::from(2i64) / s;
    let u = to_biguint(t.numer()).unwrap().to_u64().unwrap();
    let v = to_biguint(t.denom()).unwrap().to_u64().unwrap();
    // k ≤ t·log₂ q  <=>  2^{k·v} ≤ q^u
    if (BigUint::one() << (k * v)) > biguint_pow(q, u) {
        return Err(Error::RevealBudget { k });
    }
    let c = Rational::new(BigInt::from(p.clone()), BigInt::from(q.clone()));
    let cell = Rational::new(1, BigInt::one() << k);
    let centre = (&c / &cell).floor();
    let cells = BigInt::one() << k;
    let mut candidates = Vec::new();
    for off in [-1i64, 0, 1] {
        let i = &centre + off;
        if i.is_negative() || i >= cells {
            continue;
        }
        let left = Rational::from_integer(i.clone()) * &cell;
        let right = &left + &cell;
        // [left, right) meets the open interval (c − ρ, c + ρ)
        let left_ok = left <= c || below_power(&(&left - &c), q, &t);
        let right_ok = right >= c || below_power(&(&c - &right), q, &t);
        if left_ok && right_ok {
            candidates.push(BitWord::from_index(&i.to_biguint().unwrap(), k as usize));
        }
    }
    let lg = |x: &BigUint| if x.is_zero() { 0.0 } else { log2_bounds(x).1 };
    let codelength_bits = lg(p) + lg(q) + if k > 0 { (k as f64).log2() } else { 0.0 };
    Ok(Revelation { candidates, codelength_bits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::cf::{cf_expand_rational, ContinuedFraction};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn witness_examples() {
        let number = LiouvilleNumber::factorial();
        let (sum, lo, hi) = number.enclosure(3).unwrap();
        assert_eq!(sum, q("49/64"));
        let x = RealValue::Enclosed { lo, hi };
        assert_eq!(is_witness(&x, &BigInt::from(49), &u(64), &q("10/3")).unwrap(), Decision::True);
        let half = RealValue::Exact(q("1/2"));
        assert_eq!(is_witness(&half, &BigInt::from(1), &u(2), &q("1000")).unwrap(), Decision::True);
        let third = RealValue::Exact(q("1/3"));
        assert_eq!(is_witness(&third, &BigInt::from(1), &u(2), &q("3")).unwrap(), Decision::False);
        // 1/6 against 2^{-5/2} ≈ 0.177: true
        assert_eq!(is_witness(&third, &BigInt::from(1), &u(2), &q("5/2")).unwrap(), Decision::True);
    }

    #[test]
    fn straddling_enclosure_is_unknown() {
        let x = RealValue::Enclosed { lo: q("1/2"), hi: q("3/4") };
        assert_eq!(is_witness(&x, &BigInt::from(1), &u(2), &q("3")).unwrap(), Decision::Unknown);
    }

    #[test]
    fn liouville_prefix() {
        let w = liouville_digits(&LiouvilleNumber::factorial(), 8).unwrap();
        assert_eq!(w.to_string(), "11000100");
        let w = liouville_digits(&LiouvilleNumber::factorial(), 30).unwrap();
        let ones: Vec<usize> = (0..30).filter(|&i| w.bit(i)).collect();
        assert_eq!(ones, vec![0, 1, 5, 23]);
        let sparse = LiouvilleNumber { gaps: GapSchedule::Explicit(vec![4, 9]), terms: None };
        assert_eq!(liouville_digits(&sparse, 3).unwrap().to_string(), "000");
        let bad = LiouvilleNumber { gaps: GapSchedule::Explicit(vec![3, 3]), terms: None };
        assert!(liouville_digits(&bad, 3).is_err());
    }

    #[test]
    fn reveal_examples() {
        let r = reveal_prefix(&u(49), &u(64), &q("3/5"), 20).unwrap();
        assert_eq!(r.candidates.len(), 2);
        let truth = liouville_digits(&LiouvilleNumber::factorial(), 20).unwrap();
        assert!(r.candidates.contains(&truth));
        assert!((r.codelength_bits - (49f64.log2() + 6.0 + 20f64.log2())).abs() < 1e-9);
        assert!(matches!(reveal_prefix(&u(49), &u(64), &q("3/5"), 21), Err(Error::RevealBudget { k: 21 })));
        // interior point with a small radius: one cell
        let one = reveal_prefix(&u(1), &u(3), &q("1/2"), 3).unwrap();
        assert_eq!(one.candidates, vec!["010".parse().unwrap()]);
        // a wider radius reaches both neighbours
        assert_eq!(reveal_prefix(&u(1), &u(3), &q("1"), 3).unwrap().candidates.len(), 3);
    }

    #[test]
    fn fibonacci_exponent_tends_to_two() {
        let mut quotients = vec![BigInt::zero()];
        quotients.extend(std::iter::repeat_n(BigInt::one(), 30));
        let cf = ContinuedFraction { quotients, ..cf_expand_rational(&q("0"), 1) };
        let b = exponent_lower_bound(&cf).unwrap();
        let t = b.trailing.to_f64();
        assert!(t > 2.0 && t < 2.05, "{t}");
        assert!(b.max >= b.trailing);
    }

    #[test]
    fn liouville_exponent_grows() {
        let number = LiouvilleNumber::factorial();
        // the truncation after k terms carries a bound close to k
        let (sum, _, _) = number.enclosure(6).unwrap();
        let b = exponent_lower_bound(&cf_expand_rational(&sum, 200)).unwrap();
        assert!(b.max > q("11/2"), "{}", b.max);
    }
}
