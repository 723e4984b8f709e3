use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::Rational;

/// Closed interval `[lo, hi]` of reals with endpoints rounded outward.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

const EPS: f64 = f64::EPSILON;

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Encloses an exact rational.
    pub fn from_rational(r: &Rational) -> Self {
        let x = r.to_f64();
        Interval { lo: x.next_down(), hi: x.next_up() }
    }

    /// Encloses a float known only up to `rel` relative error.
    pub fn around(x: f64, rel: f64) -> Self {
        let d = x.abs() * rel;
        Interval { lo: (x - d).next_down(), hi: (x + d).next_up() }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certainly strictly below `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: (self.lo + other.lo).next_down(), hi: (self.hi + other.hi).next_up() }
    }

    /// Product of two nonnegative intervals.
    pub fn mul_nonneg(&self, other: &Interval) -> Interval {
        debug_assert!(self.lo >= 0.0 && other.lo >= 0.0);
        Interval { lo: (self.lo * other.lo).next_down().max(0.0), hi: (self.hi * other.hi).next_up() }
    }

    pub fn scale(&self, k: f64) -> Interval {
        debug_assert!(k >= 0.0);
        Interval { lo: (self.lo * k).next_down().max(0.0), hi: (self.hi * k).next_up() }
    }

    /// Elementwise minimum: encloses `min(x, y)` for `x ∈ self`, `y ∈ other`.
    pub fn min(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Multiplies by `2^k` in safe steps so large shifts saturate instead of producing NaN.
fn ldexp(mut v: f64, mut k: i64) -> f64 {
    while k > 1000 {
        v *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        v *= 2f64.powi(-1000);
        k += 1000;
    }
    v * 2f64.powi(k as i32)
}

/// Encloses `2^(-e)` for a rational `e`.
pub fn pow2_neg(e: &Rational) -> Interval {
    let k = e.floor();
    let frac = (e - &Rational::from_integer(k.clone())).to_f64();
    let k = k.to_i64().unwrap_or(if e.is_negative() { i64::MIN / 2 } else { i64::MAX / 2 });
    let v = (-frac).exp2();
    let (lo, hi) = if frac == 0.0 { (v, v) } else { (v * (1.0 - 4.0 * EPS), v * (1.0 + 4.0 * EPS)) };
    let lo = ldexp(lo, -k);
    let hi = ldexp(hi, -k);
    let lo = if frac == 0.0 && lo > 0.0 && lo.is_normal() { lo } else { lo.next_down().max(0.0) };
    let hi = if frac == 0.0 && hi.is_normal() { hi } else { hi.next_up() };
    Interval { lo, hi }
}

/// Encloses `2^x` for a float exponent known up to `abs_err`.
pub fn pow2_f64(x: f64, abs_err: f64) -> Interval {
    let lo = (x - abs_err).exp2() * (1.0 - 4.0 * EPS);
    let hi = (x + abs_err).exp2() * (1.0 + 4.0 * EPS);
    Interval { lo: lo.next_down().max(0.0), hi: hi.next_up() }
}

/// Lower and upper bounds on `log2(n)` for `n ≥ 1`.
pub fn log2_bounds(n: &BigUint) -> (f64, f64) {
    assert!(n.bits() > 0, "log2 of zero");
    let bits = n.bits();
    let (mantissa, shift) = if bits > 60 {
        ((n >> (bits - 60)).to_u64().unwrap(), bits - 60)
    } else {
        (n.to_u64().unwrap(), 0)
    };
    // mantissa ≤ n / 2^shift < mantissa + 1, with equality when nothing was shifted
    let lo = (mantissa as f64).log2() + shift as f64;
    let hi = if shift == 0 { lo } else { ((mantissa + 1) as f64).log2() + shift as f64 };
    let slack = 4.0 * EPS * hi.abs().max(1.0);
    (lo - slack, hi + slack)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_integer_exact() {
        let i = pow2_neg(&Rational::from(3i64));
        assert_eq!((i.lo, i.hi), (0.125, 0.125));
        let j = pow2_neg(&Rational::from(-2i64));
        assert_eq!((j.lo, j.hi), (4.0, 4.0));
    }

    #[test]
    fn pow2_fraction_encloses() {
        let i = pow2_neg(&Rational::new(5, 2));
        let truth = 2f64.powf(-2.5);
        assert!(i.lo < truth && truth < i.hi);
        assert!(i.width() < 1e-15);
    }

    #[test]
    fn pow2_deep_underflow_stays_sound() {
        let i = pow2_neg(&Rational::new(4001, 2));
        assert_eq!(i.lo, 0.0);
        assert!(i.hi > 0.0);
    }

    #[test]
    fn log2_bounds_bracket() {
        for n in [1u64, 2, 3, 37, 1 << 40, u64::MAX] {
            let (lo, hi) = log2_bounds(&BigUint::from(n));
            let t = (n as f64).log2();
            assert!(lo <= t && t <= hi, "{n}");
        }
        let big = BigUint::from(3u32).pow(200);
        let (lo, hi) = log2_bounds(&big);
        let t = 200.0 * 3f64.log2();
        assert!(lo <= t && t <= hi);
        assert!(hi - lo < 1e-9);
    }

    #[test]
    fn add_is_outward() {
        let a = Interval::point(0.1);
        let s = a.add(&Interval::point(0.2));
        assert!(s.lo < 0.30000000000000004 && s.hi > 0.3);
    }
}
