use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;

/// A nonnegative real stored as `2^(-E)` with rational `E`, or exact zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "exponent", rename_all = "kebab-case")]
pub enum Log2Value {
    Zero,
    Pow(Rational),
}

impl Log2Value {
    /// The value `2^(-e)`.
    pub fn from_exponent(e: Rational) -> Self {
        Log2Value::Pow(e)
    }

    pub fn exponent(&self) -> Option<&Rational> {
        match self {
            Log2Value::Zero => None,
            Log2Value::Pow(e) => Some(e),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Log2Value::Zero)
    }

    pub fn mul(&self, other: &Log2Value) -> Log2Value {
        match (self, other) {
            (Log2Value::Pow(a), Log2Value::Pow(b)) => Log2Value::Pow(a + b),
            _ => Log2Value::Zero,
        }
    }

    /// Exact value when the exponent is an integer.
    pub fn to_exact(&self) -> Option<Rational> {
        match self {
            Log2Value::Zero => Some(Rational::zero()),
            Log2Value::Pow(e) if e.is_integer() => Some(pow2_neg(e)),
            Log2Value::Pow(_) => None,
        }
    }
}

/// `2^(-e)` for an integer-valued rational `e`.
pub(crate) fn pow2_neg(e: &Rational) -> Rational {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    debug_assert!(e.is_integer());
    let k = e.floor();
    let two = BigInt::from(2);
    if k >= BigInt::from(0) {
        Rational::new(1, num_traits::pow(two, k.to_usize().expect("exponent too large")))
    } else {
        Rational::from_integer(num_traits::pow(two, (-k).to_usize().expect("exponent too large")))
    }
}

/// Total order on real values; zero is the minimum.
pub fn log2_compare(a: &Log2Value, b: &Log2Value) -> Ordering {
    match (a, b) {
        (Log2Value::Zero, Log2Value::Zero) => Ordering::Equal,
        (Log2Value::Zero, _) => Ordering::Less,
        (_, Log2Value::Zero) => Ordering::Greater,
        (Log2Value::Pow(x), Log2Value::Pow(y)) => y.cmp(x),
    }
}

impl PartialOrd for Log2Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Log2Value {
    fn cmp(&self, other: &Self) -> Ordering {
        log2_compare(self, other)
    }
}

impl fmt::Display for Log2Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Log2Value::Zero => write!(f, "0"),
            Log2Value::Pow(e) if e.is_integer() => write!(f, "2^-{}", e.numer()),
            Log2Value::Pow(e) => write!(f, "2^-({e})"),
        }
    }
}

impl fmt::Debug for Log2Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
