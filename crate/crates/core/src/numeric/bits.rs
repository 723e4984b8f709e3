use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rational;
use crate::error::Error;

/// A finite binary word. Bit `k` is the `k`-th symbol (0-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitWord { bits }
    }

    pub fn zeros(len: usize) -> Self {
        BitWord { bits: vec![false; len] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, k: usize) -> bool {
        self.bits[k]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn set(&mut self, k: usize, b: bool) {
        self.bits[k] = b;
    }

    pub fn prefix(&self, len: usize) -> BitWord {
        BitWord { bits: self.bits[..len].to_vec() }
    }

    pub fn child(&self, b: bool) -> BitWord {
        let mut w = self.clone();
        w.push(b);
        w
    }

    pub fn is_prefix_of(&self, other: &BitWord) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn concat(&self, other: &BitWord) -> BitWord {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitWord { bits }
    }

    /// Big-endian integer value of the word (`"101"` → 5).
    pub fn to_biguint(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &b in &self.bits {
            v <<= 1u32;
            if b {
                v += 1u32;
            }
        }
        v
    }

    /// The word of length `len` spelling `value` in binary, most significant bit first.
    pub fn from_index(value: &BigUint, len: usize) -> BitWord {
        let bits = (0..len).map(|k| value.bit((len - 1 - k) as u64)).collect();
        BitWord { bits }
    }

    /// All words of a given length in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BitWord> {
        assert!(len < 63);
        (0u64..(1u64 << len)).map(move |v| BitWord::from_index(&BigUint::from(v), len))
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.trim().chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => return Err(Error::MalformedBits(c)),
            }
        }
        Ok(BitWord { bits })
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl Serialize for BitWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The half-open interval `[i·2^-n, (i+1)·2^-n)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DyadicInterval {
    pub index: BigUint,
    pub depth: u64,
}

impl DyadicInterval {
    pub fn new(index: BigUint, depth: u64) -> Self {
        assert!(index.bits() <= depth, "dyadic index out of range");
        DyadicInterval { index, depth }
    }

    pub fn left(&self) -> Rational {
        Rational::new(
            num_bigint::BigInt::from(self.index.clone()),
            num_bigint::BigInt::from(BigUint::from(1u32) << self.depth),
        )
    }

    pub fn right(&self) -> Rational {
        Rational::new(
            num_bigint::BigInt::from(self.index.clone() + 1u32),
            num_bigint::BigInt::from(BigUint::from(1u32) << self.depth),
        )
    }

    pub fn length(&self) -> Rational {
        self.right() - self.left()
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.left(), self.right())
    }
}

impl Serialize for DyadicInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DyadicInterval", 2)?;
        match self.index.to_u64() {
            Some(i) => st.serialize_field("i", &i)?,
            None => st.serialize_field("i", &self.index.to_string())?,
        }
        st.serialize_field("n", &self.depth)?;
        st.end()
    }
}

/// Maps the cylinder `[w]` to its dyadic interval: bit `k` contributes `2^-(k+1)`.
pub fn pi_map(w: &BitWord) -> DyadicInterval {
    DyadicInterval { index: w.to_biguint(), depth: w.len() as u64 }
}
