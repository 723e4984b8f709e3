use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{BitWord, Rational};

/// Where the quotients came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CfSource {
    Rational { value: Rational },
    /// A real known to lie in `[lo, hi]`.
    Enclosure { lo: Rational, hi: Rational },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuedFraction {
    /// `a_0; a_1, a_2, …`
    #[serde(serialize_with = "ser_ints")]
    pub quotients: Vec<BigInt>,
    pub source: CfSource,
    /// The expansion terminated (the value is the last convergent).
    pub complete: bool,
    /// Expansion stopped because the enclosure no longer fixes the next quotient.
    pub needs_more_digits: bool,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Continued fraction of an exact rational, up to `max_terms` quotients.
pub fn cf_expand_rational(x: &Rational, max_terms: usize) -> ContinuedFraction {
    let mut quotients = Vec::new();
    let mut v = x.clone();
    let mut complete = false;
    while quotients.len() < max_terms {
        let a = v.floor();
        let frac = &v - &Rational::from_integer(a.clone());
        quotients.push(a);
        if frac.is_zero() {
            complete = true;
            break;
        }
        v = frac.recip();
    }
    ContinuedFraction {
        quotients,
        source: CfSource::Rational { value: x.clone() },
        complete,
        needs_more_digits: false,
    }
}

/// Quotients shared by every real in `[lo, hi]`, up to `max_terms`.
pub fn cf_expand_enclosure(lo: &Rational, hi: &Rational, max_terms: usize) -> Result<ContinuedFraction> {
    if lo > hi {
        return Err(Error::Precondition("enclosure is inverted".into()));
    }
    let mut quotients = Vec::new();
    let (mut a_lo, mut a_hi) = (lo.clone(), hi.clone());
    let mut needs_more_digits = false;
    let mut complete = false;
    while quotients.len() < max_terms {
        let a = a_lo.floor();
        if a != a_hi.floor() {
            needs_more_digits = true;
            break;
        }
        let base = Rational::from_integer(a.clone());
        let (f_lo, f_hi) = (&a_lo - &base, &a_hi - &base);
        quotients.push(a);
        if f_lo.is_zero() {
            // the value may terminate here or continue with a large quotient
            if f_hi.is_zero() {
                complete = true;
            } else {
                needs_more_digits = true;
            }
            break;
        }
        (a_lo, a_hi) = (f_hi.recip(), f_lo.recip());
    }
    if quotients.is_empty() {
        return Err(Error::NeedMoreDigits);
    }
    Ok(ContinuedFraction {
        quotients,
        source: CfSource::Enclosure { lo: lo.clone(), hi: hi.clone() },
        complete,
        needs_more_digits,
    })
}

/// The enclosure `[0.d, 0.d + 2^-n]` of a real in `[0, 1]` given by its first `n` binary digits.
pub fn digits_enclosure(digits: &BitWord) -> (Rational, Rational) {
    let n = digits.len();
    let den = BigInt::one() << n;
    let num = BigInt::from(digits.to_biguint());
    let lo = Rational::new(num.clone(), den.clone());
    let hi = Rational::new(num + 1, den);
    (lo, hi)
}

/// Continued fraction from a binary digit prefix; see [`cf_expand_enclosure`].
pub fn cf_expand_digits(digits: &BitWord, max_terms: usize) -> Result<ContinuedFraction> {
    let (lo, hi) = digits_enclosure(digits);
    cf_expand_enclosure(&lo, &hi, max_terms)
}

/// Convergents `p_k / q_k` by the standard recurrence.
pub fn convergents(cf: &ContinuedFraction) -> Vec<(BigInt, BigInt)> {
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p_prev2, mut q_prev2) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(cf.quotients.len());
    for a in &cf.quotients {
        let p = a * &p_prev + &p_prev2;
        let q = a * &q_prev + &q_prev2;
        (p_prev2, q_prev2) = (p_prev, q_prev);
        (p_prev, q_prev) = (p.clone(), q.clone());
        out.push((p, q));
    }
    out
}

/// `⌊√(5·4^n)⌋`-based binary digits of `(√5 − 1)/2`, for tests and demos.
pub fn golden_digits(n: usize) -> BitWord {
    let scaled = (BigUint::from(5u32) << (2 * n)).sqrt();
    let v = (scaled - (BigUint::one() << n)) >> 1;
    BitWord::from_index(&v, n)
}
