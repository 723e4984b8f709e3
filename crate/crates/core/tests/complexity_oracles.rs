use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use effdim::complexity::{codelength_bound, estimate_dim, lz_complexity, phrase_bits, phrase_count, prefix_phrase_counts};
use effdim::gauge::PiecewiseGauge;
use effdim::numeric::{BitWord, Rational};
use effdim::tree::{build_schedule, RSequence};

/// Kaspar–Schuster counting of the exhaustive-history parse, quadratic time.
fn kaspar_schuster(s: &[bool]) -> usize {
    let n = s.len();
    if n < 2 {
        return n;
    }
    let (mut i, mut c, mut l, mut k, mut k_max) = (0, 1, 1, 1, 1);
    loop {
        if s[i + k - 1] == s[l + k - 1] {
            k += 1;
            if l + k > n {
                c += 1;
                break;
            }
        } else {
            k_max = k_max.max(k);
            i += 1;
            if i == l {
                c += 1;
                l += k_max;
                if l + 1 > n {
                    break;
                }
                i = 0;
                k = 1;
                k_max = 1;
            } else {
                k = 1;
            }
        }
    }
    c
}

fn word(s: &str) -> BitWord {
    s.parse().unwrap()
}

fn biased(rng: &mut ChaCha8Rng, len: usize, p: f64) -> BitWord {
    BitWord::from_bits((0..len).map(|_| rng.gen_bool(p)).collect())
}

#[test]
fn oracle_reproduces_textbook_count() {
    assert_eq!(kaspar_schuster(word("0001101001000101").bits()), 6);
    assert_eq!(phrase_count(&word("0001101001000101")), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn phrase_count_matches_oracle(bits in prop::collection::vec(any::<bool>(), 0..400)) {
        let w = BitWord::from_bits(bits.clone());
        prop_assert_eq!(phrase_count(&w), kaspar_schuster(&bits));
    }

    #[test]
    fn prefix_counts_match_oracle(bits in prop::collection::vec(any::<bool>(), 1..300), cut in 0.0..1.0f64) {
        let w = BitWord::from_bits(bits.clone());
        let d = ((bits.len() as f64) * cut) as usize;
        let counts = prefix_phrase_counts(&w, &[d, bits.len()]);
        prop_assert_eq!(counts, vec![kaspar_schuster(&bits[..d]), kaspar_schuster(&bits)]);
    }

    #[test]
    fn extension_costs_at_most_one_phrase(bits in prop::collection::vec(any::<bool>(), 0..300), b in any::<bool>()) {
        let w = BitWord::from_bits(bits);
        let c = phrase_count(&w);
        let c2 = phrase_count(&w.child(b));
        prop_assert!(c <= c2 && c2 <= c + 1);
    }
}

#[test]
fn low_entropy_inputs_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [0.02, 0.1, 0.3] {
        for len in [50, 500, 3000] {
            let w = biased(&mut rng, len, p);
            assert_eq!(phrase_count(&w), kaspar_schuster(w.bits()), "p {p} len {len}");
        }
    }
}

#[test]
fn unary_input_is_cheap() {
    assert!(lz_complexity(&BitWord::zeros(1024)) <= 200);
    assert_eq!(lz_complexity(&BitWord::new()), 0);
    // O(√n·log n) envelope on unary input
    for n in [1usize << 10, 1 << 14, 1 << 17] {
        let bits = lz_complexity(&BitWord::zeros(n)) as f64;
        assert!(bits <= (n as f64).sqrt() * (n as f64).log2(), "n {n}: {bits}");
    }
}

#[test]
fn self_concatenation_is_cheap() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for len in [100, 1000, 10_000] {
        let w = biased(&mut rng, len, 0.5);
        let ww = w.concat(&w);
        let slack = 2 * (len as f64).log2().ceil() as u64 + 2;
        assert!(lz_complexity(&ww) <= 2 * lz_complexity(&w) + slack);
        // a repeat adds at most one phrase to the parse
        assert!(phrase_count(&ww) <= phrase_count(&w) + 1);
    }
}

#[test]
fn bit_cost_formula() {
    for c in [0usize, 1, 2, 3, 7, 8, 1000] {
        let width = (c as f64 + 1.0).log2().ceil() as u64 + 1;
        assert_eq!(phrase_bits(c), c as u64 * width);
    }
}

#[test]
fn zeros_estimate_near_zero() {
    let e = estimate_dim(&BitWord::zeros(100_000), None, None).unwrap();
    assert!(e.estimate <= 0.05, "{}", e.estimate);
}

#[test]
fn dilution_does_not_add_information() {
    let s: Rational = "1/2".parse().unwrap();
    let sch = build_schedule(&PiecewiseGauge::power(s.clone()), &s, &RSequence::Harmonic, 10, 1 << 30).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let x = biased(&mut rng, sch.total_free() as usize, 0.5);
    let d = sch.dilute(&x).unwrap();
    let ex = estimate_dim(&x, None, None).unwrap().estimate;
    let ed = estimate_dim(&d, None, None).unwrap().estimate;
    assert!(ed <= ex + 0.05, "diluted {ed} vs source {ex}");
}

#[test]
fn codelength_ratio_approaches_the_limit() {
    let s: Rational = "1/2".parse().unwrap();
    let sch = build_schedule(&PiecewiseGauge::power(s.clone()), &s, &RSequence::Harmonic, 21, 1 << 40).unwrap();
    let b = codelength_bound(&sch, 20, &Rational::zero()).unwrap();
    assert!(b.ratio.hi < 0.55, "{:?}", b.ratio);
    assert!(b.limit_check.hi < 0.55 && b.ratio.hi <= b.limit_check.hi);
    // and the ratios shrink towards s along the way
    let early = codelength_bound(&sch, 2, &Rational::zero()).unwrap();
    assert!(early.ratio.lo > b.ratio.hi);
}
