//! Browser bindings for three demo operations. Every export takes plain strings
//! and numbers and returns a JSON document, so the page needs no glue beyond
//! `JSON.parse`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use effdim::complexity::estimate_dim;
use effdim::gauge::{construct_separating, PiecewiseGauge};
use effdim::numeric::{BitWord, Rational};
use effdim::tree::{build_schedule, RSequence, TreeSchedule};

/// Largest input accepted by the browser demo; keeps a click well under a second.
const MAX_BLOCKS: usize = 24;
const MAX_STREAM: usize = 200_000;

type Out = Result<String, String>;

fn exponent(s: &str) -> Result<Rational, String> {
    let r: Rational = s.trim().parse().map_err(|e| format!("{e}"))?;
    if r <= Rational::zero() || r >= Rational::one() {
        return Err(format!("exponent {r} must lie strictly between 0 and 1"));
    }
    Ok(r)
}

fn blocks(n: usize) -> Result<usize, String> {
    if n == 0 || n > MAX_BLOCKS {
        return Err(format!("blocks must be in 1..={MAX_BLOCKS}"));
    }
    Ok(n)
}

fn schedule(s: &Rational, n: usize) -> Result<TreeSchedule, String> {
    build_schedule(&PiecewiseGauge::power(s.clone()), s, &RSequence::Harmonic, n, 1 << 40).map_err(|e| e.to_string())
}

fn to_json(v: &impl Serialize) -> Out {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Profile {
    breakpoints: Vec<u64>,
    slopes: Vec<String>,
    /// `(n, E(n)/n)` for every integer depth up to the last breakpoint plus one block.
    ratio: Vec<(u64, f64)>,
    s: f64,
}

/// Breakpoints, slopes and the normalised exponent `E(n)/n` of the separating gauge.
#[wasm_bindgen]
pub fn gauge_profile(s: &str, n: usize) -> Out {
    let s = exponent(s)?;
    let f = construct_separating(&s, blocks(n)?).map_err(|e| e.to_string())?;
    let last = *f.breakpoints().last().unwrap_or(&0);
    let reach = last + (last - f.breakpoints().first().copied().unwrap_or(0)) / n as u64 + 1;
    let ratio = (1..=reach).map(|d| (d, f.eval_log_f64(d as f64) / d as f64)).collect();
    to_json(&Profile {
        breakpoints: f.breakpoints().to_vec(),
        slopes: f.slopes().iter().map(|r| r.to_string()).collect(),
        ratio,
        s: s.to_f64(),
    })
}

#[derive(Serialize)]
struct Dilution {
    rows: Vec<effdim::tree::ScheduleRow>,
    diluted: String,
    /// One character per output position: `x` for a free bit, `0` for a forced zero.
    mask: String,
    restored: String,
}

/// Dilutes `bits` through the harmonic tree schedule at exponent `s`.
#[wasm_bindgen]
pub fn dilute(s: &str, n: usize, bits: &str) -> Out {
    let s = exponent(s)?;
    let sch = schedule(&s, blocks(n)?)?;
    let x: BitWord = bits.chars().filter(|c| !c.is_whitespace()).collect::<String>().parse().map_err(|e| format!("{e}"))?;
    let b = sch.dilute(&x).map_err(|e| e.to_string())?;
    let mask = (0..b.len() as u64).map(|p| if sch.is_free(p) { 'x' } else { '0' }).collect();
    let restored = sch.undilute(&b).map_err(|e| e.to_string())?;
    to_json(&Dilution { rows: sch.rows(), diluted: b.to_string(), mask, restored: restored.to_string() })
}

#[derive(Serialize)]
struct Curve {
    random: Vec<(usize, f64)>,
    diluted: Vec<(usize, f64)>,
    random_estimate: f64,
    diluted_estimate: f64,
}

/// Compression ratios of a seeded random stream and of its dilution at exponent `s`.
#[wasm_bindgen]
pub fn dimension_curve(s: &str, n: usize, seed: u64, len: usize) -> Out {
    let s = exponent(s)?;
    if len == 0 || len > MAX_STREAM {
        return Err(format!("length must be in 1..={MAX_STREAM}"));
    }
    let sch = schedule(&s, blocks(n)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = BitWord::from_bits((0..len).map(|_| rng.gen()).collect());
    // only the prefix that fits the schedule can be diluted
    let fit = (sch.total_free() as usize).min(len);
    let d = sch.dilute(&x.prefix(fit)).map_err(|e| e.to_string())?;
    let d = d.prefix(d.len().min(len));
    let rows = |w: &BitWord| estimate_dim(w, None, None).map_err(|e| e.to_string());
    let (er, ed) = (rows(&x)?, rows(&d)?);
    to_json(&Curve {
        random: er.rows.iter().map(|r| (r.depth, r.ratio)).collect(),
        diluted: ed.rows.iter().map(|r| (r.depth, r.ratio)).collect(),
        random_estimate: er.estimate,
        diluted_estimate: ed.estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(out: Out) -> Value {
        serde_json::from_str(&out.unwrap()).unwrap()
    }

    #[test]
    fn profile_oscillates_around_the_exponent() {
        let v = parse(gauge_profile("1/2", 6));
        assert_eq!(v["breakpoints"], serde_json::json!([0, 10, 17, 27, 40, 55]));
        assert_eq!(v["slopes"][0], "1/1");
        let ratio = v["ratio"].as_array().unwrap();
        assert!(ratio.iter().all(|p| p[1].as_f64().unwrap() > 0.5));
    }

    #[test]
    fn dilution_restores_its_input() {
        let v = parse(dilute("1/2", 2, "0110100110010110100101101001"));
        assert_eq!(v["diluted"], "0110100110010110100101101001000000000");
        assert_eq!(v["restored"], "0110100110010110100101101001");
        assert_eq!(v["mask"].as_str().unwrap().len(), 37);
        assert_eq!(v["rows"][1]["l_next"], 37);
    }

    #[test]
    fn diluted_stream_compresses_better() {
        let v = parse(dimension_curve("1/2", 14, 1, 20_000));
        let (r, d) = (v["random_estimate"].as_f64().unwrap(), v["diluted_estimate"].as_f64().unwrap());
        assert!(d < r, "diluted {d} vs random {r}");
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(gauge_profile("3/2", 4).is_err());
        assert!(gauge_profile("1/2", 0).is_err());
        assert!(dilute("1/2", 2, "01a").is_err());
        assert!(dimension_curve("1/2", 4, 0, 0).is_err());
    }
}
