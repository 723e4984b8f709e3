use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::output::{exact, interval, log2, Report, Table};
use super::{CfSourceArgs, Command, Condition, DimCmd, DiophCmd, GaugeCmd, MeasureCmd, RunConfig, StreamSource, TreeCmd};
use crate::complexity::{codelength_bound, estimate_dim, ESTIMATE_LABEL};
use crate::diophantine::{
    cf_expand_digits, cf_expand_rational, convergents, digits_enclosure, exponent_lower_bound, is_witness,
    jarnik_series, liouville_digits, reveal_prefix, separation_report, ContinuedFraction, Decision, GapSchedule,
    JarnikOptions, JarnikReport, LiouvilleNumber, RealValue, SeriesVerdict,
};
use crate::error::{Error, Result};
use crate::gauge::{
    classify_dless, construct_separating, find_witness, undominated_above, DlessVerdict, GaugeFile, PiecewiseGauge,
};
use crate::measure::{premeasure, pushforward_check, CoverResult, CylinderTrie};
use crate::numeric::{BitWord, Rational};
use crate::tree::{build_schedule, RSequence, TreeSchedule};

pub(super) fn name(c: &Command) -> String {
    let sub = match c {
        Command::Gauge(g) => match g {
            GaugeCmd::BuildSeparating { .. } => "gauge build-separating",
            GaugeCmd::Check { .. } => "gauge check",
            GaugeCmd::Eval { .. } => "gauge eval",
            GaugeCmd::Witness { .. } => "gauge witness",
        },
        Command::Tree(t) => match t {
            TreeCmd::Build { .. } => "tree build",
            TreeCmd::Dilute { .. } => "tree dilute",
            TreeCmd::Member { .. } => "tree member",
        },
        Command::Measure(m) => match m {
            MeasureCmd::Premeasure { .. } => "measure premeasure",
            MeasureCmd::Pushforward { .. } => "measure pushforward",
        },
        Command::Dim(d) => match d {
            DimCmd::Estimate { .. } => "dim estimate",
            DimCmd::Bound { .. } => "dim bound",
        },
        Command::Dioph(d) => match d {
            DiophCmd::Cf { .. } => "dioph cf",
            DiophCmd::Witness { .. } => "dioph witness",
            DiophCmd::Reveal { .. } => "dioph reveal",
            DiophCmd::Liouville { .. } => "dioph liouville",
            DiophCmd::Jarnik { .. } => "dioph jarnik",
        },
        Command::Separate { .. } => "separate",
    };
    sub.to_string()
}

pub(super) fn execute(cfg: &RunConfig) -> Result<Report> {
    match &cfg.command {
        Command::Gauge(g) => gauge(g),
        Command::Tree(t) => tree(t),
        Command::Measure(m) => measure(m),
        Command::Dim(d) => dim(d, cfg.seed),
        Command::Dioph(d) => dioph(d),
        Command::Separate { s, blocks, .. } => separate(s, *blocks),
    }
}

// ---------------------------------------------------------------- file input

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_gauge(path: &Path) -> Result<PiecewiseGauge> {
    let file: GaugeFile = serde_json::from_str(&read_text(path)?)?;
    PiecewiseGauge::from_file(file)
}

fn read_schedule(path: &Path) -> Result<TreeSchedule> {
    TreeSchedule::read_jsonl(read_text(path)?.as_bytes())
}

fn read_bits(path: &Path) -> Result<BitWord> {
    let text: String = read_text(path)?.chars().filter(|c| !c.is_whitespace()).collect();
    text.parse()
}

fn read_trie(path: &Path) -> Result<CylinderTrie> {
    let f = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    CylinderTrie::read(BufReader::new(f), None)
}

fn seeded_bits(seed: u64, len: usize) -> BitWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BitWord::from_bits((0..len).map(|_| rng.gen()).collect())
}

fn reference_exponent(f: &PiecewiseGauge, s: Option<&Rational>) -> Result<Rational> {
    s.or(f.limit_exponent())
        .cloned()
        .ok_or_else(|| Error::Precondition("gauge has no limit exponent; pass --s".into()))
}

// ---------------------------------------------------------------- gauge

fn gauge(cmd: &GaugeCmd) -> Result<Report> {
    match cmd {
        GaugeCmd::BuildSeparating { s, blocks, out } => {
            let f = construct_separating(s, *blocks)?;
            let file = serde_json::to_value(f.to_file())?;
            let text = serde_json::to_string_pretty(&file)? + "\n";
            let human = match out {
                Some(p) => {
                    write_text(p, &text)?;
                    format!("wrote {} blocks to {}", f.block_count(), p.display())
                }
                None => text,
            };
            Ok(Report { json: json!({ "gauge": file }), human, table: None })
        }
        GaugeCmd::Check { file, condition, s } => {
            let f = read_gauge(file)?;
            let (holds, detail) = match condition {
                Condition::Monotone => (Some(f.is_doubling_monotone()), Value::Null),
                Condition::Undominated => {
                    let s = reference_exponent(&f, s.as_ref())?;
                    (undominated_above(&f, &s), json!({ "s": exact(&s) }))
                }
                Condition::Dless => {
                    let s = reference_exponent(&f, s.as_ref())?;
                    let v = classify_dless(&f, &s);
                    let holds = match &v {
                        DlessVerdict::Holds => Some(true),
                        DlessVerdict::Fails { .. } => Some(false),
                        DlessVerdict::UnknownAtHorizon { .. } => None,
                    };
                    let detail = match &v {
                        DlessVerdict::Fails { r, witnesses } => {
                            json!({ "s": exact(&s), "r": exact(r), "witnesses": witnesses })
                        }
                        DlessVerdict::UnknownAtHorizon { horizon } => json!({ "s": exact(&s), "horizon": horizon }),
                        DlessVerdict::Holds => json!({ "s": exact(&s) }),
                    };
                    (holds, detail)
                }
            };
            let verdict = match holds {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "unknown",
            };
            let cond = format!("{condition:?}").to_lowercase();
            Ok(Report {
                json: json!({ "condition": cond, "verdict": verdict, "detail": detail }),
                human: format!("{cond}: {verdict}"),
                table: None,
            })
        }
        GaugeCmd::Eval { file, depth } => {
            let f = read_gauge(file)?;
            let e = f.eval_log(*depth)?;
            Ok(Report {
                json: json!({ "depth": depth, "value": log2(&e) }),
                human: format!("E={}", show(&e)),
                table: None,
            })
        }
        GaugeCmd::Witness { file, r, start, budget } => {
            let f = read_gauge(file)?;
            let n = find_witness(&f, r, *start, *budget)?;
            let e = f.eval_log(n)?;
            Ok(Report {
                json: json!({ "r": exact(r), "depth": n, "value": log2(&e) }),
                human: format!("n={n} E={} r*n={}", show(&e), show(&(r * &Rational::from(n)))),
                table: None,
            })
        }
    }
}

/// Integers without the `/1`.
fn show(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        r.to_string()
    }
}

// ---------------------------------------------------------------- tree

fn tree(cmd: &TreeCmd) -> Result<Report> {
    match cmd {
        TreeCmd::Build { s, gauge, blocks, r, budget, out } => {
            let f = match gauge {
                Some(p) => read_gauge(p)?,
                None => PiecewiseGauge::power(s.clone()),
            };
            let seq = match r {
                Some(v) => RSequence::Explicit(v.clone()),
                None => RSequence::Harmonic,
            };
            let sch = build_schedule(&f, s, &seq, *blocks, *budget)?;
            let mut jsonl = Vec::new();
            sch.write_jsonl(&mut jsonl)?;
            let jsonl = String::from_utf8(jsonl).expect("schedule rows are utf-8");
            let mut table = Table::new(&["n", "r_n", "l_next", "r_star", "c_n"]);
            let mut rows = Vec::new();
            for row in sch.rows() {
                table.push(vec![
                    row.n.to_string(),
                    row.r_n.to_string(),
                    row.l_next.to_string(),
                    row.r_star.to_string(),
                    row.c_n.to_string(),
                ]);
                rows.push(json!({
                    "n": row.n,
                    "r_n": exact(&row.r_n),
                    "l_next": row.l_next,
                    "r_star": exact(&row.r_star),
                    "c_n": row.c_n,
                }));
            }
            let human = match out {
                Some(p) => {
                    write_text(p, &jsonl)?;
                    format!("wrote {} rows to {}", rows.len(), p.display())
                }
                None => jsonl,
            };
            Ok(Report {
                json: json!({ "s": exact(s), "rows": rows, "total_free": sch.total_free() }),
                human,
                table: Some(table),
            })
        }
        TreeCmd::Dilute { schedule, bits, inverse } => {
            let sch = read_schedule(schedule)?;
            let w = read_bits(bits)?;
            let out = if *inverse { sch.undilute(&w)? } else { sch.dilute(&w)? };
            Ok(Report {
                json: json!({ "input_len": w.len(), "output": out.to_string(), "output_len": out.len() }),
                human: out.to_string(),
                table: None,
            })
        }
        TreeCmd::Member { schedule, word } => {
            let sch = read_schedule(schedule)?;
            let w: BitWord = word.parse()?;
            let member = sch.membership(&w)?;
            Ok(Report { json: json!({ "member": member }), human: format!("member: {member}"), table: None })
        }
    }
}

// ---------------------------------------------------------------- measure

fn cover_json(c: &CoverResult) -> Value {
    let terms: Vec<Value> = c
        .terms
        .iter()
        .map(|t| json!({ "depth": t.depth, "count": t.count.to_string(), "each": log2(&t.exponent) }))
        .collect();
    json!({
        "cost": interval(&c.cost),
        "exact": c.exact.as_ref().map(exact),
        "cover_size": c.cover_size().to_string(),
        "terms": terms,
    })
}

fn cover_human(c: &CoverResult, out: &mut String) {
    let _ = writeln!(out, "cost in [{:e}, {:e}]", c.cost.lo, c.cost.hi);
    if let Some(e) = &c.exact {
        let _ = writeln!(out, "exact cost {e}");
    }
    for t in &c.terms {
        let _ = writeln!(out, "  {} x 2^-{} at depth {}", t.count, show(&t.exponent), t.depth);
    }
}

fn measure(cmd: &MeasureCmd) -> Result<Report> {
    match cmd {
        MeasureCmd::Premeasure { set, gauge, min_depth, emit_cover } => {
            let a = read_trie(set)?;
            let f = read_gauge(gauge)?;
            let res = premeasure(&a, &f, *min_depth, emit_cover.is_some())?;
            let mut human = String::new();
            cover_human(&res, &mut human);
            if let Some(p) = emit_cover {
                let words = res.cover.as_ref().ok_or_else(|| {
                    Error::Precondition(format!("cover has {} cylinders, too many to list", res.cover_size()))
                })?;
                let text: String = words.iter().map(|w| format!("{w}\n")).collect();
                write_text(p, &text)?;
                let _ = writeln!(human, "wrote {} cover words to {}", words.len(), p.display());
            }
            Ok(Report { json: cover_json(&res), human, table: None })
        }
        MeasureCmd::Pushforward { set, schedule, gauge, block } => {
            let a = read_trie(set)?;
            let sch = read_schedule(schedule)?;
            let f = read_gauge(gauge)?;
            let rep = pushforward_check(&a, &sch, &f, *block)?;
            let mut human = format!("image at depth {}:\n", rep.image_depth);
            cover_human(&rep.image, &mut human);
            let _ = writeln!(human, "source at depth {}:", rep.source_depth);
            cover_human(&rep.source, &mut human);
            let _ = write!(human, "image >= source: {}", rep.holds);
            Ok(Report {
                json: json!({
                    "block": rep.block,
                    "image_depth": rep.image_depth,
                    "source_depth": rep.source_depth,
                    "image": cover_json(&rep.image),
                    "source": cover_json(&rep.source),
                    "holds": rep.holds,
                }),
                human,
                table: None,
            })
        }
    }
}

// ---------------------------------------------------------------- dim

fn stream(src: &StreamSource, seed: u64) -> Result<BitWord> {
    match (&src.bits, src.random) {
        (Some(p), _) => read_bits(p),
        (None, Some(n)) => Ok(seeded_bits(seed, n)),
        (None, None) => Err(Error::Empty("bit stream")),
    }
}

fn dim(cmd: &DimCmd, seed: u64) -> Result<Report> {
    match cmd {
        DimCmd::Estimate { source, schedule, depths, window } => {
            let mut w = stream(source, seed)?;
            if let Some(p) = schedule {
                let sch = read_schedule(p)?;
                let fit = (sch.total_free() as usize).min(w.len());
                w = sch.dilute(&w.prefix(fit))?;
            }
            let est = estimate_dim(&w, depths.as_deref(), *window)?;
            let mut table = Table::new(&["depth", "bits", "ratio"]);
            let mut rows = Vec::new();
            let mut best: Option<Rational> = None;
            for row in &est.rows {
                table.push(vec![row.depth.to_string(), row.bits.to_string(), row.ratio.to_string()]);
                let ratio = Rational::new(row.bits, row.depth as u64);
                if row.depth + est.window >= w.len() {
                    best = Some(best.map_or(ratio.clone(), |b| b.min(ratio.clone())));
                }
                rows.push(json!({ "depth": row.depth, "bits": row.bits, "ratio": exact(&ratio) }));
            }
            Ok(Report {
                json: json!({
                    "label": ESTIMATE_LABEL,
                    "stream_len": w.len(),
                    "window": est.window,
                    "estimate": best.as_ref().map(exact),
                    "rows": rows,
                }),
                human: format!("{ESTIMATE_LABEL}: {:.4} ({} bits, window {})", est.estimate, w.len(), est.window),
                table: Some(table),
            })
        }
        DimCmd::Bound { schedule, block, constant } => {
            let sch = read_schedule(schedule)?;
            let b = codelength_bound(&sch, *block, constant)?;
            Ok(Report {
                json: json!({
                    "block": b.block,
                    "l_next": b.l_next,
                    "bits": interval(&b.bits),
                    "ratio": interval(&b.ratio),
                    "limit_check": interval(&b.limit_check),
                }),
                human: format!(
                    "block {}: K <= {:.3} bits at depth {} (ratio <= {:.6})",
                    b.block, b.bits.hi, b.l_next, b.ratio.hi
                ),
                table: None,
            })
        }
    }
}

// ---------------------------------------------------------------- dioph

fn cf_source(src: &CfSourceArgs, max_terms: usize) -> Result<ContinuedFraction> {
    match (&src.rational, &src.digits) {
        (Some(x), _) => Ok(cf_expand_rational(x, max_terms)),
        (None, Some(p)) => cf_expand_digits(&read_bits(p)?, max_terms),
        (None, None) => Err(Error::Empty("continued fraction source")),
    }
}

fn read_real(path: &Path) -> Result<RealValue> {
    let text = read_text(path)?;
    if text.contains('/') {
        Ok(RealValue::Exact(text.trim().parse()?))
    } else {
        let (lo, hi) = digits_enclosure(&read_bits(path)?);
        Ok(RealValue::Enclosed { lo, hi })
    }
}

fn jarnik_json(r: &JarnikReport) -> Value {
    let (verdict, detail) = match &r.verdict {
        SeriesVerdict::ConvergesWithBound { upper } => ("converges", json!({ "kind": "interval", "lo": r.head.lo, "hi": upper })),
        SeriesVerdict::DivergesCertified { reason } => ("diverges", json!(reason)),
        SeriesVerdict::Unknown { reason } => ("unknown", json!(reason)),
    };
    json!({
        "exponent": exact(&r.exponent),
        "verdict": verdict,
        "detail": detail,
        "head_terms": r.head_terms,
        "head": interval(&r.head),
        "tail": r.tail_upper.is_finite().then(|| json!({ "kind": "interval", "lo": 0.0, "hi": r.tail_upper })),
        "ratio_diverges": r.ratio_diverges,
    })
}

fn jarnik_human(r: &JarnikReport) -> String {
    match &r.verdict {
        SeriesVerdict::ConvergesWithBound { upper } => format!(
            "converges: sum <= {upper:e} (head of {} terms in [{:e}, {:e}], tail <= {:e})",
            r.head_terms, r.head.lo, r.head.hi, r.tail_upper
        ),
        SeriesVerdict::DivergesCertified { reason } => format!("diverges: {reason}"),
        SeriesVerdict::Unknown { reason } => format!("unknown: {reason}"),
    }
}

fn dioph(cmd: &DiophCmd) -> Result<Report> {
    match cmd {
        DiophCmd::Cf { source, max_terms } => {
            let cf = cf_source(source, *max_terms)?;
            let quotients: Vec<String> = cf.quotients.iter().map(|a| a.to_string()).collect();
            let conv: Vec<Value> = convergents(&cf)
                .iter()
                .map(|(p, q)| exact(&Rational::new(p.clone(), q.clone())))
                .collect();
            let bound = exponent_lower_bound(&cf).ok();
            let mut human = format!("[{}]", quotients.join(", "));
            if cf.needs_more_digits {
                human.push_str(" (more digits needed for further quotients)");
            }
            if let Some(b) = &bound {
                let _ = write!(human, "\nexponent >= {:.6}", b.trailing.to_f64());
            }
            let mut table = Table::new(&["k", "a_k"]);
            for (k, a) in quotients.iter().enumerate() {
                table.push(vec![k.to_string(), a.clone()]);
            }
            Ok(Report {
                json: json!({
                    "quotients": quotients,
                    "complete": cf.complete,
                    "needs_more_digits": cf.needs_more_digits,
                    "convergents": conv,
                    "exponent_lower_bound": bound.as_ref().map(|b| exact(&b.trailing)),
                }),
                human,
                table: Some(table),
            })
        }
        DiophCmd::Witness { x, p, q, s } => {
            let xv = read_real(x)?;
            let d = is_witness(&xv, p, q, s)?;
            let verdict = match d {
                Decision::True => "true",
                Decision::False => "false",
                Decision::Unknown => "unknown",
            };
            Ok(Report {
                json: json!({ "p": p.to_string(), "q": q.to_string(), "s": exact(s), "witness": verdict }),
                human: format!("witness: {verdict}"),
                table: None,
            })
        }
        DiophCmd::Reveal { p, q, s, k } => {
            let r = reveal_prefix(p, q, s, *k)?;
            let cands: Vec<String> = r.candidates.iter().map(|w| w.to_string()).collect();
            Ok(Report {
                json: json!({
                    "candidates": cands,
                    "codelength_bits": { "kind": "interval", "lo": 0.0, "hi": r.codelength_bits },
                }),
                human: cands.join("\n"),
                table: None,
            })
        }
        DiophCmd::Liouville { gaps, n } => {
            let number = if gaps == "factorial" {
                LiouvilleNumber::factorial()
            } else {
                let v = gaps
                    .split(',')
                    .map(|g| g.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad gap `{g}`"))))
                    .collect::<Result<Vec<_>>>()?;
                LiouvilleNumber { gaps: GapSchedule::Explicit(v), terms: None }
            };
            let w = liouville_digits(&number, *n)?;
            Ok(Report { json: json!({ "digits": w.to_string(), "len": w.len() }), human: w.to_string(), table: None })
        }
        DiophCmd::Jarnik { gauge, s } => {
            let f = read_gauge(gauge)?;
            let r = jarnik_series(&f, s, &JarnikOptions::default())?;
            Ok(Report { json: jarnik_json(&r), human: jarnik_human(&r), table: None })
        }
    }
}

// ---------------------------------------------------------------- separate

fn separate(s: &Rational, blocks: usize) -> Result<Report> {
    let rep = separation_report(s, blocks)?;
    let mut table = Table::new(&["r", "first_beyond_horizon", "witnesses", "found"]);
    let mut witness_rows = Vec::new();
    for w in &rep.witness_table {
        let ws: Vec<String> = w.witnesses.iter().map(|n| n.to_string()).collect();
        table.push(vec![
            w.r.to_string(),
            w.first_beyond_horizon.map_or(String::new(), |n| n.to_string()),
            ws.join(" "),
            w.found.to_string(),
        ]);
        witness_rows.push(json!({
            "r": exact(&w.r),
            "first_beyond_horizon": w.first_beyond_horizon,
            "witnesses": w.witnesses,
            "found": w.found,
        }));
    }
    let p = &rep.properties;
    let props = json!({
        "doubling_monotone": p.doubling_monotone,
        "lebesgue_nontrivial": p.lebesgue_nontrivial,
        "ratio_diverges": p.ratio_diverges,
        "undominated_above": p.undominated_above,
        "dless": matches!(p.dless, DlessVerdict::Holds),
        "all_pass": p.all_pass(),
    });
    let slopes: Vec<Value> = rep.slopes.iter().map(exact).collect();
    let mut human = format!(
        "s = {}: series {}, witnesses {}\n",
        rep.s,
        if rep.series_converges { "converges" } else { "not certified" },
        if rep.witnesses_found { "found" } else { "missing" }
    );
    let _ = writeln!(human, "{}", jarnik_human(&rep.series));
    for row in &table.rows {
        let _ = writeln!(human, "r = {}: first witness past horizon {}, found {}", row[0], row[1], row[3]);
    }
    let _ = write!(human, "hypothesis checks pass: {}", p.all_pass());
    Ok(Report {
        json: json!({
            "s": exact(&rep.s),
            "blocks": rep.blocks,
            "breakpoints": rep.breakpoints,
            "slopes": slopes,
            "verdict": { "series_converges": rep.series_converges, "witnesses_found": rep.witnesses_found },
            "series": jarnik_json(&rep.series),
            "witness_table": witness_rows,
            "properties": props,
        }),
        human,
        table: Some(table),
    })
}
