use std::collections::HashSet;
use std::io::Read;

use anyhow::anyhow;
use betaexp::branching::{
    branching_compactum_prefix, estimate_unique_dim, expand_tree_with, is_unique_expansion,
    komornik_loreti, tm_word, TreeOptions, UniquenessVerdict,
};
use betaexp::expansion::{greedy_expansion, lazy_expansion, quasi_greedy_of_one};
use betaexp::normalize::{
    enumerate_equivalent_words_capped, finitary_universalize, normalize, universal_expansion,
    universal_expansion_escalating, UniversalParams, UniversalRun,
};
use betaexp::numeric::{with_escalation, XSpec};
use betaexp::stats::{
    block_frequencies, complexity, is_universal_prefix, normality_deviation,
    random_branch_expansion, sample_bernoulli_expansion, FULL_TABLE_MAX_K,
};
use betaexp::{Beta, Word};
use serde_json::{json, Value};

use crate::{exit_status, Cli, Command, Format, Global, Mode};

/// Bumped whenever a JSON layout under `schema/` changes.
pub const SCHEMA_VERSION: u32 = 1;

pub struct Outcome {
    pub text: String,
    pub status: u8,
}

pub struct Failure {
    pub error: anyhow::Error,
    pub status: u8,
    /// Output to emit anyway, e.g. the partial report of an exhausted run.
    pub partial: Option<String>,
}

impl From<betaexp::Error> for Failure {
    fn from(e: betaexp::Error) -> Self {
        Failure {
            status: exit_status(&e),
            error: e.into(),
            partial: None,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure {
            error,
            status: 2,
            partial: None,
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn ok(text: String) -> Res<Outcome> {
    Ok(Outcome { text, status: 0 })
}

fn usage(msg: &str) -> Failure {
    anyhow!(msg.to_string()).into()
}

fn json_text(mut v: Value, command: &str) -> String {
    if let Value::Object(m) = &mut v {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("command".into(), json!(command));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Res<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(anyhow::Error::from)?;
    for r in rows {
        w.write_record(&r).map_err(anyhow::Error::from)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

fn beta(g: &Global) -> Res<Beta> {
    let spec = g.beta.as_deref().ok_or_else(|| usage("--beta is required"))?;
    let mut b = Beta::parse(spec)?;
    if let Some(bits) = g.precision {
        if b.is_decimal() {
            b = Beta::decimal(spec, bits)?;
        }
    }
    if let Some(cap) = g.precision_cap {
        b = b.with_precision_cap(cap);
    }
    Ok(b)
}

fn xspec(g: &Global) -> Res<XSpec> {
    let s = g.x.as_deref().ok_or_else(|| usage("--x is required"))?;
    Ok(s.parse()?)
}

fn word(s: &str) -> Res<Word> {
    Ok(s.trim().parse()?)
}

/// A word from standard input: bare digits (whitespace ignored) or a JSON
/// object with an `output` or `word` field.
fn stdin_word() -> Res<Word> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(anyhow::Error::from)?;
    let t = buf.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(anyhow::Error::from)?;
        let s = v
            .get("output")
            .or_else(|| v.get("word"))
            .and_then(Value::as_str)
            .ok_or_else(|| usage("JSON input has no `output` or `word` field"))?;
        return word(s);
    }
    let digits: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    word(&digits)
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Greedy => "greedy",
        Mode::Lazy => "lazy",
        Mode::QuasiGreedyOne => "quasi-greedy-one",
    }
}

pub fn run(cli: &Cli) -> Res<Outcome> {
    let g = &cli.global;
    let fmt = |default: Format| g.format.unwrap_or(default);
    match &cli.command {
        Command::Expand { mode, n } => {
            let b = beta(g)?;
            let (digits, extra) = if *mode == Mode::QuasiGreedyOne {
                let q = quasi_greedy_of_one(&b, *n)?;
                (q.digits, json!({ "exact": q.exact }))
            } else {
                let xs = xspec(g)?;
                let digits = with_escalation(&b, |b| {
                    let x = xs.resolve(b)?;
                    match mode {
                        Mode::Lazy => lazy_expansion(&x, *n),
                        _ => greedy_expansion(&x, *n),
                    }
                })?;
                (digits, json!({ "x": xs.to_string() }))
            };
            match fmt(Format::Text) {
                Format::Json => {
                    let mut v = json!({
                        "beta": b.to_string(),
                        "mode": mode_name(*mode),
                        "n": n,
                        "digits": digits,
                    });
                    merge(&mut v, extra);
                    ok(json_text(v, "expand"))
                }
                _ => ok(line(digits)),
            }
        }
        Command::Normalize { word: w, n } => {
            let b = beta(g)?;
            let w = word(w)?;
            let len = n.unwrap_or(w.len());
            let r = with_escalation(&b, |b| normalize(&w, b, len))?;
            match fmt(Format::Text) {
                Format::Json => ok(json_text(
                    json!({
                        "beta": b.to_string(),
                        "input": w,
                        "word": r.word,
                        "finite": r.finite,
                    }),
                    "normalize",
                )),
                _ => ok(line(r.word)),
            }
        }
        Command::Universalize {
            max_word_len,
            max_digits,
            rounds,
            horizon,
            finitary,
        } => {
            let b = beta(g)?;
            let xs = xspec(g)?;
            let x = xs.resolve(&b)?;
            let params = UniversalParams::new(*max_word_len, *max_digits)
                .with_rounds(*rounds)
                .with_horizon(*horizon);
            let result = if *finitary {
                finitary_universalize(&x, &params)
            } else if b.is_decimal() {
                universal_expansion_escalating(&x, &params)
            } else {
                universal_expansion(&x, &params)
            };
            let render = |run: &UniversalRun| -> Res<String> {
                match fmt(Format::Json) {
                    Format::Text => Ok(line(&run.output)),
                    _ => Ok(json_text(universal_report(&b, &xs, &params, *finitary, run)?, "universalize")),
                }
            };
            match result {
                Ok(run) => ok(render(&run)?),
                Err(betaexp::Error::BudgetExhausted { partial }) => {
                    let text = render(&partial)?;
                    Err(Failure {
                        error: anyhow!(
                            "digit budget exhausted after embedding {} of {} target words",
                            partial.report.len(),
                            partial.targets_total
                        ),
                        status: 4,
                        partial: Some(text),
                    })
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::EquivClass { word: w, cap } => {
            let b = beta(g)?;
            let w = word(w)?;
            let mut class = enumerate_equivalent_words_capped(&w, &b, *cap)?;
            // Largest first, so the greedy normal form leads.
            class.reverse();
            match fmt(Format::Text) {
                Format::Json => ok(json_text(
                    json!({ "beta": b.to_string(), "word": w, "size": class.len(), "class": class }),
                    "equiv-class",
                )),
                _ => {
                    let parts: Vec<String> = class.iter().map(Word::to_string).collect();
                    ok(line(format!("{{{}}}", parts.join(","))))
                }
            }
        }
        Command::Tree {
            depth,
            merge: m,
            node_budget,
        } => {
            let b = beta(g)?;
            let xs = xspec(g)?;
            let opts = TreeOptions {
                merge: *m,
                node_budget: *node_budget,
            };
            let tree = with_escalation(&b, |b| expand_tree_with(&xs.resolve(b)?, *depth, opts))?;
            match fmt(Format::Json) {
                Format::Dot => ok(tree.to_dot()),
                Format::Text | Format::Csv => {
                    ok(tree.paths().iter().map(line).collect::<String>())
                }
                Format::Json => {
                    let mut v = tree.to_json();
                    merge(&mut v, json!({ "beta": b.to_string(), "x_spec": xs.to_string() }));
                    ok(json_text(v, "tree"))
                }
            }
        }
        Command::Unique { horizon } => {
            let b = beta(g)?;
            let xs = xspec(g)?;
            let verdict = with_escalation(&b, |b| is_unique_expansion(&xs.resolve(b)?, *horizon))?;
            let status = match verdict {
                UniquenessVerdict::Undetermined { .. } => 3,
                _ => 0,
            };
            let text = match fmt(Format::Text) {
                Format::Json => {
                    let mut v = serde_json::to_value(&verdict).map_err(anyhow::Error::from)?;
                    merge(&mut v, json!({ "beta": b.to_string(), "x": xs.to_string() }));
                    json_text(v, "unique")
                }
                _ => line(&verdict),
            };
            Ok(Outcome { text, status })
        }
        Command::Gamma { depth, horizon } => {
            let b = beta(g)?;
            let xs = xspec(g)?;
            let prefixes =
                with_escalation(&b, |b| branching_compactum_prefix(&xs.resolve(b)?, *depth, *horizon))?;
            let distinct: HashSet<&Word> = prefixes.iter().map(|p| &p.gamma).collect();
            let full = *depth < 64 && distinct.len() as u64 == 1u64 << depth;
            match fmt(Format::Text) {
                Format::Json => ok(json_text(
                    json!({
                        "beta": b.to_string(),
                        "x": xs.to_string(),
                        "depth": depth,
                        "horizon": horizon,
                        "full": full,
                        "prefixes": prefixes,
                    }),
                    "gamma",
                )),
                Format::Csv => csv_text(
                    &["gamma", "path", "tail"],
                    prefixes.iter().map(|p| {
                        vec![p.gamma.to_string(), p.path.to_string(), tail_name(p.tail).into()]
                    }),
                )
                .and_then(ok),
                _ => ok(prefixes
                    .iter()
                    .map(|p| format!("{} {} {}\n", p.gamma, p.path, tail_name(p.tail)))
                    .collect()),
            }
        }
        Command::KlConstant { digits } => {
            let v = komornik_loreti(*digits)?;
            match fmt(Format::Text) {
                Format::Json => ok(json_text(json!({ "digits": digits, "value": v }), "kl-constant")),
                _ => ok(line(v)),
            }
        }
        Command::TmWord { n } => {
            if *n > 24 {
                return Err(betaexp::Error::LengthCapExceeded { len: *n as usize, cap: 24 }.into());
            }
            let w = tm_word(*n);
            match fmt(Format::Text) {
                Format::Json => ok(json_text(json!({ "n": n, "word": w }), "tm-word")),
                _ => ok(line(w)),
            }
        }
        Command::DimEstimate { n } => {
            let b = beta(g)?;
            let d = estimate_unique_dim(&b, *n)?;
            match fmt(Format::Text) {
                Format::Json => {
                    let mut v = serde_json::to_value(&d).map_err(anyhow::Error::from)?;
                    merge(&mut v, json!({ "beta": b.to_string() }));
                    ok(json_text(v, "dim-estimate"))
                }
                _ => ok(format!("estimate={:.6} count={} n={}\n", d.estimate, d.count, d.n)),
            }
        }
        Command::Stats {
            word: w,
            blocks,
            complexity: cx,
            normality,
            universal,
        } => {
            let w = match w {
                Some(s) => word(s)?,
                None => stdin_word()?,
            };
            if let Some(k) = blocks {
                return stats_blocks(&w, *k, fmt(Format::Csv));
            }
            if let Some(n) = cx {
                let p = complexity(&w, *n)?;
                return match fmt(Format::Csv) {
                    Format::Json => ok(json_text(serde_json::to_value(&p).map_err(anyhow::Error::from)?, "stats")),
                    Format::Csv => csv_text(
                        &["n", "p"],
                        p.counts.iter().enumerate().map(|(i, c)| vec![(i + 1).to_string(), c.to_string()]),
                    )
                    .and_then(ok),
                    _ => ok(p
                        .counts
                        .iter()
                        .enumerate()
                        .map(|(i, c)| format!("p({})={c}\n", i + 1))
                        .collect()),
                };
            }
            if let Some(k) = normality {
                let d = normality_deviation(&w, *k)?;
                return match fmt(Format::Text) {
                    Format::Json => ok(json_text(json!({ "max_k": k, "deviation": d }), "stats")),
                    Format::Csv => csv_text(
                        &["max_k", "deviation", "block"],
                        [vec![k.to_string(), d.deviation.to_string(), d.block.to_string()]],
                    )
                    .and_then(ok),
                    _ => ok(format!("deviation={} block={}\n", d.deviation, d.block)),
                };
            }
            if let Some(l) = universal {
                let u = is_universal_prefix(&w, *l);
                return match fmt(Format::Text) {
                    Format::Json => ok(json_text(serde_json::to_value(&u).map_err(anyhow::Error::from)?, "stats")),
                    _ => {
                        let missing: Vec<String> = u.missing.iter().map(Word::to_string).collect();
                        ok(format!("universal={} missing={}\n", u.universal, missing.join(",")))
                    }
                };
            }
            Err(usage("stats needs one of --blocks, --complexity, --normality, --universal"))
        }
        Command::Sample { n } => {
            let b = beta(g)?;
            let (w, value, tail) = match &g.x {
                Some(_) => {
                    let xs = xspec(g)?;
                    let w = with_escalation(&b, |b| random_branch_expansion(&xs.resolve(b)?, g.seed, *n))?;
                    (w, None, None)
                }
                None => {
                    let s = sample_bernoulli_expansion(&b, g.seed, *n);
                    (s.word, Some(s.value.to_decimal(20)), Some(s.tail_bound.to_decimal(20)))
                }
            };
            match fmt(Format::Text) {
                Format::Json => ok(json_text(
                    json!({
                        "beta": b.to_string(),
                        "seed": g.seed,
                        "n": n,
                        "x": g.x,
                        "word": w,
                        "value": value,
                        "tail_bound": tail,
                    }),
                    "sample",
                )),
                _ => ok(line(w)),
            }
        }
    }
}

fn merge(v: &mut Value, extra: Value) {
    if let (Value::Object(m), Value::Object(e)) = (v, extra) {
        m.extend(e);
    }
}

fn tail_name(t: betaexp::branching::GammaTail) -> &'static str {
    use betaexp::branching::GammaTail as T;
    match t {
        T::Open => "open",
        T::Unique => "unique",
        T::Unresolved => "unresolved",
    }
}

fn stats_blocks(w: &Word, k: usize, fmt: Format) -> Res<Outcome> {
    let t = block_frequencies(w, k)?;
    match fmt {
        Format::Json => {
            let dev = if k <= FULL_TABLE_MAX_K {
                Some(normality_deviation(w, k)?)
            } else {
                None
            };
            ok(json_text(
                json!({ "k": t.k, "windows": t.windows, "rows": t.rows, "deviation": dev }),
                "stats",
            ))
        }
        Format::Text => ok(t
            .rows
            .iter()
            .map(|r| format!("{} {} {}\n", r.block, r.count, r.freq))
            .collect()),
        _ => csv_text(
            &["block", "count", "freq"],
            t.rows
                .iter()
                .map(|r| vec![r.block.to_string(), r.count.to_string(), r.freq.to_string()]),
        )
        .and_then(ok),
    }
}

fn universal_report(
    b: &Beta,
    xs: &XSpec,
    params: &UniversalParams,
    finitary: bool,
    run: &UniversalRun,
) -> Res<Value> {
    let out = &run.output;
    let l = params.max_word_len;
    let counts = if out.len() >= l && l > 0 {
        complexity(out, l)?.counts
    } else {
        Vec::new()
    };
    let check = is_universal_prefix(out, l);
    let k = l.min(FULL_TABLE_MAX_K).min(out.len());
    let deviation = if k > 0 { Some(normality_deviation(out, k)?) } else { None };
    Ok(json!({
        "beta": b.to_string(),
        "x": xs.to_string(),
        "method": if finitary { "finitary" } else { "splice" },
        "params": params,
        "complete": run.complete,
        "targets_total": run.targets_total,
        "targets_embedded": run.report.len(),
        "precision_bits": run.precision_bits,
        "output_length": out.len(),
        "output": out,
        "report": run.report,
        "census": {
            "complexity": counts,
            "universal": check.universal,
            "missing": check.missing,
            "normality": deviation,
        },
    }))
}
