use std::collections::HashMap;
use std::fmt::Write;

use serde_json::{json, Value};
use surfgroup::{PipelineOutput, Symbol, VerificationReport, Word};

use crate::{Format, JobResult, Outcome, Settings};

pub fn render(results: &[JobResult], batch: bool, settings: &Settings) -> String {
    match settings.format {
        Format::Json => {
            let values: Vec<Value> = results.iter().map(|r| job_json(r, settings)).collect();
            let doc = if batch {
                Value::Array(values)
            } else {
                values.into_iter().next().unwrap_or(Value::Null)
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (i, r) in results.iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                }
                if batch || r.name.is_some() {
                    let label = r.name.clone().unwrap_or_else(|| format!("job {}", i + 1));
                    writeln!(s, "== {label} ==").unwrap();
                }
                job_text(&mut s, r, settings);
            }
            s
        }
    }
}

fn expanded(word: &Word, defs: &HashMap<Symbol, Word>) -> Word {
    word.substitute(defs)
}

fn homology(report: &VerificationReport) -> String {
    let mut parts = Vec::new();
    if report.rank_h1 > 0 {
        parts.push(format!("Z^{}", report.rank_h1));
    }
    parts.extend(report.torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn job_text(s: &mut String, r: &JobResult, settings: &Settings) {
    let (out, warnings) = match &r.outcome {
        Outcome::Done { output, warnings } => (output.as_ref(), warnings),
        Outcome::Rejected { message, .. } => {
            writeln!(s, "error: {message}").unwrap();
            return;
        }
    };
    pipeline_text(s, out, settings);
    for w in warnings {
        writeln!(s, "warning: {w}").unwrap();
    }
}

fn pipeline_text(s: &mut String, out: &PipelineOutput, settings: &Settings) {
    let d = &out.data;
    writeln!(
        s,
        "degree {}, {} branches, genus {}",
        d.degree(),
        d.branch_count(),
        out.genus
    )
    .unwrap();
    if let Some(l) = out.reordered_from {
        writeln!(s, "branch {l} moved last by braid moves").unwrap();
    }
    for (l, b) in d.branches().iter().enumerate() {
        writeln!(s, "  s{} -> {b}", l + 1).unwrap();
    }
    if settings.dump_transversal {
        writeln!(s, "transversal ({})", strategy_name(out)).unwrap();
        for (k, rep) in out.table.reps().iter().enumerate() {
            writeln!(s, "  sheet {}: {rep}", k + 1).unwrap();
        }
    }

    let p = &out.simplified;
    writeln!(
        s,
        "generators ({} of {})",
        p.generators.len(),
        out.initial.generators.len()
    )
    .unwrap();
    for g in &p.generators {
        writeln!(s, "  {} = {}", g.symbol, g.definition).unwrap();
    }
    writeln!(
        s,
        "relators ({} of {})",
        p.relators.len(),
        out.initial.relators.len()
    )
    .unwrap();
    for rel in &p.relators {
        let pv = &rel.provenance;
        writeln!(
            s,
            "  {}    [branch {}, cycle {}]",
            rel.word, pv.branch, pv.cycle
        )
        .unwrap();
    }

    if let Some(c) = &out.canonical {
        let defs = p.definitions();
        writeln!(s, "canonical form (genus {})", c.genus).unwrap();
        writeln!(s, "  {}", c.relator).unwrap();
        for pair in &c.pairs {
            for (sym, def) in [(pair.a, &pair.a_definition), (pair.b, &pair.b_definition)] {
                if settings.expand_definitions {
                    writeln!(s, "  {sym} = {def} = {}", expanded(def, &defs)).unwrap();
                } else {
                    writeln!(s, "  {sym} = {def}").unwrap();
                }
            }
        }
    }

    if let Some(report) = &out.report {
        writeln!(
            s,
            "verification: {}",
            if report.pass { "pass" } else { "FAIL" }
        )
        .unwrap();
        let opt = |g: Option<usize>| g.map_or("-".to_string(), |g| g.to_string());
        writeln!(
            s,
            "  genus: Riemann-Hurwitz {}, presentation {}, canonical {}",
            opt(report.genus_rh),
            opt(report.genus_presentation),
            opt(report.genus_canonical)
        )
        .unwrap();
        writeln!(s, "  H1 = {}", homology(report)).unwrap();
        writeln!(s, "  substitute-back: {}", ok(report.substitute_back_ok)).unwrap();
        writeln!(s, "  Euler count: {}", ok(report.euler_ok)).unwrap();
        for f in &report.failures {
            writeln!(s, "  failure: {f}").unwrap();
        }
    }
}

fn strategy_name(out: &PipelineOutput) -> String {
    serde_json::to_value(out.table.strategy())
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn job_json(r: &JobResult, settings: &Settings) -> Value {
    let mut v = match &r.outcome {
        Outcome::Rejected {
            kind,
            message,
            code,
        } => json!({
            "error": { "kind": kind, "message": message },
            "exit_code": code,
        }),
        Outcome::Done { output, warnings } => {
            let mut v = pipeline_json(output, settings);
            v["warnings"] = json!(warnings);
            v["exit_code"] = json!(r.exit_code());
            v
        }
    };
    if let Some(name) = &r.name {
        v["name"] = json!(name);
    }
    v
}

fn pipeline_json(out: &PipelineOutput, settings: &Settings) -> Value {
    let d = &out.data;
    let p = &out.simplified;
    let mut v = json!({
        "degree": d.degree(),
        "branches": d.branches(),
        "reordered_from": out.reordered_from,
        "genus": out.genus,
        "transversal": strategy_name(out),
        "initial": {
            "generators": out.initial.generators.len(),
            "relators": out.initial.relators.len(),
        },
        "generators": p.generators,
        "relators": p.relators,
        "elimination_trail": p.trail,
        "canonical_skipped": out.canonical_skipped,
        "canonical": out.canonical,
        "report": out.report,
    });
    if settings.dump_transversal {
        v["representatives"] = json!(out.table.reps());
    }
    if settings.expand_definitions {
        if let Some(c) = &out.canonical {
            let defs = p.definitions();
            let pairs: Vec<Value> = c
                .pairs
                .iter()
                .map(|pair| {
                    json!({
                        "a": pair.a,
                        "b": pair.b,
                        "a_sigma": expanded(&pair.a_definition, &defs),
                        "b_sigma": expanded(&pair.b_definition, &defs),
                    })
                })
                .collect();
            v["expanded_pairs"] = json!(pairs);
        }
    }
    v
}
