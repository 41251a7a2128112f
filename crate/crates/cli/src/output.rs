//! JSON and text shapes of command results. Node ids are 1-based everywhere.

use serde::Serialize;
use serde_json::{json, Value};

use sdecomp::classify::{Evidence, Verdict};
use sdecomp::{Certificate, Decomposition, Outcome, PlacedBlock, TraceEntry};

pub const SCHEMA_VERSION: u32 = 1;

pub fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema": format!("sdecomp.{}", command), "version": SCHEMA_VERSION });
    if let (Value::Object(head), Value::Object(rest)) = (&mut v, body) {
        head.extend(rest);
    }
    v
}

fn one_based(v: &mut Value, keys: &[&str]) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                if keys.contains(&k.as_str()) {
                    bump(x);
                } else {
                    one_based(x, keys);
                }
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(|x| one_based(x, keys)),
        _ => {}
    }
}

fn bump(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                *v = json!(u + 1);
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(bump),
        _ => {}
    }
}

const NODE_KEYS: &[&str] = &["node", "tail", "head", "nodes", "path"];

pub fn to_json<T: Serialize>(x: &T) -> Value {
    let mut v = serde_json::to_value(x).expect("plain data serializes");
    one_based(&mut v, NODE_KEYS);
    v
}

pub fn block_text(b: &PlacedBlock) -> String {
    let ids: Vec<String> = b.nodes.iter().map(|v| (v + 1).to_string()).collect();
    format!("{}({})", b.kind, ids.join(","))
}

pub fn decomposition_text(d: &Decomposition) -> String {
    if d.blocks.is_empty() {
        return "(no blocks)".into();
    }
    d.blocks
        .iter()
        .map(block_text)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn check_json(out: &Outcome, trace: bool) -> Value {
    let mut body = json!({
        "s_decomposable": out.decomposable,
        "decompositions": to_json(&out.decompositions.iter().map(|d| &d.blocks).collect::<Vec<_>>()),
        "truncated": out.truncated,
        "reject_certificate": out.certificate.as_ref().map(cert_json),
    });
    if trace {
        body["trace"] = json!({
            "entries": to_json(&out.trace.entries),
            "examinations": out.trace.examinations,
            "total_examinations": out.trace.total_examinations(),
        });
    }
    envelope("check", body)
}

pub fn cert_json(c: &Certificate) -> Value {
    let mut v = to_json(c);
    v["message"] = json!(c.describe());
    v
}

pub fn check_text(out: &Outcome, trace: bool) -> String {
    let mut s = String::new();
    if out.decomposable {
        s.push_str("s-decomposable: yes\n");
        s.push_str(&format!(
            "decompositions: {}{}\n",
            out.decompositions.len(),
            if out.truncated { " (truncated)" } else { "" }
        ));
        for (i, d) in out.decompositions.iter().enumerate() {
            s.push_str(&format!("  {}: {}\n", i + 1, decomposition_text(d)));
        }
    } else {
        s.push_str("s-decomposable: no\n");
        if let Some(c) = &out.certificate {
            s.push_str(&format!("reason: {}\n", c.describe()));
        }
    }
    if trace {
        s.push_str(&format!(
            "examinations: {}\n",
            out.trace.total_examinations()
        ));
        for e in &out.trace.entries {
            s.push_str(&trace_line(e));
        }
    }
    s
}

fn trace_line(e: &TraceEntry) -> String {
    let case = match &e.case {
        Some(c) => match c.m {
            Some(m) => format!(" n={} m={} case {}", c.n, m, c.tag),
            None => format!(" n={} case {}", c.n, c.tag),
        },
        None => String::new(),
    };
    let blocks: Vec<String> = e.blocks.iter().map(block_text).collect();
    format!(
        "  node {}{}: {} ({} options)\n",
        e.node + 1,
        case,
        if blocks.is_empty() {
            "-".to_string()
        } else {
            blocks.join(" ")
        },
        e.alternatives
    )
}

pub fn verdict_json(v: &Verdict) -> Value {
    envelope("classify", to_json(v))
}

pub fn verdict_text(v: &Verdict) -> String {
    let mut s = format!("outcome: {}\n", to_json(&v.outcome).as_str().unwrap_or("?"));
    for c in &v.components {
        let nodes: Vec<String> = c.nodes.iter().map(|v| (v + 1).to_string()).collect();
        let what = match &c.evidence {
            Evidence::Decomposition { decomposition } => decomposition_text(decomposition),
            Evidence::Exceptional { class } => format!("mutation-equivalent to {}", class),
            Evidence::SmallRank { size } => format!("{} node(s)", size),
            Evidence::WeightGrowth {
                weight,
                path,
                criterion,
            } => {
                let p: Vec<String> = path.iter().map(|k| (k + 1).to_string()).collect();
                format!(
                    "weight {} after mutations [{}]; {}",
                    weight,
                    p.join(","),
                    criterion
                )
            }
            Evidence::Unresolved { reason, .. } => reason.clone(),
        };
        s.push_str(&format!(
            "  component {{{}}}: {}: {}\n",
            nodes.join(","),
            to_json(&c.outcome).as_str().unwrap_or("?"),
            what
        ));
    }
    s
}
