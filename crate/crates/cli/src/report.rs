//! Report envelope and its JSON and text renderings.

use std::sync::Arc;

use folcris_core::chern_weil::BottCertificate;
use folcris_core::derham::{Cohomology, Form, FormMatrix};
use folcris_core::foliation::{Distribution, FiltrationLevel};
use folcris_core::poly::Algebra;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "folcris-report/1";

pub fn form(f: &Form) -> Value {
    Value::String(f.to_string())
}

pub fn forms(fs: &[Form]) -> Value {
    Value::Array(fs.iter().map(form).collect())
}

pub fn matrix(m: &FormMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| forms(r)).collect())
}

pub fn var_names(alg: &Algebra, idx: &[usize]) -> Value {
    Value::Array(idx.iter().map(|&i| Value::String(alg.vars()[i].clone())).collect())
}

/// Summand orders are printed as integers `p^e`.
pub fn cohomology(c: &Cohomology) -> Value {
    let ring = c.decomposition.ring;
    let generators: Vec<Value> = c
        .decomposition
        .summands
        .iter()
        .zip(&c.representatives)
        .map(|(s, rep)| json!({ "order": ring.p().pow(s.exponent), "form": form(rep) }))
        .collect();
    json!({
        "degree": c.degree,
        "free_rank": c.free_rank(),
        "torsion": c.torsion().iter().map(|&e| ring.p().pow(e)).collect::<Vec<_>>(),
        "generators": generators,
    })
}

pub fn distribution(d: &Distribution) -> Value {
    let alg = d.algebra();
    json!({
        "algebra": alg.to_string(),
        "rank": d.rank(),
        "generators": forms(d.generators()),
        "certificate": var_names(alg, d.certificate()),
        "complement": var_names(alg, d.complement()),
        "det_inverse": d.det_inverse().to_string(),
        "frame": d.frame_names(),
        "witness": matrix(d.witness()),
    })
}

/// Generator indices are printed 1-based, matching `w1..wd`.
pub fn filtration(l: &FiltrationLevel) -> Value {
    let terms: Vec<Value> = l
        .decomposition
        .iter()
        .map(|(s, eta)| json!({ "generators": s.iter().map(|i| i + 1).collect::<Vec<_>>(), "eta": form(eta) }))
        .collect();
    json!({ "level": l.level, "decomposition": terms })
}

pub fn monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(i, &x)| if x == 1 { format!("X{}", i + 1) } else { format!("X{}^{x}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn bott(c: &BottCertificate) -> Value {
    let levels: Vec<Value> = c
        .chern_levels
        .iter()
        .map(|(i, f, l)| json!({ "index": i, "form": form(f), "filtration": filtration(l) }))
        .collect();
    let bounds: Vec<Value> =
        c.monomial_bounds.iter().map(|(e, b)| json!({ "monomial": monomial(e), "bound": b })).collect();
    json!({
        "weight": c.weight,
        "codimension": c.codimension,
        "chern_levels": levels,
        "monomial_bounds": bounds,
        "phi_form": form(&c.phi_form),
    })
}

pub fn algebra(a: &Arc<Algebra>) -> Value {
    Value::String(a.to_string())
}

/// Text rendering: nested `key: value` lines, arrays of scalars inline.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_) | Value::String(_) | Value::Bool(_))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => write_object(out, m, indent),
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap())),
    }
}

fn write_object(out: &mut String, m: &Map<String, Value>, indent: usize) {
    let pad = "  ".repeat(indent);
    for (k, x) in m {
        match scalar(x) {
            Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                write_value(out, x, indent + 1);
            }
        }
    }
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
