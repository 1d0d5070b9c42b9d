//! Browser front end: classify a connective, decide whether a fibring
//! recovers classical logic, and test entailment in the product semantics.

use nmfib::boolfun::{classify, post_predicates, standard_connective, BooleanFunction, FragmentSpec};
use nmfib::fibring::{decide_recovery, fibred_semantics, Component, RecoveryVerdict};
use nmfib::semantics::{entails, Entailment};
use nmfib::syntax::{parse, parse_list};
use wasm_bindgen::prelude::*;

/// `or, bar=0111, ubot=00`: a standard name, or a name with its table.
pub fn parse_fragment(text: &str) -> Result<FragmentSpec, String> {
    let mut pairs = Vec::new();
    for item in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let (name, f) = match item.split_once('=') {
            Some((n, t)) => (n, BooleanFunction::from_table(t).map_err(|e| e.to_string())?),
            None => (item, standard_connective(item).ok_or(format!("unknown connective `{item}`"))?),
        };
        pairs.push((name.to_string(), f));
    }
    if pairs.is_empty() {
        return Err("empty fragment".into());
    }
    FragmentSpec::new(pairs.iter().map(|(n, f)| (n.as_str(), *f))).map_err(|e| e.to_string())
}

pub fn classify_text(table: &str) -> Result<String, String> {
    let f = BooleanFunction::from_table(table.trim()).map_err(|e| e.to_string())?;
    let p = post_predicates(&f);
    let flag = |b: bool, name: &str| if b { name.to_string() } else { format!("not {name}") };
    Ok(format!(
        "{}\narity {}; {}, {}, {}, {}, {}\n",
        classify(&f).summary(),
        f.arity(),
        flag(p.preserves0, "0-preserving"),
        flag(p.preserves1, "1-preserving"),
        flag(p.affine, "affine"),
        flag(p.monotone, "monotone"),
        flag(p.self_dual, "self-dual"),
    ))
}

pub fn recovery_text(left: &str, right: &str) -> Result<String, String> {
    let (a, b) = (parse_fragment(left)?, parse_fragment(right)?);
    Ok(match decide_recovery(&a, &b).map_err(|e| e.to_string())? {
        RecoveryVerdict::Classical(c) => format!("CLASSICAL (condition {c})\n"),
        RecoveryVerdict::Subclassical(w) => format!(
            "SUBCLASSICAL\n{} is classically valid but fails at power {}:\n{}",
            w.sequent,
            w.power,
            w.countermodel.render(&w.matrix)
        ),
        RecoveryVerdict::Unknown { power, depth } => {
            format!("UNKNOWN (no witness up to power {power}, depth {depth})\n")
        }
    })
}

pub fn entail_text(left: &str, right: &str, premises: &str, conclusion: &str, power: usize) -> Result<String, String> {
    let (a, b) = (parse_fragment(left)?, parse_fragment(right)?);
    let fib = fibred_semantics(&Component::from_fragment(&a), &Component::from_fragment(&b), power.max(1))
        .map_err(|e| e.to_string())?;
    let m = fib.matrix();
    let gamma = parse_list(premises, m.signature()).map_err(|e| e.to_string())?;
    let phi = parse(conclusion, m.signature()).map_err(|e| e.to_string())?;
    Ok(match entails(m, &gamma, &phi).map_err(|e| e.to_string())? {
        Entailment::Holds => format!("HOLDS in the {}-valued product\n", m.len()),
        Entailment::Fails(v) => format!("FAILS in the {}-valued product\n{}", m.len(), v.render(m)),
    })
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classify_table(table: &str) -> Result<String, JsValue> {
    js(classify_text(table))
}

#[wasm_bindgen]
pub fn recovery(left: &str, right: &str) -> Result<String, JsValue> {
    js(recovery_text(left, right))
}

#[wasm_bindgen]
pub fn entail(left: &str, right: &str, premises: &str, conclusion: &str, power: usize) -> Result<String, JsValue> {
    js(entail_text(left, right, premises, conclusion, power))
}
