use nmfib::calculus::{Derivation, Justification};
use nmfib::fibring::{Sequent, Witness};
use nmfib::semantics::{Nmatrix, PartialValuation};
use nmfib::syntax::Formula;
use serde_json::{json, Value};

pub fn formulas(fs: &[Formula]) -> Value {
    fs.iter().map(|f| f.to_string()).collect()
}

pub fn countermodel(v: &PartialValuation, m: &Nmatrix) -> Value {
    json!(v.named(m))
}

pub fn derivation(d: &Derivation) -> Value {
    d.steps
        .iter()
        .map(|s| match &s.justification {
            Justification::Premise => json!({ "formula": s.formula.to_string(), "by": "premise" }),
            Justification::Rule { rule, subst, premises } => json!({
                "formula": s.formula.to_string(),
                "by": rule,
                "substitution": subst.iter().map(|(k, v)| (k.to_string(), v.to_string()))
                    .collect::<std::collections::BTreeMap<_, _>>(),
                "from": premises,
            }),
        })
        .collect()
}

pub fn sequent(s: &Sequent) -> Value {
    json!({ "premises": formulas(&s.premises), "conclusion": s.conclusion.to_string() })
}

pub fn witness(w: &Witness) -> Value {
    json!({
        "template": w.template,
        "sequent": sequent(&w.sequent),
        "power": w.power,
        "countermodel": countermodel(&w.countermodel, &w.matrix),
    })
}

pub fn witness_text(w: &Witness) -> String {
    format!(
        "sequent: {}\ntemplate: {}\npower: {}\ncountermodel:\n{}",
        w.sequent,
        w.template,
        w.power,
        indent(&w.countermodel.render(&w.matrix))
    )
}

pub fn indent(block: &str) -> String {
    block.lines().map(|l| format!("  {l}\n")).collect()
}
