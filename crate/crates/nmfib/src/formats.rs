//! JSON files for fragments, systems (Nmatrices) and calculi.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolfun::{standard_connective, BoolFunError, BooleanFunction, FragmentSpec};
use crate::calculus::{CalculusError, HilbertCalculus, Rule};
use crate::semantics::{for_each_tuple, Nmatrix, SemanticsError, Value};
use crate::syntax::{Signature, SyntaxError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    BoolFun(#[from] BoolFunError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConnectiveDecl {
    pub name: String,
    pub arity: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FragmentConnective {
    pub name: String,
    pub arity: usize,
    /// Optional for the standard connective names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FragmentFile {
    pub connectives: Vec<FragmentConnective>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Cell {
    pub args: Vec<String>,
    pub out: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SystemFile {
    pub signature: Vec<ConnectiveDecl>,
    pub values: Vec<String>,
    pub designated: Vec<String>,
    pub interpretation: BTreeMap<String, Vec<Cell>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RuleEntry {
    pub name: String,
    #[serde(default)]
    pub premises: Vec<String>,
    pub conclusion: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CalculusFile {
    pub signature: Vec<ConnectiveDecl>,
    pub rules: Vec<RuleEntry>,
}

fn signature_of(decls: &[ConnectiveDecl]) -> Result<Signature, FormatError> {
    Ok(Signature::from_pairs(decls.iter().map(|d| (d.name.as_str(), d.arity)))?)
}

fn decls_of(sig: &Signature) -> Vec<ConnectiveDecl> {
    sig.iter().map(|(name, arity)| ConnectiveDecl { name: name.to_string(), arity }).collect()
}

pub fn parse_fragment(text: &str) -> Result<FragmentSpec, FormatError> {
    let file: FragmentFile = serde_json::from_str(text)?;
    fragment_from_file(&file)
}

pub fn fragment_from_file(file: &FragmentFile) -> Result<FragmentSpec, FormatError> {
    let mut pairs = Vec::new();
    for c in &file.connectives {
        let f = match &c.table {
            Some(t) => BooleanFunction::from_table_with_arity(c.arity, t)?,
            None => standard_connective(&c.name)
                .ok_or_else(|| FormatError::Invalid(format!("connective `{}` needs a table", c.name)))?,
        };
        if f.arity() != c.arity {
            return Err(
                BoolFunError::ArityMismatch { name: c.name.clone(), declared: c.arity, table: f.arity() }.into()
            );
        }
        pairs.push((c.name.as_str(), f));
    }
    Ok(FragmentSpec::new(pairs)?)
}

pub fn fragment_to_file(frag: &FragmentSpec) -> FragmentFile {
    FragmentFile {
        connectives: frag
            .iter()
            .map(|(name, f)| FragmentConnective {
                name: name.to_string(),
                arity: f.arity(),
                table: Some(f.table_string()),
            })
            .collect(),
    }
}

pub fn fragment_to_json(frag: &FragmentSpec) -> String {
    to_pretty(&fragment_to_file(frag))
}

/// Loads a system file; every cell must be listed and non-empty.
pub fn parse_system(text: &str, allow_degenerate: bool) -> Result<Nmatrix, FormatError> {
    let file: SystemFile = serde_json::from_str(text)?;
    system_from_file(&file, allow_degenerate)
}

pub fn system_from_file(file: &SystemFile, allow_degenerate: bool) -> Result<Nmatrix, FormatError> {
    let sig = signature_of(&file.signature)?;
    let ids: HashMap<&str, Value> = file.values.iter().enumerate().map(|(i, v)| (v.as_str(), i as Value)).collect();
    let lookup = |v: &str| -> Result<Value, FormatError> {
        ids.get(v).copied().ok_or_else(|| SemanticsError::UnknownValue(v.to_string()).into())
    };
    let mut designated = vec![false; file.values.len()];
    for d in &file.designated {
        designated[lookup(d)? as usize] = true;
    }
    for name in file.interpretation.keys() {
        if !sig.contains(name) {
            return Err(FormatError::Invalid(format!("interpretation given for undeclared connective `{name}`")));
        }
    }
    let mut cells: HashMap<(String, Vec<Value>), Vec<Value>> = HashMap::new();
    for (name, list) in &file.interpretation {
        let arity = sig.arity(name).expect("checked above");
        for cell in list {
            if cell.args.len() != arity {
                return Err(FormatError::Invalid(format!(
                    "cell for `{name}` has {} arguments, expected {arity}",
                    cell.args.len()
                )));
            }
            let args = cell.args.iter().map(|a| lookup(a)).collect::<Result<Vec<_>, _>>()?;
            let out = cell.out.iter().map(|a| lookup(a)).collect::<Result<Vec<_>, _>>()?;
            if out.is_empty() {
                return Err(SemanticsError::EmptyCell { name: name.clone(), args: cell.args.join(",") }.into());
            }
            if cells.insert((name.clone(), args), out).is_some() {
                return Err(FormatError::Invalid(format!(
                    "cell for `{name}` at ({}) listed twice",
                    cell.args.join(",")
                )));
            }
        }
    }
    for (name, arity) in sig.iter() {
        let mut missing = None;
        for_each_tuple(file.values.len(), arity, |args| {
            if missing.is_none() && !cells.contains_key(&(name.to_string(), args.to_vec())) {
                missing = Some(args.iter().map(|&a| file.values[a as usize].clone()).collect::<Vec<_>>());
            }
        });
        if let Some(args) = missing {
            return Err(SemanticsError::MissingCell { name: name.to_string(), args: args.join(",") }.into());
        }
    }
    let interp = |name: &str, args: &[Value]| cells[&(name.to_string(), args.to_vec())].clone();
    let m = if allow_degenerate {
        Nmatrix::from_fn_unchecked(file.values.clone(), designated, sig, interp)?
    } else {
        Nmatrix::from_fn(file.values.clone(), designated, sig, interp)?
    };
    Ok(m)
}

pub fn system_to_file(m: &Nmatrix) -> SystemFile {
    let mut interpretation = BTreeMap::new();
    for (name, arity) in m.signature().iter() {
        let mut list = Vec::new();
        for_each_tuple(m.len(), arity, |args| {
            list.push(Cell {
                args: args.iter().map(|&a| m.value_name(a).to_string()).collect(),
                out: m.cell(name, args).iter().map(|&v| m.value_name(v).to_string()).collect(),
            });
        });
        interpretation.insert(name.to_string(), list);
    }
    SystemFile {
        signature: decls_of(m.signature()),
        values: m.values().to_vec(),
        designated: m.designated_values().into_iter().map(|v| m.value_name(v).to_string()).collect(),
        interpretation,
    }
}

pub fn system_to_json(m: &Nmatrix) -> String {
    to_pretty(&system_to_file(m))
}

/// A system file, or a fragment file read as its 2-valued matrix.
pub fn parse_system_or_fragment(text: &str, allow_degenerate: bool) -> Result<Nmatrix, FormatError> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("connectives").is_some() {
        Ok(fragment_from_file(&serde_json::from_value(v)?)?.two_valued())
    } else {
        system_from_file(&serde_json::from_value(v)?, allow_degenerate)
    }
}

pub fn parse_calculus(text: &str) -> Result<HilbertCalculus, FormatError> {
    let file: CalculusFile = serde_json::from_str(text)?;
    calculus_from_file(&file)
}

pub fn calculus_from_file(file: &CalculusFile) -> Result<HilbertCalculus, FormatError> {
    let sig = signature_of(&file.signature)?;
    let rules = file
        .rules
        .iter()
        .map(|r| {
            let ps: Vec<&str> = r.premises.iter().map(String::as_str).collect();
            Rule::parse(&r.name, &ps, &r.conclusion, &sig)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HilbertCalculus::new(sig, rules)?)
}

pub fn calculus_to_file(c: &HilbertCalculus) -> CalculusFile {
    CalculusFile {
        signature: decls_of(&c.signature),
        rules: c
            .rules
            .iter()
            .map(|r| RuleEntry {
                name: r.name.clone(),
                premises: r.premises.iter().map(|p| p.to_string()).collect(),
                conclusion: r.conclusion.to_string(),
            })
            .collect(),
    }
}

pub fn calculus_to_json(c: &HilbertCalculus) -> String {
    to_pretty(&calculus_to_file(c))
}

fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_system_round_trip() {
        let text = r#"{ "signature":[{"name":"neg","arity":1}], "values":["0","1"], "designated":["1"],
            "interpretation":{"neg":[{"args":["0"],"out":["1"]},{"args":["1"],"out":["0"]}]} }"#;
        let m = parse_system(text, false).unwrap();
        assert_eq!(m.len(), 2);
        let again = parse_system(&system_to_json(&m), false).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn missing_cell_is_rejected() {
        let text = r#"{ "signature":[{"name":"neg","arity":1}], "values":["0","1"], "designated":["1"],
            "interpretation":{"neg":[{"args":["0"],"out":["1"]}]} }"#;
        assert!(matches!(parse_system(text, false), Err(FormatError::Semantics(SemanticsError::MissingCell { .. }))));
    }

    #[test]
    fn degenerate_needs_override() {
        let text = r#"{ "signature":[], "values":["0","1"], "designated":[], "interpretation":{} }"#;
        assert!(parse_system(text, false).is_err());
        assert!(parse_system(text, true).is_ok());
    }

    #[test]
    fn fragment_table_and_default() {
        let f = parse_fragment(r#"{"connectives":[{"name":"or","arity":2,"table":"0111"},{"name":"neg","arity":1}]}"#)
            .unwrap();
        assert_eq!(f.function("or").unwrap().table_string(), "0111");
        assert_eq!(f.function("neg").unwrap().table_string(), "10");
        assert!(parse_fragment(r#"{"connectives":[{"name":"or","arity":3,"table":"0111"}]}"#).is_err());
    }
}
