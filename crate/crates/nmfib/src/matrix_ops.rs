//! Constructions on Nmatrices: translation images, powers, strict products,
//! valuation merging and the canonical 2-valued matrices.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::semantics::{cell_index, for_each_tuple, Nmatrix, PartialValuation, SemanticsError, Value};
use crate::syntax::{pvars, skeleton, Formula, Signature, SyntaxError, Translation};

/// Default bound on the number of values of a constructed Nmatrix.
pub const DEFAULT_SIZE_CAP: usize = 10_000;

/// Bound on the total number of cells of a constructed Nmatrix.
pub const CELL_CAP: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("translation images are only defined for deterministic matrices")]
    NonDeterministic,
    #[error("construction needs {needed} {what}, cap is {cap}")]
    SizeCap { what: &'static str, needed: usize, cap: usize },
    #[error("signatures overlap on `{0}`")]
    Overlap(String),
    #[error("component Nmatrix is degenerate")]
    Degenerate,
    #[error("valuations disagree on designation at `{0}`")]
    Incompatible(String),
    #[error("valuation has no value for `{0}`")]
    Unassigned(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

fn tuple_name(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

fn check_cells(m_len: usize, sig: &Signature) -> Result<(), MatrixError> {
    let mut total = 0usize;
    for (_, a) in sig.iter() {
        let c = m_len.checked_pow(a as u32).unwrap_or(usize::MAX);
        total = total.saturating_add(c);
    }
    if total > CELL_CAP {
        return Err(MatrixError::SizeCap { what: "cells", needed: total, cap: CELL_CAP });
    }
    Ok(())
}

/// The matrix over `source` obtained by reading each connective through `t`.
pub fn translate_matrix(m: &Nmatrix, t: &Translation, source: &Signature) -> Result<Nmatrix, MatrixError> {
    if !m.is_deterministic() {
        return Err(MatrixError::NonDeterministic);
    }
    t.check(source)?;
    for (n, _) in source.iter() {
        t.body(n).unwrap().check(m.signature())?;
    }
    let values = m.values().to_vec();
    let designated = m.designation().to_vec();
    Ok(Nmatrix::from_fn_unchecked(values, designated, source.clone(), |name, args| {
        let body = t.body(name).unwrap();
        let vars = pvars(args.len());
        let env = |f: &Formula| args[vars.iter().position(|v| v == f).unwrap()];
        vec![m.eval(body, &env)]
    })?)
}

/// The `n`-th power of `m`; values are `n`-tuples in lexicographic order.
/// `power(m, 1)` is `m` itself.
pub fn power(m: &Nmatrix, n: usize) -> Result<Nmatrix, MatrixError> {
    power_capped(m, n, DEFAULT_SIZE_CAP)
}

pub fn power_capped(m: &Nmatrix, n: usize, cap: usize) -> Result<Nmatrix, MatrixError> {
    assert!(n >= 1, "power needs n ≥ 1");
    if n == 1 {
        return Ok(m.clone());
    }
    let base = m.len();
    let size = base.checked_pow(n as u32).unwrap_or(usize::MAX);
    if size > cap {
        return Err(MatrixError::SizeCap { what: "values", needed: size, cap });
    }
    check_cells(size, m.signature())?;
    let mut tuples: Vec<Vec<Value>> = Vec::with_capacity(size);
    for_each_tuple(base, n, |t| tuples.push(t.to_vec()));
    let values: Vec<String> =
        tuples.iter().map(|t| tuple_name(&t.iter().map(|&v| m.value_name(v)).collect::<Vec<_>>())).collect();
    let designated: Vec<bool> = tuples.iter().map(|t| t.iter().all(|&v| m.is_designated(v))).collect();
    Ok(Nmatrix::from_fn_unchecked(values, designated, m.signature().clone(), |name, args| {
        let coord_cells: Vec<&[Value]> = (0..n)
            .map(|i| {
                let coords: Vec<Value> = args.iter().map(|&a| tuples[a as usize][i]).collect();
                m.cell(name, &coords)
            })
            .collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; n];
        loop {
            let t: Vec<Value> = (0..n).map(|i| coord_cells[i][pick[i]]).collect();
            out.push(cell_index(base, &t) as Value);
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < coord_cells[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    })?)
}

/// A strict product with the pair behind each of its values.
#[derive(Debug, Clone)]
pub struct Product {
    pub matrix: Nmatrix,
    pub pairs: Vec<(Value, Value)>,
}

impl Product {
    pub fn value_of(&self, a: Value, b: Value) -> Option<Value> {
        self.pairs.binary_search(&(a, b)).ok().map(|i| i as Value)
    }
}

pub fn strict_product(m1: &Nmatrix, m2: &Nmatrix) -> Result<Nmatrix, MatrixError> {
    Ok(strict_product_with_pairs(m1, m2, DEFAULT_SIZE_CAP)?.matrix)
}

/// Values are the pairs agreeing on designation, ordered lexicographically.
pub fn strict_product_with_pairs(m1: &Nmatrix, m2: &Nmatrix, cap: usize) -> Result<Product, MatrixError> {
    if let Some((n, _)) = m1.signature().iter().find(|(n, _)| m2.signature().contains(n)) {
        return Err(MatrixError::Overlap(n.to_string()));
    }
    if !m1.is_non_degenerate() || !m2.is_non_degenerate() {
        return Err(MatrixError::Degenerate);
    }
    let mut pairs = Vec::new();
    for a in 0..m1.len() as Value {
        for b in 0..m2.len() as Value {
            if m1.is_designated(a) == m2.is_designated(b) {
                pairs.push((a, b));
            }
        }
    }
    if pairs.len() > cap {
        return Err(MatrixError::SizeCap { what: "values", needed: pairs.len(), cap });
    }
    let sig = m1.signature().union(m2.signature())?;
    check_cells(pairs.len(), &sig)?;
    let values: Vec<String> = pairs.iter().map(|&(a, b)| tuple_name(&[m1.value_name(a), m2.value_name(b)])).collect();
    let designated: Vec<bool> = pairs.iter().map(|&(a, _)| m1.is_designated(a)).collect();
    // pairs sharing a first (second) component
    let mut by_first = vec![Vec::new(); m1.len()];
    let mut by_second = vec![Vec::new(); m2.len()];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        by_first[a as usize].push(i as Value);
        by_second[b as usize].push(i as Value);
    }
    let matrix = Nmatrix::from_fn_unchecked(values, designated, sig, |name, args| {
        let mut out = Vec::new();
        if m1.signature().contains(name) {
            let coords: Vec<Value> = args.iter().map(|&x| pairs[x as usize].0).collect();
            for &a in m1.cell(name, &coords) {
                out.extend(&by_first[a as usize]);
            }
        } else {
            let coords: Vec<Value> = args.iter().map(|&x| pairs[x as usize].1).collect();
            for &b in m2.cell(name, &coords) {
                out.extend(&by_second[b as usize]);
            }
        }
        out
    })?;
    Ok(Product { matrix, pairs })
}

/// Combines valuations of the two skeletons of `gamma` into a valuation over
/// the product: `v(φ) = (v1(skel1 φ), v2(skel2 φ))`.
pub fn merge_valuations(
    prod: &Product,
    m1: &Nmatrix,
    m2: &Nmatrix,
    v1: &PartialValuation,
    v2: &PartialValuation,
    gamma: &BTreeSet<Formula>,
) -> Result<PartialValuation, MatrixError> {
    let mut out = PartialValuation::new();
    for f in gamma {
        let s1 = skeleton(f, m1.signature());
        let s2 = skeleton(f, m2.signature());
        let a = v1.get(&s1).ok_or_else(|| MatrixError::Unassigned(s1.to_string()))?;
        let b = v2.get(&s2).ok_or_else(|| MatrixError::Unassigned(s2.to_string()))?;
        if m1.is_designated(a) != m2.is_designated(b) {
            return Err(MatrixError::Incompatible(f.to_string()));
        }
        out.insert(f.clone(), prod.value_of(a, b).expect("compatible pair"));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalKind {
    Top,
    Bottom,
    Unrestrained,
}

/// The 2-valued (N)matrix of a single top-like, bottom-like or unrestrained
/// connective.
pub fn canonical_matrix(kind: CanonicalKind, name: &str, arity: usize) -> Nmatrix {
    let sig = Signature::from_pairs([(name, arity)]).expect("single connective");
    Nmatrix::from_fn(vec!["0".into(), "1".into()], vec![false, true], sig, |_, _| match kind {
        CanonicalKind::Top => vec![1],
        CanonicalKind::Bottom => vec![0],
        CanonicalKind::Unrestrained => vec![0, 1],
    })
    .expect("2-valued matrix is non-degenerate")
}
