//! Strategies shared by the property tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use nmfib::semantics::{for_each_tuple, Nmatrix, Value};
use nmfib::syntax::{Formula, Signature};
use proptest::prelude::*;

pub fn sig(pairs: &[(&str, usize)]) -> Signature {
    Signature::from_pairs(pairs.iter().copied()).unwrap()
}

/// Formulas over `conns` and the variables `vars` of depth at most `depth`.
pub fn formula(conns: &[(&'static str, usize)], vars: &[&'static str], depth: u32) -> BoxedStrategy<Formula> {
    let vars = vars.to_vec();
    let constants: Vec<&'static str> = conns.iter().filter(|c| c.1 == 0).map(|c| c.0).collect();
    let compound: Vec<(&'static str, usize)> = conns.iter().filter(|c| c.1 > 0).copied().collect();
    let var = prop::sample::select(vars).prop_map(|v| Formula::var(v));
    let leaf = if constants.is_empty() {
        var.boxed()
    } else {
        prop_oneof![3 => var, 1 => prop::sample::select(constants).prop_map(Formula::constant)].boxed()
    };
    if compound.is_empty() || depth == 0 {
        return leaf;
    }
    leaf.prop_recursive(depth, 48, 3, move |inner| {
        prop::sample::select(compound.clone())
            .prop_flat_map(move |(n, a)| {
                prop::collection::vec(inner.clone(), a).prop_map(move |args| Formula::app(n, args))
            })
            .boxed()
    })
    .boxed()
}

pub fn formulas(
    conns: &[(&'static str, usize)],
    vars: &[&'static str],
    depth: u32,
    len: std::ops::RangeInclusive<usize>,
) -> BoxedStrategy<Vec<Formula>> {
    prop::collection::vec(formula(conns, vars, depth), len).boxed()
}

/// The raw data of a random matrix: size, designation mask and one cell mask
/// per table entry, in signature order.
#[derive(Debug, Clone)]
pub struct MatrixSeed {
    pub size: usize,
    pub designated: u32,
    pub cells: Vec<u32>,
}

fn cell_count(size: usize, sig: &Signature) -> usize {
    sig.iter().map(|(_, a)| size.pow(a as u32)).sum()
}

/// Non-degenerate matrices with 2 or 3 values; `deterministic` forces
/// singleton cells.
pub fn matrix(sig: Signature, deterministic: bool) -> BoxedStrategy<Nmatrix> {
    (2usize..=3)
        .prop_flat_map(move |size| {
            let n = cell_count(size, &sig);
            let cell = if deterministic {
                (0..size as u32).prop_map(|v| 1u32 << v).boxed()
            } else {
                (1u32..1 << size).boxed()
            };
            let sig = sig.clone();
            (Just(size), 1u32..(1 << size) - 1, prop::collection::vec(cell, n))
                .prop_map(move |(size, designated, cells)| build(&sig, &MatrixSeed { size, designated, cells }))
        })
        .boxed()
}

pub fn build(sig: &Signature, seed: &MatrixSeed) -> Nmatrix {
    let size = seed.size;
    let values: Vec<String> = (0..size).map(|i| format!("v{i}")).collect();
    let designated: Vec<bool> = (0..size).map(|i| seed.designated >> i & 1 == 1).collect();
    let mut offsets = Vec::new();
    let mut at = 0;
    for (name, a) in sig.iter() {
        offsets.push((name.to_string(), at));
        at += size.pow(a as u32);
    }
    Nmatrix::from_fn(values, designated, sig.clone(), |name, args| {
        let base = offsets.iter().find(|(n, _)| n == name).unwrap().1;
        let idx = args.iter().fold(0usize, |acc, &a| acc * size + a as usize);
        let mask = seed.cells[base + idx];
        (0..size as Value).filter(|v| mask >> v & 1 == 1).collect()
    })
    .unwrap()
}

/// `m1` and `m2` agree up to the value bijection `map` (indices of `m1` to
/// indices of `m2`) on designation and on every table of `m1`.
pub fn isomorphic_via(m1: &Nmatrix, m2: &Nmatrix, map: &[Value]) -> bool {
    if m1.len() != m2.len() || map.iter().copied().collect::<BTreeSet<_>>().len() != m1.len() {
        return false;
    }
    if (0..m1.len()).any(|i| m1.is_designated(i as Value) != m2.is_designated(map[i])) {
        return false;
    }
    let mut ok = true;
    for (name, a) in m1.signature().iter() {
        for_each_tuple(m1.len(), a, |args| {
            let mapped: Vec<Value> = args.iter().map(|&x| map[x as usize]).collect();
            let c1: BTreeSet<Value> = m1.cell(name, args).iter().map(|&x| map[x as usize]).collect();
            let c2: BTreeSet<Value> = m2.cell(name, &mapped).iter().copied().collect();
            ok &= c1 == c2;
        });
    }
    ok
}

pub fn vars_of(fs: &[Formula]) -> BTreeSet<Formula> {
    fs.iter().flat_map(Formula::atoms).collect()
}
