//! Finite Nmatrices, partial valuations and decidable entailment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::calculus::Rule;
use crate::syntax::{subformula_closure, topological_order, Formula, Signature, Substitution, SyntaxError};

/// Index of a truth value inside its Nmatrix.
pub type Value = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("degenerate Nmatrix: designated set must be a non-empty proper subset")]
    Degenerate,
    #[error("duplicate value `{0}`")]
    DuplicateValue(String),
    #[error("unknown value `{0}`")]
    UnknownValue(String),
    #[error("empty cell for `{name}` at ({args})")]
    EmptyCell { name: String, args: String },
    #[error("missing cell for `{name}` at ({args})")]
    MissingCell { name: String, args: String },
    #[error("no interpretation for connective `{0}`")]
    MissingConnective(String),
    #[error(transparent)]
    Signature(#[from] SyntaxError),
    #[error("set is not closed under subformulas: `{0}` is missing")]
    NotSubformulaClosed(String),
    #[error("saturation pool holds {0} formulas, at most 64 are supported")]
    PoolTooLarge(usize),
    #[error("{0}")]
    Invalid(String),
}

/// Interpretation of one connective; cells are indexed by the argument tuple
/// read as a big-endian number in base |V|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    arity: usize,
    cells: Vec<Vec<Value>>,
}

impl Table {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cells(&self) -> &[Vec<Value>] {
        &self.cells
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nmatrix {
    values: Vec<String>,
    designated: Vec<bool>,
    signature: Signature,
    tables: BTreeMap<String, Table>,
}

pub(crate) fn cell_index(nvals: usize, args: &[Value]) -> usize {
    args.iter().fold(0usize, |acc, &a| acc * nvals + a as usize)
}

/// Calls `f` on every tuple in `{0..n}^k` in lexicographic order.
pub fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[Value])) {
    if n == 0 && k > 0 {
        return;
    }
    let mut t = vec![0 as Value; k];
    loop {
        f(&t);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if (t[i] as usize) < n {
                break;
            }
            t[i] = 0;
        }
    }
}

impl Nmatrix {
    /// Builds an Nmatrix, computing each cell with `interp(name, args)`.
    pub fn from_fn<F>(
        values: Vec<String>,
        designated: Vec<bool>,
        signature: Signature,
        interp: F,
    ) -> Result<Nmatrix, SemanticsError>
    where
        F: FnMut(&str, &[Value]) -> Vec<Value>,
    {
        let m = Self::from_fn_unchecked(values, designated, signature, interp)?;
        if !m.is_non_degenerate() {
            return Err(SemanticsError::Degenerate);
        }
        Ok(m)
    }

    /// As [`Nmatrix::from_fn`] but accepts degenerate designated sets.
    pub fn from_fn_unchecked<F>(
        values: Vec<String>,
        designated: Vec<bool>,
        signature: Signature,
        mut interp: F,
    ) -> Result<Nmatrix, SemanticsError>
    where
        F: FnMut(&str, &[Value]) -> Vec<Value>,
    {
        let mut seen = BTreeSet::new();
        for v in &values {
            if !seen.insert(v.as_str()) {
                return Err(SemanticsError::DuplicateValue(v.clone()));
            }
        }
        if designated.len() != values.len() {
            return Err(SemanticsError::Invalid("designation vector length differs from value count".into()));
        }
        let n = values.len();
        let mut tables = BTreeMap::new();
        for (name, arity) in signature.iter() {
            let mut cells = Vec::with_capacity(n.pow(arity as u32));
            let mut err = None;
            for_each_tuple(n, arity, |args| {
                let mut c = interp(name, args);
                c.sort_unstable();
                c.dedup();
                if err.is_none() && (c.is_empty() || c.iter().any(|&x| x as usize >= n)) {
                    err = Some(SemanticsError::EmptyCell {
                        name: name.to_string(),
                        args: args.iter().map(|&a| values[a as usize].as_str()).collect::<Vec<_>>().join(","),
                    });
                }
                cells.push(c);
            });
            if let Some(e) = err {
                return Err(e);
            }
            tables.insert(name.to_string(), Table { arity, cells });
        }
        Ok(Nmatrix { values, designated, signature, tables })
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_name(&self, v: Value) -> &str {
        &self.values[v as usize]
    }

    pub fn value_id(&self, name: &str) -> Option<Value> {
        self.values.iter().position(|x| x == name).map(|i| i as Value)
    }

    pub fn is_designated(&self, v: Value) -> bool {
        self.designated[v as usize]
    }

    pub fn designation(&self) -> &[bool] {
        &self.designated
    }

    pub fn designated_values(&self) -> Vec<Value> {
        (0..self.len() as Value).filter(|&v| self.is_designated(v)).collect()
    }

    pub fn undesignated_values(&self) -> Vec<Value> {
        (0..self.len() as Value).filter(|&v| !self.is_designated(v)).collect()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.get(name)
    }

    pub fn cell(&self, name: &str, args: &[Value]) -> &[Value] {
        let t = &self.tables[name];
        &t.cells[cell_index(self.len(), args)]
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.designated.iter().any(|&d| d) && self.designated.iter().any(|&d| !d)
    }

    pub fn is_deterministic(&self) -> bool {
        self.tables.values().all(|t| t.cells.iter().all(|c| c.len() == 1))
    }

    pub fn is_unitary(&self) -> bool {
        self.designated.iter().filter(|&&d| d).count() == 1
    }

    /// Checks that `f` only uses connectives of this Nmatrix.
    pub fn check_formula(&self, f: &Formula) -> Result<(), SemanticsError> {
        f.check(&self.signature)?;
        Ok(())
    }

    /// Value of `f` in a deterministic Nmatrix; atoms are looked up in `env`.
    pub fn eval(&self, f: &Formula, env: &dyn Fn(&Formula) -> Value) -> Value {
        match f.head() {
            None => env(f),
            Some(h) => {
                let args: Vec<Value> = f.args().iter().map(|a| self.eval(a, env)).collect();
                self.cell(h, &args)[0]
            }
        }
    }

    /// The same Nmatrix with every value renamed through `f`.
    pub fn with_value_names(&self, f: impl Fn(&str) -> String) -> Result<Nmatrix, SemanticsError> {
        let values: Vec<String> = self.values.iter().map(|v| f(v)).collect();
        let mut seen = BTreeSet::new();
        for v in &values {
            if !seen.insert(v.as_str()) {
                return Err(SemanticsError::DuplicateValue(v.clone()));
            }
        }
        Ok(Nmatrix { values, ..self.clone() })
    }

    /// Cell-for-cell comparison of the connective `name` with another matrix,
    /// matching values by name.
    pub fn same_table(&self, other: &Nmatrix, name: &str) -> bool {
        let (Some(t1), Some(t2)) = (self.table(name), other.table(name)) else {
            return false;
        };
        if t1.arity != t2.arity || self.len() != other.len() {
            return false;
        }
        let map: Option<Vec<Value>> = self.values.iter().map(|v| other.value_id(v)).collect();
        let Some(map) = map else { return false };
        let mut ok = true;
        for_each_tuple(self.len(), t1.arity, |args| {
            let mapped: Vec<Value> = args.iter().map(|&a| map[a as usize]).collect();
            let mut c1: Vec<Value> = self.cell(name, args).iter().map(|&x| map[x as usize]).collect();
            c1.sort_unstable();
            if c1 != other.cell(name, &mapped) {
                ok = false;
            }
        });
        ok
    }
}

/// Assignment of values to a subformula-closed set of formulas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialValuation {
    map: BTreeMap<Formula, Value>,
}

impl PartialValuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, f: Formula, v: Value) {
        self.map.insert(f, v);
    }

    pub fn get(&self, f: &Formula) -> Option<Value> {
        self.map.get(f).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Formula> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, Value)> {
        self.map.iter().map(|(f, &v)| (f, v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Builds a valuation from value names.
    pub fn from_names<'a, I>(m: &Nmatrix, pairs: I) -> Result<Self, SemanticsError>
    where
        I: IntoIterator<Item = (Formula, &'a str)>,
    {
        let mut v = PartialValuation::new();
        for (f, name) in pairs {
            let id = m.value_id(name).ok_or_else(|| SemanticsError::UnknownValue(name.to_string()))?;
            v.insert(f, id);
        }
        Ok(v)
    }

    /// Checks subformula-closure and every interpretation cell.
    pub fn verify(&self, m: &Nmatrix) -> Result<(), SemanticsError> {
        for (f, &v) in &self.map {
            if v as usize >= m.len() {
                return Err(SemanticsError::Invalid(format!("`{f}` has no valid value")));
            }
            if let Some(h) = f.head() {
                m.check_formula(f)?;
                let mut args = Vec::with_capacity(f.args().len());
                for a in f.args() {
                    match self.map.get(a) {
                        Some(&x) => args.push(x),
                        None => return Err(SemanticsError::NotSubformulaClosed(a.to_string())),
                    }
                }
                if !m.cell(h, &args).contains(&v) {
                    return Err(SemanticsError::Invalid(format!("`{f}` ↦ {} is outside its cell", m.value_name(v))));
                }
            }
        }
        Ok(())
    }

    /// Verifies the valuation and that it designates `gamma` but not `phi`.
    pub fn refutes(&self, m: &Nmatrix, gamma: &[Formula], phi: &Formula) -> bool {
        self.verify(m).is_ok()
            && gamma.iter().all(|g| self.get(g).is_some_and(|v| m.is_designated(v)))
            && self.get(phi).is_some_and(|v| !m.is_designated(v))
    }

    pub fn restrict(&self, keep: &BTreeSet<Formula>) -> PartialValuation {
        PartialValuation {
            map: self.map.iter().filter(|(f, _)| keep.contains(*f)).map(|(f, &v)| (f.clone(), v)).collect(),
        }
    }

    /// `formula ↦ value` lines in canonical order.
    pub fn render(&self, m: &Nmatrix) -> String {
        let mut s = String::new();
        for (f, &v) in &self.map {
            s.push_str(&format!("{f} ↦ {}\n", m.value_name(v)));
        }
        s
    }

    pub fn named(&self, m: &Nmatrix) -> BTreeMap<String, String> {
        self.map.iter().map(|(f, &v)| (f.to_string(), m.value_name(v).to_string())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entailment {
    Holds,
    Fails(PartialValuation),
}

impl Entailment {
    pub fn holds(&self) -> bool {
        matches!(self, Entailment::Holds)
    }

    pub fn countermodel(&self) -> Option<&PartialValuation> {
        match self {
            Entailment::Fails(v) => Some(v),
            Entailment::Holds => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Need {
    Any,
    Designated,
    Undesignated,
}

/// `premises` designated forces `conclusion` designated (node indices).
#[derive(Clone, Debug)]
struct Clause {
    premises: Vec<usize>,
    conclusion: usize,
}

/// Depth-first search over the partial valuations of a subformula-closed set.
struct Search<'m> {
    m: &'m Nmatrix,
    nodes: Vec<Formula>,
    ops: Vec<Option<(&'m Table, Vec<usize>)>>,
    need: Vec<Need>,
    clauses_at: Vec<Vec<Clause>>,
    ready_parents: Vec<Vec<usize>>,
}

impl<'m> Search<'m> {
    fn new(m: &'m Nmatrix, domain: &BTreeSet<Formula>) -> Result<Self, SemanticsError> {
        let nodes = topological_order(domain);
        let index: BTreeMap<&Formula, usize> = nodes.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut ops = Vec::with_capacity(nodes.len());
        let mut ready_parents = vec![Vec::new(); nodes.len()];
        for (i, f) in nodes.iter().enumerate() {
            match f.head() {
                None => ops.push(None),
                Some(h) => {
                    let t = m.table(h).ok_or_else(|| SemanticsError::MissingConnective(h.to_string()))?;
                    if t.arity != f.args().len() {
                        return Err(SyntaxError::Arity {
                            name: h.to_string(),
                            expected: t.arity,
                            found: f.args().len(),
                        }
                        .into());
                    }
                    let mut kids = Vec::with_capacity(f.args().len());
                    for a in f.args() {
                        match index.get(a) {
                            Some(&k) => kids.push(k),
                            None => return Err(SemanticsError::NotSubformulaClosed(a.to_string())),
                        }
                    }
                    if let Some(&last) = kids.iter().max() {
                        ready_parents[last].push(i);
                    }
                    ops.push(Some((t, kids)));
                }
            }
        }
        let n = nodes.len();
        Ok(Search { m, nodes, ops, need: vec![Need::Any; n], clauses_at: vec![Vec::new(); n], ready_parents })
    }

    fn index_of(&self, f: &Formula) -> usize {
        self.nodes.binary_search_by(|x| x.depth().cmp(&f.depth()).then_with(|| x.cmp(f))).expect("formula in domain")
    }

    fn require(&mut self, f: &Formula, designated: bool) {
        let i = self.index_of(f);
        let want = if designated { Need::Designated } else { Need::Undesignated };
        self.need[i] = match (self.need[i], want) {
            (Need::Any, w) => w,
            (a, b) if a == b => a,
            // contradictory requirements: no valuation qualifies
            _ => {
                self.ops.clear();
                return;
            }
        };
    }

    fn add_clause(&mut self, premises: &[Formula], conclusion: &Formula) {
        let ps: Vec<usize> = premises.iter().map(|p| self.index_of(p)).collect();
        let c = self.index_of(conclusion);
        let at = ps.iter().copied().chain([c]).max().unwrap();
        self.clauses_at[at].push(Clause { premises: ps, conclusion: c });
    }

    fn ok_value(&self, i: usize, v: Value) -> bool {
        match self.need[i] {
            Need::Any => true,
            Need::Designated => self.m.is_designated(v),
            Need::Undesignated => !self.m.is_designated(v),
        }
    }

    fn candidates(&self, i: usize, assign: &[Value]) -> Vec<Value> {
        match &self.ops[i] {
            None => (0..self.m.len() as Value).filter(|&v| self.ok_value(i, v)).collect(),
            Some((t, kids)) => {
                let args: Vec<Value> = kids.iter().map(|&k| assign[k]).collect();
                t.cells[cell_index(self.m.len(), &args)].iter().copied().filter(|&v| self.ok_value(i, v)).collect()
            }
        }
    }

    fn consistent(&self, i: usize, assign: &[Value]) -> bool {
        for c in &self.clauses_at[i] {
            if c.premises.iter().all(|&p| self.m.is_designated(assign[p]))
                && !self.m.is_designated(assign[c.conclusion])
            {
                return false;
            }
        }
        for &p in &self.ready_parents[i] {
            if self.candidates(p, assign).is_empty() {
                return false;
            }
        }
        true
    }

    /// Visits every admissible assignment; the visitor returns `false` to stop.
    fn run(&self, visit: &mut dyn FnMut(&[Value]) -> bool) {
        if self.ops.len() != self.nodes.len() {
            return;
        }
        let mut assign = vec![0 as Value; self.nodes.len()];
        self.go(0, &mut assign, visit);
    }

    fn go(&self, i: usize, assign: &mut Vec<Value>, visit: &mut dyn FnMut(&[Value]) -> bool) -> bool {
        if i == self.nodes.len() {
            return visit(assign);
        }
        for v in self.candidates(i, assign) {
            assign[i] = v;
            if self.consistent(i, assign) && !self.go(i + 1, assign, visit) {
                return false;
            }
        }
        true
    }

    fn valuation(&self, assign: &[Value]) -> PartialValuation {
        PartialValuation { map: self.nodes.iter().cloned().zip(assign.iter().copied()).collect() }
    }
}

fn check_all(m: &Nmatrix, fs: &[Formula]) -> Result<(), SemanticsError> {
    for f in fs {
        m.check_formula(f)?;
    }
    Ok(())
}

/// Calls `visit` on each partial valuation of `domain` in canonical DFS order
/// until it returns `false`.
pub fn for_each_partial_valuation(
    m: &Nmatrix,
    domain: &BTreeSet<Formula>,
    visit: &mut dyn FnMut(&PartialValuation) -> bool,
) -> Result<(), SemanticsError> {
    let s = Search::new(m, domain)?;
    s.run(&mut |a| visit(&s.valuation(a)));
    Ok(())
}

pub fn enumerate_partial_valuations(
    m: &Nmatrix,
    domain: &BTreeSet<Formula>,
) -> Result<Vec<PartialValuation>, SemanticsError> {
    let mut out = Vec::new();
    for_each_partial_valuation(m, domain, &mut |v| {
        out.push(v.clone());
        true
    })?;
    Ok(out)
}

/// Decides `gamma ⊢ phi` over partial valuations on sub(gamma ∪ {phi}).
pub fn entails(m: &Nmatrix, gamma: &[Formula], phi: &Formula) -> Result<Entailment, SemanticsError> {
    check_all(m, gamma)?;
    m.check_formula(phi)?;
    let domain = subformula_closure(gamma.iter().chain([phi]));
    let mut s = Search::new(m, &domain)?;
    for g in gamma {
        s.require(g, true);
    }
    s.require(phi, false);
    let mut found = None;
    s.run(&mut |a| {
        found = Some(s.valuation(a));
        false
    });
    Ok(match found {
        Some(v) => Entailment::Fails(v),
        None => Entailment::Holds,
    })
}

/// Each member of `delta` follows from `gamma` and vice versa.
pub fn logically_equivalent(m: &Nmatrix, gamma: &[Formula], delta: &[Formula]) -> Result<bool, SemanticsError> {
    for d in delta {
        if !entails(m, gamma, d)?.holds() {
            return Ok(false);
        }
    }
    for g in gamma {
        if !entails(m, delta, g)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Calls `f` with every substitution sending `vars` into `universe`.
pub(crate) fn for_each_substitution(vars: &[Formula], universe: &[Formula], f: &mut dyn FnMut(&Substitution)) {
    for_each_tuple(universe.len(), vars.len(), |idx| {
        let s: Substitution = vars.iter().cloned().zip(idx.iter().map(|&i| universe[i as usize].clone())).collect();
        f(&s);
    });
}

/// Whether `v` respects `rule` for every substitution into `universe` whose
/// instance lies in the domain of `v`. Bounded: says nothing about other
/// substitutions.
pub fn respects_rule_within_universe(m: &Nmatrix, v: &PartialValuation, rule: &Rule, universe: &[Formula]) -> bool {
    let vars: Vec<Formula> = rule.variables().into_iter().collect();
    let mut ok = true;
    for_each_substitution(&vars, universe, &mut |s| {
        if !ok {
            return;
        }
        let (ps, c) = rule.instance(s);
        let vals: Option<Vec<Value>> = ps.iter().map(|p| v.get(p)).collect();
        let (Some(vals), Some(cv)) = (vals, v.get(&c)) else {
            return;
        };
        if vals.iter().all(|&x| m.is_designated(x)) && !m.is_designated(cv) {
            ok = false;
        }
    });
    ok
}

/// Which sufficient condition for an exact filtered verdict the caller asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proviso {
    /// The caller vouches that the Nmatrix is saturated.
    Saturated,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Heuristic,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "exact",
            Exactness::Heuristic => "heuristic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredEntailment {
    pub verdict: Entailment,
    pub exactness: Exactness,
}

/// Domain and search for valuations respecting `rules` within `universe`.
pub struct RuleFilter<'m> {
    search: Search<'m>,
    universe: Vec<Formula>,
}

impl<'m> RuleFilter<'m> {
    /// The domain is sub(`seed`) plus every rule instance with variables sent
    /// into `universe`.
    pub fn new(m: &'m Nmatrix, rules: &[Rule], seed: &[Formula], universe: &[Formula]) -> Result<Self, SemanticsError> {
        check_all(m, seed)?;
        let mut instances = Vec::new();
        for r in rules {
            let vars: Vec<Formula> = r.variables().into_iter().collect();
            for_each_substitution(&vars, universe, &mut |s| instances.push(r.instance(s)));
        }
        let mut domain = subformula_closure(seed.iter().chain(universe));
        for (ps, c) in &instances {
            check_all(m, ps)?;
            m.check_formula(c)?;
            domain.extend(subformula_closure(ps.iter().chain([c])));
        }
        let mut search = Search::new(m, &domain)?;
        for (ps, c) in &instances {
            search.add_clause(ps, c);
        }
        Ok(RuleFilter { search, universe: universe.to_vec() })
    }

    pub fn for_each(&self, visit: &mut dyn FnMut(&PartialValuation) -> bool) {
        self.search.run(&mut |a| visit(&self.search.valuation(a)));
    }

    /// Values taken by universe formulas across all surviving valuations.
    pub fn values_on_universe(&self) -> BTreeSet<Value> {
        let idx: Vec<usize> = self.universe.iter().map(|f| self.search.index_of(f)).collect();
        let mut out = BTreeSet::new();
        self.search.run(&mut |a| {
            out.extend(idx.iter().map(|&i| a[i]));
            true
        });
        out
    }
}

/// Entailment over valuations that respect `rules` within `universe`
/// (default: sub(gamma ∪ {phi})).
pub fn filter_valuations_by_rules(
    m: &Nmatrix,
    rules: &[Rule],
    gamma: &[Formula],
    phi: &Formula,
    universe: Option<&[Formula]>,
    proviso: Proviso,
) -> Result<FilteredEntailment, SemanticsError> {
    let seed: Vec<Formula> = gamma.iter().chain([phi]).cloned().collect();
    let default_universe: Vec<Formula>;
    let universe = match universe {
        Some(u) => u,
        None => {
            default_universe = subformula_closure(&seed).into_iter().collect();
            &default_universe
        }
    };
    let mut f = RuleFilter::new(m, rules, &seed, universe)?;
    for g in gamma {
        f.search.require(g, true);
    }
    f.search.require(phi, false);
    let mut found = None;
    f.search.run(&mut |a| {
        found = Some(f.search.valuation(a));
        false
    });
    let exactness = if proviso == Proviso::Saturated || rules.iter().all(Rule::is_axiom) {
        Exactness::Exact
    } else {
        Exactness::Heuristic
    };
    Ok(FilteredEntailment {
        verdict: match found {
            Some(v) => Entailment::Fails(v),
            None => Entailment::Holds,
        },
        exactness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaturationResult {
    NoCounterexampleFound,
    Counterexample { gamma: Vec<Formula>, delta: Vec<Formula> },
}

/// Looks for a premise set Γ from `premise_sets` and Δ ⊆ `delta_pool` with
/// 2 ≤ |Δ| ≤ k such that Γ entails no member of Δ, yet no valuation
/// designates Γ while undesignating all of Δ.
pub fn bounded_saturation_check(
    m: &Nmatrix,
    k: usize,
    premise_sets: &[Vec<Formula>],
    delta_pool: &[Formula],
) -> Result<SaturationResult, SemanticsError> {
    if delta_pool.len() > 64 {
        return Err(SemanticsError::PoolTooLarge(delta_pool.len()));
    }
    for gamma in premise_sets {
        let mut open = Vec::new();
        for psi in delta_pool {
            if !entails(m, gamma, psi)?.holds() {
                open.push(psi.clone());
            }
        }
        if open.len() < 2 {
            continue;
        }
        // sets of open formulas left undesignated by some valuation
        let domain = subformula_closure(gamma.iter().chain(&open));
        let mut s = Search::new(m, &domain)?;
        for g in gamma {
            s.require(g, true);
        }
        let idx: Vec<usize> = open.iter().map(|f| s.index_of(f)).collect();
        let mut zero_sets = BTreeSet::new();
        s.run(&mut |a| {
            let mut mask = 0u64;
            for (bit, &i) in idx.iter().enumerate() {
                if !m.is_designated(a[i]) {
                    mask |= 1 << bit;
                }
            }
            zero_sets.insert(mask);
            true
        });
        let zero_sets: Vec<u64> = zero_sets.into_iter().collect();
        for size in 2..=k.min(open.len()) {
            let mut chosen: Vec<usize> = (0..size).collect();
            loop {
                let mask = chosen.iter().fold(0u64, |acc, &i| acc | 1 << i);
                if zero_sets.iter().all(|z| mask & !z != 0) {
                    return Ok(SaturationResult::Counterexample {
                        gamma: gamma.clone(),
                        delta: chosen.iter().map(|&i| open[i].clone()).collect(),
                    });
                }
                if !next_combination(&mut chosen, open.len()) {
                    break;
                }
            }
        }
    }
    Ok(SaturationResult::NoCounterexampleFound)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Standard pools for a single connective of arity `a`: variables
/// `p1..p(2a)`, premise sets ∅ and each `c(x̄)`, Δ-pool the variables and all
/// `c(x̄)`. Returns (premise sets, Δ-pool, k).
pub fn standard_pools(name: &str, arity: usize) -> (Vec<Vec<Formula>>, Vec<Formula>, usize) {
    let vars = crate::syntax::pvars(2 * arity);
    let mut apps = Vec::new();
    for_each_tuple(vars.len(), arity, |idx| {
        apps.push(Formula::app(name, idx.iter().map(|&i| vars[i as usize].clone()).collect()));
    });
    let mut premise_sets = vec![Vec::new()];
    premise_sets.extend(apps.iter().map(|a| vec![a.clone()]));
    let mut pool = vars;
    pool.extend(apps);
    (premise_sets, pool, 2 * arity + 1)
}
