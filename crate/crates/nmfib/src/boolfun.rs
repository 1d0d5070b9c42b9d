//! Boolean functions as truth tables, the connective taxonomy, Post's five
//! coatoms and bounded clone closure.
//!
//! Row `i` of a `k`-place table is the argument vector given by the `k`-bit
//! big-endian encoding of `i`, so the first argument is the most significant
//! bit and disjunction reads `0111`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::semantics::Nmatrix;
use crate::syntax::{pvars, Formula, Signature, Substitution, SyntaxError, Translation};

pub const MAX_ARITY: usize = 6;
pub const MAX_CLONE_ARITY: usize = 4;
/// Default bound on compositions tried by the closure engines.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoolFunError {
    #[error("bad truth table `{0}`: expected a string of 0/1 of length 2^k")]
    BadTable(String),
    #[error("table has {found} rows, arity {arity} needs {expected}")]
    TableLength { arity: usize, expected: usize, found: usize },
    #[error("arity {0} exceeds the supported maximum")]
    ArityTooLarge(usize),
    #[error("clone closure supports arities 0..=4, got {0}")]
    CloneArity(usize),
    #[error("closure budget of {0} compositions exhausted")]
    Budget(u64),
    #[error("`{0}` is top-like")]
    TopLike(String),
    #[error("connective `{0}` has no truth table")]
    MissingTable(String),
    #[error("`{name}` is declared {declared}-place but its table is {table}-place")]
    ArityMismatch { name: String, declared: usize, table: usize },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanFunction {
    arity: usize,
    bits: u64,
}

fn row_mask(arity: usize) -> u64 {
    if arity == MAX_ARITY {
        u64::MAX
    } else {
        (1u64 << (1 << arity)) - 1
    }
}

impl BooleanFunction {
    pub fn new(arity: usize, bits: u64) -> Result<Self, BoolFunError> {
        if arity > MAX_ARITY {
            return Err(BoolFunError::ArityTooLarge(arity));
        }
        Ok(BooleanFunction { arity, bits: bits & row_mask(arity) })
    }

    /// Parses a table string; the arity is log2 of its length.
    pub fn from_table(table: &str) -> Result<Self, BoolFunError> {
        let n = table.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(BoolFunError::BadTable(table.to_string()));
        }
        Self::from_table_with_arity(n.trailing_zeros() as usize, table)
    }

    pub fn from_table_with_arity(arity: usize, table: &str) -> Result<Self, BoolFunError> {
        if arity > MAX_ARITY {
            return Err(BoolFunError::ArityTooLarge(arity));
        }
        let table = table.trim();
        if table.len() != 1 << arity {
            if table.chars().any(|c| c != '0' && c != '1') {
                return Err(BoolFunError::BadTable(table.to_string()));
            }
            return Err(BoolFunError::TableLength { arity, expected: 1 << arity, found: table.len() });
        }
        let mut bits = 0u64;
        for (i, c) in table.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(BoolFunError::BadTable(table.to_string())),
            }
        }
        Ok(BooleanFunction { arity, bits })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        assert!(arity <= MAX_ARITY);
        let mut bits = 0u64;
        let mut args = vec![false; arity];
        for row in 0..1usize << arity {
            for (j, a) in args.iter_mut().enumerate() {
                *a = row >> (arity - 1 - j) & 1 == 1;
            }
            if f(&args) {
                bits |= 1 << row;
            }
        }
        BooleanFunction { arity, bits }
    }

    pub fn constant(arity: usize, value: bool) -> Self {
        BooleanFunction { arity, bits: if value { row_mask(arity) } else { 0 } }
    }

    /// The projection onto argument `j` (0-based).
    pub fn projection(arity: usize, j: usize) -> Self {
        assert!(j < arity);
        Self::from_fn(arity, |a| a[j])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn rows(&self) -> usize {
        1 << self.arity
    }

    pub fn row(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn eval(&self, args: &[bool]) -> bool {
        assert_eq!(args.len(), self.arity);
        let i = args.iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        self.row(i)
    }

    pub fn table_string(&self) -> String {
        (0..self.rows()).map(|i| if self.row(i) { '1' } else { '0' }).collect()
    }

    pub fn is_top_like(&self) -> bool {
        self.bits == row_mask(self.arity)
    }

    pub fn is_bottom_like(&self) -> bool {
        self.bits == 0
    }

    /// Index `j` such that this is the `j`-th projection.
    pub fn projection_index(&self) -> Option<usize> {
        (0..self.arity).find(|&j| *self == Self::projection(self.arity, j))
    }

    /// `self(args[0], …, args[m-1])` where all `args` share one arity.
    pub fn compose(&self, args: &[BooleanFunction]) -> BooleanFunction {
        assert_eq!(args.len(), self.arity);
        let k = args.first().map_or(0, |a| a.arity);
        assert!(args.iter().all(|a| a.arity == k));
        if self.arity == 0 {
            return Self::constant(k, self.row(0));
        }
        let masks: Vec<u64> = args.iter().map(|a| a.bits).collect();
        BooleanFunction { arity: k, bits: compose_bits(self.bits, self.arity, &masks, row_mask(k)) }
    }

    /// Algebraic normal form: bit `i` is the coefficient of the monomial whose
    /// variables are the set bits of row `i`.
    pub fn anf(&self) -> u64 {
        let mut a = self.bits;
        let n = self.rows();
        let mut step = 1;
        while step < n {
            for i in 0..n {
                if i & step != 0 && a >> (i ^ step) & 1 == 1 {
                    a ^= 1 << i;
                }
            }
            step <<= 1;
        }
        a
    }
}

fn compose_bits(g: u64, m: usize, args: &[u64], full: u64) -> u64 {
    let mut out = 0u64;
    for s in 0..1usize << m {
        if g >> s & 1 == 0 {
            continue;
        }
        let mut acc = full;
        for (j, &h) in args.iter().enumerate() {
            acc &= if s >> (m - 1 - j) & 1 == 1 { h } else { !h };
        }
        out |= acc;
    }
    out & full
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table_string())
    }
}

pub fn top() -> BooleanFunction {
    BooleanFunction::constant(0, true)
}
pub fn bot() -> BooleanFunction {
    BooleanFunction::constant(0, false)
}
pub fn neg() -> BooleanFunction {
    BooleanFunction::from_fn(1, |a| !a[0])
}
pub fn and() -> BooleanFunction {
    BooleanFunction::from_fn(2, |a| a[0] && a[1])
}
pub fn or() -> BooleanFunction {
    BooleanFunction::from_fn(2, |a| a[0] || a[1])
}
pub fn imp() -> BooleanFunction {
    BooleanFunction::from_fn(2, |a| !a[0] || a[1])
}
/// `coimp(x, y) = ¬x ∧ y`.
pub fn coimp() -> BooleanFunction {
    BooleanFunction::from_fn(2, |a| !a[0] && a[1])
}
pub fn iff() -> BooleanFunction {
    BooleanFunction::from_fn(2, |a| a[0] == a[1])
}
pub fn xor() -> BooleanFunction {
    BooleanFunction::from_fn(2, |a| a[0] != a[1])
}
pub fn xor3() -> BooleanFunction {
    BooleanFunction::from_fn(3, |a| a[0] ^ a[1] ^ a[2])
}
/// `if(x, y, z)`: `y` when `x` holds, `z` otherwise.
pub fn ite() -> BooleanFunction {
    BooleanFunction::from_fn(3, |a| if a[0] { a[1] } else { a[2] })
}
/// `p1 ∧ (p2 ∨ p3)`.
pub fn bowtie() -> BooleanFunction {
    BooleanFunction::from_fn(3, |a| a[0] && (a[1] || a[2]))
}
/// `T^k_n`: at least `n` of the `k` arguments hold.
pub fn threshold(k: usize, n: usize) -> BooleanFunction {
    BooleanFunction::from_fn(k, |a| a.iter().filter(|&&b| b).count() >= n)
}

/// Connective names understood by [`standard_connective`]: `top`, `bot`,
/// `neg`, `and`, `or`, `imp`, `coimp`, `iff`, `xor`, `xor3`, `if` (alias
/// `if3`), `bowtie` and thresholds `t{k}_{n}` (alias `thr_{k}_{n}`).
pub fn standard_connective(name: &str) -> Option<BooleanFunction> {
    Some(match name {
        "top" => top(),
        "bot" => bot(),
        "neg" => neg(),
        "and" => and(),
        "or" => or(),
        "imp" => imp(),
        "coimp" => coimp(),
        "iff" => iff(),
        "xor" => xor(),
        "xor3" => xor3(),
        "if" | "if3" => ite(),
        "bowtie" => bowtie(),
        _ => {
            let rest = name.strip_prefix("thr_").or_else(|| name.strip_prefix('t'))?;
            let (k, n) = rest.split_once('_')?;
            let (k, n): (usize, usize) = (k.parse().ok()?, n.parse().ok()?);
            if n > k || k > MAX_ARITY {
                return None;
            }
            threshold(k, n)
        }
    })
}

fn instantiate(body: &Formula, args: &[Formula]) -> Formula {
    let s: Substitution = pvars(args.len()).into_iter().zip(args.iter().cloned()).collect();
    body.substitute(&s)
}

/// `T^k_n(args)` unfolded through the recursive definition over `and`, `or`
/// and `top`.
pub fn threshold_term(args: &[Formula], n: usize) -> Formula {
    let k = args.len();
    if n == 0 {
        return Formula::constant("top");
    }
    if n == k {
        return crate::syntax::fold_right("and", args).expect("k > 0");
    }
    Formula::app(
        "or",
        vec![
            Formula::app("and", vec![args[0].clone(), threshold_term(&args[1..], n - 1)]),
            threshold_term(&args[1..], n),
        ],
    )
}

/// The basic signature `{top, bot, neg, and, or, imp}`.
pub fn basic_signature() -> Signature {
    Signature::from_pairs([("top", 0), ("bot", 0), ("neg", 1), ("and", 2), ("or", 2), ("imp", 2)]).expect("static")
}

/// Derived connectives over the basic signature: `coimp`, `iff`, `xor`,
/// `xor3`, `if` and the thresholds `t{k}_{n}` for `k ≤ max_k`.
pub fn derived_translation(max_k: usize) -> (Signature, Translation) {
    let sig = basic_signature();
    let p = pvars(3);
    let f = |s: &str| crate::syntax::parse(s, &sig).expect("static");
    let iff_body = f("and(imp(p1,p2),imp(p2,p1))");
    let xor_body = Formula::app("neg", vec![iff_body.clone()]);
    let xor3_body = instantiate(&xor_body, &[p[0].clone(), instantiate(&xor_body, &[p[1].clone(), p[2].clone()])]);
    let mut source =
        Signature::from_pairs([("coimp", 2), ("iff", 2), ("xor", 2), ("xor3", 3), ("if", 3)]).expect("static");
    let mut t = Translation::new()
        .with("coimp", f("neg(imp(p2,p1))"))
        .with("iff", iff_body)
        .with("xor", xor_body)
        .with("xor3", xor3_body)
        .with("if", f("and(imp(p1,p2),imp(neg(p1),p3))"));
    for k in 0..=max_k {
        for n in 0..=k {
            let name = format!("t{k}_{n}");
            source.insert(&name, k).expect("fresh name");
            t.insert(&name, threshold_term(&pvars(k), n));
        }
    }
    (source, t)
}

/// The truth table of a formula over `vars`, reading connectives through
/// `tables`.
pub fn function_of(
    f: &Formula,
    vars: &[Formula],
    tables: &BTreeMap<String, BooleanFunction>,
) -> Result<BooleanFunction, BoolFunError> {
    if vars.len() > MAX_ARITY {
        return Err(BoolFunError::ArityTooLarge(vars.len()));
    }
    fn eval(
        f: &Formula,
        vars: &[Formula],
        row: &[bool],
        tables: &BTreeMap<String, BooleanFunction>,
    ) -> Result<bool, BoolFunError> {
        match f.head() {
            None => {
                let i = vars.iter().position(|v| v == f).ok_or_else(|| BoolFunError::MissingTable(f.to_string()))?;
                Ok(row[i])
            }
            Some(h) => {
                let g = tables.get(h).ok_or_else(|| BoolFunError::MissingTable(h.to_string()))?;
                let args = f.args().iter().map(|a| eval(a, vars, row, tables)).collect::<Result<Vec<_>, _>>()?;
                Ok(g.eval(&args))
            }
        }
    }
    let k = vars.len();
    let mut bits = 0u64;
    let mut row = vec![false; k];
    for i in 0..1usize << k {
        for (j, r) in row.iter_mut().enumerate() {
            *r = i >> (k - 1 - j) & 1 == 1;
        }
        if eval(f, vars, &row, tables)? {
            bits |= 1 << i;
        }
    }
    BooleanFunction::new(k, bits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub top_like: bool,
    pub bottom_like: bool,
    /// 1-based.
    pub projective_indices: BTreeSet<usize>,
    /// 1-based.
    pub projection_conjunction: Option<BTreeSet<usize>>,
    pub significant: bool,
    pub very_significant: bool,
    pub truth_preserving: bool,
}

fn index_set(s: &BTreeSet<usize>) -> String {
    let parts: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl Classification {
    /// One-line report, e.g. `projection-conjunction J={1,2}; truth-preserving`.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if self.top_like {
            parts.push("top-like".to_string());
        }
        if self.bottom_like {
            parts.push("bottom-like".to_string());
        }
        if let Some(j) = &self.projection_conjunction {
            parts.push(format!("projection-conjunction J={}", index_set(j)));
        }
        if self.very_significant {
            parts.push("very significant".to_string());
        } else if self.significant && self.projection_conjunction.is_none() {
            parts.push("significant".to_string());
        }
        parts.push(if self.truth_preserving {
            "truth-preserving".to_string()
        } else {
            "not truth-preserving".to_string()
        });
        parts.join("; ")
    }
}

pub fn classify(f: &BooleanFunction) -> Classification {
    let k = f.arity();
    let ones: Vec<usize> = (0..f.rows()).filter(|&i| f.row(i)).collect();
    let bit = |row: usize, j: usize| row >> (k - 1 - j) & 1 == 1;
    let projective: BTreeSet<usize> = (0..k).filter(|&j| ones.iter().all(|&r| bit(r, j))).map(|j| j + 1).collect();
    let pc = (0..f.rows()).all(|r| f.row(r) == projective.iter().all(|&j| bit(r, j - 1)));
    let projection_conjunction = pc.then(|| projective.clone());
    let top_like = f.is_top_like();
    let bottom_like = f.is_bottom_like();
    Classification {
        top_like,
        bottom_like,
        very_significant: !bottom_like && projection_conjunction.is_none(),
        projective_indices: projective,
        projection_conjunction,
        significant: !top_like && !bottom_like,
        truth_preserving: f.row(f.rows() - 1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PostPredicates {
    pub preserves0: bool,
    pub preserves1: bool,
    pub monotone: bool,
    pub affine: bool,
    pub self_dual: bool,
}

pub fn post_predicates(f: &BooleanFunction) -> PostPredicates {
    let n = f.rows();
    let full = n - 1;
    let monotone = (0..n).all(|a| (0..n).all(|b| a & b != a || !f.row(a) || f.row(b)));
    let anf = f.anf();
    PostPredicates {
        preserves0: !f.row(0),
        preserves1: f.row(full),
        monotone,
        affine: (0..n).all(|i| (i as u64).count_ones() < 2 || anf >> i & 1 == 0),
        self_dual: (0..n).all(|a| f.row(a) != f.row(full ^ a)),
    }
}

/// Post's five maximal incomplete clones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PostClone {
    P0,
    P1,
    A,
    M,
    D,
}

impl PostClone {
    pub const ALL: [PostClone; 5] = [PostClone::P0, PostClone::P1, PostClone::A, PostClone::M, PostClone::D];

    pub fn holds(self, p: &PostPredicates) -> bool {
        match self {
            PostClone::P0 => p.preserves0,
            PostClone::P1 => p.preserves1,
            PostClone::A => p.affine,
            PostClone::M => p.monotone,
            PostClone::D => p.self_dual,
        }
    }
}

impl fmt::Display for PostClone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PostClone::P0 => "P0",
            PostClone::P1 => "P1",
            PostClone::A => "A",
            PostClone::M => "M",
            PostClone::D => "D",
        })
    }
}

/// Membership in `T0^k` (`None` for `T0^∞`): any `k` satisfying rows share
/// a coordinate equal to 1. Each is the set of polymorphisms of a relation,
/// hence a clone.
pub fn in_t0(f: &BooleanFunction, k: Option<usize>) -> bool {
    let ones: Vec<usize> = (0..f.rows()).filter(|&r| f.row(r)).collect();
    match k {
        None => ones.iter().fold(f.rows() - 1, |m, &r| m & r) != 0 || ones.is_empty(),
        Some(k) => {
            fn rec(ones: &[usize], start: usize, left: usize, acc: usize) -> bool {
                if acc == 0 {
                    return false;
                }
                if left == 0 {
                    return true;
                }
                (start..ones.len()).all(|i| rec(ones, i + 1, left - 1, acc & ones[i]))
            }
            let full = f.rows() - 1;
            // subsets of at most k distinct rows
            (0..=k.min(ones.len())).all(|size| rec(&ones, 0, size, full) || f.arity() == 0)
        }
    }
}

/// `f ≡ 1` or `f` is a projection. `f` must have positive arity, as in the
/// three criteria below.
pub fn in_clone_top(f: &BooleanFunction) -> bool {
    assert!(f.arity() >= 1);
    f.is_top_like() || f.projection_index().is_some()
}

/// `f ≡ 0`, or the satisfying rows are exactly those above their meet.
pub fn in_clone_and_top_bot(f: &BooleanFunction) -> bool {
    assert!(f.arity() >= 1);
    if f.is_bottom_like() {
        return true;
    }
    let meet = (0..f.rows()).filter(|&i| f.row(i)).fold(f.rows() - 1, |m, i| m & i);
    (0..f.rows()).all(|i| f.row(i) == (i & meet == meet))
}

/// `f` is affine and 1-preserving.
pub fn in_clone_biimp(f: &BooleanFunction) -> bool {
    assert!(f.arity() >= 1);
    let p = post_predicates(f);
    p.affine && p.preserves1
}

/// A fragment of classical logic: a signature with a table per connective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FragmentSpec {
    signature: Signature,
    tables: BTreeMap<String, BooleanFunction>,
}

impl FragmentSpec {
    pub fn new<'a, I>(connectives: I) -> Result<Self, BoolFunError>
    where
        I: IntoIterator<Item = (&'a str, BooleanFunction)>,
    {
        let mut signature = Signature::new();
        let mut tables = BTreeMap::new();
        for (name, f) in connectives {
            signature.insert(name, f.arity())?;
            tables.insert(name.to_string(), f);
        }
        Ok(FragmentSpec { signature, tables })
    }

    /// Connectives named as in [`standard_connective`].
    pub fn standard(names: &[&str]) -> Result<Self, BoolFunError> {
        Self::new(
            names
                .iter()
                .map(|n| {
                    standard_connective(n).map(|f| (*n, f)).ok_or_else(|| BoolFunError::MissingTable(n.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?,
        )
    }

    /// Checks that `sig` and `tables` agree.
    pub fn from_parts(signature: Signature, tables: BTreeMap<String, BooleanFunction>) -> Result<Self, BoolFunError> {
        for (n, a) in signature.iter() {
            let f = tables.get(n).ok_or_else(|| BoolFunError::MissingTable(n.to_string()))?;
            if f.arity() != a {
                return Err(BoolFunError::ArityMismatch { name: n.to_string(), declared: a, table: f.arity() });
            }
        }
        if let Some(extra) = tables.keys().find(|n| !signature.contains(n)) {
            return Err(SyntaxError::UnknownConnective(extra.clone()).into());
        }
        Ok(FragmentSpec { signature, tables })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn tables(&self) -> &BTreeMap<String, BooleanFunction> {
        &self.tables
    }

    pub fn function(&self, name: &str) -> Option<&BooleanFunction> {
        self.tables.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BooleanFunction)> {
        self.tables.iter().map(|(n, f)| (n.as_str(), f))
    }

    pub fn union(&self, other: &FragmentSpec) -> Result<FragmentSpec, BoolFunError> {
        let signature = self.signature.union(&other.signature)?;
        let mut tables = self.tables.clone();
        tables.extend(other.tables.iter().map(|(n, f)| (n.clone(), *f)));
        Ok(FragmentSpec { signature, tables })
    }

    /// Renames connectives; names absent from `map` are kept.
    pub fn renamed(&self, map: &[(&str, &str)]) -> Result<FragmentSpec, BoolFunError> {
        let lookup = |n: &str| map.iter().find(|(a, _)| *a == n).map_or(n.to_string(), |(_, b)| b.to_string());
        let pairs: Vec<(String, BooleanFunction)> = self.tables.iter().map(|(n, f)| (lookup(n), *f)).collect();
        FragmentSpec::new(pairs.iter().map(|(n, f)| (n.as_str(), *f)))
    }

    /// Functions induced at arities ≥ 1: 0-place connectives become
    /// constants of arity 1.
    pub fn lifted_functions(&self) -> Vec<BooleanFunction> {
        self.tables.values().map(|f| if f.arity() == 0 { BooleanFunction::constant(1, f.row(0)) } else { *f }).collect()
    }

    pub fn generators(&self) -> Vec<BooleanFunction> {
        self.tables.values().copied().collect()
    }

    /// The 2-valued matrix `2_Σ`.
    pub fn two_valued(&self) -> Nmatrix {
        Nmatrix::from_fn(vec!["0".into(), "1".into()], vec![false, true], self.signature.clone(), |name, args| {
            let row: Vec<bool> = args.iter().map(|&a| a == 1).collect();
            vec![self.tables[name].eval(&row) as u32]
        })
        .expect("2-valued matrix is non-degenerate")
    }

    /// Whether `gamma ⊢ phi` holds classically.
    pub fn classically_valid(&self, gamma: &[Formula], phi: &Formula) -> Result<bool, BoolFunError> {
        let vars: Vec<Formula> = gamma
            .iter()
            .chain([phi])
            .flat_map(|f| f.atoms())
            .filter(|a| a.head().is_none())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let fs = gamma.iter().map(|g| function_of(g, &vars, &self.tables)).collect::<Result<Vec<_>, _>>()?;
        let c = function_of(phi, &vars, &self.tables)?;
        let all = fs.iter().fold(row_mask(vars.len()), |acc, f| acc & f.bits());
        Ok(all & !c.bits() == 0)
    }
}

fn fragment_inclusion(frag: &FragmentSpec, zero_ok: bool, test: fn(&BooleanFunction) -> bool) -> bool {
    frag.iter().all(|(_, f)| if f.arity() == 0 { f.row(0) || zero_ok } else { test(f) })
}

pub fn fragment_in_clone_top(frag: &FragmentSpec) -> bool {
    fragment_inclusion(frag, false, in_clone_top)
}

pub fn fragment_in_clone_and_top_bot(frag: &FragmentSpec) -> bool {
    fragment_inclusion(frag, true, in_clone_and_top_bot)
}

pub fn fragment_in_clone_biimp(frag: &FragmentSpec) -> bool {
    fragment_inclusion(frag, false, in_clone_biimp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    Incomplete(PostClone),
}

pub fn functionally_complete(frag: &FragmentSpec) -> Completeness {
    let preds: Vec<PostPredicates> = frag.lifted_functions().iter().map(post_predicates).collect();
    for c in PostClone::ALL {
        if preds.iter().all(|p| c.holds(p)) {
            return Completeness::Incomplete(c);
        }
    }
    Completeness::Complete
}

struct Closure {
    members: Vec<u64>,
    seen: BTreeSet<u64>,
    terms: Vec<Formula>,
}

/// Breadth-first closure: round `r` composes generators with members found
/// before round `r`, so every member's term has minimal depth.
fn closure_engine(
    generators: &[(Formula, BooleanFunction)],
    k: usize,
    budget: u64,
    stop_at: Option<u64>,
) -> Result<Closure, BoolFunError> {
    if k > MAX_CLONE_ARITY {
        return Err(BoolFunError::CloneArity(k));
    }
    let full = row_mask(k);
    let mut c = Closure { members: Vec::new(), seen: BTreeSet::new(), terms: Vec::new() };
    let add = |c: &mut Closure, bits: u64, term: Formula| {
        if c.seen.insert(bits) {
            c.members.push(bits);
            c.terms.push(term);
        }
    };
    for (j, v) in pvars(k).into_iter().enumerate() {
        add(&mut c, BooleanFunction::projection(k, j).bits, v);
    }
    for (name, g) in generators {
        if g.arity() == 0 {
            add(&mut c, if g.row(0) { full } else { 0 }, name.clone());
        }
    }
    let mut spent = 0u64;
    let mut frontier = 0;
    loop {
        if stop_at.is_some_and(|t| c.seen.contains(&t)) {
            return Ok(c);
        }
        let n = c.members.len();
        if frontier == n {
            return Ok(c);
        }
        for (head, g) in generators.iter().filter(|(_, g)| g.arity() > 0) {
            let m = g.arity();
            let mut idx = vec![0usize; m];
            'tuples: loop {
                // semi-naive: at least one argument is from the last round
                if idx.iter().any(|&i| i >= frontier) {
                    spent += 1;
                    if spent > budget {
                        return Err(BoolFunError::Budget(budget));
                    }
                    let args: Vec<u64> = idx.iter().map(|&i| c.members[i]).collect();
                    let bits = compose_bits(g.bits, m, &args, full);
                    if !c.seen.contains(&bits) {
                        let name = head.head().expect("generator term is an application");
                        let term = Formula::app(name, idx.iter().map(|&i| c.terms[i].clone()).collect());
                        add(&mut c, bits, term);
                        if stop_at == Some(bits) {
                            return Ok(c);
                        }
                    }
                }
                let mut pos = m;
                loop {
                    if pos == 0 {
                        break 'tuples;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < n {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        frontier = n;
    }
}

fn anonymous(generators: &[BooleanFunction]) -> Vec<(Formula, BooleanFunction)> {
    generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let name = format!("g{i}");
            (Formula::app(&name, pvars(g.arity())), *g)
        })
        .collect()
}

/// All `k`-place members of the clone generated by `generators`, sorted by
/// table.
pub fn clone_closure_at_arity(generators: &[BooleanFunction], k: usize) -> Result<Vec<BooleanFunction>, BoolFunError> {
    let c = closure_engine(&anonymous(generators), k, DEFAULT_BUDGET, None)?;
    let mut out: Vec<BooleanFunction> =
        c.members.into_iter().map(|b| BooleanFunction::new(k, b).expect("k ≤ 4")).collect();
    out.sort();
    Ok(out)
}

/// Whether `f` lies in the clone generated by `generators`.
pub fn clone_contains(generators: &[BooleanFunction], f: &BooleanFunction) -> Result<bool, BoolFunError> {
    let c = closure_engine(&anonymous(generators), f.arity(), DEFAULT_BUDGET, Some(f.bits()))?;
    Ok(c.seen.contains(&f.bits()))
}

/// A minimal-depth term over the fragment's connectives and `p1..pk` for
/// every `k`-place member of its clone.
pub fn clone_terms(
    frag: &FragmentSpec,
    k: usize,
    budget: u64,
) -> Result<BTreeMap<BooleanFunction, Formula>, BoolFunError> {
    let gens: Vec<(Formula, BooleanFunction)> =
        frag.iter().map(|(n, f)| (Formula::app(n, pvars(f.arity())), *f)).collect();
    let c = closure_engine(&gens, k, budget, None)?;
    Ok(c.members.into_iter().zip(c.terms).map(|(b, t)| (BooleanFunction::new(k, b).expect("k ≤ 4"), t)).collect())
}

/// A term for `f` over the fragment, if the clone contains it.
pub fn term_for(frag: &FragmentSpec, f: &BooleanFunction, budget: u64) -> Result<Option<Formula>, BoolFunError> {
    let gens: Vec<(Formula, BooleanFunction)> =
        frag.iter().map(|(n, g)| (Formula::app(n, pvars(g.arity())), *g)).collect();
    let c = closure_engine(&gens, f.arity(), budget, Some(f.bits()))?;
    Ok(c.members.iter().position(|&b| b == f.bits()).map(|i| c.terms[i].clone()))
}

/// A 1-place non-top-like compound `θ(p)` built from a non-top-like
/// connective `name` with table `f`.
pub fn nontop_unary_witness(name: &str, f: &BooleanFunction) -> Result<Formula, BoolFunError> {
    if f.is_top_like() || f.arity() == 0 {
        return Err(BoolFunError::TopLike(name.to_string()));
    }
    let k = f.arity();
    let p = Formula::var("p");
    let alpha = Formula::app(name, vec![p.clone(); k]);
    let alpha_f = |x: bool| f.eval(&vec![x; k]);
    if !(alpha_f(false) && alpha_f(true)) {
        return Ok(alpha);
    }
    let row = (0..f.rows()).find(|&r| !f.row(r)).expect("not top-like");
    let args = (0..k).map(|j| if row >> (k - 1 - j) & 1 == 1 { alpha.clone() } else { p.clone() }).collect();
    Ok(Formula::app(name, args))
}

/// The 1-place function of a unary term `θ(p)`.
pub fn unary_function(theta: &Formula, frag: &FragmentSpec) -> Result<BooleanFunction, BoolFunError> {
    function_of(theta, &[Formula::var("p")], frag.tables())
}

/// `θ^n(p)` obtained by substituting `θ` into itself.
pub fn nest_unary(theta: &Formula, n: usize) -> Formula {
    let p = Formula::var("p");
    let mut out = p.clone();
    for _ in 0..n {
        let s: Substitution = [(p.clone(), out)].into_iter().collect();
        out = theta.substitute(&s);
    }
    out
}
