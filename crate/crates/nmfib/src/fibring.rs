//! Disjoint fibring of classical fragments: combined semantics, the recovery
//! decision, subclassicality witnesses, two-sided certificates and bounded
//! diagnostics.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::boolfun::{
    self, classify, clone_contains, fragment_in_clone_and_top_bot, fragment_in_clone_biimp, fragment_in_clone_top,
    function_of, functionally_complete, nest_unary, nontop_unary_witness, term_for, BoolFunError, BooleanFunction,
    Completeness, FragmentSpec,
};
use crate::calculus::{
    bottom_calculus, builtin_calculus, derive, merge, top_calculus, CalculusError, Derivation, DeriveBounds,
    DeriveResult, HilbertCalculus, Rule,
};
use crate::matrix_ops::{power_capped, strict_product_with_pairs, MatrixError, Product, DEFAULT_SIZE_CAP};
use crate::semantics::{
    entails, filter_valuations_by_rules, logically_equivalent, Entailment, Exactness, Nmatrix, PartialValuation,
    Proviso, SemanticsError,
};
use crate::syntax::{fold_right, pvars, Formula, Signature, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibringError {
    #[error("signatures overlap on `{0}`")]
    Overlap(String),
    #[error("`{0}` is not truth-preserving")]
    NotTruthPreserving(String),
    #[error("`{0}` is not a 0-place bottom")]
    NotBottom(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("component has no Boolean tables")]
    NoFragment,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    BoolFun(#[from] BoolFunError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// One side of a fibring: a matrix, whether it is known to be saturated, and
/// optionally the Boolean tables and a calculus behind it.
#[derive(Debug, Clone)]
pub struct Component {
    pub matrix: Nmatrix,
    pub saturated: bool,
    pub fragment: Option<FragmentSpec>,
    pub calculus: Option<HilbertCalculus>,
}

/// The 3-valued matrix of a negation `name`: 0 ↦ 1, ½ ↦ ½, 1 ↦ 0.
pub fn three_valued_negation(name: &str) -> Nmatrix {
    let sig = Signature::from_pairs([(name, 1)]).expect("single connective");
    Nmatrix::from_fn(vec!["0".into(), "1/2".into(), "1".into()], vec![false, false, true], sig, |_, a| vec![2 - a[0]])
        .expect("non-degenerate")
}

fn builtin_for(f: &BooleanFunction) -> Option<(&'static str, &'static str)> {
    let id = match f.table_string().as_str() {
        "10" if f.arity() == 1 => ("B_neg", "neg"),
        "0001" => ("B_and", "and"),
        "0111" => ("B_or", "or"),
        "1101" => ("B_imp", "imp"),
        "1001" => ("B_iff", "iff"),
        _ => return None,
    };
    Some(id)
}

/// A calculus for a fragment built from the single-connective calculi; only
/// offered where merging them is known to be complete (one connective, or
/// only top-like and bottom-like connectives).
pub fn fragment_calculus(frag: &FragmentSpec) -> Option<HilbertCalculus> {
    let trivial = |f: &BooleanFunction| f.is_top_like() || f.is_bottom_like();
    if frag.signature().len() != 1 && !frag.iter().all(|(_, f)| trivial(f)) {
        return None;
    }
    let mut out: Option<HilbertCalculus> = None;
    for (name, f) in frag.iter() {
        let c = if f.is_top_like() {
            top_calculus(name, f.arity())
        } else if f.is_bottom_like() {
            bottom_calculus(name, f.arity())
        } else {
            let (id, base) = builtin_for(f)?;
            builtin_calculus(id).ok()?.renamed(&[(base, name)], "")
        };
        out = Some(match out {
            None => c,
            Some(acc) => merge(&acc, &c).ok()?,
        });
    }
    out
}

impl Component {
    /// `M³` for a lone negation, otherwise `2_Σ`; saturated when no
    /// connective is very significant.
    pub fn from_fragment(frag: &FragmentSpec) -> Component {
        let mut it = frag.iter();
        let lone_negation = match (it.next(), it.next()) {
            (Some((n, f)), None) if *f == boolfun::neg() => Some(n.to_string()),
            _ => None,
        };
        let (matrix, saturated) = match lone_negation {
            Some(n) => (three_valued_negation(&n), true),
            None => (frag.two_valued(), frag.iter().all(|(_, f)| !classify(f).very_significant)),
        };
        Component { matrix, saturated, fragment: Some(frag.clone()), calculus: fragment_calculus(frag) }
    }

    pub fn from_matrix(matrix: Nmatrix, saturated: bool) -> Component {
        Component { matrix, saturated, fragment: None, calculus: None }
    }

    pub fn with_calculus(mut self, c: HilbertCalculus) -> Component {
        self.calculus = Some(c);
        self
    }

    pub fn signature(&self) -> &Signature {
        self.matrix.signature()
    }

    pub fn fragment(&self) -> Result<&FragmentSpec, FibringError> {
        self.fragment.as_ref().ok_or(FibringError::NoFragment)
    }

    /// The power actually used for requested power `n`.
    pub fn effective_power(&self, n: usize) -> usize {
        if self.saturated {
            1
        } else {
            n
        }
    }
}

/// `M1^n ⋆ M2^n` with the two powers that were used.
#[derive(Debug, Clone)]
pub struct Fibred {
    pub product: Product,
    pub left: Nmatrix,
    pub right: Nmatrix,
    pub powers: (usize, usize),
}

impl Fibred {
    pub fn matrix(&self) -> &Nmatrix {
        &self.product.matrix
    }
}

fn check_disjoint(a: &Signature, b: &Signature) -> Result<(), FibringError> {
    match a.iter().find(|(n, _)| b.contains(n)) {
        Some((n, _)) => Err(FibringError::Overlap(n.to_string())),
        None => Ok(()),
    }
}

/// Saturated components are used at power 1.
pub fn fibred_semantics(c1: &Component, c2: &Component, n: usize) -> Result<Fibred, FibringError> {
    fibred_semantics_capped(c1, c2, n, DEFAULT_SIZE_CAP)
}

pub fn fibred_semantics_capped(c1: &Component, c2: &Component, n: usize, cap: usize) -> Result<Fibred, FibringError> {
    check_disjoint(c1.signature(), c2.signature())?;
    let powers = (c1.effective_power(n), c2.effective_power(n));
    let left = power_capped(&c1.matrix, powers.0, cap)?;
    let right = power_capped(&c2.matrix, powers.1, cap)?;
    let product = strict_product_with_pairs(&left, &right, cap)?;
    Ok(Fibred { product, left, right, powers })
}

/// Values `{0,1}²`, designated `(1,1)`, connectives componentwise and the
/// bottom at `(1,0)`.
pub fn truth_preserving_bot_matrix(frag: &FragmentSpec, bot: &str) -> Result<Nmatrix, FibringError> {
    for (n, f) in frag.iter() {
        if !f.row(f.rows() - 1) {
            return Err(FibringError::NotTruthPreserving(n.to_string()));
        }
    }
    if frag.signature().contains(bot) {
        return Err(FibringError::Overlap(bot.to_string()));
    }
    let mut sig = frag.signature().clone();
    sig.insert(bot, 0).map_err(|_| FibringError::NotBottom(bot.to_string()))?;
    let names = ["(0,0)", "(0,1)", "(1,0)", "(1,1)"].map(String::from).to_vec();
    let m = Nmatrix::from_fn(names, vec![false, false, false, true], sig, |name, args| {
        if name == bot {
            return vec![2];
        }
        let f = frag.function(name).expect("fragment connective");
        let first: Vec<bool> = args.iter().map(|&a| a >> 1 == 1).collect();
        let second: Vec<bool> = args.iter().map(|&a| a & 1 == 1).collect();
        vec![(f.eval(&first) as u32) << 1 | f.eval(&second) as u32]
    })?;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        if ps.is_empty() {
            write!(f, "⊢ {}", self.conclusion)
        } else {
            write!(f, "{} ⊢ {}", ps.join(", "), self.conclusion)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    A,
    B,
    C,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
        })
    }
}

/// A sequent valid in `2_{Σ1∪Σ2}` with a countermodel in the product.
#[derive(Debug, Clone)]
pub struct Witness {
    pub template: String,
    pub sequent: Sequent,
    pub power: usize,
    pub countermodel: PartialValuation,
    pub matrix: Nmatrix,
}

impl Witness {
    /// Re-checks classical validity and the countermodel.
    pub fn recheck(&self, f1: &FragmentSpec, f2: &FragmentSpec) -> Result<bool, FibringError> {
        let joint = f1.union(f2)?;
        if !joint.classically_valid(&self.sequent.premises, &self.sequent.conclusion)? {
            return Ok(false);
        }
        self.countermodel.verify(&self.matrix)?;
        Ok(self.countermodel.refutes(&self.matrix, &self.sequent.premises, &self.sequent.conclusion))
    }
}

#[derive(Debug, Clone)]
pub enum RecoveryVerdict {
    Classical(Condition),
    Subclassical(Witness),
    /// No witness within the search bounds; never read as classical.
    Unknown {
        power: usize,
        depth: usize,
    },
}

fn zero_constants(frag: &FragmentSpec) -> Vec<&str> {
    frag.iter().filter(|(_, f)| f.arity() == 0 && !f.row(0)).map(|(n, _)| n).collect()
}

fn only_bottom_and_tops(frag: &FragmentSpec) -> bool {
    zero_constants(frag).len() == 1 && frag.iter().all(|(_, f)| f.is_top_like() || (f.arity() == 0 && !f.row(0)))
}

/// The first of the recovery conditions a, b, c that holds.
pub fn recovery_condition(f1: &FragmentSpec, f2: &FragmentSpec) -> Result<Option<Condition>, FibringError> {
    check_disjoint(f1.signature(), f2.signature())?;
    if fragment_in_clone_top(f1) || fragment_in_clone_top(f2) {
        return Ok(Some(Condition::A));
    }
    if fragment_in_clone_and_top_bot(f1) && fragment_in_clone_and_top_bot(f2) {
        return Ok(Some(Condition::B));
    }
    if (fragment_in_clone_biimp(f1) && only_bottom_and_tops(f2))
        || (fragment_in_clone_biimp(f2) && only_bottom_and_tops(f1))
    {
        return Ok(Some(Condition::C));
    }
    Ok(None)
}

pub const DEFAULT_WITNESS_DEPTH: usize = 2;

/// Conditions first; otherwise a witness at power 2, then 3.
pub fn decide_recovery(f1: &FragmentSpec, f2: &FragmentSpec) -> Result<RecoveryVerdict, FibringError> {
    if let Some(c) = recovery_condition(f1, f2)? {
        return Ok(RecoveryVerdict::Classical(c));
    }
    for n in [2, 3] {
        if let Some(w) = subclassical_witness(f1, f2, n, DEFAULT_WITNESS_DEPTH)? {
            return Ok(RecoveryVerdict::Subclassical(w));
        }
    }
    Ok(RecoveryVerdict::Unknown { power: 3, depth: DEFAULT_WITNESS_DEPTH })
}

const TERM_BUDGET: u64 = 2_000_000;

fn letters(k: usize) -> Vec<Formula> {
    const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
    NAMES[..k].iter().map(|n| Formula::var(n)).collect()
}

fn apply_term(term: &Formula, args: &[Formula]) -> Formula {
    let s: Substitution = pvars(args.len()).into_iter().zip(args.iter().cloned()).collect();
    term.substitute(&s)
}

/// A term for `f` over `frag`, or `None` when absent or too costly to find.
fn role_term(frag: &FragmentSpec, f: &BooleanFunction) -> Option<Formula> {
    term_for(frag, f, TERM_BUDGET).ok().flatten()
}

/// The `φ_t` of the local-tabularity argument for a very significant `c1`
/// and a 1-place non-top-like `θ(p)`.
pub fn phi_t(c1_name: &str, c1: &BooleanFunction, theta: &Formula, t: usize) -> Formula {
    let cls = classify(c1);
    let k = c1.arity();
    let s = k - cls.projective_indices.len();
    let mut next = 1 + t * s;
    let mut proj = 0;
    let args = (1..=k)
        .map(|i| {
            if cls.projective_indices.contains(&i) {
                proj += 1;
                Formula::var(&format!("p{proj}"))
            } else {
                let f = nest_unary(theta, next);
                next += 1;
                f
            }
        })
        .collect();
    Formula::app(c1_name, args)
}

fn candidate_sequents(f1: &FragmentSpec, f2: &FragmentSpec) -> Vec<(String, Sequent)> {
    let mut out = Vec::new();
    let sides = [(f1, f2), (f2, f1)];
    let seq = |ps: Vec<Formula>, c: Formula| Sequent { premises: ps, conclusion: c };
    // a connective against a derived copy from the other side
    for (a, b) in sides {
        for (name, f) in a.iter() {
            if f.arity() == 0 || !classify(f).very_significant {
                continue;
            }
            if let Some(t) = role_term(b, f) {
                let xs = letters(f.arity());
                out.push(("copy".into(), seq(vec![Formula::app(name, xs.clone())], apply_term(&t, &xs))));
            }
        }
    }
    // the bottom templates
    for (a, b) in sides {
        let bots = zero_constants(b);
        let Some(bot) = bots.first().map(|n| Formula::constant(n)) else {
            continue;
        };
        let (p, q) = (Formula::var("p"), Formula::var("q"));
        let roles: [(&str, BooleanFunction, Vec<Formula>, Vec<Formula>, Formula); 5] = [
            ("bottom-or", boolfun::or(), vec![bot.clone(), p.clone()], vec![], p.clone()),
            ("bottom-majority", boolfun::threshold(3, 2), vec![bot.clone(), p.clone(), q.clone()], vec![], p.clone()),
            ("bottom-neg", boolfun::neg(), vec![bot.clone()], vec![], bot.clone()),
            ("bottom-xor", boolfun::xor(), vec![bot.clone(), p.clone()], vec![], p.clone()),
            ("bottom-bowtie", boolfun::bowtie(), vec![p.clone(), bot.clone(), q.clone()], vec![], q.clone()),
        ];
        for (label, f, args, _, concl) in roles {
            if let Some(t) = role_term(a, &f) {
                let main = apply_term(&t, &args);
                let s = if label == "bottom-neg" { seq(vec![], main) } else { seq(vec![main], concl) };
                out.push((label.into(), s));
            }
        }
        if bots.len() >= 2 {
            if let Some(t) = role_term(a, &boolfun::xor3()) {
                let args = [Formula::var("p"), Formula::constant(bots[0]), Formula::constant(bots[1])];
                out.push(("two-bottoms".into(), seq(vec![apply_term(&t, &args)], Formula::var("p"))));
            }
        }
    }
    // nestings of a non-top-like 1-place derived connective
    for (a, b) in sides {
        let Some((n1, c1)) = a.iter().find(|(_, f)| f.arity() > 0 && classify(f).very_significant) else {
            continue;
        };
        let Some((n2, c2)) = b.iter().find(|(_, f)| f.arity() > 0 && !f.is_top_like()) else {
            continue;
        };
        let theta = nontop_unary_witness(n2, c2).expect("non-top-like");
        out.push(("phi_t".into(), seq(vec![phi_t(n1, c1, &theta, 0)], phi_t(n1, c1, &theta, 2))));
    }
    out
}

const FALLBACK_FORMULA_CAP: usize = 400;

fn formulas_up_to(sig: &Signature, vars: &[Formula], depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = vars.to_vec();
    all.extend(sig.iter().filter(|(_, a)| *a == 0).map(|(n, _)| Formula::constant(n)));
    let mut seen: BTreeSet<Formula> = all.iter().cloned().collect();
    for _ in 0..depth {
        let snapshot = all.clone();
        for (name, a) in sig.iter().filter(|(_, a)| *a > 0) {
            crate::semantics::for_each_tuple(snapshot.len(), a, |idx| {
                if all.len() >= FALLBACK_FORMULA_CAP {
                    return;
                }
                let f = Formula::app(name, idx.iter().map(|&i| snapshot[i as usize].clone()).collect());
                if seen.insert(f.clone()) {
                    all.push(f);
                }
            });
        }
    }
    all
}

/// A classically valid sequent refuted in `M1^n ⋆ M2^n`: curated templates
/// first, then sequents with at most one premise of depth ≤ `depth`.
pub fn subclassical_witness(
    f1: &FragmentSpec,
    f2: &FragmentSpec,
    n: usize,
    depth: usize,
) -> Result<Option<Witness>, FibringError> {
    let c1 = Component::from_fragment(f1);
    let c2 = Component::from_fragment(f2);
    let fib = fibred_semantics(&c1, &c2, n)?;
    let joint = f1.union(f2)?;
    let found = |label: String, s: Sequent| -> Result<Option<Witness>, FibringError> {
        if !joint.classically_valid(&s.premises, &s.conclusion)? {
            return Ok(None);
        }
        Ok(match entails(fib.matrix(), &s.premises, &s.conclusion)? {
            Entailment::Holds => None,
            Entailment::Fails(v) => {
                Some(Witness { template: label, sequent: s, power: n, countermodel: v, matrix: fib.matrix().clone() })
            }
        })
    };
    for (label, s) in candidate_sequents(f1, f2) {
        if let Some(w) = found(label, s)? {
            return Ok(Some(w));
        }
    }
    let vars = [Formula::var("p"), Formula::var("q")];
    let pool = formulas_up_to(joint.signature(), &vars, depth);
    let tables: Vec<u64> =
        pool.iter().map(|f| function_of(f, &vars, joint.tables()).map(|b| b.bits())).collect::<Result<_, _>>()?;
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by_key(|&i| (pool[i].size(), i));
    for &c in &order {
        let premises = std::iter::once(None).chain(order.iter().map(|&i| Some(i)));
        for g in premises {
            let gbits = g.map_or(0b1111, |i| tables[i]);
            if g == Some(c) || gbits & !tables[c] != 0 {
                continue;
            }
            let s = Sequent { premises: g.map(|i| pool[i].clone()).into_iter().collect(), conclusion: pool[c].clone() };
            if let Some(w) = found("search".into(), s)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub enum Certificate {
    Yes(Derivation),
    No { countermodel: PartialValuation, power: usize, matrix: Nmatrix },
    Unknown { bounds: DeriveBounds, power: usize },
}

/// `Yes` from a derivation in the merged calculi plus `extra`; `No` from a
/// countermodel in `M1^n ⋆ M2^n` (respecting `extra`, when exactly
/// decidable).
pub fn certify_entailment(
    c1: &Component,
    c2: &Component,
    extra: &[Rule],
    gamma: &[Formula],
    phi: &Formula,
    n: usize,
    bounds: DeriveBounds,
) -> Result<Certificate, FibringError> {
    let fib = fibred_semantics(c1, c2, n)?;
    let m = fib.matrix();
    let refuted = if extra.is_empty() {
        entails(m, gamma, phi)?.countermodel().cloned()
    } else if !extra.iter().all(Rule::is_axiom) {
        // the filtered verdict would only be heuristic
        None
    } else {
        let r = filter_valuations_by_rules(m, extra, gamma, phi, None, Proviso::None)?;
        match (r.exactness, r.verdict) {
            (Exactness::Exact, Entailment::Fails(v)) => Some(v),
            _ => None,
        }
    };
    if let Some(v) = refuted {
        return Ok(Certificate::No { countermodel: v, power: n, matrix: m.clone() });
    }
    if let (Some(k1), Some(k2)) = (&c1.calculus, &c2.calculus) {
        let calc = merge(k1, k2)?.with_rules(extra)?;
        if let DeriveResult::Derived(d) = derive(&calc, gamma, phi, bounds) {
            return Ok(Certificate::Yes(d));
        }
    }
    Ok(Certificate::Unknown { bounds, power: n })
}

/// The merged calculus of two components plus `extra`.
pub fn fibred_calculus(c1: &Component, c2: &Component, extra: &[Rule]) -> Result<HilbertCalculus, FibringError> {
    let (Some(k1), Some(k2)) = (&c1.calculus, &c2.calculus) else {
        return Err(FibringError::Precondition("a component has no calculus".into()));
    };
    Ok(merge(k1, k2)?.with_rules(extra)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetClone {
    D,
    T0Infinity,
    /// `T0^{n+1}`, generated by `T^{n+2}_{n+1}` and coimplication.
    T0(usize),
}

impl fmt::Display for TargetClone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetClone::D => f.write_str("D"),
            TargetClone::T0Infinity => f.write_str("T0^inf"),
            TargetClone::T0(n) => write!(f, "T0^{}", n + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FcVerdict {
    /// `up1_side` is 1 or 2.
    Recovered {
        up1_side: usize,
        other: TargetClone,
    },
    NotRecovered,
    OutOfBound {
        reason: String,
    },
}

fn is_up1(frag: &FragmentSpec) -> bool {
    fragment_in_clone_top(frag) && frag.iter().any(|(_, f)| f.is_top_like())
}

/// Clones preserve Post's predicates and the `T0^k` relations, so one shared
/// by all of one side but failed by the other separates the clones.
fn separated_by_post(a: &[BooleanFunction], b: &[BooleanFunction]) -> bool {
    let pa: Vec<_> = a.iter().map(boolfun::post_predicates).collect();
    let pb: Vec<_> = b.iter().map(boolfun::post_predicates).collect();
    let post = boolfun::PostClone::ALL.iter().any(|c| {
        let all_a = pa.iter().all(|p| c.holds(p));
        let all_b = pb.iter().all(|p| c.holds(p));
        all_a != all_b
    });
    let small = a.iter().chain(b).all(|f| f.arity() <= boolfun::MAX_CLONE_ARITY);
    post || small
        && [None, Some(1), Some(2), Some(3), Some(4)]
            .into_iter()
            .any(|k| a.iter().all(|f| boolfun::in_t0(f, k)) != b.iter().all(|f| boolfun::in_t0(f, k)))
}

fn same_clone(frag: &FragmentSpec, gens: &[BooleanFunction]) -> Result<Result<bool, String>, FibringError> {
    let own = frag.generators();
    if separated_by_post(&frag.lifted_functions(), gens) {
        return Ok(Ok(false));
    }
    for g in gens {
        if g.arity() > boolfun::MAX_CLONE_ARITY {
            return Ok(Err(format!("generator of arity {}", g.arity())));
        }
        if !clone_contains(&own, g)? {
            return Ok(Ok(false));
        }
    }
    for f in frag.lifted_functions() {
        if f.arity() > boolfun::MAX_CLONE_ARITY {
            return Ok(Err(format!("connective of arity {}", f.arity())));
        }
        if !clone_contains(gens, &f)? {
            return Ok(Ok(false));
        }
    }
    Ok(Ok(true))
}

pub const DEFAULT_NMAX: usize = 2;

/// Whether fibring two incomplete fragments recovers functional completeness.
pub fn decide_fc_recovery(f1: &FragmentSpec, f2: &FragmentSpec, n_max: usize) -> Result<FcVerdict, FibringError> {
    check_disjoint(f1.signature(), f2.signature())?;
    for (i, f) in [f1, f2].iter().enumerate() {
        if functionally_complete(f) == Completeness::Complete {
            return Err(FibringError::Precondition(format!("component {} is already functionally complete", i + 1)));
        }
    }
    if functionally_complete(&f1.union(f2)?) != Completeness::Complete {
        return Err(FibringError::Precondition("the joint signature is not functionally complete".into()));
    }
    let mut bound_hit = None;
    for (side, (up, other)) in [(f1, f2), (f2, f1)].into_iter().enumerate() {
        if !is_up1(up) {
            continue;
        }
        let mut targets = vec![
            (TargetClone::D, vec![boolfun::threshold(3, 2), boolfun::neg()]),
            (TargetClone::T0Infinity, vec![boolfun::coimp()]),
        ];
        for n in 0..=n_max {
            targets.push((TargetClone::T0(n), vec![boolfun::threshold(n + 2, n + 1), boolfun::coimp()]));
        }
        for (t, gens) in targets {
            match same_clone(other, &gens)? {
                Ok(true) => return Ok(FcVerdict::Recovered { up1_side: side + 1, other: t }),
                Ok(false) => {}
                Err(reason) => bound_hit = Some(reason),
            }
        }
        // every T0^{m} contains coimplication and preserves 0
        let others = other.generators();
        let zero_preserving = other.lifted_functions().iter().all(|f| !f.row(0));
        if zero_preserving && clone_contains(&others, &boolfun::coimp())? {
            bound_hit = Some(format!("could be T0^m for m > {}", n_max + 1));
        }
    }
    Ok(match bound_hit {
        Some(reason) => FcVerdict::OutOfBound { reason },
        None => FcVerdict::NotRecovered,
    })
}

#[derive(Debug, Clone)]
pub enum KdetOutcome {
    ViolationFound {
        family: String,
        gamma: Vec<Formula>,
        phi: Formula,
        power: usize,
        countermodel: PartialValuation,
        instances: Vec<(Substitution, Derivation)>,
    },
    NoneFound,
}

fn find_table<'a>(frag: &'a FragmentSpec, f: &BooleanFunction) -> Option<&'a str> {
    frag.iter().find(|(_, g)| *g == f).map(|(n, _)| n)
}

/// The generator families of the two-disjunction and the bi-implication
/// with 1-place bottom examples that apply to this pair.
pub fn kdet_families(f1: &FragmentSpec, f2: &FragmentSpec, k: usize) -> Vec<(String, Vec<Formula>, Formula)> {
    let mut out = Vec::new();
    let p = |i: usize| Formula::var(&format!("p{i}"));
    for (a, b) in [(f1, f2), (f2, f1)] {
        if let (Some(or), Some(bar)) = (find_table(a, &boolfun::or()), find_table(b, &boolfun::or())) {
            let q = Formula::var("q");
            let mut gamma = Vec::new();
            for i in 1..=k + 1 {
                for j in i + 1..=k + 1 {
                    gamma.push(Formula::app(or, vec![p(i), p(j)]));
                }
            }
            let items: Vec<Formula> = (1..=k + 1)
                .map(|i| Formula::app(bar, vec![q.clone(), Formula::app(or, vec![p(i), q.clone()])]))
                .collect();
            out.push(("disjunctions".into(), gamma, fold_right(or, &items).expect("k+1 ≥ 1")));
        }
        let unary_bottom = b.iter().find(|(_, f)| f.arity() == 1 && f.is_bottom_like()).map(|(n, _)| n);
        if let (Some(iff), Some(ub)) = (find_table(a, &boolfun::iff()), unary_bottom) {
            // at least three ψ's, so that a third index exists after a collision
            let m = (k + 1).max(3);
            let psi = |i: usize| Formula::app(ub, vec![p(i)]);
            let mut gamma = Vec::new();
            for i in 1..=m {
                for j in 1..=m {
                    for l in 1..=m {
                        if i != j && i != l && j != l {
                            gamma.push(Formula::app(iff, vec![Formula::app(iff, vec![psi(i), psi(j)]), psi(l)]));
                        }
                    }
                }
            }
            out.push(("biimp-unary-bottom".into(), gamma, p(m + 1)));
        }
    }
    out
}

/// Looks for `Γ ⊬ φ` at power `n` such that every substitution of the
/// variables into `p1..pk` gives a derivable instance.
pub fn k_determinedness_probe(
    c1: &Component,
    c2: &Component,
    k: usize,
    n: usize,
    bounds: DeriveBounds,
) -> Result<KdetOutcome, FibringError> {
    let (f1, f2) = (c1.fragment()?, c2.fragment()?);
    let calc = fibred_calculus(c1, c2, &[])?;
    let fib = fibred_semantics(c1, c2, n)?;
    'families: for (family, gamma, phi) in kdet_families(f1, f2, k) {
        let Entailment::Fails(cm) = entails(fib.matrix(), &gamma, &phi)? else {
            continue;
        };
        let vars: Vec<Formula> = gamma
            .iter()
            .chain([&phi])
            .flat_map(|f| f.atoms())
            .filter(|a| a.head().is_none())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let targets = pvars(k);
        let mut subs = Vec::new();
        crate::semantics::for_each_tuple(k, vars.len(), |idx| {
            subs.push(
                vars.iter().cloned().zip(idx.iter().map(|&i| targets[i as usize].clone())).collect::<Substitution>(),
            );
        });
        let mut instances = Vec::new();
        for s in subs {
            let g: Vec<Formula> = gamma.iter().map(|f| f.substitute(&s)).collect();
            match derive(&calc, &g, &phi.substitute(&s), bounds) {
                DeriveResult::Derived(d) => instances.push((s, d)),
                DeriveResult::NotFoundAtBound { .. } => continue 'families,
            }
        }
        return Ok(KdetOutcome::ViolationFound {
            family,
            gamma,
            phi,
            power: fib.powers.0.max(fib.powers.1),
            countermodel: cm,
            instances,
        });
    }
    Ok(KdetOutcome::NoneFound)
}

/// `φ_0..φ_{t_max}` and, per pair, whether non-equivalence was shown at the
/// reported power.
#[derive(Debug, Clone)]
pub struct PhiTReport {
    pub theta: Formula,
    pub formulas: Vec<Formula>,
    pub power: usize,
    pub non_equivalent: Vec<(usize, usize, bool)>,
}

impl PhiTReport {
    pub fn all_distinct(&self) -> bool {
        self.non_equivalent.iter().all(|&(_, _, b)| b)
    }
}

/// The family for the first very significant connective of `f1` and the
/// first non-top-like connective of positive arity of `f2`; powers
/// `n..=n_max` are tried until all pairs separate.
pub fn phi_t_family(
    f1: &FragmentSpec,
    f2: &FragmentSpec,
    t_max: usize,
    n: usize,
    n_max: usize,
) -> Result<PhiTReport, FibringError> {
    let (n1, c1) = f1
        .iter()
        .find(|(_, f)| f.arity() > 0 && classify(f).very_significant)
        .ok_or_else(|| FibringError::Precondition("first fragment has no very significant connective".into()))?;
    let (n2, c2) = f2.iter().find(|(_, f)| f.arity() > 0 && !f.is_top_like()).ok_or_else(|| {
        FibringError::Precondition("second fragment has no non-top-like connective of positive arity".into())
    })?;
    let theta = nontop_unary_witness(n2, c2)?;
    let formulas: Vec<Formula> = (0..=t_max).map(|t| phi_t(n1, c1, &theta, t)).collect();
    let (k1, k2) = (Component::from_fragment(f1), Component::from_fragment(f2));
    let mut report = None;
    for power in n..=n_max.max(n) {
        let fib = fibred_semantics(&k1, &k2, power)?;
        let mut pairs = Vec::new();
        for i in 0..formulas.len() {
            for j in i + 1..formulas.len() {
                let eq = logically_equivalent(fib.matrix(), &formulas[i..=i], &formulas[j..=j])?;
                pairs.push((i, j, !eq));
            }
        }
        let r = PhiTReport { theta: theta.clone(), formulas: formulas.clone(), power, non_equivalent: pairs };
        let done = r.all_distinct();
        report = Some(r);
        if done {
            break;
        }
    }
    Ok(report.expect("at least one power"))
}
