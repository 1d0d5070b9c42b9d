//! Schematic Hilbert calculi and bounded forward-chaining derivations.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{parse, subformula_closure, Formula, Signature, Substitution, SyntaxError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("unknown built-in calculus `{0}`")]
    UnknownId(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Rule {
    pub fn new(name: &str, premises: Vec<Formula>, conclusion: Formula) -> Rule {
        Rule { name: name.to_string(), premises, conclusion }
    }

    /// Parses premises and conclusion over `sig`.
    pub fn parse(name: &str, premises: &[&str], conclusion: &str, sig: &Signature) -> Result<Rule, SyntaxError> {
        Ok(Rule::new(name, premises.iter().map(|p| parse(p, sig)).collect::<Result<_, _>>()?, parse(conclusion, sig)?))
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<Formula> {
        let mut v = self.conclusion.atoms();
        for p in &self.premises {
            v.extend(p.atoms());
        }
        v
    }

    pub fn instance(&self, s: &Substitution) -> (Vec<Formula>, Formula) {
        (self.premises.iter().map(|p| p.substitute(s)).collect(), self.conclusion.substitute(s))
    }

    fn rename(&self, map: &BTreeMap<String, String>, suffix: &str) -> Rule {
        Rule {
            name: format!("{}{}", self.name, suffix),
            premises: self.premises.iter().map(|p| rename_connectives(p, map)).collect(),
            conclusion: rename_connectives(&self.conclusion, map),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        if ps.is_empty() {
            write!(f, "{}: ⊢ {}", self.name, self.conclusion)
        } else {
            write!(f, "{}: {} / {}", self.name, ps.join(", "), self.conclusion)
        }
    }
}

pub fn rename_connectives(f: &Formula, map: &BTreeMap<String, String>) -> Formula {
    match f.head() {
        None => f.clone(),
        Some(h) => Formula::app(
            map.get(h).map(String::as_str).unwrap_or(h),
            f.args().iter().map(|a| rename_connectives(a, map)).collect(),
        ),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HilbertCalculus {
    pub signature: Signature,
    pub rules: Vec<Rule>,
}

impl HilbertCalculus {
    pub fn new(signature: Signature, rules: Vec<Rule>) -> Result<Self, CalculusError> {
        for r in &rules {
            for f in r.premises.iter().chain([&r.conclusion]) {
                f.check(&signature)?;
            }
        }
        Ok(HilbertCalculus { signature, rules })
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Renames connectives (and suffixes rule names) to make a disjoint copy.
    pub fn renamed(&self, map: &[(&str, &str)], suffix: &str) -> HilbertCalculus {
        let map: BTreeMap<String, String> = map.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let mut sig = Signature::new();
        for (n, a) in self.signature.iter() {
            let n = map.get(n).map(String::as_str).unwrap_or(n);
            sig.insert(n, a).expect("renaming keeps arities");
        }
        HilbertCalculus { signature: sig, rules: self.rules.iter().map(|r| r.rename(&map, suffix)).collect() }
    }

    pub fn with_rules(mut self, rules: &[Rule]) -> Result<Self, CalculusError> {
        for r in rules {
            for f in r.premises.iter().chain([&r.conclusion]) {
                f.check(&self.signature)?;
            }
        }
        self.rules.extend(rules.iter().cloned());
        dedupe_names(&mut self.rules);
        Ok(self)
    }
}

fn dedupe_names(rules: &mut Vec<Rule>) {
    let mut out: Vec<Rule> = Vec::with_capacity(rules.len());
    for r in rules.drain(..) {
        if out.contains(&r) {
            continue;
        }
        let mut name = r.name.clone();
        let mut k = 2;
        while out.iter().any(|o| o.name == name) {
            name = format!("{}#{}", r.name, k);
            k += 1;
        }
        out.push(Rule { name, ..r });
    }
    *rules = out;
}

/// Union of signatures and rule sets.
pub fn merge(c1: &HilbertCalculus, c2: &HilbertCalculus) -> Result<HilbertCalculus, CalculusError> {
    let signature = c1.signature.union(&c2.signature)?;
    let mut rules = c1.rules.clone();
    rules.extend(c2.rules.iter().cloned());
    dedupe_names(&mut rules);
    Ok(HilbertCalculus { signature, rules })
}

pub const BUILTIN_IDS: &[&str] = &[
    "B_top",
    "B_bot",
    "B_neg",
    "B_and",
    "B_or",
    "B_imp",
    "B_iff",
    "neg_pair",
    "or_pair",
    "and_or",
    "or_neg",
    "coimp_bot",
    "imp_bot",
    "neg_bot",
    "xor3_bots",
    "biimp_bot1",
];

type RuleSpec<'a> = (&'a str, &'a [&'a str], &'a str);

fn calc(sig: &[(&str, usize)], rules: &[RuleSpec]) -> HilbertCalculus {
    let signature = Signature::from_pairs(sig.iter().copied()).expect("static signature");
    let rules = rules.iter().map(|(n, ps, c)| Rule::parse(n, ps, c, &signature).expect("static rule")).collect();
    HilbertCalculus { signature, rules }
}

/// The built-in calculi and interaction rule sets.
///
/// Connective names: `neg`/`sim` for the two negations, `or`/`bar` for the
/// two disjunctions, `bot1`/`bot2` for two 0-place bottoms and `ubot` for
/// the 1-place bottom. `B_iff` is the
/// detachment-based axiomatization of the equivalential fragment with
/// associativity and commutativity, plus reflexivity for shorter proofs.
pub fn builtin_calculus(id: &str) -> Result<HilbertCalculus, CalculusError> {
    Ok(match id {
        "B_top" => calc(&[("top", 0)], &[("t1", &[], "top")]),
        "B_bot" => calc(&[("bot", 0)], &[("b1", &["bot"], "p")]),
        "B_neg" => calc(
            &[("neg", 1)],
            &[("n1", &["p"], "neg(neg(p))"), ("n2", &["neg(neg(p))"], "p"), ("n3", &["p", "neg(p)"], "q")],
        ),
        "B_and" => calc(
            &[("and", 2)],
            &[("c1", &["and(p,q)"], "p"), ("c2", &["and(p,q)"], "q"), ("c3", &["p", "q"], "and(p,q)")],
        ),
        "B_or" => calc(
            &[("or", 2)],
            &[
                ("d1", &["p"], "or(p,q)"),
                ("d2", &["or(p,p)"], "p"),
                ("d3", &["or(p,q)"], "or(q,p)"),
                ("d4", &["or(p,or(q,r))"], "or(or(p,q),r)"),
            ],
        ),
        "B_imp" => calc(
            &[("imp", 2)],
            &[
                ("i1", &[], "imp(p,imp(q,p))"),
                ("i2", &[], "imp(imp(p,imp(q,r)),imp(imp(p,q),imp(p,r)))"),
                ("i3", &[], "imp(imp(imp(p,q),p),p)"),
                ("i4", &["p", "imp(p,q)"], "q"),
            ],
        ),
        "B_iff" => calc(
            &[("iff", 2)],
            &[
                ("e0", &[], "iff(p,p)"),
                ("e1", &[], "iff(iff(iff(p,q),r),iff(p,iff(q,r)))"),
                ("e2", &[], "iff(iff(p,q),iff(q,p))"),
                ("e3", &["p", "iff(p,q)"], "q"),
            ],
        ),
        "neg_pair" => {
            calc(&[("neg", 1), ("sim", 1)], &[("np1", &["neg(p)"], "sim(p)"), ("np2", &["sim(p)"], "neg(p)")])
        }
        "or_pair" => calc(
            &[("or", 2), ("bar", 2)],
            &[("op1", &["or(p,or(q,r))"], "or(p,bar(q,r))"), ("op2", &["or(p,bar(q,r))"], "or(p,or(q,r))")],
        ),
        "and_or" => calc(
            &[("and", 2), ("or", 2)],
            &[
                ("ao1", &["or(p,q)", "or(p,r)"], "or(p,and(q,r))"),
                ("ao2", &["or(p,and(q,r))"], "or(p,q)"),
                ("ao3", &["or(p,and(q,r))"], "or(p,r)"),
            ],
        ),
        "or_neg" => calc(
            &[("or", 2), ("neg", 1)],
            &[
                ("on1", &[], "or(p,neg(p))"),
                ("on2", &["or(p,q)"], "or(p,neg(neg(q)))"),
                ("on3", &["or(p,neg(neg(q)))"], "or(p,q)"),
                ("on4", &["or(p,q)", "or(p,neg(q))"], "p"),
            ],
        ),
        "coimp_bot" => calc(&[("coimp", 2), ("bot", 0)], &[("cb1", &["p"], "coimp(bot,p)")]),
        "imp_bot" => calc(&[("imp", 2), ("bot", 0)], &[("ib1", &[], "imp(bot,p)")]),
        "neg_bot" => calc(&[("neg", 1), ("bot", 0)], &[("nb1", &[], "neg(bot)")]),
        "xor3_bots" => calc(
            &[("xor3", 3), ("bot1", 0), ("bot2", 0)],
            &[("xb1", &["xor3(bot1,p,q)"], "xor3(bot2,p,q)"), ("xb2", &["xor3(bot2,p,q)"], "xor3(bot1,p,q)")],
        ),
        "biimp_bot1" => calc(&[("iff", 2), ("ubot", 1)], &[("bu1", &[], "iff(ubot(p),ubot(q))")]),
        other => return Err(CalculusError::UnknownId(other.to_string())),
    })
}

/// `⊢ c(p1..pk)`: the calculus of a top-like connective.
pub fn top_calculus(name: &str, arity: usize) -> HilbertCalculus {
    let sig = Signature::from_pairs([(name, arity)]).expect("single connective");
    let rule = Rule::new("t1", vec![], Formula::app(name, crate::syntax::pvars(arity)));
    HilbertCalculus { signature: sig, rules: vec![rule] }
}

/// `c(p1..pk) / q`: the calculus of a bottom-like connective.
pub fn bottom_calculus(name: &str, arity: usize) -> HilbertCalculus {
    let sig = Signature::from_pairs([(name, arity)]).expect("single connective");
    let rule = Rule::new("b1", vec![Formula::app(name, crate::syntax::pvars(arity))], Formula::var("q"));
    HilbertCalculus { signature: sig, rules: vec![rule] }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Premise,
    Rule { rule: String, subst: Substitution, premises: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            match &s.justification {
                Justification::Premise => writeln!(f, "{:>3}. {}  [premise]", i + 1, s.formula)?,
                Justification::Rule { rule, subst, premises } => {
                    let ps: Vec<String> = premises.iter().map(|p| (p + 1).to_string()).collect();
                    writeln!(f, "{:>3}. {}  [{} {} from ({})]", i + 1, s.formula, rule, subst, ps.join(","))?
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct VerifyError {
    pub step: usize,
    pub reason: String,
}

/// Re-checks every step of `d` against `c` and `gamma`; the last step must be `phi`.
pub fn verify(d: &Derivation, c: &HilbertCalculus, gamma: &[Formula], phi: &Formula) -> Result<(), VerifyError> {
    let fail = |step: usize, reason: String| Err(VerifyError { step, reason });
    for (i, s) in d.steps.iter().enumerate() {
        match &s.justification {
            Justification::Premise => {
                if !gamma.contains(&s.formula) {
                    return fail(i, format!("`{}` is not a premise", s.formula));
                }
            }
            Justification::Rule { rule, subst, premises } => {
                let Some(r) = c.rule(rule) else {
                    return fail(i, format!("unknown rule `{rule}`"));
                };
                if premises.len() != r.premises.len() {
                    return fail(i, "wrong number of premises".into());
                }
                let (ps, concl) = r.instance(subst);
                for (p, &j) in ps.iter().zip(premises) {
                    if j >= i {
                        return fail(i, format!("premise refers to step {j} which is not earlier"));
                    }
                    if &d.steps[j].formula != p {
                        return fail(i, format!("step {j} is not the premise `{p}`"));
                    }
                }
                if concl != s.formula {
                    return fail(i, format!("instance gives `{concl}`, not `{}`", s.formula));
                }
            }
        }
    }
    match d.conclusion() {
        Some(f) if f == phi => Ok(()),
        _ => fail(d.steps.len(), format!("derivation does not end in `{phi}`")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeriveBounds {
    pub universe_depth: usize,
    pub step_cap: usize,
}

impl Default for DeriveBounds {
    fn default() -> Self {
        DeriveBounds { universe_depth: 2, step_cap: 10_000 }
    }
}

/// Why the search stopped without reaching the goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exhaustion {
    /// The step cap was hit before the closure was complete.
    StepCap,
    /// Every rule instance over the universe was applied.
    Saturated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeriveResult {
    Derived(Derivation),
    NotFoundAtBound { bounds: DeriveBounds, exhaustion: Exhaustion, universe_size: usize, derived: usize },
}

impl DeriveResult {
    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            DeriveResult::Derived(d) => Some(d),
            _ => None,
        }
    }
}

/// Most formulas a universe may hold; larger ones are cut in canonical order.
const UNIVERSE_LIMIT: usize = 4096;

fn universe(c: &HilbertCalculus, seed: &[Formula], depth: usize) -> Vec<Formula> {
    let mut set = subformula_closure(seed);
    let mut layer: BTreeSet<Formula> = set.iter().filter(|f| f.is_atomic()).cloned().collect();
    for (n, a) in c.signature.iter() {
        if a == 0 {
            layer.insert(Formula::constant(n));
        }
    }
    let mut all = layer.clone();
    for _ in 0..depth {
        let pool: Vec<Formula> = all.iter().cloned().collect();
        let mut next = BTreeSet::new();
        'outer: for (n, a) in c.signature.iter().filter(|(_, a)| *a > 0) {
            let mut full = false;
            crate::semantics::for_each_tuple(pool.len(), a, |idx| {
                if full {
                    return;
                }
                let f = Formula::app(n, idx.iter().map(|&i| pool[i as usize].clone()).collect());
                next.insert(f);
                full = all.len() + next.len() > UNIVERSE_LIMIT;
            });
            if full {
                break 'outer;
            }
        }
        all.extend(next);
        if all.len() > UNIVERSE_LIMIT {
            break;
        }
    }
    set.extend(all);
    let mut v: Vec<Formula> = set.into_iter().collect();
    v.sort_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| a.cmp(b)));
    v.truncate(UNIVERSE_LIMIT.max(subformula_closure(seed).len()));
    v
}

fn fresh_variable(seed: &[Formula]) -> Formula {
    let used: BTreeSet<String> = seed.iter().flat_map(|f| f.atoms()).map(|a| a.to_string()).collect();
    (0..).map(|i| format!("z{i}")).find(|n| !used.contains(n)).map(|n| Formula::var(&n)).unwrap()
}

/// Extends `s` so that `pat` instantiates to `f`; returns false on mismatch.
fn match_into(pat: &Formula, f: &Formula, s: &mut Substitution) -> bool {
    match pat.term() {
        Term::Var(_) | Term::Skel(_) => match s.get(pat) {
            Some(b) => b == f,
            None => {
                s.insert(pat.clone(), f.clone());
                true
            }
        },
        Term::App(h, args) => {
            f.head() == Some(h.as_str())
                && f.args().len() == args.len()
                && args.iter().zip(f.args()).all(|(p, g)| match_into(p, g, s))
        }
    }
}

struct Engine<'a> {
    c: &'a HilbertCalculus,
    universe: HashSet<Formula>,
    free_pool: Vec<Formula>,
    steps: Vec<Step>,
    index: HashMap<Formula, usize>,
    cap: usize,
    goal: Formula,
}

enum Flow {
    Continue,
    Goal,
    Cap,
}

impl Engine<'_> {
    fn add(&mut self, f: Formula, j: Justification) -> Flow {
        if self.index.contains_key(&f) {
            return Flow::Continue;
        }
        if self.steps.len() >= self.cap {
            return Flow::Cap;
        }
        self.index.insert(f.clone(), self.steps.len());
        let goal = f == self.goal;
        self.steps.push(Step { formula: f, justification: j });
        if goal {
            Flow::Goal
        } else {
            Flow::Continue
        }
    }

    fn bound_ok(&self, s: &Substitution) -> bool {
        s.iter().all(|(_, v)| self.universe.contains(v))
    }

    /// Applies `r` with premise `pos` matched to step `i`, other premises
    /// matched among steps `0..=i`.
    fn fire(&mut self, r: &Rule, pos: usize, i: usize) -> Flow {
        let mut s = Substitution::new();
        if !match_into(&r.premises[pos], &self.steps[i].formula, &mut s) {
            return Flow::Continue;
        }
        let mut partials = vec![(s, vec![usize::MAX; r.premises.len()])];
        partials[0].1[pos] = i;
        for (k, p) in r.premises.iter().enumerate() {
            if k == pos {
                continue;
            }
            let mut next = Vec::new();
            for (s, used) in &partials {
                let inst = p.substitute(s);
                if p.atoms().iter().all(|a| s.get(a).is_some()) {
                    if let Some(&j) = self.index.get(&inst) {
                        if j <= i {
                            let mut u = used.clone();
                            u[k] = j;
                            next.push((s.clone(), u));
                        }
                    }
                    continue;
                }
                for j in 0..=i {
                    let mut s2 = s.clone();
                    if match_into(p, &self.steps[j].formula, &mut s2) {
                        let mut u = used.clone();
                        u[k] = j;
                        next.push((s2, u));
                    }
                }
            }
            partials = next;
            if partials.is_empty() {
                return Flow::Continue;
            }
        }
        for (s, used) in partials {
            if !self.bound_ok(&s) {
                continue;
            }
            match self.conclude(r, s, used) {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }

    /// Instantiates conclusion-only variables over the free pool.
    fn conclude(&mut self, r: &Rule, s: Substitution, used: Vec<usize>) -> Flow {
        let free: Vec<Formula> = r.conclusion.atoms().into_iter().filter(|a| s.get(a).is_none()).collect();
        if free.is_empty() {
            let f = r.conclusion.substitute(&s);
            return self.add(f, Justification::Rule { rule: r.name.clone(), subst: s, premises: used });
        }
        let pool = self.free_pool.clone();
        let mut out = Flow::Continue;
        let mut stop = false;
        crate::semantics::for_each_tuple(pool.len(), free.len(), |idx| {
            if stop {
                return;
            }
            let mut s2 = s.clone();
            for (v, &k) in free.iter().zip(idx) {
                s2.insert(v.clone(), pool[k as usize].clone());
            }
            let f = r.conclusion.substitute(&s2);
            match self.add(f, Justification::Rule { rule: r.name.clone(), subst: s2, premises: used.clone() }) {
                Flow::Continue => {}
                other => {
                    out = other;
                    stop = true;
                }
            }
        });
        out
    }

    fn run(&mut self, gamma: &[Formula]) -> Flow {
        for g in gamma {
            match self.add(g.clone(), Justification::Premise) {
                Flow::Continue => {}
                other => return other,
            }
        }
        let rules = self.c.rules.clone();
        for r in rules.iter().filter(|r| r.is_axiom()) {
            match self.conclude(r, Substitution::new(), vec![]) {
                Flow::Continue => {}
                other => return other,
            }
        }
        let mut i = 0;
        while i < self.steps.len() {
            for r in rules.iter().filter(|r| !r.is_axiom()) {
                for pos in 0..r.premises.len() {
                    match self.fire(r, pos, i) {
                        Flow::Continue => {}
                        other => return other,
                    }
                }
            }
            i += 1;
        }
        Flow::Continue
    }

    /// The steps the goal depends on, renumbered.
    fn extract(&self) -> Derivation {
        let last = self.index[&self.goal];
        let mut need = BTreeSet::new();
        let mut stack = vec![last];
        while let Some(i) = stack.pop() {
            if need.insert(i) {
                if let Justification::Rule { premises, .. } = &self.steps[i].justification {
                    stack.extend(premises.iter().copied());
                }
            }
        }
        let renum: BTreeMap<usize, usize> = need.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let steps = need
            .iter()
            .map(|&i| {
                let s = &self.steps[i];
                let justification = match &s.justification {
                    Justification::Premise => Justification::Premise,
                    Justification::Rule { rule, subst, premises } => Justification::Rule {
                        rule: rule.clone(),
                        subst: subst.clone(),
                        premises: premises.iter().map(|p| renum[p]).collect(),
                    },
                };
                Step { formula: s.formula.clone(), justification }
            })
            .collect();
        Derivation { steps }
    }
}

/// Forward chaining with universes of growing depth up to
/// `bounds.universe_depth`; each attempt stops at `bounds.step_cap` steps.
pub fn derive(c: &HilbertCalculus, gamma: &[Formula], phi: &Formula, bounds: DeriveBounds) -> DeriveResult {
    let seed: Vec<Formula> = gamma.iter().chain([phi]).cloned().collect();
    let fresh = fresh_variable(&seed);
    let mut last = None;
    for depth in 0..=bounds.universe_depth {
        let u = universe(c, &seed, depth);
        let mut free_pool = vec![fresh.clone()];
        free_pool.extend(u.iter().cloned());
        let mut e = Engine {
            c,
            universe: u.iter().cloned().collect(),
            free_pool,
            steps: Vec::new(),
            index: HashMap::new(),
            cap: bounds.step_cap,
            goal: phi.clone(),
        };
        let flow = e.run(gamma);
        if matches!(flow, Flow::Goal) || e.index.contains_key(phi) {
            return DeriveResult::Derived(e.extract());
        }
        last = Some(DeriveResult::NotFoundAtBound {
            bounds,
            exhaustion: if matches!(flow, Flow::Cap) { Exhaustion::StepCap } else { Exhaustion::Saturated },
            universe_size: u.len(),
            derived: e.steps.len(),
        });
    }
    last.expect("at least one attempt")
}
