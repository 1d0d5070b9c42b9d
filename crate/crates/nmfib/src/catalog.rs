//! The worked examples: each entry rebuilds its matrices and calculi and
//! re-checks the stated facts one assertion at a time.

use std::collections::BTreeSet;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::boolfun::{self, functionally_complete, BooleanFunction, Completeness, FragmentSpec};
use crate::calculus::{builtin_calculus, verify, DeriveBounds, Rule};
use crate::fibring::{
    certify_entailment, decide_fc_recovery, decide_recovery, fibred_calculus, fibred_semantics, k_determinedness_probe,
    phi_t_family, three_valued_negation, truth_preserving_bot_matrix, Certificate, Component, Condition, FcVerdict,
    FibringError, KdetOutcome, RecoveryVerdict, TargetClone,
};
use crate::matrix_ops::{power, strict_product, translate_matrix};
use crate::semantics::{
    bounded_saturation_check, entails, filter_valuations_by_rules, logically_equivalent, standard_pools, Entailment,
    Exactness, Nmatrix, PartialValuation, Proviso, RuleFilter, SaturationResult, Value,
};
use crate::syntax::{parse, random_formula, Formula, Signature, Translation};

pub const CATALOG_IDS: &[&str] = &[
    "two_conj",
    "two_disj",
    "two_neg",
    "conj_disj",
    "disj_neg",
    "coimp_top",
    "coimp_bot",
    "imp_bot",
    "biimp_bot",
    "biimp_bot1",
    "xor3_two_bots",
    "neg_bot",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown example `{0}`; known: {}", CATALOG_IDS.join(", "))]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Classical(Condition),
    Subclassical,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Classical(c) => write!(f, "classical (condition {c})"),
            Expected::Subclassical => f.write_str("subclassical"),
        }
    }
}

/// The two fragments of an example and its expected recovery outcome.
#[derive(Debug, Clone)]
pub struct Entry {
    pub id: &'static str,
    pub title: &'static str,
    pub left: FragmentSpec,
    pub right: FragmentSpec,
    pub expected: Expected,
}

fn frag(pairs: &[(&str, BooleanFunction)]) -> FragmentSpec {
    FragmentSpec::new(pairs.iter().map(|(n, f)| (*n, *f))).expect("static fragment")
}

pub fn entry(id: &str) -> Result<Entry, CatalogError> {
    use boolfun::*;
    let (id, title, left, right, expected) = match id {
        "two_conj" => (
            "two_conj",
            "Two copies of conjunction",
            frag(&[("and", and())]),
            frag(&[("amp", and())]),
            Expected::Classical(Condition::B),
        ),
        "two_disj" => (
            "two_disj",
            "Two copies of disjunction",
            frag(&[("or", or())]),
            frag(&[("bar", or())]),
            Expected::Subclassical,
        ),
        "two_neg" => (
            "two_neg",
            "Two copies of negation",
            frag(&[("neg", neg())]),
            frag(&[("sim", neg())]),
            Expected::Subclassical,
        ),
        "conj_disj" => (
            "conj_disj",
            "Conjunction and disjunction",
            frag(&[("and", and())]),
            frag(&[("or", or())]),
            Expected::Subclassical,
        ),
        "disj_neg" => (
            "disj_neg",
            "Disjunction and negation",
            frag(&[("or", or())]),
            frag(&[("neg", neg())]),
            Expected::Subclassical,
        ),
        "coimp_top" => (
            "coimp_top",
            "Coimplication and top",
            frag(&[("coimp", coimp())]),
            frag(&[("top", top())]),
            Expected::Classical(Condition::A),
        ),
        "coimp_bot" => (
            "coimp_bot",
            "Coimplication and bottom",
            frag(&[("coimp", coimp())]),
            frag(&[("bot", bot())]),
            Expected::Subclassical,
        ),
        "imp_bot" => (
            "imp_bot",
            "Implication and bottom",
            frag(&[("imp", imp())]),
            frag(&[("bot", bot())]),
            Expected::Subclassical,
        ),
        "biimp_bot" => (
            "biimp_bot",
            "Bi-implication and bottom",
            frag(&[("iff", iff())]),
            frag(&[("bot", bot())]),
            Expected::Classical(Condition::C),
        ),
        "biimp_bot1" => (
            "biimp_bot1",
            "Bi-implication and 1-place bottom",
            frag(&[("iff", iff())]),
            frag(&[("ubot", BooleanFunction::constant(1, false))]),
            Expected::Subclassical,
        ),
        "xor3_two_bots" => (
            "xor3_two_bots",
            "Ternary xor and two bottoms",
            frag(&[("xor3", xor3())]),
            frag(&[("bot1", bot()), ("bot2", bot())]),
            Expected::Subclassical,
        ),
        "neg_bot" => {
            ("neg_bot", "Negation and bottom", frag(&[("neg", neg())]), frag(&[("bot", bot())]), Expected::Subclassical)
        }
        other => return Err(CatalogError::Unknown(other.to_string())),
    };
    Ok(Entry { id, title, left, right, expected })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub id: String,
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({})", self.id, self.title)?;
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "  [{tag}] {}", c.label)?;
            } else {
                writeln!(f, "  [{tag}] {}: {}", c.label, c.detail)?;
            }
        }
        Ok(())
    }
}

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, label: &str, run: impl FnOnce() -> Outcome) {
        let (passed, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.0.push(Check { label: label.to_string(), passed, detail });
    }
}

fn fs(s: &str, sig: &Signature) -> Formula {
    parse(s, sig).unwrap_or_else(|e| panic!("static formula `{s}`: {e}"))
}

fn fl(items: &[&str], sig: &Signature) -> Vec<Formula> {
    items.iter().map(|s| fs(s, sig)).collect()
}

fn bounds() -> DeriveBounds {
    DeriveBounds::default()
}

fn joint_sig(e: &Entry) -> Signature {
    e.left.signature().union(e.right.signature()).expect("disjoint")
}

fn components(e: &Entry) -> (Component, Component) {
    (Component::from_fragment(&e.left), Component::from_fragment(&e.right))
}

fn rules_of(id: &str) -> Vec<Rule> {
    builtin_calculus(id).expect("builtin").rules
}

/// Builds an Nmatrix from named cells given as `(connective, args, outs)`.
fn table_matrix(values: &[&str], designated: &[&str], sig: &Signature, cells: &[(&str, &[&str], &[&str])]) -> Nmatrix {
    let names: Vec<String> = values.iter().map(|s| s.to_string()).collect();
    let desig = values.iter().map(|v| designated.contains(v)).collect();
    Nmatrix::from_fn(names, desig, sig.clone(), |name, args| {
        let key: Vec<&str> = args.iter().map(|&a| values[a as usize]).collect();
        let (_, _, outs) = cells
            .iter()
            .find(|(n, a, _)| *n == name && *a == key.as_slice())
            .unwrap_or_else(|| panic!("missing cell {name}{key:?}"));
        outs.iter().map(|o| values.iter().position(|v| v == o).expect("listed value") as Value).collect()
    })
    .expect("static table")
}

fn same_matrix(a: &Nmatrix, b: &Nmatrix) -> bool {
    let va: BTreeSet<&String> = a.values().iter().collect();
    let vb: BTreeSet<&String> = b.values().iter().collect();
    let da: BTreeSet<&str> = a.designated_values().iter().map(|&v| a.value_name(v)).collect();
    let db: BTreeSet<&str> = b.designated_values().iter().map(|&v| b.value_name(v)).collect();
    va == vb && da == db && a.signature() == b.signature() && a.signature().iter().all(|(n, _)| a.same_table(b, n))
}

fn verdict_check(c: &mut Checks, e: &Entry) {
    c.add(&format!("decide_recovery is {}", e.expected), || {
        let v = decide_recovery(&e.left, &e.right)?;
        Ok(match (&v, e.expected) {
            (RecoveryVerdict::Classical(got), Expected::Classical(want)) => (*got == want, format!("condition {got}")),
            (RecoveryVerdict::Subclassical(w), Expected::Subclassical) => {
                (w.recheck(&e.left, &e.right)?, format!("witness {} ({}, power {})", w.sequent, w.template, w.power))
            }
            (other, _) => (false, format!("got {other:?}")),
        })
    });
}

fn refuted(m: &Nmatrix, gamma: &[Formula], phi: &Formula) -> Outcome {
    match entails(m, gamma, phi)? {
        Entailment::Holds => Ok((false, "entailment holds".into())),
        Entailment::Fails(v) => {
            v.verify(m)?;
            let ok = v.refutes(m, gamma, phi);
            Ok((ok, render_inline(&v, m)))
        }
    }
}

fn holds(m: &Nmatrix, gamma: &[Formula], phi: &Formula) -> Outcome {
    Ok((entails(m, gamma, phi)?.holds(), String::new()))
}

fn render_inline(v: &PartialValuation, m: &Nmatrix) -> String {
    v.render(m).trim_end().replace('\n', ", ")
}

fn certified_yes(c1: &Component, c2: &Component, extra: &[Rule], gamma: &[Formula], phi: &Formula) -> Outcome {
    match certify_entailment(c1, c2, extra, gamma, phi, 2, bounds())? {
        Certificate::Yes(d) => {
            let calc = fibred_calculus(c1, c2, extra)?;
            let ok = verify(&d, &calc, gamma, phi).is_ok();
            Ok((ok, format!("derivation of {} steps", d.len())))
        }
        other => Ok((false, format!("{other:?}"))),
    }
}

fn classically_valid(e: &Entry, gamma: &[Formula], phi: &Formula) -> Outcome {
    let joint = e.left.union(&e.right)?;
    Ok((joint.classically_valid(gamma, phi)?, String::new()))
}

fn sequent_agreement(
    e: &Entry,
    samples: usize,
    seed: u64,
    mut verdict: impl FnMut(&[Formula], &Formula) -> Result<bool, FibringError>,
) -> Outcome {
    let joint = e.left.union(&e.right)?;
    let sig = joint.signature().clone();
    let atoms = [Formula::var("p"), Formula::var("q"), Formula::var("r")];
    let mut rng = StdRng::seed_from_u64(seed);
    let mut agree = 0;
    let mut valid = 0;
    for _ in 0..samples {
        let np = rng.gen_range(0..=2);
        let gamma: Vec<Formula> = (0..np).map(|_| random_formula(&mut rng, &sig, &atoms, 3)).collect();
        let phi = random_formula(&mut rng, &sig, &atoms, 3);
        let classical = joint.classically_valid(&gamma, &phi)?;
        valid += classical as usize;
        if verdict(&gamma, &phi)? == classical {
            agree += 1;
        }
    }
    Ok((agree == samples, format!("{agree}/{samples} agree ({valid} classically valid)")))
}

/// Re-runs the example `id`.
pub fn reproduce(id: &str) -> Result<Report, CatalogError> {
    let e = entry(id)?;
    let mut c = Checks(Vec::new());
    let sig = joint_sig(&e);
    match e.id {
        "two_conj" => two_conj(&mut c, &e, &sig),
        "two_disj" => two_disj(&mut c, &e, &sig),
        "two_neg" => two_neg(&mut c, &e, &sig),
        "conj_disj" => conj_disj(&mut c, &e, &sig),
        "disj_neg" => disj_neg(&mut c, &e, &sig),
        "coimp_top" => coimp_top(&mut c, &e, &sig),
        "coimp_bot" => coimp_bot(&mut c, &e, &sig),
        "imp_bot" => imp_bot(&mut c, &e, &sig),
        "biimp_bot" => biimp_bot(&mut c, &e, &sig),
        "biimp_bot1" => biimp_bot1(&mut c, &e, &sig),
        "xor3_two_bots" => xor3_two_bots(&mut c, &e, &sig),
        "neg_bot" => neg_bot(&mut c, &e, &sig),
        _ => unreachable!("entry() validated the id"),
    }
    verdict_check(&mut c, &e);
    Ok(Report { id: e.id.to_string(), title: e.title.to_string(), checks: c.0 })
}

fn two_conj(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    c.add("both 2-valued matrices are saturated", || Ok((c1.saturated && c2.saturated, String::new())));
    c.add("the strict product is 2-valued", || {
        let m = fibred_semantics(&c1, &c2, 2)?;
        Ok((m.matrix().len() == 2, format!("{} values", m.matrix().len())))
    });
    c.add("and(p,q) and amp(p,q) are equivalent in the product", || {
        let m = fibred_semantics(&c1, &c2, 2)?;
        let ok = logically_equivalent(m.matrix(), &fl(&["and(p,q)"], sig), &fl(&["amp(p,q)"], sig))?;
        Ok((ok, String::new()))
    });
    c.add("the merged calculus derives and(p,q) ⊢ amp(p,q)", || {
        certified_yes(&c1, &c2, &[], &fl(&["and(p,q)"], sig), &fs("amp(p,q)", sig))
    });
}

fn two_disj(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    c.add("2_or is not saturated: or(p,q) against {p, q}", || {
        let m = e.left.two_valued();
        let r = bounded_saturation_check(&m, 2, &[fl(&["or(p,q)"], sig)], &fl(&["p", "q"], sig))?;
        Ok((matches!(r, SaturationResult::Counterexample { .. }), String::new()))
    });
    c.add("or(p,q) ⊬ bar(p,q) at power 2", || {
        let m = fibred_semantics(&c1, &c2, 2)?;
        refuted(m.matrix(), &fl(&["or(p,q)"], sig), &fs("bar(p,q)", sig))
    });
    c.add("{or(p,q)} and {bar(p,q)} are not equivalent at power 2", || {
        let m = fibred_semantics(&c1, &c2, 2)?;
        let eq = logically_equivalent(m.matrix(), &fl(&["or(p,q)"], sig), &fl(&["bar(p,q)"], sig))?;
        Ok((!eq, String::new()))
    });
    c.add("with or_pair: or(p,or(q,r)) ⊢ or(p,bar(q,r)) is derivable", || {
        certified_yes(&c1, &c2, &rules_of("or_pair"), &fl(&["or(p,or(q,r))"], sig), &fs("or(p,bar(q,r))", sig))
    });
    c.add("not 1-determined (k = 1, power 3)", || {
        Ok(match k_determinedness_probe(&c1, &c2, 1, 3, bounds())? {
            KdetOutcome::ViolationFound { gamma, phi, instances, .. } => (
                true,
                format!(
                    "{} ⊬ {phi}; {} derivable instance(s)",
                    gamma.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
                    instances.len()
                ),
            ),
            KdetOutcome::NoneFound => (false, "no violation".into()),
        })
    });
    c.add("phi_0, phi_1, phi_2 pairwise non-equivalent at power 3", || {
        let r = phi_t_family(&e.left, &e.right, 2, 3, 3)?;
        let fs: Vec<String> = r.formulas.iter().map(|f| f.to_string()).collect();
        Ok((r.all_distinct() && r.power == 3, fs.join(" | ")))
    });
}

fn five_valued(sig: &Signature) -> Nmatrix {
    let v = ["(0,0)", "(0,1/2)", "(1/2,0)", "(1/2,1/2)", "(1,1)"];
    let a = |s: &'static str| -> &'static [&'static str] {
        match s {
            "(0,0)" => &["(0,0)"],
            "(0,1/2)" => &["(0,1/2)"],
            "(1/2,0)" => &["(1/2,0)"],
            "(1/2,1/2)" => &["(1/2,1/2)"],
            _ => &["(1,1)"],
        }
    };
    let cells: Vec<(&str, &[&str], &[&str])> = vec![
        ("neg", a("(0,0)"), &["(1,1)"]),
        ("neg", a("(0,1/2)"), &["(1,1)"]),
        ("neg", a("(1/2,0)"), &["(1/2,0)", "(1/2,1/2)"]),
        ("neg", a("(1/2,1/2)"), &["(1/2,0)", "(1/2,1/2)"]),
        ("neg", a("(1,1)"), &["(0,0)", "(0,1/2)"]),
        ("sim", a("(0,0)"), &["(1,1)"]),
        ("sim", a("(0,1/2)"), &["(0,1/2)", "(1/2,1/2)"]),
        ("sim", a("(1/2,0)"), &["(1,1)"]),
        ("sim", a("(1/2,1/2)"), &["(0,1/2)", "(1/2,1/2)"]),
        ("sim", a("(1,1)"), &["(0,0)", "(1/2,0)"]),
    ];
    table_matrix(&v, &["(1,1)"], sig, &cells)
}

fn two_neg(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    let product = || fibred_semantics(&c1, &c2, 1).map(|f| f.matrix().clone());
    c.add("M3 ⋆ M3 equals the 5-valued table cell for cell", || {
        let m = product()?;
        Ok((same_matrix(&m, &five_valued(sig)), format!("values {}", m.values().join(" "))))
    });
    c.add("neg(p) ⊬ sim(p)", || refuted(&product()?, &fl(&["neg(p)"], sig), &fs("sim(p)", sig)));
    c.add("neg_pair valuations avoid exactly (0,1/2) and (1/2,0)", || {
        let m = product()?;
        let universe = fl(&["p", "neg(p)", "sim(p)"], sig);
        let f = RuleFilter::new(&m, &rules_of("neg_pair"), &universe, &universe)?;
        let used: BTreeSet<&str> = f.values_on_universe().into_iter().map(|v| m.value_name(v)).collect();
        let want: BTreeSet<&str> = ["(0,0)", "(1/2,1/2)", "(1,1)"].into_iter().collect();
        Ok((used == want, used.into_iter().collect::<Vec<_>>().join(" ")))
    });
    c.add("the filtered semantics validates neg(p) ⊢ sim(p)", || {
        let m = product()?;
        let r = filter_valuations_by_rules(
            &m,
            &rules_of("neg_pair"),
            &fl(&["neg(p)"], sig),
            &fs("sim(p)", sig),
            None,
            Proviso::Saturated,
        )?;
        Ok((r.verdict.holds() && r.exactness == Exactness::Exact, r.exactness.to_string()))
    });
    c.add("purging the two values leaves M3 on both negations", || {
        let m = product()?;
        let keep: Vec<Value> =
            ["(0,0)", "(1/2,1/2)", "(1,1)"].iter().map(|n| m.value_id(n).expect("product value")).collect();
        let m3 = three_valued_negation("x");
        let mut ok = true;
        for name in ["neg", "sim"] {
            for (i, &a) in keep.iter().enumerate() {
                let out: Vec<Value> = m.cell(name, &[a]).iter().copied().filter(|v| keep.contains(v)).collect();
                let expect = keep[m3.cell("x", &[i as Value])[0] as usize];
                ok &= out == [expect];
            }
        }
        Ok((ok, String::new()))
    });
    c.add("with neg_pair: neg(p) ⊢ sim(p) is derivable", || {
        certified_yes(&c1, &c2, &rules_of("neg_pair"), &fl(&["neg(p)"], sig), &fs("sim(p)", sig))
    });
}

fn conj_disj(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    c.add("2_and passes the bounded saturation check", || {
        let (ps, pool, k) = standard_pools("and", 2);
        let r = bounded_saturation_check(&e.left.two_valued(), k, &ps, &pool)?;
        Ok((r == SaturationResult::NoCounterexampleFound, String::new()))
    });
    c.add("2_or fails the bounded saturation check", || {
        let (ps, pool, k) = standard_pools("or", 2);
        let r = bounded_saturation_check(&e.right.two_valued(), k, &ps, &pool)?;
        Ok((matches!(r, SaturationResult::Counterexample { .. }), String::new()))
    });
    let gamma = fl(&["or(p,and(q,r))"], sig);
    let phi = fs("and(or(p,q),or(p,r))", sig);
    c.add("or(p,and(q,r)) ⊬ and(or(p,q),or(p,r)) at power 2", || {
        let m = fibred_semantics(&c1, &c2, 2)?;
        refuted(m.matrix(), &gamma, &phi)
    });
    c.add("with and_or: the distribution is derivable", || certified_yes(&c1, &c2, &rules_of("and_or"), &gamma, &phi));
}

fn disj_neg(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    c.add("{or, neg} is functionally complete", || {
        let j = e.left.union(&e.right)?;
        Ok((functionally_complete(&j) == Completeness::Complete, String::new()))
    });
    c.add("⊬ or(p,neg(p)) in 2_or^2 ⋆ M3", || {
        let m = fibred_semantics(&c1, &c2, 2)?;
        refuted(m.matrix(), &[], &fs("or(p,neg(p))", sig))
    });
    c.add("with or_neg: ⊢ or(p,neg(p)) is derivable", || {
        certified_yes(&c1, &c2, &rules_of("or_neg"), &[], &fs("or(p,neg(p))", sig))
    });
    c.add("with or_neg: neg(neg(p)) ⊢ p is derivable", || {
        certified_yes(&c1, &c2, &rules_of("or_neg"), &fl(&["neg(neg(p))"], sig), &fs("p", sig))
    });
}

fn coimp_top(c: &mut Checks, e: &Entry, sig: &Signature) {
    c.add("translating neg(imp(p2,p1)) gives the coimplication table", || {
        let base = FragmentSpec::standard(&["neg", "imp"])?.two_valued();
        let src = Signature::from_pairs([("coimp", 2)])?;
        let t = Translation::new().with("coimp", fs("neg(imp(p2,p1))", base.signature()));
        let m = translate_matrix(&base, &t, &src)?;
        Ok((m.same_table(&e.left.two_valued(), "coimp"), String::new()))
    });
    c.add("2_coimp is not saturated: p against {coimp(q,p), q}", || {
        let r = bounded_saturation_check(&e.left.two_valued(), 2, &[fl(&["p"], sig)], &fl(&["coimp(q,p)", "q"], sig))?;
        Ok((matches!(r, SaturationResult::Counterexample { .. }), String::new()))
    });
    c.add("2_coimp ⋆ 2_top is 2_{coimp,top}", || {
        let m = strict_product(&e.left.two_valued(), &e.right.two_valued())?;
        let renamed = m.with_value_names(|v| match v {
            "(0,0)" => "0".into(),
            "(1,1)" => "1".into(),
            other => other.into(),
        })?;
        let joint = e.left.union(&e.right)?.two_valued();
        Ok((same_matrix(&renamed, &joint), String::new()))
    });
    c.add("{coimp, top} is functionally complete", || {
        let j = e.left.union(&e.right)?;
        Ok((functionally_complete(&j) == Completeness::Complete, String::new()))
    });
    c.add("functional completeness is recovered (T0^inf with UP1)", || {
        let v = decide_fc_recovery(&e.left, &e.right, 2)?;
        let ok = v == FcVerdict::Recovered { up1_side: 2, other: TargetClone::T0Infinity };
        Ok((ok, format!("{v:?}")))
    });
}

/// Product values `((a,b),x)` named by their first component `(a,b)`.
fn first_component_names(m: &Nmatrix) -> Result<Nmatrix, crate::semantics::SemanticsError> {
    m.with_value_names(|v| {
        let inner = &v[1..v.len() - 1];
        inner[..inner.rfind(',').expect("pair")].to_string()
    })
}

fn coimp_bot(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    let four = || -> Result<Nmatrix, Box<dyn std::error::Error>> {
        let f = fibred_semantics(&c1, &c2, 2)?;
        Ok(first_component_names(f.matrix())?)
    };
    c.add("2_coimp^2 ⋆ 2_bot equals the 4-valued table", || {
        let v = ["(0,0)", "(0,1)", "(1,0)", "(1,1)"];
        let mut cells: Vec<(&str, Vec<&str>, Vec<&str>)> = Vec::new();
        let rows = [
            ["(0,0)", "(0,1)", "(1,0)", "(1,1)"],
            ["(0,0)", "(0,0)", "(1,0)", "(1,0)"],
            ["(0,0)", "(0,1)", "(0,0)", "(0,1)"],
            ["(0,0)", "(0,0)", "(0,0)", "(0,0)"],
        ];
        for (i, row) in rows.iter().enumerate() {
            for (j, out) in row.iter().enumerate() {
                cells.push(("coimp", vec![v[i], v[j]], vec![out]));
            }
        }
        cells.push(("bot", vec![], vec!["(0,0)", "(0,1)", "(1,0)"]));
        let cells: Vec<(&str, &[&str], &[&str])> =
            cells.iter().map(|(n, a, o)| (*n, a.as_slice(), o.as_slice())).collect();
        let expected = table_matrix(&v, &["(1,1)"], sig, &cells);
        Ok((same_matrix(&four()?, &expected), String::new()))
    });
    c.add("coimp(bot,q), p ⊢ coimp(bot,p) in the 4-valued Nmatrix", || {
        holds(&four()?, &fl(&["coimp(bot,q)", "p"], sig), &fs("coimp(bot,p)", sig))
    });
    c.add("p ⊬ coimp(bot,p) in the 4-valued Nmatrix", || {
        refuted(&four()?, &fl(&["p"], sig), &fs("coimp(bot,p)", sig))
    });
    c.add("the interaction rule p / coimp(bot,p) is classically sound", || {
        classically_valid(e, &fl(&["p"], sig), &fs("coimp(bot,p)", sig))
    });
}

fn imp_bot(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    let m4 = || truth_preserving_bot_matrix(&e.left, "bot");
    c.add("the truth-preserving matrix equals the 4-valued table", || {
        let v = ["(0,0)", "(0,1)", "(1,0)", "(1,1)"];
        let rows = [
            ["(1,1)", "(1,1)", "(1,1)", "(1,1)"],
            ["(1,0)", "(1,1)", "(1,0)", "(1,1)"],
            ["(0,1)", "(0,1)", "(1,1)", "(1,1)"],
            ["(0,0)", "(0,1)", "(1,0)", "(1,1)"],
        ];
        let mut cells: Vec<(&str, Vec<&str>, Vec<&str>)> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, out) in row.iter().enumerate() {
                cells.push(("imp", vec![v[i], v[j]], vec![out]));
            }
        }
        cells.push(("bot", vec![], vec!["(1,0)"]));
        let cells: Vec<(&str, &[&str], &[&str])> =
            cells.iter().map(|(n, a, o)| (*n, a.as_slice(), o.as_slice())).collect();
        let expected = table_matrix(&v, &["(1,1)"], sig, &cells);
        Ok((same_matrix(&m4()?, &expected), String::new()))
    });
    c.add("⊬ imp(bot,p)", || refuted(&m4()?, &[], &fs("imp(bot,p)", sig)));
    c.add("filtering by the axiom imp(bot,p) agrees with 2_{imp,bot}", || {
        let m = m4()?;
        let axiom = rules_of("imp_bot");
        sequent_agreement(e, 100, 7, |g, phi| {
            let r = filter_valuations_by_rules(&m, &axiom, g, phi, None, Proviso::None)?;
            Ok(r.verdict.holds())
        })
    });
    c.add("with the axiom: bot ⊢ p is derivable", || {
        certified_yes(&c1, &c2, &rules_of("imp_bot"), &fl(&["bot"], sig), &fs("p", sig))
    });
}

fn biimp_bot(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    c.add("entailment at power 2 agrees with 2_{iff,bot}", || {
        let m = fibred_semantics(&c1, &c2, 2)?;
        sequent_agreement(e, 100, 11, |g, phi| Ok(entails(m.matrix(), g, phi)?.holds()))
    });
    c.add("h(1,a) = (a,a), h(0,a) = (1-a,a) maps M4 onto 2^2_{iff,top,bot}", || {
        let it = FragmentSpec::standard(&["iff", "top"])?;
        let m4 = truth_preserving_bot_matrix(&it, "bot")?;
        let h = m4.with_value_names(|v| {
            match v {
                "(1,0)" => "(0,0)",
                "(1,1)" => "(1,1)",
                "(0,0)" => "(1,0)",
                _ => "(0,1)",
            }
            .to_string()
        })?;
        let two = FragmentSpec::standard(&["iff", "top", "bot"])?.two_valued();
        Ok((same_matrix(&h, &power(&two, 2)?), String::new()))
    });
    c.add("the merged calculus derives iff(bot,bot)", || certified_yes(&c1, &c2, &[], &[], &fs("iff(bot,bot)", sig)));
}

fn biimp_bot1(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    c.add("2_ubot is saturated", || Ok((c2.saturated, String::new())));
    c.add("not 1-determined (k = 1, power 3)", || {
        Ok(match k_determinedness_probe(&c1, &c2, 1, 3, bounds())? {
            KdetOutcome::ViolationFound { gamma, phi, .. } => (true, format!("{} premises ⊬ {phi}", gamma.len())),
            KdetOutcome::NoneFound => (false, "no violation".into()),
        })
    });
    let axiom = fs("iff(ubot(p),ubot(q))", sig);
    c.add("the interaction axiom is classically valid", || classically_valid(e, &[], &axiom));
    c.add("⊬ iff(ubot(p),ubot(q)) at power 2", || {
        let m = fibred_semantics(&c1, &c2, 2)?;
        refuted(m.matrix(), &[], &axiom)
    });
}

fn xor3_two_bots(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    let gamma = fl(&["xor3(p,bot1,bot2)"], sig);
    let p = fs("p", sig);
    c.add("xor3(p,bot1,bot2) ⊢ p is classically valid", || classically_valid(e, &gamma, &p));
    c.add("the triple valuation refutes it in 2_xor3^3 ⋆ 2_{bot1,bot2}", || {
        let f = fibred_semantics(&c1, &c2, 3)?;
        let m = f.matrix();
        let v = PartialValuation::from_names(
            m,
            [
                (p.clone(), "((0,1,1),0)"),
                (fs("bot1", sig), "((1,0,0),0)"),
                (fs("bot2", sig), "((0,0,0),0)"),
                (gamma[0].clone(), "((1,1,1),1)"),
            ],
        )?;
        v.verify(m)?;
        Ok((v.refutes(m, &gamma, &p), render_inline(&v, m)))
    });
    c.add("the interaction rules are classically sound", || {
        let a = classically_valid(e, &fl(&["xor3(bot1,p,q)"], sig), &fs("xor3(bot2,p,q)", sig))?.0;
        let b = classically_valid(e, &fl(&["xor3(bot2,p,q)"], sig), &fs("xor3(bot1,p,q)", sig))?.0;
        Ok((a && b, String::new()))
    });
    c.add("with a single bottom the combination is classical (condition c)", || {
        let one = FragmentSpec::standard(&["bot"])?;
        let v = decide_recovery(&e.left, &one)?;
        Ok((matches!(v, RecoveryVerdict::Classical(Condition::C)), String::new()))
    });
}

fn neg_bot(c: &mut Checks, e: &Entry, sig: &Signature) {
    let (c1, c2) = components(e);
    let m3 = || fibred_semantics(&c1, &c2, 2).map(|f| f.matrix().clone());
    c.add("M3 ⋆ 2_bot has values (0,0), (1/2,0), (1,1)", || {
        let m = m3()?;
        Ok((m.values() == ["(0,0)", "(1/2,0)", "(1,1)"], m.values().join(" ")))
    });
    c.add("bot ↦ {(0,0), (1/2,0)}", || {
        let m = m3()?;
        let cell: Vec<&str> = m.cell("bot", &[]).iter().map(|&v| m.value_name(v)).collect();
        Ok((cell == ["(0,0)", "(1/2,0)"], cell.join(" ")))
    });
    c.add("⊬ neg(bot), with bot ↦ (1/2,0)", || {
        let m = m3()?;
        let (ok, detail) = refuted(&m, &[], &fs("neg(bot)", sig))?;
        let v = entails(&m, &[], &fs("neg(bot)", sig))?;
        let at = v.countermodel().and_then(|v| v.get(&fs("bot", sig)));
        Ok((ok && at == m.value_id("(1/2,0)"), detail))
    });
    c.add("neg(bot) ⊢ neg(bot)", || holds(&m3()?, &fl(&["neg(bot)"], sig), &fs("neg(bot)", sig)));
    c.add("in 2_neg^2 ⋆ 2_bot the axiom neg(bot) forces bot ↦ (0,0)", || {
        let m = strict_product(&power(&e.left.two_valued(), 2)?, &e.right.two_valued())?;
        let bot = fl(&["bot"], sig);
        let f = RuleFilter::new(&m, &rules_of("neg_bot"), &bot, &bot)?;
        let used: Vec<&str> = f.values_on_universe().into_iter().map(|v| m.value_name(v)).collect();
        Ok((used == ["((0,0),0)"], used.join(" ")))
    });
    c.add("with the axiom: ⊢ neg(bot) is derivable", || {
        certified_yes(&c1, &c2, &rules_of("neg_bot"), &[], &fs("neg(bot)", sig))
    });
}
