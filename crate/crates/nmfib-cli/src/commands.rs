use std::error::Error;
use std::fs;
use std::path::Path;

use nmfib::boolfun::{
    self, basic_signature, classify, clone_contains, derived_translation, functionally_complete, post_predicates,
    standard_connective, term_for, BooleanFunction, Completeness, FragmentSpec,
};
use nmfib::calculus::{builtin_calculus, derive, DeriveBounds, DeriveResult, Exhaustion, HilbertCalculus, Rule};
use nmfib::catalog::{self, CATALOG_IDS};
use nmfib::fibring::{
    certify_entailment, decide_fc_recovery, decide_recovery, k_determinedness_probe, subclassical_witness, Certificate,
    Component, FcVerdict, KdetOutcome, RecoveryVerdict,
};
use nmfib::formats;
use nmfib::matrix_ops::{power_capped, strict_product_with_pairs, translate_matrix, DEFAULT_SIZE_CAP};
use nmfib::semantics::{entails, filter_valuations_by_rules, Entailment, Exactness, Nmatrix, Proviso};
use nmfib::syntax::{parse, parse_list, skeleton, Formula, Signature, Translation};
use serde_json::{json, Value};

use crate::render::{self, indent};
use crate::{Bounds, Command};

type Res<T> = Result<T, Box<dyn Error>>;

pub struct Options {
    pub json: bool,
    pub allow_degenerate: bool,
}

pub struct Output {
    pub text: String,
    pub code: u8,
}

const DECIDED: u8 = 0;
const FAILED: u8 = 1;
const UNDECIDED: u8 = 2;

fn out(opts: &Options, text: String, value: Value, code: u8) -> Output {
    let text = if opts.json {
        let mut s = serde_json::to_string_pretty(&value).expect("json value");
        s.push('\n');
        s
    } else {
        text
    };
    Output { text, code }
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_fragment(path: &Path) -> Res<FragmentSpec> {
    formats::parse_fragment(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_system(path: &Path, opts: &Options) -> Res<Nmatrix> {
    formats::parse_system_or_fragment(&read(path)?, opts.allow_degenerate)
        .map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_calculus(path: &Path) -> Res<HilbertCalculus> {
    formats::parse_calculus(&read(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// `NMFIB_SIZE_CAP`, else the library default.
fn size_cap() -> Res<usize> {
    match std::env::var("NMFIB_SIZE_CAP") {
        Ok(s) => s.trim().parse().map_err(|_| format!("NMFIB_SIZE_CAP must be a positive integer, got `{s}`").into()),
        Err(_) => Ok(DEFAULT_SIZE_CAP),
    }
}

fn bounds(b: Bounds) -> DeriveBounds {
    DeriveBounds { universe_depth: b.universe_depth, step_cap: b.steps }
}

fn default_signature() -> Signature {
    let (derived, _) = derived_translation(4);
    basic_signature().union(&derived).expect("disjoint by construction")
}

fn function_arg(table: Option<&str>, arity: Option<usize>, name: Option<&str>) -> Res<BooleanFunction> {
    if let Some(n) = name {
        return standard_connective(n).ok_or_else(|| format!("unknown connective `{n}`").into());
    }
    let t = table.ok_or("a --table is required")?;
    Ok(match arity {
        Some(k) => BooleanFunction::from_table_with_arity(k, t)?,
        None => BooleanFunction::from_table(t)?,
    })
}

pub fn run(cmd: Command, opts: &Options) -> Res<Output> {
    match cmd {
        Command::Parse { formula, system, skeleton: sk } => {
            let sig = match &system {
                Some(p) => load_system(p, opts)?.signature().clone(),
                None => default_signature(),
            };
            let f = parse(&formula, &sig)?;
            let atoms: Vec<Formula> = f.atoms().into_iter().collect();
            let mut text = format!(
                "{f}\ndepth: {}\nsize: {}\natoms: {}\n",
                f.depth(),
                f.size(),
                atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")
            );
            let mut value = json!({
                "formula": f.to_string(),
                "depth": f.depth(),
                "size": f.size(),
                "atoms": render::formulas(&atoms),
            });
            if let Some(p) = sk {
                let sigma = load_system(&p, opts)?.signature().clone();
                let s = skeleton(&f, &sigma);
                text.push_str(&format!("skeleton: {s}\n"));
                value["skeleton"] = json!(s.to_string());
            }
            Ok(out(opts, text, value, DECIDED))
        }

        Command::Classify { table, arity, name } => {
            let f = function_arg(table.as_deref(), arity, name.as_deref())?;
            let c = classify(&f);
            let p = post_predicates(&f);
            let value = json!({
                "arity": f.arity(),
                "table": f.table_string(),
                "summary": c.summary(),
                "top_like": c.top_like,
                "bottom_like": c.bottom_like,
                "projective_indices": c.projective_indices,
                "projection_conjunction": c.projection_conjunction,
                "significant": c.significant,
                "very_significant": c.very_significant,
                "truth_preserving": c.truth_preserving,
                "post": {
                    "zero_preserving": p.preserves0,
                    "one_preserving": p.preserves1,
                    "affine": p.affine,
                    "monotone": p.monotone,
                    "self_dual": p.self_dual,
                },
            });
            Ok(out(opts, format!("{}\n", c.summary()), value, DECIDED))
        }

        Command::Clone { fragment, table, arity } => {
            let frag = load_fragment(&fragment)?;
            let completeness = functionally_complete(&frag);
            let verdict = match completeness {
                Completeness::Complete => "COMPLETE".to_string(),
                Completeness::Incomplete(c) => format!("INCOMPLETE ({c})"),
            };
            let yn = |b: bool| if b { "yes" } else { "no" };
            let top = boolfun::fragment_in_clone_top(&frag);
            let atb = boolfun::fragment_in_clone_and_top_bot(&frag);
            let bi = boolfun::fragment_in_clone_biimp(&frag);
            let mut text = format!(
                "{verdict}\nwithin C2^top: {}\nwithin C2^and,top,bot: {}\nwithin C2^iff: {}\n",
                yn(top),
                yn(atb),
                yn(bi)
            );
            let mut value = json!({
                "complete": matches!(completeness, Completeness::Complete),
                "missing_from": match completeness {
                    Completeness::Complete => Value::Null,
                    Completeness::Incomplete(c) => json!(c.to_string()),
                },
                "within_top": top,
                "within_and_top_bot": atb,
                "within_iff": bi,
            });
            if let Some(t) = table {
                let f = function_arg(Some(&t), arity, None)?;
                let member = clone_contains(&frag.generators(), &f)?;
                text.push_str(&format!("member {}: {}\n", f.table_string(), yn(member)));
                value["member"] = json!(member);
                if member {
                    if let Some(term) = term_for(&frag, &f, boolfun::DEFAULT_BUDGET)? {
                        text.push_str(&format!("term: {term}\n"));
                        value["term"] = json!(term.to_string());
                    }
                }
            }
            Ok(out(opts, text, value, DECIDED))
        }

        Command::Entail { system, premises, conclusion, rules, saturated } => {
            let m = load_system(&system, opts)?;
            let gamma = parse_list(&premises, m.signature())?;
            let phi = parse(&conclusion, m.signature())?;
            let (verdict, exactness) = match rules {
                None => (entails(&m, &gamma, &phi)?, Exactness::Exact),
                Some(p) => {
                    let calc = load_calculus(&p)?;
                    let proviso = if saturated { Proviso::Saturated } else { Proviso::None };
                    let r = filter_valuations_by_rules(&m, &calc.rules, &gamma, &phi, None, proviso)?;
                    (r.verdict, r.exactness)
                }
            };
            let code = if exactness == Exactness::Exact { DECIDED } else { UNDECIDED };
            let suffix = if exactness == Exactness::Exact { "" } else { " (heuristic)" };
            let (text, value) = match &verdict {
                Entailment::Holds => {
                    (format!("HOLDS{suffix}\n"), json!({ "verdict": "holds", "exactness": exactness.to_string() }))
                }
                Entailment::Fails(v) => (
                    format!("FAILS{suffix}\n{}", v.render(&m)),
                    json!({
                        "verdict": "fails",
                        "exactness": exactness.to_string(),
                        "countermodel": render::countermodel(v, &m),
                    }),
                ),
            };
            Ok(out(opts, text, value, code))
        }

        Command::Product { left, right } => {
            let (a, b) = (load_system(&left, opts)?, load_system(&right, opts)?);
            let p = strict_product_with_pairs(&a, &b, size_cap()?)?;
            Ok(Output { text: formats::system_to_json(&p.matrix), code: DECIDED })
        }

        Command::Power { system, n } => {
            let m = load_system(&system, opts)?;
            let p = power_capped(&m, n, size_cap()?)?;
            Ok(Output { text: formats::system_to_json(&p), code: DECIDED })
        }

        Command::Translate { system, defs } => {
            let m = load_system(&system, opts)?;
            let mut source = Signature::new();
            let mut t = Translation::new();
            for d in &defs {
                let (head, body) = d.split_once('=').ok_or_else(|| format!("expected name/arity=body, got `{d}`"))?;
                let (name, arity) =
                    head.trim().split_once('/').ok_or_else(|| format!("expected name/arity before `=` in `{d}`"))?;
                let arity: usize = arity.trim().parse().map_err(|_| format!("bad arity in `{d}`"))?;
                source.insert(name.trim(), arity)?;
                t.insert(name.trim(), parse(body, m.signature())?);
            }
            let tm = translate_matrix(&m, &t, &source)?;
            if tm.len() > size_cap()? {
                return Err(format!("result has {} values, above the cap", tm.len()).into());
            }
            Ok(Output { text: formats::system_to_json(&tm), code: DECIDED })
        }

        Command::Derive { calculus, builtin, premises, goal, bounds: b } => {
            let calc = match (&calculus, &builtin) {
                (Some(p), _) => load_calculus(p)?,
                (None, Some(id)) => builtin_calculus(id)?,
                (None, None) => return Err("one of --calculus or --builtin is required".into()),
            };
            let gamma = parse_list(&premises, &calc.signature)?;
            let phi = parse(&goal, &calc.signature)?;
            match derive(&calc, &gamma, &phi, bounds(b)) {
                DeriveResult::Derived(d) => Ok(out(
                    opts,
                    format!("DERIVED in {} steps\n{d}", d.len()),
                    json!({ "verdict": "derived", "steps": render::derivation(&d) }),
                    DECIDED,
                )),
                DeriveResult::NotFoundAtBound { bounds: bd, exhaustion, universe_size, derived } => {
                    let why = match exhaustion {
                        Exhaustion::StepCap => "step cap reached",
                        Exhaustion::Saturated => "universe closed",
                    };
                    Ok(out(
                        opts,
                        format!(
                            "NOT FOUND at universe depth {}, step cap {} ({why}; {derived} formulas derived from a universe of {universe_size})\n",
                            bd.universe_depth, bd.step_cap
                        ),
                        json!({
                            "verdict": "not_found",
                            "universe_depth": bd.universe_depth,
                            "step_cap": bd.step_cap,
                            "exhaustion": why,
                            "universe_size": universe_size,
                            "derived": derived,
                        }),
                        UNDECIDED,
                    ))
                }
            }
        }

        Command::DecideRecovery { f1, f2 } => {
            let (a, b) = (load_fragment(&f1)?, load_fragment(&f2)?);
            Ok(match decide_recovery(&a, &b)? {
                RecoveryVerdict::Classical(c) => out(
                    opts,
                    format!("CLASSICAL (condition {c})\n"),
                    json!({ "verdict": "classical", "condition": c.to_string() }),
                    DECIDED,
                ),
                RecoveryVerdict::Subclassical(w) => out(
                    opts,
                    format!("SUBCLASSICAL\n{}", render::witness_text(&w)),
                    json!({ "verdict": "subclassical", "witness": render::witness(&w) }),
                    DECIDED,
                ),
                RecoveryVerdict::Unknown { power, depth } => out(
                    opts,
                    format!("UNKNOWN (no witness up to power {power}, depth {depth})\n"),
                    json!({ "verdict": "unknown", "power": power, "depth": depth }),
                    UNDECIDED,
                ),
            })
        }

        Command::FcRecovery { f1, f2, nmax } => {
            let (a, b) = (load_fragment(&f1)?, load_fragment(&f2)?);
            Ok(match decide_fc_recovery(&a, &b, nmax)? {
                FcVerdict::Recovered { up1_side, other } => out(
                    opts,
                    format!("RECOVERED (fragment {up1_side} in UP1, fragment {} in {other})\n", 3 - up1_side),
                    json!({ "verdict": "recovered", "up1_side": up1_side, "other": other.to_string() }),
                    DECIDED,
                ),
                FcVerdict::NotRecovered => {
                    out(opts, "NOT RECOVERED\n".into(), json!({ "verdict": "not_recovered" }), DECIDED)
                }
                FcVerdict::OutOfBound { reason } => out(
                    opts,
                    format!("OUT OF BOUND ({reason})\n"),
                    json!({ "verdict": "out_of_bound", "reason": reason }),
                    UNDECIDED,
                ),
            })
        }

        Command::Witness { f1, f2, depth, power } => {
            let (a, b) = (load_fragment(&f1)?, load_fragment(&f2)?);
            Ok(match subclassical_witness(&a, &b, power, depth)? {
                Some(w) => out(
                    opts,
                    format!("WITNESS\n{}", render::witness_text(&w)),
                    json!({ "verdict": "witness", "witness": render::witness(&w) }),
                    DECIDED,
                ),
                None => out(
                    opts,
                    format!("NONE FOUND at power {power}, depth {depth}\n"),
                    json!({ "verdict": "none_found", "power": power, "depth": depth }),
                    UNDECIDED,
                ),
            })
        }

        Command::Certify { frag1, frag2, rules, premises, goal, power, bounds: b } => {
            let (a, b2) = (load_fragment(&frag1)?, load_fragment(&frag2)?);
            let sig = a.signature().union(b2.signature())?;
            let extra: Vec<Rule> = match &rules {
                Some(p) => load_calculus(p)?.rules,
                None => Vec::new(),
            };
            let gamma = parse_list(&premises, &sig)?;
            let phi = parse(&goal, &sig)?;
            let (c1, c2) = (Component::from_fragment(&a), Component::from_fragment(&b2));
            Ok(match certify_entailment(&c1, &c2, &extra, &gamma, &phi, power, bounds(b))? {
                Certificate::Yes(d) => out(
                    opts,
                    format!("YES\n{d}"),
                    json!({ "verdict": "yes", "steps": render::derivation(&d) }),
                    DECIDED,
                ),
                Certificate::No { countermodel, power, matrix } => out(
                    opts,
                    format!("NO (countermodel at power {power})\n{}", countermodel.render(&matrix)),
                    json!({
                        "verdict": "no",
                        "power": power,
                        "countermodel": render::countermodel(&countermodel, &matrix),
                    }),
                    DECIDED,
                ),
                Certificate::Unknown { bounds: bd, power } => out(
                    opts,
                    format!(
                        "UNKNOWN (power {power}, universe depth {}, step cap {})\n",
                        bd.universe_depth, bd.step_cap
                    ),
                    json!({
                        "verdict": "unknown",
                        "power": power,
                        "universe_depth": bd.universe_depth,
                        "step_cap": bd.step_cap,
                    }),
                    UNDECIDED,
                ),
            })
        }

        Command::Kdet { f1, f2, k, power, bounds: b } => {
            let (a, b2) = (load_fragment(&f1)?, load_fragment(&f2)?);
            let (c1, c2) = (Component::from_fragment(&a), Component::from_fragment(&b2));
            Ok(match k_determinedness_probe(&c1, &c2, k, power, bounds(b))? {
                KdetOutcome::ViolationFound { family, gamma, phi, power, countermodel, instances } => {
                    let fib = nmfib::fibring::fibred_semantics(&c1, &c2, power)?;
                    let m = fib.matrix();
                    let mut text = format!(
                        "NOT {k}-DETERMINED (family {family})\npremises: {}\nconclusion: {phi}\nrefuted at power {power}:\n{}",
                        gamma.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
                        indent(&countermodel.render(m))
                    );
                    for (s, d) in &instances {
                        text.push_str(&format!("instance {s}: derived in {} steps\n", d.len()));
                    }
                    let inst: Vec<Value> = instances
                        .iter()
                        .map(|(s, d)| json!({ "substitution": s.to_string(), "steps": render::derivation(d) }))
                        .collect();
                    out(
                        opts,
                        text,
                        json!({
                            "verdict": "violation",
                            "k": k,
                            "family": family,
                            "premises": render::formulas(&gamma),
                            "conclusion": phi.to_string(),
                            "power": power,
                            "countermodel": render::countermodel(&countermodel, m),
                            "instances": inst,
                        }),
                        DECIDED,
                    )
                }
                KdetOutcome::NoneFound => out(
                    opts,
                    format!("NONE FOUND (k {k}, power {power})\n"),
                    json!({ "verdict": "none_found", "k": k, "power": power }),
                    UNDECIDED,
                ),
            })
        }

        Command::Reproduce { id } => {
            let ids: Vec<&str> = if id == "all" { CATALOG_IDS.to_vec() } else { vec![id.as_str()] };
            let mut text = String::new();
            let mut reports = Vec::new();
            let mut ok = true;
            for id in ids {
                let r = catalog::reproduce(id)?;
                ok &= r.passed();
                text.push_str(&r.to_string());
                reports.push(json!({
                    "id": r.id,
                    "title": r.title,
                    "passed": r.passed(),
                    "checks": r.checks.iter().map(|c| json!({
                        "label": c.label, "passed": c.passed, "detail": c.detail,
                    })).collect::<Vec<_>>(),
                }));
            }
            Ok(out(opts, text, json!(reports), if ok { DECIDED } else { FAILED }))
        }
    }
}
