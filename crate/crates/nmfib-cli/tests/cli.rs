use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn systems() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems")
}

fn nmfib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nmfib")).current_dir(systems()).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn entail_two_negations_fails_with_countermodel() {
    let o = nmfib(&[
        "entail",
        "--system",
        "matrices/two_neg_product.json",
        "--premises",
        "neg(p)",
        "--conclusion",
        "sim(p)",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("FAILS"));
    let rest: Vec<&str> = lines.collect();
    assert!(rest.iter().all(|l| l.contains(" ↦ ")), "{out}");
    assert!(rest.contains(&"neg(p) ↦ (1,1)"));
    assert!(rest.iter().any(|l| l.starts_with("sim(p) ↦ ") && !l.ends_with("(1,1)")));
}

#[test]
fn entail_with_rules_holds() {
    let o = nmfib(&[
        "entail",
        "--system",
        "matrices/two_neg_product.json",
        "--rules",
        "calculi/neg_pair.json",
        "--saturated",
        "--premises",
        "neg(p)",
        "--conclusion",
        "sim(p)",
    ]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "HOLDS\n"));
}

#[test]
fn classify_conjunction() {
    let o = nmfib(&["classify", "--arity", "2", "--table", "0001"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "projection-conjunction J={1,2}; truth-preserving\n");
}

#[test]
fn decide_recovery_verdicts() {
    let o = nmfib(&["decide-recovery", "fragments/biimp.json", "fragments/bot.json"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "CLASSICAL (condition c)\n"));
    let o = nmfib(&["decide-recovery", "fragments/and.json", "fragments/amp.json"]);
    assert_eq!(stdout(&o), "CLASSICAL (condition b)\n");
    let o = nmfib(&["decide-recovery", "fragments/neg.json", "fragments/sim.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("SUBCLASSICAL\nsequent: "));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["--json", "decide-recovery", "fragments/or.json", "fragments/bar.json"][..],
        &["--json", "kdet", "fragments/or.json", "fragments/bar.json"][..],
        &["product", "matrices/neg3.json", "matrices/sim3.json"][..],
        &["reproduce", "two_neg"][..],
    ] {
        let a = nmfib(args);
        let b = nmfib(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_verdict_is_valid_json() {
    let o = nmfib(&["--json", "decide-recovery", "fragments/neg.json", "fragments/bot.json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "subclassical");
    assert!(v["witness"]["countermodel"].is_object());
}

#[test]
fn product_reproduces_bundled_matrix() {
    let o = nmfib(&["product", "matrices/neg3.json", "matrices/sim3.json"]);
    assert_eq!(code(&o), 0);
    let bundled = fs::read_to_string(systems().join("matrices/two_neg_product.json")).unwrap();
    assert_eq!(stdout(&o), bundled);
}

#[test]
fn power_and_translate_emit_systems() {
    let o = nmfib(&["power", "fragments/or.json", "-n", "2"]);
    let bundled = fs::read_to_string(systems().join("matrices/or_squared.json")).unwrap();
    assert_eq!(stdout(&o), bundled);
    let o = nmfib(&["translate", "fragments/or_neg.json", "--def", "imp/2=or(neg(p1),p2)"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cells = v["interpretation"]["imp"].as_array().unwrap();
    let outs: Vec<&str> = cells.iter().map(|c| c["out"][0].as_str().unwrap()).collect();
    assert_eq!(outs, ["1", "1", "0", "1"]);
}

#[test]
fn size_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_nmfib"))
        .current_dir(systems())
        .env("NMFIB_SIZE_CAP", "3")
        .args(["product", "matrices/neg3.json", "matrices/sim3.json"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn derive_found_and_bound_report() {
    let o = nmfib(&[
        "derive",
        "--calculus",
        "calculi/neg_pair.json",
        "--premises",
        "neg(p)",
        "--goal",
        "sim(p)",
        "--universe-depth",
        "2",
        "--steps",
        "10000",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("DERIVED in 2 steps\n"));
    let o = nmfib(&["derive", "--builtin", "neg_pair", "--premises", "neg(p)", "--goal", "neg(q)"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("NOT FOUND"));
}

#[test]
fn certify_yes_and_no() {
    let base = ["certify", "--frag1", "fragments/neg.json", "--frag2", "fragments/sim.json"];
    let mut yes = base.to_vec();
    yes.extend(["--rules", "calculi/neg_pair.json", "--premises", "neg(p)", "--goal", "sim(p)"]);
    let o = nmfib(&yes);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("YES\n"));
    let mut no = base.to_vec();
    no.extend(["--premises", "neg(p)", "--goal", "sim(p)"]);
    let o = nmfib(&no);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("NO (countermodel at power 2)\n"));
}

#[test]
fn fc_recovery_witness_kdet() {
    let o = nmfib(&["fc-recovery", "fragments/coimp.json", "fragments/top.json", "--nmax", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("RECOVERED"));
    let o = nmfib(&["fc-recovery", "fragments/or.json", "fragments/neg.json"]);
    assert_eq!(stdout(&o), "NOT RECOVERED\n");

    let o = nmfib(&["witness", "fragments/neg.json", "fragments/bot.json", "--depth", "2", "--power", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("sequent: ⊢ neg(bot)"));
    let o = nmfib(&["witness", "fragments/and.json", "fragments/amp.json"]);
    assert_eq!(code(&o), 2);

    let o = nmfib(&["kdet", "fragments/or.json", "fragments/bar.json", "--k", "1", "--power", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("NOT 1-DETERMINED"));
}

#[test]
fn clone_and_parse() {
    let o = nmfib(&["clone", "fragments/and_or_top_bot.json"]);
    assert!(stdout(&o).starts_with("INCOMPLETE (M)\n"));
    let o = nmfib(&["clone", "fragments/biimp_bot.json"]);
    assert!(stdout(&o).starts_with("INCOMPLETE (A)\n"));
    let o = nmfib(&["clone", "fragments/coimp_top.json"]);
    assert!(stdout(&o).starts_with("COMPLETE\n"));
    let o = nmfib(&["parse", "or(neg(p), and(q,p))", "--skeleton", "fragments/or.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("or(neg(p),and(q,p))\ndepth: 2\n"));
}

#[test]
fn reproduce_all_passes() {
    let o = nmfib(&["reproduce", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("[FAIL]"));
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = std::env::temp_dir().join(format!("nmfib-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let missing = dir.join("missing.json");
    fs::write(
        &missing,
        r#"{"signature":[{"name":"neg","arity":1}],"values":["0","1"],"designated":["1"],
            "interpretation":{"neg":[{"args":["0"],"out":["1"]}]}}"#,
    )
    .unwrap();
    let degenerate = dir.join("degenerate.json");
    fs::write(&degenerate, r#"{"signature":[],"values":["0","1"],"designated":[],"interpretation":{}}"#).unwrap();

    let o = nmfib(&["entail", "--system", missing.to_str().unwrap(), "--conclusion", "p"]);
    assert_eq!(code(&o), 1);
    let o = nmfib(&["entail", "--system", degenerate.to_str().unwrap(), "--conclusion", "p"]);
    assert_eq!(code(&o), 1);
    let o = nmfib(&["--allow-degenerate", "entail", "--system", degenerate.to_str().unwrap(), "--conclusion", "p"]);
    assert_eq!((code(&o), stdout(&o).lines().next()), (0, Some("FAILS")));
    let o = nmfib(&["classify", "--table", "011"]);
    assert_eq!(code(&o), 1);
    let o = nmfib(&["entail", "--system", "matrices/neg3.json", "--conclusion", "neg(p"]);
    assert_eq!(code(&o), 1);
    fs::remove_dir_all(&dir).ok();
}
