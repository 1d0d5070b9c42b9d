use std::collections::BTreeSet;

use nmfib::boolfun::{
    and, bot, classify, clone_closure_at_arity, iff, in_clone_and_top_bot, in_clone_biimp, in_clone_top, in_t0,
    post_predicates, threshold, top, BooleanFunction, FragmentSpec, PostClone,
};
use nmfib::semantics::{bounded_saturation_check, standard_pools, SaturationResult};
use proptest::prelude::*;

fn function(arities: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = BooleanFunction> {
    arities.prop_flat_map(|k| any::<u64>().prop_map(move |b| BooleanFunction::new(k, b & mask(k)).unwrap()))
}

fn mask(k: usize) -> u64 {
    if k == 6 {
        u64::MAX
    } else {
        (1u64 << (1 << k)) - 1
    }
}

fn all_of_arity(k: usize) -> impl Iterator<Item = BooleanFunction> {
    (0..=mask(k)).map(move |b| BooleanFunction::new(k, b).unwrap())
}

fn compose_sample() -> impl Strategy<Value = (BooleanFunction, Vec<BooleanFunction>)> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(k, m)| (function(k..=k), prop::collection::vec(function(m..=m), k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn classification_is_consistent(f in function(0..=5)) {
        let c = classify(&f);
        if c.top_like {
            prop_assert_eq!(c.projection_conjunction.clone(), Some(BTreeSet::new()));
        }
        prop_assert_eq!(c.very_significant, !c.bottom_like && c.projection_conjunction.is_none());
        if c.projection_conjunction.is_some() {
            prop_assert!(c.truth_preserving);
        }
        prop_assert_eq!(c.significant, !c.top_like && !c.bottom_like);
    }

    #[test]
    fn post_predicates_closed_under_composition((f, gs) in compose_sample()) {
        let h = f.compose(&gs);
        for c in PostClone::ALL {
            if c.holds(&post_predicates(&f)) && gs.iter().all(|g| c.holds(&post_predicates(g))) {
                prop_assert!(c.holds(&post_predicates(&h)), "{} not closed: {} {:?}", c, f, gs);
            }
        }
        for k in 1..=3 {
            if in_t0(&f, Some(k)) && gs.iter().all(|g| in_t0(g, Some(k))) {
                prop_assert!(in_t0(&h, Some(k)));
            }
        }
    }

    #[test]
    fn t0_levels_are_nested(f in function(1..=4), k in 1usize..=4) {
        if in_t0(&f, Some(k + 1)) {
            prop_assert!(in_t0(&f, Some(k)));
        }
        if in_t0(&f, None) {
            prop_assert!(in_t0(&f, Some(k)));
        }
    }

    #[test]
    fn table_string_round_trips(f in function(0..=6)) {
        prop_assert_eq!(BooleanFunction::from_table(&f.table_string()).unwrap(), f);
    }
}

#[test]
fn closed_form_clone_criteria_match_closure() {
    let gens = |names: &[(&str, BooleanFunction)]| {
        FragmentSpec::new(names.iter().map(|(n, f)| (*n, *f))).unwrap().generators()
    };
    let cases: [(&str, Vec<BooleanFunction>, fn(&BooleanFunction) -> bool); 3] = [
        ("top", gens(&[("top", top())]), in_clone_top),
        ("and/top/bot", gens(&[("and", and()), ("top", top()), ("bot", bot())]), in_clone_and_top_bot),
        ("iff", gens(&[("iff", iff())]), in_clone_biimp),
    ];
    for (label, g, criterion) in &cases {
        for k in 1..=3 {
            let closure: BTreeSet<BooleanFunction> = clone_closure_at_arity(g, k).unwrap().into_iter().collect();
            for f in all_of_arity(k) {
                assert_eq!(criterion(&f), closure.contains(&f), "{label}: {f}");
            }
        }
    }
}

#[test]
fn threshold_tables() {
    for k in 0..=4usize {
        for n in 0..=k {
            let t = threshold(k, n);
            for r in 0..1usize << k {
                assert_eq!(t.row(r), r.count_ones() as usize >= n, "T^{k}_{n} row {r}");
            }
        }
    }
}

#[test]
fn threshold_separates_t0_levels() {
    for k in 1..=4 {
        let t = threshold(k + 1, k);
        assert!(in_t0(&t, Some(k)), "k={k}");
        assert!(!in_t0(&t, Some(k + 1)), "k={k}");
    }
}

#[test]
fn saturation_matches_very_significance() {
    for k in 0..=2 {
        for f in all_of_arity(k) {
            let m = FragmentSpec::new([("c", f)]).unwrap().two_valued();
            let (premises, pool, depth) = standard_pools("c", k);
            let found = matches!(
                bounded_saturation_check(&m, depth, &premises, &pool).unwrap(),
                SaturationResult::Counterexample { .. }
            );
            assert_eq!(found, classify(&f).very_significant, "{f}");
        }
    }
}
