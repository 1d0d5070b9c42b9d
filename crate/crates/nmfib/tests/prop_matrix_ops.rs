mod common;

use common::{formula, formulas, isomorphic_via, matrix, sig};
use nmfib::matrix_ops::{power, strict_product, strict_product_with_pairs, translate_matrix, DEFAULT_SIZE_CAP};
use nmfib::semantics::{entails, Nmatrix, Value};
use nmfib::syntax::{Formula, Translation};
use proptest::prelude::*;

const S1: &[(&str, usize)] = &[("u", 1), ("b", 2)];
const S2: &[(&str, usize)] = &[("w", 1), ("k", 2)];
const VARS: &[&str] = &["p", "q"];

/// Bodies for `neg/1` and `and/2` over `target`.
fn translation(
    target: &'static [(&'static str, usize)],
    neg: &'static str,
    and: &'static str,
) -> BoxedStrategy<Translation> {
    (formula(target, &["p1"], 2), formula(target, &["p1", "p2"], 2))
        .prop_map(move |(b1, b2)| Translation::new().with(neg, b1).with(and, b2))
        .boxed()
}

fn pair() -> impl Strategy<Value = (Nmatrix, Nmatrix)> {
    (matrix(sig(S1), false), matrix(sig(S2), false))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_designation_law((m1, m2) in pair()) {
        let p = strict_product_with_pairs(&m1, &m2, DEFAULT_SIZE_CAP).unwrap();
        for (i, &(a, b)) in p.pairs.iter().enumerate() {
            prop_assert_eq!(m1.is_designated(a), m2.is_designated(b));
            prop_assert_eq!(p.matrix.is_designated(i as Value), m1.is_designated(a) && m2.is_designated(b));
            prop_assert_eq!(p.value_of(a, b), Some(i as Value));
        }
        let expected = (0..m1.len() as Value)
            .flat_map(|a| (0..m2.len() as Value).map(move |b| (a, b)))
            .filter(|&(a, b)| m1.is_designated(a) == m2.is_designated(b))
            .count();
        prop_assert_eq!(p.pairs.len(), expected);
    }

    #[test]
    fn components_are_conservative(
        (m1, m2) in pair(),
        g1 in formulas(S1, VARS, 2, 0..=2),
        phi1 in formula(S1, VARS, 2),
        g2 in formulas(S2, VARS, 2, 0..=2),
        phi2 in formula(S2, VARS, 2),
    ) {
        let prod = strict_product(&m1, &m2).unwrap();
        if entails(&m1, &g1, &phi1).unwrap().holds() {
            prop_assert!(entails(&prod, &g1, &phi1).unwrap().holds());
        }
        if entails(&m2, &g2, &phi2).unwrap().holds() {
            prop_assert!(entails(&prod, &g2, &phi2).unwrap().holds());
        }
    }

    #[test]
    fn translation_commutes_with_power(m in matrix(sig(S1), true), t in translation(S1, "neg", "and"), n in 1usize..=2) {
        let source = sig(&[("neg", 1), ("and", 2)]);
        let a = translate_matrix(&power(&m, n).unwrap(), &t, &source).unwrap();
        let b = power(&translate_matrix(&m, &t, &source).unwrap(), n).unwrap();
        prop_assert_eq!(a.values(), b.values());
        let id: Vec<Value> = (0..a.len() as Value).collect();
        prop_assert!(isomorphic_via(&a, &b, &id));
    }

    #[test]
    fn translation_transfers_entailment(
        m1 in matrix(sig(S1), true),
        m2 in matrix(sig(S2), true),
        t1 in translation(S1, "neg", "and"),
        t2 in translation(S2, "sim", "amp"),
        gamma in formulas(&[("neg", 1), ("and", 2), ("sim", 1), ("amp", 2)], VARS, 2, 0..=2),
        phi in formula(&[("neg", 1), ("and", 2), ("sim", 1), ("amp", 2)], VARS, 2),
    ) {
        let x1 = sig(&[("neg", 1), ("and", 2)]);
        let x2 = sig(&[("sim", 1), ("amp", 2)]);
        let translated = strict_product(
            &translate_matrix(&m1, &t1, &x1).unwrap(),
            &translate_matrix(&m2, &t2, &x2).unwrap(),
        )
        .unwrap();
        if entails(&translated, &gamma, &phi).unwrap().holds() {
            let mut t = t1.clone();
            for (n, body) in t2.iter() {
                t.insert(n, body.clone());
            }
            let tg: Vec<Formula> = gamma.iter().map(|g| g.translate(&t).unwrap()).collect();
            let prod = strict_product(&m1, &m2).unwrap();
            prop_assert!(entails(&prod, &tg, &phi.translate(&t).unwrap()).unwrap().holds());
        }
    }

    #[test]
    fn first_power_is_identity(m in matrix(sig(S1), false)) {
        prop_assert_eq!(power(&m, 1).unwrap(), m);
    }

    #[test]
    fn power_designates_tuples_of_designated(m in matrix(sig(S1), false)) {
        let sq = power(&m, 2).unwrap();
        let k = m.len() as Value;
        for i in 0..sq.len() as Value {
            prop_assert_eq!(sq.is_designated(i), m.is_designated(i / k) && m.is_designated(i % k));
        }
    }

    #[test]
    fn product_commutes_up_to_swap((m1, m2) in pair()) {
        let p12 = strict_product_with_pairs(&m1, &m2, DEFAULT_SIZE_CAP).unwrap();
        let p21 = strict_product_with_pairs(&m2, &m1, DEFAULT_SIZE_CAP).unwrap();
        let map: Vec<Value> = p12.pairs.iter().map(|&(a, b)| p21.value_of(b, a).unwrap()).collect();
        prop_assert!(isomorphic_via(&p12.matrix, &p21.matrix, &map));
    }
}
