use std::collections::BTreeSet;

use fano_mms::chow::{self, eval_class_expr, parse_class_expr, FamilyKind, FamilyParams, FiberwiseClass};
use fano_mms::families::{
    catalog, classification_table, condition_profile, generalized_k2_depth, tau_matrix, tau_pushforward, Caps,
    KCondition,
};
use fano_mms::exactmath::Rational;
use num_bigint::BigInt;

fn partitions(total: i64, max_part: i64) -> Vec<Vec<i64>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Closed forms written out independently of the engine.
fn dh_oracle(a_x: i64, a_q: i64, a_w: i64, m: i64) -> i64 {
    2 * m * (4 - a_x - 2 * a_q - 2 * a_w) + 2 * a_q
}

fn ds_oracle(a_x: i64, a_w: i64) -> i64 {
    8 - 2 * a_x - 4 * a_w
}

#[test]
fn chow_engine_matches_closed_forms_on_the_grid() {
    let k2_expr = parse_class_expr("K^2 L^(M-1)").unwrap();
    let mut checked = 0;
    for a_x in 0..=6 {
        for nz in partitions(a_x, a_x.max(1)) {
            for a_w in 0..=3 {
                for m in 2..=8 {
                    let l0 = (nz.len() as i64 - m).max(2);
                    for l in [l0, l0 + 1] {
                        for a_q in 0..=3 {
                            let fp = FamilyParams::double_hypersurface(&nz, a_q, a_w, m, l).unwrap();
                            assert_eq!(chow::k2_number(&fp), BigInt::from(dh_oracle(a_x, a_q, a_w, m)), "{fp}");
                            assert_eq!(chow::degree_v(&fp), BigInt::from(2 * m));
                            checked += 1;
                        }
                    }
                }
                let m0 = (nz.len() as i64).max(2);
                for big_m in [m0, m0 + 1] {
                    let fp = FamilyParams::double_space(&nz, a_w, big_m).unwrap();
                    assert_eq!(chow::k2_number(&fp), BigInt::from(ds_oracle(a_x, a_w)), "{fp}");
                    assert_eq!(eval_class_expr(&k2_expr, &fp).unwrap(), BigInt::from(ds_oracle(a_x, a_w)));
                    assert_eq!(chow::degree_v(&fp), BigInt::from(2));
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 6960);
}

#[test]
fn expression_evaluator_agrees_with_k2_number() {
    let e = parse_class_expr("K^2 L^(M-1)").unwrap();
    for s in ["((0),(2,0)),m=4", "((1,1,1),(0,0)),m=3", "((2),(1,0)),m=7,l=3"] {
        let fp: FamilyParams = s.parse().unwrap();
        assert_eq!(eval_class_expr(&e, &fp).unwrap(), chow::k2_number(&fp), "{s}");
    }
    let fp: FamilyParams = "((0),(2,0)),m=4".parse().unwrap();
    assert_eq!(eval_class_expr(&e, &fp).unwrap(), BigInt::from(4));
}

const DH_LIST: [&str; 8] = [
    "((0),(2,0))",
    "((0),(1,1))",
    "((1),(0,1))",
    "((2),(1,0))",
    "((2),(0,0))",
    "((3),(0,0))",
    "((1,2),(0,0))",
    "((1,1,1),(0,0))",
];
const DS_LIST: [&str; 5] = ["((1),1)", "((2),0)", "((3),0)", "((1,2),0)", "((1,1,1),0)"];

#[test]
fn default_caps_reproduce_both_lists() {
    let t = classification_table(&Caps::default()).unwrap();
    let dh: BTreeSet<_> = t.studied(FamilyKind::DoubleHypersurface).iter().map(|r| r.family.clone()).collect();
    let ds: BTreeSet<_> = t.studied(FamilyKind::DoubleSpace).iter().map(|r| r.family.clone()).collect();
    assert_eq!(dh, DH_LIST.iter().map(|s| s.to_string()).collect());
    assert_eq!(ds, DS_LIST.iter().map(|s| s.to_string()).collect());
    assert!(t.missing.is_empty());
    assert!(t.studied_certified());
    for r in t.studied(FamilyKind::DoubleHypersurface) {
        if r.catalog_type == "1" {
            assert_eq!(r.k_condition, "fails");
        } else {
            assert!(r.k_condition.starts_with("holds"), "{r:?}");
        }
    }
}

#[test]
fn classification_is_deterministic() {
    let a = serde_json::to_string(&classification_table(&Caps::default()).unwrap()).unwrap();
    let b = serde_json::to_string(&classification_table(&Caps::default()).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn all_catalog_families_have_depth_at_most_two() {
    for e in catalog() {
        let fams: Vec<FamilyParams> = match e.kind {
            FamilyKind::DoubleHypersurface => {
                (2..=12).map(|m| format!("{},m={m}", e.signature).parse().unwrap()).collect()
            }
            FamilyKind::DoubleSpace => vec![e.signature.parse().unwrap()],
        };
        for fp in fams {
            let d = generalized_k2_depth(&fp);
            assert!(d <= Rational::from_integer(2.into()), "{fp}: {d}");
            let p = condition_profile(&fp).unwrap();
            assert!(p.depth2_ok && !p.k2_holds);
            let fails = matches!(p.k_condition, KCondition::CertifiedFails { .. });
            assert_eq!(fails, e.label == "1", "{fp}");
        }
    }
}

#[test]
fn tau_is_an_involution_preserving_the_form() {
    for m in 2..=9 {
        let t = tau_matrix(m);
        let sq = [
            [t[0][0] * t[0][0] + t[0][1] * t[1][0], t[0][0] * t[0][1] + t[0][1] * t[1][1]],
            [t[1][0] * t[0][0] + t[1][1] * t[1][0], t[1][0] * t[0][1] + t[1][1] * t[1][1]],
        ];
        assert_eq!(sq, [[1, 0], [0, 1]]);
        let fp: FamilyParams = format!("((0),(2,0)),m={m}").parse().unwrap();
        let basis = [FiberwiseClass::L, FiberwiseClass::F, FiberwiseClass::divisor(2, -3)];
        for a in &basis {
            let ta = tau_pushforward(a, m).unwrap();
            assert_eq!(tau_pushforward(&ta, m).unwrap(), *a);
            for b in &basis {
                let tb = tau_pushforward(b, m).unwrap();
                let before = chow::top_intersection_v(&pair_with_l(a, b, &fp), &fp).unwrap();
                let after = chow::top_intersection_v(&pair_with_l(&ta, &tb, &fp), &fp).unwrap();
                assert_eq!(before, after, "m={m}");
            }
        }
        // −K = L is fixed
        assert_eq!(tau_pushforward(&FiberwiseClass::L, m).unwrap(), FiberwiseClass::L);
    }
}

fn pair_with_l(a: &FiberwiseClass, b: &FiberwiseClass, fp: &FamilyParams) -> Vec<FiberwiseClass> {
    let mut v = vec![*a, *b];
    v.extend(std::iter::repeat(FiberwiseClass::L).take(fp.big_m() as usize - 1));
    v
}
