use std::sync::Arc;

use mmforge::cache::Cache;
use mmforge::construction::{construct, find_mm_witness, MMWitness};
use mmforge::criteria::{condition_registry, threshold_registry, CheckEnv, ConditionReport, Mode};
use mmforge::field::{embed, make_field_q};
use mmforge::integer::{FactorBudget, Factorizer};
use mmforge::normality::{group_order_factorization, is_completely_normal, is_primitive};
use mmforge::survey::{exceptions, table, verify, FilterVariant};

#[test]
fn registries_expose_every_strategy() {
    let conditions: Vec<_> = condition_registry().names().collect();
    assert_eq!(conditions, vec!["eq-7.1", "eq-7.2", "eq-7.3", "thm-main-exact"]);
    let thresholds: Vec<_> = threshold_registry().names().collect();
    assert_eq!(thresholds, vec!["eq-7.1", "eq-7.3"]);
}

#[test]
fn every_condition_report_recomputes_from_its_provenance() {
    let env = CheckEnv::default();
    for (name, cond) in condition_registry().iter() {
        for (q, n1, n2) in [(2u64, 2u64, 3u64), (17, 3, 4), (5, 2, 7)] {
            let r = cond.check(&env, q, n1, n2, Mode::Exact).unwrap();
            let json = serde_json::to_string(&r).unwrap();
            let back: ConditionReport = serde_json::from_str(&json).unwrap();
            assert_eq!(back.recompute().unwrap(), r.holds, "{name} q={q}");
        }
    }
}

#[test]
fn survey_with_file_cache_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.csv");
    let run = || {
        let cache = Arc::new(Cache::open(&path).unwrap());
        let env = CheckEnv { factorizer: Factorizer::new(FactorBudget::default(), Some(cache)) };
        let rows = table(2, 2, 19).unwrap();
        let mut recs = exceptions(&rows, FilterVariant::Plain).unwrap();
        let summary = verify(&mut recs, &env).unwrap();
        (serde_json::to_string(&recs).unwrap(), summary)
    };
    let (first, s1) = run();
    assert!(std::fs::metadata(&path).unwrap().len() > 0);
    let (second, s2) = run();
    assert_eq!(first, second);
    assert_eq!(s1, s2);
    assert_eq!(s1.total, 195);
}

#[test]
fn witness_round_trips_and_reverifies() {
    let w = find_mm_witness(3, 6, (2, 3)).unwrap();
    let json = serde_json::to_string(&w).unwrap();
    let back: MMWitness = serde_json::from_str(&json).unwrap();
    let big = make_field_q(3, 6, None).unwrap();
    assert_eq!(big.modulus(), back.field.modulus.as_slice());
    let x = big.element(back.witness).unwrap();
    let order = group_order_factorization(&big).unwrap();
    assert!(is_primitive(&big, &x, &order).unwrap());
    assert!(is_completely_normal(&big, &x).unwrap());
}

#[test]
fn constructed_translates_live_in_the_big_field() {
    let (big, set) = construct(2, 12).unwrap();
    assert_eq!(set.parts.iter().map(|p| p.degree).collect::<Vec<_>>(), vec![4, 3]);
    assert!(set.all_completely_normal());
    // the product is the embedded parts multiplied together
    let theta = set.parts.iter().fold(big.one(), |acc, p| {
        let sub = make_field_q(2, p.degree, None).unwrap();
        let a = sub.element(p.coeffs.clone()).unwrap();
        big.mul(&acc, &embed(&sub, &a, &big).unwrap())
    });
    assert_eq!(theta, set.theta);
}
