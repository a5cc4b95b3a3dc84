//! Invariant suites over exhaustively enumerable fields, selectable by name.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{as_indicator, max_incomplete_sum_ratio, CharacterTable, TOLERANCE};
use crate::construction::completely_normal_elements;
use crate::criteria::{is_completely_basic, is_regular, largest_failing_n2};
use crate::error::Result;
use crate::field::{make_field_q, Element, Embedding, FieldCtx};
use crate::integer::modular::{euler_phi_u64, factor_u64, prime_power};
use crate::normality::{
    group_order_factorization, is_completely_normal, is_normal, is_primitive, DivisorOracle,
};
use crate::registry::Registry;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Outcome { name: name.into(), passed, detail }
    }
}

/// All `(q, n)` with `q^n ≤ bound`, `q` a prime power, ordered by `(q^n, q)`.
pub fn fields_up_to(bound: u64) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for q in 2..=bound {
        if prime_power(q).is_none() {
            continue;
        }
        let mut size = q;
        let mut n = 1;
        while size <= bound {
            out.push((q, n));
            n += 1;
            size = match size.checked_mul(q) {
                Some(s) => s,
                None => break,
            };
        }
    }
    out.sort_by_key(|&(q, n)| (q.pow(n as u32), q));
    out
}

/// Preimages of the embedded copy of `F_{q^d}` inside `big`.
fn preimage_map(big: &FieldCtx, d: usize) -> Result<(FieldCtx, HashMap<Element, Element>)> {
    let sub = make_field_q(big.q(), d, None)?;
    let emb = Embedding::new(&sub, big)?;
    let map = sub.elements().map(|x| (emb.apply(big, &x), x)).collect();
    Ok((sub, map))
}

/// `ω` is the primitivity indicator on nonzero elements and `Ω_d` the
/// normality indicator of `F_{q^d}/F_q` on each subfield.
pub fn check_characteristic_functions(sizes: &[u64]) -> Result<Outcome> {
    let mut fields = 0;
    let mut evaluations = 0u64;
    let mut bad = Vec::new();
    for (q, n) in fields_up_to(*sizes.iter().max().unwrap_or(&0)) {
        if !sizes.contains(&q.pow(n as u32)) {
            continue;
        }
        fields += 1;
        let ctx = make_field_q(q, n, None)?;
        let table = CharacterTable::build(&ctx)?;
        let order = group_order_factorization(&ctx)?;
        for a in ctx.elements().skip(1) {
            evaluations += 1;
            if as_indicator(table.omega_complex(&a)) != Some(is_primitive(&ctx, &a, &order)?) {
                bad.push(format!("omega q={q} n={n} a={a:?}"));
            }
        }
        for &d in ctx.subfield_degrees() {
            let (sub, pre) = preimage_map(&ctx, d)?;
            for (image, x) in &pre {
                evaluations += 1;
                let expected = is_normal(&sub, x, 1)?;
                if as_indicator(table.omega_normal_complex(image, d)?) != Some(expected) {
                    bad.push(format!("Omega_{d} q={q} n={n} b={image:?}"));
                }
            }
        }
    }
    Ok(Outcome::new(
        "characteristic functions",
        bad.is_empty(),
        format!("{fields} fields, {evaluations} evaluations, {} mismatches (tolerance {TOLERANCE}) {bad:?}", bad.len()),
    ))
}

/// `|Σ_{a ∈ F_q} χ(θ + a)ψ(a)| ≤ n√q` for all generators and nontrivial pairs.
pub fn check_character_sum_bound(cases: &[(u64, usize)]) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &(q, n) in cases {
        let table = CharacterTable::build(&make_field_q(q, n, None)?)?;
        worst = worst.max(max_incomplete_sum_ratio(&table)?);
    }
    Ok(Outcome::new(
        "incomplete character sum bound",
        worst <= 1.0 + TOLERANCE,
        format!("{} fields, largest |sum|/(n sqrt q) = {worst:.6}", cases.len()),
    ))
}

/// Number of `b ∈ F_{q^{n2}}` with `b` normal over `F_q` and `ab + 1`
/// primitive, counted directly.
pub fn direct_count(big: &FieldCtx, a: &Element, n2: usize) -> Result<u64> {
    let (sub, pre) = preimage_map(big, n2)?;
    let order = group_order_factorization(big)?;
    let mut count = 0;
    for (b, x) in &pre {
        let w = big.add(&big.mul(a, b), &big.one());
        if !w.is_zero() && is_normal(&sub, x, 1)? && is_primitive(big, &w, &order)? {
            count += 1;
        }
    }
    Ok(count)
}

/// The character expression for the count equals the direct count plus
/// `θ(q')·Ω_{n2}(-a^{-1})`, the contribution of `ab + 1 = 0` under `χ_0(0) = 1`.
pub fn check_count_identity(cases: &[(u64, usize, usize)]) -> Result<Outcome> {
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for &(q, n1, n2) in cases {
        let big = make_field_q(q, n1 * n2, None)?;
        let table = CharacterTable::build(&big)?;
        let (sub1, _) = preimage_map(&big, n1)?;
        let emb = Embedding::new(&sub1, &big)?;
        let order = (big.size_u64().unwrap_or(0)).saturating_sub(1);
        let rad: u64 = factor_u64(order).iter().map(|&(r, _)| r).product();
        let theta = euler_phi_u64(rad) as f64 / rad as f64;
        for a in completely_normal_elements(&sub1)? {
            let a = emb.apply(&big, &a);
            let via = table.count_via_characters(&a, n1, n2)?;
            let minus_inv = big.neg(&big.inv(&a)?);
            let extra = if big.in_subfield(&minus_inv, n2)? {
                theta * table.omega_normal(&minus_inv, n2)?
            } else {
                0.0
            };
            let direct = direct_count(&big, &a, n2)? as f64;
            worst = worst.max((via - direct - extra).abs());
            checked += 1;
        }
    }
    Ok(Outcome::new(
        "count identity",
        checked > 0 && worst < 1e-4,
        format!("{checked} elements a, largest deviation {worst:.2e}"),
    ))
}

/// Outcome of the product-translate sweep on one field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCase {
    pub q: u64,
    pub n: usize,
    /// Products `θ = Π a_i` formed.
    pub thetas: usize,
    /// Translates `θ + c` checked.
    pub checked: usize,
    /// Translates that are not completely normal.
    pub failures: usize,
    /// Failures whose trace `Tr_{q^n/q}` is zero.
    pub trace_zero_failures: usize,
    pub characteristic_divides_n: bool,
}

/// Every product of completely normal prime-power-degree parts, plus every
/// `c ∈ F_q`, tested for complete normality.
pub fn construction_sweep(cases: &[(u64, usize)]) -> Result<Vec<ConstructionCase>> {
    let mut out = Vec::new();
    for &(q, n) in cases {
        let big = make_field_q(q, n, None)?;
        let mut lists: Vec<(Embedding, Vec<Element>)> = Vec::new();
        for (r, e) in factor_u64(n as u64) {
            let sub = make_field_q(q, r.pow(e) as usize, None)?;
            let emb = Embedding::new(&sub, &big)?;
            lists.push((emb, completely_normal_elements(&sub)?));
        }
        // every combination of one completely normal element per part
        let mut thetas = vec![big.one()];
        for (emb, cn) in &lists {
            thetas = thetas
                .iter()
                .flat_map(|t| cn.iter().map(move |a| (t, a)))
                .map(|(t, a)| big.mul(t, &emb.apply(&big, a)))
                .collect();
        }
        let cs = big.base_field_elements();
        let bigr = &big;
        let verdicts: Vec<(bool, bool)> = thetas
            .par_iter()
            .flat_map_iter(|t| cs.iter().map(move |c| bigr.add(t, c)))
            .map(|x| -> Result<(bool, bool)> {
                Ok((is_completely_normal(bigr, &x)?, bigr.trace(&x, n, 1)?.is_zero()))
            })
            .collect::<Result<_>>()?;
        out.push(ConstructionCase {
            q,
            n,
            thetas: thetas.len(),
            checked: verdicts.len(),
            failures: verdicts.iter().filter(|v| !v.0).count(),
            trace_zero_failures: verdicts.iter().filter(|v| !v.0 && v.1).count(),
            characteristic_divides_n: n as u64 % big.p() == 0,
        });
    }
    Ok(out)
}

pub fn check_construction_theorem(cases: &[(u64, usize)]) -> Result<Outcome> {
    let sweep = construction_sweep(cases)?;
    let checked: usize = sweep.iter().map(|c| c.checked).sum();
    let failures: usize = sweep.iter().map(|c| c.failures).sum();
    let bad: Vec<String> = sweep
        .iter()
        .filter(|c| c.failures > 0)
        .map(|c| {
            format!(
                "q={} n={}: {} of {} translates fail ({} with zero trace, {} products)",
                c.q, c.n, c.failures, c.checked, c.trace_zero_failures, c.thetas
            )
        })
        .collect();
    Ok(Outcome::new(
        "product-translate construction",
        failures == 0 && checked > 0,
        format!("{checked} elements checked, {failures} counterexamples {bad:?}"),
    ))
}

/// `is_completely_basic` against the element-level definition.
pub fn check_classifier(bound: u64) -> Result<Outcome> {
    let fields = fields_up_to(bound);
    let mismatches: Vec<String> = fields
        .par_iter()
        .filter_map(|&(q, n)| {
            let run = || -> Result<Option<String>> {
                let ctx = make_field_q(q, n, None)?;
                let predicted = is_completely_basic(q, n as u64)?;
                let mut all_cn = true;
                for a in ctx.elements().skip(1) {
                    if is_normal(&ctx, &a, 1)? && !is_completely_normal(&ctx, &a)? {
                        all_cn = false;
                        break;
                    }
                }
                Ok((all_cn != predicted).then(|| format!("q={q} n={n} predicted {predicted}")))
            };
            run().unwrap_or_else(|e| Some(format!("q={q} n={n}: {e}")))
        })
        .collect();
    let basic = fields.iter().filter(|&&(q, n)| is_completely_basic(q, n as u64).unwrap_or(false)).count();
    Ok(Outcome::new(
        "completely basic classifier",
        mismatches.is_empty(),
        format!(
            "{} fields with q^n <= {bound} ({basic} completely basic), {} mismatches {mismatches:?}",
            fields.len(),
            mismatches.len()
        ),
    ))
}

/// The gcd criterion and the divisor criterion agree on every element.
pub fn check_normality_criteria(bound: u64) -> Result<Outcome> {
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for (q, n) in fields_up_to(bound) {
        if n == 1 {
            continue;
        }
        let ctx = make_field_q(q, n, None)?;
        for &d in ctx.subfield_degrees() {
            let oracle = DivisorOracle::new(&ctx, d)?;
            for a in ctx.elements() {
                checked += 1;
                if is_normal(&ctx, &a, d)? != oracle.is_normal(&a)? {
                    bad.push(format!("q={q} n={n} d={d} {a:?}"));
                }
            }
        }
    }
    Ok(Outcome::new(
        "normality criteria agree",
        bad.is_empty(),
        format!("{checked} element checks, {} disagreements {bad:?}", bad.len()),
    ))
}

/// Counts of normal elements equal `Φ_q(x^n - 1)`, the number of units of
/// `F_q[x]/(x^n - 1)`.
pub fn check_normal_counts(bound: u64) -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut fields = 0;
    for (q, n) in fields_up_to(bound) {
        let ctx = make_field_q(q, n, None)?;
        let count = ctx.elements().filter(|a| is_normal(&ctx, a, 1).unwrap_or(false)).count() as u64;
        let s = crate::cyclo::cyclo_summary(q, n as u64)?;
        let factors: Vec<(u64, u32)> = s
            .factor_degrees
            .iter()
            .flat_map(|(&d, &c)| std::iter::repeat((d, 1)).take(c as usize))
            .collect();
        let phi = crate::cyclo::poly_mult_functions(q, &factors)?.phi_q;
        // x^n - 1 = (x^m - 1)^(n/m): the repeated part contributes q^(n - m)
        let expected = phi * num_bigint::BigUint::from(q).pow((n as u64 - s.m) as u32);
        fields += 1;
        if num_bigint::BigUint::from(count) != expected {
            bad.push(format!("q={q} n={n}: {count} vs {expected}"));
        }
    }
    Ok(Outcome::new(
        "normal element counts",
        bad.is_empty(),
        format!("{fields} fields, {} mismatches {bad:?}", bad.len()),
    ))
}

/// Normal `a1 ∈ F_{q^{n1}}`, `a2 ∈ F_{q^{n2}}`, coprime degrees: `a1a2 + c` normal.
pub fn check_product_lemma(bound: u64) -> Result<Outcome> {
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for (q, n) in fields_up_to(bound) {
        for n1 in 2..n {
            let n2 = n / n1;
            if n1 * n2 != n || n2 < 2 || num_integer::gcd(n1, n2) != 1 {
                continue;
            }
            let big = make_field_q(q, n, None)?;
            let (f1, _) = preimage_map(&big, n1)?;
            let (f2, _) = preimage_map(&big, n2)?;
            let (e1, e2) = (Embedding::new(&f1, &big)?, Embedding::new(&f2, &big)?);
            let normals = |f: &FieldCtx| -> Vec<Element> { f.elements().filter(|a| is_normal(f, a, 1).unwrap_or(false)).collect() };
            let cs = big.base_field_elements();
            for a1 in normals(&f1) {
                for a2 in normals(&f2) {
                    let t = big.mul(&e1.apply(&big, &a1), &e2.apply(&big, &a2));
                    for c in &cs {
                        checked += 1;
                        if !is_normal(&big, &big.add(&t, c), 1)? {
                            bad.push(format!("q={q} n1={n1} n2={n2}"));
                        }
                    }
                }
            }
        }
    }
    Ok(Outcome::new(
        "normal product lemma",
        bad.is_empty() && checked > 0,
        format!("{checked} products checked, {} failures", bad.len()),
    ))
}

/// Completely basic extensions are regular.
pub fn check_basic_implies_regular(q_max: u64, n_max: u64) -> Result<Outcome> {
    let mut bad = Vec::new();
    for q in (2..=q_max).filter(|&q| prime_power(q).is_some()) {
        for n in 1..=n_max {
            if is_completely_basic(q, n)? && !is_regular(q, n)? {
                bad.push((q, n));
            }
        }
    }
    Ok(Outcome::new("completely basic implies regular", bad.is_empty(), format!("{bad:?}")))
}

/// Spot values of the table thresholds.
pub fn check_threshold_examples() -> Result<Outcome> {
    let cases = [(17u64, 3u64, "eq-7.1", 3723u64), (463, 3, "eq-7.1", 68), (2, 3, "eq-7.3", 1666), (2, 2, "eq-7.3", 302)];
    let mut bad = Vec::new();
    for (q, n1, v, want) in cases {
        let got = largest_failing_n2(q, n1, v)?.n2;
        if got != want {
            bad.push(format!("q={q} n1={n1}: {got} != {want}"));
        }
    }
    Ok(Outcome::new("threshold examples", bad.is_empty(), format!("{bad:?}")))
}

/// A named group of checks.
pub trait Suite: Send + Sync {
    fn describe(&self) -> &'static str;
    fn run(&self) -> Result<Vec<Outcome>>;
}

struct Characters;
impl Suite for Characters {
    fn describe(&self) -> &'static str {
        "characteristic functions, incomplete sums, and the count identity"
    }
    fn run(&self) -> Result<Vec<Outcome>> {
        Ok(vec![
            check_characteristic_functions(&[4, 8, 9, 16, 25, 27])?,
            check_character_sum_bound(&[(2, 2), (2, 3), (3, 2)])?,
            check_count_identity(&[(2, 2, 3)])?,
        ])
    }
}

struct Lemmas;
impl Suite for Lemmas {
    fn describe(&self) -> &'static str {
        "normal product lemma and the product-translate construction"
    }
    fn run(&self) -> Result<Vec<Outcome>> {
        Ok(vec![check_product_lemma(1 << 12)?, check_construction_theorem(&[(2, 6), (3, 6), (4, 6)])?])
    }
}

struct Normality;
impl Suite for Normality {
    fn describe(&self) -> &'static str {
        "gcd and divisor normality criteria, normal element counts"
    }
    fn run(&self) -> Result<Vec<Outcome>> {
        Ok(vec![check_normality_criteria(1 << 8)?, check_normal_counts(1 << 10)?])
    }
}

struct Criteria;
impl Suite for Criteria {
    fn describe(&self) -> &'static str {
        "completely basic classifier, regularity, thresholds"
    }
    fn run(&self) -> Result<Vec<Outcome>> {
        Ok(vec![
            check_classifier(1 << 10)?,
            check_basic_implies_regular(16, 64)?,
            check_threshold_examples()?,
        ])
    }
}

pub fn suite_registry() -> Registry<dyn Suite> {
    let mut reg: Registry<dyn Suite> = Registry::new("selftest suite");
    reg.register("characters", Box::new(Characters))
        .register("lemmas", Box::new(Lemmas))
        .register("normality", Box::new(Normality))
        .register("criteria", Box::new(Criteria));
    reg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_enumeration() {
        let f = fields_up_to(16);
        assert_eq!(
            f,
            vec![(2, 1), (3, 1), (2, 2), (4, 1), (5, 1), (7, 1), (2, 3), (8, 1), (3, 2), (9, 1), (11, 1), (13, 1), (2, 4), (4, 2), (16, 1)]
        );
    }

    #[test]
    fn direct_count_in_f64() {
        let big = make_field_q(2, 6, None).unwrap();
        let (f1, _) = preimage_map(&big, 2).unwrap();
        let a = Embedding::new(&f1, &big).unwrap().apply(&big, &f1.generator_root());
        // b ranges over the 3 normal elements of F_8
        assert!(direct_count(&big, &a, 3).unwrap() <= 3);
    }

    #[test]
    fn construction_sweep_isolates_trace_zero_translates() {
        let sweep = construction_sweep(&[(2, 6), (5, 6)]).unwrap();
        assert_eq!(sweep[0].failures, 0);
        let c = &sweep[1];
        assert!(!c.characteristic_divides_n);
        assert_eq!((c.thetas, c.failures, c.trace_zero_failures), (16 * 96, 16 * 96, 16 * 96));
    }

    #[test]
    fn registry_names() {
        let names: Vec<_> = suite_registry().names().collect();
        assert_eq!(names, vec!["characters", "criteria", "lemmas", "normality"]);
        assert!(suite_registry().get("bogus").is_err());
    }

    #[test]
    fn small_checks_pass() {
        for o in [
            check_characteristic_functions(&[4, 8]).unwrap(),
            check_count_identity(&[(2, 2, 3)]).unwrap(),
            check_classifier(64).unwrap(),
            check_normal_counts(64).unwrap(),
            check_construction_theorem(&[(2, 6)]).unwrap(),
        ] {
            assert!(o.passed, "{o:?}");
        }
    }
}
