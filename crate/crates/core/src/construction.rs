//! Completely normal elements as products of completely normal elements of
//! coprime-degree subfields plus a translate, and the witness search for
//! elements that are both primitive and completely normal.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{check_main_condition, pcb_decompositions, CheckEnv, MainMode};
use crate::error::{Error, Result};
use crate::field::{make_field_q, Element, Embedding, FieldCtx};
use crate::integer::modular::factor_u64;
use crate::normality::{
    group_order_factorization, is_completely_normal, is_normal, is_normal_by_divisors, is_primitive, mult_order,
};

/// Largest field scanned element by element.
pub const SEARCH_CAP: u64 = 1 << 24;

const SCAN_CHUNK: u64 = 1 << 10;

fn scan_size(ctx: &FieldCtx) -> Result<u64> {
    match ctx.size_u64() {
        Some(s) if s <= SEARCH_CAP => Ok(s),
        _ => Err(Error::CapExceeded {
            what: "element scan",
            size: ctx.size().to_string(),
            cap: SEARCH_CAP.to_string(),
        }),
    }
}

/// The least (by index) completely normal element.
pub fn find_completely_normal(ctx: &FieldCtx) -> Result<Element> {
    let size = scan_size(ctx)?;
    for i in 1..size {
        let a = ctx.element_at(i);
        if is_completely_normal(ctx, &a)? {
            return Ok(a);
        }
    }
    Err(Error::Precondition(format!("no completely normal element in {ctx:?}")))
}

/// Every completely normal element, in index order.
pub fn completely_normal_elements(ctx: &FieldCtx) -> Result<Vec<Element>> {
    let size = scan_size(ctx)?;
    (1..size)
        .into_par_iter()
        .map(|i| {
            let a = ctx.element_at(i);
            Ok(is_completely_normal(ctx, &a)?.then_some(a))
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

/// A factor of a product: an element of its own subfield model.
#[derive(Clone, Debug)]
pub struct Part {
    pub ctx: FieldCtx,
    pub element: Element,
}

/// Embeddings of the parts into `big`, after checking that each part is
/// completely normal and that the degrees are pairwise coprime with product `n`.
fn prepare(big: &FieldCtx, parts: &[Part]) -> Result<Vec<Embedding>> {
    if parts.is_empty() {
        return Err(Error::InvalidParameter("no parts".into()));
    }
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            if num_integer::gcd(a.ctx.n(), b.ctx.n()) != 1 {
                return Err(Error::Precondition(format!(
                    "part degrees {} and {} are not coprime",
                    a.ctx.n(),
                    b.ctx.n()
                )));
            }
        }
    }
    let total: usize = parts.iter().map(|p| p.ctx.n()).product();
    if total != big.n() {
        return Err(Error::Precondition(format!("part degrees multiply to {total}, not {}", big.n())));
    }
    parts
        .iter()
        .map(|part| {
            if !is_completely_normal(&part.ctx, &part.element)? {
                return Err(Error::Precondition(format!(
                    "part {:?} is not completely normal in degree {}",
                    part.element,
                    part.ctx.n()
                )));
            }
            Embedding::new(&part.ctx, big)
        })
        .collect()
}

fn product(big: &FieldCtx, parts: &[Part], embeddings: &[Embedding]) -> Element {
    parts
        .iter()
        .zip(embeddings)
        .fold(big.one(), |acc, (part, e)| big.mul(&acc, &e.apply(big, &part.element)))
}

/// `Π embed(a_i) + c` in `big`, with `c ∈ F_q`.
pub fn product_translate(big: &FieldCtx, parts: &[Part], c: &Element) -> Result<Element> {
    if !big.in_subfield(c, 1)? {
        return Err(Error::Precondition("translate must lie in the base field".into()));
    }
    let embeddings = prepare(big, parts)?;
    Ok(big.add(&product(big, parts, &embeddings), c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartRecord {
    pub degree: usize,
    pub modulus: Vec<u64>,
    pub coeffs: Vec<u64>,
}

/// `θ = Π embed(a_i)` and its `q` translates `θ + c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslateSet {
    pub theta: Element,
    pub members: Vec<Element>,
    pub parts: Vec<PartRecord>,
    /// One flag per member.
    pub completely_normal: Vec<bool>,
}

impl TranslateSet {
    pub fn all_completely_normal(&self) -> bool {
        self.completely_normal.iter().all(|&b| b)
    }
}

pub fn translate_set(big: &FieldCtx, parts: &[Part]) -> Result<TranslateSet> {
    let embeddings = prepare(big, parts)?;
    let theta = product(big, parts, &embeddings);
    let members: Vec<Element> = big.base_field_elements().iter().map(|c| big.add(&theta, c)).collect();
    let completely_normal = members
        .iter()
        .map(|m| is_completely_normal(big, m))
        .collect::<Result<Vec<_>>>()?;
    let parts = parts
        .iter()
        .map(|p| PartRecord {
            degree: p.ctx.n(),
            modulus: p.ctx.modulus().to_vec(),
            coeffs: p.element.coeffs().to_vec(),
        })
        .collect();
    Ok(TranslateSet { theta, members, parts, completely_normal })
}

/// One part per prime-power factor of `n`, each the least completely
/// normal element of its subfield.
pub fn prime_power_parts(q: u64, n: usize) -> Result<Vec<Part>> {
    let degrees: Vec<usize> = if n == 1 {
        vec![1]
    } else {
        factor_u64(n as u64).into_iter().map(|(r, e)| r.pow(e) as usize).collect()
    };
    degrees
        .into_iter()
        .map(|d| {
            let ctx = make_field_q(q, d, None)?;
            let element = find_completely_normal(&ctx)?;
            Ok(Part { ctx, element })
        })
        .collect()
}

/// The translate set of `F_{q^n}` built from prime-power parts.
pub fn construct(q: u64, n: usize) -> Result<(FieldCtx, TranslateSet)> {
    let big = make_field_q(q, n, None)?;
    let parts = prime_power_parts(q, n)?;
    let set = translate_set(&big, &parts)?;
    Ok((big, set))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRecord {
    pub p: u64,
    pub k: usize,
    pub n: usize,
    pub modulus: Vec<u64>,
}

impl FieldRecord {
    pub fn of(ctx: &FieldCtx) -> Self {
        FieldRecord { p: ctx.p(), k: ctx.k(), n: ctx.n(), modulus: ctx.modulus().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Elements `b` examined, in index order, up to and including the hit.
    pub candidates: u64,
    /// How many of those were normal.
    pub normal_candidates: u64,
    /// Normal candidates with `Tr(ab + 1) = 0`, which can never be normal.
    pub trace_zero_candidates: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub primitive: bool,
    pub completely_normal: bool,
    pub b_normal: bool,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.primitive && self.completely_normal && self.b_normal
    }
}

/// `ab + 1`, primitive and completely normal in `F_{q^n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MMWitness {
    pub q: u64,
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub field: FieldRecord,
    pub field_n1: FieldRecord,
    pub field_n2: FieldRecord,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub witness: Vec<u64>,
    pub search_stats: SearchStats,
    pub verification: Verification,
}

/// Primitivity by the exact multiplicative order and complete normality by
/// the divisor criterion, sharing nothing with the search path.
pub fn verify_witness(big: &FieldCtx, w: &Element) -> Result<(bool, bool)> {
    if w.is_zero() {
        return Ok((false, false));
    }
    let order = group_order_factorization(big)?;
    let primitive = mult_order(big, w, &order)? == big.size() - 1u32;
    let mut cn = true;
    for &d in big.subfield_degrees() {
        cn &= is_normal_by_divisors(big, w, d)?;
    }
    Ok((primitive, cn))
}

/// Searches `b ∈ F_{q^{n2}}` normal with `ab + 1` primitive and completely
/// normal, where `a` is the least completely normal element of `F_{q^{n1}}`.
/// The least such `b` is returned regardless of how the scan is split
/// across threads.
///
/// Complete normality of `ab + 1` is tested rather than assumed: its trace
/// is `Tr(a)Tr(b) + n`, which vanishes for some `b` when the characteristic
/// does not divide `n` (for every `b` when `q = 2` and `n` is odd).
pub fn find_mm_witness(q: u64, n: usize, split: (usize, usize)) -> Result<MMWitness> {
    let (n1, n2) = split;
    if n1 * n2 != n || !pcb_decompositions(q, n as u64)?.contains(&(n1 as u64, n2 as u64)) {
        return Err(Error::Precondition(format!(
            "({n1}, {n2}) is not a partially completely basic split of {n} over F_{q}"
        )));
    }
    let big = make_field_q(q, n, None)?;
    let f1 = make_field_q(q, n1, None)?;
    let f2 = make_field_q(q, n2, None)?;
    let size2 = scan_size(&f2)?;
    let order = group_order_factorization(&big)?;
    let a = find_completely_normal(&f1)?;
    let e1 = Embedding::new(&f1, &big)?;
    let e2 = Embedding::new(&f2, &big)?;
    let a_big = e1.apply(&big, &a);
    let one = big.one();

    // (normal b, Tr(ab + 1) = 0, ab + 1 primitive and completely normal)
    let test = |i: u64| -> Result<(bool, bool, bool)> {
        let b = f2.element_at(i);
        if !is_normal(&f2, &b, 1)? {
            return Ok((false, false, false));
        }
        let w = big.add(&big.mul(&a_big, &e2.apply(&big, &b)), &one);
        let trace_zero = big.trace(&w, n, 1)?.is_zero();
        let hit = !w.is_zero() && is_primitive(&big, &w, &order)? && is_completely_normal(&big, &w)?;
        Ok((true, trace_zero, hit))
    };

    let mut stats = SearchStats { candidates: 0, normal_candidates: 0, trace_zero_candidates: 0 };
    let mut found = None;
    let mut start = 1;
    while start < size2 && found.is_none() {
        let end = (start + SCAN_CHUNK).min(size2);
        let results = (start..end).into_par_iter().map(test).collect::<Result<Vec<_>>>()?;
        for (i, (normal, trace_zero, hit)) in (start..end).zip(results) {
            stats.candidates += 1;
            stats.normal_candidates += normal as u64;
            stats.trace_zero_candidates += trace_zero as u64;
            if hit {
                found = Some(i);
                break;
            }
        }
        start = end;
    }
    let Some(i) = found else {
        let main = check_main_condition(&CheckEnv::default(), q, n1 as u64, n2 as u64, MainMode::Exact)
            .map(|r| r.holds)
            .unwrap_or(false);
        return Err(Error::NoWitness {
            q,
            n,
            n1,
            n2,
            main_condition_holds: main,
            trace_obstruction: stats.normal_candidates > 0 && stats.trace_zero_candidates == stats.normal_candidates,
        });
    };
    let b = f2.element_at(i);
    let w = big.add(&big.mul(&a_big, &e2.apply(&big, &b)), &one);
    let (primitive, completely_normal) = verify_witness(&big, &w)?;
    let verification = Verification { primitive, completely_normal, b_normal: is_normal_by_divisors(&f2, &b, 1)? };
    Ok(MMWitness {
        q,
        n,
        n1,
        n2,
        field: FieldRecord::of(&big),
        field_n1: FieldRecord::of(&f1),
        field_n2: FieldRecord::of(&f2),
        a: a.into_coeffs(),
        b: b.into_coeffs(),
        witness: w.into_coeffs(),
        search_stats: stats,
        verification,
    })
}

/// `(q^{n1} - 1)(q^{n2} - 1)/(q - 1)`, the cap on the order of `a1·a2`.
pub fn product_order_cap(q: u64, n1: u32, n2: u32) -> BigUint {
    let q = BigUint::from(q);
    (q.pow(n1) - 1u32) * (q.pow(n2) - 1u32) / (q - 1u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn least_completely_normal_examples() {
        let f4 = make_field(2, 1, 2, None).unwrap();
        assert_eq!(find_completely_normal(&f4).unwrap(), f4.generator_root());
        let f5 = make_field(5, 1, 1, None).unwrap();
        assert_eq!(find_completely_normal(&f5).unwrap(), f5.one());
        let f8 = make_field(2, 1, 3, None).unwrap();
        let a = find_completely_normal(&f8).unwrap();
        assert!(is_completely_normal(&f8, &a).unwrap());
        assert!(is_normal_by_divisors(&f8, &a, 1).unwrap());
    }

    #[test]
    fn degenerate_product_is_the_part() {
        let ctx = make_field_q(2, 3, None).unwrap();
        let a = find_completely_normal(&ctx).unwrap();
        let part = Part { ctx: ctx.clone(), element: a.clone() };
        assert_eq!(product_translate(&ctx, &[part], &ctx.zero()).unwrap(), a);
    }

    #[test]
    fn rejects_bad_parts() {
        let big = make_field_q(2, 6, None).unwrap();
        let f4 = make_field_q(2, 2, None).unwrap();
        let f8 = make_field_q(2, 3, None).unwrap();
        let good = Part { ctx: f8.clone(), element: find_completely_normal(&f8).unwrap() };
        let bad = Part { ctx: f4.clone(), element: f4.one() };
        assert!(matches!(product_translate(&big, &[bad, good.clone()], &big.zero()), Err(Error::Precondition(_))));
        let twice = [good.clone(), good];
        assert!(matches!(translate_set(&big, &twice), Err(Error::Precondition(_))));
    }

    #[test]
    fn translate_sets_are_completely_normal() {
        for (q, n) in [(2u64, 6usize), (3, 6), (4, 6)] {
            let (_, set) = construct(q, n).unwrap();
            assert_eq!(set.members.len() as u64, q);
            assert!(set.all_completely_normal(), "q={q} n={n}");
        }
    }

    /// Normal `a1 ∈ F_{q^{n1}}`, `a2 ∈ F_{q^{n2}}` give normal `a1a2 + c`.
    #[test]
    fn coprime_normal_products_stay_normal() {
        for (q, n1, n2) in [(2u64, 2usize, 3usize), (2, 3, 4), (3, 2, 3), (2, 2, 5), (4, 2, 3), (2, 3, 2)] {
            let big = make_field_q(q, n1 * n2, None).unwrap();
            let (f1, f2) = (make_field_q(q, n1, None).unwrap(), make_field_q(q, n2, None).unwrap());
            let (e1, e2) = (Embedding::new(&f1, &big).unwrap(), Embedding::new(&f2, &big).unwrap());
            let normals = |f: &FieldCtx| -> Vec<Element> {
                f.elements().filter(|a| is_normal(f, a, 1).unwrap()).collect()
            };
            let cs = big.base_field_elements();
            for a1 in normals(&f1) {
                for a2 in normals(&f2) {
                    let t = big.mul(&e1.apply(&big, &a1), &e2.apply(&big, &a2));
                    for c in &cs {
                        assert!(is_normal(&big, &big.add(&t, c), 1).unwrap(), "q={q} n1={n1} n2={n2}");
                    }
                }
            }
        }
    }

    #[test]
    fn products_respect_the_order_cap() {
        for (q, n1, n2) in [(2u64, 2usize, 3usize), (3, 2, 3), (2, 3, 4), (2, 2, 5)] {
            let big = make_field_q(q, n1 * n2, None).unwrap();
            let order = group_order_factorization(&big).unwrap();
            let (f1, f2) = (make_field_q(q, n1, None).unwrap(), make_field_q(q, n2, None).unwrap());
            let (e1, e2) = (Embedding::new(&f1, &big).unwrap(), Embedding::new(&f2, &big).unwrap());
            let qb = BigUint::from(q);
            let l = num_integer::lcm(qb.pow(n1 as u32) - 1u32, qb.pow(n2 as u32) - 1u32);
            let cap = product_order_cap(q, n1 as u32, n2 as u32);
            for a1 in f1.elements().skip(1) {
                for a2 in f2.elements().skip(1) {
                    let t = big.mul(&e1.apply(&big, &a1), &e2.apply(&big, &a2));
                    let o = mult_order(&big, &t, &order).unwrap();
                    assert!((&l % &o).bits() == 0 && o <= cap);
                    assert!(!is_primitive(&big, &t, &order).unwrap());
                }
            }
        }
    }

    #[test]
    fn witness_examples() {
        for (q, n, split) in [(2u64, 6usize, (2usize, 3usize)), (2, 6, (3, 2)), (3, 10, (2, 5))] {
            let w = find_mm_witness(q, n, split).unwrap();
            assert!(w.verification.ok(), "{w:?}");
            assert!(w.search_stats.normal_candidates >= 1);
        }
        assert!(matches!(find_mm_witness(2, 6, (1, 6)), Err(Error::Precondition(_))));
    }

    #[test]
    fn odd_degree_over_f2_has_no_translate_witness() {
        match find_mm_witness(2, 15, (3, 5)) {
            Err(Error::NoWitness { trace_obstruction, .. }) => assert!(trace_obstruction),
            other => panic!("{other:?}"),
        }
    }

    /// With the characteristic prime to `n`, exactly one translate has
    /// trace zero and so is not normal.
    #[test]
    fn one_translate_fails_when_characteristic_is_prime_to_n() {
        let (big, set) = construct(5, 6).unwrap();
        let bad: Vec<&Element> = set
            .members
            .iter()
            .zip(&set.completely_normal)
            .filter(|(_, ok)| !**ok)
            .map(|(m, _)| m)
            .collect();
        assert_eq!(bad.len(), 1);
        assert!(big.trace(bad[0], 6, 1).unwrap().is_zero());
    }
}
