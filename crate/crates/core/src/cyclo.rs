//! Factor structure of `x^n - 1` over `F_q`, the polynomial-side
//! multiplicative functions `μ_q`, `φ_q`, `θ_q`, and the `q`-associate action
//! `f ∘ a = Σ f_i a^(q^(d·i))`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::field::poly::{Poly, PolyRing};
use crate::field::{make_field, Element, Embedding, FieldCtx};
use crate::integer::modular::{divisors, euler_phi_u64, mult_order_mod, prime_power, strip_factor};

/// Largest degree for which explicit factorizations of `x^m - 1` are built.
pub const EXPLICIT_DEGREE_CAP: u64 = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloSummary {
    pub q: u64,
    pub n: u64,
    /// The part of `n` prime to the characteristic.
    pub m: u64,
    pub factor_count: u64,
    /// Degree ↦ number of distinct irreducible factors of that degree.
    pub factor_degrees: BTreeMap<u64, u64>,
    pub squarefree_part_degree: u64,
}

/// Factor data of `x^n - 1` over `F_q` by the order formula
/// `Σ_{d | m} φ(d) / ord_d(q)`.
pub fn cyclo_summary(q: u64, n: u64) -> Result<CycloSummary> {
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let m = strip_factor(n, p);
    let mut factor_degrees = BTreeMap::new();
    for d in divisors(m) {
        let e = mult_order_mod(q % d, d);
        *factor_degrees.entry(e).or_insert(0) += euler_phi_u64(d) / e;
    }
    let factor_count = factor_degrees.values().sum();
    Ok(CycloSummary { q, n, m, factor_count, factor_degrees, squarefree_part_degree: m })
}

/// Factor count of `x^n - 1` over `F_q`, consulting and filling `cache`.
pub fn factor_count_cached(q: u64, n: u64, cache: Option<&Cache>) -> Result<u64> {
    if let Some(hit) = cache.and_then(|c| c.cyclo_count(q, n)) {
        return Ok(hit);
    }
    let count = cyclo_summary(q, n)?.factor_count;
    if let Some(c) = cache {
        c.record_cyclo_count(q, n, count)?;
    }
    Ok(count)
}

impl CycloSummary {
    /// `W(x^n - 1) = 2^factor_count`.
    pub fn w(&self) -> BigUint {
        BigUint::one() << self.factor_count
    }

    /// Factor count of the squarefree part `x^m - 1` by an explicit
    /// distinct-degree factorization; independent of the order formula.
    pub fn confirm_by_ddf(&self) -> Result<u64> {
        if self.m > EXPLICIT_DEGREE_CAP {
            return Err(Error::CapExceeded {
                what: "explicit factorization of x^m - 1",
                size: self.m.to_string(),
                cap: EXPLICIT_DEGREE_CAP.to_string(),
            });
        }
        let (p, k) = prime_power(self.q).ok_or(Error::NotPrimePower(self.q))?;
        let ctx = make_field(p, k as usize, 1, None)?;
        let ring = PolyRing::new(&ctx);
        Ok(ring
            .distinct_degree(&ring.x_pow_minus_one(self.m as usize))
            .iter()
            .map(|(r, g)| (ring.degree(g).unwrap_or(0) / r) as u64)
            .sum())
    }
}

pub fn w_poly(q: u64, n: u64) -> Result<BigUint> {
    Ok(cyclo_summary(q, n)?.w())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMultFunctions {
    pub mu_q: i8,
    pub phi_q: BigUint,
    pub theta_q: BigRational,
}

/// `μ_q`, `φ_q`, `θ_q` of a monic polynomial over `F_q` given the degrees
/// and multiplicities of its irreducible factors.
pub fn poly_mult_functions(q: u64, factors: &[(u64, u32)]) -> Result<PolyMultFunctions> {
    if factors.iter().any(|&(_, e)| e != 1) {
        return Err(Error::NotSquarefree);
    }
    let qb = BigUint::from(q);
    let mu_q = if factors.len() % 2 == 0 { 1 } else { -1 };
    let phi_q = factors
        .iter()
        .fold(BigUint::one(), |acc, &(deg, _)| acc * (qb.pow(deg as u32) - 1u32));
    let total: u64 = factors.iter().map(|&(deg, _)| deg).sum();
    let theta_q = BigRational::new(BigInt::from(phi_q.clone()), BigInt::from(qb.pow(total as u32)));
    Ok(PolyMultFunctions { mu_q, phi_q, theta_q })
}

/// `f ∘ a = Σ f_i a^(q^(d·i))` for `f` with coefficients in `F_{q^d}`.
pub fn q_associate_apply(ctx: &FieldCtx, f: &[Element], a: &Element, d: usize) -> Result<Element> {
    ctx.check_divisor(d)?;
    let mut acc = ctx.zero();
    let mut cur = a.clone();
    for (i, c) in f.iter().enumerate() {
        if !ctx.in_subfield(c, d)? {
            return Err(Error::CoefficientOutsideBase(d));
        }
        if i > 0 {
            cur = ctx.frobenius(&cur, d);
        }
        if !c.is_zero() {
            acc = ctx.add(&acc, &ctx.mul(c, &cur));
        }
    }
    Ok(acc)
}

/// The monic irreducible factors of `x^m - 1` over `F_{q^d}`, with
/// coefficients embedded in `ctx`. `m` must be prime to the characteristic.
pub fn factors_over_subfield(ctx: &FieldCtx, m: usize, d: usize) -> Result<Vec<Poly>> {
    ctx.check_divisor(d)?;
    if m as u64 % ctx.p() == 0 {
        return Err(Error::Precondition(format!("{m} is divisible by the characteristic")));
    }
    if m as u64 > EXPLICIT_DEGREE_CAP {
        return Err(Error::CapExceeded {
            what: "explicit factorization of x^m - 1",
            size: m.to_string(),
            cap: EXPLICIT_DEGREE_CAP.to_string(),
        });
    }
    let sub = make_field(ctx.p(), ctx.k(), d, None)?;
    let emb = Embedding::new(&sub, ctx)?;
    let ring = PolyRing::new(&sub);
    Ok(ring
        .factor_squarefree(&ring.x_pow_minus_one(m))
        .into_iter()
        .map(|g| g.iter().map(|c| emb.apply(ctx, c)).collect())
        .collect())
}

/// Every monic divisor of `x^m - 1` over `F_{q^d}` as `(product, factor indices)`,
/// from the irreducible factors returned by [`factors_over_subfield`].
pub fn monic_divisors(ctx: &FieldCtx, factors: &[Poly]) -> Vec<(Poly, Vec<usize>)> {
    let ring = PolyRing::new(ctx);
    let mut out = Vec::with_capacity(1 << factors.len());
    for mask in 0u64..(1u64 << factors.len()) {
        let idx: Vec<usize> = (0..factors.len()).filter(|i| mask >> i & 1 == 1).collect();
        let prod = idx.iter().fold(ring.one(), |acc, &i| ring.mul(&acc, &factors[i]));
        out.push((prod, idx));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field_q;
    use proptest::prelude::*;

    #[test]
    fn summary_examples() {
        assert_eq!(cyclo_summary(2, 1).unwrap().factor_count, 1);
        let s = cyclo_summary(2, 3).unwrap();
        assert_eq!(s.factor_count, 2);
        assert_eq!(s.factor_degrees, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(cyclo_summary(4, 3).unwrap().factor_count, 3);
        let s = cyclo_summary(2, 12).unwrap();
        assert_eq!((s.m, s.squarefree_part_degree), (3, 3));
        assert!(cyclo_summary(6, 3).is_err());
    }

    #[test]
    fn w_examples() {
        assert_eq!(w_poly(2, 1).unwrap(), BigUint::from(2u32));
        assert_eq!(w_poly(2, 3).unwrap(), BigUint::from(4u32));
        assert_eq!(w_poly(5, 4).unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn order_formula_matches_ddf() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            for n in 1..=64 {
                let s = cyclo_summary(q, n).unwrap();
                assert_eq!(s.confirm_by_ddf().unwrap(), s.factor_count, "q={q} n={n}");
                let deg_sum: u64 = s.factor_degrees.iter().map(|(d, c)| d * c).sum();
                assert_eq!(deg_sum, s.m);
            }
        }
    }

    #[test]
    fn w_respects_lemma_bounds() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            for n in 1..=64u64 {
                let k = cyclo_summary(q, n).unwrap().factor_count;
                let g = num_integer::gcd(n, q - 1);
                // W ≤ 2^((n+g)/2), compared doubled to stay in integers
                assert!(2 * k <= n + g, "q={q} n={n}");
                if (q - 1) % n != 0 {
                    assert!(4 * k <= 3 * n, "q={q} n={n}");
                } else {
                    assert_eq!(k, n);
                }
            }
        }
    }

    #[test]
    fn mult_function_examples() {
        let one = poly_mult_functions(2, &[]).unwrap();
        assert_eq!((one.mu_q, one.phi_q.clone()), (1, BigUint::one()));
        assert_eq!(one.theta_q, BigRational::one());
        let lin = poly_mult_functions(2, &[(1, 1)]).unwrap();
        assert_eq!(lin.mu_q, -1);
        assert_eq!(lin.theta_q, BigRational::new(1.into(), 2.into()));
        let cubic = poly_mult_functions(2, &[(1, 1), (2, 1)]).unwrap();
        assert_eq!((cubic.mu_q, cubic.phi_q), (1, BigUint::from(3u32)));
        assert_eq!(cubic.theta_q, BigRational::new(3.into(), 8.into()));
        assert_eq!(poly_mult_functions(2, &[(1, 2)]), Err(Error::NotSquarefree));
    }

    #[test]
    fn q_associate_examples() {
        let ctx = make_field_q(2, 6, None).unwrap();
        let ring = PolyRing::new(&ctx);
        for d in [1, 2, 3, 6] {
            for a in ctx.elements().step_by(5) {
                let x = q_associate_apply(&ctx, &ring.x(), &a, d).unwrap();
                assert_eq!(x, ctx.frobenius(&a, d));
                let ann = ring.x_pow_minus_one(6 / d);
                assert!(q_associate_apply(&ctx, &ann, &a, d).unwrap().is_zero());
            }
        }
        let outside = vec![ctx.generator_root()];
        assert_eq!(
            q_associate_apply(&ctx, &outside, &ctx.one(), 1),
            Err(Error::CoefficientOutsideBase(1))
        );
    }

    #[test]
    fn subfield_factors_multiply_back() {
        let ctx = make_field_q(2, 6, None).unwrap();
        let ring = PolyRing::new(&ctx);
        for d in [1, 2, 3] {
            let m = 6 / d;
            let m_odd = strip_factor(m as u64, 2) as usize;
            let factors = factors_over_subfield(&ctx, m_odd, d).unwrap();
            let prod = factors.iter().fold(ring.one(), |acc, g| ring.mul(&acc, g));
            assert_eq!(prod, ring.monic(ring.x_pow_minus_one(m_odd)));
            for g in &factors {
                assert!(g.iter().all(|c| ctx.in_subfield(c, d).unwrap()));
            }
            assert_eq!(monic_divisors(&ctx, &factors).len(), 1 << factors.len());
        }
    }

    fn f64_poly(ctx: &FieldCtx, coeffs: &[u64]) -> Poly {
        coeffs.iter().map(|&c| ctx.scalar(c)).collect()
    }

    proptest! {
        #[test]
        fn action_is_a_module_action(
            f in proptest::collection::vec(0u64..2, 0..8),
            g in proptest::collection::vec(0u64..2, 0..8),
        ) {
            let ctx = make_field_q(2, 6, None).unwrap();
            let ring = PolyRing::new(&ctx);
            let (fp, gp) = (f64_poly(&ctx, &f), f64_poly(&ctx, &g));
            let sum = ring.add(&fp, &gp);
            let prod = ring.mul(&fp, &gp);
            for a in ctx.elements() {
                let fa = q_associate_apply(&ctx, &fp, &a, 1).unwrap();
                let ga = q_associate_apply(&ctx, &gp, &a, 1).unwrap();
                prop_assert_eq!(q_associate_apply(&ctx, &sum, &a, 1).unwrap(), ctx.add(&fa, &ga));
                let inner = q_associate_apply(&ctx, &gp, &a, 1).unwrap();
                prop_assert_eq!(
                    q_associate_apply(&ctx, &prod, &a, 1).unwrap(),
                    q_associate_apply(&ctx, &fp, &inner, 1).unwrap()
                );
            }
        }
    }
}
