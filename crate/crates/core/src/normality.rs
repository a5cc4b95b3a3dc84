//! Normality over intermediate fields, complete normality, multiplicative
//! order, primitivity, and element `q`-orders.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::cyclo::{factors_over_subfield, q_associate_apply};
use crate::error::{Error, Result};
use crate::field::poly::{Poly, PolyRing};
use crate::field::{Element, FieldCtx};
use crate::integer::modular::strip_factor;
use crate::integer::{factorize, FactorBudget, IntFactorization};

/// Whether `a` is `F_{q^n}/F_{q^d}`-normal: `gcd(x^m - 1, Σ a^(q^(d·i)) x^i) = 1`
/// in `F_{q^n}[x]`, `m = n/d`.
pub fn is_normal(ctx: &FieldCtx, a: &Element, d: usize) -> Result<bool> {
    ctx.check_divisor(d)?;
    let m = ctx.n() / d;
    let ring = PolyRing::new(ctx);
    let mut h: Poly = Vec::with_capacity(m);
    let mut cur = a.clone();
    for _ in 0..m {
        let next = ctx.frobenius(&cur, d);
        h.push(cur);
        cur = next;
    }
    ring.trim(&mut h);
    Ok(ring.degree(&ring.gcd(&ring.x_pow_minus_one(m), &h)) == Some(0))
}

/// Normality by the divisor criterion: `((x^m - 1)/g) ∘ a ≠ 0` for every
/// irreducible factor `g` of `x^m - 1` over `F_{q^d}`. Slower than
/// [`is_normal`]; used to cross-check it.
pub struct DivisorOracle<'a> {
    ctx: &'a FieldCtx,
    d: usize,
    cofactors: Vec<Poly>,
}

impl<'a> DivisorOracle<'a> {
    pub fn new(ctx: &'a FieldCtx, d: usize) -> Result<Self> {
        ctx.check_divisor(d)?;
        let m = ctx.n() / d;
        let ring = PolyRing::new(ctx);
        let full = ring.x_pow_minus_one(m);
        let m_prime = strip_factor(m as u64, ctx.p()) as usize;
        let cofactors = factors_over_subfield(ctx, m_prime, d)?
            .iter()
            .map(|g| ring.divrem(&full, g).0)
            .collect();
        Ok(DivisorOracle { ctx, d, cofactors })
    }

    pub fn is_normal(&self, a: &Element) -> Result<bool> {
        for c in &self.cofactors {
            if q_associate_apply(self.ctx, c, a, self.d)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn is_normal_by_divisors(ctx: &FieldCtx, a: &Element, d: usize) -> Result<bool> {
    DivisorOracle::new(ctx, d)?.is_normal(a)
}

/// Normal over `F_{q^d}` for every `d | n`.
pub fn is_completely_normal(ctx: &FieldCtx, a: &Element) -> Result<bool> {
    for &d in ctx.subfield_degrees() {
        if !is_normal(ctx, a, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Complete factorization of `q^n - 1` for this field.
pub fn group_order_factorization(ctx: &FieldCtx) -> Result<IntFactorization> {
    let f = factorize(&(ctx.size() - 1u32), &FactorBudget::default())?;
    f.require_complete()?;
    Ok(f)
}

fn check_group_order(ctx: &FieldCtx, order: &IntFactorization) -> Result<()> {
    order.require_complete()?;
    if order.value != ctx.size() - 1u32 {
        return Err(Error::Precondition(format!(
            "factorization of {} supplied for a group of order {}",
            order.value,
            ctx.size() - 1u32
        )));
    }
    Ok(())
}

/// Least `e > 0` with `a^e = 1`, by divisor descent on `q^n - 1`.
pub fn mult_order(ctx: &FieldCtx, a: &Element, order: &IntFactorization) -> Result<BigUint> {
    if a.is_zero() {
        return Err(Error::ZeroElement("multiplicative order"));
    }
    check_group_order(ctx, order)?;
    let mut e = order.value.clone();
    for (r, _) in &order.primes {
        while (&e % r).bits() == 0 && ctx.is_one(&ctx.pow(a, &(&e / r))) {
            e /= r;
        }
    }
    Ok(e)
}

/// `a^((q^n - 1)/r) ≠ 1` for every prime `r | q^n - 1`.
pub fn is_primitive(ctx: &FieldCtx, a: &Element, order: &IntFactorization) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroElement("multiplicative order"));
    }
    check_group_order(ctx, order)?;
    Ok(order
        .distinct_primes()
        .all(|r| !ctx.is_one(&ctx.pow(a, &(&order.value / r)))))
}

/// The `F_{q^d}`-order of `a`: the least monic divisor `g` of `x^(n/d) - 1`
/// over `F_{q^d}` with `g ∘ a = 0`, found by removing irreducible factors
/// while the quotient still annihilates `a`.
pub fn q_order(ctx: &FieldCtx, a: &Element, d: usize) -> Result<Poly> {
    ctx.check_divisor(d)?;
    let m = ctx.n() / d;
    let ring = PolyRing::new(ctx);
    let mut g = ring.x_pow_minus_one(m);
    let m_prime = strip_factor(m as u64, ctx.p()) as usize;
    for h in factors_over_subfield(ctx, m_prime, d)? {
        loop {
            let (quot, rem) = ring.divrem(&g, &h);
            if ring.degree(&rem).is_some() {
                break;
            }
            if !q_associate_apply(ctx, &quot, a, d)?.is_zero() {
                break;
            }
            g = quot;
        }
    }
    Ok(ring.monic(g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderProfile {
    pub element: Element,
    /// `None` when `a = 0` or no complete factorization of `q^n - 1` was given.
    pub mult_order: Option<BigUint>,
    /// `d ↦` the `F_{q^d}`-order of the element.
    pub q_orders: BTreeMap<usize, Poly>,
}

pub fn order_profile(ctx: &FieldCtx, a: &Element, order: Option<&IntFactorization>) -> Result<OrderProfile> {
    let mult_order = match order {
        Some(f) if !a.is_zero() && f.complete => Some(mult_order(ctx, a, f)?),
        _ => None,
    };
    let mut q_orders = BTreeMap::new();
    for &d in ctx.subfield_degrees() {
        q_orders.insert(d, q_order(ctx, a, d)?);
    }
    Ok(OrderProfile { element: a.clone(), mult_order, q_orders })
}

/// `1` as a polynomial, the `q`-order of zero.
pub fn unit_poly(ctx: &FieldCtx) -> Poly {
    vec![ctx.one()]
}
