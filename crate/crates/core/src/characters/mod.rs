//! Explicit additive and multiplicative characters of small fields, the
//! characteristic functions `ω` (primitivity) and `Ω_d` (normality), and
//! the character sums used by the existence argument.
//!
//! Multiplicative characters are `χ_j(g^t) = e(j·t / (q^n - 1))` for the
//! least primitive element `g`; additive characters of the subfield
//! `F_{q^L}` are `ψ_c(x) = e(Tr_{q^L/p}(c·x) / p)`. Here `e(x) = exp(2πix)`.
//! Multiplicative characters are extended to zero by `χ_0(0) = 1` and
//! `χ(0) = 0` otherwise.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;

use crate::cyclo::{factors_over_subfield, q_associate_apply};
use crate::error::{Error, Result};
use crate::field::poly::{Poly, PolyRing};
use crate::field::{Element, FieldCtx};
use crate::integer::modular::{euler_phi_u64, factor_u64, strip_factor};
use crate::normality::is_normal;

/// Default cap on `q^n` for character tables.
pub const TABLE_CAP: u64 = 1 << 16;

/// Rounding tolerance for characteristic-function values.
pub const TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterId {
    /// `χ_index`.
    Multiplicative { index: u64 },
    /// `ψ_shift` on `F_{q^level}`.
    Additive { shift: Element, level: usize },
}

impl CharacterId {
    pub fn trivial_multiplicative() -> Self {
        CharacterId::Multiplicative { index: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            CharacterId::Multiplicative { index } => *index == 0,
            CharacterId::Additive { shift, .. } => shift.is_zero(),
        }
    }
}

/// Additive characters of one subfield `F_{q^L}` with their `q`-orders over `F_q`.
struct AdditiveLevel {
    shifts: Vec<Element>,
    /// Irreducible factors of the squarefree part of `x^L - 1` over `F_q`.
    factors: Vec<Poly>,
    /// For each shift: the set of `factors` whose product is its `q`-order,
    /// or `None` when the `q`-order is not squarefree.
    order_masks: Vec<Option<u64>>,
}

fn unit_root(num: u64, den: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (num % den) as f64 / den as f64)
}

pub struct CharacterTable {
    ctx: FieldCtx,
    order: u64,
    generator: Element,
    /// `dlog[index(a)]` for `a ≠ 0`.
    dlog: Vec<u64>,
    /// Coordinate functionals of `Tr_{q^L/p}`, keyed by level `L`.
    trace_functionals: BTreeMap<usize, Vec<u64>>,
    levels: BTreeMap<usize, OnceLock<AdditiveLevel>>,
    omega_terms: OnceLock<(f64, Vec<(u64, f64)>)>,
}

impl std::fmt::Debug for CharacterTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharacterTable")
            .field("ctx", &self.ctx)
            .field("generator", &self.generator)
            .finish()
    }
}

impl CharacterTable {
    pub fn build(ctx: &FieldCtx) -> Result<Self> {
        Self::build_with_cap(ctx, TABLE_CAP)
    }

    pub fn build_with_cap(ctx: &FieldCtx, cap: u64) -> Result<Self> {
        let size = match ctx.size_u64() {
            Some(s) if s <= cap => s,
            _ => {
                return Err(Error::CapExceeded {
                    what: "character tables",
                    size: ctx.size().to_string(),
                    cap: cap.to_string(),
                })
            }
        };
        let order = size - 1;
        let primes: Vec<BigUint> = factor_u64(order).into_iter().map(|(r, _)| BigUint::from(r)).collect();
        let generator = ctx.least_primitive(&primes);
        let mut dlog = vec![u64::MAX; size as usize];
        let mut cur = ctx.one();
        for t in 0..order {
            dlog[ctx.index_of(&cur) as usize] = t;
            cur = ctx.mul(&cur, &generator);
        }
        let mut trace_functionals = BTreeMap::new();
        let mut levels = BTreeMap::new();
        for &l in ctx.subfield_degrees() {
            let e = ctx.k() * l;
            let functional = (0..ctx.degree())
                .map(|i| {
                    let mut v = vec![0; ctx.degree()];
                    v[i] = 1;
                    ctx.trace_to_prime(&ctx.element(v).unwrap(), e)
                })
                .collect();
            trace_functionals.insert(l, functional);
            levels.insert(l, OnceLock::new());
        }
        Ok(CharacterTable {
            ctx: ctx.clone(),
            order,
            generator,
            dlog,
            trace_functionals,
            levels,
            omega_terms: OnceLock::new(),
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn generator(&self) -> &Element {
        &self.generator
    }

    /// `q^n - 1`.
    pub fn group_order(&self) -> u64 {
        self.order
    }

    pub fn dlog(&self, a: &Element) -> Option<u64> {
        if a.is_zero() {
            None
        } else {
            Some(self.dlog[self.ctx.index_of(a) as usize])
        }
    }

    /// Order of `χ_j` in the character group.
    pub fn character_order(&self, j: u64) -> u64 {
        self.order / j.gcd(&self.order)
    }

    pub fn chi(&self, j: u64, a: &Element) -> Complex64 {
        match self.dlog(a) {
            Some(t) => unit_root(((j % self.order) as u128 * t as u128 % self.order as u128) as u64, self.order),
            None if j % self.order == 0 => Complex64::new(1.0, 0.0),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `Tr_{q^level/p}(x)` for `x ∈ F_{q^level}`.
    pub fn abs_trace(&self, x: &Element, level: usize) -> Result<u64> {
        let f = self.trace_functionals.get(&level).ok_or(Error::NotADivisor { d: level, n: self.ctx.n() })?;
        let p = self.ctx.p();
        Ok(x.coeffs().iter().zip(f).fold(0u64, |acc, (&c, &t)| (acc + c * t) % p))
    }

    pub fn psi(&self, shift: &Element, level: usize, x: &Element) -> Result<Complex64> {
        Ok(unit_root(self.abs_trace(&self.ctx.mul(shift, x), level)?, self.ctx.p()))
    }

    pub fn eval(&self, id: &CharacterId, x: &Element) -> Result<Complex64> {
        match id {
            CharacterId::Multiplicative { index } => Ok(self.chi(*index, x)),
            CharacterId::Additive { shift, level } => self.psi(shift, *level, x),
        }
    }

    /// The `F_{q^d}`-order of an additive character of `F_{q^L}`: the least
    /// monic divisor `g` of `x^(L/d) - 1` over `F_{q^d}` with `ψ(g ∘ a) = 1`
    /// for every `a ∈ F_{q^L}`.
    pub fn char_q_order(&self, psi: &CharacterId, d: usize) -> Result<Poly> {
        let CharacterId::Additive { shift, level } = psi else {
            return Err(Error::Precondition("q-order is defined for additive characters".into()));
        };
        let level = *level;
        self.ctx.check_divisor(level)?;
        if d == 0 || level % d != 0 {
            return Err(Error::NotADivisor { d, n: level });
        }
        let ctx = &self.ctx;
        let ring = PolyRing::new(ctx);
        let basis = ctx.subfield_basis(level)?;
        let trivial_on = |g: &Poly| -> Result<bool> {
            for a in &basis {
                let image = q_associate_apply(ctx, g, a, d)?;
                if self.abs_trace(&ctx.mul(shift, &image), level)? != 0 {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let m = level / d;
        let mut g = ring.x_pow_minus_one(m);
        for h in factors_over_subfield(ctx, strip_factor(m as u64, ctx.p()) as usize, d)? {
            loop {
                let (quot, rem) = ring.divrem(&g, &h);
                if ring.degree(&rem).is_some() || !trivial_on(&quot)? {
                    break;
                }
                g = quot;
            }
        }
        Ok(ring.monic(g))
    }

    fn level(&self, l: usize) -> Result<&AdditiveLevel> {
        let cell = self.levels.get(&l).ok_or(Error::NotADivisor { d: l, n: self.ctx.n() })?;
        if let Some(done) = cell.get() {
            return Ok(done);
        }
        let ctx = &self.ctx;
        let ring = PolyRing::new(ctx);
        let factors = factors_over_subfield(ctx, strip_factor(l as u64, ctx.p()) as usize, 1)?;
        let shifts = ctx.subfield_elements(l)?;
        let mut order_masks = Vec::with_capacity(shifts.len());
        for c in &shifts {
            let g = self.char_q_order(&CharacterId::Additive { shift: c.clone(), level: l }, 1)?;
            let mut mask = 0u64;
            let mut rest = g;
            for (i, h) in factors.iter().enumerate() {
                let (quot, rem) = ring.divrem(&rest, h);
                if ring.degree(&rem).is_none() {
                    mask |= 1 << i;
                    rest = quot;
                }
            }
            order_masks.push(if ring.degree(&rest) == Some(0) { Some(mask) } else { None });
        }
        let _ = cell.set(AdditiveLevel { shifts, factors, order_masks });
        Ok(cell.get().unwrap())
    }

    /// The additive characters of `F_{q^l}` whose `q`-order over `F_q` is
    /// squarefree, with `(number of irreducible factors, φ_q)` of that order.
    pub fn squarefree_order_characters(&self, l: usize) -> Result<Vec<(Element, u32, u64)>> {
        let lvl = self.level(l)?;
        let q = self.ctx.q();
        let degs: Vec<u32> = lvl
            .factors
            .iter()
            .map(|h| PolyRing::new(&self.ctx).degree(h).unwrap() as u32)
            .collect();
        Ok(lvl
            .shifts
            .iter()
            .zip(&lvl.order_masks)
            .filter_map(|(c, m)| {
                m.map(|mask| {
                    let idx = (0..degs.len()).filter(|i| mask >> i & 1 == 1);
                    let phi = idx.clone().map(|i| q.pow(degs[i]) - 1).product::<u64>();
                    (c.clone(), mask.count_ones(), phi)
                })
            })
            .collect())
    }

    fn omega_terms(&self) -> &(f64, Vec<(u64, f64)>) {
        self.omega_terms.get_or_init(|| {
            let primes = factor_u64(self.order);
            let radical: u64 = primes.iter().map(|&(r, _)| r).product();
            let theta = euler_phi_u64(radical) as f64 / radical as f64;
            let mut terms = Vec::new();
            for j in 0..self.order {
                let d = self.character_order(j);
                let f = factor_u64(d);
                if f.iter().all(|&(_, e)| e == 1) {
                    let mu = if f.len() % 2 == 0 { 1.0 } else { -1.0 };
                    terms.push((j, mu / euler_phi_u64(d) as f64));
                }
            }
            (theta, terms)
        })
    }

    /// `ω(a) = θ(q') Σ_{d | q'} μ(d)/φ(d) Σ_{ord χ = d} χ(a)`.
    pub fn omega_complex(&self, a: &Element) -> Complex64 {
        let (theta, terms) = self.omega_terms();
        terms.iter().map(|&(j, w)| self.chi(j, a) * w).sum::<Complex64>() * *theta
    }

    pub fn omega(&self, a: &Element) -> f64 {
        self.omega_complex(a).re
    }

    /// `Ω_d(b) = θ_q(F'_d) Σ_{f | F'_d} μ_q(f)/φ_q(f) Σ_{ord ψ = f} ψ(b)` for `b ∈ F_{q^d}`.
    pub fn omega_normal_complex(&self, b: &Element, d: usize) -> Result<Complex64> {
        if !self.ctx.in_subfield(b, d)? {
            return Err(Error::Precondition(format!("element is not in the subfield of degree {d}")));
        }
        let chars = self.squarefree_order_characters(d)?;
        let lvl = self.level(d)?;
        let q = self.ctx.q() as f64;
        let ring = PolyRing::new(&self.ctx);
        let (phi_all, deg_all) = lvl.factors.iter().fold((1.0, 0i32), |(phi, deg), h| {
            let e = ring.degree(h).unwrap() as i32;
            (phi * (q.powi(e) - 1.0), deg + e)
        });
        let theta = phi_all / q.powi(deg_all);
        let mut sum = Complex64::new(0.0, 0.0);
        for (c, nfac, phi) in chars {
            let mu = if nfac % 2 == 0 { 1.0 } else { -1.0 };
            sum += self.psi(&c, d, b)? * (mu / phi as f64);
        }
        Ok(sum * theta)
    }

    pub fn omega_normal(&self, b: &Element, d: usize) -> Result<f64> {
        Ok(self.omega_normal_complex(b, d)?.re)
    }

    /// `Σ_{a ∈ F_q} χ_j(θ + a) ψ_c(a)` with `ψ_c` an additive character of `F_q`.
    pub fn incomplete_sum(&self, j: u64, psi_shift: &Element, theta: &Element) -> Result<Complex64> {
        for &e in self.ctx.subfield_degrees() {
            if e < self.ctx.n() && self.ctx.in_subfield(theta, e)? {
                return Err(Error::Precondition(format!(
                    "theta lies in the proper subfield of degree {e}"
                )));
            }
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for a in self.ctx.base_field_elements() {
            sum += self.chi(j, &self.ctx.add(theta, &a)) * self.psi(psi_shift, 1, &a)?;
        }
        Ok(sum)
    }

    fn check_split(&self, a: &Element, n1: usize, n2: usize) -> Result<()> {
        if n1 * n2 != self.ctx.n() || n1.gcd(&n2) != 1 {
            return Err(Error::Precondition(format!("({n1}, {n2}) is not a coprime split of {}", self.ctx.n())));
        }
        if !self.ctx.in_subfield(a, n1)? || !is_normal(&self.ctx, a, n2)? {
            return Err(Error::Precondition(format!(
                "a must lie in the degree-{n1} subfield and generate the field over the degree-{n2} one"
            )));
        }
        Ok(())
    }

    /// `C(χ_j, ψ_c) = Σ_{b ∈ F_{q^n2}} χ_j(ab + 1) ψ_c(b)` with `ψ_c` an
    /// additive character of `F_{q^n2}`.
    pub fn theorem_sum_c(&self, j: u64, psi_shift: &Element, a: &Element, n1: usize, n2: usize) -> Result<Complex64> {
        self.check_split(a, n1, n2)?;
        let one = self.ctx.one();
        let mut sum = Complex64::new(0.0, 0.0);
        for b in self.ctx.subfield_elements(n2)? {
            let x = self.ctx.add(&self.ctx.mul(a, &b), &one);
            sum += self.chi(j, &x) * self.psi(psi_shift, n2, &b)?;
        }
        Ok(sum)
    }

    /// `𝒩 = θ(q')θ_q(F'_n2) Σ_{d,f} μ(d)μ_q(f)/(φ(d)φ_q(f)) Σ_{χ,ψ} C(χ, ψ)`,
    /// evaluated through the characters.
    pub fn count_via_characters(&self, a: &Element, n1: usize, n2: usize) -> Result<f64> {
        self.check_split(a, n1, n2)?;
        let (theta, mult) = self.omega_terms();
        let add = self.squarefree_order_characters(n2)?;
        let lvl = self.level(n2)?;
        let q = self.ctx.q() as f64;
        let ring = PolyRing::new(&self.ctx);
        let (phi_all, deg_all) = lvl.factors.iter().fold((1.0, 0i32), |(phi, deg), h| {
            let e = ring.degree(h).unwrap() as i32;
            (phi * (q.powi(e) - 1.0), deg + e)
        });
        let theta_q = phi_all / q.powi(deg_all);
        let one = self.ctx.one();
        let bs = self.ctx.subfield_elements(n2)?;
        let xs: Vec<Element> = bs.iter().map(|b| self.ctx.add(&self.ctx.mul(a, b), &one)).collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (c, nfac, phi) in &add {
            let wf = (if nfac % 2 == 0 { 1.0 } else { -1.0 }) / *phi as f64;
            let psis: Vec<Complex64> = bs.iter().map(|b| self.psi(c, n2, b)).collect::<Result<_>>()?;
            for &(j, wd) in mult {
                let s: Complex64 = xs.iter().zip(&psis).map(|(x, p)| self.chi(j, x) * p).sum();
                total += s * (wd * wf);
            }
        }
        Ok((total * (*theta * theta_q)).re)
    }
}

/// Rounds a characteristic-function value to an indicator, rejecting values
/// farther than [`TOLERANCE`] from both 0 and 1.
pub fn as_indicator(v: Complex64) -> Option<bool> {
    if v.im.abs() > TOLERANCE {
        None
    } else if (v.re - 1.0).abs() < TOLERANCE {
        Some(true)
    } else if v.re.abs() < TOLERANCE {
        Some(false)
    } else {
        None
    }
}

/// `|Σ| ≤ n·√q` for every generator `θ` and every not-both-trivial pair.
/// Returns the largest ratio `|Σ| / (n√q)` seen.
pub fn max_incomplete_sum_ratio(table: &CharacterTable) -> Result<f64> {
    let ctx = table.ctx();
    let bound = ctx.n() as f64 * (ctx.q() as f64).sqrt();
    let base = ctx.base_field_elements();
    let mut worst: f64 = 0.0;
    for theta in ctx.elements() {
        let generates = ctx
            .subfield_degrees()
            .iter()
            .filter(|&&e| e < ctx.n())
            .all(|&e| !ctx.in_subfield(&theta, e).unwrap());
        if !generates {
            continue;
        }
        for j in 0..table.group_order() {
            for c in &base {
                if j == 0 && c.is_zero() {
                    continue;
                }
                let s = table.incomplete_sum(j, c, &theta)?;
                worst = worst.max(s.norm() / bound);
            }
        }
    }
    Ok(worst)
}

/// `φ_q`-counts of additive characters and `φ`-counts of multiplicative ones,
/// as maps `order ↦ number of characters`.
pub fn character_order_counts(table: &CharacterTable, level: usize) -> Result<(BTreeMap<u64, u64>, BTreeMap<Vec<u64>, u64>)> {
    let mut mult = BTreeMap::new();
    for j in 0..table.group_order() {
        *mult.entry(table.character_order(j)).or_insert(0) += 1;
    }
    let mut add = BTreeMap::new();
    for c in table.ctx().subfield_elements(level)? {
        let g = table.char_q_order(&CharacterId::Additive { shift: c, level }, 1)?;
        let key: Vec<u64> = g.iter().map(|e| table.ctx().index_of(e)).collect();
        *add.entry(key).or_insert(0) += 1;
    }
    Ok((mult, add))
}

/// `q^d` as an `f64` helper for bound checks.
pub fn q_pow_half(q: u64, e: usize) -> f64 {
    (q as f64).powf(e as f64 / 2.0)
}
