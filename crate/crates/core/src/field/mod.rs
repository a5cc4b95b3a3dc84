//! Exact arithmetic in `F_{q^n}` with `q = p^k`.
//!
//! A field is modelled absolutely over its prime field: elements are
//! coordinate vectors in the power basis of a root of a monic irreducible
//! polynomial of degree `k·n` over `F_p`. Intermediate fields `F_{q^d}`,
//! `d | n`, are the fixed sets of the `d`-th power of the `q`-Frobenius.

mod embed;
pub(crate) mod fp_poly;
pub mod poly;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integer::modular::{divisors, is_prime_u64};

pub use embed::{embed, Embedding};

/// Largest absolute degree `k·n` accepted by [`make_field`].
pub const MAX_ABSOLUTE_DEGREE: usize = 512;

/// Coordinates of a field element in the power basis of the modulus root.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Element(Vec<u64>);

impl Element {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Lexicographic order on coordinate vectors, highest coordinate first.
/// This is the numeric order of the base-`p` index used by enumerations.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A concrete model of `F_{q^n}` over `F_p`.
///
/// Immutable after construction; share it freely between threads.
#[derive(Clone)]
pub struct FieldCtx {
    p: u64,
    k: usize,
    n: usize,
    modulus: Vec<u64>,
    /// Column `j` is `(x^j)^p`.
    frob_p: Vec<Vec<u64>>,
    /// Column `j` is `(x^j)^q`.
    frob_q: Vec<Vec<u64>>,
    subfield_degrees: Vec<usize>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Builds `F_{q^n}` with `q = p^k`.
///
/// Without a seed the modulus is the least monic irreducible polynomial of
/// degree `k·n` (coefficients compared from the top). A seed moves the scan
/// start to a pseudo-random polynomial; the result is still deterministic.
pub fn make_field(p: u64, k: usize, n: usize, seed: Option<u64>) -> Result<FieldCtx> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p >= 1 << 32 {
        return Err(Error::InvalidParameter(format!("characteristic {p} exceeds 2^32")));
    }
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter("k and n must be positive".into()));
    }
    let degree = k.checked_mul(n).ok_or(Error::DegreeOverflow {
        degree: usize::MAX,
        limit: MAX_ABSOLUTE_DEGREE,
    })?;
    if degree > MAX_ABSOLUTE_DEGREE {
        return Err(Error::DegreeOverflow { degree, limit: MAX_ABSOLUTE_DEGREE });
    }
    let modulus = find_irreducible(p, degree, seed);
    Ok(FieldCtx::with_modulus(p, k, n, modulus))
}

/// Builds `F_{q^n}` from the prime power `q` rather than `(p, k)`.
pub fn make_field_q(q: u64, n: usize, seed: Option<u64>) -> Result<FieldCtx> {
    let (p, k) = crate::integer::modular::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    make_field(p, k as usize, n, seed)
}

fn find_irreducible(p: u64, degree: usize, seed: Option<u64>) -> Vec<u64> {
    let mut low: Vec<u64> = match seed {
        None => vec![0; degree],
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (0..degree).map(|_| rng.gen_range(0..p)).collect()
        }
    };
    loop {
        if degree == 1 || low[0] != 0 {
            let mut f = low.clone();
            f.push(1);
            if fp_poly::is_irreducible(&f, p) {
                return f;
            }
        }
        // odometer increment, wrapping around (an irreducible always exists)
        for c in low.iter_mut() {
            *c += 1;
            if *c == p {
                *c = 0;
            } else {
                break;
            }
        }
    }
}

impl FieldCtx {
    pub(crate) fn with_modulus(p: u64, k: usize, n: usize, modulus: Vec<u64>) -> Self {
        let degree = k * n;
        let mut ctx = FieldCtx {
            p,
            k,
            n,
            modulus,
            frob_p: Vec::new(),
            frob_q: Vec::new(),
            subfield_degrees: divisors(n as u64).into_iter().map(|d| d as usize).collect(),
        };
        let xp = fp_poly::powmod(&[0, 1], &BigUint::from(p), &ctx.modulus, p);
        let xp = ctx.pad(xp);
        let mut cols = Vec::with_capacity(degree);
        let mut cur = ctx.one().0;
        for _ in 0..degree {
            cols.push(cur.clone());
            cur = ctx.mul(&Element(cur), &Element(xp.clone())).0;
        }
        ctx.frob_p = cols;
        let q_cols: Vec<Vec<u64>> = (0..degree)
            .map(|j| {
                let mut e = ctx.basis_element(j);
                for _ in 0..k {
                    e = ctx.apply_matrix(&ctx.frob_p, &e);
                }
                e.0
            })
            .collect();
        ctx.frob_q = q_cols;
        ctx
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Extension degree over `F_q`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    /// Absolute degree `k·n` over `F_p`.
    pub fn degree(&self) -> usize {
        self.k * self.n
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn subfield_degrees(&self) -> &[usize] {
        &self.subfield_degrees
    }

    pub fn size(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree() as u32)
    }

    pub fn size_u64(&self) -> Option<u64> {
        (self.p as u128)
            .checked_pow(self.degree() as u32)
            .filter(|&s| s <= u64::MAX as u128)
            .map(|s| s as u64)
    }

    pub(crate) fn check_divisor(&self, d: usize) -> Result<()> {
        if d == 0 || self.n % d != 0 {
            Err(Error::NotADivisor { d, n: self.n })
        } else {
            Ok(())
        }
    }

    fn pad(&self, mut v: Vec<u64>) -> Vec<u64> {
        v.resize(self.degree(), 0);
        v
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.degree()])
    }

    pub fn one(&self) -> Element {
        self.scalar(1)
    }

    /// The image of an integer in the prime field.
    pub fn scalar(&self, c: u64) -> Element {
        let mut v = vec![0; self.degree()];
        v[0] = c % self.p;
        Element(v)
    }

    /// The modulus root `x`, or the constant it equals in degree one.
    pub fn generator_root(&self) -> Element {
        if self.degree() == 1 {
            self.scalar(self.p - self.modulus[0] % self.p)
        } else {
            self.basis_element(1)
        }
    }

    fn basis_element(&self, j: usize) -> Element {
        let mut v = vec![0; self.degree()];
        v[j] = 1;
        Element(v)
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<Element> {
        if coeffs.len() != self.degree() {
            return Err(Error::BadElement { got: coeffs.len(), expected: self.degree() });
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidParameter("coordinate not reduced mod p".into()));
        }
        Ok(Element(coeffs))
    }

    /// The element whose base-`p` digits (lowest coordinate first) are `index`.
    pub fn element_at(&self, mut index: u64) -> Element {
        let mut v = vec![0; self.degree()];
        for c in v.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        Element(v)
    }

    /// Inverse of [`FieldCtx::element_at`]; panics when the field is too large to index.
    pub fn index_of(&self, a: &Element) -> u64 {
        a.0.iter()
            .rev()
            .fold(0u64, |acc, &c| acc.checked_mul(self.p).and_then(|x| x.checked_add(c)).expect("field too large to index"))
    }

    /// All elements in increasing index order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let size = self.size_u64().expect("field too large to enumerate");
        (0..size).map(move |i| self.element_at(i))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        Element(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % self.p).collect())
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        Element(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + self.p - y) % self.p).collect())
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn scale(&self, c: u64, a: &Element) -> Element {
        let c = c % self.p;
        Element(a.0.iter().map(|&x| fp_poly::mul_mod(x, c, self.p)).collect())
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let d = self.degree();
        let p = self.p;
        let mut acc = vec![0u128; 2 * d - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                acc[i + j] += x as u128 * y as u128;
            }
        }
        let mut r: Vec<u64> = acc.into_iter().map(|v| (v % p as u128) as u64).collect();
        for i in (d..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            r[i] = 0;
            for j in 0..d {
                let t = fp_poly::mul_mod(c, self.modulus[j], p);
                r[i - d + j] = (r[i - d + j] + p - t) % p;
            }
        }
        r.truncate(d);
        Element(r)
    }

    pub fn square(&self, a: &Element) -> Element {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        if a.is_zero() {
            return Err(Error::ZeroElement("inverse"));
        }
        let (_, s) = fp_poly::ext_gcd(&a.0, &self.modulus, self.p);
        Ok(Element(self.pad(s)))
    }

    pub fn pow(&self, a: &Element, exp: &BigUint) -> Element {
        let mut result = self.one();
        for i in (0..exp.bits()).rev() {
            result = self.square(&result);
            if exp.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    pub fn pow_u64(&self, a: &Element, exp: u64) -> Element {
        self.pow(a, &BigUint::from(exp))
    }

    fn apply_matrix(&self, cols: &[Vec<u64>], a: &Element) -> Element {
        let p = self.p as u128;
        let mut acc = vec![0u128; self.degree()];
        for (j, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &m) in acc.iter_mut().zip(&cols[j]) {
                *o += c as u128 * m as u128;
            }
        }
        Element(acc.into_iter().map(|v| (v % p) as u64).collect())
    }

    /// `a^(p^e)`.
    pub fn frobenius_p(&self, a: &Element, e: usize) -> Element {
        let mut out = a.clone();
        for _ in 0..(e % self.degree()) {
            out = self.apply_matrix(&self.frob_p, &out);
        }
        out
    }

    /// `a^(q^i)`, with `i` reduced mod `n`.
    pub fn frobenius(&self, a: &Element, i: usize) -> Element {
        let mut out = a.clone();
        for _ in 0..(i % self.n) {
            out = self.apply_matrix(&self.frob_q, &out);
        }
        out
    }

    /// `a, a^q, …, a^(q^(n-1))`.
    pub fn conjugates(&self, a: &Element) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.n);
        let mut cur = a.clone();
        for _ in 0..self.n {
            let next = self.apply_matrix(&self.frob_q, &cur);
            out.push(cur);
            cur = next;
        }
        out
    }

    /// `Tr_{q^d_from / q^d_to}(a) = Σ_{i < d_from/d_to} a^(q^(d_to·i))`.
    pub fn trace(&self, a: &Element, d_from: usize, d_to: usize) -> Result<Element> {
        self.check_divisor(d_from)?;
        if d_to == 0 || d_from % d_to != 0 {
            return Err(Error::NotADivisor { d: d_to, n: d_from });
        }
        let mut sum = self.zero();
        let mut cur = a.clone();
        for _ in 0..d_from / d_to {
            sum = self.add(&sum, &cur);
            cur = self.frobenius(&cur, d_to);
        }
        Ok(sum)
    }

    /// Absolute trace to `F_p` of an element of `F_{p^e}` (`e` divides `k·n`).
    pub fn trace_to_prime(&self, a: &Element, e: usize) -> u64 {
        let mut sum = self.zero();
        let mut cur = a.clone();
        for _ in 0..e {
            sum = self.add(&sum, &cur);
            cur = self.apply_matrix(&self.frob_p, &cur);
        }
        sum.0[0]
    }

    /// True iff `a^(q^d) = a`.
    pub fn in_subfield(&self, a: &Element, d: usize) -> Result<bool> {
        self.check_divisor(d)?;
        Ok(self.frobenius(a, d) == *a)
    }

    /// An `F_p`-basis of `F_{q^d}` inside this field, in reduced echelon form.
    pub fn subfield_basis(&self, d: usize) -> Result<Vec<Element>> {
        self.check_divisor(d)?;
        let target = self.k * d;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for j in 0..self.degree() {
            if rows.len() == target {
                break;
            }
            let mut v = self.trace(&self.basis_element(j), self.n, d)?.0;
            for (row, &pc) in rows.iter().zip(&pivots) {
                let c = v[pc];
                if c != 0 {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = (*x + self.p - fp_poly::mul_mod(c, y, self.p)) % self.p;
                    }
                }
            }
            if let Some(pc) = v.iter().rposition(|&c| c != 0) {
                let inv = fp_poly::inv_mod(v[pc], self.p);
                for x in v.iter_mut() {
                    *x = fp_poly::mul_mod(*x, inv, self.p);
                }
                for row in rows.iter_mut() {
                    let c = row[pc];
                    if c != 0 {
                        for (x, &y) in row.iter_mut().zip(&v) {
                            *x = (*x + self.p - fp_poly::mul_mod(c, y, self.p)) % self.p;
                        }
                    }
                }
                rows.push(v);
                pivots.push(pc);
            }
        }
        debug_assert_eq!(rows.len(), target);
        Ok(rows.into_iter().map(Element).collect())
    }

    /// Every element of `F_{q^d}`, sorted by index.
    pub fn subfield_elements(&self, d: usize) -> Result<Vec<Element>> {
        let basis = self.subfield_basis(d)?;
        let count = (self.p as u128).pow(basis.len() as u32);
        if count > 1 << 24 {
            return Err(Error::CapExceeded {
                what: "subfield enumeration",
                size: count.to_string(),
                cap: (1u64 << 24).to_string(),
            });
        }
        let mut out = Vec::with_capacity(count as usize);
        for mut i in 0..count as u64 {
            let mut e = self.zero();
            for b in &basis {
                let c = i % self.p;
                i /= self.p;
                if c != 0 {
                    e = self.add(&e, &self.scale(c, b));
                }
            }
            out.push(e);
        }
        out.sort();
        Ok(out)
    }

    /// The elements of `F_q` inside this field, sorted by index.
    pub fn base_field_elements(&self) -> Vec<Element> {
        self.subfield_elements(1).expect("1 divides n")
    }

    /// Least (by index) primitive element; the field must be enumerable.
    pub fn least_primitive(&self, order_primes: &[BigUint]) -> Element {
        let order = self.size() - 1u32;
        self.elements()
            .skip(1)
            .find(|a| {
                order_primes
                    .iter()
                    .all(|r| self.pow(a, &(&order / r)) != self.one())
            })
            .expect("every finite field has a primitive element")
    }

    pub fn is_one(&self, a: &Element) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }
}
