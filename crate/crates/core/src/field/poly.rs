//! Dense univariate polynomials with coefficients in a [`FieldCtx`].
//!
//! Coefficients are low degree first; the zero polynomial is empty.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Element, FieldCtx};

pub type Poly = Vec<Element>;

/// Fixed seed for the randomized splitting steps.
pub const SPLIT_SEED: u64 = 0x6d6d_666f_7267_65;

/// Polynomial arithmetic over one field.
#[derive(Clone, Copy)]
pub struct PolyRing<'a> {
    pub ctx: &'a FieldCtx,
}

impl<'a> PolyRing<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        PolyRing { ctx }
    }

    pub fn trim(&self, f: &mut Poly) {
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
    }

    pub fn degree(&self, f: &[Element]) -> Option<usize> {
        f.iter().rposition(|c| !c.is_zero())
    }

    pub fn one(&self) -> Poly {
        vec![self.ctx.one()]
    }

    pub fn x(&self) -> Poly {
        vec![self.ctx.zero(), self.ctx.one()]
    }

    /// `x^m - 1`.
    pub fn x_pow_minus_one(&self, m: usize) -> Poly {
        let mut f = vec![self.ctx.zero(); m + 1];
        f[0] = self.ctx.neg(&self.ctx.one());
        f[m] = self.ctx.one();
        if m == 0 {
            f.clear();
        }
        f
    }

    /// Lifts a polynomial over `F_p` to this field.
    pub fn from_prime_coeffs(&self, coeffs: &[u64]) -> Poly {
        let mut f: Poly = coeffs.iter().map(|&c| self.ctx.scalar(c)).collect();
        self.trim(&mut f);
        f
    }

    pub fn add(&self, a: &[Element], b: &[Element]) -> Poly {
        let zero = self.ctx.zero();
        let mut out: Poly = (0..a.len().max(b.len()))
            .map(|i| self.ctx.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect();
        self.trim(&mut out);
        out
    }

    pub fn sub(&self, a: &[Element], b: &[Element]) -> Poly {
        let zero = self.ctx.zero();
        let mut out: Poly = (0..a.len().max(b.len()))
            .map(|i| self.ctx.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect();
        self.trim(&mut out);
        out
    }

    pub fn mul(&self, a: &[Element], b: &[Element]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.ctx.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out[i + j] = self.ctx.add(&out[i + j], &self.ctx.mul(x, y));
            }
        }
        self.trim(&mut out);
        out
    }

    pub fn scale(&self, c: &Element, a: &[Element]) -> Poly {
        let mut out: Poly = a.iter().map(|x| self.ctx.mul(c, x)).collect();
        self.trim(&mut out);
        out
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, a: &[Element], b: &[Element]) -> (Poly, Poly) {
        let db = self.degree(b).expect("division by the zero polynomial");
        let mut r: Poly = a.to_vec();
        self.trim(&mut r);
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let lead_inv = self.ctx.inv(&b[db]).expect("nonzero leading coefficient");
        let mut q = vec![self.ctx.zero(); r.len() - db];
        while let Some(dr) = self.degree(&r) {
            if dr < db {
                break;
            }
            let c = self.ctx.mul(&r[dr], &lead_inv);
            let shift = dr - db;
            for (j, bj) in b.iter().enumerate().take(db + 1) {
                if !bj.is_zero() {
                    r[shift + j] = self.ctx.sub(&r[shift + j], &self.ctx.mul(&c, bj));
                }
            }
            q[shift] = c;
            self.trim(&mut r);
        }
        self.trim(&mut q);
        (q, r)
    }

    pub fn rem(&self, a: &[Element], b: &[Element]) -> Poly {
        self.divrem(a, b).1
    }

    pub fn monic(&self, mut a: Poly) -> Poly {
        self.trim(&mut a);
        if let Some(last) = a.last() {
            let inv = self.ctx.inv(last).expect("nonzero");
            a = a.iter().map(|c| self.ctx.mul(c, &inv)).collect();
        }
        a
    }

    /// Monic greatest common divisor (empty when both inputs are zero).
    pub fn gcd(&self, a: &[Element], b: &[Element]) -> Poly {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        self.trim(&mut x);
        self.trim(&mut y);
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(x)
    }

    pub fn mulmod(&self, a: &[Element], b: &[Element], m: &[Element]) -> Poly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, base: &[Element], exp: &BigUint, m: &[Element]) -> Poly {
        let mut result = self.rem(&self.one(), m);
        let b = self.rem(base, m);
        for i in (0..exp.bits()).rev() {
            result = self.mulmod(&result, &result, m);
            if exp.bit(i) {
                result = self.mulmod(&result, &b, m);
            }
        }
        result
    }

    pub fn eval(&self, f: &[Element], x: &Element) -> Element {
        f.iter()
            .rev()
            .fold(self.ctx.zero(), |acc, c| self.ctx.add(&self.ctx.mul(&acc, x), c))
    }

    fn random_poly(&self, rng: &mut ChaCha8Rng, len: usize) -> Poly {
        let d = self.ctx.degree();
        let p = self.ctx.p();
        let mut f: Poly = (0..len)
            .map(|_| self.ctx.element((0..d).map(|_| rng.gen_range(0..p)).collect()).unwrap())
            .collect();
        self.trim(&mut f);
        f
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(r, g_r)` where `g_r` is the product of all irreducible factors
    /// of degree `r`.
    pub fn distinct_degree(&self, f: &[Element]) -> Vec<(usize, Poly)> {
        let q_size = self.ctx.size();
        let x = self.x();
        let mut rest = self.monic(f.to_vec());
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut r = 0;
        while let Some(dr) = self.degree(&rest) {
            r += 1;
            if dr < 2 * r {
                if dr > 0 {
                    out.push((dr, rest));
                }
                break;
            }
            h = self.powmod(&h, &q_size, &rest);
            let g = self.gcd(&rest, &self.sub(&h, &x));
            if self.degree(&g).unwrap_or(0) > 0 {
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((r, g));
            }
        }
        out
    }

    /// Splits a monic squarefree product of irreducibles of common degree `r`.
    pub fn equal_degree(&self, f: &[Element], r: usize) -> Vec<Poly> {
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut out = Vec::new();
        self.equal_degree_into(f.to_vec(), r, &mut rng, &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())));
        out
    }

    fn equal_degree_into(&self, f: Poly, r: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
        let df = self.degree(&f).unwrap_or(0);
        if df <= r {
            if df > 0 {
                out.push(self.monic(f));
            }
            return;
        }
        loop {
            let u = self.random_poly(rng, df);
            if self.degree(&u).unwrap_or(0) == 0 {
                continue;
            }
            let g = self.splitting_gcd(&f, &u, r);
            let dg = self.degree(&g).unwrap_or(0);
            if dg > 0 && dg < df {
                let (h, _) = self.divrem(&f, &g);
                self.equal_degree_into(g, r, rng, out);
                self.equal_degree_into(self.monic(h), r, rng, out);
                return;
            }
        }
    }

    fn splitting_gcd(&self, f: &[Element], u: &[Element], r: usize) -> Poly {
        let p = self.ctx.p();
        if p == 2 {
            // absolute trace of u over F_{2^(degree·r)}
            let mut t = self.rem(u, f);
            let mut cur = t.clone();
            for _ in 1..self.ctx.degree() * r {
                cur = self.mulmod(&cur, &cur, f);
                t = self.add(&t, &cur);
            }
            self.gcd(f, &t)
        } else {
            let e = (self.ctx.size().pow(r as u32) - 1u32) / 2u32;
            let v = self.powmod(u, &e, f);
            self.gcd(f, &self.sub(&v, &self.one()))
        }
    }

    /// Complete factorization of a monic squarefree polynomial into monic
    /// irreducibles, ordered by degree then coefficients.
    pub fn factor_squarefree(&self, f: &[Element]) -> Vec<Poly> {
        let mut out = Vec::new();
        for (r, g) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, r));
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())));
        out
    }

    /// All roots in this field of a polynomial that splits into distinct
    /// linear factors, sorted by element order.
    pub fn roots_of_split(&self, f: &[Element]) -> Vec<Element> {
        let mut roots: Vec<Element> = self
            .equal_degree(&self.monic(f.to_vec()), 1)
            .into_iter()
            .map(|g| self.ctx.neg(&g[0]))
            .collect();
        roots.sort();
        roots
    }
}
