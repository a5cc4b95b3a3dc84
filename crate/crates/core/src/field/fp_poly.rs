//! Dense polynomials over a prime field, used for moduli and reduction.
//!
//! Coefficients are stored low degree first and are always reduced mod `p`.
//! The zero polynomial is the empty vector.

use num_bigint::BigUint;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    crate::integer::modular::pow_mod(a, p - 2, p)
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
pub(crate) fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - db;
        q[shift] = c;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            let t = mul_mod(c, bj, p);
            r[shift + j] = (r[shift + j] + p - t) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divrem(a, b, p).1
}

pub(crate) fn make_monic(mut a: Vec<u64>, p: u64) -> Vec<u64> {
    if let Some(d) = degree(&a) {
        let inv = inv_mod(a[d], p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(x, p)
}

/// Returns `(g, s)` with `g = gcd(a, m)` monic and `s·a ≡ g (mod m)`.
pub(crate) fn ext_gcd(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let d = degree(&r0).unwrap_or(0);
    let inv = inv_mod(r0[d], p);
    let scale = |v: Vec<u64>| v.into_iter().map(|c| mul_mod(c, inv, p)).collect::<Vec<_>>();
    let mut s = scale(s0);
    trim(&mut s);
    (scale(r0), s)
}

pub(crate) fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(base: &[u64], exp: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = rem(&[1], m, p);
    let b = rem(base, m, p);
    for i in (0..exp.bits()).rev() {
        result = mulmod(&result, &result, m, p);
        if exp.bit(i) {
            result = mulmod(&result, &b, m, p);
        }
    }
    result
}

/// Rabin's irreducibility test for a monic polynomial of degree `d ≥ 1`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let pb = BigUint::from(p);
    // x^(p^i) mod f for i = 1..=d
    let mut powers = Vec::with_capacity(d);
    let mut cur = x.clone();
    for _ in 0..d {
        cur = powmod(&cur, &pb, f, p);
        powers.push(cur.clone());
    }
    if sub(&powers[d - 1], &x, p) != Vec::<u64>::new() {
        return false;
    }
    let primes: Vec<u64> = crate::integer::modular::prime_factors_u64(d as u64);
    for r in primes {
        let e = d / r as usize;
        let h = sub(&powers[e - 1], &x, p);
        let g = gcd(f, &h, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        // x^2 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 1], 2));
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // x^2 + 1 over F_3
        assert!(is_irreducible(&[1, 0, 1], 3));
        // x^4 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn ext_gcd_inverts() {
        let m = [1, 1, 0, 0, 1];
        let a = [0, 1, 1];
        let (g, s) = ext_gcd(&a, &m, 2);
        assert_eq!(g, vec![1]);
        assert_eq!(mulmod(&a, &s, &m, 2), vec![1]);
    }
}
