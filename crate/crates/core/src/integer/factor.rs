use std::sync::Arc;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::IntFactorization;
use crate::cache::Cache;
use crate::error::{Error, Result};

/// Effort limits for [`factorize`].
///
/// The defaults completely factor every integer below `2^96`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_bound: u64,
    /// Iterations per rho attempt before giving up on a cofactor.
    pub rho_iterations: u64,
    pub seed: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_bound: 1 << 16, rho_iterations: 1 << 27, seed: 0x5eed }
    }
}

const MR_BASES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Miller–Rabin with fixed bases; exact below `3.3·10^24`.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return super::modular::is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor or `None`
/// when the iteration budget runs out.
fn rho(n: &BigUint, budget: u64, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let one = BigUint::one();
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut spent = 0u64;
    while spent < budget {
        let c = rng.gen_biguint_range(&one, n);
        let f = |v: &BigUint| (v * v + &c) % n;
        let mut y = rng.gen_biguint_range(&BigUint::zero(), n);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = one.clone();
        let mut q = one.clone();
        let mut r = 1u64;
        while g == one && spent < budget {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = (q * absdiff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            spent += 2 * r;
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = absdiff(&x, &ys).gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

/// Factors `m ≥ 1`: trial division to `budget.trial_bound`, then seeded
/// Pollard rho. Unsplit composites end up in the cofactor.
pub fn factorize(m: &BigUint, budget: &FactorBudget) -> Result<IntFactorization> {
    if m.is_zero() {
        return Err(Error::FactorZero);
    }
    let mut rest = m.clone();
    let mut found: Vec<BigUint> = Vec::new();
    let mut d = 2u64;
    while d <= budget.trial_bound {
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        while (&rest % d).is_zero() {
            rest /= d;
            found.push(dd.clone());
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut stack = vec![rest];
    let mut cofactor = BigUint::one();
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        let bound = BigUint::from(budget.trial_bound);
        if x <= &bound * &bound || is_probable_prime(&x) {
            found.push(x);
            continue;
        }
        match rho(&x, budget.rho_iterations, &mut rng) {
            Some(f) => {
                let other = &x / &f;
                stack.push(f);
                stack.push(other);
            }
            None => cofactor *= x,
        }
    }
    found.sort();
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    for p in found {
        match primes.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => primes.push((p, 1)),
        }
    }
    let complete = cofactor.is_one();
    Ok(IntFactorization { value: m.clone(), primes, cofactor, complete })
}

/// A budget plus an optional shared cache.
#[derive(Clone, Default)]
pub struct Factorizer {
    pub budget: FactorBudget,
    pub cache: Option<Arc<Cache>>,
}

impl Factorizer {
    pub fn new(budget: FactorBudget, cache: Option<Arc<Cache>>) -> Self {
        Factorizer { budget, cache }
    }

    pub fn factorize(&self, m: &BigUint) -> Result<IntFactorization> {
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.factorization(m) {
                return Ok(hit);
            }
        }
        let f = factorize(m, &self.budget)?;
        if let Some(cache) = &self.cache {
            if f.complete {
                cache.record_factorization(&f)?;
            }
        }
        Ok(f)
    }
}
