//! Big-integer factorization at desk scale, the multiplicative functions
//! `W`, `μ`, `φ`, `θ`, and exact decisions of fractional-power inequalities.

mod factor;
pub mod modular;
mod power;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use factor::{factorize, is_probable_prime, FactorBudget, Factorizer};
pub use power::{log2_gap, power_inequality, PowerTerm};

/// Factored form of a positive integer.
///
/// `primes` is strictly increasing; `value = Π p^e · cofactor`, and
/// `cofactor = 1` exactly when `complete`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntFactorization {
    pub value: BigUint,
    pub primes: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
    pub complete: bool,
}

impl IntFactorization {
    pub fn distinct_primes(&self) -> impl Iterator<Item = &BigUint> {
        self.primes.iter().map(|(p, _)| p)
    }

    pub fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::IncompleteFactorization(self.value.to_string()))
        }
    }

    /// Product of the recovered prime powers times the cofactor.
    pub fn product(&self) -> BigUint {
        self.primes
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e))
    }
}

/// Values of the multiplicative functions attached to a factored integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultFunctions {
    /// Number of squarefree divisors, `2^ω(m)`.
    pub w: BigUint,
    /// `μ(d)` for every squarefree divisor `d` of `m`.
    pub mobius: BTreeMap<BigUint, i8>,
    pub phi: BigUint,
    pub radical: BigUint,
    pub squarefree_part: BigUint,
    /// `θ(m') = φ(m')/m'` for the squarefree part `m'`.
    pub theta: BigRational,
}

pub fn mult_functions(f: &IntFactorization) -> Result<MultFunctions> {
    f.require_complete()?;
    let r = f.primes.len();
    let w = BigUint::one() << r;
    let phi = f
        .primes
        .iter()
        .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(e - 1) * (p - 1u32));
    let radical = f.distinct_primes().fold(BigUint::one(), |acc, p| acc * p);
    let phi_rad = f.distinct_primes().fold(BigUint::one(), |acc, p| acc * (p - 1u32));
    let theta = BigRational::new(BigInt::from(phi_rad), BigInt::from(radical.clone()));
    let mut mobius = BTreeMap::new();
    for mask in 0u64..(1u64 << r) {
        let mut d = BigUint::one();
        for (i, (p, _)) in f.primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= p;
            }
        }
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        mobius.insert(d, sign);
    }
    Ok(MultFunctions { w, mobius, phi, radical: radical.clone(), squarefree_part: radical, theta })
}

/// The primes `r ≤ bound` with `q^m ≡ 1 (mod r)`, in increasing order.
pub fn primes_dividing_pow_minus_one(q: &BigUint, m: u64, bound: u64) -> Vec<u64> {
    modular::primes_up_to(bound)
        .into_iter()
        .filter(|&r| {
            let qr = (q % r).to_u64().unwrap();
            qr != 0 && modular::pow_mod(qr, m, r) == 1
        })
        .collect()
}
