//! Classification of extensions (completely basic, regular, partially
//! completely basic splits) and the existence inequalities.

mod conditions;
mod constants;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integer::modular::{divisors, factor_u64, mult_order_mod, prime_power, strip_factor};

pub use conditions::{
    check_main_condition, condition_registry, eq72_check, largest_failing_n2, small_q_ab,
    threshold_registry, CheckEnv, Condition, ConditionReport, MainMode, Mode, Provenance,
    ThresholdReport, ThresholdVariant,
};
pub use constants::{c_nu, c_nu_alpha, matches_printed, parse_printed, CConstant, MAX_NU};

/// Per-prime data behind the completely basic criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeDiagnostic {
    /// The prime divisor `r` of `n`.
    pub r: u64,
    /// `n / r`.
    pub m: u64,
    /// `m` with the characteristic removed.
    pub m_prime: u64,
    /// Order of `q` modulo `m_prime`.
    pub d: u64,
    /// `r | d`, which breaks the criterion.
    pub r_divides_d: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicReport {
    pub q: u64,
    pub n: u64,
    pub completely_basic: bool,
    pub primes: Vec<PrimeDiagnostic>,
}

fn characteristic(q: u64) -> Result<u64> {
    prime_power(q).map(|(p, _)| p).ok_or(Error::NotPrimePower(q))
}

/// `F_{q^n}/F_q` is completely basic iff `r ∤ ord_{m'}(q)` for every prime
/// `r | n`, where `m'` is the part of `n/r` prime to the characteristic.
pub fn completely_basic_report(q: u64, n: u64) -> Result<BasicReport> {
    let p = characteristic(q)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let primes: Vec<PrimeDiagnostic> = factor_u64(n)
        .into_iter()
        .map(|(r, _)| {
            let m = n / r;
            let m_prime = strip_factor(m, p);
            let d = mult_order_mod(q % m_prime, m_prime);
            PrimeDiagnostic { r, m, m_prime, d, r_divides_d: d % r == 0 }
        })
        .collect();
    let completely_basic = primes.iter().all(|d| !d.r_divides_d);
    Ok(BasicReport { q, n, completely_basic, primes })
}

pub fn is_completely_basic(q: u64, n: u64) -> Result<bool> {
    Ok(completely_basic_report(q, n)?.completely_basic)
}

/// `gcd(n, ord_{rad'(n)}(q)) = 1`, `rad'(n)` the product of the primes of
/// `n` other than the characteristic.
pub fn is_regular(q: u64, n: u64) -> Result<bool> {
    let p = characteristic(q)?;
    let rad: u64 = factor_u64(n).into_iter().map(|(r, _)| r).filter(|&r| r != p).product();
    let d = mult_order_mod(q % rad, rad);
    Ok(num_integer::gcd(n, d) == 1)
}

/// Ordered splits `n = n1·n2` with `n1, n2 > 1` coprime and `F_{q^n2}/F_q`
/// completely basic, by increasing `n1`.
pub fn pcb_decompositions(q: u64, n: u64) -> Result<Vec<(u64, u64)>> {
    characteristic(q)?;
    let mut out = Vec::new();
    for n1 in divisors(n) {
        let n2 = n / n1;
        if n1 > 1 && n2 > 1 && num_integer::gcd(n1, n2) == 1 && is_completely_basic(q, n2)? {
            out.push((n1, n2));
        }
    }
    Ok(out)
}

/// Why each coprime split of `n` fails to be partially completely basic.
pub fn pcb_rejections(q: u64, n: u64) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for n1 in divisors(n) {
        let n2 = n / n1;
        if n1 == 1 || n2 == 1 {
            continue;
        }
        if num_integer::gcd(n1, n2) != 1 {
            out.push(format!("({n1}, {n2}): parts not coprime"));
        } else if !is_completely_basic(q, n2)? {
            out.push(format!("({n1}, {n2}): degree-{n2} extension not completely basic"));
        }
    }
    if out.is_empty() {
        out.push(format!("{n} has no factorization into two parts greater than 1"));
    }
    Ok(out)
}
