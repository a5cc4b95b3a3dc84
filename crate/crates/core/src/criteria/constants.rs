//! The constants `𝒞_ν = Π_{p ≤ 2^ν} 2/p^(1/ν)` and their restrictions to
//! primes dividing a given integer or avoiding the characteristic.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integer::modular::primes_up_to;
use crate::integer::{primes_dividing_pow_minus_one, PowerTerm};

/// Largest `ν` accepted; `2^ν` bounds a prime sieve.
pub const MAX_NU: u32 = 26;

/// `2^r / P^(1/ν)` for `r` primes `≤ 2^ν` with product `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CConstant {
    pub nu: u32,
    pub prime_count: u64,
    #[serde(with = "crate::serde_big")]
    pub prime_product: BigUint,
    /// A prime left out of the product (the characteristic for `𝒞'`).
    pub excluded: Option<u64>,
}

fn check_nu(nu: u32) -> Result<()> {
    if nu == 0 || nu > MAX_NU {
        return Err(Error::InvalidParameter(format!("nu = {nu} outside 1..={MAX_NU}")));
    }
    Ok(())
}

impl CConstant {
    fn from_primes(nu: u32, primes: &[u64], excluded: Option<u64>) -> Self {
        CConstant {
            nu,
            prime_count: primes.len() as u64,
            prime_product: primes.iter().map(|&p| BigUint::from(p)).product(),
            excluded,
        }
    }

    /// `𝒞_ν` over every prime `≤ 2^ν`.
    pub fn full(nu: u32) -> Result<Self> {
        check_nu(nu)?;
        Ok(Self::from_primes(nu, &primes_up_to(1 << nu), None))
    }

    /// `𝒞'_ν`: the characteristic `p` removed.
    pub fn without_prime(nu: u32, p: u64) -> Result<Self> {
        check_nu(nu)?;
        let primes: Vec<u64> = primes_up_to(1 << nu).into_iter().filter(|&r| r != p).collect();
        Ok(Self::from_primes(nu, &primes, Some(p)))
    }

    /// `𝒞_ν^(α)` for `α = q^m - 1`: only primes `≤ 2^ν` dividing `α`.
    pub fn for_pow_minus_one(nu: u32, q: u64, m: u64) -> Result<(Self, Vec<u64>)> {
        check_nu(nu)?;
        let primes = primes_dividing_pow_minus_one(&BigUint::from(q), m, 1 << nu);
        Ok((Self::from_primes(nu, &primes, None), primes))
    }

    /// `log2 𝒞`.
    pub fn log2(&self) -> f64 {
        let t = PowerTerm::new(self.prime_product.clone(), 1, self.nu as u64);
        self.prime_count as f64 - crate::integer::log2_gap(&[t], &[])
    }

    pub fn value(&self) -> f64 {
        self.log2().exp2()
    }

    /// Least integer `N ≥ 𝒞·10^s`, decided exactly: `N^ν·P·10^(-sν) ≥ 2^(rν)`.
    pub fn ceil_scaled(&self, s: i32) -> BigUint {
        let nu = self.nu;
        let ten = BigUint::from(10u32);
        let mut num = BigUint::one() << (self.prime_count as usize * nu as usize);
        let mut den = self.prime_product.clone();
        if s >= 0 {
            num *= ten.pow(s as u32 * nu);
        } else {
            den *= ten.pow((-s) as u32 * nu);
        }
        let mut n = (&num / &den).nth_root(nu);
        while n.pow(nu) * &den < num {
            n += 1u32;
        }
        while !n.is_zero() && (&n - 1u32).pow(nu) * &den >= num {
            n -= 1u32;
        }
        n
    }

    /// Rounded up at the printed precision: four decimals below `10^6`
    /// (`2461.6176`), otherwise five significant digits (`5.6009e23`).
    pub fn display(&self) -> String {
        let log10 = self.log2() * std::f64::consts::LOG10_2;
        if log10 < 6.0 {
            let n = self.ceil_scaled(4).to_string();
            let n = format!("{n:0>5}");
            let (int, frac) = n.split_at(n.len() - 4);
            return format!("{int}.{frac}");
        }
        let mut e = log10.floor() as i32;
        loop {
            let n = self.ceil_scaled(4 - e);
            let digits = n.to_string();
            match digits.len() {
                5 => return format!("{}.{}e{e}", &digits[..1], &digits[1..]),
                6 => e += 1,
                _ => e -= 1,
            }
        }
    }
}

/// `𝒞_ν`.
pub fn c_nu(nu: u32) -> Result<CConstant> {
    CConstant::full(nu)
}

/// `(r, P)` for the primes `≤ 2^ν` dividing `q^m - 1`.
pub fn c_nu_alpha(nu: u32, q: u64, m: u64) -> Result<(u64, BigUint)> {
    let (c, _) = CConstant::for_pow_minus_one(nu, q, m)?;
    Ok((c.prime_count, c.prime_product))
}

/// Parses a constant printed as `4514.6266` or `5.6009e23` into
/// `(digits, power of ten)`.
pub fn parse_printed(text: &str) -> Option<(u64, i32)> {
    let (mantissa, exp) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: u64 = format!("{int}{frac}").parse().ok()?;
    Some((digits, exp - frac.len() as i32))
}

/// Whether `c` agrees with a printed value to within one unit of its last digit.
pub fn matches_printed(c: &CConstant, text: &str) -> bool {
    let Some((digits, scale)) = parse_printed(text) else {
        return false;
    };
    let up = c.ceil_scaled(-scale).to_u64();
    up.is_some_and(|u| u == digits || u == digits + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_constants() {
        let c8 = c_nu(8).unwrap();
        assert_eq!(c8.prime_count, 54);
        assert!((c8.value() - 4514.6265).abs() < 1e-3);
        assert_eq!(c8.display(), "4514.6266");
        assert!(matches_printed(&c8, "4514.6266"));
        let c12 = c_nu(12).unwrap();
        assert_eq!(c12.prime_count, 564);
        assert!(matches_printed(&c12, "1.0573e24"));
        assert!(!matches_printed(&c12, "1.0575e24"));
    }

    #[test]
    fn primed_constants() {
        assert_eq!(CConstant::without_prime(12, 2).unwrap().display(), "5.6009e23");
        assert_eq!(CConstant::without_prime(8, 2).unwrap().display(), "2461.6176");
        assert_eq!(CConstant::without_prime(8, 19).unwrap().display(), "3261.6401");
        let ratio = c_nu(12).unwrap().log2() - CConstant::without_prime(12, 2).unwrap().log2();
        assert!((ratio - 11.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_constants() {
        assert_eq!(c_nu_alpha(8, 2, 6).unwrap(), (2, BigUint::from(21u32)));
        let (c, primes) = CConstant::for_pow_minus_one(12, 3, 4).unwrap();
        assert_eq!(primes, vec![2, 5]);
        assert!(c.value() < c_nu(12).unwrap().value());
    }

    #[test]
    fn ceil_is_exact() {
        let c = CConstant::from_primes(2, &[3], None); // 2/3^(1/2) = 1.1547005...
        assert_eq!(c.ceil_scaled(4), BigUint::from(11548u32));
        assert_eq!(c.ceil_scaled(0), BigUint::from(2u32));
        assert_eq!(c.display(), "1.1548");
        let one = CConstant::from_primes(1, &[4], None); // 2/4 = 0.5 exactly
        assert_eq!(one.ceil_scaled(1), BigUint::from(5u32));
    }

    #[test]
    fn parse_printed_forms() {
        assert_eq!(parse_printed("2461.6176"), Some((24616176, -4)));
        assert_eq!(parse_printed("5.6009e23"), Some((56009, 19)));
        assert_eq!(parse_printed("x"), None);
    }
}
