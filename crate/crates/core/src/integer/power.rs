use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `base^(num/den)` with a nonnegative rational exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerTerm {
    #[serde(with = "crate::serde_big")]
    pub base: BigUint,
    pub num: u64,
    pub den: u64,
}

impl PowerTerm {
    pub fn new(base: impl Into<BigUint>, num: u64, den: u64) -> Self {
        PowerTerm { base: base.into(), num, den }
    }

    pub fn int(base: impl Into<BigUint>) -> Self {
        PowerTerm::new(base, 1, 1)
    }

    fn log2(&self) -> f64 {
        let shift = self.base.bits().saturating_sub(64);
        let top = (&self.base >> shift).to_f64().unwrap_or(0.0);
        (top.log2() + shift as f64) * self.num as f64 / self.den as f64
    }
}

fn cleared_product(terms: &[PowerTerm], clearing: u64) -> Result<BigUint> {
    let mut acc = BigUint::one();
    for t in terms {
        if t.den == 0 || clearing % t.den != 0 {
            return Err(Error::UnclearedExponent { clearing, den: t.den });
        }
        let e = t.num * (clearing / t.den);
        acc *= t.base.pow(u32::try_from(e).map_err(|_| {
            Error::InvalidParameter(format!("exponent {e} too large"))
        })?);
    }
    Ok(acc)
}

/// Decides `Π lhs > Π rhs` exactly by raising both sides to `clearing`,
/// which must be a multiple of every exponent denominator.
pub fn power_inequality(lhs: &[PowerTerm], rhs: &[PowerTerm], clearing: u64) -> Result<bool> {
    Ok(cleared_product(lhs, clearing)? > cleared_product(rhs, clearing)?)
}

/// Signed base-2 log gap `log2(Π lhs) - log2(Π rhs)` in double precision.
pub fn log2_gap(lhs: &[PowerTerm], rhs: &[PowerTerm]) -> f64 {
    lhs.iter().map(PowerTerm::log2).sum::<f64>() - rhs.iter().map(PowerTerm::log2).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integer::{primes_dividing_pow_minus_one, FactorBudget};
    use proptest::prelude::*;

    #[test]
    fn two_to_the_one_is_not_above_three() {
        let lhs = [PowerTerm::new(2u32, 4, 4)];
        let rhs = [PowerTerm::int(3u32)];
        assert!(!power_inequality(&lhs, &rhs, 4).unwrap());
    }

    #[test]
    fn strict_inequality_is_irreflexive() {
        for a in [2u32, 7, 1000] {
            for (m, nu) in [(3u64, 8u64), (5, 12), (12, 12)] {
                let t = [PowerTerm::new(a, m, nu)];
                assert!(!power_inequality(&t, &t, nu).unwrap());
            }
        }
    }

    #[test]
    fn rejects_uncleared_exponent() {
        let lhs = [PowerTerm::new(17u32, 1, 4)];
        assert_eq!(
            power_inequality(&lhs, &[], 6),
            Err(Error::UnclearedExponent { clearing: 6, den: 4 })
        );
    }

    /// 17^(n2/4) > 3·(2^r / P^(1/12))·2^k for q = 17, n1 = 3, n2 = 4,
    /// decided as 17^(3·n2)·P > 3^12·2^(12(r+k)).
    #[test]
    fn cleared_instance_for_q17() {
        let (q, n1, n2) = (17u64, 3u64, 4u64);
        let primes = primes_dividing_pow_minus_one(&BigUint::from(q), n1 * n2, 4096);
        let r = primes.len() as u64;
        let p_prod: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
        // x^4 - 1 over F_17 splits into 4 linear factors since 4 | 16
        let k = 4u64;
        let lhs = [PowerTerm::new(q, n2, 4), PowerTerm::new(p_prod.clone(), 1, 12)];
        let rhs = [PowerTerm::int(3u32), PowerTerm::new(2u32, r + k, 1)];
        let direct = BigUint::from(q).pow((n1 * n2) as u32) * &p_prod
            > BigUint::from(3u32).pow(12) * BigUint::from(2u32).pow((12 * (r + k)) as u32);
        assert_eq!(power_inequality(&lhs, &rhs, 12).unwrap(), direct);
        // the oracle: 17^12 - 1 = 2^6·3^2·5·... ; factor it independently
        let f = crate::integer::factorize(&(BigUint::from(q).pow(12) - 1u32), &FactorBudget::default())
            .unwrap();
        let small: Vec<u64> = f
            .primes
            .iter()
            .map(|(p, _)| num_traits::ToPrimitive::to_u64(p).unwrap())
            .filter(|&p| p <= 4096)
            .collect();
        assert_eq!(small, primes);
    }

    proptest! {
        #[test]
        fn agrees_with_float_away_from_boundary(
            a in 2u64..10_000, an in 1u64..40, ad in 1u64..13,
            b in 2u64..10_000, bn in 1u64..40, bd in 1u64..13,
        ) {
            let lhs = [PowerTerm::new(a, an, ad)];
            let rhs = [PowerTerm::new(b, bn, bd)];
            let clearing = num_integer::lcm(ad, bd);
            let exact = power_inequality(&lhs, &rhs, clearing).unwrap();
            let gap = log2_gap(&lhs, &rhs);
            if gap.abs() > 1e-9 {
                prop_assert_eq!(exact, gap > 0.0);
            }
        }
    }
}
