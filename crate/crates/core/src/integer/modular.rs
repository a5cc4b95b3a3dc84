//! Word-sized modular arithmetic: primality, small factorizations and
//! multiplicative orders in `(Z/mZ)^*`.

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization of a word-sized integer.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_factors_u64(n: u64) -> Vec<u64> {
    factor_u64(n).into_iter().map(|(p, _)| p).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi_u64(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// If `q = p^k` for a prime `p`, returns `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factor_u64(q);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// Multiplicative order of `q` modulo `m` (`gcd(q, m) = 1`), found by
/// divisor descent on the factored group order `φ(m)`. Returns 1 for `m = 1`.
pub fn mult_order_mod(q: u64, m: u64) -> u64 {
    assert!(m >= 1);
    if m == 1 {
        return 1;
    }
    debug_assert_eq!(num_integer::gcd(q % m, m), 1, "q must be a unit mod m");
    let mut order = euler_phi_u64(m);
    for (r, _) in factor_u64(order) {
        while order % r == 0 && pow_mod(q, order / r, m) == 1 {
            order /= r;
        }
    }
    order
}

/// Removes every factor `p` from `n`.
pub fn strip_factor(mut n: u64, p: u64) -> u64 {
    if p < 2 {
        return n;
    }
    while n % p == 0 && n > 0 {
        n /= p;
    }
    n
}

/// All primes `≤ bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_by_brute_force() {
        for m in 1..200u64 {
            for q in 2..30u64 {
                if num_integer::gcd(q, m) != 1 {
                    continue;
                }
                let mut e = 1;
                let mut x = q % m;
                while x != 1 % m {
                    x = x * q % m;
                    e += 1;
                }
                assert_eq!(mult_order_mod(q, m), e, "q={q} m={m}");
            }
        }
    }

    #[test]
    fn primality_matches_sieve() {
        let sieve = primes_up_to(10_000);
        let mr: Vec<u64> = (0..=10_000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieve, mr);
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(343), Some((7, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
