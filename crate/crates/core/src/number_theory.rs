//! Elementary integer number theory: deterministic primality, multiplicative
//! orders, the Wieferich condition, and the Legendre symbol.
//!
//! Everything here is exact for inputs below 2^63 and runs at desk scale;
//! factoring is plain trial division.

use crate::error::{Error, Result};

use serde::{Deserialize, Serialize};

/// An odd prime, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct OddPrime(u64);

impl OddPrime {
    /// Validates that `value` is an odd prime (so at least 3).
    pub fn new(value: u64) -> Result<Self> {
        if value >= 3 && value % 2 == 1 && is_prime(value) {
            Ok(OddPrime(value))
        } else {
            Err(Error::NotOddPrime(value))
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for OddPrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for OddPrime {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = u64::deserialize(de)?;
        OddPrime::new(v).map_err(serde::de::Error::custom)
    }
}

/// Modular exponentiation `base^exp mod m` (m below 2^63).
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin. The witness set below is known to be exact for
/// all n < 3.3 * 10^24, which covers the 2^63 input range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
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

/// Euler's totient via trial-division factoring.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Least t >= 1 with a^t = 1 (mod m). Starts from phi(m) and descends through
/// its prime divisors rather than iterating powers one by one.
pub fn multiplicative_order(a: u64, m: u64) -> Result<u64> {
    if m < 2 || gcd(a % m, m) != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    let mut t = euler_phi(m);
    for (p, _) in factorize(t) {
        while t % p == 0 && mod_pow(a, t / p, m) == 1 {
            t /= p;
        }
    }
    debug_assert_eq!(mod_pow(a, t, m), 1);
    Ok(t)
}

/// The order of 2 modulo p, written lambda throughout the complexity bounds.
pub fn lambda_of(p: OddPrime) -> u64 {
    multiplicative_order(2, p.value()).expect("2 is coprime to any odd prime")
}

/// True iff 2^(p-1) = 1 (mod p^2). Only 1093 and 3511 are known.
pub fn is_wieferich(p: OddPrime) -> bool {
    let p = p.value();
    mod_pow(2, p - 1, p * p) == 1
}

/// Legendre symbol (n/p) by Euler's criterion.
pub fn legendre_symbol(n: i64, p: OddPrime) -> i8 {
    let p = p.value();
    let n = n.rem_euclid(p as i64) as u64;
    if n == 0 {
        return 0;
    }
    let t = mod_pow(n, (p - 1) / 2, p);
    if t == 1 {
        1
    } else {
        debug_assert_eq!(t, p - 1);
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive order oracle: plain power iteration.
    fn order_by_iteration(a: u64, m: u64) -> u64 {
        let mut t = 1;
        let mut x = a % m;
        while x != 1 {
            x = ((x as u128 * a as u128) % m as u128) as u64;
            t += 1;
        }
        t
    }

    #[test]
    fn primality_basics() {
        assert!(is_prime(2));
        assert!(!is_prime(9));
        assert!(is_prime(3511));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        let sieve_primes: Vec<u64> = (2..1000u64)
            .filter(|&n| (2..n).all(|d| d * d > n || n % d != 0))
            .collect();
        for n in 2..1000u64 {
            assert_eq!(is_prime(n), sieve_primes.contains(&n), "n = {n}");
        }
    }

    #[test]
    fn odd_prime_rejects_two_and_composites() {
        assert!(OddPrime::new(2).is_err());
        assert!(OddPrime::new(9).is_err());
        assert!(OddPrime::new(3).is_ok());
    }

    #[test]
    fn orders_match_examples() {
        assert_eq!(multiplicative_order(2, 3).unwrap(), 2);
        assert_eq!(multiplicative_order(2, 9).unwrap(), 6);
        assert_eq!(multiplicative_order(2, 25).unwrap(), 20);
        assert!(multiplicative_order(2, 4).is_err());
    }

    #[test]
    fn orders_match_iteration_oracle() {
        for m in 3..200u64 {
            for a in 2..m {
                if gcd(a, m) == 1 {
                    assert_eq!(
                        multiplicative_order(a, m).unwrap(),
                        order_by_iteration(a, m),
                        "a = {a}, m = {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn order_divides_totient() {
        for m in 3..300u64 {
            let phi = euler_phi(m);
            for a in 2..m {
                if gcd(a, m) == 1 {
                    assert_eq!(phi % multiplicative_order(a, m).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_of(OddPrime::new(3).unwrap()), 2);
        assert_eq!(lambda_of(OddPrime::new(7).unwrap()), 3);
        assert_eq!(lambda_of(OddPrime::new(11).unwrap()), 10);
    }

    #[test]
    fn wieferich_primes_are_rare() {
        assert!(is_wieferich(OddPrime::new(1093).unwrap()));
        assert!(is_wieferich(OddPrime::new(3511).unwrap()));
        assert!(!is_wieferich(OddPrime::new(5).unwrap()));
        for p in (3..1000u64).filter(|&n| is_prime(n)) {
            assert!(!is_wieferich(OddPrime::new(p).unwrap()), "p = {p}");
        }
    }

    #[test]
    fn order_lifts_from_p_to_prime_powers() {
        // ord_{p^r}(2) = lambda * p^(r-1) for non-Wieferich p.
        for p in (3..=200u64).filter(|&n| is_prime(n)) {
            let p = OddPrime::new(p).unwrap();
            if is_wieferich(p) || lambda_of(p) <= 1 {
                continue;
            }
            let lambda = lambda_of(p);
            for r in 2..=3u32 {
                let m = p.value().pow(r);
                assert_eq!(
                    multiplicative_order(2, m).unwrap(),
                    lambda * p.value().pow(r - 1),
                    "p = {p}, r = {r}"
                );
            }
        }
    }

    #[test]
    fn legendre_examples() {
        let p7 = OddPrime::new(7).unwrap();
        assert_eq!(legendre_symbol(0, p7), 0);
        assert_eq!(legendre_symbol(1, p7), 1);
        assert_eq!(legendre_symbol(3, p7), -1);
        // squares mod 7 are {1, 2, 4}
        for (n, want) in [(1, 1), (2, 1), (3, -1), (4, 1), (5, -1), (6, -1)] {
            assert_eq!(legendre_symbol(n, p7), want);
        }
        // negative arguments reduce mod p first
        assert_eq!(legendre_symbol(-4, p7), legendre_symbol(3, p7));
    }

    #[test]
    fn legendre_is_multiplicative() {
        for p in (3..=50u64).filter(|&n| is_prime(n)) {
            let p = OddPrime::new(p).unwrap();
            for a in 1..p.value() as i64 {
                for b in 1..p.value() as i64 {
                    assert_eq!(
                        legendre_symbol(a * b, p),
                        legendre_symbol(a, p) * legendre_symbol(b, p)
                    );
                }
            }
        }
    }
}
