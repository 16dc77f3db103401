//! Elementary arithmetic functions on positive integers.

use crate::error::{Error, Result};

/// Prime factorization by trial division, primes ascending.
pub fn prime_factorization(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidParameter("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(out)
}

/// Number of distinct primes dividing `n`.
pub fn distinct_prime_count(n: u64) -> Result<u32> {
    Ok(prime_factorization(n)?.len() as u32)
}

/// Euler's totient, |(Z/m)^×|.
pub fn euler_phi(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidParameter("euler_phi(0) is undefined".into()));
    }
    Ok(prime_factorization(m)?
        .into_iter()
        .fold(m, |acc, (p, _)| acc / p * (p - 1)))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && matches!(prime_factorization(n).as_deref(), Ok([(_, 1)]))
}

/// Floor of the square root, exact for all `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// All positive divisors, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
