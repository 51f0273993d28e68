//! Factorisation and the generalised Euler function
//! `φ^k(n) = card{1 ≤ m ≤ n : gcd(m, n) = … = gcd(m+k−1, n) = 1}`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Prime factorisation as ascending `(prime, exponent)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization(pub Vec<(u64, u32)>);

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|(p, _)| *p)
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|(p, a)| p.pow(*a)).product()
    }
}

/// Trial division. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Result<Factorization, Error> {
    if n == 0 {
        return Err(Error::InvalidParameter("cannot factorise 0".into()));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut a = 0;
            while n.is_multiple_of(p) {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(Factorization(out))
}

fn check(k: u64, n: u64) -> Result<(), Error> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("φ^k(n) needs k, n ≥ 1, got k={k}, n={n}")));
    }
    Ok(())
}

/// `φ^k(n) = n ∏ (1 − k/p)` over the primes dividing `n`, or 0 if some `p ≤ k`.
pub fn phi_k(k: u64, n: u64) -> Result<u64, Error> {
    check(k, n)?;
    let f = factorize(n)?;
    if f.primes().any(|p| p <= k) {
        return Ok(0);
    }
    // n ∏ (p − k)/p = ∏ p^(a−1) (p − k)
    Ok(f.0.iter().map(|(p, a)| p.pow(a - 1) * (p - k)).product())
}

/// `φ^k(n)` straight from the definition.
pub fn phi_k_brute(k: u64, n: u64) -> Result<u64, Error> {
    check(k, n)?;
    Ok((1..=n).filter(|m| (0..k).all(|i| (m + i).gcd(&n) == 1)).count() as u64)
}

/// `φ²(2j+1)`, the number of optimal packing (and covering) lattices.
pub fn count_optimal_lattices(j: u32) -> Result<u64, Error> {
    if j == 0 {
        return Err(Error::InvalidParameter("j must be at least 1".into()));
    }
    phi_k(2, 2 * j as u64 + 1)
}

/// Whether `φ^k(mn) = φ^k(m)·φ^k(n)` for every pair. Pairs must be coprime.
pub fn is_multiplicative_check(k: u64, pairs: &[(u64, u64)]) -> Result<bool, Error> {
    for &(m, n) in pairs {
        if m.gcd(&n) != 1 {
            return Err(Error::NotCoprime(m, n));
        }
    }
    for &(m, n) in pairs {
        if phi_k(k, m * n)? != phi_k(k, m)? * phi_k(k, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}
