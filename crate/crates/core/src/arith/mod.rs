//! Primes, factorization and the classical arithmetic functions.

mod classical;
mod factor;
mod function;
pub mod sieve;

pub use classical::{
    classical, delta_fn, euler_phi, id_pow_fn, is_square, is_square_by_parity, liouville,
    liouville_fn, mangoldt, mu, mu_fn, mu_of, one_fn, pow_rat, r2, r2_character, r2_lattice,
    radical, tau, FnId, Param,
};
pub use factor::Factorization;
pub use function::ArithmeticFn;
pub use sieve::Sieve;

use crate::error::{Error, Result};

/// Primes in `[2, limit]`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    sieve::global().primes_up_to(limit)
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    Ok(sieve::global().factorize(n))
}

pub fn is_prime(n: u64) -> bool {
    sieve::global().is_prime(n)
}

/// Exponent of the prime `p` in `n`.
pub fn nu_p(p: u64, n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// `mu(n)` for `0 <= n <= limit` (index 0 unused, set to 0) by a linear sieve.
pub fn mobius_table(limit: u64) -> Vec<i8> {
    let limit = limit as usize;
    let mut mu = vec![1i8; limit + 1];
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    mu[0] = 0;
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let Some(ip) = i.checked_mul(p).filter(|&ip| ip <= limit) else { break };
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

/// Divisors of `n`, ascending. Trial division up to `n = 10^4`, generation
/// from the factorization above that.
pub fn divisors(n: u64) -> Vec<u64> {
    if n <= 10_000 {
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                small.push(d);
                if d * d != n {
                    large.push(n / d);
                }
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        small
    } else {
        sieve::global().factorize(n).divisors()
    }
}
