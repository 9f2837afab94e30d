//! Smallest-prime-factor sieve and the process-wide shared instance.

use std::sync::OnceLock;

use super::factor::Factorization;

/// Default bound of the shared sieve.
pub const DEFAULT_SIEVE_BOUND: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_SIEVE_BOUND`].
pub const SIEVE_BOUND_ENV: &str = "RFDUAL_SIEVE_BOUND";

/// Smallest prime factor for every integer up to `bound`, plus the primes.
///
/// Built once by a linear sieve and immutable afterwards.
#[derive(Debug, Clone)]
pub struct Sieve {
    bound: u64,
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl Sieve {
    pub fn new(bound: u64) -> Sieve {
        let bound = bound.max(1);
        let len = bound as usize + 1;
        let mut spf = vec![0u32; len];
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            let si = spf[i] as u64;
            for &p in &primes {
                if p > si {
                    break;
                }
                let m = i as u64 * p;
                if m > bound {
                    break;
                }
                spf[m as usize] = p as u32;
            }
        }
        Sieve { bound, spf, primes }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Smallest prime factor of `n`, for `2 <= n <= bound`.
    pub fn smallest_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.bound {
            return None;
        }
        Some(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n < 2 {
            return false;
        }
        if n <= self.bound {
            return self.spf[n as usize] as u64 == n;
        }
        is_prime_trial(n, &self.primes)
    }

    /// Canonical factorization; sieve lookups below the bound, trial
    /// division above it. `n` must be positive.
    pub fn factorize(&self, n: u64) -> Factorization {
        debug_assert!(n > 0);
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        if m > self.bound {
            m = trial_divide(m, &self.primes, self.bound, &mut factors);
        }
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            push_factor(&mut factors, p, e);
        }
        Factorization::from_sorted_unchecked(n, factors)
    }

    /// Primes `<= limit`, ascending. Uses the stored list when it covers `limit`.
    pub fn primes_up_to(&self, limit: u64) -> Vec<u64> {
        if limit <= self.bound {
            let end = self.primes.partition_point(|&p| p <= limit);
            self.primes[..end].to_vec()
        } else {
            Sieve::new(limit).primes
        }
    }
}

fn push_factor(factors: &mut Vec<(u64, u32)>, p: u64, e: u32) {
    if let Some(last) = factors.last_mut() {
        if last.0 == p {
            last.1 += e;
            return;
        }
    }
    factors.push((p, e));
}

/// Strip prime factors from `m` by trial division until the cofactor drops
/// to `<= bound` (so the caller can finish with sieve lookups) or is prime.
fn trial_divide(mut m: u64, primes: &[u64], bound: u64, factors: &mut Vec<(u64, u32)>) -> u64 {
    let mut candidates = primes.iter().copied().chain(odd_candidates_after(primes));
    loop {
        if m <= bound {
            return m;
        }
        let p = candidates.next().expect("candidate stream is unbounded");
        if p.saturating_mul(p) > m {
            factors.push((m, 1));
            return 1;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
}

fn odd_candidates_after(primes: &[u64]) -> impl Iterator<Item = u64> {
    let start = match primes.last() {
        Some(&p) if p >= 3 => p + 2,
        _ => 3,
    };
    (start..).step_by(2)
}

fn is_prime_trial(n: u64, primes: &[u64]) -> bool {
    for p in primes.iter().copied().chain(odd_candidates_after(primes)) {
        if p.saturating_mul(p) > n {
            return true;
        }
        if n % p == 0 {
            return n == p;
        }
    }
    unreachable!()
}

static GLOBAL: OnceLock<Sieve> = OnceLock::new();

/// The shared sieve, built on first use. Its bound is read from
/// `RFDUAL_SIEVE_BOUND` when set and parseable, else [`DEFAULT_SIEVE_BOUND`].
pub fn global() -> &'static Sieve {
    GLOBAL.get_or_init(|| Sieve::new(configured_bound()))
}

fn configured_bound() -> u64 {
    std::env::var(SIEVE_BOUND_ENV)
        .ok()
        .and_then(|v| v.trim().replace('_', "").parse::<u64>().ok())
        .filter(|&b| b >= 2)
        .unwrap_or(DEFAULT_SIEVE_BOUND)
}
