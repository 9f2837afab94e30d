use std::fmt;

use crate::error::{Error, Result};

/// Canonical prime-power decomposition of a positive integer.
///
/// Primes are strictly increasing and every exponent is at least one; the
/// factorization of 1 is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Factorization {
        Factorization { n: 1, factors: Vec::new() }
    }

    /// Build from prime-power pairs, validating the canonical-form invariants.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Factorization> {
        let mut n: u64 = 1;
        let mut prev = 1;
        for &(p, e) in &factors {
            if p <= prev || e == 0 {
                return Err(Error::Precondition(format!(
                    "factor list not canonical at ({p}, {e})"
                )));
            }
            prev = p;
            for _ in 0..e {
                n = n.checked_mul(p).ok_or(Error::Overflow("factorization product"))?;
            }
        }
        Ok(Factorization { n, factors })
    }

    pub(crate) fn from_sorted_unchecked(n: u64, factors: Vec<(u64, u32)>) -> Factorization {
        Factorization { n, factors }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent of `p` in `n` (0 when `p` does not divide `n`).
    pub fn nu(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of prime divisors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    /// Factorization of `self.n() * other.n()`.
    pub fn mul(&self, other: &Factorization) -> Result<Factorization> {
        let n = self.n.checked_mul(other.n).ok_or(Error::Overflow("factorization product"))?;
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            match (self.factors.get(i), other.factors.get(j)) {
                (Some(&(p, e)), Some(&(q, f))) if p == q => {
                    out.push((p, e + f));
                    i += 1;
                    j += 1;
                }
                (Some(&(p, e)), Some(&(q, _))) if p < q => {
                    out.push((p, e));
                    i += 1;
                }
                (Some(_), Some(&(q, f))) => {
                    out.push((q, f));
                    j += 1;
                }
                (Some(&pe), None) => {
                    out.push(pe);
                    i += 1;
                }
                (None, Some(&qf)) => {
                    out.push(qf);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Ok(Factorization { n, factors: out })
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_validation() {
        assert!(Factorization::from_factors(vec![(3, 1), (2, 1)]).is_err());
        assert!(Factorization::from_factors(vec![(2, 0)]).is_err());
        let f = Factorization::from_factors(vec![(2, 2), (3, 1)]).unwrap();
        assert_eq!(f.n(), 12);
        assert_eq!(f.divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(f.to_string(), "2^2 * 3");
    }

    #[test]
    fn merge() {
        let a = Factorization::from_factors(vec![(2, 1), (5, 2)]).unwrap();
        let b = Factorization::from_factors(vec![(3, 1), (5, 1), (7, 1)]).unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.n(), 2 * 25 * 3 * 5 * 7);
        assert_eq!(c.factors(), &[(2, 1), (3, 1), (5, 3), (7, 1)]);
        assert_eq!(c.nu(5), 3);
        assert_eq!(c.nu(11), 0);
    }
}
