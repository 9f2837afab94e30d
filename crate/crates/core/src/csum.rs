//! Ramanujan sums `c_q(n)` by three independent routes, plus a dense table.
//!
//! * [`csum_expsum`] sums `exp(2 pi i k n / q)` over `k` coprime to `q` in
//!   floating point. Test oracle only, capped at `q <= 10^4`.
//! * [`csum_gcd`] is the divisor sum `sum_{d | (q,n)} mu(q/d) d`.
//! * [`csum_mult`] multiplies local factors over the primes of `q`, using
//!   joint multiplicativity in `(q, n)`. This is the production path.
//!
//! The local factor at a prime power follows from the divisor sum at
//! `(p^a, p^b)`:
//!
//! ```text
//! c_{p^a}(p^b ...) = p^a - p^(a-1)   if b >= a
//!                  = -p^(a-1)        if b == a - 1
//!                  = 0               if b <  a - 1
//! ```

use std::io::{self, Read, Write};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{divisors, mu, sieve, Factorization};
use crate::error::{Error, Result};

/// Largest modulus accepted by the floating-point oracle.
pub const EXPSUM_MAX_Q: u64 = 10_000;

/// Default cap on `Q * N` for [`build_table`]: 2^26 cells (512 MiB).
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 26;

pub const TABLE_MAGIC: &[u8; 4] = b"CQNT";
pub const TABLE_VERSION: u32 = 1;

const SPOT_CHECK_SEED: u64 = 0x5eed_c0de;

/// Exponential-sum oracle. Requires `q <= 10^4`; fails if the sum is not
/// within `1e-4` of an integer or has an imaginary part of `1e-6` or more.
pub fn csum_expsum(q: u64, n: u64) -> Result<i64> {
    if q == 0 || n == 0 {
        return Err(Error::NonPositive(0));
    }
    if q > EXPSUM_MAX_Q {
        return Err(Error::Precondition(format!("exponential-sum oracle needs q <= {EXPSUM_MAX_Q}, got {q}")));
    }
    let r = n % q;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for k in 1..=q {
        if k.gcd(&q) != 1 {
            continue;
        }
        // reduce k n mod q before scaling so the angle stays in [0, 2 pi)
        let m = ((k as u128 * r as u128) % q as u128) as f64;
        let theta = std::f64::consts::TAU * m / q as f64;
        re += theta.cos();
        im += theta.sin();
    }
    let rounded = re.round();
    if im.abs() >= 1e-6 || (re - rounded).abs() > 1e-4 {
        return Err(Error::NumericTrouble { q, n, value: re });
    }
    Ok(rounded as i64)
}

/// `c_q(n) = sum_{d | gcd(q, n)} mu(q/d) d`.
pub fn csum_gcd(q: u64, n: u64) -> i64 {
    let g = q.gcd(&n);
    divisors(g).into_iter().map(|d| mu(q / d) * d as i64).sum()
}

/// Local factor `c_{p^a}` evaluated at an argument with `p`-adic valuation `b`.
pub fn local_factor(p: u64, a: u32, b: u32) -> i64 {
    if a == 0 {
        return 1;
    }
    let pa1 = (p as i64).pow(a - 1);
    if b >= a {
        pa1 * (p as i64 - 1)
    } else if b + 1 == a {
        -pa1
    } else {
        0
    }
}

/// `c_q(n)` as a product of local factors over the primes dividing `q`.
pub fn csum_mult(q: u64, n: u64) -> i64 {
    csum_mult_factored(&sieve::global().factorize(q), n)
}

pub fn csum_mult_factored(q: &Factorization, n: u64) -> i64 {
    let mut acc = 1i64;
    for &(p, a) in q.factors() {
        let mut b = 0;
        let mut m = n;
        while b < a && m % p == 0 {
            m /= p;
            b += 1;
        }
        acc *= local_factor(p, a, b);
        if acc == 0 {
            break;
        }
    }
    acc
}

/// One row `n -> c_q(n)` for a fixed modulus, stored over a single period.
#[derive(Debug, Clone)]
pub struct CsumRow {
    q: u64,
    period: Vec<i64>,
    max_abs: i64,
}

impl CsumRow {
    pub fn new(q: u64) -> CsumRow {
        assert!(q >= 1, "modulus must be positive");
        let fq = sieve::global().factorize(q);
        // c_q(n) depends on n only through gcd(q, n)
        let by_divisor: Vec<(u64, i64)> =
            fq.divisors().into_iter().map(|d| (d, csum_mult_factored(&fq, d))).collect();
        let lookup = |g: u64| by_divisor.iter().find(|&&(d, _)| d == g).map(|&(_, v)| v).unwrap();
        let period: Vec<i64> = (0..q).map(|r| lookup(if r == 0 { q } else { r.gcd(&q) })).collect();
        let max_abs = by_divisor.iter().map(|&(_, v)| v.abs()).max().unwrap_or(1);
        CsumRow { q, period, max_abs }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn get(&self, n: u64) -> i64 {
        self.period[(n % self.q) as usize]
    }

    /// `max_n |c_q(n)|`, attained at multiples of `q` where it equals `phi(q)`.
    pub fn max_abs(&self) -> i64 {
        self.max_abs
    }
}

/// Dense row-major table of `c_q(n)` for `1 <= q <= Q`, `1 <= n <= N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsumTable {
    q_max: u32,
    n_max: u32,
    entries: Vec<i64>,
}

impl CsumTable {
    pub fn q_max(&self) -> u32 {
        self.q_max
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// `c_q(n)`; panics outside the table bounds.
    pub fn get(&self, q: u64, n: u64) -> i64 {
        assert!(q >= 1 && q <= self.q_max as u64 && n >= 1 && n <= self.n_max as u64);
        self.entries[(q as usize - 1) * self.n_max as usize + (n as usize - 1)]
    }

    pub fn row(&self, q: u64) -> &[i64] {
        let w = self.n_max as usize;
        let start = (q as usize - 1) * w;
        &self.entries[start..start + w]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// CSV with header `q,n,c`, one row per cell, LF endings.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "q,n,c")?;
        for q in 1..=self.q_max as u64 {
            for (i, c) in self.row(q).iter().enumerate() {
                writeln!(w, "{},{},{}", q, i + 1, c)?;
            }
        }
        Ok(())
    }

    /// Binary dump: magic `CQNT`, then version, Q and N as little-endian
    /// `u32`, then the entries as little-endian `i64`, row-major.
    pub fn write_binary<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(TABLE_MAGIC)?;
        w.write_all(&TABLE_VERSION.to_le_bytes())?;
        w.write_all(&self.q_max.to_le_bytes())?;
        w.write_all(&self.n_max.to_le_bytes())?;
        for c in &self.entries {
            w.write_all(&c.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<CsumTable> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header).map_err(|e| Error::Format(e.to_string()))?;
        if &header[0..4] != TABLE_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap());
        let (version, q_max, n_max) = (word(4), word(8), word(12));
        if version != TABLE_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let cells = q_max as usize * n_max as usize;
        let mut body = vec![0u8; cells * 8];
        r.read_exact(&mut body).map_err(|e| Error::Format(e.to_string()))?;
        let entries = body.chunks_exact(8).map(|c| i64::from_le_bytes(c.try_into().unwrap())).collect();
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing).map_err(|e| Error::Format(e.to_string()))? != 0 {
            return Err(Error::Format("trailing bytes after table body".into()));
        }
        Ok(CsumTable { q_max, n_max, entries })
    }
}

/// Build a `Q x N` table with the default memory budget.
pub fn build_table(q_max: u32, n_max: u32) -> Result<CsumTable> {
    build_table_with_budget(q_max, n_max, DEFAULT_TABLE_BUDGET)
}

/// Fill rows in parallel via [`csum_mult`], then spot-check a fixed
/// pseudorandom 1% of cells (at least one) against [`csum_gcd`].
pub fn build_table_with_budget(q_max: u32, n_max: u32, budget_cells: u64) -> Result<CsumTable> {
    if q_max == 0 || n_max == 0 {
        return Err(Error::NonPositive(0));
    }
    let cells = q_max as u64 * n_max as u64;
    if cells > budget_cells {
        return Err(Error::BudgetExceeded { cells, budget: budget_cells });
    }
    let width = n_max as usize;
    let mut entries = vec![0i64; cells as usize];
    entries.par_chunks_mut(width).enumerate().for_each(|(i, row)| {
        let q = i as u64 + 1;
        let fq = sieve::global().factorize(q);
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = csum_mult_factored(&fq, j as u64 + 1);
        }
    });
    let table = CsumTable { q_max, n_max, entries };

    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
    let samples = (cells / 100).max(1);
    for _ in 0..samples {
        let q = rng.gen_range(1..=q_max as u64);
        let n = rng.gen_range(1..=n_max as u64);
        if table.get(q, n) != csum_gcd(q, n) {
            return Err(Error::SpotCheck { q, n });
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expsum_examples() {
        for n in [1, 2, 17, 999] {
            assert_eq!(csum_expsum(1, n), Ok(1));
        }
        assert_eq!(csum_expsum(2, 7), Ok(-1));
        assert_eq!(csum_expsum(5, 5), Ok(4));
        assert!(csum_expsum(10_001, 1).is_err());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(csum_gcd(4, 2), -2);
        assert_eq!(csum_gcd(6, 3), -2);
        assert_eq!(csum_gcd(30, 1), -1);
    }

    #[test]
    fn mult_examples() {
        assert_eq!(csum_mult(12, 18), csum_gcd(12, 18));
        assert_eq!(csum_mult(12, 18), csum_mult(4, 18) * csum_mult(3, 18));
        assert_eq!(csum_mult(1, 1), 1);
        assert_eq!(csum_mult(7, 10), -1);
    }

    #[test]
    fn table_examples() {
        let t = build_table(1, 5).unwrap();
        assert_eq!(t.row(1), &[1, 1, 1, 1, 1]);
        let t = build_table(3, 3).unwrap();
        assert_eq!(t.row(1), &[1, 1, 1]);
        assert_eq!(t.row(2), &[-1, 1, -1]);
        assert_eq!(t.row(3), &[-1, -1, 2]);
    }

    #[test]
    fn table_budget() {
        assert_eq!(
            build_table_with_budget(100, 100, 9_999),
            Err(Error::BudgetExceeded { cells: 10_000, budget: 9_999 })
        );
    }

    #[test]
    fn table_invariants() {
        let t = build_table(64, 64).unwrap();
        for q in 1..=64u64 {
            assert_eq!(t.get(q, 1), mu(q));
            for n in 1..=64u64 {
                assert_eq!(t.get(1, n), 1);
                assert_eq!(t.get(q, n), csum_gcd(q, n));
                assert_eq!(Ok(t.get(q, n)), csum_expsum(q, n));
            }
        }
    }

    #[test]
    fn row_matches_direct() {
        for q in 1..=60 {
            let row = CsumRow::new(q);
            for n in 1..=200 {
                assert_eq!(row.get(n), csum_gcd(q, n), "q={q} n={n}");
            }
            assert_eq!(row.max_abs(), crate::arith::euler_phi(q) as i64);
        }
    }

    #[test]
    fn csv_layout() {
        let t = build_table(2, 2).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "q,n,c\n1,1,1\n1,2,1\n2,1,-1\n2,2,1\n");
    }

    #[test]
    fn binary_layout() {
        let t = build_table(2, 3).unwrap();
        let mut buf = Vec::new();
        t.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 6 * 8);
        assert_eq!(&buf[..4], b"CQNT");
        assert_eq!(&buf[4..16], &[1, 0, 0, 0, 2, 0, 0, 0, 3, 0, 0, 0]);
        // c_2(1) = -1 is the fourth cell
        assert_eq!(&buf[16 + 3 * 8..16 + 4 * 8], &(-1i64).to_le_bytes());
        assert!(CsumTable::read_binary(&buf[..buf.len() - 1]).is_err());
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(CsumTable::read_binary(&bad[..]).is_err());
        let mut long = buf.clone();
        long.push(0);
        assert!(CsumTable::read_binary(&long[..]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn binary_roundtrip(q in 1u32..40, n in 1u32..40) {
            let t = build_table(q, n).unwrap();
            let mut buf = Vec::new();
            t.write_binary(&mut buf).unwrap();
            proptest::prop_assert_eq!(CsumTable::read_binary(&buf[..]).unwrap(), t);
        }

        #[test]
        fn mult_equals_gcd(q in 1u64..5_000, n in 1u64..1_000_000) {
            proptest::prop_assert_eq!(csum_mult(q, n), csum_gcd(q, n));
        }
    }
}
