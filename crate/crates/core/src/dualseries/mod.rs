//! Dual expansions `f(q) = sum_n a(n) c_q(n)`.
//!
//! Going from coefficients to `f`: `A(q) = q sum_k a(kq)` and `f = A * mu`.
//! Going back: `a(n) = sum_m (f*1)(nm)/(nm) mu(m)`, or for multiplicative `f`
//! the Euler product with local factors
//! `g(p^v)/p^v - g(p^(v+1))/p^(v+1)`, `g = f*1`, `v = nu_p(n)`.

pub mod catalog;

use rayon::prelude::*;

use crate::arith::{divisors, mobius_table, mu, one_fn, sieve, ArithmeticFn, Factorization};
use crate::csum::CsumRow;
use crate::dseries::{euler_product, EulerProduct};
use crate::error::{Error, Result};
use crate::report::Grouping;
use crate::summation::CompensatedSum;
use crate::value::Value;

pub use catalog::{catalog, IdentityCase, TailEnvelope, DUAL_CASE_IDS};

/// Default truncation for coefficient sums.
pub const DEFAULT_M: u64 = 100_000;
/// Default prime bound for Euler products.
pub const DEFAULT_P: u64 = 100_000;
/// Default number of series terms.
pub const DEFAULT_N: u64 = 100_000;

const CHUNK: usize = 4096;

/// `A(q)` truncated at `k <= K`, with an optional tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ATransform {
    pub q: u64,
    pub k_max: u64,
    pub value: Value,
    pub tail_bound: Option<f64>,
}

/// `q sum_{k <= K} a(kq)`, evaluated in the value class of `a`. Pass a float
/// copy of `a` when its support is infinite and `K` is large.
pub fn a_transform(a: &ArithmeticFn, q: u64, k_max: u64) -> ATransform {
    let q_val = Value::int(q as i64);
    let value = if a.is_exact() {
        let s: Value = (1..=k_max).map(|k| a.eval(k * q)).sum();
        s * q_val
    } else {
        let s = (1..=k_max).map(|k| a.eval_f64(k * q)).collect::<CompensatedSum>().value();
        Value::float(s * q as f64)
    };
    ATransform { q, k_max, value, tail_bound: None }
}

/// `(A * mu)(q)` with `A` truncated at `K`.
pub fn dual_f_from_a(a: &ArithmeticFn, q: u64, k_max: u64) -> Value {
    divisors(q)
        .into_iter()
        .filter(|&d| mu(q / d) != 0)
        .map(|d| a_transform(a, d, k_max).value * Value::int(mu(q / d)))
        .sum()
}

/// `sum_{n <= N} a(n) c_q(n)` in the value class of `a`.
pub fn dual_sum_exact(a: &ArithmeticFn, q: u64, n_max: u64) -> Value {
    let row = CsumRow::new(q);
    (1..=n_max).map(|n| a.eval(n) * Value::int(row.get(n))).sum()
}

/// A truncated series value and the number of terms summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSum {
    pub value: f64,
    pub terms: u64,
}

/// Number of terms to sum: `N` itself, or for period grouping the largest
/// multiple of `q` not above `N`.
pub fn stop_point(q: u64, n_max: u64, grouping: Grouping) -> Result<u64> {
    match grouping {
        Grouping::Natural => Ok(n_max),
        Grouping::PeriodGrouped if q < 2 => {
            Err(Error::Precondition("period-grouped summation needs q >= 2".into()))
        }
        Grouping::PeriodGrouped if n_max < q => {
            Err(Error::Precondition(format!("period-grouped summation needs N >= q = {q}")))
        }
        Grouping::PeriodGrouped => Ok(n_max - n_max % q),
    }
}

/// `[a(1), ..., a(N)]` as floats, evaluated in parallel.
pub fn coefficients(a: &ArithmeticFn, n_max: u64) -> Vec<f64> {
    (1..=n_max).into_par_iter().map(|n| a.eval_f64(n)).collect()
}

/// `sum_{n <= stop} a(n) c_q(n)` in natural order.
pub fn dual_partial(a: &ArithmeticFn, q: u64, n_max: u64, grouping: Grouping) -> Result<PartialSum> {
    let stop = stop_point(q, n_max, grouping)?;
    dual_partial_from(&coefficients(a, stop), q, stop, grouping)
}

/// As [`dual_partial`] with precomputed coefficients (`coeffs[n-1] = a(n)`).
pub fn dual_partial_from(coeffs: &[f64], q: u64, n_max: u64, grouping: Grouping) -> Result<PartialSum> {
    let stop = stop_point(q, n_max, grouping)?;
    if stop as usize > coeffs.len() {
        return Err(Error::Precondition(format!("{} coefficients supplied, {stop} needed", coeffs.len())));
    }
    let row = CsumRow::new(q);
    let mut acc = CompensatedSum::new();
    for (i, &a) in coeffs[..stop as usize].iter().enumerate() {
        let c = row.get(i as u64 + 1);
        if c != 0 && a != 0.0 {
            acc.add(a * c as f64);
        }
    }
    Ok(PartialSum { value: acc.value(), terms: stop })
}

/// A recovered coefficient with an estimate of the truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffEstimate {
    pub value: f64,
    pub tail_estimate: f64,
}

/// Sum `term(m)` over squarefree `m` in `[lo, hi]`, in fixed-size chunks
/// that are combined in ascending order so the result is deterministic.
fn chunked_sum<T>(lo: u64, hi: u64, mobius: &[i8], term: T) -> f64
where
    T: Fn(u64, i8) -> f64 + Sync,
{
    if hi < lo {
        return 0.0;
    }
    let starts: Vec<u64> = (lo..=hi).step_by(CHUNK).collect();
    let partials: Vec<f64> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + CHUNK as u64 - 1).min(hi);
            let mut acc = CompensatedSum::new();
            for m in start..=end {
                let mu_m = mobius[m as usize];
                if mu_m != 0 {
                    acc.add(term(m, mu_m));
                }
            }
            acc.value()
        })
        .collect();
    partials.into_iter().collect::<CompensatedSum>().value()
}

/// `g(nm)` with the factorizations of `n` and `m` merged rather than
/// refactoring the product.
fn eval_product(g: &ArithmeticFn, fn_: &Factorization, m: u64) -> f64 {
    let nm = fn_.mul(&sieve::global().factorize(m)).expect("n m overflows u64");
    g.eval_factored_f64(&nm)
}

/// `a(n) = sum_{m <= M} (f*1)(nm)/(nm) mu(m)`. The tail estimate is the
/// absolute mass over `M < m <= 2M`.
pub fn dual_coeff_sum(f: &ArithmeticFn, n: u64, m_max: u64) -> Result<CoeffEstimate> {
    if n == 0 || m_max == 0 {
        return Err(Error::NonPositive(0));
    }
    let g = f.dirichlet(&one_fn());
    let fn_ = sieve::global().factorize(n);
    let mobius = mobius_table(2 * m_max);
    let nf = n as f64;
    let value = chunked_sum(1, m_max, &mobius, |m, mu_m| {
        eval_product(&g, &fn_, m) / (nf * m as f64) * mu_m as f64
    });
    let tail = chunked_sum(m_max + 1, 2 * m_max, &mobius, |m, _| {
        eval_product(&g, &fn_, m).abs() / (nf * m as f64)
    });
    Ok(CoeffEstimate { value, tail_estimate: tail })
}

/// `a(n)` as a product over primes: exact factors at `p | n`, truncated at
/// `p <= P` elsewhere.
pub fn dual_coeff_euler(f: &ArithmeticFn, n: u64, prime_bound: u64) -> Result<EulerProduct> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    if !f.is_multiplicative() {
        return Err(Error::NotMultiplicative(f.label().to_string()));
    }
    let g = f.dirichlet(&one_fn());
    let fn_ = sieve::global().factorize(n);
    let local = |p: u64| {
        let v = fn_.nu(p);
        let pf = p as f64;
        g.prime_power_f64(p, v) * pf.powi(-(v as i32)) - g.prime_power_f64(p, v + 1) * pf.powi(-(v as i32 + 1))
    };
    let mut prod = euler_product(prime_bound, local);
    for &(p, _) in fn_.factors() {
        if p > prime_bound {
            let x = local(p);
            prod.value *= x;
            prod.tail_estimate *= x.abs();
        }
    }
    Ok(prod)
}

/// Partial sums of `sum_{q <= Q} |(f*1)(q)| tau(q) / q` at `Q/4`, `Q/2`, `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionProbe {
    pub checkpoints: Vec<(u64, f64)>,
    /// Set when the last doubling added at least 3/4 of what the previous
    /// one did, the signature of logarithmic growth.
    pub growth_flagged: bool,
}

pub fn condition_probe(f: &ArithmeticFn, q_max: u64) -> Result<ConditionProbe> {
    if q_max == 0 {
        return Err(Error::NonPositive(0));
    }
    let g = f.dirichlet(&one_fn());
    let marks = [(q_max / 4).max(1), (q_max / 2).max(1), q_max];
    let terms: Vec<f64> = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let fq = sieve::global().factorize(q);
            let tau: u64 = fq.factors().iter().map(|&(_, e)| e as u64 + 1).product();
            g.eval_factored_f64(&fq).abs() * tau as f64 / q as f64
        })
        .collect();
    let mut acc = CompensatedSum::new();
    let mut checkpoints = Vec::new();
    for (i, t) in terms.into_iter().enumerate() {
        acc.add(t);
        let q = i as u64 + 1;
        if marks.contains(&q) && checkpoints.last().map_or(true, |&(last, _)| last != q) {
            checkpoints.push((q, acc.value()));
        }
    }
    let growth_flagged = match checkpoints.as_slice() {
        [(_, a), (_, b), (_, c)] => {
            let (d1, d2) = (b - a, c - b);
            d1 > 1e-12 && d2 >= 0.75 * d1
        }
        _ => false,
    };
    Ok(ConditionProbe { checkpoints, growth_flagged })
}
