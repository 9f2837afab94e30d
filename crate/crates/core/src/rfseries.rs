//! Classical Ramanujan-Fourier expansions `f(n) = sum_q a(q) c_q(n)`.
//!
//! From coefficients: `A(n) = n sum_k mu(k) a(kn)` and `f = A * 1`.
//! Back to coefficients: `a(q) = sum_m (f*mu)(qm)/(qm)`, or as the product
//! over primes of `sum_{e >= nu_p(q)} (f*mu)(p^e)/p^e`.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, mobius_table, mu, mu_fn, sieve, ArithmeticFn};
use crate::csum::csum_gcd;
use crate::dseries::{euler_product, zeta, EulerProduct, DEFAULT_EXPONENT_BOUND};
use crate::dualseries::{catalog, PartialSum};
use crate::error::{Error, Result};
use crate::report::ConvergenceClass;
use crate::summation::CompensatedSum;
use crate::value::Value;

pub use crate::dualseries::catalog::CLASSICAL_CASE_IDS;

const CHUNK: u64 = 4096;

/// `n sum_{k <= K} mu(k) a(kn)`, exact when `a` is.
pub fn lucht_a(a: &ArithmeticFn, n: u64, k_max: u64) -> Value {
    let s: Value = (1..=k_max)
        .filter(|&k| mu(k) != 0)
        .map(|k| {
            let v = a.eval(k * n) * Value::int(mu(k));
            if a.is_exact() {
                v
            } else {
                v.into_float()
            }
        })
        .sum();
    s * Value::int(n as i64)
}

/// `(A * 1)(n)` with `A` truncated at `K`.
pub fn rf_f_from_a(a: &ArithmeticFn, n: u64, k_max: u64) -> Value {
    divisors(n).into_iter().map(|d| lucht_a(a, d, k_max)).sum()
}

/// `sum_{q <= Q} a(q) c_q(n)` in the value class of `a`.
pub fn rf_sum_exact(a: &ArithmeticFn, n: u64, q_max: u64) -> Value {
    (1..=q_max).map(|q| a.eval(q) * Value::int(csum_gcd(q, n))).sum()
}

/// `sum_{lo <= k <= hi} term(k)` in fixed chunks reduced in ascending order.
fn chunked<T: Fn(u64) -> f64 + Sync>(lo: u64, hi: u64, term: T) -> f64 {
    if hi < lo {
        return 0.0;
    }
    let starts: Vec<u64> = (lo..=hi).step_by(CHUNK as usize).collect();
    let parts: Vec<f64> = starts
        .par_iter()
        .map(|&start| (start..=(start + CHUNK - 1).min(hi)).map(&term).collect::<CompensatedSum>().value())
        .collect();
    parts.into_iter().collect::<CompensatedSum>().value()
}

/// A recovered coefficient with the absolute mass of the next block as a
/// truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelangeSum {
    pub value: f64,
    pub tail_estimate: f64,
}

/// `a(q) = sum_{m <= M} (f*mu)(qm)/(qm)`.
pub fn rf_coeff_delange(f: &ArithmeticFn, q: u64, m_max: u64) -> Result<DelangeSum> {
    if q == 0 || m_max == 0 {
        return Err(Error::NonPositive(0));
    }
    let h = f.dirichlet(&mu_fn());
    let fq = sieve::global().factorize(q);
    let term = |m: u64| {
        let qm = fq.mul(&sieve::global().factorize(m)).expect("q m overflows u64");
        h.eval_factored_f64(&qm) / (q as f64 * m as f64)
    };
    let value = chunked(1, m_max, term);
    let tail_estimate = chunked(m_max + 1, 2 * m_max, |m| term(m).abs());
    Ok(DelangeSum { value, tail_estimate })
}

/// `a(q)` from the product over primes, exponents `nu_p(q) ..= nu_p(q) + E`.
pub fn rf_coeff_delange_euler(f: &ArithmeticFn, q: u64, prime_bound: u64) -> Result<EulerProduct> {
    if q == 0 {
        return Err(Error::NonPositive(0));
    }
    if !f.is_multiplicative() {
        return Err(Error::NotMultiplicative(f.label().to_string()));
    }
    let h = f.dirichlet(&mu_fn());
    let fq = sieve::global().factorize(q);
    let local = |p: u64| {
        let v = fq.nu(p);
        (v..=v + DEFAULT_EXPONENT_BOUND)
            .map(|e| h.prime_power_f64(p, e) * (p as f64).powi(-(e as i32)))
            .collect::<CompensatedSum>()
            .value()
    };
    let mut prod = euler_product(prime_bound, local);
    for &(p, _) in fq.factors() {
        if p > prime_bound {
            let x = local(p);
            prod.value *= x;
            prod.tail_estimate *= x.abs();
        }
    }
    Ok(prod)
}

/// `c_q(n)` for fixed `n` from its divisors and a Mobius table covering `q`.
fn csum_fixed_n(q: u64, n_divisors: &[u64], mobius: &[i8]) -> i64 {
    n_divisors
        .iter()
        .filter(|&&d| q % d == 0)
        .map(|&d| mobius[(q / d) as usize] as i64 * d as i64)
        .sum()
}

/// `sum_{q <= Q} a(q) c_q(n)`.
pub fn rf_partial(a: &ArithmeticFn, n: u64, q_max: u64) -> Result<PartialSum> {
    let coeffs = crate::dualseries::coefficients(a, q_max);
    rf_partial_from(&coeffs, n, q_max)
}

/// As [`rf_partial`] with precomputed coefficients (`coeffs[q-1] = a(q)`).
pub fn rf_partial_from(coeffs: &[f64], n: u64, q_max: u64) -> Result<PartialSum> {
    if n == 0 || q_max == 0 {
        return Err(Error::NonPositive(0));
    }
    if q_max as usize > coeffs.len() {
        return Err(Error::Precondition(format!("{} coefficients supplied, {q_max} needed", coeffs.len())));
    }
    let mobius = mobius_table(q_max);
    let divs = divisors(n);
    let value = chunked(1, q_max, |q| {
        let a = coeffs[q as usize - 1];
        if a == 0.0 {
            return 0.0;
        }
        a * csum_fixed_n(q, &divs, &mobius) as f64
    });
    Ok(PartialSum { value, terms: q_max })
}

/// Both sides of `sum_n f(n) b(n) = sum_q a(q) g(q)` for an expansion
/// `f = sum a c_q` and a dual expansion `g = sum b c_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingResult {
    pub case: String,
    #[serde(rename = "N")]
    pub n_terms: u64,
    #[serde(rename = "Q")]
    pub q_terms: u64,
    /// Common factor applied to both sides.
    pub scale: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_gap: f64,
    /// `sum |a(q) c_q(n) b(n)|` over the box `q <= Q`, `n <= N`.
    pub absolute_domination: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lhs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rhs_error: Option<f64>,
}

/// Evaluate both sides of the pairing on `n <= N`, `q <= Q`, each
/// multiplied by `scale`.
pub fn pairing(
    rf: &catalog::IdentityCase,
    dual: &catalog::IdentityCase,
    n_max: u64,
    q_max: u64,
    scale: f64,
) -> Result<PairingResult> {
    if n_max == 0 || q_max == 0 {
        return Err(Error::NonPositive(0));
    }
    if rf.direction != catalog::Direction::Classical || dual.direction != catalog::Direction::Dual {
        return Err(Error::Precondition("pairing needs a classical and a dual case".into()));
    }
    if rf.convergence != ConvergenceClass::Absolute {
        return Err(Error::Precondition(format!("{} is not absolutely convergent", rf.id)));
    }
    let b: Vec<(u64, f64)> =
        (1..=n_max).map(|n| (n, dual.side_a.eval_f64(n))).filter(|&(_, v)| v != 0.0).collect();
    let a: Vec<f64> = crate::dualseries::coefficients(&rf.side_a, q_max);
    let lhs = chunked(1, n_max, |n| {
        let bn = dual.side_a.eval_f64(n);
        if bn == 0.0 {
            0.0
        } else {
            rf.side_f.eval_f64(n) * bn
        }
    });
    let rhs = chunked(1, q_max, |q| {
        let aq = a[q as usize - 1];
        if aq == 0.0 {
            0.0
        } else {
            aq * dual.side_f.eval_f64(q)
        }
    });
    let mobius = mobius_table(q_max);
    let domination = b
        .par_iter()
        .map(|&(n, bn)| {
            let divs = divisors(n);
            let row = chunked(1, q_max, |q| {
                let aq = a[q as usize - 1];
                if aq == 0.0 {
                    return 0.0;
                }
                let g = q.gcd(&n);
                let c = if g == 1 { mobius[q as usize] as i64 } else { csum_fixed_n(q, &divs, &mobius) };
                (aq * c as f64).abs()
            });
            row * bn.abs()
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .collect::<CompensatedSum>()
        .value();
    let (lhs, rhs) = (lhs * scale, rhs * scale);
    Ok(PairingResult {
        case: format!("{}|{}", rf.id, dual.id),
        n_terms: n_max,
        q_terms: q_max,
        scale,
        lhs,
        rhs,
        abs_gap: (lhs - rhs).abs(),
        absolute_domination: domination * scale.abs(),
        target: None,
        lhs_error: None,
        rhs_error: None,
    })
}

/// `prod_p (1 + 1/(p^2 + p))` over `p <= P`.
pub fn phi_square_pairing_target(prime_bound: u64) -> EulerProduct {
    euler_product(prime_bound, |p| {
        let p = p as f64;
        1.0 + 1.0 / (p * p + p)
    })
}

/// `sum_n phi(n) I_square(n)/n^2 = sum_q mu(q)^2/(q psi(q))`: the
/// `phi_s/id^s` expansion at `s = 1` paired with the `phi.lambda/id` dual
/// expansion, scaled by `zeta(2)` so the first terms are both 1.
pub fn phi_square_pairing(n_max: u64, q_max: u64, prime_bound: u64) -> Result<PairingResult> {
    let rf = catalog::catalog("eq-varphi", Some(1.0))?;
    let dual = catalog::catalog("ex3-7", None)?;
    let mut r = pairing(&rf, &dual, n_max, q_max, zeta(2.0)?)?;
    r.case = "ex3-8".into();
    let target = phi_square_pairing_target(prime_bound).value;
    r.target = Some(target);
    r.lhs_error = Some((r.lhs - target).abs());
    r.rhs_error = Some((r.rhs - target).abs());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{one_fn, FnId};
    use crate::report::Grouping;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn indicator(n: u64) -> ArithmeticFn {
        ArithmeticFn::finite_support(format!("I[{n}]"), &[(n, 1)])
    }

    #[test]
    fn lucht_examples() {
        let a = indicator(1);
        assert_eq!(lucht_a(&a, 1, 10), Value::one());
        assert_eq!(lucht_a(&a, 2, 10), Value::zero());
        let a = indicator(4);
        assert_eq!(lucht_a(&a, 1, 10), Value::zero());
        assert_eq!(lucht_a(&a, 2, 10), Value::int(-2));
        assert_eq!(lucht_a(&a, 4, 10), Value::int(4));
    }

    #[test]
    fn lucht_log_example_drifts_to_one() {
        let a = ArithmeticFn::pointwise_float("-log/id", |n| -(n as f64).ln() / n as f64);
        let x = lucht_a(&a, 1, 200_000).to_f64();
        assert!((x - 1.0).abs() < 0.05, "{x}");
    }

    #[test]
    fn finite_support_exactness() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..100 {
            let mut support = Vec::new();
            for n in 1..=12u64 {
                if rng.gen_bool(0.4) {
                    support.push((n, rng.gen_range(-3..=3)));
                }
            }
            let a = ArithmeticFn::finite_support(format!("case{case}"), &support);
            for n in 1..=30 {
                assert_eq!(rf_f_from_a(&a, n, 12), rf_sum_exact(&a, n, 12), "case {case} n {n}");
            }
        }
    }

    #[test]
    fn delange_examples() {
        let f = one_fn();
        assert!((rf_coeff_delange(&f, 1, 1000).unwrap().value - 1.0).abs() < 1e-15);
        assert_eq!(rf_coeff_delange(&f, 3, 1000).unwrap().value, 0.0);
        let delta = crate::arith::delta_fn();
        let d = rf_coeff_delange(&delta, 1, 100_000).unwrap();
        assert!(d.value.abs() < 1e-2);
    }

    #[test]
    fn delange_matches_varphi_closed_form() {
        let c = catalog::catalog("eq-varphi", Some(1.0)).unwrap();
        let z2 = zeta(2.0).unwrap();
        assert!((c.side_a.eval_f64(2) + 1.0 / (3.0 * z2)).abs() < 1e-15);
        for q in 1..=20u64 {
            let s = rf_coeff_delange(&c.side_f, q, 100_000).unwrap().value;
            let e = rf_coeff_delange_euler(&c.side_f, q, 100_000).unwrap().value;
            let closed = c.side_a.eval_f64(q);
            assert!((s - closed).abs() < 1e-6, "q={q} sum {s} closed {closed}");
            assert!((e - closed).abs() < 1e-6, "q={q} euler {e} closed {closed}");
        }
    }

    #[test]
    fn partial_examples() {
        let p = rf_partial(&indicator(3), 6, 10).unwrap();
        assert_eq!(p.value, 2.0);
        let c = catalog::catalog("eq-sigma", Some(2.0)).unwrap();
        let r = c.verify(1, 100_000, Grouping::Natural, 1e-6).unwrap();
        assert!((r.target - 1.0).abs() < 1e-15);
        assert!(r.abs_error < 1e-9, "{r}");
        let sigma2 = FnId::SigmaS.function(Some(crate::arith::Param::Int(2))).unwrap();
        let r = c.verify(12, 100_000, Grouping::Natural, 1e-6).unwrap();
        assert!((r.target - sigma2.eval_f64(12) / 144.0).abs() < 1e-15);
        assert!(r.abs_error <= r.tail_bound.unwrap() + 1e-12, "{r}");
    }

    #[test]
    fn partial_matches_exact_sum() {
        let a = crate::arith::id_pow_fn(-2);
        for n in [1u64, 6, 12, 30] {
            let p = rf_partial(&a, n, 500).unwrap().value;
            let e = rf_sum_exact(&a, n, 500).to_f64();
            assert!((p - e).abs() < 1e-12);
        }
    }

    #[test]
    fn varphi_at_four() {
        let c = catalog::catalog("eq-varphi", Some(1.0)).unwrap();
        let r = c.verify(4, 100_000, Grouping::Natural, 1e-3).unwrap();
        assert_eq!(r.target, 0.5);
        assert!(r.abs_error < 1e-3, "{r}");
    }

    #[test]
    fn smoke_cases_report_no_verdict() {
        for id in ["eq-tau", "eq-r", "ram3-2"] {
            let c = catalog::catalog(id, None).unwrap();
            let r = c.verify(5, 10_000, Grouping::Natural, 1e-3).unwrap();
            assert_eq!(r.verdict, crate::report::Verdict::Smoke);
        }
        let c = catalog::catalog("eq-r", None).unwrap();
        assert!(c.verify(5, 10, Grouping::PeriodGrouped, 1e-3).is_err());
    }

    #[test]
    fn pairing_first_terms() {
        let r = phi_square_pairing(1, 1, 1000).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14);
        assert!((r.rhs - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pairing_sides_converge() {
        let small = phi_square_pairing(1000, 1000, 100_000).unwrap();
        let big = phi_square_pairing(100_000, 100_000, 100_000).unwrap();
        let t = big.target.unwrap();
        assert!((t - 1.368_432_769_600_921_8).abs() < 1e-5);
        assert!(big.abs_gap < small.abs_gap);
        assert!(big.rhs_error.unwrap() < 1e-4);
        assert!(big.absolute_domination.is_finite() && big.absolute_domination >= big.lhs.abs());
    }
}
