//! Real-argument zeta, Dirichlet-series partial sums, and the two Euler
//! products attached to an expansion with multiplicative coefficients:
//!
//! ```text
//! classical: sum f(n)/n^s = zeta(s)   prod_p sum_{e>=0} (a(p^e) - a(p^(e+1))) / p^(e(s-1))
//! dual:      sum f(q)/q^s = 1/zeta(s) prod_p sum_{e1>=0} (sum_{e2>=e1} a(p^e2)) / p^(e1(s-1))
//! ```

use rayon::prelude::*;

use crate::arith::{primes_up_to, ArithmeticFn};
use crate::error::{Error, Result};
use crate::report::{ConvergenceClass, ReportParams, TruncatedSumReport};
use crate::summation::{sum, CompensatedSum};

/// Direct-summation cutoff for [`zeta`].
pub const ZETA_CUTOFF: u64 = 10_000;

pub const DEFAULT_EXPONENT_BOUND: u32 = 40;

/// `zeta(s)` for real `s > 1 + 1e-6`: direct sum below [`ZETA_CUTOFF`] plus
/// the Euler-Maclaurin tail through the `B_4` term.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0 + 1e-6) || !s.is_finite() {
        return Err(Error::ParameterOutOfDomain { s, domain: "s > 1 + 1e-6".into() });
    }
    let n = ZETA_CUTOFF as f64;
    let tail = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
    // smallest terms first
    let mut acc = CompensatedSum::new();
    acc.add(tail);
    for k in (1..ZETA_CUTOFF).rev() {
        acc.add((k as f64).powf(-s));
    }
    Ok(acc.value())
}

/// `sum_{q <= N} f(q) / q^s`, compensated, in natural order.
pub fn dseries_partial(f: &ArithmeticFn, s: f64, n_terms: u64) -> f64 {
    sum((1..=n_terms).map(|q| f.eval_f64(q) * (q as f64).powf(-s)))
}

/// Truncation of an Euler product: primes `<= P`, exponents `<= E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProductSpec {
    pub prime_bound: u64,
    pub exponent_bound: u32,
}

impl EulerProductSpec {
    pub fn new(prime_bound: u64) -> EulerProductSpec {
        EulerProductSpec { prime_bound, exponent_bound: DEFAULT_EXPONENT_BOUND }
    }

    pub fn with_exponents(mut self, e: u32) -> EulerProductSpec {
        self.exponent_bound = e;
        self
    }
}

/// A truncated Euler product and an estimate of what the primes above the
/// bound would change, as an absolute error on `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProduct {
    pub value: f64,
    pub tail_estimate: f64,
}

/// Multiply `local(p)` over primes `<= P` in ascending order. The tail is
/// extrapolated from the log-mass of the two dyadic blocks below and above
/// `P`, assuming geometric decay across blocks.
pub fn euler_product<L>(prime_bound: u64, local: L) -> EulerProduct
where
    L: Fn(u64) -> f64 + Sync,
{
    let primes = primes_up_to(prime_bound.saturating_mul(2));
    let factors: Vec<f64> = primes.par_iter().map(|&p| local(p)).collect();
    let mut value = 1.0;
    let (mut lower, mut upper) = (0.0, 0.0);
    for (&p, &x) in primes.iter().zip(&factors) {
        let mass = (x - 1.0).abs().ln_1p();
        if p <= prime_bound {
            value *= x;
            if 2 * p > prime_bound {
                lower += mass;
            }
        } else {
            upper += mass;
        }
    }
    let log_tail = if upper > 0.0 && lower > upper { upper * lower / (lower - upper) } else { 2.0 * upper };
    EulerProduct { value, tail_estimate: value.abs() * log_tail.exp_m1() }
}

fn require_multiplicative(a: &ArithmeticFn) -> Result<()> {
    if a.is_multiplicative() {
        Ok(())
    } else {
        Err(Error::NotMultiplicative(a.label().to_string()))
    }
}

/// Local factor `sum_{e=0}^{E} (a(p^e) - a(p^(e+1))) / p^(e(s-1))`.
pub fn classical_local(a: &ArithmeticFn, p: u64, s: f64, e_max: u32) -> f64 {
    let w = (p as f64).powf(1.0 - s);
    let mut weight = 1.0;
    let mut acc = CompensatedSum::new();
    let mut cur = 1.0;
    for e in 0..=e_max {
        let next = a.prime_power_f64(p, e + 1);
        acc.add((cur - next) * weight);
        cur = next;
        weight *= w;
    }
    acc.value()
}

/// Local factor `sum_{e1=0}^{E} (sum_{e1<=e2<=E} a(p^e2)) / p^(e1(s-1))`.
pub fn dual_local(a: &ArithmeticFn, p: u64, s: f64, e_max: u32) -> f64 {
    let vals: Vec<f64> = (0..=e_max).map(|e| a.prime_power_f64(p, e)).collect();
    let mut suffix = vec![0.0; vals.len() + 1];
    for e in (0..vals.len()).rev() {
        suffix[e] = suffix[e + 1] + vals[e];
    }
    let w = (p as f64).powf(1.0 - s);
    let mut weight = 1.0;
    let mut acc = CompensatedSum::new();
    for &tail in &suffix[..vals.len()] {
        acc.add(tail * weight);
        weight *= w;
    }
    acc.value()
}

/// Dirichlet series of `f(n) = sum_q a(q) c_q(n)` through its Euler product.
pub fn euler_dseries_classical(a: &ArithmeticFn, s: f64, spec: EulerProductSpec) -> Result<EulerProduct> {
    require_multiplicative(a)?;
    let z = zeta(s)?;
    let prod = euler_product(spec.prime_bound, |p| classical_local(a, p, s, spec.exponent_bound));
    Ok(EulerProduct { value: z * prod.value, tail_estimate: z * prod.tail_estimate })
}

/// Dirichlet series of `f(q) = sum_n a(n) c_q(n)` through its Euler product.
pub fn euler_dseries_dual(a: &ArithmeticFn, s: f64, spec: EulerProductSpec) -> Result<EulerProduct> {
    require_multiplicative(a)?;
    let z = zeta(s)?;
    let prod = euler_product(spec.prime_bound, |p| dual_local(a, p, s, spec.exponent_bound));
    Ok(EulerProduct { value: prod.value / z, tail_estimate: prod.tail_estimate / z })
}

/// `q -> lambda(q) K(q) psi(q) / q^2`; at `p^e` this is `(-1)^e (p+1) / p^e`.
pub fn lambda_k_psi_fn() -> ArithmeticFn {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    ArithmeticFn::multiplicative("lambda.K.psi/id^2", |p, e| {
        let sign = if e % 2 == 0 { 1 } else { -1 };
        BigRational::new(BigInt::from(sign * (p as i64 + 1)), BigInt::from(p).pow(e))
    })
    .with_float_rule(|p, e| {
        let sign = if e % 2 == 0 { 1.0 } else { -1.0 };
        sign * (p as f64 + 1.0) * (p as f64).powi(-(e as i32))
    })
}

/// `n -> lambda(n) / n^2`.
pub fn lambda_over_square_fn() -> ArithmeticFn {
    use crate::arith::pow_rat;
    ArithmeticFn::multiplicative("lambda/id^2", |p, e| {
        let r = pow_rat(p, -2 * e as i64);
        if e % 2 == 0 {
            r
        } else {
            -r
        }
    })
    .with_float_rule(|p, e| {
        let sign = if e % 2 == 0 { 1.0 } else { -1.0 };
        sign * (p as f64).powi(-2 * e as i32)
    })
}

/// `zeta(2s+2) / (zeta(s) zeta(s+1))`.
pub fn lambda_k_psi_target(s: f64) -> Result<f64> {
    Ok(zeta(2.0 * s + 2.0)? / (zeta(s)? * zeta(s + 1.0)?))
}

/// Both checks of the `lambda K psi` identity at one `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaKPsiCheck {
    /// Truncated Dirichlet series of `lambda K psi / q^2` against the zeta
    /// closed form.
    pub series: TruncatedSumReport,
    /// Dual Euler product for `a = lambda/n^2`, rescaled by
    /// `zeta(2)/zeta(4)` onto the same target.
    pub euler: EulerProduct,
    pub euler_error: f64,
}

pub const SERIES_TOLERANCE: f64 = 1e-4;
pub const EULER_TOLERANCE: f64 = 1e-6;

pub fn verify_lambda_k_psi(s: f64, n_terms: u64, spec: EulerProductSpec) -> Result<LambdaKPsiCheck> {
    if !(s > 1.0) {
        return Err(Error::ParameterOutOfDomain { s, domain: "s > 1".into() });
    }
    let target = lambda_k_psi_target(s)?;
    let f = lambda_k_psi_fn();
    let partial = dseries_partial(&f, s, n_terms);
    // |f(q)| = prod_{p | q} (1 + 1/p) p^(1-e) < 5 for q < 10^18
    let tail = 5.0 * (n_terms as f64).powf(1.0 - s) / (s - 1.0);
    let mut params = ReportParams::new(1, n_terms);
    params.s = Some(s);
    params.prime_bound = Some(spec.prime_bound);
    let series = TruncatedSumReport::judge(
        "dseries-lambda-K-psi",
        params,
        partial,
        target,
        Some(tail),
        ConvergenceClass::Absolute,
        SERIES_TOLERANCE,
    );
    let raw = euler_dseries_dual(&lambda_over_square_fn(), s, spec)?;
    let scale = zeta(2.0)? / zeta(4.0)?;
    let euler = EulerProduct { value: raw.value * scale, tail_estimate: raw.tail_estimate * scale };
    Ok(LambdaKPsiCheck { series, euler_error: (euler.value - target).abs(), euler })
}
