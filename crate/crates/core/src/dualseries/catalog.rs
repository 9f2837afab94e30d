//! Catalog of identities `f = sum a c`, in both directions.
//!
//! Dual cases expand a function of the modulus, `f(q) = sum_n a(n) c_q(n)`;
//! classical cases expand a function of the argument,
//! `f(n) = sum_q a(q) c_q(n)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{coefficients, dual_partial_from, stop_point, PartialSum};
use crate::arith::{
    euler_phi, id_pow_fn, primes_up_to, is_square, liouville, liouville_fn, mangoldt, mu_fn, pow_rat, r2, ArithmeticFn,
    FnId, Param,
};
use crate::dseries::zeta;
use crate::error::{Error, Result};
use crate::report::{ConvergenceClass, Grouping, ReportParams, TruncatedSumReport};
use crate::rfseries::rf_partial_from;
use crate::value::Value;

pub const DUAL_CASE_IDS: &[&str] =
    &["ra1", "ra2", "ex3-1", "ex3-2", "ram3-3", "ex3-3", "ex3-4", "ex3-5", "ex3-6", "ex3-7"];
pub const CLASSICAL_CASE_IDS: &[&str] = &["eq-sigma", "eq-varphi", "eq-tau", "eq-r", "ram3-2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `f(q) = sum_n a(n) c_q(n)`.
    Dual,
    /// `f(n) = sum_q a(q) c_q(n)`.
    Classical,
}

/// Declared decay of `|a|`, used for the tail bound of absolute cases.
/// Each variant bounds `sum_{k > N} |a(k)|`; the series tail adds a factor
/// for `max |c|` along the summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailEnvelope {
    None,
    /// `|a(k)| <= c k^-sigma`.
    PowerLaw { c: f64, sigma: f64 },
    /// `sum_{k > N} |a(k)| <= c / floor(sqrt N)`, for coefficients carried by
    /// squares up to a squarefree factor.
    InverseSqrt { c: f64 },
    /// `|a(k)| <= c / (k K(k)^s)` with `K` the squarefree kernel. The tail is
    /// bounded by Rankin's trick, `N^-d prod_p (1 + p^(d-1-s)/(1 - p^(d-1)))`,
    /// minimized over `0 < d < 1`.
    Kernel { c: f64, s: f64 },
}

impl TailEnvelope {
    pub fn coefficient_tail(&self, n: u64) -> Option<f64> {
        match *self {
            TailEnvelope::None => None,
            TailEnvelope::PowerLaw { c, sigma } => Some(c * (n as f64).powf(1.0 - sigma) / (sigma - 1.0)),
            TailEnvelope::InverseSqrt { c } => Some(c / n.isqrt() as f64),
            TailEnvelope::Kernel { c, s } => Some(c * kernel_rankin_tail(s, n)),
        }
    }
}

const RANKIN_PRIMES: u64 = 10_000;

/// Upper bound for `sum_{k > N} 1/(k K(k)^s)`, `s > 1`.
pub fn kernel_rankin_tail(s: f64, n: u64) -> f64 {
    let primes = primes_up_to(RANKIN_PRIMES);
    let big_p = RANKIN_PRIMES as f64;
    (1..20)
        .map(|i| {
            let d = i as f64 / 20.0;
            let log_prod: f64 = primes
                .iter()
                .map(|&p| {
                    let p = p as f64;
                    (p.powf(d - 1.0 - s) / (1.0 - p.powf(d - 1.0))).ln_1p()
                })
                .sum();
            // primes above the bound: log(1 + x) <= x and sum_{m > P} m^-(1+s-d) <= P^(d-s)/(s-d)
            let rest = big_p.powf(d - s) / (s - d) / (1.0 - big_p.powf(d - 1.0));
            (log_prod + rest - d * (n as f64).ln()).exp()
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone)]
pub struct IdentityCase {
    pub id: &'static str,
    pub direction: Direction,
    pub s: Option<f64>,
    /// Closed form of the expanded function.
    pub side_f: ArithmeticFn,
    /// Coefficient function.
    pub side_a: ArithmeticFn,
    pub convergence: ConvergenceClass,
    pub envelope: TailEnvelope,
    /// The identity in formula form.
    pub citation: &'static str,
    /// Smallest admissible evaluation point.
    pub min_point: u64,
}

impl fmt::Debug for IdentityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityCase")
            .field("id", &self.id)
            .field("direction", &self.direction)
            .field("s", &self.s)
            .field("convergence", &self.convergence)
            .finish()
    }
}

impl IdentityCase {
    pub fn target(&self, point: u64) -> f64 {
        self.side_f.eval_f64(point)
    }

    pub fn check_point(&self, point: u64) -> Result<()> {
        if point == 0 {
            return Err(Error::NonPositive(0));
        }
        if point < self.min_point {
            return Err(Error::Precondition(format!("{} requires q >= {}", self.id, self.min_point)));
        }
        Ok(())
    }

    /// Coefficients needed for series runs up to `N` terms, including the
    pub fn coefficients_for(&self, n_max: u64) -> Vec<f64> {
        coefficients(&self.side_a, n_max)
    }

    pub fn partial_from(&self, coeffs: &[f64], point: u64, n_max: u64, grouping: Grouping) -> Result<PartialSum> {
        self.check_point(point)?;
        match self.direction {
            Direction::Dual => dual_partial_from(coeffs, point, n_max, grouping),
            Direction::Classical => {
                if grouping != Grouping::Natural {
                    return Err(Error::Precondition("classical expansions sum in natural order only".into()));
                }
                rf_partial_from(coeffs, point, n_max)
            }
        }
    }

    /// Bound on `|sum_{k > N} a(k) c|` at this point, for absolute cases.
    pub fn tail_bound(&self, point: u64, terms: u64) -> Option<f64> {
        if self.convergence != ConvergenceClass::Absolute {
            return None;
        }
        // max_n |c_q(n)| = phi(q); max_q |c_q(n)| <= sigma(n)
        let row_max = match self.direction {
            Direction::Dual => euler_phi(point) as f64,
            Direction::Classical => crate::arith::divisors(point).iter().sum::<u64>() as f64,
        };
        self.envelope.coefficient_tail(terms).map(|t| t * row_max)
    }

    pub fn verify(&self, point: u64, n_max: u64, grouping: Grouping, tol: f64) -> Result<TruncatedSumReport> {
        self.check_point(point)?;
        let stop = match self.direction {
            Direction::Dual => stop_point(point, n_max, grouping)?,
            Direction::Classical => n_max,
        };
        let coeffs = self.coefficients_for(stop);
        self.verify_with(&coeffs, point, n_max, grouping, tol)
    }

    /// As [`verify`](Self::verify) reusing coefficients from
    /// [`coefficients_for`](Self::coefficients_for).
    pub fn verify_with(
        &self,
        coeffs: &[f64],
        point: u64,
        n_max: u64,
        grouping: Grouping,
        tol: f64,
    ) -> Result<TruncatedSumReport> {
        let partial = self.partial_from(coeffs, point, n_max, grouping)?;
        let mut params = ReportParams::new(point, partial.terms);
        params.s = self.s;
        params.grouping = grouping;
        Ok(TruncatedSumReport::judge(
            self.id,
            params,
            partial.value,
            self.target(point),
            self.tail_bound(point, partial.terms),
            self.convergence,
            tol,
        ))
    }
}

fn rat(num: i64, den: BigInt) -> BigRational {
    BigRational::new(BigInt::from(num), den)
}

fn need_s(id: &str, s: Option<f64>) -> Result<f64> {
    need_s_above(id, s, 1.0)
}

fn need_s_above(id: &str, s: Option<f64>, lower: f64) -> Result<f64> {
    let s = s.ok_or_else(|| Error::Precondition(format!("{id} requires a parameter s > {lower}")))?;
    if !(s > lower) || !s.is_finite() {
        return Err(Error::ParameterOutOfDomain { s, domain: format!("s > {lower}") });
    }
    Ok(s)
}

fn id_pow(s: f64) -> ArithmeticFn {
    FnId::IdS.function(Some(Param::from_f64(s))).expect("parameter supplied")
}

fn zero_fn() -> ArithmeticFn {
    ArithmeticFn::finite_support("0", &[])
}

fn const_times(c: f64, f: &ArithmeticFn) -> ArithmeticFn {
    f.scaled(Value::float(c))
}

/// The `psi_{s+1}` variant of the ex3-4 coefficient,
/// `phi(K(n)) / (n psi_{s+1}(K(n))) / zeta(s+1)`. Both recovery paths
/// disagree with it; the catalog uses the `phi_{s+1}` form.
pub fn ex3_4_coeff_psi_variant(s: f64) -> Result<ArithmeticFn> {
    let s = need_s("ex3-4", Some(s))?;
    let core = ArithmeticFn::multiplicative_float("phi(K)/(id psi_{s+1}(K))", move |p, e| {
        let p = p as f64;
        p.powi(-(e as i32)) * (p - 1.0) / (p.powf(s + 1.0) + 1.0)
    });
    Ok(const_times(1.0 / zeta(s + 1.0)?, &core))
}

/// Look up a case by id. `s` is required by the parameterized cases and
/// ignored by the others.
pub fn catalog(id: &str, s: Option<f64>) -> Result<IdentityCase> {
    let absolute = ConvergenceClass::Absolute;
    let conditional = ConvergenceClass::Conditional;
    let case = |id, direction, s, side_f, side_a, convergence, envelope, citation, min_point| IdentityCase {
        id,
        direction,
        s,
        side_f,
        side_a,
        convergence,
        envelope,
        citation,
        min_point,
    };
    use Direction::{Classical, Dual};
    let c = match id {
        "ra1" => {
            let s = need_s(id, s)?;
            let z = zeta(s)?;
            let f = FnId::PhiS.function(Some(Param::from_f64(1.0 - s)))?;
            case(
                "ra1",
                Dual,
                Some(s),
                f,
                const_times(1.0 / z, &id_pow(-s)),
                absolute,
                TailEnvelope::PowerLaw { c: 1.0 / z, sigma: s },
                "phi_{1-s}(q) = (1/zeta(s)) sum_n c_q(n)/n^s, s > 1",
                1,
            )
        }
        "ra2" => case(
            "ra2",
            Dual,
            None,
            ArithmeticFn::pointwise_float("Lambda", mangoldt),
            const_times(-1.0, &id_pow(-1.0)),
            conditional,
            TailEnvelope::None,
            "Lambda(q) = -sum_n c_q(n)/n, q >= 2",
            2,
        ),
        "ex3-1" => {
            let z2 = zeta(2.0)?;
            let f = ArithmeticFn::multiplicative("2^omega.lambda", |_, e| {
                BigRational::from_integer(BigInt::from(if e % 2 == 0 { 2 } else { -2 }))
            })
            .with_float_rule(|_, e| if e % 2 == 0 { 2.0 } else { -2.0 });
            let a = ArithmeticFn::pointwise_float("-lambda.log/(zeta(2) id)", move |n| {
                -(liouville(n) as f64) * (n as f64).ln() / (z2 * n as f64)
            });
            case(
                "ex3-1",
                Dual,
                None,
                f,
                a,
                conditional,
                TailEnvelope::None,
                "2^omega(q) lambda(q) = -(1/zeta(2)) sum_n lambda(n) log(n)/n c_q(n)",
                1,
            )
        }
        "ex3-2" => {
            let s = need_s(id, s)?;
            let z = zeta(s)?;
            // h = id mu / phi_s; f = (h * mu) / zeta(s)
            let h_mu = ArithmeticFn::multiplicative_float("(id.mu/phi_s * mu)", move |p, e| {
                let h = -(p as f64) / ((p as f64).powf(s) - 1.0);
                match e {
                    1 => h - 1.0,
                    2 => -h,
                    _ => 0.0,
                }
            });
            case(
                "ex3-2",
                Dual,
                Some(s),
                const_times(1.0 / z, &h_mu),
                mu_fn().times(&id_pow(-s)),
                absolute,
                TailEnvelope::PowerLaw { c: 1.0, sigma: s },
                "(1/zeta(s)) (id.mu/phi_s * mu)(q) = sum_n mu(n)/n^s c_q(n), s > 1",
                1,
            )
        }
        "ram3-3" => case(
            "ram3-3",
            Dual,
            None,
            zero_fn(),
            mu_fn().times(&id_pow_fn(-1)),
            conditional,
            TailEnvelope::None,
            "sum_n mu(n)/n c_q(n) = 0",
            1,
        ),
        "ex3-3" => case(
            "ex3-3",
            Dual,
            None,
            zero_fn(),
            liouville_fn().times(&id_pow_fn(-1)),
            conditional,
            TailEnvelope::None,
            "sum_n lambda(n)/n c_q(n) = 0",
            1,
        ),
        "ex3-4" => {
            let s = need_s(id, s)?;
            let f = ArithmeticFn::multiplicative_float("phi_s.mu/id^s", move |p, e| {
                if e == 1 {
                    -(1.0 - (p as f64).powf(-s))
                } else {
                    0.0
                }
            });
            let core = ArithmeticFn::multiplicative_float("phi(K)/(id phi_{s+1}(K))", move |p, e| {
                let p = p as f64;
                p.powi(-(e as i32)) * (p - 1.0) / (p.powf(s + 1.0) - 1.0)
            });
            case(
                "ex3-4",
                Dual,
                Some(s),
                f,
                const_times(1.0 / zeta(s + 1.0)?, &core),
                absolute,
                TailEnvelope::Kernel { c: 1.0 / zeta(s + 1.0)?, s },
                "phi_s(q) mu(q)/q^s = (1/zeta(s+1)) sum_n phi(K(n))/(n phi_{s+1}(K(n))) c_q(n), s > 1",
                1,
            )
        }
        "ex3-5" => {
            let s = need_s(id, s)?;
            let f = ArithmeticFn::multiplicative_float("sigma_s.mu/id^s", move |p, e| {
                if e == 1 {
                    -(1.0 + (p as f64).powf(-s))
                } else {
                    0.0
                }
            });
            let core = ArithmeticFn::multiplicative_float("(-1)^omega phi(K)/(id psi_{s+1}(K))", move |p, e| {
                let p = p as f64;
                -p.powi(-(e as i32)) * (p - 1.0) / (p.powf(s + 1.0) + 1.0)
            });
            case(
                "ex3-5",
                Dual,
                Some(s),
                f,
                const_times(zeta(s + 1.0)? / zeta(2.0 * s + 2.0)?, &core),
                absolute,
                TailEnvelope::Kernel { c: zeta(s + 1.0)? / zeta(2.0 * s + 2.0)?, s },
                "sigma_s(q) mu(q)/q^s = (zeta(s+1)/zeta(2s+2)) sum_n (-1)^omega(n) phi(K(n))/(n psi_{s+1}(K(n))) c_q(n), s > 1",
                1,
            )
        }
        "ex3-6" => {
            let a = ArithmeticFn::multiplicative("(1/id) prod_{nu odd} (-1/p)", |p, e| {
                if e % 2 == 0 {
                    pow_rat(p, -(e as i64))
                } else {
                    -pow_rat(p, -(e as i64) - 1)
                }
            });
            case(
                "ex3-6",
                Dual,
                None,
                liouville_fn(),
                a,
                absolute,
                TailEnvelope::InverseSqrt { c: 2.0 * 2.612_375_348_685_488 },
                "lambda(q) = sum_n (1/n) prod_{p | n, nu_p(n) odd} (-1/p) c_q(n)",
                1,
            )
        }
        "ex3-7" => {
            let f = ArithmeticFn::multiplicative("phi.lambda/id", |p, e| {
                let r = rat(p as i64 - 1, BigInt::from(p));
                if e % 2 == 0 {
                    r
                } else {
                    -r
                }
            });
            let z2 = zeta(2.0)?;
            let a = ArithmeticFn::pointwise_float("I_square/(zeta(2) id)", move |n| {
                if is_square(n) {
                    1.0 / (z2 * n as f64)
                } else {
                    0.0
                }
            });
            case(
                "ex3-7",
                Dual,
                None,
                f,
                a,
                absolute,
                TailEnvelope::InverseSqrt { c: 1.0 / z2 },
                "phi(q) lambda(q)/q = (1/zeta(2)) sum_n I_square(n)/n c_q(n)",
                1,
            )
        }
        "eq-sigma" => {
            let s = need_s_above(id, s, 0.0)?;
            let z = zeta(s + 1.0)?;
            let sigma = FnId::SigmaS.function(Some(Param::from_f64(s)))?;
            case(
                "eq-sigma",
                Classical,
                Some(s),
                sigma.times(&id_pow(-s)),
                const_times(z, &id_pow(-(s + 1.0))),
                absolute,
                TailEnvelope::PowerLaw { c: z, sigma: s + 1.0 },
                "sigma_s(n)/n^s = zeta(s+1) sum_q c_q(n)/q^(s+1), s > 0",
                1,
            )
        }
        "eq-varphi" => {
            let s = need_s_above(id, s, 0.0)?;
            let z = zeta(s + 1.0)?;
            let phi = FnId::PhiS.function(Some(Param::from_f64(s)))?;
            let core = ArithmeticFn::multiplicative_float("mu/phi_{s+1}", move |p, e| {
                if e == 1 {
                    -1.0 / ((p as f64).powf(s + 1.0) - 1.0)
                } else {
                    0.0
                }
            });
            case(
                "eq-varphi",
                Classical,
                Some(s),
                phi.times(&id_pow(-s)),
                const_times(1.0 / z, &core),
                absolute,
                TailEnvelope::PowerLaw { c: 1.0, sigma: s + 1.0 },
                "phi_s(n)/n^s = (1/zeta(s+1)) sum_q mu(q)/phi_{s+1}(q) c_q(n), s > 0",
                1,
            )
        }
        "eq-tau" => case(
            "eq-tau",
            Classical,
            None,
            FnId::Tau.function(None)?,
            ArithmeticFn::pointwise_float("-log/id", |q| -(q as f64).ln() / q as f64),
            conditional,
            TailEnvelope::None,
            "tau(n) = -sum_q log(q)/q c_q(n)",
            1,
        ),
        "eq-r" => case(
            "eq-r",
            Classical,
            None,
            ArithmeticFn::pointwise("r2", |n| BigRational::from_integer(BigInt::from(r2(n)))),
            ArithmeticFn::pointwise_float("pi (-1)^((q-1)/2)/q on odd q", |q| {
                if q % 2 == 0 {
                    0.0
                } else if q % 4 == 1 {
                    std::f64::consts::PI / q as f64
                } else {
                    -std::f64::consts::PI / q as f64
                }
            }),
            conditional,
            TailEnvelope::None,
            "r(n) = pi sum_k (-1)^(k-1)/(2k-1) c_{2k-1}(n)",
            1,
        ),
        "ram3-2" => case(
            "ram3-2",
            Classical,
            None,
            zero_fn(),
            id_pow_fn(-1),
            conditional,
            TailEnvelope::None,
            "sum_q c_q(n)/q = 0",
            1,
        ),
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualseries::{dual_coeff_euler, dual_coeff_sum};

    #[test]
    fn catalog_examples() {
        let c = catalog("ex3-7", None).unwrap();
        assert_eq!(c.side_f.eval(2), Value::ratio(-1, 2));
        let c = catalog("ra1", Some(2.0)).unwrap();
        assert_eq!(c.side_f.eval(1), Value::one());
        assert_eq!(c.side_f.eval(2), Value::ratio(-1, 2));
        let c = catalog("ex3-4", Some(2.0)).unwrap();
        assert!((c.side_a.eval_f64(1) - 1.0 / zeta(3.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn catalog_errors() {
        assert_eq!(catalog("nope", None).unwrap_err(), Error::UnknownCase("nope".into()));
        assert!(matches!(catalog("ra1", Some(1.0)), Err(Error::ParameterOutOfDomain { .. })));
        assert!(matches!(catalog("ex3-4", None), Err(Error::Precondition(_))));
        let ra2 = catalog("ra2", None).unwrap();
        assert!(ra2.verify(1, 100, Grouping::PeriodGrouped, 1e-2).is_err());
        assert!(ra2.verify(1, 100, Grouping::Natural, 1e-2).is_err());
    }

    #[test]
    fn every_id_resolves() {
        for id in DUAL_CASE_IDS.iter().chain(CLASSICAL_CASE_IDS) {
            let c = catalog(id, Some(2.0)).unwrap();
            assert_eq!(&c.id, id);
        }
    }

    #[test]
    fn absolute_cases_have_bounded_mass() {
        for id in DUAL_CASE_IDS {
            let c = catalog(id, Some(2.0)).unwrap();
            if c.convergence != ConvergenceClass::Absolute {
                continue;
            }
            for q in 1..=5u64 {
                let row = crate::csum::CsumRow::new(q);
                let mut acc = 0.0;
                let mut prev = 0.0;
                for n in 1..=1000u64 {
                    acc += c.side_a.eval_f64(n).abs() * row.get(n).abs() as f64;
                    assert!(acc >= prev && acc.is_finite());
                    prev = acc;
                }
                assert!(acc < 50.0, "{id} q={q}: {acc}");
            }
        }
    }

    #[test]
    fn psi_variant_ex3_4_coefficient_disagrees() {
        let c = catalog("ex3-4", Some(2.0)).unwrap();
        let variant = ex3_4_coeff_psi_variant(2.0).unwrap();
        let euler = dual_coeff_euler(&c.side_f, 2, 10_000).unwrap().value;
        let summed = dual_coeff_sum(&c.side_f, 2, 10_000).unwrap().value;
        assert!((euler - c.side_a.eval_f64(2)).abs() < 1e-8);
        assert!((summed - c.side_a.eval_f64(2)).abs() < 1e-8);
        assert!((variant.eval_f64(2) - euler).abs() > 1e-3);
        // the two agree at n = 1 where K(n) = 1
        assert!((variant.eval_f64(1) - c.side_a.eval_f64(1)).abs() < 1e-15);
    }

    #[test]
    fn closed_coefficients_match_euler_path() {
        for id in ["ex3-4", "ex3-5", "ex3-6", "ex3-7"] {
            let c = catalog(id, Some(2.0)).unwrap();
            for n in 1..=20u64 {
                let e = dual_coeff_euler(&c.side_f, n, 100_000).unwrap();
                let closed = c.side_a.eval_f64(n);
                assert!((e.value - closed).abs() < 1e-5, "{id} n={n}: {} vs {closed}", e.value);
            }
        }
    }

    #[test]
    fn ex3_7_vanishes_off_squares() {
        let c = catalog("ex3-7", None).unwrap();
        for n in [2u64, 3, 5, 8, 12] {
            assert!(dual_coeff_euler(&c.side_f, n, 1000).unwrap().value.abs() < 1e-15);
            let est = dual_coeff_sum(&c.side_f, n, 10_000).unwrap();
            assert!(est.value.abs() < 1e-4 && est.value.abs() <= est.tail_estimate, "{est:?}");
        }
        let a4 = dual_coeff_sum(&c.side_f, 4, 100_000).unwrap().value;
        assert!((a4 - 0.25 / zeta(2.0).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn ex3_7_series_at_two() {
        let c = catalog("ex3-7", None).unwrap();
        let r = c.verify(2, 10_000, Grouping::Natural, 1e-3).unwrap();
        assert!((r.target + 0.5).abs() < 1e-15);
        assert!(r.abs_error < 1e-4, "{r}");
    }
}
