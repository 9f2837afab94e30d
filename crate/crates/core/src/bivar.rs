//! Two-variable dual expansions
//! `f(q1, q2) = sum_{n1, n2} a(n1, n2) c_q1(n1) c_q2(n2)`.
//!
//! `A(q1, q2) = q1 q2 sum a(k1 q1, k2 q2)` and `f = A * mu`, with the
//! two-variable `mu = mu (x) mu`. Coefficients come back as
//! `a(n1, n2) = sum (f*1)(n1 m1, n2 m2)/(n1 m1 n2 m2) mu(m1) mu(m2)`, or for
//! multiplicative `f` as a product of four-term local factors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::arith::{divisors, mu, mu_fn, one_fn, primes_up_to, sieve, ArithmeticFn, Factorization};
use crate::conv::{dconv2, TwoVariable};
use crate::csum::CsumRow;
use crate::dseries::{euler_product, zeta, EulerProduct};
use crate::dualseries::{stop_point, PartialSum};
use crate::error::{Error, Result};
use crate::report::{ConvergenceClass, Grouping, ReportParams, TruncatedSumReport};
use crate::summation::CompensatedSum;
use crate::value::{rational_to_f64, Value};

type ExactRule2 = Arc<dyn Fn(u64, u32, u32) -> BigRational + Send + Sync>;
type FloatRule2 = Arc<dyn Fn(u64, u32, u32) -> f64 + Send + Sync>;
type ExactPoint2 = Arc<dyn Fn(u64, u64) -> Value + Send + Sync>;
type FloatPoint2 = Arc<dyn Fn(u64, u64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    /// Rules are called with `(e1, e2) != (0, 0)`.
    Multiplicative { exact: Option<ExactRule2>, float: FloatRule2 },
    Pointwise { exact: Option<ExactPoint2>, float: FloatPoint2 },
    /// A float constant times another function.
    Scaled { inner: Arc<BivariateFn>, c: f64 },
}

/// A function of two positive integers.
#[derive(Clone)]
pub struct BivariateFn {
    label: Arc<str>,
    repr: Repr,
}

impl fmt::Debug for BivariateFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BivariateFn")
            .field("label", &self.label)
            .field("multiplicative", &self.is_multiplicative())
            .field("exact", &self.is_exact())
            .finish()
    }
}

/// Primes of `n1 n2` with their exponents in each.
fn joint_exponents(f1: &Factorization, f2: &Factorization) -> BTreeMap<u64, (u32, u32)> {
    let mut m: BTreeMap<u64, (u32, u32)> = BTreeMap::new();
    for &(p, e) in f1.factors() {
        m.entry(p).or_default().0 = e;
    }
    for &(p, e) in f2.factors() {
        m.entry(p).or_default().1 = e;
    }
    m
}

impl BivariateFn {
    /// Multiplicative in the two-variable sense, by an exact rule at
    /// `(p^e1, p^e2)`.
    pub fn multiplicative<R>(label: impl Into<Arc<str>>, rule: R) -> BivariateFn
    where
        R: Fn(u64, u32, u32) -> BigRational + Send + Sync + 'static,
    {
        let exact: ExactRule2 = Arc::new(rule);
        let derived = exact.clone();
        BivariateFn {
            label: label.into(),
            repr: Repr::Multiplicative {
                exact: Some(exact),
                float: Arc::new(move |p, e1, e2| rational_to_f64(&derived(p, e1, e2))),
            },
        }
    }

    pub fn multiplicative_float<R>(label: impl Into<Arc<str>>, rule: R) -> BivariateFn
    where
        R: Fn(u64, u32, u32) -> f64 + Send + Sync + 'static,
    {
        BivariateFn { label: label.into(), repr: Repr::Multiplicative { exact: None, float: Arc::new(rule) } }
    }

    pub fn pointwise<F>(label: impl Into<Arc<str>>, eval: F) -> BivariateFn
    where
        F: Fn(u64, u64) -> Value + Send + Sync + 'static,
    {
        let exact: ExactPoint2 = Arc::new(eval);
        let derived = exact.clone();
        BivariateFn {
            label: label.into(),
            repr: Repr::Pointwise { exact: Some(exact), float: Arc::new(move |a, b| derived(a, b).to_f64()) },
        }
    }

    pub fn pointwise_float<F>(label: impl Into<Arc<str>>, eval: F) -> BivariateFn
    where
        F: Fn(u64, u64) -> f64 + Send + Sync + 'static,
    {
        BivariateFn { label: label.into(), repr: Repr::Pointwise { exact: None, float: Arc::new(eval) } }
    }

    /// Integer values on finitely many points, zero elsewhere.
    pub fn finite_support(label: impl Into<Arc<str>>, values: &[((u64, u64), i64)]) -> BivariateFn {
        let table: BTreeMap<(u64, u64), i64> = values.iter().copied().filter(|&(_, v)| v != 0).collect();
        BivariateFn::pointwise(label, move |a, b| Value::int(table.get(&(a, b)).copied().unwrap_or(0)))
    }

    /// `(f (x) g)(n1, n2) = f(n1) g(n2)`.
    pub fn tensor(f: &ArithmeticFn, g: &ArithmeticFn) -> BivariateFn {
        let label = format!("{}(x){}", f.label(), g.label());
        let (f, g) = (f.clone(), g.clone());
        if f.is_multiplicative() && g.is_multiplicative() {
            let (ff, gf) = (f.clone(), g.clone());
            let float = move |p, e1, e2| ff.prime_power_f64(p, e1) * gf.prime_power_f64(p, e2);
            if f.is_exact() && g.is_exact() {
                let rule = move |p, e1, e2| {
                    let v = f.prime_power(p, e1) * g.prime_power(p, e2);
                    v.as_exact().expect("exact factors").clone()
                };
                let mut out = BivariateFn::multiplicative(label, rule);
                if let Repr::Multiplicative { float: fl, .. } = &mut out.repr {
                    *fl = Arc::new(float);
                }
                out
            } else {
                BivariateFn::multiplicative_float(label, float)
            }
        } else if f.is_exact() && g.is_exact() {
            BivariateFn::pointwise(label, move |a, b| f.eval(a) * g.eval(b))
        } else {
            BivariateFn::pointwise_float(label, move |a, b| f.eval_f64(a) * g.eval_f64(b))
        }
    }

    /// `mu (x) mu`.
    pub fn mu2() -> BivariateFn {
        BivariateFn::tensor(&mu_fn(), &mu_fn())
    }

    /// `1 (x) 1`.
    pub fn one2() -> BivariateFn {
        BivariateFn::tensor(&one_fn(), &one_fn())
    }

    /// 1 at `(1, 1)`, 0 elsewhere.
    pub fn delta2() -> BivariateFn {
        BivariateFn::multiplicative("delta(x)delta", |_, _, _| BigRational::from_integer(BigInt::from(0)))
    }

    /// `c f`, in the float class.
    pub fn scaled(&self, label: impl Into<Arc<str>>, c: f64) -> BivariateFn {
        BivariateFn { label: label.into(), repr: Repr::Scaled { inner: Arc::new(self.clone()), c } }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self.repr, Repr::Multiplicative { .. })
    }

    pub fn is_exact(&self) -> bool {
        match &self.repr {
            Repr::Multiplicative { exact, .. } => exact.is_some(),
            Repr::Pointwise { exact, .. } => exact.is_some(),
            Repr::Scaled { .. } => false,
        }
    }

    /// Value at `(p^e1, p^e2)`.
    pub fn prime_power_f64(&self, p: u64, e1: u32, e2: u32) -> f64 {
        match &self.repr {
            Repr::Multiplicative { float, .. } => {
                if e1 == 0 && e2 == 0 {
                    1.0
                } else {
                    float(p, e1, e2)
                }
            }
            Repr::Pointwise { float, .. } => float(p.pow(e1), p.pow(e2)),
            Repr::Scaled { inner, c } => c * inner.eval_f64(p.pow(e1), p.pow(e2)),
        }
    }

    pub fn eval(&self, n1: u64, n2: u64) -> Value {
        assert!(n1 > 0 && n2 > 0, "bivariate functions are defined on positive integers");
        match &self.repr {
            Repr::Multiplicative { exact: Some(rule), .. } => {
                let s = sieve::global();
                joint_exponents(&s.factorize(n1), &s.factorize(n2))
                    .into_iter()
                    .map(|(p, (e1, e2))| Value::Exact(rule(p, e1, e2)))
                    .product()
            }
            Repr::Pointwise { exact: Some(eval), .. } => eval(n1, n2),
            _ => Value::float(self.eval_f64(n1, n2)),
        }
    }

    pub fn eval_f64(&self, n1: u64, n2: u64) -> f64 {
        match &self.repr {
            Repr::Multiplicative { .. } => {
                let s = sieve::global();
                self.eval_factored_f64(&s.factorize(n1), &s.factorize(n2))
            }
            Repr::Pointwise { float, .. } => float(n1, n2),
            Repr::Scaled { inner, c } => c * inner.eval_f64(n1, n2),
        }
    }

    pub fn eval_factored_f64(&self, f1: &Factorization, f2: &Factorization) -> f64 {
        match &self.repr {
            Repr::Multiplicative { float, .. } => {
                let mut v = 1.0;
                for (p, (e1, e2)) in joint_exponents(f1, f2) {
                    v *= float(p, e1, e2);
                    if v == 0.0 {
                        break;
                    }
                }
                v
            }
            Repr::Pointwise { float, .. } => float(f1.n(), f2.n()),
            Repr::Scaled { inner, c } => c * inner.eval_factored_f64(f1, f2),
        }
    }

    /// Two-variable Dirichlet convolution. Multiplicative inputs give a
    /// multiplicative result with the local rule convolved.
    pub fn dirichlet2(&self, other: &BivariateFn) -> BivariateFn {
        let label = format!("({} * {})", self.label, other.label);
        let (f, g) = (self.clone(), other.clone());
        if self.is_multiplicative() && other.is_multiplicative() {
            let float = {
                let (f, g) = (f.clone(), g.clone());
                move |p, e1, e2| {
                    let mut acc = 0.0;
                    for i in 0..=e1 {
                        for j in 0..=e2 {
                            acc += f.prime_power_f64(p, i, j) * g.prime_power_f64(p, e1 - i, e2 - j);
                        }
                    }
                    acc
                }
            };
            if self.is_exact() && other.is_exact() {
                let exact = move |p: u64, e1: u32, e2: u32| {
                    let mut acc = Value::zero();
                    for i in 0..=e1 {
                        for j in 0..=e2 {
                            acc += f.eval(p.pow(i), p.pow(j)) * g.eval(p.pow(e1 - i), p.pow(e2 - j));
                        }
                    }
                    acc.as_exact().expect("exact inputs").clone()
                };
                let mut out = BivariateFn::multiplicative(label, exact);
                if let Repr::Multiplicative { float: fl, .. } = &mut out.repr {
                    *fl = Arc::new(float);
                }
                out
            } else {
                BivariateFn::multiplicative_float(label, float)
            }
        } else if self.is_exact() && other.is_exact() {
            BivariateFn::pointwise(label, move |a, b| dconv2(&f, &g, a, b))
        } else {
            BivariateFn::pointwise_float(label, move |a, b| dconv2(&f, &g, a, b).to_f64())
        }
    }
}

impl TwoVariable for BivariateFn {
    fn eval2(&self, q: u64, n: u64) -> Value {
        self.eval(q, n)
    }
}

/// `q1 q2 sum_{k1, k2 <= K} a(k1 q1, k2 q2)`, exact when `a` is.
pub fn a_transform2(a: &BivariateFn, q1: u64, q2: u64, k_max: u64) -> Value {
    let scale = Value::int((q1 * q2) as i64);
    if a.is_exact() {
        let mut acc = Value::zero();
        for k1 in 1..=k_max {
            for k2 in 1..=k_max {
                acc += a.eval(k1 * q1, k2 * q2);
            }
        }
        acc * scale
    } else {
        let mut acc = CompensatedSum::new();
        for k1 in 1..=k_max {
            for k2 in 1..=k_max {
                acc.add(a.eval_f64(k1 * q1, k2 * q2));
            }
        }
        Value::float(acc.value()) * scale
    }
}

/// `(A * mu)(q1, q2)` with `A` truncated at `K`.
pub fn dual2_f(a: &BivariateFn, q1: u64, q2: u64, k_max: u64) -> Value {
    let mut acc = Value::zero();
    for d1 in divisors(q1) {
        let m1 = mu(q1 / d1);
        if m1 == 0 {
            continue;
        }
        for d2 in divisors(q2) {
            let m2 = mu(q2 / d2);
            if m2 != 0 {
                acc += a_transform2(a, d1, d2, k_max) * Value::int(m1 * m2);
            }
        }
    }
    acc
}

/// `sum_{n1, n2 <= N} a(n1, n2) c_q1(n1) c_q2(n2)` in the value class of `a`.
pub fn dual2_sum_exact(a: &BivariateFn, q1: u64, q2: u64, n_max: u64) -> Value {
    let (r1, r2) = (CsumRow::new(q1), CsumRow::new(q2));
    let mut acc = Value::zero();
    for n1 in 1..=n_max {
        let c1 = r1.get(n1);
        if c1 == 0 {
            continue;
        }
        for n2 in 1..=n_max {
            let c2 = r2.get(n2);
            if c2 != 0 {
                acc += a.eval(n1, n2) * Value::int(c1 * c2);
            }
        }
    }
    acc
}

/// `n1 n2 sum_{k1, k2 <= K} mu(k1) mu(k2) a(k1 n1, k2 n2)`.
pub fn lucht_a2(a: &BivariateFn, n1: u64, n2: u64, k_max: u64) -> Value {
    let mut acc = Value::zero();
    for k1 in (1..=k_max).filter(|&k| mu(k) != 0) {
        for k2 in (1..=k_max).filter(|&k| mu(k) != 0) {
            acc += a.eval(k1 * n1, k2 * n2) * Value::int(mu(k1) * mu(k2));
        }
    }
    acc * Value::int((n1 * n2) as i64)
}

/// `(A * 1)(n1, n2)` with `A` from [`lucht_a2`].
pub fn rf2_f_from_a(a: &BivariateFn, n1: u64, n2: u64, k_max: u64) -> Value {
    let mut acc = Value::zero();
    for d1 in divisors(n1) {
        for d2 in divisors(n2) {
            acc += lucht_a2(a, d1, d2, k_max);
        }
    }
    acc
}

/// `sum_{q1, q2 <= Q} a(q1, q2) c_q1(n1) c_q2(n2)`.
pub fn rf2_sum_exact(a: &BivariateFn, n1: u64, n2: u64, q_max: u64) -> Value {
    let mut acc = Value::zero();
    for q1 in 1..=q_max {
        let c1 = crate::csum::csum_gcd(q1, n1);
        if c1 == 0 {
            continue;
        }
        for q2 in 1..=q_max {
            let c2 = crate::csum::csum_gcd(q2, n2);
            if c2 != 0 {
                acc += a.eval(q1, q2) * Value::int(c1 * c2);
            }
        }
    }
    acc
}

/// A recovered two-variable coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffEstimate2 {
    pub value: f64,
    /// Absolute mass of the terms with `max(m1, m2)` in `(M, 2M]`.
    pub tail_estimate: f64,
}

struct SquarefreeWalk<'a> {
    g: &'a BivariateFn,
    primes: &'a [u64],
    base: &'a BTreeMap<u64, (u32, u32)>,
    m_max: u64,
    limit: u64,
    inside: CompensatedSum,
    outside: CompensatedSum,
}

impl SquarefreeWalk<'_> {
    /// Signed local factor `(-1)^(d1+d2) g(p^(v1+d1), p^(v2+d2)) / p^(v1+d1+v2+d2)`.
    fn local(&self, p: u64, d1: u32, d2: u32) -> f64 {
        let (v1, v2) = self.base.get(&p).copied().unwrap_or((0, 0));
        let (e1, e2) = (v1 + d1, v2 + d2);
        let sign = if (d1 + d2) % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.g.prime_power_f64(p, e1, e2) * (p as f64).powi(-((e1 + e2) as i32))
    }

    fn record(&mut self, m1: u64, m2: u64, term: f64) {
        if m1 <= self.m_max && m2 <= self.m_max {
            self.inside.add(term);
        } else {
            self.outside.add(term.abs());
        }
    }

    /// Extend `(m1, m2)` by primes from `primes[idx..]` not dividing `n1 n2`.
    fn walk(&mut self, idx: usize, m1: u64, m2: u64, term: f64) {
        let lo = m1.min(m2);
        for i in idx..self.primes.len() {
            let p = self.primes[i];
            if p > self.limit / lo {
                break;
            }
            if self.base.contains_key(&p) {
                continue;
            }
            for (d1, d2) in [(1u32, 0u32), (0, 1), (1, 1)] {
                let n1 = if d1 == 1 { m1 * p } else { m1 };
                let n2 = if d2 == 1 { m2 * p } else { m2 };
                if n1 > self.limit || n2 > self.limit {
                    continue;
                }
                let t = term * self.local(p, d1, d2);
                if t == 0.0 {
                    continue;
                }
                self.record(n1, n2, t);
                self.walk(i + 1, n1, n2, t);
            }
        }
    }
}

/// `a(n1, n2) = sum_{m1, m2 <= M} (f*1)(n1 m1, n2 m2)/(n1 m1 n2 m2) mu(m1) mu(m2)`.
///
/// Multiplicative `f` is summed by walking squarefree pairs prime by prime
/// and pruning branches whose term vanishes; other `f` by the direct double
/// sum.
pub fn dual2_coeff_sum(f: &BivariateFn, n1: u64, n2: u64, m_max: u64) -> Result<CoeffEstimate2> {
    if n1 == 0 || n2 == 0 || m_max == 0 {
        return Err(Error::NonPositive(0));
    }
    let g = f.dirichlet2(&BivariateFn::one2());
    if !g.is_multiplicative() {
        return Ok(dual2_coeff_direct(&g, n1, n2, m_max));
    }
    let s = sieve::global();
    let base = joint_exponents(&s.factorize(n1), &s.factorize(n2));
    let limit = 2 * m_max;
    let primes = primes_up_to(limit);
    let mut walk = SquarefreeWalk {
        g: &g,
        primes: &primes,
        base: &base,
        m_max,
        limit,
        inside: CompensatedSum::new(),
        outside: CompensatedSum::new(),
    };
    // every choice of (d1, d2) at the primes of n1 n2, then the walk over
    // the remaining primes
    let base_primes: Vec<u64> = base.keys().copied().collect();
    let choices = 4usize.pow(base_primes.len() as u32);
    for mask in 0..choices {
        let (mut m1, mut m2, mut term) = (1u64, 1u64, 1.0f64);
        for (k, &p) in base_primes.iter().enumerate() {
            let (d1, d2) = (((mask >> (2 * k)) & 1) as u32, ((mask >> (2 * k + 1)) & 1) as u32);
            m1 *= p.pow(d1);
            m2 *= p.pow(d2);
            term *= walk.local(p, d1, d2);
        }
        if term == 0.0 || m1 > limit || m2 > limit {
            continue;
        }
        walk.record(m1, m2, term);
        walk.walk(0, m1, m2, term);
    }
    Ok(CoeffEstimate2 { value: walk.inside.value(), tail_estimate: walk.outside.value() })
}

fn dual2_coeff_direct(g: &BivariateFn, n1: u64, n2: u64, m_max: u64) -> CoeffEstimate2 {
    let mobius = crate::arith::mobius_table(2 * m_max);
    let sq: Vec<u64> = (1..=2 * m_max).filter(|&m| mobius[m as usize] != 0).collect();
    let rows: Vec<(f64, f64)> = sq
        .par_iter()
        .map(|&m1| {
            let (mut inside, mut outside) = (CompensatedSum::new(), CompensatedSum::new());
            for &m2 in &sq {
                let t = g.eval_f64(n1 * m1, n2 * m2) / ((n1 * m1) as f64 * (n2 * m2) as f64)
                    * (mobius[m1 as usize] * mobius[m2 as usize]) as f64;
                if m1 <= m_max && m2 <= m_max {
                    inside.add(t);
                } else {
                    outside.add(t.abs());
                }
            }
            (inside.value(), outside.value())
        })
        .collect();
    let value = rows.iter().map(|r| r.0).collect::<CompensatedSum>().value();
    let tail_estimate = rows.iter().map(|r| r.1).collect::<CompensatedSum>().value();
    CoeffEstimate2 { value, tail_estimate }
}

/// `a(n1, n2)` as a product of the local factors
/// `sum_{d1, d2 in {0,1}} (-1)^(d1+d2) g(p^(v1+d1), p^(v2+d2)) / p^(v1+d1+v2+d2)`,
/// `g = f*1`, exact at primes of `n1 n2` and truncated at `p <= P` elsewhere.
pub fn dual2_coeff_euler(f: &BivariateFn, n1: u64, n2: u64, prime_bound: u64) -> Result<EulerProduct> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::NonPositive(0));
    }
    if !f.is_multiplicative() {
        return Err(Error::NotMultiplicative(f.label().to_string()));
    }
    let g = f.dirichlet2(&BivariateFn::one2());
    let s = sieve::global();
    let base = joint_exponents(&s.factorize(n1), &s.factorize(n2));
    let local = |p: u64| {
        let (v1, v2) = base.get(&p).copied().unwrap_or((0, 0));
        let pf = p as f64;
        let t = |e1: u32, e2: u32| g.prime_power_f64(p, e1, e2) * pf.powi(-((e1 + e2) as i32));
        t(v1, v2) - t(v1 + 1, v2) - t(v1, v2 + 1) + t(v1 + 1, v2 + 1)
    };
    let mut prod = euler_product(prime_bound, local);
    for &p in base.keys() {
        if p > prime_bound {
            let x = local(p);
            prod.value *= x;
            prod.tail_estimate *= x.abs();
        }
    }
    Ok(prod)
}

/// Square truncation `n1 <= N1`, `n2 <= N2` of the double series, summed
/// row by row in ascending `n1`.
pub fn dual2_partial(a: &BivariateFn, q1: u64, q2: u64, n_max: u64, grouping: Grouping) -> Result<(PartialSum, u64)> {
    let stop1 = stop_point(q1, n_max, grouping)?;
    let stop2 = stop_point(q2, n_max, grouping)?;
    let (r1, r2) = (CsumRow::new(q1), CsumRow::new(q2));
    let s = sieve::global();
    let facts: Vec<Factorization> = (1..=stop1.max(stop2)).into_par_iter().map(|n| s.factorize(n)).collect();
    let rows: Vec<f64> = (1..=stop1)
        .into_par_iter()
        .map(|n1| {
            let c1 = r1.get(n1);
            if c1 == 0 {
                return 0.0;
            }
            let f1 = &facts[n1 as usize - 1];
            let mut acc = CompensatedSum::new();
            for n2 in 1..=stop2 {
                let c2 = r2.get(n2);
                if c2 != 0 {
                    acc.add(a.eval_factored_f64(f1, &facts[n2 as usize - 1]) * (c1 * c2) as f64);
                }
            }
            acc.value()
        })
        .collect();
    let value = rows.into_iter().collect::<CompensatedSum>().value();
    Ok((PartialSum { value, terms: stop1 }, stop2))
}

/// `prod_{p | q} (1 - 2/p^s) q^s`.
fn phi_tilde(q: u64, s: f64) -> f64 {
    let fq = sieve::global().factorize(q);
    let mut v = (q as f64).powf(s);
    for &(p, _) in fq.factors() {
        v *= 1.0 - 2.0 * (p as f64).powf(-s);
    }
    v
}

/// `prod_p (1 - 2/p^s)` over `p <= P`.
pub fn two_over_ps_product(s: f64, prime_bound: u64) -> f64 {
    euler_product(prime_bound, |p| 1.0 - 2.0 * (p as f64).powf(-s)).value
}

/// Closed form of the transform of `mu(n1 n2)/(n1 n2)^s`:
/// `prod_p (1 - 2/p^s) q1 q2 mu(q1 q2) / (phi~_s(q1) phi~_s(q2))`.
pub fn ex4_1_a_transform(s: f64, prime_bound: u64) -> impl Fn(u64, u64) -> f64 {
    let c = two_over_ps_product(s, prime_bound);
    move |q1, q2| {
        let m = mu(q1 * q2);
        if m == 0 {
            return 0.0;
        }
        c * (q1 * q2) as f64 * m as f64 / (phi_tilde(q1, s) * phi_tilde(q2, s))
    }
}

/// A two-variable catalog entry.
#[derive(Clone)]
pub struct BivariateCase {
    pub id: &'static str,
    pub s: Option<f64>,
    pub side_f: BivariateFn,
    pub side_a: BivariateFn,
    pub convergence: ConvergenceClass,
    pub citation: &'static str,
}

impl fmt::Debug for BivariateCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BivariateCase").field("id", &self.id).field("s", &self.s).finish()
    }
}

pub const BIVARIATE_CASE_IDS: &[&str] = &["ex4-1", "ex4-2", "bivar-mu", "bivar-lambda"];

impl BivariateCase {
    pub fn target(&self, q1: u64, q2: u64) -> f64 {
        self.side_f.eval_f64(q1, q2)
    }

    pub fn verify(&self, q1: u64, q2: u64, n_max: u64, grouping: Grouping, tol: f64) -> Result<TruncatedSumReport> {
        if q1 == 0 || q2 == 0 || n_max == 0 {
            return Err(Error::NonPositive(0));
        }
        let (partial, _) = dual2_partial(&self.side_a, q1, q2, n_max, grouping)?;
        let mut params = ReportParams::new(q1, partial.terms);
        params.q2 = Some(q2);
        params.s = self.s;
        params.grouping = grouping;
        Ok(TruncatedSumReport::judge(
            self.id,
            params,
            partial.value,
            self.target(q1, q2),
            None,
            self.convergence,
            tol,
        ))
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `mu(n1 n2)` as a two-variable multiplicative function.
pub fn mu_of_product() -> BivariateFn {
    BivariateFn::multiplicative("mu(n1 n2)", |_, e1, e2| match e1 + e2 {
        1 => int(-1),
        _ => int(0),
    })
}

/// Look up a two-variable case; `s` is required by ex4-1 only.
pub fn bivariate_case(id: &str, s: Option<f64>) -> Result<BivariateCase> {
    let c = match id {
        "ex4-1" => {
            let s = s.ok_or_else(|| Error::Precondition("ex4-1 requires a parameter s > 1".into()))?;
            if !(s > 1.0) || !s.is_finite() {
                return Err(Error::ParameterOutOfDomain { s, domain: "s > 1".into() });
            }
            let a = BivariateFn::multiplicative_float("mu(n1 n2)/(n1 n2)^s", move |p, e1, e2| {
                if e1 + e2 == 1 {
                    -(p as f64).powf(-s)
                } else {
                    0.0
                }
            });
            // f = A * mu with A in closed form
            let transform = Arc::new(ex4_1_a_transform(s, crate::dualseries::DEFAULT_P));
            let f = BivariateFn::pointwise_float("(A * mu)", move |q1, q2| {
                let mut acc = CompensatedSum::new();
                for d1 in divisors(q1) {
                    for d2 in divisors(q2) {
                        let m = mu(q1 / d1) * mu(q2 / d2);
                        if m != 0 {
                            acc.add(m as f64 * transform(d1, d2));
                        }
                    }
                }
                acc.value()
            });
            BivariateCase {
                id: "ex4-1",
                s: Some(s),
                side_f: f,
                side_a: a,
                convergence: ConvergenceClass::Absolute,
                citation: "A(q1,q2) = prod_p (1-2/p^s) q1 q2 mu(q1 q2)/(phi~_s(q1) phi~_s(q2)), a = mu(n1 n2)/(n1 n2)^s",
            }
        }
        "ex4-2" => {
            let z2 = zeta(2.0)?;
            // local factor of mu(K(gcd)) phi(K(gcd)) / (n1 n2 psi(K(n1 n2)))
            let core = BivariateFn::multiplicative_float("ex4-2 coefficient", |p, e1, e2| {
                let p = p as f64;
                let base = p.powi(-((e1 + e2) as i32)) / (p + 1.0);
                if e1 >= 1 && e2 >= 1 {
                    -(p - 1.0) * base
                } else {
                    base
                }
            });
            let a = core.scaled("mu(K(n1,n2)) phi(K(n1,n2))/(zeta(2) n1 n2 psi(K(n1 n2)))", 1.0 / z2);
            BivariateCase {
                id: "ex4-2",
                s: None,
                side_f: mu_of_product(),
                side_a: a,
                convergence: ConvergenceClass::Absolute,
                citation: "mu(q1 q2) = (1/zeta(2)) sum mu(K((n1,n2))) phi(K((n1,n2)))/(n1 n2 psi(K(n1 n2))) c_q1(n1) c_q2(n2)",
            }
        }
        "bivar-mu" => BivariateCase {
            id: "bivar-mu",
            s: None,
            side_f: BivariateFn::finite_support("0", &[]),
            side_a: BivariateFn::multiplicative_float("mu(n1 n2)/(n1 n2)", |p, e1, e2| {
                if e1 + e2 == 1 {
                    -1.0 / p as f64
                } else {
                    0.0
                }
            }),
            convergence: ConvergenceClass::Conditional,
            citation: "sum mu(n1 n2)/(n1 n2) c_q1(n1) c_q2(n2) = 0",
        },
        "bivar-lambda" => BivariateCase {
            id: "bivar-lambda",
            s: None,
            side_f: BivariateFn::finite_support("0", &[]),
            side_a: BivariateFn::multiplicative_float("lambda(n1 n2)/(n1 n2)", |p, e1, e2| {
                let e = (e1 + e2) as i32;
                let v = (p as f64).powi(-e);
                if e % 2 == 0 {
                    v
                } else {
                    -v
                }
            }),
            convergence: ConvergenceClass::Conditional,
            citation: "sum lambda(n1 n2)/(n1 n2) c_q1(n1) c_q2(n2) = 0",
        },
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    Ok(c)
}

/// The ex4-2 coefficient evaluated directly from gcd, radical and totients.
pub fn ex4_2_coeff_closed(n1: u64, n2: u64) -> f64 {
    let z2 = zeta(2.0).expect("zeta(2)");
    let g = num_integer::gcd(n1, n2);
    let s = sieve::global();
    let kg = s.factorize(g).radical();
    let kn = s.factorize(n1 * n2);
    let psi: f64 = kn.factors().iter().map(|&(p, _)| p as f64 + 1.0).product();
    let phi_kg: f64 = s.factorize(kg).factors().iter().map(|&(p, _)| p as f64 - 1.0).product();
    mu(kg) as f64 * phi_kg / (z2 * (n1 * n2) as f64 * psi)
}
