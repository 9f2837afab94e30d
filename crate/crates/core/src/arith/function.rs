//! One-variable arithmetic functions, given pointwise or by a prime-power rule.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factor::Factorization;
use super::{divisors, sieve};
use crate::value::{rational_to_f64, Value, ValueClass};

pub type ExactRule = Arc<dyn Fn(u64, u32) -> BigRational + Send + Sync>;
pub type FloatRule = Arc<dyn Fn(u64, u32) -> f64 + Send + Sync>;
pub type ExactPoint = Arc<dyn Fn(u64) -> BigRational + Send + Sync>;
pub type FloatPoint = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    /// `f(n) = prod f(p^e)`; the rule is only ever called with `e >= 1`.
    Multiplicative { exact: Option<ExactRule>, float: FloatRule },
    Pointwise { exact: Option<ExactPoint>, float: FloatPoint },
}

/// An arithmetic function `N -> Q` or `N -> R`.
///
/// Exact-class functions carry a rational evaluator and a float evaluator
/// (derived from the rational one unless overridden for speed). Float-class
/// functions carry only the float evaluator.
#[derive(Clone)]
pub struct ArithmeticFn {
    label: Arc<str>,
    repr: Repr,
}

impl fmt::Debug for ArithmeticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArithmeticFn")
            .field("label", &self.label)
            .field("multiplicative", &self.is_multiplicative())
            .field("class", &self.class())
            .finish()
    }
}

impl ArithmeticFn {
    /// Multiplicative function with an exact prime-power rule.
    pub fn multiplicative<R>(label: impl Into<Arc<str>>, rule: R) -> ArithmeticFn
    where
        R: Fn(u64, u32) -> BigRational + Send + Sync + 'static,
    {
        let exact: ExactRule = Arc::new(rule);
        let derived = exact.clone();
        ArithmeticFn {
            label: label.into(),
            repr: Repr::Multiplicative {
                exact: Some(exact),
                float: Arc::new(move |p, e| rational_to_f64(&derived(p, e))),
            },
        }
    }

    /// Multiplicative function with a float prime-power rule.
    pub fn multiplicative_float<R>(label: impl Into<Arc<str>>, rule: R) -> ArithmeticFn
    where
        R: Fn(u64, u32) -> f64 + Send + Sync + 'static,
    {
        ArithmeticFn {
            label: label.into(),
            repr: Repr::Multiplicative { exact: None, float: Arc::new(rule) },
        }
    }

    pub fn pointwise<F>(label: impl Into<Arc<str>>, eval: F) -> ArithmeticFn
    where
        F: Fn(u64) -> BigRational + Send + Sync + 'static,
    {
        let exact: ExactPoint = Arc::new(eval);
        let derived = exact.clone();
        ArithmeticFn {
            label: label.into(),
            repr: Repr::Pointwise {
                exact: Some(exact),
                float: Arc::new(move |n| rational_to_f64(&derived(n))),
            },
        }
    }

    pub fn pointwise_float<F>(label: impl Into<Arc<str>>, eval: F) -> ArithmeticFn
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        ArithmeticFn {
            label: label.into(),
            repr: Repr::Pointwise { exact: None, float: Arc::new(eval) },
        }
    }

    /// Integer-valued function with finite support: `values` lists `(n, a(n))`.
    pub fn finite_support(label: impl Into<Arc<str>>, values: &[(u64, i64)]) -> ArithmeticFn {
        let table: Vec<(u64, i64)> = values.iter().copied().filter(|&(_, v)| v != 0).collect();
        ArithmeticFn::pointwise(label, move |n| {
            table
                .iter()
                .find(|&&(m, _)| m == n)
                .map(|&(_, v)| BigRational::from_integer(v.into()))
                .unwrap_or_else(BigRational::zero)
        })
    }

    /// Replace the float evaluator of a multiplicative function by a faster
    /// closed form. The exact rule, if any, is kept.
    pub fn with_float_rule<R>(mut self, rule: R) -> ArithmeticFn
    where
        R: Fn(u64, u32) -> f64 + Send + Sync + 'static,
    {
        if let Repr::Multiplicative { float, .. } = &mut self.repr {
            *float = Arc::new(rule);
        }
        self
    }

    pub fn with_float_eval<F>(mut self, eval: F) -> ArithmeticFn
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        if let Repr::Pointwise { float, .. } = &mut self.repr {
            *float = Arc::new(eval);
        }
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(mut self, label: impl Into<Arc<str>>) -> ArithmeticFn {
        self.label = label.into();
        self
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self.repr, Repr::Multiplicative { .. })
    }

    pub fn class(&self) -> ValueClass {
        let exact = match &self.repr {
            Repr::Multiplicative { exact, .. } => exact.is_some(),
            Repr::Pointwise { exact, .. } => exact.is_some(),
        };
        if exact {
            ValueClass::ExactRational
        } else {
            ValueClass::RealFloat
        }
    }

    pub fn is_exact(&self) -> bool {
        self.class() == ValueClass::ExactRational
    }

    /// `f(n)`; `n` must be positive.
    pub fn eval(&self, n: u64) -> Value {
        match &self.repr {
            Repr::Multiplicative { .. } => self.eval_factored(&sieve::global().factorize(n)),
            Repr::Pointwise { exact: Some(e), .. } => Value::Exact(e(n)),
            Repr::Pointwise { exact: None, float } => Value::Float(float(n)),
        }
    }

    pub fn eval_factored(&self, fact: &Factorization) -> Value {
        match &self.repr {
            Repr::Multiplicative { exact: Some(rule), .. } => {
                let mut acc = BigRational::one();
                for &(p, e) in fact.factors() {
                    acc *= rule(p, e);
                    if acc.is_zero() {
                        break;
                    }
                }
                Value::Exact(acc)
            }
            Repr::Multiplicative { exact: None, float } => Value::Float(product_f64(float, fact)),
            Repr::Pointwise { .. } => self.eval(fact.n()),
        }
    }

    pub fn eval_f64(&self, n: u64) -> f64 {
        match &self.repr {
            Repr::Multiplicative { float, .. } => product_f64(float, &sieve::global().factorize(n)),
            Repr::Pointwise { float, .. } => float(n),
        }
    }

    pub fn eval_factored_f64(&self, fact: &Factorization) -> f64 {
        match &self.repr {
            Repr::Multiplicative { float, .. } => product_f64(float, fact),
            Repr::Pointwise { float, .. } => float(fact.n()),
        }
    }

    /// `f(p^e)`. For pointwise functions this evaluates at `p^e` directly and
    /// panics on overflow; callers with large exponents should use
    /// multiplicative functions.
    pub fn prime_power(&self, p: u64, e: u32) -> Value {
        if e == 0 {
            return Value::one();
        }
        match &self.repr {
            Repr::Multiplicative { exact: Some(rule), .. } => Value::Exact(rule(p, e)),
            Repr::Multiplicative { exact: None, float } => Value::Float(float(p, e)),
            Repr::Pointwise { .. } => self.eval(p.checked_pow(e).expect("prime power overflows u64")),
        }
    }

    pub fn prime_power_f64(&self, p: u64, e: u32) -> f64 {
        if e == 0 {
            return 1.0;
        }
        match &self.repr {
            Repr::Multiplicative { float, .. } => float(p, e),
            Repr::Pointwise { float, .. } => float(p.checked_pow(e).expect("prime power overflows u64")),
        }
    }

    /// Dirichlet convolution `self * other` as a new function. The result is
    /// multiplicative when both inputs are, with the local rule
    /// `(f*g)(p^e) = sum_j f(p^j) g(p^(e-j))`.
    pub fn dirichlet(&self, other: &ArithmeticFn) -> ArithmeticFn {
        let label = format!("({} * {})", self.label, other.label);
        match (&self.repr, &other.repr) {
            (
                Repr::Multiplicative { exact: fe, float: ff },
                Repr::Multiplicative { exact: ge, float: gf },
            ) => {
                let (ff, gf) = (ff.clone(), gf.clone());
                let float: FloatRule = Arc::new(move |p, e| {
                    (0..=e)
                        .map(|j| {
                            let a = if j == 0 { 1.0 } else { ff(p, j) };
                            let b = if j == e { 1.0 } else { gf(p, e - j) };
                            a * b
                        })
                        .sum()
                });
                let exact: Option<ExactRule> = match (fe, ge) {
                    (Some(fe), Some(ge)) => {
                        let (fe, ge) = (fe.clone(), ge.clone());
                        Some(Arc::new(move |p, e| {
                            let mut acc = BigRational::zero();
                            for j in 0..=e {
                                let a = if j == 0 { BigRational::one() } else { fe(p, j) };
                                let b = if j == e { BigRational::one() } else { ge(p, e - j) };
                                acc += a * b;
                            }
                            acc
                        }))
                    }
                    _ => None,
                };
                ArithmeticFn { label: label.into(), repr: Repr::Multiplicative { exact, float } }
            }
            _ => {
                let (f, g) = (self.clone(), other.clone());
                if self.is_exact() && other.is_exact() {
                    let (f2, g2) = (f.clone(), g.clone());
                    ArithmeticFn::pointwise(label, move |n| {
                        let mut acc = BigRational::zero();
                        for d in divisors(n) {
                            if let (Value::Exact(a), Value::Exact(b)) = (f.eval(d), g.eval(n / d)) {
                                acc += a * b;
                            }
                        }
                        acc
                    })
                    .with_float_eval(move |n| {
                        divisors(n).into_iter().map(|d| f2.eval_f64(d) * g2.eval_f64(n / d)).sum()
                    })
                } else {
                    ArithmeticFn::pointwise_float(label, move |n| {
                        divisors(n).into_iter().map(|d| f.eval_f64(d) * g.eval_f64(n / d)).sum()
                    })
                }
            }
        }
    }

    /// Pointwise product `n -> f(n) g(n)`; multiplicative if both are.
    pub fn times(&self, other: &ArithmeticFn) -> ArithmeticFn {
        let label = format!("{}.{}", self.label, other.label);
        match (&self.repr, &other.repr) {
            (
                Repr::Multiplicative { exact: fe, float: ff },
                Repr::Multiplicative { exact: ge, float: gf },
            ) => {
                let (ff, gf) = (ff.clone(), gf.clone());
                let float: FloatRule = Arc::new(move |p, e| ff(p, e) * gf(p, e));
                let exact: Option<ExactRule> = match (fe, ge) {
                    (Some(fe), Some(ge)) => {
                        let (fe, ge) = (fe.clone(), ge.clone());
                        Some(Arc::new(move |p, e| fe(p, e) * ge(p, e)))
                    }
                    _ => None,
                };
                ArithmeticFn { label: label.into(), repr: Repr::Multiplicative { exact, float } }
            }
            _ => {
                let (f, g) = (self.clone(), other.clone());
                if self.is_exact() && other.is_exact() {
                    let (f2, g2) = (f.clone(), g.clone());
                    ArithmeticFn::pointwise(label, move |n| match (f.eval(n), g.eval(n)) {
                        (Value::Exact(a), Value::Exact(b)) => a * b,
                        _ => unreachable!("exact class evaluates exactly"),
                    })
                    .with_float_eval(move |n| f2.eval_f64(n) * g2.eval_f64(n))
                } else {
                    ArithmeticFn::pointwise_float(label, move |n| f.eval_f64(n) * g.eval_f64(n))
                }
            }
        }
    }

    /// `n -> c f(n)`. Multiplicativity is not preserved unless `c = 1`.
    pub fn scaled(&self, c: Value) -> ArithmeticFn {
        let label = format!("{c}.{}", self.label);
        let f = self.clone();
        match c {
            Value::Exact(r) if self.is_exact() => {
                let f2 = f.clone();
                let cf = rational_to_f64(&r);
                ArithmeticFn::pointwise(label, move |n| match f.eval(n) {
                    Value::Exact(a) => a * &r,
                    Value::Float(_) => unreachable!("exact class evaluates exactly"),
                })
                .with_float_eval(move |n| cf * f2.eval_f64(n))
            }
            c => {
                let cf = c.to_f64();
                ArithmeticFn::pointwise_float(label, move |n| cf * f.eval_f64(n))
            }
        }
    }

    /// Float-class copy; keeps multiplicativity.
    pub fn to_float(&self) -> ArithmeticFn {
        let repr = match &self.repr {
            Repr::Multiplicative { float, .. } => Repr::Multiplicative { exact: None, float: float.clone() },
            Repr::Pointwise { float, .. } => Repr::Pointwise { exact: None, float: float.clone() },
        };
        ArithmeticFn { label: self.label.clone(), repr }
    }
}

fn product_f64(rule: &FloatRule, fact: &Factorization) -> f64 {
    let mut acc = 1.0;
    for &(p, e) in fact.factors() {
        acc *= rule(p, e);
        if acc == 0.0 {
            break;
        }
    }
    acc
}
