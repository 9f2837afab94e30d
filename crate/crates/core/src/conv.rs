//! Dirichlet convolution in one and two variables, and the mixed
//! convolutions that feed a one-variable function into the left (modulus)
//! or right (argument) slot of a two-variable kernel.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::arith::{divisors, ArithmeticFn};
use crate::csum;
use crate::value::Value;

/// Anything evaluable at a pair of positive integers.
pub trait TwoVariable {
    fn eval2(&self, q: u64, n: u64) -> Value;
}

type Eval2 = Arc<dyn Fn(u64, u64) -> Value + Send + Sync>;

/// A two-variable kernel with an optional `(q, n)` memo.
#[derive(Clone)]
pub struct Kernel2 {
    label: Arc<str>,
    eval: Eval2,
    multiplicative: bool,
    memo: Option<Arc<RwLock<HashMap<(u64, u64), Value>>>>,
}

impl fmt::Debug for Kernel2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel2")
            .field("label", &self.label)
            .field("multiplicative", &self.multiplicative)
            .field("memoized", &self.memo.is_some())
            .finish()
    }
}

impl Kernel2 {
    pub fn new<F>(label: impl Into<Arc<str>>, multiplicative: bool, eval: F) -> Kernel2
    where
        F: Fn(u64, u64) -> Value + Send + Sync + 'static,
    {
        Kernel2 { label: label.into(), eval: Arc::new(eval), multiplicative, memo: None }
    }

    /// `D(m, n) = m` on the diagonal, 0 elsewhere.
    pub fn diagonal() -> Kernel2 {
        Kernel2::new("D", true, |m, n| if m == n { Value::int(m as i64) } else { Value::zero() })
    }

    /// `delta(m, n)`: 1 on the diagonal, 0 elsewhere.
    pub fn diagonal_indicator() -> Kernel2 {
        Kernel2::new("delta2", true, |m, n| Value::int(i64::from(m == n)))
    }

    /// `(q, n) -> c_q(n)`.
    pub fn ramanujan() -> Kernel2 {
        Kernel2::new("c", true, |q, n| Value::int(csum::csum_gcd(q, n)))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    /// Cache evaluations by `(q, n)`. Clones share the cache.
    pub fn memoized(mut self) -> Kernel2 {
        self.memo = Some(Arc::new(RwLock::new(HashMap::new())));
        self
    }

    pub fn eval(&self, q: u64, n: u64) -> Value {
        let Some(memo) = &self.memo else {
            return (self.eval)(q, n);
        };
        if let Some(v) = memo.read().expect("memo lock poisoned").get(&(q, n)) {
            return v.clone();
        }
        let v = (self.eval)(q, n);
        memo.write().expect("memo lock poisoned").insert((q, n), v.clone());
        v
    }

    /// `f *_l g` as a kernel.
    pub fn left(f: &ArithmeticFn, g: &Kernel2) -> Kernel2 {
        let label = format!("({} *l {})", f.label(), g.label);
        let multiplicative = f.is_multiplicative() && g.multiplicative;
        let (f, g) = (f.clone(), g.clone());
        Kernel2::new(label, multiplicative, move |q, n| conv_left(&f, &g, q, n))
    }

    /// `g *_r h` as a kernel.
    pub fn right(g: &Kernel2, h: &ArithmeticFn) -> Kernel2 {
        let label = format!("({} *r {})", g.label, h.label());
        let multiplicative = h.is_multiplicative() && g.multiplicative;
        let (g, h) = (g.clone(), h.clone());
        Kernel2::new(label, multiplicative, move |q, n| conv_right(&g, &h, q, n))
    }
}

impl TwoVariable for Kernel2 {
    fn eval2(&self, q: u64, n: u64) -> Value {
        self.eval(q, n)
    }
}

/// `(f * g)(n) = sum_{d | n} f(d) g(n/d)`.
pub fn dconv(f: &ArithmeticFn, g: &ArithmeticFn, n: u64) -> Value {
    divisors(n).into_iter().map(|d| f.eval(d) * g.eval(n / d)).sum()
}

/// Two-variable Dirichlet convolution.
pub fn dconv2<F, G>(f: &F, g: &G, q: u64, n: u64) -> Value
where
    F: TwoVariable + ?Sized,
    G: TwoVariable + ?Sized,
{
    let dn = divisors(n);
    let mut acc = Value::zero();
    for d1 in divisors(q) {
        for &d2 in &dn {
            acc += f.eval2(d1, d2) * g.eval2(q / d1, n / d2);
        }
    }
    acc
}

/// `(f *_l g)(q, n) = sum_{d | q} f(q/d) g(d, n)`.
pub fn conv_left<G: TwoVariable + ?Sized>(f: &ArithmeticFn, g: &G, q: u64, n: u64) -> Value {
    divisors(q).into_iter().map(|d| f.eval(q / d) * g.eval2(d, n)).sum()
}

/// `(g *_r f)(q, n) = sum_{d | n} g(q, d) f(n/d)`.
pub fn conv_right<G: TwoVariable + ?Sized>(g: &G, f: &ArithmeticFn, q: u64, n: u64) -> Value {
    divisors(n).into_iter().map(|d| g.eval2(q, d) * f.eval(n / d)).sum()
}

/// Closed form of `f *_l D`: `n f(q/n)` when `n | q`, else 0.
pub fn left_diagonal_closed(f: &ArithmeticFn, q: u64, n: u64) -> Value {
    if q % n == 0 {
        f.eval(q / n) * Value::int(n as i64)
    } else {
        Value::zero()
    }
}

/// Closed form of `D *_r f`: `q f(n/q)` when `q | n`, else 0.
pub fn right_diagonal_closed(f: &ArithmeticFn, q: u64, n: u64) -> Value {
    if n % q == 0 {
        f.eval(n / q) * Value::int(q as i64)
    } else {
        Value::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{liouville_fn, mu_fn, one_fn, FnId};

    #[test]
    fn dconv_examples() {
        let (mu, one, lambda) = (mu_fn(), one_fn(), liouville_fn());
        assert_eq!(dconv(&mu, &one, 12), Value::zero());
        assert_eq!(dconv(&one, &one, 12), Value::int(6));
        assert_eq!(dconv(&mu, &lambda, 4), Value::int(2));
        for n in 1..=10_000 {
            let expect = Value::int(i64::from(n == 1));
            assert_eq!(dconv(&mu, &one, n), expect, "n = {n}");
        }
    }

    #[test]
    fn mixed_examples() {
        let (mu, one) = (mu_fn(), one_fn());
        let d = Kernel2::diagonal();
        let c = Kernel2::ramanujan();
        assert_eq!(conv_left(&mu, &d, 6, 3), Value::int(-3));
        assert_eq!(conv_left(&mu, &d, 6, 4), Value::zero());
        assert_eq!(conv_left(&one, &c, 4, 8), Value::int(4));
        assert_eq!(conv_right(&d, &one, 3, 12), Value::int(3));
        assert_eq!(conv_right(&d, &one, 5, 12), Value::zero());
        assert_eq!(conv_right(&c, &mu, 12, 6), Value::int(-6));
    }

    #[test]
    fn kernel_symmetry() {
        let d = Kernel2::diagonal();
        for m in 1..30 {
            for n in 1..30 {
                assert_eq!(d.eval(m, n), d.eval(n, m));
            }
        }
        assert_eq!(d.eval(7, 7), Value::int(7));
    }

    #[test]
    fn memo_returns_same_values() {
        let k = Kernel2::left(&mu_fn(), &Kernel2::diagonal()).memoized();
        let shared = k.clone();
        for q in 1..40 {
            for n in 1..40 {
                assert_eq!(k.eval(q, n), left_diagonal_closed(&mu_fn(), q, n));
                assert_eq!(shared.eval(q, n), k.eval(q, n));
            }
        }
    }

    #[test]
    fn float_poisons_convolution() {
        let m = FnId::Mangoldt.function(None).unwrap();
        let v = dconv(&m, &one_fn(), 12);
        assert!(!v.is_exact());
        assert!((v.to_f64() - 12f64.ln()).abs() < 1e-12);
    }
}
