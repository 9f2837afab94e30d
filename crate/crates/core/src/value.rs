//! Scalar values that are either exact rationals or floats.
//!
//! Arithmetic between two exact values stays exact. Any float operand turns
//! the result into a float, so a single real-valued input is visible in the
//! output class.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Declared value class of an arithmetic function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueClass {
    ExactRational,
    RealFloat,
}

impl ValueClass {
    /// The class of a result built from operands of both classes.
    pub fn join(self, other: ValueClass) -> ValueClass {
        if self == ValueClass::ExactRational && other == ValueClass::ExactRational {
            ValueClass::ExactRational
        } else {
            ValueClass::RealFloat
        }
    }
}

#[derive(Debug, Clone)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    pub fn zero() -> Value {
        Value::Exact(BigRational::zero())
    }

    pub fn one() -> Value {
        Value::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Value {
        Value::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn big(n: BigInt) -> Value {
        Value::Exact(BigRational::from_integer(n))
    }

    /// `num / den` as an exact rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Value {
        Value::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn float(x: f64) -> Value {
        Value::Float(x)
    }

    pub fn class(&self) -> ValueClass {
        match self {
            Value::Exact(_) => ValueClass::ExactRational,
            Value::Float(_) => ValueClass::RealFloat,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(r) => r.is_zero(),
            Value::Float(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => rational_to_f64(r),
            Value::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }

    /// The integer value, if this is an exact integer that fits in `i64`.
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Value::Exact(r) if r.is_integer() => r.to_integer().to_i64(),
            _ => None,
        }
    }

    pub fn abs(&self) -> Value {
        match self {
            Value::Exact(r) => Value::Exact(r.abs()),
            Value::Float(x) => Value::Float(x.abs()),
        }
    }

    /// Integer power, exact for exact values. Negative exponents invert.
    pub fn powi(&self, e: i32) -> Value {
        match self {
            Value::Exact(r) => Value::Exact(num_traits::pow::Pow::pow(r, e)),
            Value::Float(x) => Value::Float(x.powi(e)),
        }
    }

    pub fn recip(&self) -> Value {
        match self {
            Value::Exact(r) => Value::Exact(r.recip()),
            Value::Float(x) => Value::Float(1.0 / x),
        }
    }

    /// Convert to float class without changing the numeric value.
    pub fn into_float(self) -> Value {
        Value::Float(self.to_f64())
    }
}

/// Nearest `f64` to a big rational, robust to numerators and denominators
/// that individually overflow `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    // scale so the quotient keeps ~64 significant bits
    let shift = nb - db - 64;
    let (num, den) = if shift > 0 {
        (r.numer().clone(), r.denom().clone() << shift as usize)
    } else {
        (r.numer().clone() << (-shift) as usize, r.denom().clone())
    };
    let q = (num / den).to_f64().unwrap_or(f64::NAN);
    q * 2f64.powi(shift as i32)
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Value::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::int(n)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<BigRational> for Value {
    fn from(r: BigRational) -> Self {
        Value::Exact(r)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Value> for &Value {
            type Output = Value;
            fn $method(self, rhs: &Value) -> Value {
                match (self, rhs) {
                    (Value::Exact(a), Value::Exact(b)) => Value::Exact(a $op b),
                    _ => Value::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait<Value> for Value {
            type Output = Value;
            fn $method(self, rhs: Value) -> Value {
                match (self, rhs) {
                    (Value::Exact(a), Value::Exact(b)) => Value::Exact(a $op b),
                    (a, b) => Value::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl $trait<&Value> for Value {
            type Output = Value;
            fn $method(self, rhs: &Value) -> Value {
                &self $op rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl AddAssign<&Value> for Value {
    fn add_assign(&mut self, rhs: &Value) {
        match (&mut *self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => *a += b,
            _ => *self = Value::Float(self.to_f64() + rhs.to_f64()),
        }
    }
}

impl AddAssign<Value> for Value {
    fn add_assign(&mut self, rhs: Value) {
        *self += &rhs;
    }
}

impl MulAssign<&Value> for Value {
    fn mul_assign(&mut self, rhs: &Value) {
        match (&mut *self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => *a *= b,
            _ => *self = Value::Float(self.to_f64() * rhs.to_f64()),
        }
    }
}

impl MulAssign<Value> for Value {
    fn mul_assign(&mut self, rhs: Value) {
        *self *= &rhs;
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        match self {
            Value::Exact(a) => Value::Exact(-a),
            Value::Float(x) => Value::Float(-x),
        }
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        let mut acc = Value::zero();
        for v in iter {
            acc += v;
        }
        acc
    }
}

impl Product for Value {
    fn product<I: Iterator<Item = Value>>(iter: I) -> Value {
        let mut acc = Value::one();
        for v in iter {
            acc *= v;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_stays_exact() {
        let v = Value::ratio(1, 3) + Value::ratio(1, 6);
        assert_eq!(v, Value::ratio(1, 2));
        assert!(v.is_exact());
    }

    #[test]
    fn float_poisons() {
        let v = Value::ratio(1, 2) * Value::float(2.0);
        assert!(!v.is_exact());
        assert_eq!(v.to_f64(), 1.0);
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = BigInt::from(10u32).pow(400);
        let r = BigRational::new(big.clone() * 3, big * 7);
        assert!((rational_to_f64(&r) - 3.0 / 7.0).abs() < 1e-15);
        let tiny = BigRational::new(BigInt::from(1), BigInt::from(2u32).pow(1100));
        assert_eq!(rational_to_f64(&tiny), 0.0);
        let r = BigRational::new(BigInt::from(2u32).pow(1000) + 1u32, BigInt::from(2u32).pow(999));
        assert!((rational_to_f64(&r) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn display() {
        assert_eq!(Value::int(-2).to_string(), "-2");
        assert_eq!(Value::ratio(3, 6).to_string(), "1/2");
    }
}
