//! The classical arithmetic functions, evaluated exactly where they are
//! rational-valued.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factor::Factorization;
use super::function::ArithmeticFn;
use super::sieve;
use crate::error::{Error, Result};
use crate::value::Value;

/// Identifier of a built-in function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FnId {
    Mu,
    Lambda,
    Tau,
    Omega,
    BigOmega,
    Mangoldt,
    SigmaS,
    PhiS,
    PsiS,
    RadicalK,
    IdS,
    One,
    Delta,
    ISquare,
    R2,
}

impl FnId {
    pub const ALL: [FnId; 15] = [
        FnId::Mu,
        FnId::Lambda,
        FnId::Tau,
        FnId::Omega,
        FnId::BigOmega,
        FnId::Mangoldt,
        FnId::SigmaS,
        FnId::PhiS,
        FnId::PsiS,
        FnId::RadicalK,
        FnId::IdS,
        FnId::One,
        FnId::Delta,
        FnId::ISquare,
        FnId::R2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FnId::Mu => "mu",
            FnId::Lambda => "lambda",
            FnId::Tau => "tau",
            FnId::Omega => "omega",
            FnId::BigOmega => "bigomega",
            FnId::Mangoldt => "mangoldt",
            FnId::SigmaS => "sigma_s",
            FnId::PhiS => "phi_s",
            FnId::PsiS => "psi_s",
            FnId::RadicalK => "radical_K",
            FnId::IdS => "id_s",
            FnId::One => "one",
            FnId::Delta => "delta",
            FnId::ISquare => "i_square",
            FnId::R2 => "r2",
        }
    }

    /// Whether the function takes the parameter `s`.
    pub fn needs_parameter(self) -> bool {
        matches!(self, FnId::SigmaS | FnId::PhiS | FnId::PsiS | FnId::IdS)
    }

    pub fn is_multiplicative(self) -> bool {
        !matches!(self, FnId::Omega | FnId::BigOmega | FnId::Mangoldt | FnId::R2)
    }

    /// The function as an [`ArithmeticFn`].
    pub fn function(self, s: Option<Param>) -> Result<ArithmeticFn> {
        let s = match (self.needs_parameter(), s) {
            (true, None) => return Err(Error::MissingParameter(self.name())),
            (true, Some(s)) => Some(s),
            (false, _) => None,
        };
        let f = match (self, s) {
            (FnId::Mu, _) => mu_fn(),
            (FnId::Lambda, _) => liouville_fn(),
            (FnId::Tau, _) => ArithmeticFn::multiplicative("tau", |_, e| int(e as i64 + 1))
                .with_float_rule(|_, e| e as f64 + 1.0),
            (FnId::Omega, _) => ArithmeticFn::pointwise("omega", |n| int(factorize(n).omega() as i64)),
            (FnId::BigOmega, _) => {
                ArithmeticFn::pointwise("bigomega", |n| int(factorize(n).big_omega() as i64))
            }
            (FnId::Mangoldt, _) => ArithmeticFn::pointwise_float("mangoldt", mangoldt),
            (FnId::SigmaS, Some(Param::Int(s))) => ArithmeticFn::multiplicative(
                format!("sigma_{s}"),
                move |p, e| (0..=e).map(|j| pow_rat(p, s * j as i64)).sum(),
            )
            .with_float_rule(move |p, e| (0..=e).map(|j| (p as f64).powf((s * j as i64) as f64)).sum()),
            (FnId::SigmaS, Some(Param::Real(s))) => {
                ArithmeticFn::multiplicative_float(format!("sigma_{s}"), move |p, e| {
                    (0..=e).map(|j| (p as f64).powf(s * j as f64)).sum()
                })
            }
            (FnId::PhiS, Some(Param::Int(s))) => ArithmeticFn::multiplicative(format!("phi_{s}"), move |p, e| {
                pow_rat(p, s * e as i64) * (BigRational::one() - pow_rat(p, -s))
            })
            .with_float_rule(move |p, e| {
                let p = p as f64;
                p.powf((s * e as i64) as f64) * (1.0 - p.powf(-s as f64))
            }),
            (FnId::PhiS, Some(Param::Real(s))) => {
                ArithmeticFn::multiplicative_float(format!("phi_{s}"), move |p, e| {
                    let p = p as f64;
                    p.powf(s * e as f64) * (1.0 - p.powf(-s))
                })
            }
            (FnId::PsiS, Some(Param::Int(s))) => ArithmeticFn::multiplicative(format!("psi_{s}"), move |p, e| {
                pow_rat(p, s * e as i64) * (BigRational::one() + pow_rat(p, -s))
            })
            .with_float_rule(move |p, e| {
                let p = p as f64;
                p.powf((s * e as i64) as f64) * (1.0 + p.powf(-s as f64))
            }),
            (FnId::PsiS, Some(Param::Real(s))) => {
                ArithmeticFn::multiplicative_float(format!("psi_{s}"), move |p, e| {
                    let p = p as f64;
                    p.powf(s * e as f64) * (1.0 + p.powf(-s))
                })
            }
            (FnId::RadicalK, _) => ArithmeticFn::multiplicative("K", |p, _| int(p as i64))
                .with_float_rule(|p, _| p as f64),
            (FnId::IdS, Some(Param::Int(s))) => {
                ArithmeticFn::multiplicative(format!("id^{s}"), move |p, e| pow_rat(p, s * e as i64))
                    .with_float_rule(move |p, e| (p as f64).powf((s * e as i64) as f64))
            }
            (FnId::IdS, Some(Param::Real(s))) => {
                ArithmeticFn::multiplicative_float(format!("id^{s}"), move |p, e| (p as f64).powf(s * e as f64))
            }
            (FnId::One, _) => one_fn(),
            (FnId::Delta, _) => delta_fn(),
            (FnId::ISquare, _) => {
                ArithmeticFn::multiplicative("I_square", |_, e| int(i64::from(e % 2 == 0)))
                    .with_float_rule(|_, e| if e % 2 == 0 { 1.0 } else { 0.0 })
            }
            (FnId::R2, _) => ArithmeticFn::pointwise("r2", |n| int(r2(n) as i64)),
            (_, None) => unreachable!("parameter checked above"),
        };
        Ok(f)
    }
}

impl fmt::Display for FnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FnId {
    type Err = Error;

    fn from_str(s: &str) -> Result<FnId> {
        let id = match s {
            "mu" => FnId::Mu,
            "lambda" | "liouville" => FnId::Lambda,
            "tau" => FnId::Tau,
            "omega" => FnId::Omega,
            "bigomega" => FnId::BigOmega,
            "mangoldt" | "Lambda" => FnId::Mangoldt,
            "sigma_s" | "sigma" => FnId::SigmaS,
            "phi_s" | "phi" => FnId::PhiS,
            "psi_s" | "psi" => FnId::PsiS,
            "radical_K" | "K" => FnId::RadicalK,
            "id_s" | "id" => FnId::IdS,
            "one" | "1" => FnId::One,
            "delta" => FnId::Delta,
            "i_square" => FnId::ISquare,
            "r2" => FnId::R2,
            other => return Err(Error::UnknownFunction(other.to_string())),
        };
        Ok(id)
    }
}

/// Parameter `s` of the subscripted families. Integer `s` evaluates exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Int(i64),
    Real(f64),
}

impl Param {
    /// Integral reals become `Int`, so `2.0` evaluates exactly.
    pub fn from_f64(s: f64) -> Param {
        if s.fract() == 0.0 && s.abs() < 1e15 {
            Param::Int(s as i64)
        } else {
            Param::Real(s)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Param::Int(s) => s as f64,
            Param::Real(s) => s,
        }
    }
}

impl From<i64> for Param {
    fn from(s: i64) -> Param {
        Param::Int(s)
    }
}

impl From<f64> for Param {
    fn from(s: f64) -> Param {
        Param::from_f64(s)
    }
}

/// Evaluate a built-in function at `n`.
pub fn classical(id: FnId, s: Option<Param>, n: u64) -> Result<Value> {
    if n == 0 {
        return Err(Error::NonPositive(0));
    }
    Ok(id.function(s)?.eval(n))
}

fn factorize(n: u64) -> Factorization {
    sieve::global().factorize(n)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `p^k` as an exact rational, `k` of either sign.
pub fn pow_rat(p: u64, k: i64) -> BigRational {
    let base = BigInt::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

pub fn mu_fn() -> ArithmeticFn {
    ArithmeticFn::multiplicative("mu", |_, e| int(if e == 1 { -1 } else { 0 }))
        .with_float_rule(|_, e| if e == 1 { -1.0 } else { 0.0 })
}

pub fn liouville_fn() -> ArithmeticFn {
    ArithmeticFn::multiplicative("lambda", |_, e| int(if e % 2 == 0 { 1 } else { -1 }))
        .with_float_rule(|_, e| if e % 2 == 0 { 1.0 } else { -1.0 })
}

pub fn one_fn() -> ArithmeticFn {
    ArithmeticFn::multiplicative("1", |_, _| BigRational::one()).with_float_rule(|_, _| 1.0)
}

pub fn delta_fn() -> ArithmeticFn {
    ArithmeticFn::multiplicative("delta", |_, _| BigRational::zero()).with_float_rule(|_, _| 0.0)
}

/// `id^s`, `n -> n^s`, for integer `s` of either sign.
pub fn id_pow_fn(s: i64) -> ArithmeticFn {
    FnId::IdS.function(Some(Param::Int(s))).expect("parameter supplied")
}

pub fn mu(n: u64) -> i64 {
    mu_of(&factorize(n))
}

pub fn mu_of(f: &Factorization) -> i64 {
    if !f.is_squarefree() {
        0
    } else if f.omega() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn liouville(n: u64) -> i64 {
    if factorize(n).big_omega() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn tau(n: u64) -> u64 {
    factorize(n).factors().iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).factors().iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn radical(n: u64) -> u64 {
    factorize(n).radical()
}

/// von Mangoldt: `log p` at prime powers `p^e`, else 0.
pub fn mangoldt(n: u64) -> f64 {
    let f = factorize(n);
    match f.factors() {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    }
}

/// Square indicator via the integer square root.
pub fn is_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// Square indicator via exponent parity of the factorization.
pub fn is_square_by_parity(n: u64) -> bool {
    factorize(n).factors().iter().all(|&(_, e)| e % 2 == 0)
}

/// Number of `(x, y)` in `Z^2` with `x^2 + y^2 = n`, by direct enumeration.
pub fn r2_lattice(n: u64) -> u64 {
    let r = n.sqrt() as i64;
    let mut count = 0;
    for x in -r..=r {
        let rest = n as i64 - x * x;
        if rest < 0 {
            continue;
        }
        let y = (rest as u64).sqrt() as i64;
        if y * y == rest {
            count += if y == 0 { 1 } else { 2 };
        }
    }
    count
}

/// `4 sum_{d | n} chi_4(d)` with `chi_4` the non-principal character mod 4.
pub fn r2_character(n: u64) -> u64 {
    let f = factorize(n);
    let mut prod: u64 = 4;
    for &(p, e) in f.factors() {
        match p % 4 {
            1 => prod *= e as u64 + 1,
            3 if e % 2 == 1 => return 0,
            _ => {}
        }
    }
    prod
}

/// Lattice enumeration up to `n = 1000`, the character divisor sum above.
pub fn r2(n: u64) -> u64 {
    if n <= 1000 {
        r2_lattice(n)
    } else {
        r2_character(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(classical(FnId::Mu, None, 30).unwrap(), Value::int(-1));
        assert_eq!(classical(FnId::PhiS, Some(Param::Int(2)), 6).unwrap(), Value::int(24));
        assert_eq!(classical(FnId::R2, None, 5).unwrap(), Value::int(8));
        assert_eq!(r2_lattice(5), 8);
    }

    #[test]
    fn errors() {
        assert_eq!(
            classical(FnId::SigmaS, None, 4),
            Err(Error::MissingParameter("sigma_s"))
        );
        assert!("nope".parse::<FnId>().is_err());
        assert_eq!(classical(FnId::Mu, None, 0), Err(Error::NonPositive(0)));
    }

    #[test]
    fn sigma_one_matches_brute_divisor_sum() {
        let sigma = FnId::SigmaS.function(Some(Param::Int(1))).unwrap();
        for n in 1..=10_000u64 {
            let brute: u64 = brute_divisors_fast(n).iter().sum();
            assert_eq!(sigma.eval(n), Value::int(brute as i64), "n = {n}");
        }
    }

    fn brute_divisors_fast(n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                out.push(d);
                if d * d != n {
                    out.push(n / d);
                }
            }
            d += 1;
        }
        out
    }

    #[test]
    fn real_and_integer_s_agree() {
        for id in [FnId::SigmaS, FnId::PhiS, FnId::PsiS, FnId::IdS] {
            let exact = id.function(Some(Param::Int(-2))).unwrap();
            let real = id.function(Some(Param::Real(-2.0))).unwrap();
            for n in 1..200 {
                let (a, b) = (exact.eval(n).to_f64(), real.eval(n).to_f64());
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{id} n={n}");
            }
        }
    }

    #[test]
    fn negative_s_is_exact() {
        // phi_{-1}(6) = (1/6)(1-2)(1-3) = 1/3
        let v = classical(FnId::PhiS, Some(Param::Int(-1)), 6).unwrap();
        assert_eq!(v, Value::ratio(1, 3));
        assert!(v.is_exact());
        assert!(!classical(FnId::PhiS, Some(Param::Real(1.5)), 6).unwrap().is_exact());
        assert!(!classical(FnId::Mangoldt, None, 8).unwrap().is_exact());
    }

    #[test]
    fn mangoldt_values() {
        assert!((mangoldt(8) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(mangoldt(12), 0.0);
        assert_eq!(mangoldt(1), 0.0);
    }

    #[test]
    fn square_paths_agree() {
        for n in 1..=10_000 {
            assert_eq!(is_square(n), is_square_by_parity(n), "n = {n}");
        }
    }

    #[test]
    fn r2_paths_agree() {
        for n in 1..=1000 {
            assert_eq!(r2_lattice(n), r2_character(n), "n = {n}");
        }
    }

    #[test]
    fn small_tables() {
        assert_eq!(brute_divisors(12).len() as u64, tau(12));
        assert_eq!(euler_phi(36), 12);
        assert_eq!(radical(72), 6);
        assert_eq!(liouville(12), -1);
    }

    #[test]
    fn multiplicative_on_coprime_pairs() {
        let fns: Vec<ArithmeticFn> = FnId::ALL
            .iter()
            .filter(|id| id.is_multiplicative())
            .map(|id| id.function(Some(Param::Int(2))).unwrap())
            .collect();
        let mut checked = 0;
        for m in (1..=1000u64).step_by(7) {
            for n in (1..=1000u64).step_by(11) {
                if num_integer::gcd(m, n) != 1 {
                    continue;
                }
                for f in &fns {
                    assert_eq!(f.eval(m * n), f.eval(m) * f.eval(n), "{} at ({m}, {n})", f.label());
                }
                checked += 1;
            }
        }
        assert!(checked > 1000);
        for f in &fns {
            assert_eq!(f.eval(1), Value::one());
        }
    }
}
