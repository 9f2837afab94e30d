use num_rational::BigRational;
use num_traits::FromPrimitive;
use proptest::prelude::*;

use rfdual_core::arith::{divisors, euler_phi, mu};
use rfdual_core::bivar::{dual2_f, dual2_sum_exact, rf2_f_from_a, rf2_sum_exact};
use rfdual_core::csum::{csum_expsum, csum_gcd, csum_mult};
use rfdual_core::dualseries::{dual_f_from_a, dual_sum_exact, stop_point};
use rfdual_core::rfseries::{rf_f_from_a, rf_sum_exact};
use rfdual_core::summation::CompensatedSum;
use rfdual_core::{ArithmeticFn, BivariateFn, Grouping, Value};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn support() -> impl Strategy<Value = Vec<(u64, i64)>> {
    prop::collection::btree_map(1u64..=60, -9i64..=9, 1..8).prop_map(|m| m.into_iter().collect())
}

fn support2() -> impl Strategy<Value = Vec<((u64, u64), i64)>> {
    prop::collection::btree_map((1u64..=12, 1u64..=12), -5i64..=5, 1..6).prop_map(|m| m.into_iter().collect())
}

proptest! {
    #[test]
    fn three_routes_agree(q in 1u64..200, n in 1u64..2_000) {
        let g = csum_gcd(q, n);
        prop_assert_eq!(csum_mult(q, n), g);
        prop_assert_eq!(csum_expsum(q, n).unwrap(), g);
    }

    #[test]
    fn multiplicative_in_modulus(a in 1u64..300, b in 1u64..300, n in 1u64..100_000) {
        prop_assume!(gcd(a, b) == 1);
        prop_assert_eq!(csum_gcd(a * b, n), csum_gcd(a, n) * csum_gcd(b, n));
    }

    #[test]
    fn depends_on_gcd_only(q in 1u64..500, n in 1u64..100_000) {
        prop_assert_eq!(csum_gcd(q, n), csum_gcd(q, gcd(q, n)));
        prop_assert_eq!(csum_gcd(q, q * n), euler_phi(q) as i64);
        prop_assert_eq!(csum_gcd(q, 1), mu(q));
    }

    #[test]
    fn divisor_sum_detects_divisibility(m in 1u64..2_000, n in 1u64..20_000) {
        let s: i64 = divisors(m).into_iter().map(|q| csum_gcd(q, n)).sum();
        prop_assert_eq!(s, if n % m == 0 { m as i64 } else { 0 });
    }

    #[test]
    fn dual_transform_exact_on_finite_support(vals in support(), q in 1u64..=40) {
        let a = ArithmeticFn::finite_support("a", &vals);
        let top = vals.iter().map(|&(n, _)| n).max().unwrap();
        prop_assert_eq!(dual_sum_exact(&a, q, top), dual_f_from_a(&a, q, top));
    }

    #[test]
    fn classical_transform_exact_on_finite_support(vals in support(), n in 1u64..=40) {
        let a = ArithmeticFn::finite_support("a", &vals);
        let top = vals.iter().map(|&(n, _)| n).max().unwrap();
        prop_assert_eq!(rf_sum_exact(&a, n, top), rf_f_from_a(&a, n, top));
    }

    #[test]
    fn two_variable_exact_on_finite_support(vals in support2(), q1 in 1u64..=8, q2 in 1u64..=8) {
        let a = BivariateFn::finite_support("a", &vals);
        prop_assert_eq!(dual2_sum_exact(&a, q1, q2, 12), dual2_f(&a, q1, q2, 12));
        prop_assert_eq!(rf2_sum_exact(&a, q1, q2, 12), rf2_f_from_a(&a, q1, q2, 12));
    }

    #[test]
    fn period_stop_is_largest_multiple(q in 2u64..1_000, n in 1u64..100_000) {
        prop_assume!(q <= n);
        let stop = stop_point(q, n, Grouping::PeriodGrouped).unwrap();
        prop_assert_eq!(stop % q, 0);
        prop_assert!(stop <= n && n < stop + q);
        prop_assert_eq!(stop_point(q, n, Grouping::Natural).unwrap(), n);
    }

    #[test]
    fn compensated_sum_matches_exact(xs in prop::collection::vec(-1e6f64..1e6, 1..400)) {
        let exact: BigRational = xs.iter().map(|&x| BigRational::from_f64(x).unwrap()).sum();
        let exact = Value::from(exact).to_f64();
        let got = xs.iter().copied().collect::<CompensatedSum>().value();
        prop_assert!((got - exact).abs() <= 1e-15 * exact.abs().max(1.0), "{got} vs {exact}");
    }
}
