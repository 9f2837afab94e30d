//! Targets and partial sums checked against values computed independently:
//! closed forms by hand, and Ramanujan sums by a plain cosine sum.

use std::f64::consts::PI;

use rfdual_core::dseries::zeta;
use rfdual_core::dualseries::catalog;
use rfdual_core::harness::{verify, VerifyRequest};
use rfdual_core::Grouping;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `sum_{1 <= a <= q, (a,q)=1} cos(2 pi a n / q)`.
fn cos_csum(q: u64, n: u64) -> f64 {
    (1..=q).filter(|&a| gcd(a, q) == 1).map(|a| (2.0 * PI * ((a * n) % q) as f64 / q as f64).cos()).sum()
}

fn report(case: &str, q: u64, s: Option<f64>, n: u64) -> rfdual_core::TruncatedSumReport {
    let mut req = VerifyRequest::new(case, q, n, 1e-3);
    req.s = s;
    verify(&req).unwrap()
}

#[test]
fn zeta_values() {
    assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-13);
    assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-13);
    assert!((zeta(3.0).unwrap() - 1.202_056_903_159_594_2).abs() < 1e-13);
}

#[test]
fn closed_form_targets() {
    // sigma_2(6)/6^2 = (1 + 4 + 9 + 36)/36
    assert!((report("eq-sigma", 6, Some(2.0), 10).target - 50.0 / 36.0).abs() < 1e-14);
    // phi(12)/12
    assert!((report("eq-varphi", 12, Some(1.0), 10).target - 4.0 / 12.0).abs() < 1e-14);
    // r(5) = #{(x, y): x^2 + y^2 = 5}
    assert_eq!(report("eq-r", 5, None, 10).target, 8.0);
    assert_eq!(report("eq-tau", 12, None, 10).target, 6.0);
    assert!((report("ra2", 9, None, 10).target - 3f64.ln()).abs() < 1e-14);
    assert_eq!(report("ra2", 6, None, 10).target, 0.0);
    // q^(1-s) prod_{p|q} (1 - p^(s-1)) at s = 2, q = 6
    assert!((report("ra1", 6, Some(2.0), 10).target - 2.0 / 6.0).abs() < 1e-14);
    assert_eq!(report("ex3-7", 2, None, 10).target, -0.5);
}

#[test]
fn partial_sums_match_cosine_oracle() {
    let n_terms = 3000;
    for q in [1u64, 2, 6, 7, 12] {
        let z = zeta(2.0).unwrap();
        let oracle: f64 = (1..=n_terms).map(|n| cos_csum(q, n) / (n * n) as f64).sum::<f64>() / z;
        let r = report("ra1", q, Some(2.0), n_terms);
        assert!((r.partial_sum - oracle).abs() < 1e-10, "q={q}: {} vs {oracle}", r.partial_sum);
    }
    for n in [1u64, 4, 10] {
        let z = zeta(3.0).unwrap();
        let oracle: f64 = z * (1..=n_terms).map(|q| cos_csum(q, n) / (q as f64).powi(3)).sum::<f64>();
        let r = report("eq-sigma", n, Some(2.0), n_terms);
        assert!((r.partial_sum - oracle).abs() < 1e-10, "n={n}: {} vs {oracle}", r.partial_sum);
    }
}

#[test]
fn absolute_errors_sit_under_tail_bounds() {
    for (id, s) in [
        ("ra1", Some(2.0)),
        ("ex3-2", Some(2.0)),
        ("ex3-4", Some(2.0)),
        ("ex3-5", Some(3.0)),
        ("ex3-6", None),
        ("ex3-7", None),
        ("eq-sigma", Some(1.5)),
        ("eq-varphi", Some(1.0)),
    ] {
        let case = catalog(id, s).unwrap();
        for q in 1..=6u64 {
            let r = case.verify(q, 5000, Grouping::Natural, 1.0).unwrap();
            if let Some(t) = r.tail_bound {
                assert!(r.abs_error <= t, "{id} q={q}: {} > {t}", r.abs_error);
            }
        }
    }
}
