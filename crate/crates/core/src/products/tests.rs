use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::primes::sieve;

// mpmath: pi**2/15
const PI2_OVER_15: f64 = 0.657_973_626_739_290_6;

fn table() -> PrimeTable {
    sieve(1_000_000).unwrap()
}

fn one() -> SignSequence {
    SignSequence::Constant(1.0)
}

#[test]
fn zeta_two_from_primes() {
    let t = table();
    let r = euler_product_eval(&t.full_sequence(), &one(), ComplexPoint::real(2.0), &TruncationPolicy::default()).unwrap();
    assert!((r.value.re - PI * PI / 6.0).abs() < 1e-12);
    assert!(r.converged);

    let raw = TruncationPolicy::default().with_tail(TailMode::Truncate);
    let r = euler_product_eval(&t.full_sequence(), &one(), ComplexPoint::real(2.0), &raw).unwrap();
    let err = (r.value.re - PI * PI / 6.0).abs();
    assert!(err < 1e-6 && err <= r.tail_bound);
}

#[test]
fn single_factor_is_exact() {
    let a = BaseSequence::explicit(vec![2]).unwrap();
    let r = euler_product_eval(&a, &one(), ComplexPoint::real(1.0), &TruncationPolicy::default()).unwrap();
    assert!((r.value.re - 2.0).abs() < 1e-15);
    assert_eq!(r.tail_bound, 0.0);
}

#[test]
fn plus_product_quotient() {
    let t = table();
    let r = euler_product_eval(
        &t.full_sequence(),
        &SignSequence::Constant(-1.0),
        ComplexPoint::real(2.0),
        &TruncationPolicy::default(),
    )
    .unwrap();
    assert!((r.value.re - PI2_OVER_15).abs() < 1e-12);
}

#[test]
fn naturals_rejected_and_singular_factor_detected() {
    let r = euler_product_eval(&BaseSequence::naturals(), &one(), ComplexPoint::real(2.0), &TruncationPolicy::default());
    assert!(r.is_err());
    // 1 - 2^{-s} = 0 at s = 0
    let a = BaseSequence::explicit(vec![2, 3]).unwrap();
    assert!(matches!(
        euler_product_eval(&a, &one(), ComplexPoint::real(0.0), &TruncationPolicy::default()),
        Err(Error::SingularFactor { index: 1 })
    ));
}

#[test]
fn general_factor_validation() {
    assert!(GeneralFactor::new(vec![1.0, 1.0]).is_err());
    assert!(GeneralFactor::new(vec![0.0, 0.0]).is_err());
    // 1 - 2x vanishes at x = 1/2
    assert!(GeneralFactor::new(vec![0.0, 2.0]).is_err());
    let g = GeneralFactor::new(vec![0.0, 1.0, 0.0, 1.0]).unwrap();
    assert_eq!(g.lowest_degree(), 1);
    assert_eq!(g.gap_degree(), Some(3));
    let g = GeneralFactor::monomial(4, 3.0).unwrap();
    assert_eq!((g.lowest_degree(), g.gap_degree()), (4, Some(4)));
}

#[test]
fn log_coefficients() {
    let g = GeneralFactor::monomial(1, 1.0).unwrap();
    let c = g.log_coefficients(8, false);
    for (j, cj) in c.iter().enumerate().skip(1) {
        assert!((cj - 1.0 / j as f64).abs() < 1e-15);
    }
    assert!(g.log_coefficients(8, true).iter().all(|c| c.abs() < 1e-15));
    let g = GeneralFactor::monomial(2, 1.0).unwrap();
    let c = g.log_coefficients(8, false);
    assert_eq!(c[3], 0.0);
    assert!((c[6] - 1.0 / 3.0).abs() < 1e-15);
    // -ln(1 - x - x^3) + ln(1 - x) = x^3 + x^4 + x^5 + (3/2) x^6 + ...
    let g = GeneralFactor::new(vec![0.0, 1.0, 0.0, 1.0]).unwrap();
    let c = g.log_coefficients(6, true);
    let expect = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.5];
    for (a, b) in c.iter().zip(expect) {
        assert!((a - b).abs() < 1e-14, "{c:?}");
    }
}

#[test]
fn convergence_params() {
    let p = derive_convergence_params(&GeneralFactor::monomial(2, 1.0).unwrap(), 0.5).unwrap();
    assert_eq!(p.lambda, 2.0);
    assert!(p.c <= 1.1 + 1e-12);
    let p = derive_convergence_params(&GeneralFactor::monomial(1, 1.0).unwrap(), 0.5).unwrap();
    assert!(p.c <= 1.1 + 1e-12);
    let p = derive_convergence_params(&GeneralFactor::monomial(4, 3.0).unwrap(), 0.5).unwrap();
    assert_eq!(p.lambda, 4.0);
    assert!((p.c - 3.3).abs() < 1e-12);
    assert!(derive_convergence_params(&GeneralFactor::monomial(1, 1.0).unwrap(), 1.0).is_err());
}

#[test]
fn general_product_reductions() {
    let t = table();
    let seq = t.full_sequence();
    let pol = TruncationPolicy::default();
    let sq = general_product_eval(&seq, &GeneralFactor::monomial(2, 1.0).unwrap(), ComplexPoint::real(1.0), &pol).unwrap();
    let z2 = euler_product_eval(&seq, &one(), ComplexPoint::real(2.0), &pol).unwrap();
    assert!((sq.value - z2.value).norm() < 1e-12);

    let s = ComplexPoint::new(1.7, 3.0).unwrap();
    for p in [pol, pol.with_tail(TailMode::Truncate)] {
        let lin = general_product_eval(&seq, &GeneralFactor::monomial(1, 1.0).unwrap(), s, &p).unwrap();
        let e = euler_product_eval(&seq, &one(), s, &p).unwrap();
        assert!((lin.value - e.value).norm() < 1e-13);
    }
}

#[test]
fn general_product_domain() {
    let t = table();
    let g = GeneralFactor::new(vec![0.0, 1.0, 0.0, 1.0]).unwrap();
    let r = general_product_eval(&t.full_sequence(), &g, ComplexPoint::real(0.6), &TruncationPolicy::default());
    assert!(matches!(r, Err(Error::Domain(_))));
}

#[test]
fn regularized_ratio_is_stable_below_one() {
    let t = table();
    let g = GeneralFactor::new(vec![0.0, 1.0, 0.0, 1.0]).unwrap();
    let s = ComplexPoint::real(0.6);
    let raw = TruncationPolicy::default().with_tail(TailMode::Truncate);
    let a = regularized_ratio_eval(&t.full_sequence(), &g, s, &raw.with_max_terms(20_000)).unwrap();
    let b = regularized_ratio_eval(&t.full_sequence(), &g, s, &raw.with_max_terms(40_000)).unwrap();
    assert!(a.value.norm() > 0.0 && a.value.is_finite());
    assert!((a.value - b.value).norm() <= a.tail_bound);
    assert!((a.value - b.value).norm() < 1e-4 * a.value.norm());
    let full = regularized_ratio_eval(&t.full_sequence(), &g, s, &TruncationPolicy::default()).unwrap();
    assert!((full.value - b.value).norm() <= b.tail_bound);
    assert!(regularized_ratio_eval(&t.full_sequence(), &g, ComplexPoint::real(0.3), &raw).is_err());
    assert!(regularized_ratio_eval(&t.full_sequence(), &GeneralFactor::monomial(1, 1.0).unwrap(), s, &raw).is_err());
}

#[test]
fn continued_product_matches_euler_product() {
    let t = table();
    let seq = t.full_sequence();
    let pol = TruncationPolicy::default();
    for l in [SignSequence::alternating(1).unwrap(), SignSequence::tail_alternating(5, 1).unwrap()] {
        let c = continued_product_eval(&seq, &l, ComplexPoint::real(2.0), &pol).unwrap();
        let e = euler_product_eval(&seq, &l, ComplexPoint::real(2.0), &pol).unwrap();
        assert!((c.value - e.value).norm() < 1e-10, "{l:?}");
        assert!(c.value.norm() > 0.0);
    }
}

#[test]
fn continued_product_in_the_strip() {
    let t = sieve(4_000_000).unwrap();
    let seq = t.full_sequence();
    let l = SignSequence::alternating(1).unwrap();
    let s = ComplexPoint::real(0.8);
    let raw = TruncationPolicy::default().with_tail(TailMode::Truncate);
    let a = continued_product_eval(&seq, &l, s, &raw.with_max_terms(100_000)).unwrap();
    let b = continued_product_eval(&seq, &l, s, &raw.with_max_terms(200_000)).unwrap();
    assert!(a.value.norm() > 0.0 && a.value.is_finite());
    assert!((a.value - b.value).norm() < 1e-4);
    let c = continued_product_eval(&seq, &l, s, &TruncationPolicy::default().with_max_terms(100_000)).unwrap();
    let d = continued_product_eval(&seq, &l, s, &TruncationPolicy::default().with_max_terms(200_000)).unwrap();
    assert!((c.value - d.value).norm() < 1e-6);
    assert!((b.value - d.value).norm() <= b.tail_bound);
    assert!(matches!(
        continued_product_eval(&seq, &l, ComplexPoint::real(0.5), &raw),
        Err(Error::Domain(_))
    ));
}

#[test]
fn exp_identity() {
    let t = table();
    let pol = TruncationPolicy::default();
    for s in [2.0, 3.0, 1.5] {
        let r = regularized_exp_identity_residual(&t, ComplexPoint::real(s), &pol).unwrap();
        assert!(r.residual < 1e-12, "s = {s}: {}", r.residual);
    }
    let r = regularized_exp_identity_residual(&t, ComplexPoint::real(0.75), &pol).unwrap();
    assert!(r.residual < 1e-12, "{}", r.residual);
    assert!(regularized_exp_identity_residual(&t, ComplexPoint::real(0.5), &pol).is_err());
}

#[test]
fn truncation_discrepancy() {
    let t = table();
    let pol = TruncationPolicy::default();
    let (m, b) = truncation_discrepancy_check(&t, 5, ComplexPoint::real(2.0), &pol).unwrap();
    assert!((b - 2.0 / 11.0).abs() < 1e-15);
    assert!(m <= b);
    let (m, b) = truncation_discrepancy_check(&t, 10, ComplexPoint::real(3.0), &pol).unwrap();
    assert!((b - 29f64.powi(-2)).abs() < 1e-15);
    assert!(m <= b);
    assert!(truncation_discrepancy_check(&t, 5, ComplexPoint::real(1.0), &pol).is_err());
    let m: Vec<f64> = [10, 100, 1000]
        .iter()
        .map(|&n| truncation_discrepancy_check(&t, n, ComplexPoint::real(2.0), &pol).unwrap().0)
        .collect();
    assert!(m[0] > m[1] && m[1] > m[2]);
}

#[test]
fn scans() {
    let t = sieve(4_000_000).unwrap();
    let seq = t.full_sequence();
    let ladder = doubling_ladder(1 << 10, 7);
    let x = GeneralFactor::monomial(1, 1.0).unwrap();
    let x2 = GeneralFactor::monomial(2, 1.0).unwrap();
    let lin = convergence_scan(&seq, &x, &[0.9, 2.0], &ladder).unwrap();
    assert_eq!(lin.verdict(2.0), Some(ScanFlag::Decay));
    assert_eq!(lin.verdict(0.9), Some(ScanFlag::NoConvergence));
    let sq = convergence_scan(&seq, &x2, &[0.45, 0.75], &ladder).unwrap();
    assert_eq!(sq.verdict(0.75), Some(ScanFlag::Decay));
    assert_eq!(sq.verdict(0.45), Some(ScanFlag::NoConvergence));

    let mut buf = Vec::new();
    sq.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("sigma,terms,abs_delta,rate,flag\n"));
    assert_eq!(text.lines().count(), 1 + sq.rows.len());
    assert!(convergence_scan(&seq, &x, &[2.0, 1.0], &ladder).is_err());
}

#[test]
fn scan_reports_insufficient_data() {
    let t = sieve(1000).unwrap();
    let r = convergence_scan(&t.full_sequence(), &GeneralFactor::monomial(1, 1.0).unwrap(), &[2.0], &doubling_ladder(1 << 10, 3)).unwrap();
    assert!(r.rows.is_empty() || r.rows.iter().all(|r| r.flag == ScanFlag::Insufficient));
}

#[test]
fn identity_ladder() {
    let t = table();
    let seq = t.full_sequence();
    for k in 0..=10 {
        let s = 1.5 + 0.25 * k as f64;
        let r = euler_product_eval(&seq, &SignSequence::Constant(-1.0), ComplexPoint::real(s), &TruncationPolicy::default()).unwrap();
        let z = zeta_ref(Complex64::new(s, 0.0)).unwrap();
        let z2 = zeta_ref(Complex64::new(2.0 * s, 0.0)).unwrap();
        assert!((r.value * z - z2).norm() < 1e-8, "s = {s}");
    }
}

#[test]
fn log_and_linear_accumulation_agree() {
    let t = sieve(200_000).unwrap();
    let seq = t.as_sequence(10_000);
    let raw = TruncationPolicy::new(10_000, 0.0).unwrap().with_tail(TailMode::Truncate);
    for &(re, im) in &[(2.0, 0.0), (2.5, 7.0), (3.0, -1.0)] {
        let s = ComplexPoint::new(re, im).unwrap();
        let l = SignSequence::alternating(1).unwrap();
        let r = euler_product_eval(&seq, &l, s, &raw).unwrap();
        let mut direct = Complex64::new(1.0, 0.0);
        for n in 1..=10_000 {
            direct /= Complex64::new(1.0, 0.0) - l.get(n) * pow_neg(seq.get(n), s.z());
        }
        assert!((r.value - direct).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn log_factor_inequality(r in 1e-12f64..0.4, theta in 0.0f64..std::f64::consts::TAU) {
        let x = Complex64::from_polar(r, theta);
        let l = log1m(x).norm();
        prop_assert!(r / 2.0 < l && l < 1.5 * r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn converged_products_do_not_vanish(re in 1.1f64..6.0, im in -30.0f64..30.0, alt in any::<bool>()) {
        let t = sieve(20_000).unwrap();
        let s = ComplexPoint::new(re, im).unwrap();
        let l = if alt { SignSequence::alternating(1).unwrap() } else { SignSequence::Constant(1.0) };
        let pol = TruncationPolicy::new(100_000, 1.0).unwrap();
        let e = euler_product_eval(&t.full_sequence(), &l, s, &pol).unwrap();
        if e.converged {
            prop_assert!(e.value.norm() > 0.0);
        }
        if alt {
            let c = continued_product_eval(&t.full_sequence(), &l, s, &pol).unwrap();
            prop_assert!(c.value.norm() > 0.0);
        }
    }
}
