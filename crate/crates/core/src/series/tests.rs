use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::primes::sieve;

// Reference constants below were computed with mpmath (30 digits):
// primezeta(2), primezeta(3), primezeta(1.5), altzeta(0.5).
const P2: f64 = 0.452_247_420_041_065_5;
const P3: f64 = 0.174_762_639_299_443_52;
const P1_5: f64 = 0.849_562_683_621_566_4;
const MINUS_ETA_HALF: f64 = -0.604_898_643_421_630_4;

fn table() -> PrimeTable {
    sieve(1_000_000).unwrap()
}

fn policy(terms: usize) -> TruncationPolicy {
    TruncationPolicy::new(terms, 1e-12).unwrap()
}

#[test]
fn policy_rejects_zero_terms() {
    assert!(TruncationPolicy::new(0, 1e-10).is_err());
    assert!(TruncationPolicy::new(1, -1.0).is_err());
}

#[test]
fn zeta_two_over_naturals_within_tail_bound() {
    let r = dirichlet_eval(
        &BaseSequence::naturals(),
        &SignSequence::Constant(1.0),
        ComplexPoint::real(2.0),
        &policy(100_000),
    )
    .unwrap();
    let err = (r.value.re - PI * PI / 6.0).abs();
    assert!(err <= r.tail_bound, "err {err} bound {}", r.tail_bound);
    assert_eq!(r.terms_used, 100_000);
    assert!(!r.converged);
}

#[test]
fn alternating_harmonic_series() {
    let r = dirichlet_eval(
        &BaseSequence::naturals(),
        &SignSequence::alternating(1).unwrap(),
        ComplexPoint::real(1.0),
        &policy(1_000_000),
    )
    .unwrap();
    assert!((r.value.re + 2f64.ln()).abs() < 1e-6);
    assert!((r.value.re + 2f64.ln()).abs() <= r.tail_bound);
}

#[test]
fn single_term_sum_is_exact() {
    let a = BaseSequence::explicit(vec![2]).unwrap();
    let r = dirichlet_eval(&a, &SignSequence::Constant(1.0), ComplexPoint::real(1.0), &policy(10)).unwrap();
    assert_eq!(r.value, Complex64::new(0.5, 0.0));
    assert!(r.converged);
    assert_eq!(r.tail_bound, 0.0);
}

#[test]
fn constant_signs_below_abscissa_are_flagged() {
    let r = dirichlet_eval(
        &BaseSequence::naturals(),
        &SignSequence::Constant(1.0),
        ComplexPoint::real(0.9),
        &policy(1000),
    )
    .unwrap();
    assert!(!r.converged);
    assert!(r.tail_bound.is_infinite());
}

#[test]
fn accelerated_alternating_sums() {
    let a = BaseSequence::naturals();
    let alt = SignSequence::alternating(1).unwrap();
    let r = alternating_eval(&a, &alt, ComplexPoint::real(1.0), &TruncationPolicy::default()).unwrap();
    assert!(r.converged);
    assert!((r.value.re + 2f64.ln()).abs() < 1e-12);

    let r = alternating_eval(&a, &alt, ComplexPoint::real(0.5), &TruncationPolicy::default()).unwrap();
    assert!((r.value.re - MINUS_ETA_HALF).abs() < 1e-12);
    // -(1 - √2) ζ(1/2) through the reference evaluator
    let zh = zeta_ref(Complex64::new(0.5, 0.0)).unwrap().re;
    assert!((r.value.re + (1.0 - 2f64.sqrt()) * zh).abs() < 1e-12);
}

#[test]
fn accelerated_agrees_with_direct_at_two() {
    let a = BaseSequence::naturals();
    let alt = SignSequence::alternating(1).unwrap();
    let s = ComplexPoint::real(2.0);
    let fast = alternating_eval(&a, &alt, s, &TruncationPolicy::default()).unwrap();
    let slow = dirichlet_eval(&a, &alt, s, &policy(1_000_000)).unwrap();
    assert!((fast.value - slow.value).norm() < 1e-10);
}

#[test]
fn alternating_eval_flags_nonpositive_real_part() {
    let r = alternating_eval(
        &BaseSequence::naturals(),
        &SignSequence::alternating(1).unwrap(),
        ComplexPoint::real(0.0),
        &TruncationPolicy::default(),
    )
    .unwrap();
    assert!(!r.converged);
    assert!(alternating_eval(
        &BaseSequence::naturals(),
        &SignSequence::Constant(1.0),
        ComplexPoint::real(2.0),
        &TruncationPolicy::default()
    )
    .is_err());
}

#[test]
fn alternating_eval_with_head() {
    // l = 1 for n < 4, (-1)^n after: head 1 + 1/4 + 1/9, tail Σ_{n≥4} (-1)^n/n²
    let a = BaseSequence::naturals();
    let l = SignSequence::tail_alternating(4, 1).unwrap();
    let r = alternating_eval(&a, &l, ComplexPoint::real(2.0), &TruncationPolicy::default()).unwrap();
    // Σ_{n≥1} (-1)^n/n² = -π²/12; head terms of that sum are -1 + 1/4 - 1/9
    let expect = (1.0 + 0.25 + 1.0 / 9.0) + (-PI * PI / 12.0 - (-1.0 + 0.25 - 1.0 / 9.0));
    assert!((r.value.re - expect).abs() < 1e-12);
}

#[test]
fn prime_zeta_direct_values() {
    let t = table();
    let p = TruncationPolicy::default();
    let r2 = prime_zeta_direct(&t, ComplexPoint::real(2.0), &p).unwrap();
    assert!((r2.value.re - P2).abs() < 1e-13, "{}", r2.value.re);
    let r3 = prime_zeta_direct(&t, ComplexPoint::real(3.0), &p).unwrap();
    assert!((r3.value.re - P3).abs() < 1e-13);
    let r15 = prime_zeta_direct(&t, ComplexPoint::real(1.5), &p).unwrap();
    assert!((r15.value.re - P1_5).abs() < 1e-12);
    assert!(r15.converged);

    let r10 = prime_zeta_direct(&t, ComplexPoint::real(10.0), &p).unwrap();
    assert!(r10.value.re - 2f64.powi(-10) - 3f64.powi(-10) < 1e-6);
}

#[test]
fn prime_zeta_direct_truncated_respects_bound() {
    let t = table();
    let p = TruncationPolicy::default().with_tail(TailMode::Truncate);
    let r = prime_zeta_direct(&t, ComplexPoint::real(2.0), &p).unwrap();
    assert!(r.value.re < P2);
    assert!(P2 - r.value.re <= r.tail_bound);
    assert!(!r.converged);
}

#[test]
fn prime_zeta_direct_flags_divergence() {
    let r = prime_zeta_direct(&table(), ComplexPoint::real(1.0), &TruncationPolicy::default()).unwrap();
    assert!(!r.converged);
}

#[test]
fn prime_zeta_mobius_matches_direct() {
    let t = table();
    for &s in &[2.0, 3.0] {
        let s = ComplexPoint::real(s);
        let m = prime_zeta_mobius(s, mobius_terms_for(s, 1e-16)).unwrap();
        let d = prime_zeta_direct(&t, s, &TruncationPolicy::default()).unwrap();
        assert!((m.value - d.value).norm() < 1e-10);
    }
}

#[test]
fn inverse_identity_at_two() {
    let t = table();
    let r = log_zeta_from_prime_zeta(&t, ComplexPoint::real(2.0), 40, &TruncationPolicy::default()).unwrap();
    assert!((r.value.re - (PI * PI / 6.0).ln()).abs() < 1e-10);
}

#[test]
fn mobius_route_errors() {
    assert!(matches!(prime_zeta_mobius(ComplexPoint::real(1.0), 5), Err(Error::Pole(_))));
    assert!(matches!(prime_zeta_mobius(ComplexPoint::real(0.5), 5), Err(Error::Domain(_))));
    // ζ(2·0.51) is huge: the principal log of the n = 2 term is not trusted
    assert!(matches!(prime_zeta_mobius(ComplexPoint::real(0.51), 5), Err(Error::BranchGuard(_))));
    assert!(prime_zeta_mobius(ComplexPoint::real(0.75), 80).is_ok());
}

#[test]
fn mobius_route_in_the_strip_is_principal_branch() {
    // mpmath primezeta(0.8) = 0.95667983505339156 + iπ
    let r = prime_zeta_mobius(ComplexPoint::real(0.8), mobius_terms_for(ComplexPoint::real(0.8), 1e-15)).unwrap();
    assert!((r.value.re - 0.956_679_835_053_391_6).abs() < 1e-12);
    assert!((r.value.im - PI).abs() < 1e-12);
}

#[test]
fn deformed_prime_zeta() {
    let t = table();
    let p = TruncationPolicy::default();
    let zero = z_deformed_prime_zeta(&t, Complex64::new(0.0, 0.0), ComplexPoint::real(3.0), &p).unwrap();
    assert_eq!(zero.value, Complex64::new(0.0, 0.0));
    let one = z_deformed_prime_zeta(&t, Complex64::new(1.0, 0.0), ComplexPoint::real(2.0), &p).unwrap();
    assert!((one.value.re - P2).abs() < 1e-12);
    // brute force Σ_p 2^{-p}/p over p < 400 (mpmath): 0.17408707176097936
    let half = z_deformed_prime_zeta(&t, Complex64::new(0.5, 0.0), ComplexPoint::real(1.0), &p).unwrap();
    assert!((half.value.re - 0.174_087_071_760_979_36).abs() < 1e-12);
    assert!(half.converged);

    assert!(z_deformed_prime_zeta(&t, Complex64::new(1.0, 0.0), ComplexPoint::real(1.0), &p).is_err());
    assert!(z_deformed_prime_zeta(&t, Complex64::new(1.5, 0.0), ComplexPoint::real(3.0), &p).is_err());
    assert!(z_deformed_prime_zeta(&t, Complex64::new(0.5, 0.0), ComplexPoint::real(-0.1), &p).is_err());
}

#[test]
fn deformation_is_monotone_towards_prime_zeta() {
    let t = table();
    let p = TruncationPolicy::default();
    let s = ComplexPoint::real(2.0);
    let mut last = 0.0;
    for k in 1..=20 {
        let z = k as f64 / 20.0;
        let v = z_deformed_prime_zeta(&t, Complex64::new(z, 0.0), s, &p).unwrap().value.re;
        assert!(v > last, "not increasing at z = {z}");
        last = v;
    }
    let near = z_deformed_prime_zeta(&t, Complex64::new(0.9999, 0.0), s, &p).unwrap().value.re;
    assert!((P2 - near).abs() < 1e-3);
}

#[test]
fn tail_bound_soundness_on_a_grid() {
    let t = table();
    for &sre in &[2.0, 2.5, 3.0, 4.0] {
        for &sim in &[0.0, 5.0] {
            let s = ComplexPoint::new(sre, sim).unwrap();
            for seq in [BaseSequence::naturals(), t.full_sequence()] {
                let pol = TruncationPolicy::new(500, 0.0).unwrap().with_tail(TailMode::Truncate);
                let short = dirichlet_eval(&seq, &SignSequence::Constant(1.0), s, &pol).unwrap();
                let long = dirichlet_eval(&seq, &SignSequence::Constant(1.0), s, &pol.with_max_terms(1000)).unwrap();
                assert!((long.value - short.value).norm() < short.tail_bound);
            }
        }
    }
}

#[test]
fn mobius_direct_agreement_on_real_segment() {
    let t = table();
    for k in 0..=9 {
        let s = ComplexPoint::real(1.5 + 0.5 * k as f64);
        let m = prime_zeta_mobius(s, mobius_terms_for(s, 1e-16)).unwrap();
        let d = prime_zeta_direct(&t, s, &TruncationPolicy::default()).unwrap();
        assert!((m.value - d.value).norm() <= m.tail_bound + d.tail_bound + 1e-13, "s = {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eta_relation(re in 0.2f64..3.0, im in -20.0f64..20.0) {
        let s = ComplexPoint::new(re, im).unwrap();
        // skip the removable zeros of 1 - 2^{1-s} on Re(s) = 1
        let denom = Complex64::new(1.0, 0.0) - (Complex64::new(1.0, 0.0) - s.z()).exp2();
        prop_assume!(denom.norm() > 1e-3);
        let zeta = zeta_ref(s.z()).unwrap();
        let eta = alternating_eval(
            &BaseSequence::naturals(),
            &SignSequence::alternating(-1).unwrap(),
            s,
            &TruncationPolicy::new(1_000_000, 1e-12).unwrap(),
        )
        .unwrap();
        prop_assert!((zeta * denom - eta.value).norm() < 1e-9, "s = {}: {} vs {}", s, zeta * denom, eta.value);
    }
}
