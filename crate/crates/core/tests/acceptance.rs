//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use eulerlab::goldbach::{brute_force_counts, gk_series, goldbach_scan, majorization_probe, mellin_residual, power_counts, CountConfig};
use eulerlab::identities::{assoc_defect, jacobi_defect, skew_bracket, split_factorization_residual, Bracket, SplitTree};
use eulerlab::primes::residue_subsequence_all;
use eulerlab::products::{
    convergence_scan, doubling_ladder, euler_product_eval, regularized_exp_identity_residual,
    truncation_discrepancy_check, GeneralFactor, ScanFlag,
};
use eulerlab::quad::QuadSpec;
use eulerlab::series::{log_zeta_from_prime_zeta, prime_zeta_direct, prime_zeta_mobius, zeta_ref};
use eulerlab::{sieve, ComplexPoint, Result, SignSequence, SubseqLabel, TailMode, TruncationPolicy};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn real(x: f64) -> ComplexPoint {
    ComplexPoint::real(x)
}

fn zeta(s: f64) -> Result<f64> {
    Ok(zeta_ref(Complex64::new(s, 0.0))?.re)
}

fn euler_sanity() -> Result<Outcome> {
    let start = Instant::now();
    let t = sieve(1_000_000)?;
    let seq = t.full_sequence();
    let one = SignSequence::Constant(1.0);
    let r = euler_product_eval(&seq, &one, real(2.0), &TruncationPolicy::default())?;
    let elapsed = start.elapsed().as_secs_f64();
    let raw = euler_product_eval(&seq, &one, real(2.0), &TruncationPolicy::default().with_tail(TailMode::Truncate))?;
    let target = PI * PI / 6.0;
    let (err, raw_err) = ((r.value.re - target).abs(), (raw.value.re - target).abs());
    Ok(Outcome::new(
        err < 1e-6 && raw_err < 1e-6 && elapsed < 5.0,
        format!("|Π - π²/6| = {err:.2e} (raw truncation {raw_err:.2e}), {elapsed:.2}s"),
    ))
}

fn plus_product_quotient() -> Result<Outcome> {
    let t = sieve(1_000_000)?;
    let seq = t.full_sequence();
    let minus = SignSequence::Constant(-1.0);
    let mut worst: f64 = 0.0;
    for s in [1.5, 2.0, 3.0] {
        let p = euler_product_eval(&seq, &minus, real(s), &TruncationPolicy::default())?;
        worst = worst.max((p.value.re * zeta(s)? - zeta(2.0 * s)?).abs());
    }
    Ok(Outcome::new(worst < 1e-8, format!("max |Π·ζ(s) - ζ(2s)| = {worst:.2e}")))
}

fn exp_factorization() -> Result<Outcome> {
    let start = Instant::now();
    let t = sieve(10_000_000)?;
    let pol = TruncationPolicy::default();
    let r2 = regularized_exp_identity_residual(&t, real(2.0), &pol)?.residual;
    let r3 = regularized_exp_identity_residual(&t, real(3.0), &pol)?.residual;
    let r075 = regularized_exp_identity_residual(&t, real(0.75), &pol)?.residual;
    let elapsed = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        r2 < 1e-9 && r3 < 1e-9 && r075 < 1e-6 && elapsed < 60.0,
        format!("residuals {r2:.2e} (s=2), {r3:.2e} (s=3), {r075:.2e} (s=0.75), {elapsed:.2}s"),
    ))
}

fn mobius_pair() -> Result<Outcome> {
    let t = sieve(1_000_000)?;
    let pol = TruncationPolicy::default();
    let mut worst: f64 = 0.0;
    for s in [1.5, 2.0, 4.0] {
        let direct = prime_zeta_direct(&t, real(s), &pol)?.value;
        let inverted = prime_zeta_mobius(real(s), 200)?.value;
        worst = worst.max((direct - inverted).norm());
    }
    let log_zeta = log_zeta_from_prime_zeta(&t, real(2.0), 40, &pol)?.value;
    let log_err = (log_zeta.re - zeta(2.0)?.ln()).abs() + log_zeta.im.abs();
    Ok(Outcome::new(
        worst < 1e-10 && log_err < 1e-10,
        format!("max |P_μ - P| = {worst:.2e}, |Σ P(ns)/n - ln ζ(2)| = {log_err:.2e}"),
    ))
}

fn truncation_bound() -> Result<Outcome> {
    let t = sieve(1_000_000)?;
    let pol = TruncationPolicy::default();
    let mut worst_ratio: f64 = 0.0;
    for s in [2.0, 3.0] {
        for n in 2..=25 {
            let (measured, bound) = truncation_discrepancy_check(&t, n, real(s), &pol)?;
            worst_ratio = worst_ratio.max(measured / bound);
        }
    }
    Ok(Outcome::new(
        worst_ratio <= 1.0,
        format!("max measured/bound over N = 2..25, s ∈ {{2, 3}}: {worst_ratio:.3}"),
    ))
}

fn split_factorization() -> Result<Outcome> {
    let t = sieve(1_000_000)?;
    let pol = TruncationPolicy::default();
    let mut worst: f64 = 0.0;
    for (i, j) in [(0, 0), (1, 0), (1, 1)] {
        let r = split_factorization_residual(&t, SubseqLabel::new(i, j)?, real(2.0), &pol)?;
        worst = worst.max(r.residual);
    }
    let primes = t.primes();
    let mut partition = true;
    for d in 0..=6u32 {
        let mut seen = BTreeSet::new();
        let mut total = 0;
        for leaf in SplitTree::new(d)?.leaves() {
            let members = residue_subsequence_all(&t, leaf);
            total += members.len();
            seen.extend(members.elements().iter().copied());
        }
        // leaves at depth d cover exactly the primes of index >= 2^d, once each
        let expected: BTreeSet<u64> = primes[(1usize << d) - 1..].iter().copied().collect();
        partition &= total == seen.len() && seen == expected;
    }
    Ok(Outcome::new(
        worst < 1e-9 && partition,
        format!("max residual {worst:.2e}, partition to depth 6: {partition}"),
    ))
}

fn leibniz_algebra() -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut z = || Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    let (mut assoc_worst, mut jacobi_worst): (f64, f64) = (0.0, 0.0);
    let mut checked = 0;
    let mut quotient_mismatches = 0;
    while checked < 10_000 {
        let (a, b, c) = (z(), z(), z());
        let (a2, b2, c2) = (a * a, b * b, c * c);
        let gap = (a2 - b2).norm().min((b2 - c2).norm()).min((c2 - a2).norm());
        if a.norm() < 1e-3 || b.norm() < 1e-3 || c.norm() < 1e-3 || gap < 1e-3 {
            continue;
        }
        checked += 1;
        let (d, f) = assoc_defect(a, b, c)?;
        let scale = (a / b).norm() * (c.norm() + c.inv().norm());
        assoc_worst = assoc_worst.max((d - f).norm() / scale);

        let j = jacobi_defect(a, b, c)?;
        let m = Bracket::Minus;
        let mut jscale = 0.0;
        for (x, y, w) in [(a, b, c), (b, c, a), (c, a, b)] {
            jscale += skew_bracket(skew_bracket(x, y, m)?, w, m)?.norm();
        }
        jacobi_worst = jacobi_worst.max((j.lhs - j.derived_form).norm() / jscale.max(j.derived_form.norm()));
        if (j.quotient_form - j.lhs).norm() > 1e-6 * jscale {
            quotient_mismatches += 1;
        }
    }
    let generic = jacobi_defect(Complex64::new(2.0, 0.5), Complex64::new(1.0, -1.0), Complex64::new(3.0, 0.25))?;
    let generic_gap = (generic.quotient_form - generic.lhs).norm();
    Ok(Outcome::new(
        assoc_worst <= 1e-13 && jacobi_worst <= 1e-13,
        format!(
            "assoc rel err {assoc_worst:.2e}, Jacobi derived rel err {jacobi_worst:.2e}; \
             quotient form differs on {quotient_mismatches}/10000 triples (gap {generic_gap:.3} on a generic triple)"
        ),
    ))
}

fn goldbach_waring() -> Result<Outcome> {
    let start = Instant::now();
    let t = sieve(10_000)?;
    let cfg = CountConfig::default();
    let n_max = 2000;
    let mut agree = true;
    let mut cases = 0;
    let labels = [SubseqLabel::ROOT, SubseqLabel::new(1, 0)?, SubseqLabel::new(1, 1)?];
    for &label in &labels {
        for k in 1..=3 {
            for m in 1..=3 {
                let full = power_counts(&gk_series(&t, label, k, n_max)?, m)?;
                let slow = brute_force_counts(&t, label, k, m, n_max, &cfg)?;
                agree &= full == slow;
                // truncating at a smaller N gives a prefix of the same table
                for n in [0, 1, 2, 17, 500] {
                    let short = power_counts(&gk_series(&t, label, k, n)?, m)?;
                    agree &= short.counts[..] == full.counts[..=n];
                }
                cases += 1;
            }
        }
    }
    let violations = goldbach_scan(&t, 10_000)?;
    let elapsed = start.elapsed().as_secs_f64();
    Ok(Outcome::new(
        agree && violations.is_empty() && elapsed < 30.0,
        format!(
            "{cases} (label, k, m) cases exact: {agree}; violations up to 10^4: {}; {elapsed:.2}s",
            violations.len()
        ),
    ))
}

fn mellin() -> Result<Outcome> {
    let t = sieve(10_000)?;
    let q = QuadSpec::default();
    let r1 = mellin_residual(&t, SubseqLabel::ROOT, 1, real(2.0), &q)?.residual;
    let r2 = mellin_residual(&t, SubseqLabel::ROOT, 2, real(4.0), &q)?.residual;
    Ok(Outcome::new(
        r1 < 1e-6 && r2 < 1e-6,
        format!("residuals {r1:.2e} (k=1, s=2), {r2:.2e} (k=2, s=4)"),
    ))
}

fn majorization() -> Result<Outcome> {
    let t = sieve(100_000)?;
    let g = gk_series(&t, SubseqLabel::ROOT, 1, 100_000)?;
    let rows = majorization_probe(&g, 2, &[0.9, 0.99])?;
    let pass = rows.iter().all(|r| r.alpha > 0.5);
    let shown: Vec<String> = rows.iter().map(|r| format!("α({}) = {:.4}", r.x, r.alpha)).collect();
    Ok(Outcome::new(pass, format!("{} (threshold 1/m = 0.5)", shown.join(", "))))
}

fn convergence_abscissa() -> Result<Outcome> {
    let t = sieve(4_000_000)?;
    let seq = t.full_sequence();
    let ladder = doubling_ladder(1 << 10, 7);
    let square = convergence_scan(&seq, &GeneralFactor::monomial(2, 1.0)?, &[0.45, 0.75], &ladder)?;
    let linear = convergence_scan(&seq, &GeneralFactor::monomial(1, 1.0)?, &[0.9], &ladder)?;
    let (a, b, c) = (square.verdict(0.75), square.verdict(0.45), linear.verdict(0.9));
    let show = |f: Option<ScanFlag>| f.map_or("none".to_string(), |f| f.to_string());
    Ok(Outcome::new(
        a == Some(ScanFlag::Decay) && b == Some(ScanFlag::NoConvergence) && c == Some(ScanFlag::NoConvergence),
        format!("x²: σ=0.75 {}, σ=0.45 {}; x: σ=0.9 {}", show(a), show(b), show(c)),
    ))
}

type Criterion = fn() -> Result<Outcome>;

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("Euler product at s=2", euler_sanity),
        ("plus-product quotient", plus_product_quotient),
        ("exp factorization", exp_factorization),
        ("Möbius inversion pair", mobius_pair),
        ("truncation bound", truncation_bound),
        ("split factorization", split_factorization),
        ("Leibniz algebra", leibniz_algebra),
        ("Goldbach-Waring counts", goldbach_waring),
        ("Mellin identity", mellin),
        ("majorization probe", majorization),
        ("convergence-abscissa scan", convergence_abscissa),
    ];
    let mut failures = 0;
    for (n, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match std::panic::catch_unwind(run) {
            Ok(Ok(o)) => o,
            Ok(Err(e)) => Outcome::new(false, format!("error: {e}")),
            Err(_) => Outcome::new(false, "panicked"),
        };
        if !outcome.pass {
            failures += 1;
        }
        println!(
            "{} [{:>2}] {title}: {} ({:.2}s)",
            if outcome.pass { "PASS" } else { "FAIL" },
            n + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
