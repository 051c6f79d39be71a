//! Euler products over base sequences.
//!
//! Every product is accumulated as a sum of logarithms. Factor logarithms use
//! the `ln(1 - x)` power series for `|x| < 1/2` and the principal complex
//! logarithm otherwise.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log1m, log_regularized, pow_neg, CompensatedSum};
use crate::primes::PrimeTable;
use crate::series::{
    alternating_eval, complete_prime_power_series, integral_tail, prime_zeta_direct, prime_zeta_mobius,
    mobius_terms_for, zeta_ref, BaseSequence, ComplexPoint, EvalReport, Origin, SignSequence, TailMode,
    TruncationPolicy,
};

/// Degree up to which `-ln(1 - g(x))` is expanded for tail completion.
const LOG_SERIES_DEGREE: usize = 400;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn require_base_at_least_two(a: &BaseSequence) -> Result<()> {
    match a.min_element() {
        Some(m) if m < 2 => Err(Error::InvalidInput(
            "Euler products need every a_n >= 2".into(),
        )),
        _ => Ok(()),
    }
}

/// `|value| (e^b - 1)`: bound on the product error from a log-space error `b`.
fn product_bound(value: Complex64, log_bound: f64) -> f64 {
    if log_bound.is_infinite() {
        return f64::INFINITY;
    }
    value.norm() * log_bound.exp_m1()
}

fn finish(log: Complex64, terms: usize, log_bound: f64, policy: &TruncationPolicy) -> EvalReport {
    let value = log.exp();
    let tail_bound = product_bound(value, log_bound);
    EvalReport {
        value,
        terms_used: terms,
        tail_bound,
        converged: tail_bound <= policy.target_tail,
    }
}

/// `Π 1/(1 - l_n a_n^{-s})`.
///
/// Tail bounds use `|ln(1 - x)| < 3|x|/2` on the omitted factors; once the
/// signs alternate the linear part is bounded by pairing instead. Over the
/// full prime sequence with constant signs and [`TailMode::Complete`] the
/// omitted factors are recovered analytically.
pub fn euler_product_eval(
    a: &BaseSequence,
    l: &SignSequence,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    require_base_at_least_two(a)?;
    let z = s.z();
    let sigma = s.re;
    let limit = a.usable(policy.max_terms);
    let constant = matches!(l, SignSequence::Constant(_));
    let complete_tail =
        policy.tail == TailMode::Complete && a.origin() == Origin::Primes && constant && sigma > 1.0;

    let mut acc = CompensatedSum::new();
    for n in 1..=limit {
        let x = l.get(n) * pow_neg(a.get(n), z);
        if x == Complex64::new(1.0, 0.0) {
            return Err(Error::SingularFactor { index: n });
        }
        acc.add(-log1m(x));
    }

    let explicit_end = matches!(l, SignSequence::Explicit(v) if v.len() <= limit);
    if (a.is_complete() && limit == a.len()) || explicit_end || l.sup_abs() == 0.0 {
        let value = acc.value().exp();
        return Ok(EvalReport::exact(value, limit));
    }

    let last = if limit == 0 { 1 } else { a.get(limit) };
    let next = match a.available() {
        None => limit as u64 + 1,
        Some(_) => last + 1,
    };
    let log_bound = if complete_tail && limit > 0 {
        let c = l.get(1);
        let (rest, err) = complete_prime_power_series(&a.elements()[..limit], s, 1, |j| {
            Complex64::new(c.powi(j as i32) / j as f64, 0.0)
        })?;
        acc.add(rest);
        err
    } else if l.alternation_start().is_some_and(|st| st <= limit + 1) {
        if sigma <= 0.5 {
            f64::INFINITY
        } else {
            // linear part by pairing, the rest by Σ |x|^2
            z.norm() / sigma * (next as f64).powf(-sigma) + integral_tail(last, 2.0 * sigma)
        }
    } else if sigma > 1.0 {
        1.5 * l.sup_abs() * integral_tail(last, sigma)
    } else {
        f64::INFINITY
    };
    Ok(finish(acc.value(), limit, log_bound, policy))
}

/// A factor `1/(1 - g(x))` with a polynomial `g`, `g(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralFactor {
    coefficients: Vec<f64>,
    lowest_degree: usize,
    gap_degree: Option<usize>,
}

impl GeneralFactor {
    /// `coefficients[i]` multiplies `x^i`; `coefficients[0]` must be zero.
    /// `1 - g` is checked for zeros on a sample grid of the disc `|x| ≤ 1/2`.
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        Self::with_disc(coefficients, 0.5)
    }

    pub fn with_disc(mut coefficients: Vec<f64>, radius: f64) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        if coefficients.first().is_some_and(|&c| c != 0.0) {
            return Err(Error::InvalidInput("g(0) must be 0".into()));
        }
        while coefficients.last() == Some(&0.0) {
            coefficients.pop();
        }
        let lowest_degree = coefficients
            .iter()
            .position(|&c| c != 0.0)
            .ok_or_else(|| Error::InvalidInput("g must not vanish identically".into()))?;
        let gap_degree = coefficients
            .iter()
            .enumerate()
            .skip(2)
            .find(|(_, &c)| c != 0.0)
            .map(|(i, _)| i);
        let g = Self {
            coefficients,
            lowest_degree,
            gap_degree,
        };
        for x in disc_grid(radius) {
            if (Complex64::new(1.0, 0.0) - g.eval(x)).norm() < 1e-12 {
                return Err(Error::Degenerate(format!("1 - g vanishes near x = {x}")));
            }
        }
        Ok(g)
    }

    /// `x^k`.
    pub fn monomial(k: usize, c: f64) -> Result<Self> {
        let mut v = vec![0.0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn lowest_degree(&self) -> usize {
        self.lowest_degree
    }

    /// Smallest degree `m ≥ 2` carrying a nonzero coefficient.
    pub fn gap_degree(&self) -> Option<usize> {
        self.gap_degree
    }

    pub fn linear(&self) -> f64 {
        self.coefficients.get(1).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(zero(), |acc, &c| acc * x + c)
    }

    /// Coefficients of `-ln(1 - g(x))` up to `degree`, optionally with
    /// `ln(1 - λ_1 x)` added.
    fn log_coefficients(&self, degree: usize, regularize: bool) -> Vec<f64> {
        let g = &self.coefficients;
        let mut out = vec![0.0; degree + 1];
        let mut power = vec![0.0; degree + 1];
        power[0] = 1.0;
        let mut r = 1;
        while r * self.lowest_degree <= degree {
            let mut next = vec![0.0; degree + 1];
            for (i, &pi) in power.iter().enumerate().filter(|(_, p)| **p != 0.0) {
                for (k, &gk) in g.iter().enumerate().skip(1) {
                    if i + k > degree {
                        break;
                    }
                    next[i + k] += pi * gk;
                }
            }
            power = next;
            for (o, p) in out.iter_mut().zip(&power) {
                *o += p / r as f64;
            }
            r += 1;
        }
        if regularize {
            let l1 = self.linear();
            let mut pw = 1.0;
            for (j, o) in out.iter_mut().enumerate().skip(1) {
                pw *= l1;
                *o -= pw / j as f64;
            }
        }
        out
    }
}

fn disc_grid(radius: f64) -> impl Iterator<Item = Complex64> {
    (1..=24).flat_map(move |i| {
        let r = radius * i as f64 / 24.0;
        (0..64).map(move |k| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / 64.0))
    })
}

/// Constants with `|g(x)| ≤ C |x|^λ` for `|x| ≤ δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceParams {
    pub c: f64,
    pub delta: f64,
    pub lambda: f64,
}

pub fn derive_convergence_params(g: &GeneralFactor, delta: f64) -> Result<ConvergenceParams> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta must lie in (0, 1), got {delta}")));
    }
    let lambda = g.lowest_degree() as f64;
    let max = disc_grid(delta)
        .map(|x| g.eval(x).norm() / x.norm().powf(lambda))
        .fold(0.0f64, f64::max);
    Ok(ConvergenceParams {
        c: 1.1 * max,
        delta,
        lambda,
    })
}

fn product_over(
    a: &BaseSequence,
    s: ComplexPoint,
    limit: usize,
    factor_log: impl Fn(Complex64) -> Complex64,
    factor: impl Fn(Complex64) -> Complex64,
) -> Result<CompensatedSum> {
    let z = s.z();
    let mut acc = CompensatedSum::new();
    for n in 1..=limit {
        let x = pow_neg(a.get(n), z);
        if factor(x).norm() == 0.0 {
            return Err(Error::SingularFactor { index: n });
        }
        acc.add(factor_log(x));
    }
    Ok(acc)
}

/// `Π 1/(1 - g(a_n^{-s}))` for `Re(s) > 1/λ`.
pub fn general_product_eval(
    a: &BaseSequence,
    g: &GeneralFactor,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    require_base_at_least_two(a)?;
    let lambda = g.lowest_degree() as f64;
    if s.re * lambda <= 1.0 {
        return Err(Error::Domain(format!(
            "product converges for Re(s) > 1/{lambda}, got {s}"
        )));
    }
    let coeffs = g.log_coefficients(LOG_SERIES_DEGREE, false);
    shaped_product(a, s, policy, g.lowest_degree(), &coeffs, |x| {
        Complex64::new(1.0, 0.0) - g.eval(x)
    }, |x| -log1m(g.eval(x)))
}

/// `Π (1 - λ_1 a_n^{-s}) / (1 - g(a_n^{-s}))`, converging for `Re(s) > 1/m`.
///
/// The linear part of each factor's logarithm cancels, leaving `O(x^m)`.
pub fn regularized_ratio_eval(
    a: &BaseSequence,
    g: &GeneralFactor,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    require_base_at_least_two(a)?;
    let m = g
        .gap_degree()
        .ok_or_else(|| Error::Degenerate("g is linear: the regularized ratio is identically 1".into()))?;
    if s.re * m as f64 <= 1.0 {
        return Err(Error::Domain(format!(
            "regularized ratio converges for Re(s) > 1/{m}, got {s}"
        )));
    }
    let l1 = g.linear();
    let coeffs = g.log_coefficients(LOG_SERIES_DEGREE, true);
    shaped_product(a, s, policy, m, &coeffs, |x| {
        (Complex64::new(1.0, 0.0) - g.eval(x)) * (Complex64::new(1.0, 0.0) - l1 * x)
    }, |x| -log1m(g.eval(x)) + log1m(l1 * x))
}

#[allow(clippy::too_many_arguments)]
fn shaped_product(
    a: &BaseSequence,
    s: ComplexPoint,
    policy: &TruncationPolicy,
    order: usize,
    log_coeffs: &[f64],
    factor: impl Fn(Complex64) -> Complex64,
    factor_log: impl Fn(Complex64) -> Complex64,
) -> Result<EvalReport> {
    let limit = a.usable(policy.max_terms);
    let mut acc = product_over(a, s, limit, &factor_log, factor)?;
    if a.is_complete() && limit == a.len() {
        return Ok(EvalReport::exact(acc.value().exp(), limit));
    }
    let last = if limit == 0 { 1 } else { a.get(limit) };
    let log_bound = if policy.tail == TailMode::Complete && a.origin() == Origin::Primes && limit > 0 {
        let (rest, err) = complete_prime_power_series(&a.elements()[..limit], s, order, |j| {
            Complex64::new(log_coeffs.get(j).copied().unwrap_or(0.0), 0.0)
        })?;
        acc.add(rest);
        err
    } else {
        // C = 1.1 max |log factor(x)| / |x|^order over the disc reached by the tail
        let radius = ((last + 1) as f64).powf(-s.re);
        let order_f = order as f64;
        let c = 1.1
            * disc_grid(radius)
                .map(|x| factor_log(x).norm() / x.norm().powf(order_f))
                .fold(0.0f64, f64::max);
        c * integral_tail(last, order_f * s.re)
    };
    Ok(finish(acc.value(), limit, log_bound, policy))
}

/// `exp(D^l_A(s)) · Π_n exp(-l_n a_n^{-s}) / (1 - l_n a_n^{-s})` for `Re(s) > 1/2`.
///
/// The series factor comes from [`alternating_eval`]; each correction factor
/// is evaluated as a single regularized logarithm of size `O(a_n^{-2σ})`.
pub fn continued_product_eval(
    a: &BaseSequence,
    l: &SignSequence,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    require_base_at_least_two(a)?;
    if s.re <= 0.5 {
        return Err(Error::Domain(format!("continued product needs Re(s) > 1/2, got {s}")));
    }
    let start = l.alternation_start().ok_or_else(|| {
        Error::InvalidInput("continued product needs an eventually alternating sign sequence".into())
    })?;
    let series = alternating_eval(a, l, s, policy)?;
    let correction = correction_log(a, l, s, policy, start)?;
    let log = series.value + correction.0;
    let value = log.exp();
    let tail_bound = product_bound(value, series.tail_bound + correction.1);
    Ok(EvalReport {
        value,
        terms_used: series.terms_used.max(correction.2),
        tail_bound,
        converged: series.converged && correction.1 <= policy.target_tail,
    })
}

/// `Σ_n [-l_n x_n - ln(1 - l_n x_n)]`, its error bound and the terms used.
///
/// `start` is the index from which `l_n = ±1` alternates (1 for constant signs).
fn correction_log(
    a: &BaseSequence,
    l: &SignSequence,
    s: ComplexPoint,
    policy: &TruncationPolicy,
    start: usize,
) -> Result<(Complex64, f64, usize)> {
    let z = s.z();
    let limit = a.usable(policy.max_terms);
    let mut acc = CompensatedSum::new();
    for n in 1..=limit {
        let y = l.get(n) * pow_neg(a.get(n), z);
        if y == Complex64::new(1.0, 0.0) {
            return Err(Error::SingularFactor { index: n });
        }
        acc.add(log_regularized(y));
    }
    if a.is_complete() && limit == a.len() {
        return Ok((acc.value(), 0.0, limit));
    }
    let last = if limit == 0 { 1 } else { a.get(limit) };
    let unit_tail = start <= limit + 1;
    let completable = policy.tail == TailMode::Complete && a.origin() == Origin::Primes && limit > 0;
    if completable {
        if let SignSequence::Constant(c) = l {
            let (rest, err) = complete_prime_power_series(&a.elements()[..limit], s, 2, |j| {
                Complex64::new(c.powi(j as i32) / j as f64, 0.0)
            })?;
            acc.add(rest);
            return Ok((acc.value(), err, limit));
        }
    }
    if completable && unit_tail {
        // l_n = ±1 on the tail: even powers complete exactly, odd powers alternate
        let (even, err) = complete_prime_power_series(&a.elements()[..limit], s, 2, |j| {
            if j % 2 == 0 {
                Complex64::new(1.0 / j as f64, 0.0)
            } else {
                zero()
            }
        })?;
        acc.add(even);
        let odd = if 3.0 * s.re > 1.0 {
            3.0 * z.norm() / (3.0 * s.re) * ((last + 1) as f64).powf(-3.0 * s.re)
                + 2.0 * integral_tail(last, 5.0 * s.re)
        } else {
            f64::INFINITY
        };
        return Ok((acc.value(), err + odd, limit));
    }
    // |−y − ln(1 − y)| ≤ |y|^2 for |y| ≤ 1/2
    let bound = l.sup_abs().powi(2) * integral_tail(last, 2.0 * s.re);
    Ok((acc.value(), bound, limit))
}

/// Both sides of `exp(P(s)) = ζ(s) Π_p exp(p^{-s})(1 - p^{-s})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// `|exp(P(s)) - ζ(s) Π_p exp(p^{-s})(1 - p^{-s})|` for `Re(s) > 1/2`, `s ≠ 1`.
///
/// `P(s)` is the direct prime sum for `Re(s) > 1` and the Möbius-inversion
/// value otherwise.
pub fn regularized_exp_identity_residual(
    table: &PrimeTable,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<IdentityResidual> {
    if s.re <= 0.5 {
        return Err(Error::Domain(format!("identity needs Re(s) > 1/2, got {s}")));
    }
    let p = if s.re > 1.0 {
        prime_zeta_direct(table, s, policy)?
    } else {
        prime_zeta_mobius(s, mobius_terms_for(s, 1e-17))?
    };
    let zeta = zeta_ref(s.z())?;
    let primes = table.full_sequence();
    let unit = SignSequence::Constant(1.0);
    let (corr, corr_bound, terms) = correction_log(&primes, &unit, s, policy, 1)?;
    let lhs = p.value.exp();
    let rhs = zeta * (-corr).exp();
    Ok(IdentityResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        terms_used: terms.max(p.terms_used),
        tail_bound: product_bound(lhs, p.tail_bound) + product_bound(rhs, corr_bound),
    })
}

/// `(|ζ(s) - ζ^{l^N}_P(s)|, 2 p_N^{1-σ}/(σ-1))` with `l^N` tail-alternating.
pub fn truncation_discrepancy_check(
    table: &PrimeTable,
    n: usize,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<(f64, f64)> {
    if s.re <= 1.0 {
        return Err(Error::Domain(format!("needs Re(s) > 1, got {s}")));
    }
    let p_n = table.nth(n)?;
    let l = SignSequence::tail_alternating(n, 1)?;
    let product = euler_product_eval(&table.full_sequence(), &l, s, policy)?;
    let zeta = zeta_ref(s.z())?;
    let measured = (zeta - product.value).norm();
    let bound = 2.0 * (p_n as f64).powf(1.0 - s.re) / (s.re - 1.0);
    Ok((measured, bound))
}

/// Row of a convergence scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub sigma: f64,
    pub terms: usize,
    pub abs_delta: f64,
    /// `log2` of the delta ratio per doubling of terms; NaN on the first rung.
    pub rate: f64,
    pub flag: ScanFlag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanFlag {
    Decay,
    NoConvergence,
    /// Fewer rungs than needed to estimate a rate.
    Insufficient,
}

impl std::fmt::Display for ScanFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScanFlag::Decay => "decay",
            ScanFlag::NoConvergence => "no-convergence",
            ScanFlag::Insufficient => "insufficient",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
}

/// Mean rate above which a σ is considered decaying.
pub const DECAY_THRESHOLD: f64 = 0.05;

impl ScanTable {
    /// Verdict for `sigma`: the flag shared by all its rows.
    pub fn verdict(&self, sigma: f64) -> Option<ScanFlag> {
        self.rows.iter().find(|r| r.sigma == sigma).map(|r| r.flag)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["sigma", "terms", "abs_delta", "rate", "flag"]).map_err(io)?;
        for r in &self.rows {
            let rate = if r.rate.is_nan() { String::new() } else { format!("{:.6}", r.rate) };
            out.write_record([
                r.sigma.to_string(),
                r.terms.to_string(),
                format!("{:e}", r.abs_delta),
                rate,
                r.flag.to_string(),
            ])
            .map_err(io)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Empirical decay of `|partial(2M) - partial(M)|` along a ladder of `M`.
///
/// Partial products are raw truncations (no tail completion). A σ is flagged
/// as decaying when the mean rate across the ladder exceeds
/// [`DECAY_THRESHOLD`] and every delta is finite.
pub fn convergence_scan(
    a: &BaseSequence,
    g: &GeneralFactor,
    sigma_grid: &[f64],
    ladder: &[TruncationPolicy],
) -> Result<ScanTable> {
    require_base_at_least_two(a)?;
    if sigma_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput("sigma grid must be sorted ascending".into()));
    }
    let mut rows = Vec::new();
    for &sigma in sigma_grid {
        let s = ComplexPoint::new(sigma, 0.0)?;
        let z = s.z();
        let mut sigma_rows: Vec<ScanRow> = Vec::new();
        for p in ladder {
            let m = p.max_terms;
            let avail = a.usable(2 * m);
            if avail < 2 * m {
                break;
            }
            let mut delta = CompensatedSum::new();
            for n in m + 1..=2 * m {
                let gx = g.eval(pow_neg(a.get(n), z));
                delta.add(-log1m(gx));
            }
            let abs_delta = delta.value().norm();
            let rate = match sigma_rows.last() {
                Some(prev) => (prev.abs_delta / abs_delta).log2() / (m as f64 / prev.terms as f64).log2(),
                None => f64::NAN,
            };
            sigma_rows.push(ScanRow {
                sigma,
                terms: m,
                abs_delta,
                rate,
                flag: ScanFlag::Insufficient,
            });
        }
        let rates: Vec<f64> = sigma_rows.iter().map(|r| r.rate).filter(|r| !r.is_nan()).collect();
        let flag = if rates.is_empty() {
            ScanFlag::Insufficient
        } else {
            let mean = rates.iter().sum::<f64>() / rates.len() as f64;
            let finite = sigma_rows.iter().all(|r| r.abs_delta.is_finite());
            if finite && mean > DECAY_THRESHOLD {
                ScanFlag::Decay
            } else {
                ScanFlag::NoConvergence
            }
        };
        for mut r in sigma_rows {
            r.flag = flag;
            rows.push(r);
        }
    }
    Ok(ScanTable { rows })
}

/// Doubling ladder `M = base, 2 base, ...` with `rungs` entries.
pub fn doubling_ladder(base: usize, rungs: usize) -> Vec<TruncationPolicy> {
    (0..rungs)
        .map(|k| TruncationPolicy::default().with_tail(TailMode::Truncate).with_max_terms(base << k))
        .collect()
}

#[cfg(test)]
mod tests;
