//! Dirichlet series over integer base sequences.
//!
//! A series `Σ l_n a_n^{-s}` is described by a [`BaseSequence`] (the `a_n`)
//! and a [`SignSequence`] (the `l_n`). Every evaluator returns an
//! [`EvalReport`] carrying the value, the number of terms actually used, an
//! a-posteriori tail bound and a convergence flag.
//!
//! Sums over the full prime sequence can be *completed*: the contribution of
//! all primes past the last summed prime `X` is recovered from
//! `Σ_{p > X} p^{-u} = Σ_n μ(n)/n · ln ζ_{>X}(nu)`, where `ζ_{>X}` is ζ with
//! its Euler factors for `p ≤ X` removed. See [`TailMode`].

mod special;
mod tail;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{binomial_weights, pow_neg, wrap_phase, CompensatedSum};
use crate::primes::{mobius, PrimeTable, SubseqLabel};

pub use special::{eta_borwein, gamma_ref, zeta_ref};
pub(crate) use special::borwein_terms;
pub(crate) use special::zeta_real;
pub use tail::{complete_prime_power_series, prime_tail};

/// A point `s = re + i·im` with finite components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite point {re} + {im}i")));
        }
        Ok(Self { re, im })
    }

    /// Real point; panics on non-finite input.
    pub fn real(re: f64) -> Self {
        Self::new(re, 0.0).expect("finite real point")
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub(crate) fn scale(&self, k: f64) -> Self {
        Self {
            re: self.re * k,
            im: self.im * k,
        }
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.z()
    }
}

impl std::fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

/// Where a base sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    /// 1, 2, 3, ... generated on demand.
    Naturals,
    /// `p_1, ..., p_M`: a prefix of the primes.
    Primes,
    /// A prefix of the subsequence `p_{2^i n + j}`.
    Residue(SubseqLabel),
    /// A finite, complete list.
    Explicit,
}

/// A strictly increasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSequence {
    origin: Origin,
    elements: Vec<u64>,
}

impl BaseSequence {
    pub fn naturals() -> Self {
        Self {
            origin: Origin::Naturals,
            elements: Vec::new(),
        }
    }

    pub fn explicit(elements: Vec<u64>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::InvalidInput("sequence elements must be >= 1".into()));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("sequence must be strictly increasing".into()));
        }
        Ok(Self {
            origin: Origin::Explicit,
            elements,
        })
    }

    pub(crate) fn from_parts(origin: Origin, elements: Vec<u64>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { origin, elements }
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// Materialized elements; empty for the naturals.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// Number of available terms, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        match self.origin {
            Origin::Naturals => None,
            _ => Some(self.elements.len()),
        }
    }

    pub fn len(&self) -> usize {
        self.available().unwrap_or(usize::MAX)
    }

    pub fn is_empty(&self) -> bool {
        self.available() == Some(0)
    }

    /// True when the stored elements are the whole sequence.
    pub fn is_complete(&self) -> bool {
        self.origin == Origin::Explicit
    }

    /// `a_n`, one-based.
    #[inline]
    pub fn get(&self, n: usize) -> u64 {
        match self.origin {
            Origin::Naturals => n as u64,
            _ => self.elements[n - 1],
        }
    }

    /// Terms usable under a cap.
    pub fn usable(&self, cap: usize) -> usize {
        self.available().map_or(cap, |a| a.min(cap))
    }

    pub fn min_element(&self) -> Option<u64> {
        match self.origin {
            Origin::Naturals => Some(1),
            _ => self.elements.first().copied(),
        }
    }

    pub fn first(&self, count: usize) -> BaseSequence {
        match self.origin {
            Origin::Naturals => Self::from_parts(Origin::Explicit, (1..=count as u64).collect()),
            _ => Self::from_parts(self.origin, self.elements[..count.min(self.elements.len())].to_vec()),
        }
    }
}

/// Coefficients `l_n ∈ [-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SignSequence {
    Constant(f64),
    /// `l_n = sign · (-1)^n`.
    Alternating { sign: i8 },
    /// `l_n = 1` for `n < switch`, `sign · (-1)^n` from `switch` on.
    TailAlternating { switch: usize, sign: i8 },
    /// `l_n = list[n-1]`, zero past the end.
    Explicit(Vec<f64>),
}

impl SignSequence {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c.is_finite() && c.abs() <= 1.0) {
            return Err(Error::InvalidInput(format!("constant sign {c} outside [-1, 1]")));
        }
        Ok(Self::Constant(c))
    }

    pub fn alternating(sign: i8) -> Result<Self> {
        check_unit(sign)?;
        Ok(Self::Alternating { sign })
    }

    pub fn tail_alternating(switch: usize, sign: i8) -> Result<Self> {
        check_unit(sign)?;
        if switch == 0 {
            return Err(Error::InvalidInput("switch index must be >= 1".into()));
        }
        Ok(Self::TailAlternating { switch, sign })
    }

    pub fn explicit(list: Vec<f64>) -> Result<Self> {
        if let Some(bad) = list.iter().find(|x| !(x.is_finite() && x.abs() <= 1.0)) {
            return Err(Error::InvalidInput(format!("sign {bad} outside [-1, 1]")));
        }
        Ok(Self::Explicit(list))
    }

    /// `l_n`, one-based.
    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        let parity = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        match self {
            Self::Constant(c) => *c,
            Self::Alternating { sign } => *sign as f64 * parity,
            Self::TailAlternating { switch, sign } => {
                if n < *switch {
                    1.0
                } else {
                    *sign as f64 * parity
                }
            }
            Self::Explicit(v) => v.get(n - 1).copied().unwrap_or(0.0),
        }
    }

    /// Index from which the signs alternate, if they eventually do.
    pub fn alternation_start(&self) -> Option<usize> {
        match self {
            Self::Alternating { .. } => Some(1),
            Self::TailAlternating { switch, .. } => Some(*switch),
            _ => None,
        }
    }

    /// Largest `|l_n|` over the whole sequence.
    pub fn sup_abs(&self) -> f64 {
        match self {
            Self::Constant(c) => c.abs(),
            Self::Explicit(v) => v.iter().fold(0.0f64, |m, x| m.max(x.abs())),
            _ => 1.0,
        }
    }
}

impl std::str::FromStr for SignSequence {
    type Err = Error;

    /// `1`, `-1`, `const:c`, `alt:+`, `alt:-`, `tail:N:+`, `list:1,-1,0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse sign spec `{s}`"));
        let parse_sign = |t: &str| match t {
            "+" | "+1" | "1" => Ok(1i8),
            "-" | "-1" => Ok(-1i8),
            _ => Err(bad()),
        };
        let t = s.trim();
        let conv = |r: Result<Self>| r.map_err(|e| Error::Config(e.to_string()));
        if let Ok(c) = t.parse::<f64>() {
            return conv(Self::constant(c));
        }
        let (kind, rest) = t.split_once(':').ok_or_else(bad)?;
        match kind {
            "const" => conv(Self::constant(rest.parse().map_err(|_| bad())?)),
            "alt" => conv(Self::alternating(parse_sign(rest)?)),
            "tail" => {
                let (n, sign) = rest.split_once(':').ok_or_else(bad)?;
                conv(Self::tail_alternating(n.parse().map_err(|_| bad())?, parse_sign(sign)?))
            }
            "list" => {
                let v = rest
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                conv(Self::explicit(v))
            }
            _ => Err(bad()),
        }
    }
}

fn check_unit(sign: i8) -> Result<()> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("alternation sign must be ±1, got {sign}")))
    }
}

/// How an evaluator treats the part of a sum it does not enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TailMode {
    /// Report the partial sum and bound the omitted tail.
    Truncate,
    /// Over the full prime sequence, add the analytically recovered
    /// remainder; elsewhere identical to `Truncate`.
    #[default]
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub target_tail: f64,
    pub tail: TailMode,
}

impl TruncationPolicy {
    pub fn new(max_terms: usize, target_tail: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidInput("max_terms must be >= 1".into()));
        }
        if target_tail.is_nan() || target_tail < 0.0 {
            return Err(Error::InvalidInput("target_tail must be >= 0".into()));
        }
        Ok(Self {
            max_terms,
            target_tail,
            tail: TailMode::default(),
        })
    }

    pub fn with_tail(mut self, tail: TailMode) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms.max(1);
        self
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            max_terms: 1_000_000,
            target_tail: 1e-10,
            tail: TailMode::Complete,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub value: Complex64,
    pub terms_used: usize,
    pub tail_bound: f64,
    pub converged: bool,
}

impl EvalReport {
    pub(crate) fn exact(value: Complex64, terms_used: usize) -> Self {
        Self {
            value,
            terms_used,
            tail_bound: 0.0,
            converged: true,
        }
    }
}

/// `Σ_{n > M} a_n^{-σ} ≤ a_M^{1-σ}/(σ-1)` for integer `a_n`, `σ > 1`.
pub(crate) fn integral_tail(last: u64, sigma: f64) -> f64 {
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    (last.max(1) as f64).powf(1.0 - sigma) / (sigma - 1.0)
}

/// Whether the sum over `a` with signs `l` can take the prime-tail completion.
fn completable(a: &BaseSequence, l: &SignSequence, policy: &TruncationPolicy) -> bool {
    policy.tail == TailMode::Complete
        && a.origin() == Origin::Primes
        && matches!(l, SignSequence::Constant(_))
}

/// `Σ l_n a_n^{-s}` by direct partial summation.
///
/// Tail bounds: `2 sup|l| a_M^{1-σ}/(σ-1)` for non-alternating signs
/// (σ > 1), `(|s|/σ) a_{M+1}^{-σ}` once the signs alternate (σ > 0). Over the
/// full prime sequence with constant signs and [`TailMode::Complete`] the
/// remainder is added analytically instead.
pub fn dirichlet_eval(
    a: &BaseSequence,
    l: &SignSequence,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    let z = s.z();
    let sigma = s.re;
    let support = match l {
        SignSequence::Explicit(v) => v.len(),
        _ => usize::MAX,
    };
    let limit = a.usable(policy.max_terms).min(support);
    let alternating_from = l.alternation_start();
    let complete_tail = completable(a, l, policy) && sigma > 1.0;
    let abel = if sigma > 0.0 { z.norm() / sigma } else { f64::INFINITY };

    let mut acc = CompensatedSum::new();
    let mut used = 0;
    for n in 1..=limit {
        let ln = l.get(n);
        if ln != 0.0 {
            acc.add(ln * pow_neg(a.get(n), z));
        }
        used = n;
        if n == limit {
            break;
        }
        let stop = match alternating_from {
            Some(start) => {
                n + 1 >= start && abel * (a.get(n + 1) as f64).powf(-sigma) <= policy.target_tail
            }
            None => {
                support == usize::MAX
                    && !a.is_complete()
                    && !complete_tail
                    && 2.0 * l.sup_abs() * integral_tail(a.get(n), sigma) <= policy.target_tail
            }
        };
        if stop {
            break;
        }
    }

    if l.sup_abs() == 0.0 || used == support || (a.is_complete() && used == a.len()) {
        return Ok(EvalReport::exact(acc.value(), used));
    }

    let last = if used == 0 { 1 } else { a.get(used) };
    let bound = if let Some(start) = alternating_from {
        if used + 1 < start {
            f64::INFINITY
        } else {
            let next = match a.available() {
                Some(m) if used < m => a.get(used + 1),
                Some(_) => last,
                None => used as u64 + 1,
            };
            abel * (next as f64).powf(-sigma)
        }
    } else if complete_tail && used > 0 {
        let c = l.get(1);
        let (rest, err) = prime_tail(&a.elements()[..used], s)?;
        acc.add(c * rest);
        err * c.abs()
    } else {
        2.0 * l.sup_abs() * integral_tail(last, sigma)
    };
    Ok(EvalReport {
        value: acc.value(),
        terms_used: used,
        tail_bound: bound,
        converged: bound <= policy.target_tail,
    })
}

/// Maximum Euler-transform order.
const MAX_EULER_ORDER: usize = 32;
const FIRST_CHECKPOINT: usize = 32;

/// Accelerated evaluation of an eventually alternating Dirichlet series.
///
/// The head `n < N` is summed directly. On the alternating tail the partial
/// sums are averaged with binomial weights (Euler transformation of order
/// `K = min(32, m/2)` over the last `K+1` partial sums). The estimate is
/// refreshed at doubling checkpoints `m = 32, 64, ...`; the difference of
/// successive estimates is the reported tail bound.
pub fn alternating_eval(
    a: &BaseSequence,
    l: &SignSequence,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    let start = l.alternation_start().ok_or_else(|| {
        Error::InvalidInput("alternating_eval needs an eventually alternating sign sequence".into())
    })?;
    let z = s.z();
    let limit = a.usable(policy.max_terms);

    if a.is_complete() && limit == a.len() {
        let value: CompensatedSum = (1..=limit).map(|n| l.get(n) * pow_neg(a.get(n), z)).collect();
        return Ok(EvalReport::exact(value.value(), limit));
    }

    let mut head = CompensatedSum::new();
    for n in 1..start.min(limit + 1) {
        head.add(l.get(n) * pow_neg(a.get(n), z));
    }
    if limit < start || s.re <= 0.0 {
        return Ok(EvalReport {
            value: head.value(),
            terms_used: limit.min(start - 1),
            tail_bound: f64::INFINITY,
            converged: false,
        });
    }

    let tail_len = limit - start + 1;
    let ring_len = MAX_EULER_ORDER + 1;
    let mut ring = vec![Complex64::new(0.0, 0.0); ring_len];
    let mut partial = CompensatedSum::new();
    let mut checkpoint = FIRST_CHECKPOINT;
    let mut previous: Option<Complex64> = None;
    let mut best = (Complex64::new(0.0, 0.0), f64::INFINITY);

    // Euler transform over S_{m-K}, ..., S_m
    let estimate = |ring: &[Complex64], m: usize| -> Complex64 {
        let order = MAX_EULER_ORDER.min(m / 2);
        let w = binomial_weights(order);
        let mut acc = CompensatedSum::new();
        for (i, wi) in w.iter().enumerate() {
            acc.add(*wi * ring[(m - order + i - 1) % ring_len]);
        }
        acc.value()
    };

    for m in 1..=tail_len {
        let n = start + m - 1;
        partial.add(l.get(n) * pow_neg(a.get(n), z));
        ring[(m - 1) % ring_len] = partial.value();
        if m == checkpoint || m == tail_len {
            let e = estimate(&ring, m);
            let diff = previous.map_or(f64::INFINITY, |p| (e - p).norm());
            best = (e, diff);
            previous = Some(e);
            if diff <= policy.target_tail {
                return Ok(EvalReport {
                    value: head.value() + e,
                    terms_used: n,
                    tail_bound: diff,
                    converged: true,
                });
            }
            checkpoint *= 2;
        }
    }

    Ok(EvalReport {
        value: head.value() + best.0,
        terms_used: limit,
        tail_bound: best.1,
        converged: false,
    })
}

/// Prime zeta function `P(s) = Σ_p p^{-s}` over the table, for Re(s) > 1.
///
/// With [`TailMode::Complete`] the primes past the table are accounted for
/// analytically; with [`TailMode::Truncate`] the tail bound is the integral
/// comparison against `Σ_{n > p_M} n^{-σ}`.
pub fn prime_zeta_direct(
    table: &PrimeTable,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    let seq = table.as_sequence(policy.max_terms);
    if s.re <= 1.0 {
        let partial = dirichlet_eval(&seq, &SignSequence::Constant(1.0), s, &policy.with_tail(TailMode::Truncate))?;
        return Ok(EvalReport {
            tail_bound: f64::INFINITY,
            converged: false,
            ..partial
        });
    }
    let mut report = dirichlet_eval(&seq, &SignSequence::Constant(1.0), s, policy)?;
    if policy.tail == TailMode::Truncate {
        let last = seq.elements().get(report.terms_used.max(1) - 1).copied().unwrap_or(1);
        report.tail_bound = integral_tail(last, s.re);
        report.converged = report.tail_bound <= policy.target_tail;
    }
    Ok(report)
}

/// Guard threshold: the principal logarithm of ζ(v) is the analytic branch
/// `Σ_p -ln(1 - p^{-v})` whenever `ln ζ(Re v) < π`.
fn principal_log_is_analytic(sigma: f64) -> bool {
    sigma > 1.0 && zeta_real(sigma).ln() < std::f64::consts::PI
}

/// Number of Möbius terms needed so the omitted terms fall below `target`.
pub fn mobius_terms_for(s: ComplexPoint, target: f64) -> usize {
    let mut n = 1;
    while n < 4000 && mobius_tail_bound(s.re, n) > target {
        n += 1;
    }
    n
}

/// Bound on `Σ_{n > n_max} |ln ζ(ns)| / n`.
fn mobius_tail_bound(sigma: f64, n_max: usize) -> f64 {
    let v = sigma * (n_max + 1) as f64;
    if v <= 1.0 {
        return f64::INFINITY;
    }
    // |ln ζ(v)| ≤ ζ(σ_v) - 1 ≤ 2^{-σ_v} + 2^{1-σ_v}/(σ_v - 1)
    let first = (2f64.powf(-v) + 2f64.powf(1.0 - v) / (v - 1.0)) / (n_max + 1) as f64;
    let ratio = 2f64.powf(-sigma);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    first / (1.0 - ratio)
}

/// `P(s) = Σ_{n ≤ n_max} μ(n) ln ζ(ns) / n` with the principal logarithm.
///
/// For `n ≥ 2` the principal branch is accepted only where it provably is the
/// analytic branch; otherwise a [`Error::BranchGuard`] is returned. The `n = 1`
/// term is always the principal logarithm: for `1/2 < Re(s) ≤ 1` the value
/// is therefore determined only up to `2πik`, which `exp(P(s))` does not see.
pub fn prime_zeta_mobius(s: ComplexPoint, n_max: usize) -> Result<EvalReport> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be >= 1".into()));
    }
    if s.re <= 0.5 {
        return Err(Error::Domain(format!("Möbius inversion needs Re(s) > 1/2, got {s}")));
    }
    let mut acc = CompensatedSum::new();
    for n in 1..=n_max {
        let mu = mobius(n as u64);
        if mu == 0 {
            continue;
        }
        let v = s.scale(n as f64);
        if v.re == 1.0 && v.im == 0.0 {
            return Err(Error::Pole(format!("{n}·s = 1")));
        }
        if n >= 2 && !principal_log_is_analytic(v.re) {
            return Err(Error::BranchGuard(format!(
                "principal ln ζ({v}) is not guaranteed to be the analytic branch (n = {n})"
            )));
        }
        let zeta = zeta_ref(v.z())?;
        if zeta.norm() == 0.0 {
            return Err(Error::Domain(format!("ζ({v}) = 0")));
        }
        let mut log = zeta.ln();
        if n >= 2 {
            log = wrap_phase(log);
        }
        acc.add(mu as f64 * log / n as f64);
    }
    let bound = mobius_tail_bound(s.re, n_max);
    Ok(EvalReport {
        value: acc.value(),
        terms_used: n_max,
        tail_bound: bound,
        converged: bound <= 1e-10,
    })
}

/// `Σ_{n ≤ n_max} P(ns)/n`, which reproduces `ln ζ(s)` for Re(s) > 1.
pub fn log_zeta_from_prime_zeta(
    table: &PrimeTable,
    s: ComplexPoint,
    n_max: usize,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    if s.re <= 1.0 {
        return Err(Error::Domain(format!("needs Re(s) > 1, got {s}")));
    }
    let mut acc = CompensatedSum::new();
    let mut bound = 0.0;
    let mut terms = 0;
    for n in 1..=n_max {
        let r = prime_zeta_direct(table, s.scale(n as f64), policy)?;
        acc.add(r.value / n as f64);
        bound += r.tail_bound / n as f64;
        terms = terms.max(r.terms_used);
    }
    // omitted n: P(nσ) ≤ 2^{-nσ}(1 + ...) decays geometrically
    let v = s.re * (n_max + 1) as f64;
    bound += 2.0 * 2f64.powf(-v) / ((n_max + 1) as f64 * (1.0 - 2f64.powf(-s.re)));
    Ok(EvalReport {
        value: acc.value(),
        terms_used: terms,
        tail_bound: bound,
        converged: bound <= policy.target_tail,
    })
}

/// `Σ_p z^p p^{-s}` for `|z| < 1, Re(s) > 0` or `|z| = 1, Re(s) > 1`.
pub fn z_deformed_prime_zeta(
    table: &PrimeTable,
    z: Complex64,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    let r = z.norm();
    let on_circle = (r - 1.0).abs() <= 1e-15;
    let ok = (r < 1.0 && !on_circle && s.re > 0.0) || (on_circle && s.re > 1.0);
    if !ok {
        return Err(Error::Domain(format!(
            "deformed prime zeta needs |z| < 1 with Re(s) > 0 or |z| = 1 with Re(s) > 1 (|z| = {r}, s = {s})"
        )));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(EvalReport::exact(Complex64::new(0.0, 0.0), 0));
    }
    if z == Complex64::new(1.0, 0.0) {
        return prime_zeta_direct(table, s, policy);
    }
    let lnz = z.ln();
    let sz = s.z();
    let primes = table.primes();
    let limit = primes.len().min(policy.max_terms);
    let mut acc = CompensatedSum::new();
    let mut used = 0;
    let geometric = |p: u64| -> f64 {
        // Σ_{n > p} |z|^n n^{-σ} ≤ |z|^{p+1} (p+1)^{-σ} / (1 - |z|)
        r.powf(p as f64 + 1.0) * ((p + 1) as f64).powf(-s.re) / (1.0 - r)
    };
    for (k, &p) in primes[..limit].iter().enumerate() {
        acc.add((lnz * p as f64 - sz * (p as f64).ln()).exp());
        used = k + 1;
        if !on_circle && geometric(p) <= policy.target_tail * 1e-3 {
            break;
        }
    }
    let last = if used == 0 { 1 } else { primes[used - 1] };
    let bound = if on_circle { integral_tail(last, s.re) } else { geometric(last) };
    Ok(EvalReport {
        value: acc.value(),
        terms_used: used,
        tail_bound: bound,
        converged: bound <= policy.target_tail,
    })
}

#[cfg(test)]
mod tests;
