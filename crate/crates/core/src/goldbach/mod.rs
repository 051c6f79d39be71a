//! Ordered representations `n = p_1^k + ... + p_m^k` over prime
//! subsequences, their generating functions, and Mellin cross-checks.

pub mod conv;

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{pow_neg, CompensatedSum};
use crate::primes::{residue_subsequence_all, PrimeTable, SubseqLabel, DEFAULT_MAX_MEMORY};
use crate::quad::{integrate, QuadSpec};
use crate::series::{gamma_ref, ComplexPoint};

/// Truncated power series `Σ_{n ≤ N} c_n x^n` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSeriesTrunc {
    pub coefficients: Vec<u64>,
    /// Exponent `k` and subsequence when the series is a `g_k`.
    pub k: Option<u32>,
    pub label: Option<SubseqLabel>,
}

impl PowerSeriesTrunc {
    pub fn from_coefficients(coefficients: Vec<u64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidInput("series needs at least c_0".into()));
        }
        Ok(Self { coefficients, k: None, label: None })
    }

    /// `N`, the largest retained exponent.
    pub fn cutoff(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `Σ c_n x^n` for `0 ≤ x < 1`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    /// Exponents carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coefficients.iter().enumerate().filter(|(_, &c)| c != 0).map(|(n, _)| n).collect()
    }
}

fn checked_power(p: u64, k: u32) -> Option<u64> {
    p.checked_pow(k)
}

/// Largest `r` with `r^k ≤ n`.
fn integer_root(n: u64, k: u32) -> u64 {
    let mut r = (n as f64).powf(1.0 / k as f64) as u64;
    while checked_power(r + 1, k).is_some_and(|v| v <= n) {
        r += 1;
    }
    while r > 0 && checked_power(r, k).is_none_or(|v| v > n) {
        r -= 1;
    }
    r
}

/// Members `p` of the labelled subsequence with `p^k ≤ n_max`, as `p^k`.
fn member_powers(table: &PrimeTable, label: SubseqLabel, k: u32, n_max: u64) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    let root = integer_root(n_max, k);
    if table.limit() < root {
        return Err(Error::OutOfRange {
            index: root as usize,
            available: table.limit() as usize,
        });
    }
    let seq = residue_subsequence_all(table, label);
    Ok(seq
        .elements()
        .iter()
        .take_while(|&&p| p <= root)
        .map(|&p| p.pow(k))
        .collect())
}

/// `g_k(x) = Σ x^{p^k}` over the labelled subsequence, truncated at `N`.
pub fn gk_series(table: &PrimeTable, label: SubseqLabel, k: u32, n_max: usize) -> Result<PowerSeriesTrunc> {
    let mut c = vec![0u64; n_max + 1];
    for q in member_powers(table, label, k, n_max as u64)? {
        c[q as usize] = 1;
    }
    Ok(PowerSeriesTrunc {
        coefficients: c,
        k: Some(k),
        label: Some(label),
    })
}

/// Counts `r(n)` of ordered `m`-tuples, `0 ≤ n ≤ N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepTable {
    pub k: Option<u32>,
    pub m: u32,
    pub label: Option<SubseqLabel>,
    pub counts: Vec<u64>,
}

impl RepTable {
    pub fn cutoff(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, n: usize) -> u64 {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn as_series(&self) -> PowerSeriesTrunc {
        PowerSeriesTrunc {
            coefficients: self.counts.clone(),
            k: self.k,
            label: self.label,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["n", "count"]).map_err(io)?;
        for (n, c) in self.counts.iter().enumerate() {
            out.write_record([n.to_string(), c.to_string()]).map_err(io)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Resource budgets for counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountConfig {
    pub max_memory: usize,
    /// Maximum number of tuples the brute-force oracle may visit.
    pub max_enumeration: u64,
}

impl Default for CountConfig {
    fn default() -> Self {
        Self {
            max_memory: DEFAULT_MAX_MEMORY,
            max_enumeration: 200_000_000,
        }
    }
}

/// Coefficients of `g^m` up to the cutoff of `g`.
pub fn power_counts(g: &PowerSeriesTrunc, m: u32) -> Result<RepTable> {
    power_counts_with(g, m, &CountConfig::default())
}

pub fn power_counts_with(g: &PowerSeriesTrunc, m: u32, config: &CountConfig) -> Result<RepTable> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be >= 1".into()));
    }
    let len = g.coefficients.len();
    let mut acc = g.coefficients.clone();
    for _ in 1..m {
        acc = conv::convolve(&acc, &g.coefficients, len, config.max_memory)?;
    }
    Ok(RepTable {
        k: g.k,
        m,
        label: g.label,
        counts: acc,
    })
}

/// Exact counts by enumerating ordered tuples.
pub fn brute_force_counts(
    table: &PrimeTable,
    label: SubseqLabel,
    k: u32,
    m: u32,
    n_max: usize,
    config: &CountConfig,
) -> Result<RepTable> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be >= 1".into()));
    }
    let powers = member_powers(table, label, k, n_max as u64)?;
    let mut counts = vec![0u64; n_max + 1];
    let mut visited = 0u64;
    let smallest = powers.first().copied().unwrap_or(u64::MAX);

    #[allow(clippy::too_many_arguments)]
    fn walk(
        powers: &[u64],
        smallest: u64,
        left: u32,
        sum: u64,
        n_max: u64,
        counts: &mut [u64],
        visited: &mut u64,
        budget: u64,
    ) -> Result<()> {
        if left == 0 {
            *visited += 1;
            if *visited > budget {
                return Err(Error::ResourceLimit(format!("enumeration exceeded {budget} tuples")));
            }
            counts[sum as usize] += 1;
            return Ok(());
        }
        let reserve = smallest.saturating_mul(left as u64 - 1);
        for &q in powers {
            let next = sum + q;
            if next.saturating_add(reserve) > n_max {
                break;
            }
            walk(powers, smallest, left - 1, next, n_max, counts, visited, budget)?;
        }
        Ok(())
    }

    walk(&powers, smallest, m, 0, n_max as u64, &mut counts, &mut visited, config.max_enumeration)?;
    Ok(RepTable {
        k: Some(k),
        m,
        label: Some(label),
        counts,
    })
}

/// Even `n ∈ [4, N]` with no representation as a sum of two primes.
pub fn goldbach_scan(table: &PrimeTable, n_max: usize) -> Result<Vec<u64>> {
    if n_max < 4 {
        return Err(Error::InvalidInput("goldbach_scan needs N >= 4".into()));
    }
    let g = gk_series(table, SubseqLabel::ROOT, 1, n_max)?;
    let r = power_counts(&g, 2)?;
    Ok((4..=n_max).step_by(2).filter(|&n| r.counts[n] == 0).map(|n| n as u64).collect())
}

/// Both sides of `Γ(s/k) Σ p^{-s} = ∫_0^∞ t^{s/k-1} Σ e^{-p^k t} dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinReport {
    pub series: Complex64,
    pub integral: Complex64,
    pub residual: f64,
    pub members: usize,
    pub quad_error: f64,
    pub converged: bool,
}

/// Mellin identity over the members of `label` in the table.
///
/// The integral is split at `t = 1`; on `(0, 1]` the substitution
/// `t = e^{-u}` is used, and both pieces are cut where the integrand falls
/// below double precision relative to its scale.
pub fn mellin_residual(
    table: &PrimeTable,
    label: SubseqLabel,
    k: u32,
    s: ComplexPoint,
    quad: &QuadSpec,
) -> Result<MellinReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be >= 1".into()));
    }
    if s.re <= 1.0 {
        return Err(Error::Domain(format!("Mellin identity needs Re(s) > 1, got {s}")));
    }
    let members = residue_subsequence_all(table, label);
    let primes = members.elements();
    if primes.is_empty() {
        return Ok(MellinReport {
            series: Complex64::new(0.0, 0.0),
            integral: Complex64::new(0.0, 0.0),
            residual: 0.0,
            members: 0,
            quad_error: 0.0,
            converged: true,
        });
    }
    let kf = k as f64;
    let z = s.z();
    let w = z / kf;
    let powers: Vec<f64> = primes.iter().map(|&p| (p as f64).powi(k as i32)).collect();
    let series: CompensatedSum = primes.iter().map(|&p| pow_neg(p, z)).collect();
    let series = gamma_ref(w)? * series.value();

    let theta = |t: f64| -> f64 {
        let mut acc = 0.0;
        for &q in &powers {
            let e = (-q * t).exp();
            if e == 0.0 {
                break;
            }
            acc += e;
        }
        acc
    };
    let count = powers.len() as f64;
    let sigma_w = w.re;
    // (0, 1]: ∫_0^∞ e^{-uw} θ(e^{-u}) du; integrand ≤ count e^{-u Re w}
    let u_max = (count.ln() + 40.0) / sigma_w;
    let near = integrate(|u| (-w * u).exp() * theta((-u).exp()), 0.0, u_max, quad)?;
    // [1, ∞): integrand ≤ count t^{Re w - 1} e^{-q_1 t}
    let q1 = powers[0];
    let mut t_max = 2.0;
    while -q1 * (t_max - 1.0) + (sigma_w - 1.0).max(0.0) * t_max.ln() + count.ln() > -40.0 {
        t_max *= 1.5;
    }
    let far = integrate(|t| ((w - 1.0) * t.ln()).exp() * theta(t), 1.0, t_max, quad)?;
    let integral = near.value + far.value;
    Ok(MellinReport {
        series,
        integral,
        residual: (series - integral).norm(),
        members: primes.len(),
        quad_error: near.error + far.error,
        converged: near.converged && far.converged,
    })
}

/// Local exponent of `g` near `x → 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub x: f64,
    pub g: f64,
    /// `-Δ ln g / Δ ln(1 - x)`.
    pub alpha: f64,
    /// `α > 1/m`.
    pub exceeds_bound: bool,
}

/// Log step of the centered difference in `ln(1 - x)`.
pub const PROBE_STEP: f64 = 0.05;
/// `N · ln(1/x)` must exceed this for the truncated series to stand in for `g`.
const RESOLUTION: f64 = 36.0;

pub fn majorization_probe(g: &PowerSeriesTrunc, m: u32, x_grid: &[f64]) -> Result<Vec<ProbeRow>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be >= 1".into()));
    }
    let n = g.cutoff() as f64;
    x_grid
        .iter()
        .map(|&x| {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidInput(format!("x = {x} outside (0, 1)")));
            }
            let lo = 1.0 - (1.0 - x) * PROBE_STEP.exp();
            let hi = 1.0 - (1.0 - x) * (-PROBE_STEP).exp();
            if lo <= 0.0 {
                return Err(Error::InvalidInput(format!("x = {x} too small for the probe step")));
            }
            if n * -hi.ln() < RESOLUTION {
                return Err(Error::GridResolution(format!(
                    "x = {x} is too close to 1 for cutoff N = {n}: x^N is not negligible"
                )));
            }
            let (g_lo, g_hi) = (g.eval(lo), g.eval(hi));
            if g_lo <= 0.0 || g_hi <= 0.0 {
                return Err(Error::Degenerate("g vanishes on the probe stencil".into()));
            }
            let alpha = -(g_hi.ln() - g_lo.ln()) / ((1.0 - hi).ln() - (1.0 - lo).ln());
            Ok(ProbeRow {
                x,
                g: g.eval(x),
                alpha,
                exceeds_bound: alpha > 1.0 / m as f64,
            })
        })
        .collect()
}
