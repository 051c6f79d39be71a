//! Analytic remainders of sums over the primes.
//!
//! With `X` the largest enumerated prime, `ln ζ_{>X}(v) = Σ_{p > X} -ln(1 - p^{-v})`
//! equals `ln ζ(v) + Σ_{p ≤ X} ln(1 - p^{-v})`, and Möbius inversion turns it
//! into `Σ_{p > X} p^{-u} = Σ_n μ(n)/n · ln ζ_{>X}(nu)`. The stripped logarithm
//! is small, so its branch is fixed by wrapping the phase into `(-π, π]`.

use num_complex::Complex64;

use super::{zeta_ref, ComplexPoint};
use crate::error::{Error, Result};
use crate::numeric::{log1m, pow_neg, wrap_phase, CompensatedSum};
use crate::primes::mobius;

/// Contributions below this are dropped.
const NEGLIGIBLE: f64 = 1e-21;
const MAX_MULTIPLE: usize = 400;

/// `2 Σ_{m > x} m^{-σ}` bounds `|ln ζ_{>x}(v)|` for `Re v = σ > 1`.
fn stripped_bound(x: u64, sigma: f64) -> f64 {
    let a = (x + 1) as f64;
    2.0 * (a.powf(-sigma) + a.powf(1.0 - sigma) / (sigma - 1.0))
}

fn stripped_log_zeta(primes: &[u64], v: Complex64) -> Result<Complex64> {
    let zeta = zeta_ref(v)?;
    let mut acc = CompensatedSum::new();
    acc.add(zeta.ln());
    for &p in primes {
        let y = pow_neg(p, v);
        if y.norm() < 1e-300 {
            break;
        }
        acc.add(log1m(y));
    }
    Ok(wrap_phase(acc.value()))
}

/// `Σ_{j ≥ j_min} c_j Σ_{p > X} p^{-js}` where `primes = p_1..p_M`, `X = p_M`.
///
/// Returns the value and an error estimate. Requires `Re(j_min s) > 1`.
pub fn complete_prime_power_series<F>(
    primes: &[u64],
    s: ComplexPoint,
    j_min: usize,
    coeff: F,
) -> Result<(Complex64, f64)>
where
    F: Fn(usize) -> Complex64,
{
    let j_min = j_min.max(1);
    if s.re * j_min as f64 <= 1.0 {
        return Err(Error::Domain(format!(
            "prime tail needs Re({j_min}·s) > 1, got s = {s}"
        )));
    }
    let x = primes.last().copied().unwrap_or(1);
    let coeffs: Vec<Complex64> = (0..=MAX_MULTIPLE)
        .map(|j| if j < j_min { Complex64::new(0.0, 0.0) } else { coeff(j) })
        .collect();

    let mut acc = CompensatedSum::new();
    let mut magnitude = 0.0;
    let mut omitted = 0.0;
    for k in j_min..=MAX_MULTIPLE {
        // d_k = Σ_{j n = k} c_j μ(n) / n
        let mut d = Complex64::new(0.0, 0.0);
        let mut d_abs = 0.0;
        for j in (j_min..=k).filter(|j| k % j == 0) {
            let n = k / j;
            let mu = mobius(n as u64);
            d += coeffs[j] * (mu as f64 / n as f64);
            d_abs += coeffs[j].norm() / n as f64;
        }
        let sigma = s.re * k as f64;
        let bound = d_abs * stripped_bound(x, sigma);
        if bound < NEGLIGIBLE {
            // the remaining bounds shrink at least geometrically in k
            omitted = bound * 2.0;
            break;
        }
        if d == Complex64::new(0.0, 0.0) {
            continue;
        }
        let l = stripped_log_zeta(primes, s.scale(k as f64).z())?;
        magnitude += d.norm() * (1.0 + zeta_ref(s.scale(k as f64).z())?.ln().norm());
        acc.add(d * l);
        if k == MAX_MULTIPLE {
            omitted = f64::INFINITY;
        }
    }
    let rounding = 8.0 * f64::EPSILON * magnitude.max(1.0);
    Ok((acc.value(), omitted + rounding))
}

/// `Σ_{p > X} p^{-u}` for `Re(u) > 1`, with `primes = p_1..p_M`, `X = p_M`.
pub fn prime_tail(primes: &[u64], u: ComplexPoint) -> Result<(Complex64, f64)> {
    complete_prime_power_series(primes, u, 1, |j| {
        if j == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
