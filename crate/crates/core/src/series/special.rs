//! Reference ζ and Γ evaluators.
//!
//! ζ(s) is obtained from the alternating η(s) = Σ (-1)^{n-1} n^{-s} through
//! ζ(s) = η(s) / (1 - 2^{1-s}); η is accelerated with Borwein's
//! Chebyshev-weighted scheme, which needs only O(|Im s|) terms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

// Pugh / statrs Lanczos coefficients, r = 10.900511.
const LANCZOS_R: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.485_740_891_387_535_5e-5,
    1.051_423_785_817_219_7,
    -3.456_870_972_220_162_5,
    4.512_277_094_668_948,
    -2.982_852_253_235_766_4,
    1.056_397_115_771_267,
    -1.954_287_731_916_458_7e-1,
    1.709_705_434_044_412e-2,
    -5.719_261_174_043_057e-4,
    4.633_994_733_599_057e-6,
    -2.719_949_084_886_077_2e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_717_336_249_247_266_663_112_059_421_841_408_575_5;

const MAX_BORWEIN_TERMS: usize = 420;

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// Γ(s) via the Lanczos approximation, with reflection for Re(s) < 1/2.
pub fn gamma_ref(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("{s}")));
    }
    if s.re < 0.5 {
        let sin = (s * PI).sin();
        if sin.norm() == 0.0 {
            return Err(Error::Pole(format!("{s}")));
        }
        let reflected = lanczos(Complex64::new(1.0, 0.0) - s);
        return Ok(Complex64::new(PI, 0.0) / (sin * reflected));
    }
    Ok(lanczos(s))
}

fn lanczos(x: Complex64) -> Complex64 {
    let series = LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(Complex64::new(LANCZOS_DK[0], 0.0), |acc, (i, &dk)| {
            acc + dk / (x + (i as f64 - 1.0))
        });
    let base = (x - 0.5 + LANCZOS_R) / std::f64::consts::E;
    series * TWO_SQRT_E_OVER_PI * ((x - 0.5) * base.ln()).exp()
}

/// Number of Borwein terms for ~full double precision at `s`.
pub(crate) fn borwein_terms(s: Complex64) -> usize {
    let t = s.im.abs();
    let ln_rate = (3.0 + 8f64.sqrt()).ln();
    let needed = (3.0 * (1.0 + 2.0 * t)).ln() + PI * t / 2.0 + 38.0;
    ((needed / ln_rate).ceil() as usize + 4).clamp(24, MAX_BORWEIN_TERMS)
}

/// η(s) by Borwein's algorithm with `n` terms.
pub fn eta_borwein(s: Complex64, n: usize) -> Complex64 {
    // d_k = n Σ_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut acc = term;
    d.push(nf * acc);
    for i in 1..=n {
        let fi = i as f64;
        term *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi - 1.0) * (2.0 * fi));
        acc += term;
        d.push(nf * acc);
    }
    let dn = d[n];
    let mut sum = CompensatedSum::new();
    for (k, &dk) in d[..n].iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * (dk - dn) / dn;
        sum.add(w * crate::numeric::pow_neg(k as u64 + 1, s));
    }
    -sum.value()
}

/// ζ(s) for Re(s) > 0, s ≠ 1.
pub fn zeta_ref(s: Complex64) -> Result<Complex64> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.re <= 0.0 {
        return Err(Error::Domain(format!("zeta_ref needs Re(s) > 0, got {s}")));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("1".into()));
    }
    // Past Re(s) = 60 the series is 1 + 2^{-s} + 3^{-s} to double precision.
    if s.re > 60.0 {
        return Ok(Complex64::new(1.0, 0.0)
            + crate::numeric::pow_neg(2, s)
            + crate::numeric::pow_neg(3, s));
    }
    let eta = eta_borwein(s, borwein_terms(s));
    let denom = Complex64::new(1.0, 0.0) - (Complex64::new(1.0, 0.0) - s).exp2();
    if denom.norm() < 1e-300 {
        return Err(Error::Domain(format!(
            "1 - 2^(1-s) vanishes at {s}; use a neighbouring point"
        )));
    }
    Ok(eta / denom)
}

/// Real ζ(σ) for σ > 1, used by analytic bounds.
pub(crate) fn zeta_real(sigma: f64) -> f64 {
    zeta_ref(Complex64::new(sigma, 0.0))
        .map(|z| z.re)
        .unwrap_or(f64::INFINITY)
}
