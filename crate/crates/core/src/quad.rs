//! Adaptive Gauss–Kronrod (7, 15) quadrature for complex integrands.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
// Gauss weights on the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Initial panels per interval, absolute tolerance per interval and the
/// maximum bisection depth. `max_depth = 0` gives a fixed composite rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub panels: usize,
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            panels: 32,
            tol: 1e-13,
            max_depth: 30,
        }
    }
}

impl QuadSpec {
    pub fn fixed(panels: usize) -> Self {
        Self {
            panels,
            tol: 0.0,
            max_depth: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    /// False when some panel hit `max_depth` above tolerance.
    pub converged: bool,
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += pair * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).norm())
}

/// `∫_a^b f`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidInput(format!("bad interval [{a}, {b}]")));
    }
    if spec.panels == 0 {
        return Err(Error::InvalidInput("quadrature needs at least one panel".into()));
    }
    let mut acc = CompensatedSum::new();
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    let width = (b - a) / spec.panels as f64;
    let panel_tol = spec.tol / spec.panels as f64;
    let mut stack: Vec<(f64, f64, u32, f64)> = (0..spec.panels)
        .rev()
        .map(|k| (a + width * k as f64, a + width * (k + 1) as f64, 0, panel_tol))
        .collect();
    while let Some((lo, hi, depth, tol)) = stack.pop() {
        let (v, e) = gk15(&f, lo, hi);
        evaluations += 15;
        if e <= tol || depth >= spec.max_depth {
            if e > tol && spec.max_depth > 0 {
                converged = false;
            }
            acc.add(v);
            error += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1, tol / 2.0));
            stack.push((lo, mid, depth + 1, tol / 2.0));
        }
    }
    Ok(QuadResult {
        value: acc.value(),
        error,
        evaluations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((k - 2.0).abs() < 1e-15 && (g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomials_and_exponentials() {
        let r = integrate(|x| real(x.powi(5) - 3.0 * x * x), -1.0, 2.0, &QuadSpec::fixed(1)).unwrap();
        assert!((r.value.re - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
        let r = integrate(|x| real((-x).exp()), 0.0, 40.0, &QuadSpec::default()).unwrap();
        assert!((r.value.re - (1.0 - (-40f64).exp())).abs() < 1e-13);
        assert!(r.converged);
    }

    #[test]
    fn complex_oscillation() {
        // ∫_0^π e^{ix} dx = 2i
        let r = integrate(|x| Complex64::new(0.0, x).exp(), 0.0, std::f64::consts::PI, &QuadSpec::default()).unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn depth_limit_is_reported() {
        let spec = QuadSpec { panels: 1, tol: 1e-300, max_depth: 2 };
        let r = integrate(|x| real(x.sqrt()), 0.0, 1.0, &spec).unwrap();
        assert!(!r.converged);
        assert!(integrate(real, 1.0, 0.0, &spec).is_err());
    }
}
