//! Small numeric kernels shared by the evaluators.

use num_complex::Complex64;

/// Neumaier-compensated running sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

#[inline]
fn two_sum(sum: f64, comp: &mut f64, x: f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: Complex64) {
        self.sum.re = two_sum(self.sum.re, &mut self.comp.re, x.re);
        self.sum.im = two_sum(self.sum.im, &mut self.comp.im, x.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `a^{-s}` for a positive integer base.
#[inline]
pub fn pow_neg(a: u64, s: Complex64) -> Complex64 {
    (-s * (a as f64).ln()).exp()
}

const SERIES_RADIUS: f64 = 0.5;

/// `ln(1 - x)`, principal branch. Power series inside `|x| < 1/2`.
pub fn log1m(x: Complex64) -> Complex64 {
    let r = x.norm();
    if r >= SERIES_RADIUS {
        return (Complex64::new(1.0, 0.0) - x).ln();
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pow = x;
    let mut k = 1.0;
    loop {
        let term = pow / k;
        acc -= term;
        if term.norm() <= f64::EPSILON * 0.25 * acc.norm().max(f64::MIN_POSITIVE) {
            break;
        }
        pow *= x;
        k += 1.0;
        if k > 200.0 {
            break;
        }
    }
    acc
}

/// `-y - ln(1 - y) = sum_{j >= 2} y^j / j`, with the linear term cancelled
/// inside the series.
pub fn log_regularized(y: Complex64) -> Complex64 {
    let r = y.norm();
    if r >= SERIES_RADIUS {
        return -y - (Complex64::new(1.0, 0.0) - y).ln();
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pow = y * y;
    let mut k = 2.0;
    loop {
        let term = pow / k;
        acc += term;
        if term.norm() <= f64::EPSILON * 0.25 * acc.norm().max(f64::MIN_POSITIVE) {
            break;
        }
        pow *= y;
        k += 1.0;
        if k > 200.0 {
            break;
        }
    }
    acc
}

/// Wraps an imaginary part into `(-pi, pi]`.
pub fn wrap_phase(z: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    let mut im = z.im % (2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    } else if im <= -PI {
        im += 2.0 * PI;
    }
    Complex64::new(z.re, im)
}

/// Binomial weights `C(k, i) / 2^k`.
pub fn binomial_weights(k: usize) -> Vec<f64> {
    let mut w = vec![1.0f64; k + 1];
    for i in 1..=k {
        w[i] = w[i - 1] * (k + 1 - i) as f64 / i as f64;
    }
    let scale = 0.5f64.powi(k as i32);
    w.iter_mut().for_each(|x| *x *= scale);
    w
}
