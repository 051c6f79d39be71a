//! Exact truncated convolution of non-negative integer sequences.
//!
//! Short inputs use the schoolbook product in `u128`. Long inputs use three
//! number-theoretic transforms and Chinese remaindering, which is exact as
//! long as every true coefficient stays below the product of the moduli.

use crate::error::{Error, Result};

/// (modulus, primitive root)
const MODULI: [(u64, u64); 3] = [(998_244_353, 3), (167_772_161, 3), (469_762_049, 3)];

/// Above this truncation length the transform backend is used.
pub const NTT_THRESHOLD: usize = 4096;

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn ntt(a: &mut [u64], invert: bool, m: u64, root: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(root, (m - 1) / len as u64, m);
        if invert {
            w = pow_mod(w, m - 2, m);
        }
        for chunk in a.chunks_mut(len) {
            let mut wn = 1u64;
            let half = len / 2;
            for k in 0..half {
                let u = chunk[k];
                let v = chunk[k + half] * wn % m;
                chunk[k] = if u + v >= m { u + v - m } else { u + v };
                chunk[k + half] = if u >= v { u - v } else { u + m - v };
                wn = wn * w % m;
            }
        }
        len <<= 1;
    }
    if invert {
        let inv = pow_mod(n as u64, m - 2, m);
        a.iter_mut().for_each(|x| *x = *x * inv % m);
    }
}

fn convolve_mod(a: &[u64], b: &[u64], size: usize, m: u64, root: u64) -> Vec<u64> {
    let mut fa: Vec<u64> = a.iter().map(|x| x % m).collect();
    let mut fb: Vec<u64> = b.iter().map(|x| x % m).collect();
    fa.resize(size, 0);
    fb.resize(size, 0);
    ntt(&mut fa, false, m, root);
    ntt(&mut fb, false, m, root);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % m;
    }
    ntt(&mut fa, true, m, root);
    fa
}

/// Garner reconstruction of `x mod m0 m1 m2` from its three residues.
fn crt(r: [u64; 3]) -> u128 {
    let [(m0, _), (m1, _), (m2, _)] = MODULI;
    let inv01 = pow_mod(m0 % m1, m1 - 2, m1);
    let inv012 = pow_mod(m0 * m1 % m2, m2 - 2, m2);
    let x0 = r[0];
    let x1 = (r[1] + m1 - x0 % m1) % m1 * inv01 % m1;
    let t = (x0 % m2 + x1 * (m0 % m2) % m2) % m2;
    let x2 = (r[2] + m2 - t) % m2 * inv012 % m2;
    x0 as u128 + x1 as u128 * m0 as u128 + x2 as u128 * m0 as u128 * m1 as u128
}

fn moduli_product() -> u128 {
    MODULI.iter().map(|&(m, _)| m as u128).product()
}

/// Schoolbook `(a * b)[0..len]` with overflow checks.
pub fn schoolbook(a: &[u64], b: &[u64], len: usize) -> Result<Vec<u64>> {
    let mut out = vec![0u128; len];
    for (i, &x) in a.iter().enumerate().take(len).filter(|(_, x)| **x != 0) {
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if y != 0 {
                out[i + j] = out[i + j]
                    .checked_add(x as u128 * y as u128)
                    .ok_or_else(|| Error::Overflow(format!("count at n = {} exceeds u128", i + j)))?;
            }
        }
    }
    narrow(out)
}

fn narrow(v: Vec<u128>) -> Result<Vec<u64>> {
    v.into_iter()
        .enumerate()
        .map(|(n, x)| u64::try_from(x).map_err(|_| Error::Overflow(format!("count at n = {n} exceeds u64"))))
        .collect()
}

/// Bytes the transform backend needs for truncation length `len`.
pub fn transform_bytes(len: usize) -> usize {
    (2 * len).next_power_of_two() * 8 * 3
}

/// `(a * b)[0..len]`, exactly.
pub fn convolve(a: &[u64], b: &[u64], len: usize, max_memory: usize) -> Result<Vec<u64>> {
    if len <= NTT_THRESHOLD {
        return schoolbook(a, b, len);
    }
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    let bound = a.iter().max().copied().unwrap_or(0) as u128
        * b.iter().max().copied().unwrap_or(0) as u128
        * a.len().min(b.len()).max(1) as u128;
    if bound >= moduli_product() {
        return schoolbook(a, b, len);
    }
    if transform_bytes(len) > max_memory {
        return Err(Error::ResourceLimit(format!(
            "convolution of length {len} needs {} bytes, budget {max_memory}",
            transform_bytes(len)
        )));
    }
    let size = (a.len() + b.len()).next_power_of_two();
    let parts: Vec<Vec<u64>> = MODULI.iter().map(|&(m, g)| convolve_mod(a, b, size, m, g)).collect();
    let out: Vec<u128> = (0..len)
        .map(|n| if n < size { crt([parts[0][n], parts[1][n], parts[2][n]]) } else { 0 })
        .collect();
    let out = narrow(out)?;
    // the schoolbook prefix must agree exactly across the backend switch
    let check = schoolbook(a, b, NTT_THRESHOLD)?;
    if check[..] != out[..NTT_THRESHOLD] {
        return Err(Error::Overflow("transform backend disagrees with schoolbook prefix".into()));
    }
    Ok(out)
}
