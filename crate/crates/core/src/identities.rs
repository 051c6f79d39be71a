//! The binary splitting tree of prime subsequences and the quotient algebra
//! on evaluated values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{pow_neg, CompensatedSum};
use crate::primes::{residue_subsequence_all, PrimeTable, SubseqLabel, MAX_DEPTH};
use crate::series::{alternating_eval, BaseSequence, ComplexPoint, EvalReport, SignSequence, TruncationPolicy};

/// Rooted perfect binary tree of labels down to `depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTree {
    pub depth: u32,
}

impl SplitTree {
    pub fn new(depth: u32) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::InvalidInput(format!("depth {depth} exceeds {MAX_DEPTH}")));
        }
        Ok(Self { depth })
    }

    /// Labels at level `i`, ordered by residue.
    pub fn level(&self, i: u32) -> Vec<SubseqLabel> {
        if i > self.depth {
            return Vec::new();
        }
        (0..1u64 << i).map(|j| SubseqLabel { i, j }).collect()
    }

    pub fn leaves(&self) -> Vec<SubseqLabel> {
        self.level(self.depth)
    }

    /// All nodes, breadth first.
    pub fn nodes(&self) -> Vec<SubseqLabel> {
        (0..=self.depth).flat_map(|i| self.level(i)).collect()
    }
}

/// `((i+1, j), (i+1, j + 2^i))`.
pub fn split_children(label: SubseqLabel) -> Result<(SubseqLabel, SubseqLabel)> {
    let i = label.i + 1;
    Ok((SubseqLabel::new(i, label.j)?, SubseqLabel::new(i, label.j + label.stride())?))
}

/// Both sides of the split factorization at one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitResidual {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub terms_used: usize,
}

/// `|exp(D_node) - exp(-Σ (-1)^n q_n^{-s}) exp(D_left)^2|` for the node
/// sequence `q_n` of `label`.
///
/// `D_node` and `D_left` (the even-indexed `q_{2n}`, i.e. the left child) are
/// summed over the first `M` node terms; the alternating factor is the full
/// accelerated sum. The residual therefore tracks the alternating tail
/// beyond `M`.
pub fn split_factorization_residual(
    table: &PrimeTable,
    label: SubseqLabel,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<SplitResidual> {
    let node = residue_subsequence_all(table, label);
    let m = node.usable(policy.max_terms);
    let (left_label, _) = split_children(label)?;
    let left = residue_subsequence_all(table, left_label);
    let z = s.z();

    let d_node: CompensatedSum = (1..=m).map(|n| pow_neg(node.get(n), z)).collect();
    let d_left: CompensatedSum = (1..=m / 2).map(|n| pow_neg(left.get(n), z)).collect();
    debug_assert!((1..=m / 2).all(|n| left.get(n) == node.get(2 * n)));
    let alt = if m == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        alternating_eval(&node, &SignSequence::alternating(-1)?, s, policy)?.value
    };
    let lhs = d_node.value().exp();
    let rhs = (alt + 2.0 * d_left.value()).exp();
    Ok(SplitResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        terms_used: m,
    })
}

/// `exp(Σ q_{2n}^{-s}) / exp(Σ q_{2n-1}^{-s}) = exp(Σ (-1)^n q_n^{-s})`.
pub fn even_odd_quotient(
    table: &PrimeTable,
    label: SubseqLabel,
    s: ComplexPoint,
    policy: &TruncationPolicy,
) -> Result<EvalReport> {
    let node = residue_subsequence_all(table, label);
    quotient_of(&node, s, policy)
}

pub(crate) fn quotient_of(node: &BaseSequence, s: ComplexPoint, policy: &TruncationPolicy) -> Result<EvalReport> {
    let r = alternating_eval(node, &SignSequence::alternating(1)?, s, policy)?;
    let value = r.value.exp();
    Ok(EvalReport {
        value,
        tail_bound: value.norm() * r.tail_bound.exp_m1(),
        ..r
    })
}

/// `a • b = a / b`.
pub fn leibniz_div(a: Complex64, b: Complex64) -> Result<Complex64> {
    if b.norm() == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// `(a • (b • c) - (a • b) • c, (a/b)(c - 1/c))`.
pub fn assoc_defect(a: Complex64, b: Complex64, c: Complex64) -> Result<(Complex64, Complex64)> {
    let defect = leibniz_div(a, leibniz_div(b, c)?)? - leibniz_div(leibniz_div(a, b)?, c)?;
    let closed = leibniz_div(a, b)? * (c - leibniz_div(Complex64::new(1.0, 0.0), c)?);
    Ok((defect, closed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bracket {
    Plus,
    Minus,
}

/// `a • b ± b • a`.
pub fn skew_bracket(a: Complex64, b: Complex64, sign: Bracket) -> Result<Complex64> {
    let ab = leibniz_div(a, b)?;
    let ba = leibniz_div(b, a)?;
    Ok(match sign {
        Bracket::Plus => ab + ba,
        Bracket::Minus => ab - ba,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiDefect {
    pub lhs: Complex64,
    /// `-abc Σ_cyc 1/(a² - b²)`.
    pub derived_form: Complex64,
    /// `abc / (-Σ_cyc 1/(a² - b²))`.
    pub quotient_form: Complex64,
}

/// Cyclic sum of nested minus brackets `[[a,b],c] + [[b,c],a] + [[c,a],b]`.
pub fn jacobi_defect(a: Complex64, b: Complex64, c: Complex64) -> Result<JacobiDefect> {
    let (a2, b2, c2) = (a * a, b * b, c * c);
    if [a, b, c].iter().any(|x| x.norm() == 0.0) {
        return Err(Error::Degenerate("arguments must be nonzero".into()));
    }
    if a2 == b2 || b2 == c2 || c2 == a2 {
        return Err(Error::Degenerate("squares of the arguments must be pairwise distinct".into()));
    }
    let m = Bracket::Minus;
    let lhs = skew_bracket(skew_bracket(a, b, m)?, c, m)?
        + skew_bracket(skew_bracket(b, c, m)?, a, m)?
        + skew_bracket(skew_bracket(c, a, m)?, b, m)?;
    let sum = (a2 - b2).inv() + (b2 - c2).inv() + (c2 - a2).inv();
    let abc = a * b * c;
    Ok(JacobiDefect {
        lhs,
        derived_form: -abc * sum,
        quotient_form: abc / -sum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interlacing {
    pub interlaced: bool,
    /// Position in the merged sequence where strict alternation starts.
    pub offset: usize,
    /// Merged elements inspected (both sequences cut at the common cutoff).
    pub checked: usize,
    /// Values up to which both sequences were compared.
    pub cutoff: u64,
    pub insufficient_data: bool,
}

/// Minimum number of alternating elements past the offset.
pub const MIN_INTERLACED: usize = 8;

/// Whether the merged order of `a` and `b` eventually alternates strictly,
/// checked up to the smaller of the two largest elements.
pub fn interlace_check(a: &[u64], b: &[u64]) -> Interlacing {
    let cutoff = match (a.last(), b.last()) {
        (Some(&x), Some(&y)) => x.min(y),
        _ => 0,
    };
    let mut merged: Vec<(u64, u8)> = a
        .iter()
        .map(|&x| (x, 0u8))
        .chain(b.iter().map(|&y| (y, 1u8)))
        .filter(|&(v, _)| v <= cutoff)
        .collect();
    merged.sort_unstable();
    let len = merged.len();
    let mut start = len.saturating_sub(1);
    while start > 0 {
        let (prev, cur) = (merged[start - 1], merged[start]);
        if prev.1 == cur.1 || prev.0 == cur.0 {
            break;
        }
        start -= 1;
    }
    let run = len - start;
    Interlacing {
        interlaced: run >= MIN_INTERLACED,
        offset: start,
        checked: len,
        cutoff,
        insufficient_data: len < MIN_INTERLACED,
    }
}

/// `C_n = binom(2n-2, n-1) / n`, exactly.
pub fn catalan(n: u32) -> Result<u128> {
    if n == 0 {
        return Err(Error::InvalidInput("catalan needs n >= 1".into()));
    }
    let m = (n - 1) as u128;
    let overflow = || Error::Overflow(format!("catalan({n}) exceeds u128"));
    // binom(m + k, k) built up in k keeps every intermediate exact
    let mut b: u128 = 1;
    for k in 1..=m {
        b = b.checked_mul(m + k).ok_or_else(overflow)? / k;
    }
    Ok(b / n as u128)
}
