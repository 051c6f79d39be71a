//! Prime generation and indexing.
//!
//! Primes are produced by a segmented sieve of Eratosthenes and indexed from
//! one: `p_1 = 2, p_2 = 3, ...`. A [`SubseqLabel`] `(i, j)` selects the prime
//! subsequence `p_{2^i n + j}` for `n = 1, 2, 3, ...`, so the labelled
//! subsequence starts at prime index `2^i + j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{BaseSequence, Origin};

/// Default cap on the memory a sieve may use, in bytes.
pub const DEFAULT_MAX_MEMORY: usize = 2 << 30;

/// Default sieve segment length (numbers per segment).
pub const DEFAULT_SEGMENT: usize = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    pub segment_size: usize,
    pub max_memory: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_size: DEFAULT_SEGMENT,
            max_memory: DEFAULT_MAX_MEMORY,
        }
    }
}

/// All primes up to `limit`, in increasing order. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn count(&self) -> usize {
        self.primes.len()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `p_n` with one-based indexing.
    pub fn nth(&self, n: usize) -> Result<u64> {
        nth_prime(self, n)
    }

    /// The first `count` primes as a base sequence tagged as primes.
    pub fn as_sequence(&self, count: usize) -> BaseSequence {
        let take = count.min(self.primes.len());
        BaseSequence::from_parts(Origin::Primes, self.primes[..take].to_vec())
    }

    /// Every stored prime as a base sequence.
    pub fn full_sequence(&self) -> BaseSequence {
        self.as_sequence(self.primes.len())
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Rough upper estimate of the bytes a sieve up to `limit` needs.
fn estimated_memory(limit: u64, segment: usize) -> usize {
    let l = limit.max(16) as f64;
    let pi_upper = 1.26 * l / l.ln();
    let base = (l.sqrt() as usize + 1) * 2;
    (pi_upper as usize) * std::mem::size_of::<u64>() + segment + base
}

pub fn sieve(limit: u64) -> Result<PrimeTable> {
    sieve_with(limit, &SieveConfig::default())
}

/// Segmented sieve of Eratosthenes.
pub fn sieve_with(limit: u64, config: &SieveConfig) -> Result<PrimeTable> {
    let segment = config.segment_size.max(64);
    let need = estimated_memory(limit, segment);
    if need > config.max_memory {
        return Err(Error::ResourceLimit(format!(
            "sieve up to {limit} needs ~{need} bytes, budget is {}",
            config.max_memory
        )));
    }
    if limit < 2 {
        return Ok(PrimeTable {
            limit,
            primes: Vec::new(),
        });
    }

    let root = isqrt(limit);
    let base = simple_sieve(root);
    let mut primes = Vec::with_capacity((1.26 * limit as f64 / (limit as f64).ln()) as usize + 8);

    let mut marks = vec![true; segment];
    let mut low = 2u64;
    while low <= limit {
        let high = (low + segment as u64 - 1).min(limit);
        let len = (high - low + 1) as usize;
        marks[..len].fill(true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let start = (p * p).max(low.div_ceil(p) * p);
            let mut m = start;
            while m <= high {
                marks[(m - low) as usize] = false;
                m += p;
            }
        }
        primes.extend(
            marks[..len]
                .iter()
                .enumerate()
                .filter(|(_, &keep)| keep)
                .map(|(k, _)| low + k as u64),
        );
        low = high + 1;
    }
    Ok(PrimeTable { limit, primes })
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut is_prime = vec![true; n + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is_prime[i] {
            let mut m = i * i;
            while m <= n {
                is_prime[m] = false;
                m += i;
            }
        }
        i += 1;
    }
    is_prime
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(k, _)| k as u64)
        .collect()
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn nth_prime(table: &PrimeTable, n: usize) -> Result<u64> {
    if n == 0 || n > table.count() {
        return Err(Error::OutOfRange {
            index: n,
            available: table.count(),
        });
    }
    Ok(table.primes[n - 1])
}

/// Label `(i, j)` of the subsequence `p_{2^i n + j}`, `j < 2^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubseqLabel {
    pub i: u32,
    pub j: u64,
}

/// Deepest supported tree level; keeps `2^i` inside `u64` with headroom.
pub const MAX_DEPTH: u32 = 40;

impl SubseqLabel {
    pub const ROOT: SubseqLabel = SubseqLabel { i: 0, j: 0 };

    pub fn new(i: u32, j: u64) -> Result<Self> {
        if i > MAX_DEPTH {
            return Err(Error::InvalidInput(format!("depth {i} exceeds {MAX_DEPTH}")));
        }
        if j >= 1u64 << i {
            return Err(Error::InvalidInput(format!("residue {j} must be < 2^{i}")));
        }
        Ok(Self { i, j })
    }

    pub fn stride(&self) -> u64 {
        1u64 << self.i
    }

    /// One-based prime index of the `n`-th member (`n >= 1`).
    pub fn prime_index(&self, n: u64) -> u64 {
        self.stride() * n + self.j
    }

    /// Number of members whose prime index is at most `available`.
    pub fn members_within(&self, available: usize) -> usize {
        let available = available as u64;
        let first = self.prime_index(1);
        if available < first {
            0
        } else {
            ((available - self.j) / self.stride()) as usize
        }
    }
}

impl std::fmt::Display for SubseqLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl std::str::FromStr for SubseqLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (a, b) = t
            .split_once(',')
            .ok_or_else(|| Error::Config(format!("label `{s}` must look like i,j")))?;
        let i = a
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad depth in label `{s}`")))?;
        let j = b
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad residue in label `{s}`")))?;
        SubseqLabel::new(i, j).map_err(|e| Error::Config(e.to_string()))
    }
}

/// `(p_{2^i + j}, p_{2^{i+1} + j}, ...)` truncated to `count` elements.
pub fn residue_subsequence(
    table: &PrimeTable,
    label: SubseqLabel,
    count: usize,
) -> Result<BaseSequence> {
    if count == 0 {
        return Ok(BaseSequence::from_parts(Origin::Residue(label), Vec::new()));
    }
    let last = label.prime_index(count as u64) as usize;
    if last > table.count() {
        return Err(Error::OutOfRange {
            index: last,
            available: table.count(),
        });
    }
    let elements = (1..=count as u64)
        .map(|n| table.primes[label.prime_index(n) as usize - 1])
        .collect();
    Ok(BaseSequence::from_parts(Origin::Residue(label), elements))
}

/// Every member of the labelled subsequence that the table can serve.
pub fn residue_subsequence_all(table: &PrimeTable, label: SubseqLabel) -> BaseSequence {
    let count = label.members_within(table.count());
    if label == SubseqLabel::ROOT {
        return table.full_sequence();
    }
    residue_subsequence(table, label, count).expect("count derived from table size")
}

/// Möbius function by trial division.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Smallest-prime-factor table for fast Möbius values up to a bound.
#[derive(Debug, Clone)]
pub struct MobiusTable {
    spf: Vec<u32>,
}

impl MobiusTable {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut m = i;
                while m <= n {
                    if spf[m] == 0 {
                        spf[m] = i as u32;
                    }
                    m += i;
                }
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Falls back to trial division above the table limit.
    pub fn get(&self, n: u64) -> i8 {
        assert!(n >= 1, "mobius is defined for n >= 1");
        if n > self.limit() {
            return mobius(n);
        }
        let mut n = n as usize;
        let mut sign = 1i8;
        while n > 1 {
            let p = self.spf[n] as usize;
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        sign
    }
}
