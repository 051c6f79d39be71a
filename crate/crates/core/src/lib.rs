//! Prime-indexed Dirichlet series, Euler products and related identities.

pub mod cli;
pub mod error;
pub mod goldbach;
pub mod identities;
pub mod numeric;
pub mod primes;
pub mod products;
pub mod quad;
pub mod series;

pub use error::{Error, Result};
pub use primes::{sieve, PrimeTable, SubseqLabel};
pub use series::{BaseSequence, ComplexPoint, EvalReport, SignSequence, TailMode, TruncationPolicy};
