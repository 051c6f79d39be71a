use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use super::catalog::IdentityName;
use super::Cplx;
use crate::error::Error;
use crate::primes::SubseqLabel;
use crate::series::SignSequence;

pub(crate) fn finite(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

#[derive(Parser, Debug, Clone)]
#[command(
    name = "eulerlab",
    version,
    about = "Euler products, prime zeta values, splitting identities and prime representation counts"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command. Unset flags fall back to the config file,
/// then to built-in defaults.
#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct Common {
    /// Real part of s
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = finite)]
    pub s_re: Option<f64>,
    /// Imaginary part of s [default: 0]
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = finite)]
    pub s_im: Option<f64>,
    /// Maximum number of enumerated terms [default: 1000000]
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    /// Target bound on the omitted tail [default: 1e-10]
    #[arg(long, global = true, value_parser = finite)]
    pub target_tail: Option<f64>,
    /// Treatment of the omitted tail over the primes [default: complete]
    #[arg(long, global = true, value_enum)]
    pub tail: Option<TailArg>,
    /// Sieve limit for commands that need a prime table
    #[arg(long, global = true)]
    pub prime_limit: Option<u64>,
    /// Report format [default: json]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Flat key=value file with defaults for the flags above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailArg {
    Truncate,
    Complete,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sieve, nth prime, Möbius values and labelled subsequences
    Primes(PrimesArgs),
    /// Σ l_n a_n^{-s} and the reference ζ, Γ, η
    EvalDirichlet(EvalDirichletArgs),
    /// Euler products and their generalizations
    EvalProduct(EvalProductArgs),
    /// The prime zeta function P(s) and its relatives
    PrimeZeta(PrimeZetaArgs),
    /// Run a named identity check
    Identity(IdentityArgs),
    /// The splitting tree of prime subsequences
    Split(SplitArgs),
    /// Quotient algebra on complex values
    Algebra(AlgebraArgs),
    /// Ordered representations n = p_1^k + ... + p_m^k
    Goldbach(GoldbachArgs),
    /// Mellin-transform cross-check of Γ(s/k) Σ p^{-s}
    Mellin(MellinArgs),
    /// Empirical convergence scan over a σ grid
    Scan(ScanArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Primes(_) => "primes",
            Command::EvalDirichlet(_) => "eval-dirichlet",
            Command::EvalProduct(_) => "eval-product",
            Command::PrimeZeta(_) => "prime-zeta",
            Command::Identity(_) => "identity",
            Command::Split(_) => "split",
            Command::Algebra(_) => "algebra",
            Command::Goldbach(_) => "goldbach",
            Command::Mellin(_) => "mellin",
            Command::Scan(_) => "scan",
        }
    }
}

/// A base sequence on the command line: `naturals`, `primes`,
/// `label:i,j` or `list:a1,a2,...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqSpec {
    Naturals,
    Primes,
    Label(SubseqLabel),
    List(Vec<u64>),
}

impl FromStr for SeqSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s == "naturals" {
            return Ok(Self::Naturals);
        }
        if s == "primes" {
            return Ok(Self::Primes);
        }
        if let Some(rest) = s.strip_prefix("label:") {
            return Ok(Self::Label(rest.parse()?));
        }
        if let Some(rest) = s.strip_prefix("list:") {
            let v = rest
                .split(',')
                .map(|x| x.trim().parse::<u64>().map_err(|e| Error::Config(format!("{x:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Self::List(v));
        }
        Err(Error::Config(format!(
            "unknown sequence {s:?} (naturals, primes, label:i,j, list:a,b,...)"
        )))
    }
}

impl fmt::Display for SeqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Naturals => f.write_str("naturals"),
            Self::Primes => f.write_str("primes"),
            Self::Label(l) => write!(f, "label:{},{}", l.i, l.j),
            Self::List(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "list:{}", parts.join(","))
            }
        }
    }
}

impl Serialize for SeqSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Cplx {
    type Err = String;

    /// `re` or `re,im`.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = s.split(',');
        let re = finite(parts.next().unwrap_or(""))?;
        let im = parts.next().map(finite).transpose()?.unwrap_or(0.0);
        if parts.next().is_some() {
            return Err(format!("{s:?}: expected re or re,im"));
        }
        Ok(Cplx { re, im })
    }
}

impl From<Cplx> for Complex64 {
    fn from(c: Cplx) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PrimesArgs {
    /// Sieve limit
    #[arg(long, default_value_t = 1000)]
    pub limit: u64,
    /// Report the n-th prime (one-based)
    #[arg(long)]
    pub nth: Option<usize>,
    /// Report μ(n)
    #[arg(long)]
    pub mobius: Option<u64>,
    /// List the members of subsequence i,j instead of all primes
    #[arg(long)]
    pub label: Option<SubseqLabel>,
    /// Number of members to list [default: all within the limit]
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DirichletMethod {
    /// Accelerated when the signs alternate, direct otherwise
    #[default]
    Auto,
    Direct,
    Accelerated,
    /// Reference ζ(s)
    Zeta,
    /// Reference Γ(s)
    Gamma,
    /// η(s) by Borwein's algorithm
    Eta,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EvalDirichletArgs {
    #[arg(long, default_value = "primes")]
    pub seq: SeqSpec,
    /// 1, -1, const:c, alt:+, alt:-, tail:N:+, tail:N:-, list:l1,l2,...
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub sign: SignSequence,
    #[arg(long, value_enum, default_value_t)]
    pub method: DirichletMethod,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ProductForm {
    /// Π 1/(1 - l_n a_n^{-s})
    #[default]
    Euler,
    /// exp(alternating series) times the regularized correction product
    Continued,
    /// Π 1/(1 - g(a_n^{-s}))
    General,
    /// Π (1 - g'(0) a_n^{-s})/(1 - g(a_n^{-s}))
    Ratio,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EvalProductArgs {
    #[arg(long, default_value = "primes")]
    pub seq: SeqSpec,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub sign: SignSequence,
    #[arg(long, value_enum, default_value_t)]
    pub form: ProductForm,
    /// Coefficients of g from x^0 upwards, for the general and ratio forms
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = finite, default_value = "0,1")]
    pub g: Vec<f64>,
    /// Disc radius for the convergence constants of g
    #[arg(long, value_parser = finite, default_value_t = 0.5)]
    pub delta: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeZetaMethod {
    #[default]
    Direct,
    Mobius,
    /// ln ζ(s) rebuilt from P(ns)
    LogZeta,
    /// Σ_p -ln(1 - z p^{-s})
    Deformed,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PrimeZetaArgs {
    #[arg(long, value_enum, default_value_t)]
    pub method: PrimeZetaMethod,
    /// Terms of the Möbius or log-zeta sum [default: from --target-tail]
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Deformation parameter as re or re,im
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub z: Cplx,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct IdentityArgs {
    #[arg(long, value_enum, required_unless_present = "list")]
    pub name: Option<IdentityName>,
    /// Override the catalog tolerance
    #[arg(long, value_parser = finite)]
    pub tol: Option<f64>,
    /// Print the catalog instead of running a check
    #[arg(long)]
    pub list: bool,
    /// Node for split-factorization, subsequence for mellin
    #[arg(long, default_value = "0,0")]
    pub label: SubseqLabel,
    /// Switch index for truncation-bound
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Power k for mellin
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Complex arguments for the algebraic checks, as re or re,im
    #[arg(long, allow_hyphen_values = true, default_value = "2,0.5")]
    pub a: Cplx,
    #[arg(long, allow_hyphen_values = true, default_value = "1,-1")]
    pub b: Cplx,
    #[arg(long, allow_hyphen_values = true, default_value = "3,0.25")]
    pub c: Cplx,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SplitOp {
    /// Residual of the factorization at the node
    #[default]
    Residual,
    /// exp(Σ q_{2n}^{-s}) / exp(Σ q_{2n-1}^{-s})
    Quotient,
    Children,
    /// Whether the two children interlace
    Interlace,
    /// Labels of the tree down to --depth
    Tree,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SplitArgs {
    #[arg(long, default_value = "0,0")]
    pub label: SubseqLabel,
    #[arg(long, value_enum, default_value_t)]
    pub op: SplitOp,
    #[arg(long, default_value_t = 3)]
    pub depth: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraOp {
    /// a • b = a/b
    Div,
    Assoc,
    /// a • b + b • a
    SkewPlus,
    /// a • b - b • a
    SkewMinus,
    Jacobi,
    Catalan,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AlgebraArgs {
    #[arg(long, value_enum)]
    pub op: AlgebraOp,
    #[arg(long, allow_hyphen_values = true, default_value = "2,0.5")]
    pub a: Cplx,
    #[arg(long, allow_hyphen_values = true, default_value = "1,-1")]
    pub b: Cplx,
    #[arg(long, allow_hyphen_values = true, default_value = "3,0.25")]
    pub c: Cplx,
    /// Index for catalan
    #[arg(long, default_value_t = 5)]
    pub n: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GoldbachArgs {
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long, default_value_t = 2000)]
    pub n_max: usize,
    #[arg(long, default_value = "0,0")]
    pub label: SubseqLabel,
    /// Compare against brute-force enumeration; fails on any difference
    #[arg(long)]
    pub oracle: bool,
    /// List even n in [4, N] with no two-prime representation; fails if any
    #[arg(long)]
    pub scan: bool,
    /// Local growth exponents of the counts at --x
    #[arg(long)]
    pub probe: bool,
    #[arg(long, value_delimiter = ',', value_parser = finite, default_value = "0.9,0.99")]
    pub x: Vec<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MellinArgs {
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value = "0,0")]
    pub label: SubseqLabel,
    /// Initial quadrature panels per interval
    #[arg(long, default_value_t = 32)]
    pub panels: usize,
    #[arg(long, value_parser = finite, default_value_t = 1e-13)]
    pub quad_tol: f64,
    /// 0 gives a fixed composite rule
    #[arg(long, default_value_t = 30)]
    pub max_depth: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ScanArgs {
    #[arg(long, default_value = "primes")]
    pub seq: SeqSpec,
    /// Coefficients of g from x^0 upwards
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = finite, default_value = "0,0,1")]
    pub g: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = finite, default_value = "0.45,0.75")]
    pub sigmas: Vec<f64>,
    /// Terms on the first rung
    #[arg(long, default_value_t = 1024)]
    pub base: usize,
    #[arg(long, default_value_t = 7)]
    pub rungs: usize,
}
