use clap::ValueEnum;
use serde::Serialize;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityName {
    EulerVsZeta,
    PlusProductQuotient,
    ExpFactorization,
    MobiusInversionPair,
    SplitFactorization,
    TruncationBound,
    AssocDefect,
    JacobiDefect,
    Mellin,
}

impl IdentityName {
    pub fn as_str(&self) -> &'static str {
        self.spec().name
    }

    pub fn spec(&self) -> &'static IdentitySpec {
        CATALOG.iter().find(|e| e.id == *self).expect("every identity is catalogued")
    }
}

/// A named check and its default tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentitySpec {
    #[serde(skip)]
    pub id: IdentityName,
    pub name: &'static str,
    pub tolerance: f64,
    pub description: &'static str,
}

const CATALOG: [IdentitySpec; 9] = [
    IdentitySpec {
        id: IdentityName::EulerVsZeta,
        name: "euler-vs-zeta",
        tolerance: 1e-6,
        description: "|Π_p 1/(1 - p^-s) - ζ(s)|",
    },
    IdentitySpec {
        id: IdentityName::PlusProductQuotient,
        name: "plus-product-quotient",
        tolerance: 1e-8,
        description: "|Π_p 1/(1 + p^-s) · ζ(s) - ζ(2s)|",
    },
    IdentitySpec {
        id: IdentityName::ExpFactorization,
        name: "exp-factorization",
        tolerance: 1e-9,
        description: "|exp(P(s)) - ζ(s) Π_p exp(p^-s)(1 - p^-s)|",
    },
    IdentitySpec {
        id: IdentityName::MobiusInversionPair,
        name: "mobius-inversion-pair",
        tolerance: 1e-10,
        description: "|Σ μ(n)/n ln ζ(ns) - Σ_p p^-s|",
    },
    IdentitySpec {
        id: IdentityName::SplitFactorization,
        name: "split-factorization",
        tolerance: 1e-9,
        description: "splitting of a node's prime sum into its even child and an alternating sum",
    },
    IdentitySpec {
        id: IdentityName::TruncationBound,
        name: "truncation-bound",
        tolerance: 0.0,
        description: "|ζ(s) - product with tail-alternating signs| <= 2 p_N^(1-σ)/(σ-1), plus the tolerance",
    },
    IdentitySpec {
        id: IdentityName::AssocDefect,
        name: "assoc-defect",
        tolerance: 1e-13,
        description: "a•(b•c) - (a•b)•c against (a/b)(c - 1/c), relative",
    },
    IdentitySpec {
        id: IdentityName::JacobiDefect,
        name: "jacobi-defect",
        tolerance: 1e-13,
        description: "cyclic sum of nested minus brackets against -abc Σ 1/(a² - b²), relative",
    },
    IdentitySpec {
        id: IdentityName::Mellin,
        name: "mellin",
        tolerance: 1e-6,
        description: "Γ(s/k) Σ p^-s against ∫ t^(s/k-1) Σ exp(-p^k t) dt",
    },
];

pub fn list_identities() -> &'static [IdentitySpec] {
    &CATALOG
}

/// For each library operation, an invocation that exercises it.
pub const REGISTRY: &[(&str, &[&str])] = &[
    ("sieve", &["primes", "--limit", "100"]),
    ("nth_prime", &["primes", "--limit", "100", "--nth", "10"]),
    ("residue_subsequence", &["primes", "--limit", "1000", "--label", "1,1", "--count", "5"]),
    ("mobius", &["primes", "--mobius", "30"]),
    ("dirichlet_eval", &["eval-dirichlet", "--seq", "naturals", "--method", "direct", "--s-re", "3", "--max-terms", "1000"]),
    ("alternating_eval", &["eval-dirichlet", "--seq", "naturals", "--sign", "alt:+", "--s-re", "0.5", "--s-im", "3"]),
    ("zeta_ref", &["eval-dirichlet", "--method", "zeta", "--s-re", "0.5", "--s-im", "14"]),
    ("gamma_ref", &["eval-dirichlet", "--method", "gamma", "--s-re", "0.5"]),
    ("prime_zeta_direct", &["prime-zeta", "--s-re", "2", "--prime-limit", "100000"]),
    ("prime_zeta_mobius", &["prime-zeta", "--method", "mobius", "--s-re", "2"]),
    ("z_deformed_prime_zeta", &["prime-zeta", "--method", "deformed", "--z", "0.5,0.5", "--s-re", "1.5", "--prime-limit", "100000"]),
    ("euler_product_eval", &["eval-product", "--sign", "-1", "--s-re", "2", "--prime-limit", "100000"]),
    ("general_product_eval", &["eval-product", "--form", "general", "--g", "0,1,0.5", "--s-re", "2", "--prime-limit", "100000"]),
    ("derive_convergence_params", &["eval-product", "--form", "general", "--g", "0,0,1", "--s-re", "0.75", "--prime-limit", "100000"]),
    ("continued_product_eval", &["eval-product", "--form", "continued", "--sign", "alt:+", "--s-re", "0.8", "--prime-limit", "100000"]),
    ("regularized_exp_identity_residual", &["identity", "--name", "exp-factorization", "--s-re", "2", "--prime-limit", "100000"]),
    ("truncation_discrepancy_check", &["identity", "--name", "truncation-bound", "--n", "5", "--s-re", "2", "--prime-limit", "100000"]),
    ("convergence_scan", &["scan", "--base", "64", "--rungs", "4", "--prime-limit", "100000"]),
    ("split_children", &["split", "--op", "children", "--label", "1,1"]),
    ("split_factorization_residual", &["split", "--label", "1,0", "--s-re", "2", "--prime-limit", "100000"]),
    ("even_odd_quotient", &["split", "--op", "quotient", "--s-re", "2", "--prime-limit", "100000"]),
    ("leibniz_div", &["algebra", "--op", "div"]),
    ("assoc_defect", &["algebra", "--op", "assoc"]),
    ("skew_bracket", &["algebra", "--op", "skew-minus"]),
    ("jacobi_defect", &["algebra", "--op", "jacobi"]),
    ("interlace_check", &["split", "--op", "interlace", "--prime-limit", "10000"]),
    ("catalan", &["algebra", "--op", "catalan", "--n", "10"]),
    ("gk_series", &["goldbach", "--k", "2", "--m", "2", "--n-max", "500"]),
    ("power_counts", &["goldbach", "--n-max", "500"]),
    ("brute_force_counts", &["goldbach", "--oracle", "--n-max", "300"]),
    ("goldbach_scan", &["goldbach", "--scan", "--n-max", "1000"]),
    ("mellin_residual", &["mellin", "--s-re", "2", "--prime-limit", "1000"]),
    ("majorization_probe", &["goldbach", "--probe", "--n-max", "5000", "--x", "0.9"]),
    ("list_identities", &["identity", "--list"]),
];
