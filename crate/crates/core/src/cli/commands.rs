use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::args::*;
use super::catalog::{list_identities, IdentityName};
use super::{Cplx, Report, Settings};
use crate::error::{Error, Result};
use crate::goldbach::{
    brute_force_counts, gk_series, goldbach_scan, majorization_probe, mellin_residual, power_counts_with, CountConfig,
};
use crate::identities::{
    assoc_defect, catalan, even_odd_quotient, interlace_check, jacobi_defect, leibniz_div, skew_bracket,
    split_children, split_factorization_residual, Bracket, SplitTree,
};
use crate::primes::{mobius, nth_prime, residue_subsequence, residue_subsequence_all, sieve_with, PrimeTable, SieveConfig};
use crate::products::{
    continued_product_eval, convergence_scan, derive_convergence_params, doubling_ladder, euler_product_eval,
    general_product_eval, regularized_exp_identity_residual, regularized_ratio_eval, truncation_discrepancy_check,
    GeneralFactor,
};
use crate::quad::QuadSpec;
use crate::series::{
    alternating_eval, borwein_terms, dirichlet_eval, eta_borwein, gamma_ref, log_zeta_from_prime_zeta,
    mobius_terms_for, prime_zeta_direct, prime_zeta_mobius, z_deformed_prime_zeta, zeta_ref, BaseSequence,
    ComplexPoint, EvalReport, SignSequence,
};

/// Sieve limit when `--prime-limit` is not given.
pub const DEFAULT_PRIME_LIMIT: u64 = 10_000_000;
/// Sieve limit for the Mellin check, whose integrand cost grows with the table.
pub const MELLIN_PRIME_LIMIT: u64 = 10_000;
const DEFAULT_S: f64 = 2.0;

struct Ctx<'a> {
    settings: &'a Settings,
    table: Option<PrimeTable>,
    limit_used: Option<u64>,
}

impl<'a> Ctx<'a> {
    fn new(settings: &'a Settings) -> Self {
        Self {
            settings,
            table: None,
            limit_used: None,
        }
    }

    fn sieve_config(&self) -> SieveConfig {
        SieveConfig {
            max_memory: self.settings.max_memory,
            ..SieveConfig::default()
        }
    }

    fn count_config(&self) -> CountConfig {
        CountConfig {
            max_memory: self.settings.max_memory,
            ..CountConfig::default()
        }
    }

    fn table(&mut self, default_limit: u64) -> Result<&PrimeTable> {
        if self.table.is_none() {
            let limit = self.settings.prime_limit.unwrap_or(default_limit);
            self.table = Some(sieve_with(limit, &self.sieve_config())?);
            self.limit_used = Some(limit);
        }
        Ok(self.table.as_ref().expect("table just built"))
    }

    fn base(&mut self, spec: &SeqSpec) -> Result<BaseSequence> {
        Ok(match spec {
            SeqSpec::Naturals => BaseSequence::naturals(),
            SeqSpec::Primes => self.table(DEFAULT_PRIME_LIMIT)?.full_sequence(),
            SeqSpec::Label(l) => residue_subsequence_all(self.table(DEFAULT_PRIME_LIMIT)?, *l),
            SeqSpec::List(v) => BaseSequence::explicit(v.clone())?,
        })
    }

    fn s(&self) -> Result<ComplexPoint> {
        self.settings.s_or(DEFAULT_S)
    }

    fn params(&self, s: Option<ComplexPoint>, args: &impl Serialize) -> Value {
        json!({
            "s": s.map(|s| Cplx { re: s.re, im: s.im }),
            "policy": self.settings.policy,
            "prime_limit": self.limit_used,
            "max_memory": self.settings.max_memory,
            "args": args,
        })
    }
}

fn csv_table<R: AsRef<[u8]>>(header: &[&str], rows: impl IntoIterator<Item = Vec<R>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

pub(crate) fn dispatch(command: &Command, settings: &Settings) -> Result<Report> {
    let mut ctx = Ctx::new(settings);
    let name = command.name();
    match command {
        Command::Primes(a) => primes(&mut ctx, name, a),
        Command::EvalDirichlet(a) => eval_dirichlet(&mut ctx, name, a),
        Command::EvalProduct(a) => eval_product(&mut ctx, name, a),
        Command::PrimeZeta(a) => prime_zeta(&mut ctx, name, a),
        Command::Identity(a) => identity(&mut ctx, name, a),
        Command::Split(a) => split(&mut ctx, name, a),
        Command::Algebra(a) => algebra(&ctx, name, a),
        Command::Goldbach(a) => goldbach(&ctx, name, a),
        Command::Mellin(a) => mellin(&mut ctx, name, a),
        Command::Scan(a) => scan(&mut ctx, name, a),
    }
}

fn primes(ctx: &mut Ctx, name: &str, a: &PrimesArgs) -> Result<Report> {
    let table = sieve_with(a.limit, &ctx.sieve_config())?;
    let members: Vec<u64> = match a.label {
        Some(l) => {
            let count = a.count.unwrap_or_else(|| l.members_within(table.count()));
            residue_subsequence(&table, l, count)?.elements().to_vec()
        }
        None => {
            let count = a.count.unwrap_or(table.count()).min(table.count());
            table.primes()[..count].to_vec()
        }
    };
    let mut r = Report::new(name, ctx.params(None, a));
    r.set("count", table.count());
    r.set("largest", table.primes().last());
    if let Some(n) = a.nth {
        r.set("nth", nth_prime(&table, n)?);
    }
    if let Some(n) = a.mobius {
        if n == 0 {
            return Err(Error::InvalidInput("μ(n) needs n >= 1".into()));
        }
        r.set("mobius", mobius(n));
    }
    r.table = Some(csv_table(
        &["index", "value"],
        members.iter().enumerate().map(|(i, p)| vec![(i + 1).to_string(), p.to_string()]),
    )?);
    r.set("members", members);
    Ok(r)
}

fn eval_dirichlet(ctx: &mut Ctx, name: &str, a: &EvalDirichletArgs) -> Result<Report> {
    let s = ctx.s()?;
    let z = s.z();
    let reference = |v: Complex64, terms: Option<usize>| EvalReport {
        value: v,
        terms_used: terms.unwrap_or(0),
        tail_bound: 0.0,
        converged: true,
    };
    let out = match a.method {
        DirichletMethod::Zeta => reference(zeta_ref(z)?, None),
        DirichletMethod::Gamma => reference(gamma_ref(z)?, None),
        DirichletMethod::Eta => {
            let n = borwein_terms(z);
            reference(eta_borwein(z, n), Some(n))
        }
        m => {
            let seq = ctx.base(&a.seq)?;
            let accelerate = match m {
                DirichletMethod::Accelerated => true,
                DirichletMethod::Direct => false,
                _ => a.sign.alternation_start().is_some(),
            };
            let policy = ctx.settings.policy;
            if accelerate {
                alternating_eval(&seq, &a.sign, s, &policy)?
            } else {
                dirichlet_eval(&seq, &a.sign, s, &policy)?
            }
        }
    };
    let mut r = Report::new(name, ctx.params(Some(s), a)).with_eval(&out);
    r.set("converged", out.converged);
    Ok(r)
}

fn eval_product(ctx: &mut Ctx, name: &str, a: &EvalProductArgs) -> Result<Report> {
    let s = ctx.s()?;
    let seq = ctx.base(&a.seq)?;
    let policy = ctx.settings.policy;
    let mut convergence = None;
    let out = match a.form {
        ProductForm::Euler => euler_product_eval(&seq, &a.sign, s, &policy)?,
        ProductForm::Continued => continued_product_eval(&seq, &a.sign, s, &policy)?,
        ProductForm::General | ProductForm::Ratio => {
            let g = GeneralFactor::new(a.g.clone())?;
            convergence = Some(derive_convergence_params(&g, a.delta)?);
            if a.form == ProductForm::General {
                general_product_eval(&seq, &g, s, &policy)?
            } else {
                regularized_ratio_eval(&seq, &g, s, &policy)?
            }
        }
    };
    let mut r = Report::new(name, ctx.params(Some(s), a)).with_eval(&out);
    r.set("converged", out.converged);
    if let Some(c) = convergence {
        r.set("convergence", c);
    }
    Ok(r)
}

fn prime_zeta(ctx: &mut Ctx, name: &str, a: &PrimeZetaArgs) -> Result<Report> {
    let s = ctx.s()?;
    let policy = ctx.settings.policy;
    let n_max = a.n_max.unwrap_or_else(|| mobius_terms_for(s, policy.target_tail));
    let out = match a.method {
        PrimeZetaMethod::Direct => prime_zeta_direct(ctx.table(DEFAULT_PRIME_LIMIT)?, s, &policy)?,
        PrimeZetaMethod::Mobius => prime_zeta_mobius(s, n_max)?,
        PrimeZetaMethod::LogZeta => log_zeta_from_prime_zeta(ctx.table(DEFAULT_PRIME_LIMIT)?, s, n_max, &policy)?,
        PrimeZetaMethod::Deformed => z_deformed_prime_zeta(ctx.table(DEFAULT_PRIME_LIMIT)?, a.z.into(), s, &policy)?,
    };
    let mut r = Report::new(name, ctx.params(Some(s), a)).with_eval(&out);
    r.set("converged", out.converged);
    if matches!(a.method, PrimeZetaMethod::Mobius | PrimeZetaMethod::LogZeta) {
        r.set("n_max", n_max);
    }
    Ok(r)
}

/// `|[[x,y],z]| + |[[y,z],x]| + |[[z,x],y]|`, the natural scale of the Jacobi sum.
fn jacobi_scale(a: Complex64, b: Complex64, c: Complex64) -> Result<f64> {
    let m = Bracket::Minus;
    let mut total = 0.0;
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        total += skew_bracket(skew_bracket(x, y, m)?, z, m)?.norm();
    }
    Ok(total)
}

struct Check {
    lhs: Value,
    rhs: Value,
    value: Complex64,
    residual: f64,
    tolerance: f64,
    terms_used: Option<usize>,
    tail_bound: Option<f64>,
    inputs: Value,
    extra: Vec<(&'static str, Value)>,
}

impl Check {
    fn complex(lhs: Complex64, rhs: Complex64, residual: f64, tolerance: f64, inputs: Value) -> Self {
        Self {
            lhs: json!(Cplx::from(lhs)),
            rhs: json!(Cplx::from(rhs)),
            value: lhs,
            residual,
            tolerance,
            terms_used: None,
            tail_bound: None,
            inputs,
            extra: Vec::new(),
        }
    }

    fn terms(mut self, terms: usize, tail: f64) -> Self {
        self.terms_used = Some(terms);
        self.tail_bound = Some(tail);
        self
    }
}

fn run_check(ctx: &mut Ctx, id: IdentityName, tol: f64, a: &IdentityArgs) -> Result<(Check, Option<ComplexPoint>)> {
    let policy = ctx.settings.policy;
    let s = ctx.s()?;
    let sj = json!({"s": Cplx { re: s.re, im: s.im }});
    let unit = |c: f64| SignSequence::Constant(c);
    let check = match id {
        IdentityName::EulerVsZeta => {
            let p = euler_product_eval(&ctx.table(DEFAULT_PRIME_LIMIT)?.full_sequence(), &unit(1.0), s, &policy)?;
            let z = zeta_ref(s.z())?;
            Check::complex(p.value, z, (p.value - z).norm(), tol, sj).terms(p.terms_used, p.tail_bound)
        }
        IdentityName::PlusProductQuotient => {
            let p = euler_product_eval(&ctx.table(DEFAULT_PRIME_LIMIT)?.full_sequence(), &unit(-1.0), s, &policy)?;
            let lhs = p.value * zeta_ref(s.z())?;
            let rhs = zeta_ref(2.0 * s.z())?;
            Check::complex(lhs, rhs, (lhs - rhs).norm(), tol, sj).terms(p.terms_used, p.tail_bound)
        }
        IdentityName::ExpFactorization => {
            let r = regularized_exp_identity_residual(ctx.table(DEFAULT_PRIME_LIMIT)?, s, &policy)?;
            Check::complex(r.lhs, r.rhs, r.residual, tol, sj).terms(r.terms_used, r.tail_bound)
        }
        IdentityName::MobiusInversionPair => {
            let direct = prime_zeta_direct(ctx.table(DEFAULT_PRIME_LIMIT)?, s, &policy)?;
            let inv = prime_zeta_mobius(s, mobius_terms_for(s, 1e-17))?;
            let mut c = Check::complex(inv.value, direct.value, (inv.value - direct.value).norm(), tol, sj)
                .terms(direct.terms_used, direct.tail_bound + inv.tail_bound);
            c.extra.push(("mobius_terms", json!(inv.terms_used)));
            c
        }
        IdentityName::SplitFactorization => {
            let r = split_factorization_residual(ctx.table(DEFAULT_PRIME_LIMIT)?, a.label, s, &policy)?;
            let inputs = json!({"s": Cplx { re: s.re, im: s.im }, "label": a.label.to_string()});
            let mut c = Check::complex(r.lhs, r.rhs, r.residual, tol, inputs);
            c.terms_used = Some(r.terms_used);
            c
        }
        IdentityName::TruncationBound => {
            let (measured, bound) = truncation_discrepancy_check(ctx.table(DEFAULT_PRIME_LIMIT)?, a.n, s, &policy)?;
            let inputs = json!({"s": Cplx { re: s.re, im: s.im }, "n": a.n});
            Check {
                lhs: json!(measured),
                rhs: json!(bound),
                value: Complex64::new(measured, 0.0),
                residual: measured,
                tolerance: bound + tol,
                terms_used: None,
                tail_bound: None,
                inputs,
                extra: Vec::new(),
            }
        }
        IdentityName::AssocDefect => {
            let (x, y, z) = (a.a.into(), a.b.into(), a.c.into());
            let (d, f) = assoc_defect(x, y, z)?;
            let scale: f64 = (x / y).norm() * (z.norm() + z.inv().norm());
            let inputs = json!({"a": a.a, "b": a.b, "c": a.c});
            return Ok((Check::complex(d, f, (d - f).norm() / scale, tol, inputs), None));
        }
        IdentityName::JacobiDefect => {
            let (x, y, z) = (a.a.into(), a.b.into(), a.c.into());
            let j = jacobi_defect(x, y, z)?;
            let scale = jacobi_scale(x, y, z)?.max(j.derived_form.norm());
            let inputs = json!({"a": a.a, "b": a.b, "c": a.c});
            let mut c = Check::complex(j.lhs, j.derived_form, (j.lhs - j.derived_form).norm() / scale, tol, inputs);
            let quotient_gap = (j.quotient_form - j.lhs).norm() / scale;
            c.extra.push(("quotient_form", json!(Cplx::from(j.quotient_form))));
            c.extra.push(("quotient_form_matches", json!(quotient_gap <= tol)));
            return Ok((c, None));
        }
        IdentityName::Mellin => {
            let r = mellin_residual(ctx.table(MELLIN_PRIME_LIMIT)?, a.label, a.k, s, &QuadSpec::default())?;
            let inputs = json!({"s": Cplx { re: s.re, im: s.im }, "k": a.k, "label": a.label.to_string()});
            let mut c = Check::complex(r.series, r.integral, r.residual, tol, inputs);
            c.terms_used = Some(r.members);
            c.tail_bound = Some(r.quad_error);
            c.extra.push(("quad_converged", json!(r.converged)));
            c
        }
    };
    Ok((check, Some(s)))
}

fn identity(ctx: &mut Ctx, name: &str, a: &IdentityArgs) -> Result<Report> {
    let Some(id) = a.name.filter(|_| !a.list) else {
        let mut r = Report::new(name, ctx.params(None, a));
        let catalog = list_identities();
        r.table = Some(csv_table(
            &["name", "tolerance", "description"],
            catalog.iter().map(|e| vec![e.name.to_string(), format!("{:e}", e.tolerance), e.description.to_string()]),
        )?);
        r.set("identities", catalog);
        return Ok(r);
    };
    let tol = a.tol.unwrap_or(id.spec().tolerance);
    let (check, s) = run_check(ctx, id, tol, a)?;
    let pass = check.residual <= check.tolerance;
    let mut r = Report::new(name, ctx.params(s, a));
    r.value = Some(check.value.into());
    r.terms_used = check.terms_used;
    r.tail_bound = check.tail_bound;
    r.residual = Some(check.residual);
    r.pass = Some(pass);
    r.set("identity", id.as_str());
    r.set("inputs", check.inputs);
    r.set("lhs", check.lhs);
    r.set("rhs", check.rhs);
    r.set("tolerance", check.tolerance);
    for (k, v) in check.extra {
        r.set(k, v);
    }
    Ok(r)
}

fn split(ctx: &mut Ctx, name: &str, a: &SplitArgs) -> Result<Report> {
    let policy = ctx.settings.policy;
    match a.op {
        SplitOp::Residual => {
            let s = ctx.s()?;
            let out = split_factorization_residual(ctx.table(DEFAULT_PRIME_LIMIT)?, a.label, s, &policy)?;
            let mut r = Report::new(name, ctx.params(Some(s), a));
            r.value = Some(out.lhs.into());
            r.terms_used = Some(out.terms_used);
            r.residual = Some(out.residual);
            r.set("lhs", Cplx::from(out.lhs));
            r.set("rhs", Cplx::from(out.rhs));
            Ok(r)
        }
        SplitOp::Quotient => {
            let s = ctx.s()?;
            let out = even_odd_quotient(ctx.table(DEFAULT_PRIME_LIMIT)?, a.label, s, &policy)?;
            Ok(Report::new(name, ctx.params(Some(s), a)).with_eval(&out))
        }
        SplitOp::Children => {
            let (l, rt) = split_children(a.label)?;
            let mut r = Report::new(name, ctx.params(None, a));
            r.set("children", [l.to_string(), rt.to_string()]);
            Ok(r)
        }
        SplitOp::Interlace => {
            let (l, rt) = split_children(a.label)?;
            let table = ctx.table(DEFAULT_PRIME_LIMIT)?;
            let (left, right) = (residue_subsequence_all(table, l), residue_subsequence_all(table, rt));
            let out = interlace_check(left.elements(), right.elements());
            let mut r = Report::new(name, ctx.params(None, a));
            r.set("children", [l.to_string(), rt.to_string()]);
            r.set("interlacing", out);
            Ok(r)
        }
        SplitOp::Tree => {
            let tree = SplitTree::new(a.depth)?;
            let mut r = Report::new(name, ctx.params(None, a));
            let labels: Vec<String> = tree.leaves().iter().map(ToString::to_string).collect();
            r.table = Some(csv_table(&["leaf"], labels.iter().map(|l| vec![l.clone()]))?);
            r.set("nodes", tree.nodes().len());
            r.set("leaves", labels);
            Ok(r)
        }
    }
}

fn algebra(ctx: &Ctx, name: &str, a: &AlgebraArgs) -> Result<Report> {
    let (x, y, z): (Complex64, Complex64, Complex64) = (a.a.into(), a.b.into(), a.c.into());
    let mut r = Report::new(name, ctx.params(None, a));
    match a.op {
        AlgebraOp::Div => r.value = Some(leibniz_div(x, y)?.into()),
        AlgebraOp::Assoc => {
            let (d, f) = assoc_defect(x, y, z)?;
            r.value = Some(d.into());
            r.set("closed_form", Cplx::from(f));
        }
        AlgebraOp::SkewPlus => r.value = Some(skew_bracket(x, y, Bracket::Plus)?.into()),
        AlgebraOp::SkewMinus => r.value = Some(skew_bracket(x, y, Bracket::Minus)?.into()),
        AlgebraOp::Jacobi => {
            let j = jacobi_defect(x, y, z)?;
            r.value = Some(j.lhs.into());
            r.set("derived_form", Cplx::from(j.derived_form));
            r.set("quotient_form", Cplx::from(j.quotient_form));
        }
        AlgebraOp::Catalan => {
            let c = catalan(a.n)?;
            match u64::try_from(c) {
                Ok(v) => r.set("catalan", v),
                Err(_) => r.set("catalan", c.to_string()),
            }
        }
    }
    Ok(r)
}

fn goldbach(ctx: &Ctx, name: &str, a: &GoldbachArgs) -> Result<Report> {
    let table = sieve_with(a.n_max.max(2) as u64, &ctx.sieve_config())?;
    let cfg = ctx.count_config();
    let g = gk_series(&table, a.label, a.k, a.n_max)?;
    let counts = power_counts_with(&g, a.m, &cfg)?;
    let mut r = Report::new(name, ctx.params(None, a));
    let mut pass = None;
    if a.oracle {
        let slow = brute_force_counts(&table, a.label, a.k, a.m, a.n_max, &cfg)?;
        let mismatch = counts.counts.iter().zip(&slow.counts).position(|(x, y)| x != y);
        r.set("oracle_agrees", mismatch.is_none());
        r.set("first_mismatch", mismatch);
        pass = Some(mismatch.is_none());
    }
    if a.scan {
        let violations = goldbach_scan(&table, a.n_max)?;
        pass = Some(pass.unwrap_or(true) && violations.is_empty());
        r.set("violations", violations);
    }
    if a.probe {
        r.set("probe", majorization_probe(&g, a.m, &a.x)?);
    }
    r.pass = pass;
    let mut buf = Vec::new();
    counts.write_csv(&mut buf)?;
    r.table = Some(buf);
    r.set("counts", &counts.counts);
    Ok(r)
}

fn mellin(ctx: &mut Ctx, name: &str, a: &MellinArgs) -> Result<Report> {
    let s = ctx.s()?;
    let quad = QuadSpec {
        panels: a.panels,
        tol: a.quad_tol,
        max_depth: a.max_depth,
    };
    let out = mellin_residual(ctx.table(MELLIN_PRIME_LIMIT)?, a.label, a.k, s, &quad)?;
    let mut r = Report::new(name, ctx.params(Some(s), a));
    r.value = Some(out.integral.into());
    r.terms_used = Some(out.members);
    r.tail_bound = Some(out.quad_error);
    r.residual = Some(out.residual);
    r.set("series", Cplx::from(out.series));
    r.set("integral", Cplx::from(out.integral));
    r.set("quad_converged", out.converged);
    Ok(r)
}

fn scan(ctx: &mut Ctx, name: &str, a: &ScanArgs) -> Result<Report> {
    let seq = ctx.base(&a.seq)?;
    let g = GeneralFactor::new(a.g.clone())?;
    let table = convergence_scan(&seq, &g, &a.sigmas, &doubling_ladder(a.base, a.rungs))?;
    let mut r = Report::new(name, ctx.params(None, a));
    let verdicts: Vec<Value> = a
        .sigmas
        .iter()
        .map(|&s| json!({"sigma": s, "flag": table.verdict(s)}))
        .collect();
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    r.table = Some(buf);
    r.set("verdicts", verdicts);
    r.set("rows", &table.rows);
    Ok(r)
}
