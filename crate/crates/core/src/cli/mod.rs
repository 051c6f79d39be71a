//! Batch command-line front-end.
//!
//! Every command produces one report, JSON by default and CSV for the
//! tabular ones. Reports carry a `runtime_ms` field; everything else is a
//! pure function of the arguments.

mod args;
mod catalog;
mod commands;
mod config;

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub use args::{
    AlgebraArgs, AlgebraOp, Cli, Command, Common, DirichletMethod, EvalDirichletArgs, EvalProductArgs, Format,
    GoldbachArgs, IdentityArgs, MellinArgs, PrimeZetaArgs, PrimeZetaMethod, PrimesArgs, ProductForm, ScanArgs,
    SeqSpec, SplitArgs, SplitOp, TailArg,
};
pub use catalog::{list_identities, IdentityName, IdentitySpec, REGISTRY};
pub use config::Settings;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// A check ran and its residual exceeded the tolerance.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Invalid arguments, configuration or input outside an operation's domain.
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// `{re, im}` on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// One run's output.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub value: Option<Cplx>,
    pub terms_used: Option<usize>,
    pub tail_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    /// Command-specific fields.
    #[serde(flatten)]
    pub extra: Map<String, Value>,
    pub runtime_ms: f64,
    #[serde(skip)]
    pub table: Option<Vec<u8>>,
}

impl Report {
    pub(crate) fn new(command: &str, params: Value) -> Self {
        Self {
            command: command.to_string(),
            params,
            value: None,
            terms_used: None,
            tail_bound: None,
            residual: None,
            pass: None,
            extra: Map::new(),
            runtime_ms: 0.0,
            table: None,
        }
    }

    pub(crate) fn with_eval(mut self, r: &crate::series::EvalReport) -> Self {
        self.value = Some(r.value.into());
        self.terms_used = Some(r.terms_used);
        self.tail_bound = Some(r.tail_bound);
        self
    }

    pub(crate) fn set(&mut self, key: &str, v: impl Serialize) {
        self.extra.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    /// Serialized report in the requested format.
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => match &self.table {
                Some(t) => String::from_utf8(t.clone()).map_err(|e| Error::Io(e.to_string())),
                None => self.scalar_csv(),
            },
        }
    }

    fn scalar_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        let opt = |x: Option<String>| x.unwrap_or_default();
        w.write_record(["command", "re", "im", "terms_used", "tail_bound", "residual", "pass"]).map_err(io)?;
        w.write_record([
            self.command.clone(),
            opt(self.value.map(|v| format!("{:e}", v.re))),
            opt(self.value.map(|v| format!("{:e}", v.im))),
            opt(self.terms_used.map(|v| v.to_string())),
            opt(self.tail_bound.map(|v| format!("{v:e}"))),
            opt(self.residual.map(|v| format!("{v:e}"))),
            opt(self.pass.map(|v| v.to_string())),
        ])
        .map_err(io)?;
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        _ => EXIT_CONFIG,
    }
}

/// Resolves settings and runs the command, without writing anything.
pub fn execute(cli: &Cli) -> Result<(Report, Settings)> {
    let settings = Settings::resolve(&cli.common, std::env::var("EULERLAB_MAX_MEMORY").ok().as_deref())?;
    let start = Instant::now();
    let mut report = commands::dispatch(&cli.command, &settings)?;
    report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((report, settings))
}

/// Runs the command, writes the report to the output path or `out`, and
/// returns the exit status. Errors go to stderr.
pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    let result = execute(cli).and_then(|(report, settings)| {
        let text = report.render(settings.format)?;
        match &settings.output {
            Some(path) => std::fs::write(path, text)?,
            None => out.write_all(text.as_bytes())?,
        }
        Ok(report.pass)
    });
    match result {
        Ok(Some(false)) => EXIT_CHECK_FAILED,
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("eulerlab: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs them, capturing the
/// report. Parse errors and help text come back with clap's exit status.
pub fn run_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    match Cli::try_parse_from(args) {
        Ok(cli) => {
            let mut buf = Vec::new();
            let code = run(&cli, &mut buf);
            (code, String::from_utf8_lossy(&buf).into_owned())
        }
        Err(e) => (e.exit_code(), e.to_string()),
    }
}
