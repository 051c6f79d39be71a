use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::args::{finite, Common, Format, TailArg};
use crate::error::{Error, Result};
use crate::primes::DEFAULT_MAX_MEMORY;
use crate::series::{ComplexPoint, TailMode, TruncationPolicy};

const KEYS: [&str; 8] = [
    "s-re",
    "s-im",
    "max-terms",
    "target-tail",
    "tail",
    "prime-limit",
    "format",
    "output",
];

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    /// `None` when neither the flags nor the config file set `s-re`.
    pub s_re: Option<f64>,
    pub s_im: f64,
    pub policy: TruncationPolicy,
    pub prime_limit: Option<u64>,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub max_memory: usize,
}

fn cfg_err(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key}: {msg}"))
}

/// Flat `key = value` lines; `#` starts a comment.
pub(crate) fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::Config(format!("line {}: unknown key {k:?}", no + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

fn pick<T>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key).map(|v| parse(v)).transpose(),
    }
}

fn float(key: &'static str) -> impl Fn(&str) -> Result<f64> {
    move |v| finite(v).map_err(|e| cfg_err(key, e))
}

fn integer<T: std::str::FromStr>(key: &'static str) -> impl Fn(&str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    move |v| v.parse().map_err(|e| cfg_err(key, e))
}

fn tail(v: &str) -> Result<TailArg> {
    match v {
        "truncate" => Ok(TailArg::Truncate),
        "complete" => Ok(TailArg::Complete),
        _ => Err(cfg_err("tail", format!("{v:?} is not truncate or complete"))),
    }
}

fn format(v: &str) -> Result<Format> {
    match v {
        "json" => Ok(Format::Json),
        "csv" => Ok(Format::Csv),
        _ => Err(cfg_err("format", format!("{v:?} is not json or csv"))),
    }
}

impl Settings {
    /// Flags over config file over defaults. `max_memory` is the raw value of
    /// `EULERLAB_MAX_MEMORY`, in bytes.
    pub fn resolve(common: &Common, max_memory: Option<&str>) -> Result<Self> {
        let file = match &common.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        let s_re = pick(common.s_re, &file, "s-re", float("s-re"))?;
        let s_im = pick(common.s_im, &file, "s-im", float("s-im"))?.unwrap_or(0.0);
        let defaults = TruncationPolicy::default();
        let max_terms = pick(common.max_terms, &file, "max-terms", integer("max-terms"))?.unwrap_or(defaults.max_terms);
        let target = pick(common.target_tail, &file, "target-tail", float("target-tail"))?.unwrap_or(defaults.target_tail);
        let tail_mode = match pick(common.tail, &file, "tail", tail)? {
            Some(TailArg::Truncate) => TailMode::Truncate,
            Some(TailArg::Complete) | None => TailMode::Complete,
        };
        let policy = TruncationPolicy::new(max_terms, target)
            .map_err(|e| Error::Config(e.to_string()))?
            .with_tail(tail_mode);
        let prime_limit = pick(common.prime_limit, &file, "prime-limit", integer("prime-limit"))?;
        let format = pick(common.format, &file, "format", format)?.unwrap_or_default();
        let output = pick(common.output.clone(), &file, "output", |v| Ok(PathBuf::from(v)))?;
        let max_memory = match max_memory {
            Some(v) => v
                .trim()
                .parse()
                .map_err(|e| cfg_err("EULERLAB_MAX_MEMORY", e))?,
            None => DEFAULT_MAX_MEMORY,
        };
        Ok(Self {
            s_re,
            s_im,
            policy,
            prime_limit,
            format,
            output,
            max_memory,
        })
    }

    /// `s`, with `default_re` standing in for an unset real part.
    pub fn s_or(&self, default_re: f64) -> Result<ComplexPoint> {
        ComplexPoint::new(self.s_re.unwrap_or(default_re), self.s_im)
    }
}
