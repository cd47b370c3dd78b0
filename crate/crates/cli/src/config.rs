use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use chromatic_core::algebra::is_prime;
use serde::Serialize;

/// A problem with the command line or configuration, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Inclusive internal-degree window, written `lo..hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i32,
    pub hi: i32,
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once("..")
            .ok_or_else(|| format!("expected `lo..hi`, found `{s}`"))?;
        let parse = |x: &str| x.trim().parse::<i32>().map_err(|e| format!("`{x}`: {e}"));
        Ok(Window {
            lo: parse(lo)?,
            hi: parse(hi.trim_start_matches('='))?,
        })
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Budgets {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bar_column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rewrite_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_terms: Option<usize>,
}

/// Everything a run depends on; echoed verbatim into the manifest.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    pub emit: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    pub budgets: Budgets,
    /// Command-specific settings (inputs, method, filters, ...).
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl RunConfig {
    pub fn new(p: Option<u32>, emit: &str) -> Self {
        RunConfig {
            p,
            emit: emit.to_string(),
            ..RunConfig::default()
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        let value = serde_json::to_value(value).expect("config values serialize");
        self.extra.insert(key.to_string(), value);
        self
    }

    /// `min_i` is 1 for derivations and 0 where `K(0)` makes sense.
    pub fn validate(&self, min_i: u32) -> anyhow::Result<()> {
        if let Some(p) = self.p {
            if p < 3 || !is_prime(p as u64) {
                return Err(usage(format!("--p {p} is not an odd prime")));
            }
        }
        if let (Some(i), Some(n)) = (self.i, self.n) {
            if i < min_i || i > n {
                return Err(usage(format!(
                    "need {min_i} <= i <= n, got i = {i}, n = {n}"
                )));
            }
        }
        if self.n == Some(0) {
            return Err(usage("need n >= 1"));
        }
        if self.m == Some(0) {
            return Err(usage("need m >= 1"));
        }
        if let Some(w) = self.window {
            if w.lo > w.hi {
                return Err(usage(format!("window {w} has its bounds out of order")));
            }
        }
        Ok(())
    }
}
