//! Flat `key = value` configuration files.
//!
//! Precedence: command-line flags, then the config file, then (for the
//! budget only) the `SPARSECOL_BUDGET` environment variable, then defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

pub const BUDGET_ENV: &str = "SPARSECOL_BUDGET";

const KEYS: &[&str] = &[
    "budget",
    "enumeration_budget",
    "subset_dp_max_n",
    "subset_dp_max_bytes",
    "jobs",
    "format",
    "seed",
    "trials",
    "ell",
    "timings",
];

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                bail!("line {}: unknown key '{k}'", i + 1);
            }
            if values.insert(k.to_string(), v.trim().to_string()).is_some() {
                bail!("line {}: duplicate key '{k}'", i + 1);
            }
        }
        Ok(Self { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("config key {key}: {e}")))
            .transpose()
    }

    /// `flag`, else the config value, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

/// Node budget for the backtracking counter.
pub fn budget(flag: Option<u64>, config: &Config) -> Result<Option<u64>> {
    if let Some(b) = config.pick(flag, "budget")? {
        return Ok(Some(b));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => Ok(Some(
            v.trim()
                .parse()
                .with_context(|| format!("{BUDGET_ENV}={v}"))?,
        )),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let c = Config::parse("# comment\nbudget = 10\nformat=csv\n").unwrap();
        assert_eq!(c.get::<u64>("budget").unwrap(), Some(10));
        assert_eq!(c.pick(Some(3u64), "budget").unwrap(), Some(3));
        assert_eq!(c.get::<String>("format").unwrap().as_deref(), Some("csv"));
        assert!(Config::parse("colour = 3\n").is_err());
        assert!(Config::parse("budget 3\n").is_err());
        assert!(Config::parse("seed = 1\nseed = 2\n").is_err());
    }
}
