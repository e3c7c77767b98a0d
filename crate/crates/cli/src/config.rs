//! `key=value` configuration files and the merged run settings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use kummer_core::bounds::parse_rational;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Settings shared by every subcommand after flags and the config file are
/// merged.
#[derive(Clone, Debug)]
pub struct CliConfig {
    pub a: Option<u64>,
    pub n: Option<u64>,
    pub precision_bits: u32,
    /// Enclosure width target `2^-tol_bits`.
    pub tol_bits: u32,
    pub search_bound: Option<u128>,
    pub k: Option<BigRational>,
    pub delta: Option<BigRational>,
    pub c1: Option<BigRational>,
    pub seed: u64,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
    /// Keys the generic settings do not consume, for the suite parameters.
    pub extra: BTreeMap<String, String>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            a: None,
            n: None,
            precision_bits: 128,
            tol_bits: 64,
            search_bound: None,
            k: None,
            delta: None,
            c1: None,
            seed: 0,
            output_format: Format::Text,
            output_path: None,
            extra: BTreeMap::new(),
        }
    }
}

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| UsageError(format!("{}: {}", path.display(), e.0)))
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, UsageError> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("line {}: expected key=value, got {line:?}", no + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn rational(key: &str, v: &str) -> Result<BigRational, UsageError> {
    parse_rational(v).ok_or_else(|| UsageError(format!("{key}: {v:?} is not a rational number")))
}

fn integer<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, UsageError> {
    v.trim().parse().map_err(|_| UsageError(format!("{key}: {v:?} is not a valid integer")))
}

/// Smallest `b` with `2^-b <= tol`, accepting `2^-b`, `p/q` and decimals.
pub fn parse_tol(v: &str) -> Result<u32, UsageError> {
    if let Some(bits) = v.trim().strip_prefix("2^-") {
        return integer("tol", bits);
    }
    let t = rational("tol", v)?;
    if t <= BigRational::from_integer(0.into()) {
        return Err(UsageError(format!("tol: {v:?} must be positive")));
    }
    let mut bits = 0u32;
    while BigRational::new(1.into(), BigInt::from(1) << bits) > t {
        bits += 1;
    }
    Ok(bits)
}

impl CliConfig {
    /// Applies one setting; unknown keys are kept for the suite parameters.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), UsageError> {
        match key {
            "a" => self.a = Some(integer(key, v)?),
            "N" | "n" => self.n = Some(integer(key, v)?),
            "precision_bits" | "prec" => self.precision_bits = integer(key, v)?,
            "tol" => self.tol_bits = parse_tol(v)?,
            "search_bound" | "bound" => self.search_bound = Some(integer(key, v)?),
            "k" => self.k = Some(rational(key, v)?),
            "delta" => self.delta = Some(rational(key, v)?),
            "c1" => self.c1 = Some(rational(key, v)?),
            "seed" => self.seed = integer(key, v)?,
            "output_format" | "format" => {
                self.output_format = <Format as clap::ValueEnum>::from_str(v, true)
                    .map_err(|_| UsageError(format!("format: {v:?} is not one of text, json, csv")))?
            }
            "output_path" | "output" => self.output_path = Some(PathBuf::from(v)),
            other => {
                self.extra.insert(other.to_string(), v.to_string());
            }
        }
        if self.precision_bits < 16 {
            return Err(UsageError("precision_bits must be at least 16".into()));
        }
        Ok(())
    }

    pub fn tol(&self) -> BigRational {
        BigRational::new(1.into(), BigInt::from(1) << self.tol_bits)
    }

    pub fn field(&self) -> Result<(u64, u64), UsageError> {
        match (self.a, self.n) {
            (Some(a), Some(n)) => Ok((a, n)),
            (None, _) => Err(UsageError("missing --a".into())),
            (_, None) => Err(UsageError("missing --N".into())),
        }
    }

    pub fn search_bound(&self) -> u128 {
        self.search_bound.unwrap_or(6)
    }

    /// Rejects settings meant for the suite parameters outside `verify`.
    pub fn no_extra(&self) -> Result<(), UsageError> {
        match self.extra.keys().next() {
            Some(k) => Err(UsageError(format!("unknown setting {k:?}"))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines() {
        let lines = parse_config("# run\na = 2\nN=3 # trailing\n\nfields=2:3,1:15\n").unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], ("fields".to_string(), "2:3,1:15".to_string()));
        assert!(parse_config("a 2").is_err());
        let mut c = CliConfig::default();
        for (k, v) in &lines {
            c.set(k, v).unwrap();
        }
        assert_eq!(c.field().unwrap(), (2, 3));
        assert_eq!(c.extra.len(), 1);
        assert!(c.no_extra().is_err());
    }

    #[test]
    fn tolerances() {
        assert_eq!(parse_tol("2^-64").unwrap(), 64);
        assert_eq!(parse_tol("1/1024").unwrap(), 10);
        assert_eq!(parse_tol("0.001").unwrap(), 10);
        assert!(parse_tol("0").is_err());
    }
}
