//! Text rendering of enclosures, and writing the chosen output format.

use std::io::Write;

use kummer_core::numeric::{Dyadic, RealBall, Round};
use num_rational::BigRational;
use serde_json::Value;

use crate::config::{CliConfig, Format};
use crate::UsageError;

const DIGITS: u32 = 20;

/// A finished subcommand: its text and JSON forms, an optional CSV form and
/// the exit code.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
    pub code: u8,
}

impl Output {
    pub fn new(text: String, json: Value) -> Self {
        Output { text, json, csv: None, code: crate::EXIT_PASS }
    }

    pub fn render(&self, format: Format) -> Result<String, UsageError> {
        match format {
            Format::Text => Ok(self.text.clone()),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.csv.clone().ok_or_else(|| UsageError("CSV output is only available for verify".into())),
        }
    }

    pub fn emit(&self, cfg: &CliConfig) -> Result<(), UsageError> {
        let body = self.render(cfg.output_format)?;
        match &cfg.output_path {
            Some(path) => write_file(path, &body),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(body.as_bytes()).map_err(|e| UsageError(format!("cannot write output: {e}")))
            }
        }
    }
}

pub fn write_file(path: &std::path::Path, body: &str) -> Result<(), UsageError> {
    std::fs::write(path, body).map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))
}

/// `mid` alone when exact, else `mid (width w)`.
pub fn ball(b: &RealBall) -> String {
    if b.is_exact() {
        return b.mid().to_sci(DIGITS, Round::Down);
    }
    format!("{} (width {})", b.mid().to_sci(DIGITS, Round::Down), b.width().to_sci(3, Round::Up))
}

/// The exact value when `low == high`, else the midpoint with the width.
pub fn enclosure(low: &BigRational, high: &BigRational) -> String {
    if low == high {
        return low.to_string();
    }
    let mid = Dyadic::from_rational(&((low + high) / BigRational::from_integer(2.into())), 128, Round::Down);
    let width = Dyadic::from_rational(&(high - low), 64, Round::Up);
    format!("{} (width {})", mid.to_sci(DIGITS, Round::Down), width.to_sci(3, Round::Up))
}

pub fn interval_json(b: &RealBall) -> Value {
    serde_json::to_value(kummer_core::bounds::Interval::of(b)).expect("intervals serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_only_when_inexact() {
        assert_eq!(ball(&RealBall::from_int(3, 64)), "3e0");
        let third = RealBall::one(64).div(&RealBall::from_int(3, 64)).unwrap();
        assert!(ball(&third).contains("(width "));
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(enclosure(&q(1, 2), &q(1, 2)), "1/2");
        assert!(enclosure(&q(1, 3), &q(1, 2)).contains("width"));
    }
}
