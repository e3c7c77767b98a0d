//! The comparison functions, the derived constants, and the randomized
//! verification suites.

mod algebraic;
mod basic;
mod functions;
mod params;
mod real;
mod report;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use functions::*;
pub use params::{parse_rational, SuiteParams, SUITES};
pub use real::extremal_split;
pub use report::{Failure, Interval, SuiteReport, TrialRecord, Verdict};

use crate::{Error, Result};

/// Runs `trials` trials of `suite` (per field or triple for the algebraic
/// suites), deterministically from `seed`.
pub fn check_lemma(suite: &str, params: &SuiteParams, trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new(suite, params.to_value(), seed);
    let run: fn(&SuiteParams, u64, &mut ChaCha8Rng, &mut SuiteReport) -> Result<()> = match suite {
        "measures" => algebraic::measures,
        "minrep" => algebraic::minrep,
        "lemma2.1" => |p, t, r, rep| algebraic::lemma21(p, t, r, rep, false),
        "lemma2.1-corrected" => |p, t, r, rep| algebraic::lemma21(p, t, r, rep, true),
        "lemma2.2" => algebraic::lemma22,
        "lemma3.1" => real::lemma31,
        "lemma3.2" => real::lemma32,
        "lemma3.3" => real::lemma33,
        "lemma3.4" => real::lemma34,
        "lemma3.5" => real::lemma35,
        "lemma3.6" => real::lemma36,
        "lemma4.1" => basic::lemma41,
        "lemma4.2" => basic::lemma42,
        "lemma4.3" => basic::lemma43,
        "thm4.4" => basic::thm44,
        "lemma5.2" => algebraic::lemma52,
        "thm1.1" => algebraic::thm11,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    run(params, trials, &mut rng, &mut report)?;
    Ok(report)
}

