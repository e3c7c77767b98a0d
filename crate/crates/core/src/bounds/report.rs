//! Suite reports: per-trial verdicts, JSON and CSV output.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use crate::numeric::{Dyadic, RealBall, Round};
use crate::Result;

/// Significant digits of the decimal endpoints written to reports.
pub const REPORT_DIGITS: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Enclosures still overlap at the top precision, or a search gave up.
    Inconclusive,
    /// The hypothesis of the statement does not hold for this input.
    Vacuous,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Vacuous => "vacuous",
        }
    }
}

/// Outward-rounded decimal endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub low: String,
    pub high: String,
}

impl Interval {
    pub fn of(b: &RealBall) -> Self {
        Interval {
            low: b.lower().to_sci(REPORT_DIGITS, Round::Down),
            high: b.upper().to_sci(REPORT_DIGITS, Round::Up),
        }
    }

    pub fn exact(q: &BigRational) -> Self {
        let b = RealBall::from_rational(q, 128);
        if b.is_exact() {
            let s = b.mid().to_sci(REPORT_DIGITS, Round::Down);
            return Interval { low: s.clone(), high: s };
        }
        Self::of(&b)
    }

    /// Outward-rounded decimal form of the rational interval `[low, high]`.
    pub fn from_bounds(low: &BigRational, high: &BigRational) -> Self {
        let lo = Dyadic::from_rational(low, 128, Round::Down);
        let hi = Dyadic::from_rational(high, 128, Round::Up);
        Interval { low: lo.to_sci(REPORT_DIGITS, Round::Down), high: hi.to_sci(REPORT_DIGITS, Round::Up) }
    }

    pub fn empty() -> Self {
        Interval { low: String::new(), high: String::new() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub verdict: Verdict,
    pub inputs: Value,
    pub lhs: Interval,
    pub rhs: Interval,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub inputs: Value,
    pub lhs: Interval,
    pub rhs: Interval,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: Value,
    pub seed: u64,
    pub trials: u64,
    pub conclusive: u64,
    pub passes: u64,
    pub failures: Vec<Failure>,
    pub inconclusive: u64,
    pub vacuous: u64,
    /// Failures are findings about the statement rather than test failures.
    pub report_mode: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

impl SuiteReport {
    pub fn new(suite: &str, params: Value, seed: u64) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            params,
            seed,
            trials: 0,
            conclusive: 0,
            passes: 0,
            failures: Vec::new(),
            inconclusive: 0,
            vacuous: 0,
            report_mode: false,
            summary: BTreeMap::new(),
            notes: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, verdict: Verdict, inputs: Value, lhs: Interval, rhs: Interval, note: Option<String>) {
        let trial = self.trials;
        self.trials += 1;
        match verdict {
            Verdict::Pass => {
                self.conclusive += 1;
                self.passes += 1;
            }
            Verdict::Fail => {
                self.conclusive += 1;
                self.failures.push(Failure { inputs: inputs.clone(), lhs: lhs.clone(), rhs: rhs.clone() });
            }
            Verdict::Inconclusive => self.inconclusive += 1,
            Verdict::Vacuous => self.vacuous += 1,
        }
        self.records.push(TrialRecord { trial, verdict, inputs, lhs, rhs, note });
    }

    pub fn merge(&mut self, other: SuiteReport) {
        for r in other.records {
            self.push(r.verdict, r.inputs, r.lhs, r.rhs, r.note);
        }
        self.notes.extend(other.notes);
    }

    /// 0 when every trial passed, 1 on a conclusive failure of a checked
    /// statement, 3 when nothing failed but something stayed undecided.
    pub fn exit_code(&self) -> i32 {
        if !self.failures.is_empty() && !self.report_mode {
            1
        } else if self.inconclusive > 0 {
            3
        } else {
            0
        }
    }

    pub fn all_conclusive_pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| crate::Error::Internal(e.to_string()))
    }

    /// One row per trial, with a header.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| crate::Error::Internal(e.to_string());
        w.write_record(["trial", "verdict", "lhs_low", "lhs_high", "rhs_low", "rhs_high", "inputs", "note"])
            .map_err(io)?;
        for r in &self.records {
            w.write_record([
                r.trial.to_string().as_str(),
                r.verdict.as_str(),
                &r.lhs.low,
                &r.lhs.high,
                &r.rhs.low,
                &r.rhs.high,
                &r.inputs.to_string(),
                r.note.as_deref().unwrap_or(""),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| crate::Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| crate::Error::Internal(e.to_string()))
    }

    /// Short human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "suite {}: {} trials, {} conclusive, {} passed, {} failed, {} inconclusive, {} vacuous\n",
            self.suite,
            self.trials,
            self.conclusive,
            self.passes,
            self.failures.len(),
            self.inconclusive,
            self.vacuous
        );
        for (k, v) in &self.summary {
            s.push_str(&format!("  {k}: {v}\n"));
        }
        for n in &self.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
        s
    }
}

/// Result of comparing two sides across the precision ladder.
pub(crate) struct Comparison {
    pub verdict: Verdict,
    pub lhs: RealBall,
    pub rhs: RealBall,
}

/// Decides `lhs >= rhs` (or `lhs > rhs` when `strict`), escalating precision
/// while the enclosures overlap. `exact_equal` short-circuits ties that are
/// known symbolically.
pub(crate) fn compare_ge(
    strict: bool,
    exact_equal: bool,
    eval: impl Fn(u32) -> Option<(RealBall, RealBall)>,
) -> Comparison {
    let mut last = None;
    for &prec in &super::PREC_LADDER {
        let Some((l, r)) = eval(prec) else {
            break;
        };
        if exact_equal && !strict {
            return Comparison { verdict: Verdict::Pass, lhs: l, rhs: r };
        }
        let verdict = if r.lt(&l) || (!strict && r.le(&l)) {
            Some(Verdict::Pass)
        } else if l.lt(&r) || (strict && l.le(&r)) {
            Some(Verdict::Fail)
        } else {
            None
        };
        if let Some(v) = verdict {
            return Comparison { verdict: v, lhs: l, rhs: r };
        }
        last = Some((l, r));
    }
    let (lhs, rhs) = last.unwrap_or_else(|| (RealBall::zero(64), RealBall::zero(64)));
    Comparison { verdict: Verdict::Inconclusive, lhs, rhs }
}

/// Whether `sum c_i g(x_i) - sum d_j g(y_j)` vanishes identically as a formal
/// combination of values of `g`, with `g(0) = 0` dropped.
pub(crate) fn formally_equal(lhs: &[(BigRational, BigRational)], rhs: &[(BigRational, BigRational)]) -> bool {
    use num_traits::Zero;
    let mut acc: BTreeMap<BigRational, BigRational> = BTreeMap::new();
    for (c, x) in lhs {
        if !x.is_zero() {
            *acc.entry(x.clone()).or_insert_with(BigRational::zero) += c;
        }
    }
    for (c, x) in rhs {
        if !x.is_zero() {
            *acc.entry(x.clone()).or_insert_with(BigRational::zero) -= c;
        }
    }
    acc.values().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn comparisons() {
        let c = compare_ge(false, false, |p| Some((RealBall::from_int(2, p), RealBall::one(p))));
        assert_eq!(c.verdict, Verdict::Pass);
        let c = compare_ge(false, false, |p| Some((RealBall::one(p), RealBall::from_int(2, p))));
        assert_eq!(c.verdict, Verdict::Fail);
        let tie = |p| Some((RealBall::one(p), RealBall::one(p)));
        assert_eq!(compare_ge(false, false, tie).verdict, Verdict::Pass);
        assert_eq!(compare_ge(true, false, tie).verdict, Verdict::Fail);
        let third = |p| {
            let t = RealBall::one(p).div(&RealBall::from_int(3, p)).unwrap();
            Some((t.clone(), t))
        };
        assert_eq!(compare_ge(false, false, third).verdict, Verdict::Inconclusive);
        assert_eq!(compare_ge(false, true, third).verdict, Verdict::Pass);
    }

    #[test]
    fn formal_sums() {
        let l = vec![(rat(1), rat(3)), (rat(1), rat(0))];
        let r = vec![(rat(1), rat(3))];
        assert!(formally_equal(&l, &r));
        assert!(!formally_equal(&[(rat(2), ratio(1, 2))], &[(rat(1), rat(1))]));
    }

    #[test]
    fn report_outputs() {
        let mut r = SuiteReport::new("demo", serde_json::json!({"k": "1"}), 7);
        r.push(Verdict::Pass, serde_json::json!([1, 2]), Interval::exact(&rat(3)), Interval::exact(&ratio(1, 3)), None);
        r.push(Verdict::Fail, serde_json::json!([0]), Interval::exact(&rat(0)), Interval::exact(&rat(1)), None);
        assert_eq!(r.exit_code(), 1);
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("trial,verdict,lhs_low"));
        assert_eq!(csv.lines().count(), 3);
        let json = r.to_json().unwrap();
        assert!(json.contains("\"failures\""));
        assert_eq!(Interval::exact(&rat(3)).low, "3e0");
        let third = Interval::exact(&ratio(1, 3));
        assert!(third.low < third.high);
    }
}
