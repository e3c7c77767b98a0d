//! One function per subcommand, each producing an [`Output`].

use std::path::Path;

use kummer_core::algebra::{make_algebra, parse_element, Algebra, AlgebraElement};
use kummer_core::bounds::{check_lemma, default_delta, derive_constants, SuiteParams};
use kummer_core::measures::{delta as tower_delta, embed_value, measure as measure_of, TowerStep};
use kummer_core::representations::{decompose_step, min_rep_count};
use kummer_core::Error;
use num_rational::BigRational;
use serde_json::json;

use crate::config::CliConfig;
use crate::render::{ball, enclosure, interval_json, write_file, Output};
use crate::{UsageError, EXIT_FAIL, EXIT_INCONCLUSIVE};

/// Core errors caused by the input become usage errors; the rest end the run
/// with a failure or inconclusive exit code.
fn core_error(e: Error) -> Result<Output, UsageError> {
    let code = match e {
        Error::NonConvergence { .. } | Error::NodeLimit(_) => EXIT_INCONCLUSIVE,
        Error::Parse { .. }
        | Error::InvalidParameter(_)
        | Error::PerfectPowerRadicand { .. }
        | Error::InvalidStep(_)
        | Error::UnknownSuite(_)
        | Error::NotADivisor { .. }
        | Error::Domain(_) => return Err(UsageError(e.to_string())),
        _ => EXIT_FAIL,
    };
    let mut out = Output::new(format!("error: {e}\n"), json!({ "error": e.to_string() }));
    out.code = code;
    Ok(out)
}

macro_rules! try_core {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return core_error(e),
        }
    };
}

fn algebra(cfg: &CliConfig) -> Result<Algebra, UsageError> {
    cfg.no_extra()?;
    let (a, n) = cfg.field()?;
    make_algebra(a, n).map_err(|e| UsageError(e.to_string()))
}

/// Parses `expr`, pointing at the offending column on failure.
fn element(alg: &Algebra, expr: &str) -> Result<AlgebraElement, UsageError> {
    parse_element(alg, expr).map_err(|e| match e {
        Error::Parse { pos, msg } => {
            UsageError(format!("parse error at position {pos}: {msg}\n  {expr}\n  {}^", " ".repeat(pos)))
        }
        other => UsageError(other.to_string()),
    })
}

fn coeff_strings(e: &AlgebraElement) -> Vec<String> {
    e.coeffs().iter().map(|c| c.to_string()).collect()
}

pub fn field(cfg: &CliConfig) -> Result<Output, UsageError> {
    let alg = algebra(cfg)?;
    let factors: Vec<String> = alg
        .factorization()
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect();
    let status = alg.field_status();
    let text = format!(
        "Q_{}({}): dim {}, phi(N) = {}, radical degree {}, N = {}, status {}\n",
        alg.a(),
        alg.n(),
        alg.dim(),
        alg.phi(),
        alg.radical_degree(),
        if factors.is_empty() { "1".to_string() } else { factors.join(" * ") },
        status
    );
    let json = json!({
        "a": alg.a(),
        "N": alg.n(),
        "dim": alg.dim(),
        "phi": alg.phi(),
        "radical_degree": alg.radical_degree(),
        "factorization": alg.factorization(),
        "field_status": status,
    });
    Ok(Output::new(text, json))
}

pub fn eval(cfg: &CliConfig, expr: &str) -> Result<Output, UsageError> {
    let alg = algebra(cfg)?;
    let e = element(&alg, expr)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for emb in alg.embeddings() {
        let v = embed_value(&e, &emb, cfg.precision_bits);
        text.push_str(&format!("(l={}, k={}): {} + {} i\n", emb.l, emb.k, ball(&v.re), ball(&v.im)));
        rows.push(json!({ "l": emb.l, "k": emb.k, "re": interval_json(&v.re), "im": interval_json(&v.im) }));
    }
    Ok(Output::new(text, json!({ "a": alg.a(), "N": alg.n(), "precision_bits": cfg.precision_bits, "values": rows })))
}

pub fn measure(cfg: &CliConfig, expr: &str) -> Result<Output, UsageError> {
    let alg = algebra(cfg)?;
    let e = element(&alg, expr)?;
    let m = try_core!(measure_of(&e, &cfg.tol()));
    let text = format!(
        "house: {}\nmean square: {}\nprecision: {} bits\nfield status: {}\n",
        enclosure(m.house_low(), m.house_high()),
        enclosure(m.msq_low(), m.msq_high()),
        m.precision_bits,
        m.field_status
    );
    Ok(Output::new(text, serde_json::to_value(&m).expect("reports serialize")))
}

pub fn delta(cfg: &CliConfig) -> Result<Output, UsageError> {
    let alg = algebra(cfg)?;
    let d = try_core!(tower_delta(&alg));
    Ok(Output::new(format!("{d}\n"), json!({ "a": alg.a(), "N": alg.n(), "delta": d.to_string() })))
}

pub fn minrep(cfg: &CliConfig, expr: &str) -> Result<Output, UsageError> {
    let alg = algebra(cfg)?;
    let e = element(&alg, expr)?;
    let bound = cfg.search_bound();
    match min_rep_count(&e, bound) {
        Ok((count, rep)) => {
            let witness = serde_json::to_value(&rep).expect("witnesses serialize");
            let text = format!("count: {count}\nwitness: {witness}\n");
            Ok(Output::new(text, json!({ "count": count.to_string(), "witness": witness })))
        }
        Err(Error::Exhausted(b)) => {
            let text = format!("exhausted: no representation with at most {b} terms\n");
            Ok(Output::new(text, json!({ "exhausted": b.to_string() })))
        }
        Err(e) => core_error(e),
    }
}

pub fn decompose(cfg: &CliConfig, expr: &str, p: u64) -> Result<Output, UsageError> {
    let alg = algebra(cfg)?;
    let e = element(&alg, expr)?;
    let step = try_core!(TowerStep::new(p, alg.n()));
    let d = try_core!(decompose_step(&e, &step));
    let mut text = format!("step {step} ({:?})\nscale: {}\n", step.case, d.scale);
    let mut coeffs = serde_json::Map::new();
    for ((l, k), c) in &d.coefficients {
        text.push_str(&format!("  ({l}, {k}): {c}\n"));
        coeffs.insert(format!("{l},{k}"), json!(coeff_strings(c)));
    }
    text.push_str(&format!("all coefficients integral: {}\n", d.all_integral()));
    let json = json!({
        "step": step,
        "scale": d.scale.to_string(),
        "coefficients": coeffs,
        "all_integral": d.all_integral(),
    });
    Ok(Output::new(text, json))
}

fn suite_params(cfg: &CliConfig, suite: &str, set: &[String]) -> Result<SuiteParams, UsageError> {
    let mut p = SuiteParams::defaults(suite).map_err(|e| UsageError(e.to_string()))?;
    let mut apply = |k: &str, v: &str| p.set(k, v).map_err(|e| UsageError(e.to_string()));
    apply("tol_bits", &cfg.tol_bits.to_string())?;
    for (key, value) in [("k", &cfg.k), ("delta", &cfg.delta), ("c1", &cfg.c1)] {
        if let Some(v) = value {
            apply(key, &v.to_string())?;
        }
    }
    if let Some(b) = cfg.search_bound {
        apply("bound", &b.to_string())?;
    }
    if let (Some(a), Some(n)) = (cfg.a, cfg.n) {
        apply("fields", &format!("{a}:{n}"))?;
    }
    for (k, v) in &cfg.extra {
        apply(k, v)?;
    }
    for kv in set {
        let (k, v) = kv.split_once('=').ok_or_else(|| UsageError(format!("--set expects key=value, got {kv:?}")))?;
        apply(k.trim(), v.trim())?;
    }
    Ok(p)
}

pub fn verify(
    cfg: &CliConfig,
    suite: &str,
    trials: u64,
    set: &[String],
    json_path: Option<&Path>,
    csv_path: Option<&Path>,
) -> Result<Output, UsageError> {
    let params = suite_params(cfg, suite, set)?;
    let report = try_core!(check_lemma(suite, &params, trials, cfg.seed));
    let json = report.to_json().map_err(|e| UsageError(e.to_string()))?;
    let csv = report.to_csv().map_err(|e| UsageError(e.to_string()))?;
    if let Some(path) = json_path {
        write_file(path, &format!("{json}\n"))?;
    }
    if let Some(path) = csv_path {
        write_file(path, &csv)?;
    }
    let mut out = Output::new(report.to_text(), serde_json::from_str(&json).expect("report JSON parses"));
    out.csv = Some(csv);
    out.code = report.exit_code() as u8;
    Ok(out)
}

pub fn constants(cfg: &CliConfig, cap: u64) -> Result<Output, UsageError> {
    cfg.no_extra()?;
    let k = cfg.k.clone().unwrap_or_else(|| BigRational::from_integer(1.into()));
    let delta = match cfg.delta.clone().or_else(|| default_delta(&k)) {
        Some(d) => d,
        None => return Err(UsageError(format!("k = {k} leaves no admissible delta; k must exceed log 2"))),
    };
    let mut c = try_core!(derive_constants(&k, &delta, cap));
    if let Some(c1) = &cfg.c1 {
        c.c1 = c1.clone();
        c.c2 = kummer_core::bounds::c2_for(&k, c1);
    }
    let threshold = |t: &kummer_core::bounds::Threshold| match t.value() {
        Some(v) => format!("{v} (certified up to {cap})"),
        None => format!("not certified on [1, {cap}]"),
    };
    let text = format!(
        "k: {}\ndelta: {}\nc1: {}\nc2: {}\nc3: {}\nc4: {}\n",
        c.k,
        c.delta,
        c.c1,
        c.c2,
        threshold(&c.c3),
        threshold(&c.c4)
    );
    let mut out = Output::new(text, serde_json::to_value(&c).expect("configs serialize"));
    if c.c3.value().is_none() || c.c4.value().is_none() {
        out.code = EXIT_INCONCLUSIVE;
    }
    Ok(out)
}
