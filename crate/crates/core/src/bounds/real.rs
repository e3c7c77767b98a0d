//! Suites for the inequalities satisfied by `f` and `g`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::report::{compare_ge, formally_equal, Comparison};
use super::{
    derive_constants, f_ball, g_ball, lemma36_first, loglog_shifted, BoundConfig, Interval, SuiteParams, SuiteReport,
    Threshold, Verdict,
};
use crate::numeric::{exp, ln, RealBall};
use crate::Result;

fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn ball(x: &BigRational, prec: u32) -> RealBall {
    RealBall::from_rational(x, prec)
}

fn g(x: &BigRational, cfg: &BoundConfig, prec: u32) -> RealBall {
    g_ball(&ball(x, prec), &cfg.k, &cfg.c1, prec)
}

/// `sum c_i g(x_i)`.
fn g_sum(terms: &[(BigRational, BigRational)], cfg: &BoundConfig, prec: u32) -> RealBall {
    terms
        .iter()
        .fold(RealBall::zero(prec), |acc, (c, x)| acc.add(&ball(c, prec).mul(&g(x, cfg, prec))))
}

/// Integer spread over several orders of magnitude, at most `max`.
fn spread_int(rng: &mut ChaCha8Rng, max: u64) -> u64 {
    let digits = (max.max(1) as f64).log10().ceil() as u32;
    let top = 10u64.saturating_pow(rng.gen_range(0..=digits)).min(max);
    rng.gen_range(0..=top)
}

/// Nonnegative rational with denominator at most 8 and value at most `max`.
fn spread_rational(rng: &mut ChaCha8Rng, max: u64) -> BigRational {
    let d: u64 = rng.gen_range(1..=8);
    let n = spread_int(rng, max);
    let extra: u64 = if n < max { rng.gen_range(0..d) } else { 0 };
    BigRational::new(q(n).numer() * d + extra, d.into())
}

fn qs(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

fn push(report: &mut SuiteReport, c: Comparison, inputs: Value, note: Option<String>) {
    report.push(c.verdict, inputs, Interval::of(&c.lhs), Interval::of(&c.rhs), note);
}

/// The worst of several verdicts on one trial.
fn combine(vs: &[Verdict]) -> Verdict {
    if vs.contains(&Verdict::Fail) {
        Verdict::Fail
    } else if vs.contains(&Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

/// Jensen: `(1/nu) sum g(a_r) <= g((1/nu) sum a_r)`.
pub(super) fn lemma31(p: &SuiteParams, trials: u64, rng: &mut ChaCha8Rng, report: &mut SuiteReport) -> Result<()> {
    let cfg = p.config()?;
    for _ in 0..trials {
        let nu = rng.gen_range(1..=p.max_len);
        let xs: Vec<BigRational> = (0..nu).map(|_| spread_rational(rng, p.max_int)).collect();
        let w = BigRational::new(1.into(), (nu as u64).into());
        let mean = xs.iter().fold(BigRational::zero(), |a, x| a + x) * &w;
        let lhs_terms = vec![(BigRational::one(), mean.clone())];
        let rhs_terms: Vec<_> = xs.iter().map(|x| (w.clone(), x.clone())).collect();
        let tie = formally_equal(&lhs_terms, &rhs_terms);
        let c = compare_ge(false, tie, |prec| Some((g_sum(&lhs_terms, &cfg, prec), g_sum(&rhs_terms, &cfg, prec))));
        push(report, c, json!({ "a": xs.iter().map(qs).collect::<Vec<_>>() }), None);
    }
    Ok(())
}

/// `u` and `sigma` of the extremal concave sum bound.
pub fn extremal_split(lambda: &BigRational, mu: &BigRational, nu: u64, a: &BigRational) -> (BigInt, BigRational) {
    let nu_q = q(nu);
    let u = ((mu * &nu_q - a) / (mu - lambda)).floor().to_integer();
    let uq = q(u.clone());
    let sigma = a - &uq * lambda - (&nu_q - &uq - BigRational::one()) * mu;
    (u, sigma)
}

/// `sum g(a_r) >= u g(lambda) + (nu - u - 1) g(mu) + g(sigma)` for
/// `lambda <= a_r <= mu` and `sum a_r >= a`.
pub(super) fn lemma32(p: &SuiteParams, trials: u64, rng: &mut ChaCha8Rng, report: &mut SuiteReport) -> Result<()> {
    let cfg = p.config()?;
    for _ in 0..trials {
        let nu = rng.gen_range(1..=p.max_len) as u64;
        let mut lambda = spread_rational(rng, p.max_int);
        let mut mu = spread_rational(rng, p.max_int);
        if lambda == mu {
            mu += BigRational::one();
        }
        if mu < lambda {
            std::mem::swap(&mut lambda, &mut mu);
        }
        let width = &mu - &lambda;
        let xs: Vec<BigRational> = (0..nu)
            .map(|_| match rng.gen_range(0..4) {
                0 => lambda.clone(),
                1 => mu.clone(),
                _ => &lambda + &width * BigRational::new(rng.gen_range(0..=64).into(), 64.into()),
            })
            .collect();
        let total = xs.iter().fold(BigRational::zero(), |acc, x| acc + x);
        let frac = BigRational::new(rng.gen_range(1..=64).into(), 64.into());
        let a = if total.is_zero() { BigRational::zero() } else { &total * frac };
        let inputs = json!({
            "lambda": qs(&lambda), "mu": qs(&mu), "a": qs(&a),
            "values": xs.iter().map(qs).collect::<Vec<_>>(),
        });
        if a.is_zero() {
            report.push(Verdict::Vacuous, inputs, Interval::empty(), Interval::empty(), Some("a must be positive".into()));
            continue;
        }
        let (u, sigma) = extremal_split(&lambda, &mu, nu, &a);
        let uq = q(u.clone());
        let lhs_terms: Vec<_> = xs.iter().map(|x| (BigRational::one(), x.clone())).collect();
        let rhs_terms = vec![
            (uq.clone(), lambda.clone()),
            (q(nu) - &uq - BigRational::one(), mu.clone()),
            (BigRational::one(), sigma.clone()),
        ];
        let tie = formally_equal(&lhs_terms, &rhs_terms);
        let c = compare_ge(false, tie, |prec| Some((g_sum(&lhs_terms, &cfg, prec), g_sum(&rhs_terms, &cfg, prec))));
        let note = format!("u={u} sigma={sigma}");
        push(report, c, inputs, Some(note));
    }
    Ok(())
}

/// `0 < log f(t) - log g(t) < c1 k / (t log log t)` for integers `t` in
/// `[c1, 10 c1]`.
pub(super) fn lemma33(p: &SuiteParams, trials: u64, rng: &mut ChaCha8Rng, report: &mut SuiteReport) -> Result<()> {
    let cfg = p.config()?;
    let lo = cfg.c1.ceil().to_integer().to_u64().unwrap_or(u64::MAX);
    let hi = lo.saturating_mul(10);
    for _ in 0..trials {
        let t = rng.gen_range(lo..=hi);
        let tq = q(t);
        let sides = |prec: u32| -> Option<(RealBall, RealBall)> {
            let tb = RealBall::from_int(t, prec);
            let log_f = ln(&f_ball(&tq, &cfg.k, prec).ok()?)?;
            let log_g = ln(&g(&tq, &cfg, prec))?;
            let diff = log_f.sub(&log_g);
            let bound = ball(&(&cfg.c1 * &cfg.k), prec).div(&tb.mul(&ln(&ln(&tb)?)?))?;
            Some((diff, bound))
        };
        let positive = compare_ge(true, false, |prec| sides(prec).map(|(d, _)| (d, RealBall::zero(prec))));
        let below = compare_ge(true, false, |prec| sides(prec).map(|(d, b)| (b, d)));
        let verdict = combine(&[positive.verdict, below.verdict]);
        let inputs = json!({ "t": t });
        report.push(verdict, inputs, Interval::of(&below.rhs), Interval::of(&below.lhs), None);
    }
    Ok(())
}

/// Superadditivity, and its strengthened form for `1 <= t <= s`.
pub(super) fn lemma34(p: &SuiteParams, trials: u64, rng: &mut ChaCha8Rng, report: &mut SuiteReport) -> Result<()> {
    let cfg = p.config()?;
    for _ in 0..trials {
        let a = spread_int(rng, p.max_int);
        let b = spread_int(rng, p.max_int);
        let (s, t) = (q(a.max(b)), q(a.min(b)));
        let sum = &s + &t;
        let lhs_terms = vec![(BigRational::one(), s.clone()), (BigRational::one(), t.clone())];
        let rhs_terms = vec![(BigRational::one(), sum.clone())];
        let tie = formally_equal(&lhs_terms, &rhs_terms);
        let plain = compare_ge(false, tie, |prec| Some((g_sum(&lhs_terms, &cfg, prec), g_sum(&rhs_terms, &cfg, prec))));
        let inputs = json!({ "s": a.max(b), "t": a.min(b) });
        if t < BigRational::one() {
            push(report, plain, inputs, None);
            continue;
        }
        let strong = compare_ge(false, false, |prec| {
            let gt = g(&t, &cfg, prec);
            let extra = ball(&cfg.c2, prec).mul(&gt).div(&loglog_shifted(&ball(&t, prec), &cfg.c1, prec))?;
            Some((g_sum(&lhs_terms, &cfg, prec), g_sum(&rhs_terms, &cfg, prec).add(&extra)))
        });
        let verdict = combine(&[plain.verdict, strong.verdict]);
        report.push(verdict, inputs, Interval::of(&strong.lhs), Interval::of(&strong.rhs), None);
    }
    Ok(())
}

/// `sum g(a_r) >= g(sum a_r)` for nonnegative integers.
pub(super) fn lemma35(p: &SuiteParams, trials: u64, rng: &mut ChaCha8Rng, report: &mut SuiteReport) -> Result<()> {
    let cfg = p.config()?;
    for _ in 0..trials {
        let nu = rng.gen_range(1..=p.max_len);
        let xs: Vec<u64> = (0..nu).map(|_| spread_int(rng, p.max_int)).collect();
        let lhs_terms: Vec<_> = xs.iter().map(|&x| (BigRational::one(), q(x))).collect();
        let rhs_terms = vec![(BigRational::one(), q(xs.iter().sum::<u64>()))];
        let tie = formally_equal(&lhs_terms, &rhs_terms);
        let c = compare_ge(false, tie, |prec| Some((g_sum(&lhs_terms, &cfg, prec), g_sum(&rhs_terms, &cfg, prec))));
        push(report, c, json!({ "a": xs }), None);
    }
    Ok(())
}

/// `g(s) + g(t) >= g(u) + g(u / log u)` with `u = s + t`.
fn lemma36_second(s: u64, t: u64, cfg: &BoundConfig) -> Comparison {
    let u = s + t;
    compare_ge(false, false, |prec| {
        let ub = RealBall::from_int(u, prec);
        let lhs = g(&q(s), cfg, prec).add(&g(&q(t), cfg, prec));
        let rhs = g_ball(&ub, &cfg.k, &cfg.c1, prec).add(&g_ball(&ub.div(&ln(&ub)?)?, &cfg.k, &cfg.c1, prec));
        Some((lhs, rhs))
    })
}

/// Whether `t >= u (log u)^(delta - 1)`, `u = s + t`.
fn second_hypothesis(s: u64, t: u64, cfg: &BoundConfig) -> Option<bool> {
    super::decide_le(|prec| {
        let ub = RealBall::from_int(s + t, prec);
        let power = exp(&ball(&(&cfg.delta - BigRational::one()), prec).mul(&ln(&ln(&ub)?)?));
        Some((ub.mul(&power), RealBall::from_int(t, prec)))
    })
}

/// The three displays of the comparison lemma, one per trial in turn, on the
/// ranges certified by [`derive_constants`]. Trials whose threshold could not
/// be certified up to the cap are vacuous.
pub(super) fn lemma36(
    p: &SuiteParams,
    trials: u64,
    rng: &mut ChaCha8Rng,
    report: &mut SuiteReport,
) -> Result<()> {
    let base = p.config()?;
    let mut cfg = derive_constants(&base.k, &base.delta, p.search_cap)?;
    cfg.c1 = base.c1.clone();
    cfg.c2 = base.c2.clone();
    report.summary.insert("c3".into(), serde_json::to_value(&cfg.c3).expect("serializes"));
    report.summary.insert("c4".into(), serde_json::to_value(&cfg.c4).expect("serializes"));
    report.summary.insert("delta".into(), qs(&cfg.delta));
    let cap = p.search_cap;
    for trial in 0..trials {
        let display = trial % 3;
        let threshold = if display == 2 { &cfg.c4 } else { &cfg.c3 };
        let Some(start) = threshold.value() else {
            let name = if display == 2 { "c4" } else { "c3" };
            let note = format!("{name} not certified up to {cap}; display {} has no range", display + 1);
            report.push(Verdict::Vacuous, json!({ "display": display + 1 }), Interval::empty(), Interval::empty(), Some(note));
            continue;
        };
        match display {
            0 => {
                let t = rng.gen_range(start..=cap);
                let verdict = match lemma36_first(t, &cfg) {
                    Some(true) => Verdict::Pass,
                    Some(false) => Verdict::Fail,
                    None => Verdict::Inconclusive,
                };
                report.push(verdict, json!({ "display": 1, "t": t }), Interval::empty(), Interval::empty(), None);
            }
            1 => {
                let t = rng.gen_range(start..=cap);
                let s = rng.gen_range(t..=cap.max(t));
                let inputs = json!({ "display": 2, "s": s, "t": t });
                match second_hypothesis(s, t, &cfg) {
                    Some(true) => push(report, lemma36_second(s, t, &cfg), inputs, None),
                    Some(false) => report.push(
                        Verdict::Vacuous,
                        inputs,
                        Interval::empty(),
                        Interval::empty(),
                        Some("t < u (log u)^(delta-1)".into()),
                    ),
                    None => report.push(Verdict::Inconclusive, inputs, Interval::empty(), Interval::empty(), None),
                }
            }
            _ => {
                let s = rng.gen_range(start..=cap);
                let lo = (s as f64).ln().powf(1.0 - cfg.delta.to_f64().unwrap_or(0.0)) / 4.0;
                let hi = (s as f64).sqrt();
                let inputs_base = |t: &BigRational| json!({ "display": 3, "s": s, "t": qs(t) });
                if lo > hi {
                    report.push(Verdict::Vacuous, inputs_base(&q(0)), Interval::empty(), Interval::empty(), None);
                    continue;
                }
                let t = BigRational::from_float(lo + rng.gen::<f64>() * (hi - lo)).expect("finite");
                let third = compare_ge(false, false, |prec| {
                    let sb = RealBall::from_int(s, prec);
                    let tb = ball(&t, prec);
                    let low = exp(&ball(&(BigRational::one() - &cfg.delta), prec).mul(&ln(&ln(&sb)?)?)).mul_pow2(-2);
                    if tb.lt(&low) || sb.sqrt()?.lt(&tb) {
                        return None;
                    }
                    let lhs = tb.mul(&g_ball(&sb.div(&tb)?, &cfg.k, &cfg.c1, prec));
                    Some((lhs, g_ball(&sb, &cfg.k, &cfg.c1, prec).mul_int(2)))
                });
                push(report, third, inputs_base(&t), None);
            }
        }
    }
    if cfg.c3.value().is_none() && cfg.c4.value().is_none() {
        report.notes.push(format!(
            "neither threshold is certified on [1, {cap}] for k={} delta={}; every trial is vacuous",
            cfg.k, cfg.delta
        ));
    }
    if let Threshold::SearchExhausted { witness, .. } = &cfg.c3 {
        report.summary.insert("c3_witness".into(), json!(witness));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use rand::SeedableRng;

    fn run(f: fn(&SuiteParams, u64, &mut ChaCha8Rng, &mut SuiteReport) -> Result<()>, k: BigRational) -> SuiteReport {
        let mut p = SuiteParams::default();
        p.k = k;
        let mut r = SuiteReport::new("t", p.to_value(), 1);
        f(&p, 200, &mut ChaCha8Rng::seed_from_u64(1), &mut r).unwrap();
        r
    }

    #[test]
    fn extremal_split_values() {
        // four values in [1, 3] summing to at least 7: two at 1, one at 3, one at 2
        assert_eq!(extremal_split(&rat(1), &rat(3), 4, &rat(7)), (BigInt::from(2), rat(2)));
        let (u, sigma) = extremal_split(&rat(0), &rat(1), 3, &ratio(3, 2));
        assert_eq!((u, sigma), (BigInt::from(1), ratio(1, 2)));
    }

    #[test]
    fn small_runs_pass() {
        for f in [lemma31, lemma32, lemma33, lemma34, lemma35] {
            let r = run(f, rat(1));
            assert!(r.failures.is_empty(), "{}", r.to_text());
            assert_eq!(r.inconclusive, 0, "{}", r.to_text());
        }
    }

    #[test]
    fn comparison_lemma_is_vacuous_without_thresholds() {
        let r = run(lemma36, rat(1));
        assert_eq!(r.vacuous, r.trials);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn second_display_on_a_large_pair() {
        let cfg = BoundConfig::basic(&rat(1)).unwrap();
        assert_eq!(second_hypothesis(10u64.pow(9), 10u64.pow(9), &cfg), Some(true));
        assert_eq!(second_hypothesis(10u64.pow(9), 10, &cfg), Some(false));
    }
}
