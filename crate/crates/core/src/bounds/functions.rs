//! The comparison functions `f(t) = t exp(-k log t / log log t)` and its
//! shifted variant `g`, and the constants that make `g` usable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::numeric::{exp, ln, RealBall};
use crate::{Error, Result};

/// Working precision for single evaluations.
pub const DEFAULT_PREC: u32 = 128;
/// Precisions tried in turn when a comparison is undecided.
pub const PREC_LADDER: [u32; 4] = [64, 128, 256, 512];

fn ball(q: &BigRational, prec: u32) -> RealBall {
    RealBall::from_rational(q, prec)
}

/// `exp(-k log x / log log x)` for a ball `x` with `log log x > 0`.
fn damping(x: &RealBall, k: &RealBall) -> Option<RealBall> {
    let l = ln(x)?;
    let ll = ln(&l)?;
    if !ll.is_positive() {
        return None;
    }
    Some(exp(&k.mul(&l).div(&ll)?.neg()))
}

/// Rigorous enclosure of `f(t, k)`.
///
/// Defined at `t = 0`, `t = 1` and for `t > e`; anything else is a domain error.
pub fn f_ball(t: &BigRational, k: &BigRational, prec: u32) -> Result<RealBall> {
    if t.is_zero() {
        return Ok(RealBall::zero(prec));
    }
    if t.is_one() {
        return Ok(RealBall::one(prec));
    }
    let e = exp(&RealBall::one(prec));
    let tb = ball(t, prec);
    if !e.lt(&tb) {
        return Err(Error::Domain(format!("f is undefined at t = {t} (need t = 0, 1 or t > e)")));
    }
    let d = damping(&tb, &ball(k, prec))
        .ok_or_else(|| Error::Domain(format!("log log {t} is not positive")))?;
    Ok(tb.mul(&d))
}

pub fn f_val(t: &BigRational, k: &BigRational) -> Result<RealBall> {
    f_ball(t, k, DEFAULT_PREC)
}

/// Rigorous enclosure of `g(t) = t exp(-k log t' / log log t')`, `t' = t + c1`,
/// for a nonnegative ball `t`.
pub fn g_ball(t: &RealBall, k: &BigRational, c1: &BigRational, prec: u32) -> RealBall {
    if t.is_exact() && t.mid().is_zero() {
        return RealBall::zero(prec);
    }
    let tp = t.add(&ball(c1, prec));
    let d = damping(&tp, &ball(k, prec)).expect("c1 >= e^(e^2) keeps log log t' >= 2");
    t.mul(&d)
}

pub fn g_rational(t: &BigRational, k: &BigRational, c1: &BigRational, prec: u32) -> Result<RealBall> {
    if t.is_negative() {
        return Err(Error::Domain(format!("g is undefined at t = {t} < 0")));
    }
    Ok(g_ball(&ball(t, prec), k, c1, prec))
}

pub fn g_val(t: &BigRational, cfg: &BoundConfig) -> Result<RealBall> {
    g_rational(t, &cfg.k, &cfg.c1, cfg.precision_bits)
}

/// `log log (t + c1)`.
pub fn loglog_shifted(t: &RealBall, c1: &BigRational, prec: u32) -> RealBall {
    let tp = t.add(&ball(c1, prec));
    ln(&ln(&tp).expect("t' > 1")).expect("log t' > 1")
}

fn ser_q<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// Outcome of one of the threshold searches of [`derive_constants`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Threshold {
    /// The display holds on every grid point of `[value, cap]`.
    Certified { value: u64, cap: u64 },
    /// No start point up to the cap works; the display fails at `witness`.
    SearchExhausted { cap: u64, witness: u64 },
}

impl Threshold {
    pub fn value(&self) -> Option<u64> {
        match self {
            Threshold::Certified { value, .. } => Some(*value),
            Threshold::SearchExhausted { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundConfig {
    #[serde(serialize_with = "ser_q")]
    pub k: BigRational,
    #[serde(serialize_with = "ser_q")]
    pub delta: BigRational,
    #[serde(serialize_with = "ser_q")]
    pub c1: BigRational,
    #[serde(serialize_with = "ser_q")]
    pub c2: BigRational,
    pub c3: Threshold,
    pub c4: Threshold,
    pub precision_bits: u32,
}

impl BoundConfig {
    /// `k`, `c1` and `c2` only, for suites that do not need `c3`/`c4`.
    pub fn basic(k: &BigRational) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        let c1 = derive_c1(k)?;
        let c2 = c2_for(k, &c1);
        Ok(BoundConfig {
            k: k.clone(),
            delta: default_delta(k).unwrap_or_else(|| BigRational::new(1.into(), 10.into())),
            c1,
            c2,
            c3: Threshold::SearchExhausted { cap: 0, witness: 0 },
            c4: Threshold::SearchExhausted { cap: 0, witness: 0 },
            precision_bits: DEFAULT_PREC,
        })
    }

    pub fn g(&self, t: &BigRational) -> Result<RealBall> {
        g_val(t, self)
    }
}

pub fn c2_for(k: &BigRational, c1: &BigRational) -> BigRational {
    k / (BigRational::from_integer(2.into()) * (BigRational::one() + c1))
}

/// Whether `k > log 2`, decided rigorously.
pub fn exceeds_log2(k: &BigRational) -> bool {
    let prec = 128;
    crate::numeric::ln2(prec).lt(&ball(k, prec))
}

/// Half of the admissible range `1 - log 2 / k`, rounded down to a multiple
/// of 1/1000.
pub fn default_delta(k: &BigRational) -> Option<BigRational> {
    let kf = k.to_f64()?;
    let top = 1.0 - std::f64::consts::LN_2 / kf;
    if top <= 0.002 {
        return None;
    }
    let milli = ((top / 2.0) * 1000.0).floor() as i64;
    (milli > 0).then(|| BigRational::new(milli.into(), 1000.into()))
}

/// Points on which monotonicity and midpoint concavity of `g` are checked:
/// every integer up to 64, then `x - h, x, x + h` with `h = x/4` for
/// `x = 2^7 .. 2^40`.
fn concavity_triples() -> Vec<[BigRational; 3]> {
    let q = |v: BigInt| BigRational::from_integer(v);
    let mut out = Vec::new();
    for t in 0..63i64 {
        out.push([q(t.into()), q((t + 1).into()), q((t + 2).into())]);
    }
    for m in 7..=40u32 {
        let x = BigInt::one() << m;
        let h = BigInt::one() << (m - 2);
        out.push([q(&x - &h), q(x.clone()), q(&x + &h)]);
    }
    out
}

/// Checks (3.1) on the grid; `None` when some comparison stays undecided at
/// the highest precision.
fn grid_concave(k: &BigRational, c1: &BigRational) -> Option<bool> {
    'triple: for [a, b, c] in concavity_triples() {
        for &prec in &PREC_LADDER {
            let ga = g_rational(&a, k, c1, prec).ok()?;
            let gb = g_rational(&b, k, c1, prec).ok()?;
            let gc = g_rational(&c, k, c1, prec).ok()?;
            let mid = gb.mul_int(2);
            let ends = ga.add(&gc);
            let increasing = ga.le(&gb) && gb.le(&gc);
            let concave = ends.le(&mid);
            if increasing && concave {
                continue 'triple;
            }
            if gb.lt(&ga) || gc.lt(&gb) || mid.lt(&ends) {
                return Some(false);
            }
        }
        return None;
    }
    Some(true)
}

/// Smallest power of two at least `e^(e^2)` for which `g` passes the grid
/// check of monotonicity and concavity, doubling up to `2^40`.
pub fn derive_c1(k: &BigRational) -> Result<BigRational> {
    let floor = exp(&exp(&RealBall::from_int(2, 128)));
    let mut c1 = BigInt::one();
    while !floor.le(&RealBall::from_int(c1.clone(), 128)) {
        c1 <<= 1;
    }
    for _ in 0..30 {
        let c = BigRational::from_integer(c1.clone());
        if grid_concave(k, &c) == Some(true) {
            return Ok(c);
        }
        c1 <<= 1;
    }
    Err(Error::SearchExhausted(c1.to_u64().unwrap_or(u64::MAX)))
}

/// Decides `lhs <= rhs` across the precision ladder.
pub(crate) fn decide_le(f: impl Fn(u32) -> Option<(RealBall, RealBall)>) -> Option<bool> {
    for &prec in &PREC_LADDER {
        let (l, r) = f(prec)?;
        if l.le(&r) {
            return Some(true);
        }
        if r.lt(&l) {
            return Some(false);
        }
    }
    None
}

/// `g(t / (log t)^delta) <= c2 g(t) / (2 log log t')`.
pub fn lemma36_first(t: u64, cfg: &BoundConfig) -> Option<bool> {
    if t < 3 {
        return Some(false);
    }
    decide_le(|prec| {
        let tb = RealBall::from_int(t, prec);
        let lt = ln(&tb)?;
        let pow = exp(&ball(&cfg.delta, prec).mul(&ln(&lt)?));
        let lhs = g_ball(&tb.div(&pow)?, &cfg.k, &cfg.c1, prec);
        let rhs = g_ball(&tb, &cfg.k, &cfg.c1, prec)
            .mul(&ball(&cfg.c2, prec))
            .div(&loglog_shifted(&tb, &cfg.c1, prec).mul_int(2))?;
        Some((lhs, rhs))
    })
}

/// `t g(s/t) >= 2 g(s)` at the smallest admissible `t = (log s)^(1-delta) / 4`
/// (the left side increases with `t` because `g(x)/x` decreases), provided
/// that `t <= s^(1/2)`. Vacuous `s` (empty `t` range) count as holding.
pub fn lemma36_third(s: u64, cfg: &BoundConfig) -> Option<bool> {
    if s < 3 {
        return Some(true);
    }
    decide_le(|prec| {
        let sb = RealBall::from_int(s, prec);
        let one_minus = ball(&(BigRational::one() - &cfg.delta), prec);
        let t = exp(&one_minus.mul(&ln(&ln(&sb)?)?)).mul_pow2(-2);
        let t = t.max(&RealBall::zero(prec));
        if sb.sqrt()?.lt(&t) {
            return Some((RealBall::zero(prec), RealBall::zero(prec)));
        }
        let lhs = g_ball(&sb, &cfg.k, &cfg.c1, prec).mul_int(2);
        let rhs = t.mul(&g_ball(&sb.div(&t)?, &cfg.k, &cfg.c1, prec));
        Some((lhs, rhs))
    })
}

/// Scans `t = cap, cap-1, ...` and returns the smallest `t0` such that the
/// display holds on every integer of `[t0, cap]`.
fn threshold(cap: u64, holds: impl Fn(u64) -> Option<bool>) -> Threshold {
    let mut t = cap;
    loop {
        if holds(t) != Some(true) {
            if t == cap {
                return Threshold::SearchExhausted { cap, witness: t };
            }
            return Threshold::Certified { value: t + 1, cap };
        }
        if t <= 1 {
            return Threshold::Certified { value: 1, cap };
        }
        t -= 1;
    }
}

/// `c1`, `c2` and grid-certified thresholds `c3`, `c4` for the displays of
/// the comparison lemma.
pub fn derive_constants(k: &BigRational, delta: &BigRational, search_cap: u64) -> Result<BoundConfig> {
    if !exceeds_log2(k) {
        return Err(Error::InvalidParameter(format!("k = {k} must exceed log 2")));
    }
    let prec = 128;
    let upper = RealBall::one(prec).sub(&crate::numeric::ln2(prec).div(&ball(k, prec)).expect("k > 0"));
    if !delta.is_positive() || !ball(delta, prec).lt(&upper) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must lie in (0, 1 - log 2 / k)")));
    }
    let mut cfg = BoundConfig::basic(k)?;
    cfg.delta = delta.clone();
    cfg.c3 = threshold(search_cap, |t| lemma36_first(t, &cfg));
    cfg.c4 = threshold(search_cap, |s| lemma36_third(s, &cfg));
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn f_values() {
        assert_eq!(f_val(&rat(0), &rat(1)).unwrap(), RealBall::zero(DEFAULT_PREC));
        assert_eq!(f_val(&rat(1), &rat(1)).unwrap(), RealBall::one(DEFAULT_PREC));
        let v = f_val(&rat(100), &rat(1)).unwrap();
        let expected = 100.0 * (-(100f64.ln()) / 100f64.ln().ln()).exp();
        assert!((v.to_f64() - expected).abs() < 1e-12);
        assert!((v.to_f64() - 4.9021).abs() < 5e-4);
        assert!(matches!(f_val(&ratio(27182, 10000), &rat(1)), Err(Error::Domain(_))));
        assert!(matches!(f_val(&ratio(1, 2), &rat(1)), Err(Error::Domain(_))));
        assert!(matches!(f_val(&rat(2), &rat(1)), Err(Error::Domain(_))));
        assert!(f_val(&ratio(2719, 1000), &rat(1)).is_ok());
    }

    #[test]
    fn g_values_and_c1() {
        let cfg = BoundConfig::basic(&rat(1)).unwrap();
        assert_eq!(cfg.c1, rat(2048));
        assert_eq!(cfg.c2, ratio(1, 4098));
        assert!(cfg.g(&rat(0)).unwrap().is_exact());
        let g1 = cfg.g(&rat(1)).unwrap().to_f64();
        let l = 2049f64.ln();
        assert!((g1 - (-l / l.ln()).exp()).abs() < 1e-15);
        assert!(cfg.g(&rat(5)).unwrap().le(&cfg.g(&rat(7)).unwrap()));
        assert!(cfg.g(&rat(-1)).is_err());
        for k in [ratio(4, 5), rat(2)] {
            assert_eq!(BoundConfig::basic(&k).unwrap().c1, rat(2048));
        }
    }

    #[test]
    fn constants_preconditions() {
        assert!(matches!(derive_constants(&ratio(1, 2), &ratio(1, 10), 100), Err(Error::InvalidParameter(_))));
        assert!(matches!(derive_constants(&rat(1), &ratio(1, 2), 100), Err(Error::InvalidParameter(_))));
        let cfg = derive_constants(&rat(1), &ratio(1, 5), 10_000).unwrap();
        assert_eq!(cfg.c2, ratio(1, 4098));
        assert!(matches!(cfg.c3, Threshold::SearchExhausted { .. }));
        assert!(matches!(cfg.c4, Threshold::SearchExhausted { .. }));
        assert_eq!(default_delta(&rat(1)), Some(ratio(153, 1000)));
    }
}
