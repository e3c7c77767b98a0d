//! Suite parameters, their per-suite defaults and `key=value` overrides.

use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use super::{default_delta, BoundConfig};
use crate::exact::rat;
use crate::{Error, Result};

/// Every suite identifier understood by [`super::check_lemma`].
pub const SUITES: [&str; 17] = [
    "measures",
    "minrep",
    "lemma2.1",
    "lemma2.1-corrected",
    "lemma2.2",
    "lemma3.1",
    "lemma3.2",
    "lemma3.3",
    "lemma3.4",
    "lemma3.5",
    "lemma3.6",
    "lemma4.1",
    "lemma4.2",
    "lemma4.3",
    "thm4.4",
    "lemma5.2",
    "thm1.1",
];

const MEASURE_CORPUS: [(u64, u64); 7] = [(1, 3), (1, 4), (1, 5), (2, 2), (2, 3), (3, 2), (5, 2)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteParams {
    #[serde(serialize_with = "ser_q")]
    pub k: BigRational,
    /// Defaults to half of the admissible range for `k`.
    #[serde(serialize_with = "ser_opt_q")]
    pub delta: Option<BigRational>,
    /// Defaults to the derived constant for `k`.
    #[serde(serialize_with = "ser_opt_q")]
    pub c1: Option<BigRational>,
    /// `(a, N)` pairs.
    pub fields: Vec<(u64, u64)>,
    /// `(a, N, N1)` triples.
    pub triples: Vec<(u64, u64, u64)>,
    /// Coefficient range `[-H, H]` of random algebraic integers.
    pub height: i64,
    /// Term budget of minimal-representation searches.
    #[serde(serialize_with = "ser_u128")]
    pub bound: u128,
    /// Largest integer drawn by the real-variable suites.
    pub max_int: u64,
    /// Longest tuple drawn by the real-variable suites.
    pub max_len: usize,
    /// Enclosure width target `2^-tol_bits`.
    pub tol_bits: u32,
    /// Cap of the threshold searches for `c3`, `c4`.
    pub search_cap: u64,
    /// Stand-in for the unspecified prime threshold of the basic inequality.
    pub min_prime: u64,
    /// Largest number of terms in constructed elements.
    pub terms: usize,
}

fn ser_q<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_opt_q<S: serde::Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&q.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_u128<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            k: rat(1),
            delta: None,
            c1: None,
            fields: Vec::new(),
            triples: Vec::new(),
            height: 3,
            bound: 6,
            max_int: 1_000_000,
            max_len: 8,
            tol_bits: 64,
            search_cap: 1_000_000,
            min_prime: 5,
            terms: 4,
        }
    }
}

impl SuiteParams {
    /// Defaults for `suite`, or `UnknownSuite`.
    pub fn defaults(suite: &str) -> Result<Self> {
        let mut p = SuiteParams::default();
        match suite {
            "measures" | "thm1.1" => p.fields = MEASURE_CORPUS.to_vec(),
            "minrep" => {
                p.fields = vec![(1, 3), (1, 4), (2, 2), (2, 3)];
                p.bound = 4;
            }
            "lemma2.1" | "lemma2.1-corrected" => p.triples = vec![(2, 6, 2), (2, 6, 3), (3, 6, 2), (1, 15, 5)],
            "lemma2.2" => p.triples = vec![(2, 4, 2), (1, 9, 3)],
            "lemma4.1" | "lemma4.2" => p.fields = vec![(2, 3), (1, 15)],
            "lemma4.3" | "thm4.4" => p.fields = vec![(2, 5), (1, 5), (1, 15)],
            "lemma5.2" => p.fields = vec![(1, 3), (2, 3), (1, 15), (2, 15)],
            "lemma3.1" | "lemma3.2" | "lemma3.3" | "lemma3.4" | "lemma3.5" | "lemma3.6" => {}
            other => return Err(Error::UnknownSuite(other.to_string())),
        }
        Ok(p)
    }

    /// Applies one `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidParameter(format!("{key}: cannot parse {value:?} as {what}"));
        match key {
            "k" => self.k = parse_rational(value).ok_or_else(|| bad("a rational"))?,
            "delta" => self.delta = Some(parse_rational(value).ok_or_else(|| bad("a rational"))?),
            "c1" => self.c1 = Some(parse_rational(value).ok_or_else(|| bad("a rational"))?),
            "fields" => {
                self.fields = parse_tuples::<2>(value)
                    .ok_or_else(|| bad("a list a:N,..."))?
                    .into_iter()
                    .map(|[a, n]| (a, n))
                    .collect()
            }
            "triples" => {
                self.triples = parse_tuples::<3>(value)
                    .ok_or_else(|| bad("a list a:N:N1,..."))?
                    .into_iter()
                    .map(|[a, n, n1]| (a, n, n1))
                    .collect()
            }
            "height" => self.height = value.parse().map_err(|_| bad("an integer"))?,
            "bound" => self.bound = value.parse().map_err(|_| bad("an integer"))?,
            "max_int" => self.max_int = value.parse().map_err(|_| bad("an integer"))?,
            "max_len" => self.max_len = value.parse().map_err(|_| bad("an integer"))?,
            "tol_bits" => self.tol_bits = value.parse().map_err(|_| bad("an integer"))?,
            "search_cap" => self.search_cap = value.parse().map_err(|_| bad("an integer"))?,
            "min_prime" => self.min_prime = value.parse().map_err(|_| bad("an integer"))?,
            "terms" => self.terms = value.parse().map_err(|_| bad("an integer"))?,
            _ => return Err(Error::InvalidParameter(format!("unknown suite parameter {key:?}"))),
        }
        if self.height < 0 || self.max_len == 0 || self.tol_bits == 0 {
            return Err(Error::InvalidParameter(format!("{key}={value} is out of range")));
        }
        Ok(())
    }

    /// `k`, `c1`, `c2` and `delta`; `c3`, `c4` are left unsearched.
    pub fn config(&self) -> Result<BoundConfig> {
        let mut cfg = BoundConfig::basic(&self.k)?;
        if let Some(c1) = &self.c1 {
            cfg.c1 = c1.clone();
            cfg.c2 = super::c2_for(&self.k, c1);
        }
        if let Some(d) = self.delta.clone().or_else(|| default_delta(&self.k)) {
            cfg.delta = d;
        }
        Ok(cfg)
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("parameters serialize")
    }

    pub fn tol(&self) -> BigRational {
        BigRational::new(1.into(), num_bigint::BigInt::from(1) << self.tol_bits)
    }
}

/// `p`, `-p`, `p/q` or a finite decimal such as `0.8`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let q: num_bigint::BigInt = q.trim().parse().ok()?;
        if q == 0.into() {
            return None;
        }
        return Some(BigRational::new(p.trim().parse().ok()?, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let whole: num_bigint::BigInt = format!("{}{frac}", int.trim_start_matches('-')).parse().ok()?;
        let den = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
        let q = BigRational::new(whole, den);
        return Some(if neg { -q } else { q });
    }
    Some(BigRational::from_integer(s.parse().ok()?))
}

fn parse_tuples<const K: usize>(s: &str) -> Option<Vec<[u64; K]>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let parts: Vec<u64> = p.trim().split(':').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
            parts.try_into().ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn defaults_and_overrides() {
        assert!(matches!(SuiteParams::defaults("lemma9.9"), Err(Error::UnknownSuite(_))));
        for s in SUITES {
            SuiteParams::defaults(s).unwrap();
        }
        let mut p = SuiteParams::defaults("lemma5.2").unwrap();
        p.set("fields", "2:3, 1:15").unwrap();
        p.set("k", "0.8").unwrap();
        p.set("bound", "4").unwrap();
        assert_eq!(p.fields, vec![(2, 3), (1, 15)]);
        assert_eq!(p.k, ratio(4, 5));
        assert_eq!(p.bound, 4);
        assert!(p.set("fields", "2:3:4").is_err());
        assert!(p.set("colour", "red").is_err());
        assert_eq!(parse_rational("-3/6"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("-1.25"), Some(ratio(-5, 4)));
        assert_eq!(parse_rational("1/0"), None);
        let v = p.to_value();
        assert_eq!(v["k"], "4/5");
        assert_eq!(v["bound"], "4");
    }
}
