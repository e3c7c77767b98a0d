//! Sums of terms `+-zeta_N^i a^(j/N)`: the term set, tower decompositions, and
//! the exact minimal-representation count `M_{a,N}`.

mod column;
mod decompose;
mod simplex;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::algebra::{Algebra, AlgebraElement, KummerAlgebra};
use crate::measures::delta;
use crate::{Error, Result};

pub use decompose::{additivity_check, decompose_step, step_scale, AdditivityReport, StepDecomposition};
pub use simplex::{Lp, LpOutcome};

use column::ColumnSet;

/// The algebraic integer `sign * x^i * y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Term {
    pub sign: i8,
    pub i: u64,
    pub j: u64,
}

impl Term {
    pub fn value(&self, alg: &Algebra) -> AlgebraElement {
        let m = AlgebraElement::monomial(alg, self.i, self.j);
        if self.sign < 0 {
            m.neg()
        } else {
            m
        }
    }
}

/// Signed roots of unity `+-x^i` deduplicated, with their coordinate vectors.
struct Units {
    terms: Vec<(i8, u64)>,
    columns: ColumnSet,
}

fn units(alg: &KummerAlgebra) -> Arc<Units> {
    type Cache = Mutex<HashMap<u64, Arc<Units>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(u) = cache.lock().expect("unit cache poisoned").get(&alg.n()) {
        return Arc::clone(u);
    }
    let mut seen = HashSet::new();
    let mut terms = Vec::new();
    let mut vecs = Vec::new();
    for i in 0..alg.n() {
        let base: Vec<i64> = alg
            .x_power(i)
            .iter()
            .map(|c| c.to_i64().expect("cyclotomic remainders are small"))
            .collect();
        for sign in [1i8, -1] {
            let v: Vec<i64> = base.iter().map(|c| c * sign as i64).collect();
            if seen.insert(v.clone()) {
                terms.push((sign, i));
                vecs.push(v);
            }
        }
    }
    let u = Arc::new(Units { terms, columns: ColumnSet::new(vecs) });
    cache.lock().expect("unit cache poisoned").insert(alg.n(), Arc::clone(&u));
    u
}

/// Every distinct element `+-x^i y^j`, ordered by `j`, then `i`, then sign
/// (`+` first).
pub fn term_set(alg: &KummerAlgebra) -> Vec<Term> {
    let u = units(alg);
    let mut out = Vec::with_capacity(u.terms.len() * alg.radical_degree());
    for j in 0..alg.radical_degree() as u64 {
        out.extend(u.terms.iter().map(|&(sign, i)| Term { sign, i, j }));
    }
    out
}

/// A multiset of terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Representation {
    pub terms: BTreeMap<Term, u128>,
}

impl Representation {
    pub fn total(&self) -> u128 {
        self.terms.values().sum()
    }

    pub fn add(&mut self, t: Term, mult: u128) {
        if mult > 0 {
            *self.terms.entry(t).or_insert(0) += mult;
        }
    }

    /// The represented sum.
    pub fn evaluate(&self, alg: &Algebra) -> AlgebraElement {
        let mut coeffs = vec![BigRational::zero(); alg.dim()];
        for (t, &m) in &self.terms {
            let v = t.value(alg);
            let m = BigRational::from_integer(BigInt::from(m));
            for (c, x) in coeffs.iter_mut().zip(v.coeffs()) {
                if !x.is_zero() {
                    *c += &m * x;
                }
            }
        }
        AlgebraElement::new(alg, coeffs).expect("dimension matches")
    }
}

impl Serialize for Representation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            sign: i8,
            i: u64,
            j: u64,
            mult: u128,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (t, &mult) in &self.terms {
            seq.serialize_element(&Entry { sign: t.sign, i: t.i, j: t.j, mult })?;
        }
        seq.end()
    }
}

/// `Delta_a(N) * e` as integer coordinates, or `NotInSpan`.
pub fn scaled_target(e: &AlgebraElement) -> Result<Vec<BigInt>> {
    let d = delta(e.algebra())?;
    e.coeffs()
        .iter()
        .map(|c| {
            let v = c * &d;
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(Error::NotInSpan)
            }
        })
        .collect()
}

fn column_targets(alg: &KummerAlgebra, target: &[BigInt]) -> Vec<Vec<BigInt>> {
    (0..alg.radical_degree())
        .map(|j| (0..alg.phi()).map(|i| target[alg.index(i, j)].clone()).collect())
        .collect()
}

/// Minimal number of terms summing to `Delta_a(N) * e`, with a witness.
///
/// The problem splits over the radical powers `y^j`. Each column is solved by
/// iterative deepening when its LP lower bound is small and by exact branch
/// and bound otherwise.
pub fn min_rep_count(e: &AlgebraElement, bound: u128) -> Result<(u128, Representation)> {
    let alg = e.algebra();
    let target = scaled_target(e)?;
    let u = units(alg);
    let cols = column_targets(alg, &target);
    let lbs: Vec<u128> = cols.iter().map(|c| u.columns.lower_bound(c)).collect::<Result<_>>()?;
    let lb_total = lbs.iter().try_fold(0u128, |a, &b| a.checked_add(b));
    if lb_total.map_or(true, |t| t > bound) {
        return Err(Error::Exhausted(bound));
    }
    let mut rep = Representation::default();
    let mut used = 0u128;
    let mut rest: u128 = lb_total.expect("checked");
    for (j, col) in cols.iter().enumerate() {
        rest -= lbs[j];
        let budget = bound - used - rest;
        let Some(mult) = u.columns.solve(col, lbs[j], budget)? else {
            return Err(Error::Exhausted(bound));
        };
        for (t, &m) in mult.iter().enumerate() {
            let (sign, i) = u.terms[t];
            rep.add(Term { sign, i, j: j as u64 }, m);
        }
        used += mult.iter().sum::<u128>();
    }
    if rep.evaluate(alg).coeffs() != target.iter().map(|x| BigRational::from_integer(x.clone())).collect::<Vec<_>>() {
        return Err(Error::Internal("witness does not reproduce the target".into()));
    }
    Ok((used, rep))
}

/// Brute-force minimal count: every multiset of at most `bound` terms.
pub fn min_rep_oracle(e: &AlgebraElement, bound: u32) -> Result<Option<u32>> {
    let alg = e.algebra();
    let target = scaled_target(e)?;
    let Some(target): Option<Vec<i64>> = target.iter().map(ToPrimitive::to_i64).collect() else {
        return Ok(None);
    };
    let vecs: Vec<Vec<i64>> = term_set(alg)
        .iter()
        .map(|t| t.value(alg).coeffs().iter().map(|c| c.to_integer().to_i64().expect("unit")).collect())
        .collect();
    fn hit(vecs: &[Vec<i64>], acc: &mut Vec<i64>, target: &[i64], left: u32, start: usize) -> bool {
        if left == 0 {
            return acc == target;
        }
        for t in start..vecs.len() {
            for (a, v) in acc.iter_mut().zip(&vecs[t]) {
                *a += v;
            }
            let found = hit(vecs, acc, target, left - 1, t);
            for (a, v) in acc.iter_mut().zip(&vecs[t]) {
                *a -= v;
            }
            if found {
                return true;
            }
        }
        false
    }
    let mut acc = vec![0i64; target.len()];
    Ok((0..=bound).find(|&size| hit(&vecs, &mut acc, &target, size, 0)))
}
