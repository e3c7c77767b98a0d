//! Coordinates of an element over one tower step, and the additivity check
//! for representation counts across a first-case step.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::min_rep_count;
use crate::algebra::{make_algebra, Algebra, AlgebraElement};
use crate::exact::RationalMatrix;
use crate::measures::{step_discriminant, StepCase, TowerStep};
use crate::{Error, Result};

/// `e = sum alpha_{lk} * scale * zeta_{p^t}^l a^(k/p^t)` with `alpha_{lk}` in
/// the sub-level algebra.
#[derive(Clone, Debug)]
pub struct StepDecomposition {
    pub step: TowerStep,
    pub coefficients: BTreeMap<(u64, u64), AlgebraElement>,
    pub scale: BigRational,
}

impl StepDecomposition {
    pub fn reassemble(&self, top: &Algebra) -> Result<AlgebraElement> {
        let basis = self.step.basis(top)?;
        let idx = self.step.basis_indices(top.a());
        let mut acc = AlgebraElement::zero(top);
        for (b, key) in basis.iter().zip(&idx) {
            let alpha = &self.coefficients[key];
            acc = acc.add(&alpha.embed_into(top)?.mul(b)?.scalar_mul(&self.scale))?;
        }
        Ok(acc)
    }

    pub fn all_integral(&self) -> bool {
        self.coefficients.values().all(AlgebraElement::is_algebraic_integer)
    }
}

/// `1 / |Nm_{Q_a(top)}(disc)|` of the step basis, or 1 for `a = 1`.
pub fn step_scale(a: u64, step: &TowerStep) -> Result<BigRational> {
    type Cache = Mutex<HashMap<(u64, TowerStep), BigRational>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if a == 1 {
        return Ok(BigRational::one());
    }
    if let Some(s) = cache.lock().expect("scale cache poisoned").get(&(a, *step)) {
        return Ok(s.clone());
    }
    let top = make_algebra(a, step.top)?;
    let disc = step_discriminant(&top, step)?.embed_into(&top)?;
    let norm = disc.norm_abs().abs();
    if norm.is_zero() {
        return Err(Error::Internal(format!("degenerate step basis for {step}")));
    }
    let s = norm.recip();
    cache.lock().expect("scale cache poisoned").insert((a, *step), s.clone());
    Ok(s)
}

fn solver(a: u64, step: &TowerStep) -> Result<Arc<RationalMatrix>> {
    type Cache = Mutex<HashMap<(u64, TowerStep), Arc<RationalMatrix>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().expect("solver cache poisoned").get(&(a, *step)) {
        return Ok(Arc::clone(m));
    }
    let top = make_algebra(a, step.top)?;
    let sub = make_algebra(a, step.sub)?;
    let mut cols = Vec::with_capacity(top.dim());
    for b in step.basis(&top)? {
        for v in 0..sub.dim() {
            let (i, j) = sub.monomial(v);
            let s = AlgebraElement::monomial(&sub, i as u64, j as u64).embed_into(&top)?;
            cols.push(s.mul(&b)?.into_coeffs());
        }
    }
    let inv = Arc::new(RationalMatrix::from_columns(top.dim(), &cols)?.inverse()?);
    cache.lock().expect("solver cache poisoned").insert((a, *step), Arc::clone(&inv));
    Ok(inv)
}

/// Exact coordinates of `e` over the step basis.
pub fn decompose_step(e: &AlgebraElement, step: &TowerStep) -> Result<StepDecomposition> {
    let top = e.algebra();
    if top.n() != step.top {
        return Err(Error::InvalidStep(format!("step {step} does not end at N={}", top.n())));
    }
    let sub = make_algebra(top.a(), step.sub)?;
    let inv = solver(top.a(), step)?;
    let scale = step_scale(top.a(), step)?;
    let c = inv.mul_vec(e.coeffs())?;
    let per = sub.dim();
    let mut coefficients = BTreeMap::new();
    for (u, key) in step.basis_indices(top.a()).into_iter().enumerate() {
        let part: Vec<BigRational> = c[u * per..(u + 1) * per].iter().map(|x| x / &scale).collect();
        coefficients.insert(key, AlgebraElement::new(&sub, part)?);
    }
    Ok(StepDecomposition { step: *step, coefficients, scale })
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditivityReport {
    /// `M_{a,N}(beta)`, absent when the search gave up.
    pub n: Option<u128>,
    /// `M_{a,N1}(gamma_{ij})` per index pair.
    pub m: BTreeMap<String, Option<u128>>,
    pub sum_m: Option<u128>,
    /// `n == sum m`, when decided. A search for `n` that exhausts the bound
    /// `sum m` decides it negatively.
    pub additive: Option<bool>,
    /// Whether every radical column uses at most `(p-1)/2` roots of unity.
    pub column_condition: bool,
}

/// Builds `beta = sum_{(i,j) in I} b_{ij} zeta_p^i a^(j/p)` and compares its
/// count with the counts of `gamma_{ij} = b_{ij} / scale` one level down.
pub fn additivity_check(
    alg: &Algebra,
    step: &TowerStep,
    b: &BTreeMap<(u64, u64), AlgebraElement>,
    bound: u128,
) -> Result<(AlgebraElement, AdditivityReport)> {
    if step.case != StepCase::FirstCase || step.top != alg.n() {
        return Err(Error::InvalidStep(format!("{step} is not a first-case step of N={}", alg.n())));
    }
    let p = step.p;
    if 2 * b.len() as u64 > p * (p - 1) {
        return Err(Error::InvalidParameter(format!(
            "|I| = {} exceeds p(p-1)/2 = {}",
            b.len(),
            p * (p - 1) / 2
        )));
    }
    let indices = step.basis_indices(alg.a());
    let basis = step.basis(alg)?;
    let scale = step_scale(alg.a(), step)?;
    let mut beta = AlgebraElement::zero(alg);
    let mut m = BTreeMap::new();
    let mut sum = Some(0u128);
    let mut per_column: BTreeMap<u64, u64> = BTreeMap::new();
    for (key, coeff) in b {
        let pos = indices
            .iter()
            .position(|k| k == key)
            .ok_or_else(|| Error::InvalidParameter(format!("{key:?} is not a step basis index")))?;
        if coeff.algebra().n() != step.sub || coeff.algebra().a() != alg.a() {
            return Err(Error::MixedAlgebras);
        }
        beta = beta.add(&coeff.embed_into(alg)?.mul(&basis[pos])?)?;
        *per_column.entry(key.1).or_default() += 1;
        let gamma = coeff.scalar_mul(&scale.recip());
        let count = match min_rep_count(&gamma, bound) {
            Ok((c, _)) => Some(c),
            Err(Error::Exhausted(_) | Error::NodeLimit(_)) => None,
            Err(e) => return Err(e),
        };
        sum = sum.zip(count).and_then(|(s, c)| s.checked_add(c));
        m.insert(format!("{},{}", key.0, key.1), count);
    }
    let (n, exceeds) = match min_rep_count(&beta, sum.unwrap_or(bound)) {
        Ok((c, _)) => (Some(c), false),
        Err(Error::Exhausted(_)) => (None, sum.is_some()),
        Err(Error::NodeLimit(_)) => (None, false),
        Err(e) => return Err(e),
    };
    let column_condition = per_column.values().all(|&c| 2 * c < p);
    let additive = match (n, sum) {
        (Some(n), Some(s)) => Some(n == s),
        _ if exceeds => Some(false),
        _ => None,
    };
    let report = AdditivityReport {
        n,
        additive,
        sum_m: sum,
        m,
        column_condition,
    };
    Ok((beta, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_element;
    use crate::exact::{rat, ratio};
    use crate::measures::tower_steps;

    #[test]
    fn quadratic_example() {
        let q22 = make_algebra(2, 2).unwrap();
        let e = parse_element(&q22, "(3 + 2*r)/64").unwrap();
        let step = tower_steps(2)[0];
        let d = decompose_step(&e, &step).unwrap();
        assert_eq!(d.scale, ratio(1, 64));
        assert_eq!(d.coefficients[&(0, 0)].as_rational(), Some(&rat(3)));
        assert_eq!(d.coefficients[&(0, 1)].as_rational(), Some(&rat(2)));
        assert_eq!(d.reassemble(&q22).unwrap(), e);
    }

    #[test]
    fn monomials_and_sub_level_elements() {
        for (a, n) in [(2u64, 6u64), (3, 4), (1, 15), (2, 9)] {
            let alg = make_algebra(a, n).unwrap();
            for step in tower_steps(n).into_iter().filter(|s| s.top == n) {
                let sub = make_algebra(a, step.sub).unwrap();
                let s = parse_element(&sub, "2 - z + 3*z*r").unwrap();
                let d = decompose_step(&s.embed_into(&alg).unwrap(), &step).unwrap();
                for (key, alpha) in &d.coefficients {
                    if *key == (0, 0) {
                        assert_eq!(alpha.scalar_mul(&d.scale), s);
                    } else {
                        assert!(alpha.is_zero());
                    }
                }
                let e = parse_element(&alg, "(1 + z^2*r)^2 - 5*r^3").unwrap();
                let d = decompose_step(&e, &step).unwrap();
                assert_eq!(d.reassemble(&alg).unwrap(), e);
                assert!(d.all_integral(), "({a},{n})");
            }
        }
    }

    #[test]
    fn cyclotomic_additivity_example() {
        let q16 = make_algebra(1, 6).unwrap();
        let step = TowerStep::new(3, 6).unwrap();
        let q12 = make_algebra(1, 2).unwrap();
        let b = BTreeMap::from([((1, 0), AlgebraElement::from_int(&q12, 2))]);
        let (_, rep) = additivity_check(&q16, &step, &b, 6).unwrap();
        assert_eq!(rep.n, Some(2));
        assert_eq!(rep.additive, Some(true));
    }

    #[test]
    fn single_term_and_failure() {
        let q23 = make_algebra(2, 3).unwrap();
        let q21 = make_algebra(2, 1).unwrap();
        let step = tower_steps(3)[0];
        let scale = step_scale(2, &step).unwrap();
        let b = BTreeMap::from([((1, 2), AlgebraElement::from_rational(&q21, scale.clone() * rat(4)))]);
        let (_, rep) = additivity_check(&q23, &step, &b, 10).unwrap();
        assert_eq!((rep.n, rep.sum_m, rep.additive), (Some(4), Some(4), Some(true)));
        // 1 + zeta_3 is itself a root of unity, so the counts do not add up
        let b = BTreeMap::from([
            ((0, 0), AlgebraElement::from_rational(&q21, scale.clone())),
            ((1, 0), AlgebraElement::from_rational(&q21, scale)),
        ]);
        let (_, rep) = additivity_check(&q23, &step, &b, 10).unwrap();
        assert_eq!((rep.n, rep.sum_m, rep.additive), (Some(1), Some(2), Some(false)));
        assert!(!rep.column_condition);
    }
}
