//! Tower steps `Q_a(N_sub) < Q_a(N_top)` and the discriminant scale `Delta_a(N)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};
use serde::Serialize;

use crate::algebra::{make_algebra, Algebra, AlgebraElement, KummerAlgebra};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepCase {
    /// `p` appears to the first power in the top level.
    FirstCase,
    /// `p^t` with `t >= 2`.
    SecondCase,
}

/// One layer `N_sub = N_top / p` of a tower of Kummer fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TowerStep {
    pub p: u64,
    /// Exponent of `p` in `top`.
    pub t: u32,
    pub sub: u64,
    pub top: u64,
    pub case: StepCase,
}

impl fmt::Display for TowerStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} t={}: {} -> {}", self.p, self.t, self.sub, self.top)
    }
}

impl TowerStep {
    /// The step from `top / p` to `top`, for any prime `p` dividing `top`.
    pub fn new(p: u64, top: u64) -> Result<Self> {
        if !crate::exact::arith::is_prime(p) || top == 0 || top % p != 0 {
            return Err(Error::InvalidStep(format!("{p} is not a prime divisor of {top}")));
        }
        let mut t = 0;
        let mut m = top;
        while m % p == 0 {
            m /= p;
            t += 1;
        }
        let case = if t == 1 { StepCase::FirstCase } else { StepCase::SecondCase };
        Ok(TowerStep { p, t, sub: top / p, top, case })
    }

    /// `p^t`, the order of the roots of unity adjoined by this step.
    pub fn prime_power(&self) -> u64 {
        self.p.pow(self.t)
    }

    /// Index pairs `(l, k)` of the relative basis `zeta_{p^t}^l a^(k/p^t)`.
    pub fn basis_indices(&self, a: u64) -> Vec<(u64, u64)> {
        let l_max = match self.case {
            StepCase::FirstCase => self.p - 2,
            StepCase::SecondCase => self.p - 1,
        };
        let k_max = if a == 1 { 0 } else { self.p - 1 };
        let mut out = Vec::new();
        for l in 0..=l_max {
            for k in 0..=k_max {
                out.push((l, k));
            }
        }
        out
    }

    /// The relative basis as elements of `Q_a(top)`.
    pub fn basis(&self, top: &Algebra) -> Result<Vec<AlgebraElement>> {
        self.check(top)?;
        let m = self.top / self.prime_power();
        Ok(self
            .basis_indices(top.a())
            .into_iter()
            .map(|(l, k)| AlgebraElement::monomial(top, l * m, k * m))
            .collect())
    }

    fn check(&self, alg: &KummerAlgebra) -> Result<()> {
        if alg.n() != self.top {
            return Err(Error::InvalidStep(format!("step {self} does not end at N={}", alg.n())));
        }
        Ok(())
    }
}

/// The steps of the prime-power decomposition of `N`: primes ascending, and
/// for each prime the exponent running from 1 upwards.
pub fn tower_steps(n: u64) -> Vec<TowerStep> {
    let mut out = Vec::new();
    let mut level = 1;
    for (p, e) in crate::exact::arith::factorize(n) {
        for _ in 0..e {
            level *= p;
            out.push(TowerStep::new(p, level).expect("prime divisor"));
        }
    }
    out
}

/// Relative discriminant of the step basis: the determinant of the relative
/// trace matrix, as an element of `Q_a(sub)`.
pub fn step_discriminant(alg: &KummerAlgebra, step: &TowerStep) -> Result<AlgebraElement> {
    let top = make_algebra(alg.a(), alg.n())?;
    step.check(&top)?;
    let sub = make_algebra(alg.a(), step.sub)?;
    let basis = step.basis(&top)?;
    let d = basis.len();
    let mut m: Vec<Vec<AlgebraElement>> = vec![Vec::with_capacity(d); d];
    for u in 0..d {
        for v in 0..d {
            if v < u {
                let e = m[v][u].clone();
                m[u].push(e);
                continue;
            }
            let prod = basis[u].mul(&basis[v])?;
            m[u].push(prod.relative_trace(step.sub)?.restrict_to(&sub)?);
        }
    }
    match det_by_elimination(m.clone())? {
        Some(det) => Ok(det),
        None => berkowitz_det(&m, &sub),
    }
}

/// Gaussian elimination with invertible pivots; `None` when some column has
/// only zero divisors left.
fn det_by_elimination(mut m: Vec<Vec<AlgebraElement>>) -> Result<Option<AlgebraElement>> {
    let n = m.len();
    let Some(ring) = m.first().and_then(|r| r.first()).map(|e| e.algebra().clone()) else {
        return Err(Error::Internal("empty step basis".into()));
    };
    let mut det = AlgebraElement::one(&ring);
    for c in 0..n {
        let mut found = None;
        for r in c..n {
            if m[r][c].is_zero() {
                continue;
            }
            if let Ok(inv) = m[r][c].inverse() {
                found = Some((r, inv));
                break;
            }
        }
        let Some((r, inv)) = found else {
            if (c..n).all(|r| m[r][c].is_zero()) {
                return Ok(Some(AlgebraElement::zero(&ring)));
            }
            return Ok(None);
        };
        if r != c {
            m.swap(r, c);
            det = det.neg();
        }
        det = det.mul(&m[c][c])?;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].mul(&inv)?;
            for k in c..n {
                let t = f.mul(&m[c][k])?;
                m[r][k] = m[r][k].sub(&t)?;
            }
        }
    }
    Ok(Some(det))
}

/// Division-free determinant (Berkowitz), valid over any commutative ring.
pub(crate) fn berkowitz_det(m: &[Vec<AlgebraElement>], ring: &Algebra) -> Result<AlgebraElement> {
    let n = m.len();
    let zero = AlgebraElement::zero(ring);
    let mut v = vec![AlgebraElement::one(ring)];
    for r in 0..n {
        // Toeplitz column [1, -a, -R C, -R M C, ..., -R M^(r-1) C]
        let mut t = Vec::with_capacity(r + 2);
        t.push(AlgebraElement::one(ring));
        t.push(m[r][r].neg());
        let mut col: Vec<AlgebraElement> = (0..r).map(|i| m[i][r].clone()).collect();
        for _ in 0..r {
            let mut rc = zero.clone();
            for (i, ci) in col.iter().enumerate() {
                rc = rc.add(&m[r][i].mul(ci)?)?;
            }
            t.push(rc.neg());
            let mut next = Vec::with_capacity(r);
            for i in 0..r {
                let mut s = zero.clone();
                for (j, cj) in col.iter().enumerate() {
                    s = s.add(&m[i][j].mul(cj)?)?;
                }
                next.push(s);
            }
            col = next;
        }
        let mut nv = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut s = zero.clone();
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    s = s.add(&t[i - j].mul(vj)?)?;
                }
            }
            nv.push(s);
        }
        v = nv;
    }
    let last = v.pop().expect("nonempty");
    Ok(if n % 2 == 0 { last } else { last.neg() })
}

/// `Delta_a(N)`: the absolute norm, taken in `Q_a(N)`, of the product of the
/// step discriminants. Equal to 1 for `a = 1` and for `N = 1`.
pub fn delta(alg: &KummerAlgebra) -> Result<BigRational> {
    type Cache = Mutex<HashMap<(u64, u64), BigRational>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (alg.a(), alg.n());
    if let Some(d) = cache.lock().expect("delta cache poisoned").get(&key) {
        return Ok(d.clone());
    }
    let value = if alg.a() == 1 || alg.n() == 1 {
        BigRational::one()
    } else {
        let mut acc = BigRational::one();
        for step in tower_steps(alg.n()) {
            let sub = make_algebra(alg.a(), step.sub)?;
            let disc = step_discriminant(&*make_algebra(alg.a(), step.top)?, &step)?;
            let exp = (alg.dim() / sub.dim()) as u32;
            acc *= Pow::pow(disc.norm_abs().abs(), exp);
        }
        acc
    };
    cache.lock().expect("delta cache poisoned").insert(key, value.clone());
    Ok(value)
}

/// `Delta_a(N)` as an integer when it is one.
pub fn delta_integer(alg: &KummerAlgebra) -> Result<Option<BigInt>> {
    let d = delta(alg)?;
    Ok(d.is_integer().then(|| d.to_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::measures::embed_value;
    use crate::numeric::ComplexBall;

    #[test]
    fn step_lists() {
        let steps = tower_steps(12);
        let shape: Vec<_> = steps.iter().map(|s| (s.p, s.t, s.sub, s.top)).collect();
        assert_eq!(shape, vec![(2, 1, 1, 2), (2, 2, 2, 4), (3, 1, 4, 12)]);
        assert!(tower_steps(1).is_empty());
        assert_eq!(TowerStep::new(2, 6).unwrap().case, StepCase::FirstCase);
        assert!(TowerStep::new(4, 8).is_err());
        assert!(TowerStep::new(5, 6).is_err());
        for (a, n) in [(2u64, 12u64), (3, 9), (2, 15), (1, 12)] {
            let alg = make_algebra(a, n).unwrap();
            for s in tower_steps(n) {
                let top = make_algebra(a, s.top).unwrap();
                let sub = make_algebra(a, s.sub).unwrap();
                assert_eq!(s.basis_indices(a).len() * sub.dim(), top.dim());
            }
            let _ = alg;
        }
    }

    #[test]
    fn two_by_two_discriminant() {
        let alg = make_algebra(2, 2).unwrap();
        let d = step_discriminant(&alg, &tower_steps(2)[0]).unwrap();
        assert_eq!(d.as_rational(), Some(&rat(8)));
        assert_eq!(delta(&alg).unwrap(), rat(64));
        assert_eq!(delta(&make_algebra(2, 1).unwrap()).unwrap(), rat(1));
        assert_eq!(delta(&make_algebra(1, 12).unwrap()).unwrap(), rat(1));
        let wrong = TowerStep::new(2, 4).unwrap();
        assert!(matches!(step_discriminant(&alg, &wrong), Err(Error::InvalidStep(_))));
    }

    #[test]
    fn discriminant_matches_numeric_trace_matrix() {
        let alg = make_algebra(3, 3).unwrap();
        let step = tower_steps(3)[0];
        let d = step_discriminant(&alg, &step).unwrap();
        let basis = step.basis(&alg).unwrap();
        let prec = 192;
        let embs = alg.embeddings();
        let n = basis.len();
        let mut tm = vec![vec![0f64; n]; n];
        for u in 0..n {
            for v in 0..n {
                let prod = basis[u].mul(&basis[v]).unwrap();
                let mut s = ComplexBall::zero(prec);
                for e in &embs {
                    s = s.add(&embed_value(&prod, e, prec));
                }
                assert!(s.im.contains_zero());
                tm[u][v] = s.re.to_f64();
            }
        }
        let numeric = lu_det(tm);
        let exact = num_traits::ToPrimitive::to_f64(d.as_rational().unwrap()).unwrap();
        assert!((numeric - exact).abs() <= 1e-9 * exact.abs(), "{numeric} vs {exact}");
    }

    fn lu_det(mut m: Vec<Vec<f64>>) -> f64 {
        let n = m.len();
        let mut det = 1.0;
        for c in 0..n {
            let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= m[c][c];
            for r in c + 1..n {
                let f = m[r][c] / m[c][c];
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
        det
    }

    #[test]
    fn delta_agrees_with_norm_in_top_algebra() {
        for (a, n) in [(2u64, 3u64), (3, 2), (2, 6), (2, 4)] {
            let alg = make_algebra(a, n).unwrap();
            let mut prod = AlgebraElement::one(&alg);
            for s in tower_steps(n) {
                let top = make_algebra(a, s.top).unwrap();
                let d = step_discriminant(&top, &s).unwrap();
                prod = prod.mul(&d.embed_into(&alg).unwrap()).unwrap();
            }
            assert_eq!(prod.norm_abs().abs(), delta(&alg).unwrap(), "({a},{n})");
        }
        let d23 = delta(&make_algebra(2, 3).unwrap()).unwrap();
        assert_eq!(d23, Pow::pow(rat(314928), 6u32));
    }

    #[test]
    fn berkowitz_matches_elimination() {
        let sub = make_algebra(2, 3).unwrap();
        let m: Vec<Vec<AlgebraElement>> = (0..3)
            .map(|u| {
                (0..3)
                    .map(|v| {
                        let c: Vec<i64> = (0..6).map(|i| ((u * 7 + v * 3 + i * 5) % 7) as i64 - 3).collect();
                        AlgebraElement::from_ints(&sub, &c).unwrap()
                    })
                    .collect()
            })
            .collect();
        let g = det_by_elimination(m.clone()).unwrap().unwrap();
        assert_eq!(berkowitz_det(&m, &sub).unwrap(), g);
    }

    #[test]
    fn delta_fifteen() {
        let alg = make_algebra(2, 15).unwrap();
        let d = delta_integer(&alg).unwrap().unwrap();
        assert!(d > BigInt::from(1));
    }

    #[test]
    fn degree_drop_delta_is_finite() {
        let alg = make_algebra(2, 8).unwrap();
        let d = delta(&alg).unwrap();
        assert!(d.is_positive());
    }
}
