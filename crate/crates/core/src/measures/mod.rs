//! Rigorous values of embeddings, the house and mean-square measures, and the
//! tower discriminant scale.

mod tower;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{AlgebraElement, Embedding, FieldStatus, KummerAlgebra};
use crate::numeric::{nth_root_int, root_of_unity, ComplexBall, Dyadic, RealBall};
use crate::{Error, Result};

pub use tower::{delta, delta_integer, step_discriminant, tower_steps, StepCase, TowerStep};

/// Starting precision of the adaptive loops.
pub const START_PREC: u32 = 64;
/// Precision beyond which the adaptive loops give up.
pub const PREC_CAP: u32 = 4096;

struct Tables {
    roots: Vec<ComplexBall>,
    radicals: Vec<RealBall>,
}

fn tables(alg: &KummerAlgebra, prec: u32) -> Arc<Tables> {
    type Cache = Mutex<HashMap<(u64, u64, u32), Arc<Tables>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (alg.a(), alg.n(), prec);
    if let Some(t) = cache.lock().expect("table cache poisoned").get(&key) {
        return Arc::clone(t);
    }
    let n = alg.n();
    let roots = (0..n).map(|m| root_of_unity(m as i64, n, prec)).collect();
    let a = BigInt::from(alg.a());
    let radicals = (0..alg.radical_degree() as u32)
        .map(|j| nth_root_int(&num_traits::Pow::pow(&a, j), n as u32, prec))
        .collect();
    let t = Arc::new(Tables { roots, radicals });
    cache.lock().expect("table cache poisoned").insert(key, Arc::clone(&t));
    t
}

/// Enclosure of `sigma(e)` where `sigma` sends `x -> zeta_N^l` and
/// `y -> zeta_N^k a^(1/N)`.
pub fn embed_value(e: &AlgebraElement, emb: &Embedding, prec: u32) -> ComplexBall {
    let alg = e.algebra();
    let t = tables(alg, prec);
    let n = alg.n();
    let mut total = ComplexBall::zero(prec);
    for j in 0..alg.radical_degree() {
        let mut col = ComplexBall::zero(prec);
        let mut any = false;
        for i in 0..alg.phi() {
            let c = e.coeff(i, j);
            if c.is_zero() {
                continue;
            }
            any = true;
            let m = (i as u64 * emb.l + j as u64 * emb.k) % n;
            let cb = RealBall::from_rational(c, prec);
            col = col.add(&t.roots[m as usize].scale(&cb));
        }
        if any {
            total = total.add(&col.scale(&t.radicals[j]));
        }
    }
    total
}

/// Values at every embedding, in the order of [`KummerAlgebra::embeddings`].
pub fn embed_all(e: &AlgebraElement, prec: u32) -> Vec<ComplexBall> {
    e.algebra().embeddings().iter().map(|emb| embed_value(e, emb, prec)).collect()
}

/// Rational enclosure `[low, high]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enclosure {
    #[serde(serialize_with = "ser_rational")]
    pub low: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub high: BigRational,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl Enclosure {
    pub fn of(b: &RealBall) -> Self {
        Enclosure { low: b.lower().to_rational(), high: b.upper().to_rational() }
    }

    pub fn width(&self) -> BigRational {
        &self.high - &self.low
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.low <= other.high && other.low <= self.high
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.low <= q && q <= &self.high
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport {
    pub house: Enclosure,
    pub msq: Enclosure,
    pub precision_bits: u32,
    pub field_status: FieldStatus,
}

impl MeasureReport {
    pub fn house_low(&self) -> &BigRational {
        &self.house.low
    }

    pub fn house_high(&self) -> &BigRational {
        &self.house.high
    }

    pub fn msq_low(&self) -> &BigRational {
        &self.msq.low
    }

    pub fn msq_high(&self) -> &BigRational {
        &self.msq.high
    }
}

/// Runs `f` at doubling precision until the result is narrower than `tol`.
pub fn adaptive<T>(
    tol: &BigRational,
    mut f: impl FnMut(u32) -> T,
    width: impl Fn(&T) -> BigRational,
) -> Result<(T, u32)> {
    if tol <= &BigRational::zero() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let mut prec = START_PREC;
    loop {
        let v = f(prec);
        if &width(&v) < tol {
            return Ok((v, prec));
        }
        if prec >= PREC_CAP {
            return Err(Error::NonConvergence { cap: PREC_CAP });
        }
        prec *= 2;
    }
}

fn ball_width(b: &RealBall) -> BigRational {
    b.width().to_rational()
}

/// House and mean square of `e` at a fixed precision.
pub fn house_and_msq_at(e: &AlgebraElement, prec: u32) -> (RealBall, RealBall) {
    let values = embed_all(e, prec);
    let sq: Vec<RealBall> = values.iter().map(ComplexBall::abs_sq).collect();
    let max_sq = sq.iter().skip(1).fold(sq[0].clone(), |m, s| m.max(s));
    let house = max_sq.sqrt().expect("squared moduli are nonnegative");
    let sum = sq.iter().skip(1).fold(sq[0].clone(), |acc, s| acc.add(s));
    let msq = sum.div(&RealBall::from_int(sq.len() as i64, prec)).expect("nonempty");
    (house, msq)
}

/// Certified enclosures of the house and the mean square, each narrower than `tol`.
pub fn measure(e: &AlgebraElement, tol: &BigRational) -> Result<MeasureReport> {
    let ((house, msq), prec) = adaptive(
        tol,
        |prec| house_and_msq_at(e, prec),
        |(h, m)| std::cmp::max(ball_width(h), ball_width(m)),
    )?;
    Ok(MeasureReport {
        house: Enclosure::of(&house),
        msq: Enclosure::of(&msq),
        precision_bits: prec,
        field_status: e.algebra().field_status(),
    })
}

/// The largest absolute value over all embeddings.
pub fn house(e: &AlgebraElement, tol: &BigRational) -> Result<MeasureReport> {
    measure(e, tol)
}

/// The mean of `|sigma(e)|^2` over all embeddings.
pub fn mean_square(e: &AlgebraElement, tol: &BigRational) -> Result<MeasureReport> {
    measure(e, tol)
}

/// Mean of `|rho(sigma(e))|^2` over the embeddings `sigma` fixing `Q_a(N1)`,
/// with `rho` a fixed reference embedding.
pub fn mean_square_relative_at(
    e: &AlgebraElement,
    n1: u64,
    reference: &Embedding,
    prec: u32,
) -> Result<RealBall> {
    let alg = e.algebra();
    let embs = alg.relative_embeddings(n1)?;
    let mut sum = RealBall::zero(prec);
    for s in &embs {
        let composite = s.then(reference, alg.n());
        sum = sum.add(&embed_value(e, &composite, prec).abs_sq());
    }
    Ok(sum.div(&RealBall::from_int(embs.len() as i64, prec)).expect("nonempty"))
}

/// Adaptive version of [`mean_square_relative_at`] with the reference
/// embedding `(1, 0)`.
pub fn mean_square_relative(e: &AlgebraElement, n1: u64, tol: &BigRational) -> Result<Enclosure> {
    e.algebra().check_divisor(n1)?;
    let (b, _) = adaptive(
        tol,
        |prec| mean_square_relative_at(e, n1, &Embedding::IDENTITY, prec).expect("divisor checked"),
        ball_width,
    )?;
    Ok(Enclosure::of(&b))
}

/// Whether `d` (a dyadic) is below `2^-bits`.
pub fn below_pow2(d: &Dyadic, bits: i64) -> bool {
    d < &Dyadic::pow2(-bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_algebra, parse_element};
    use crate::exact::{rat, ratio};

    fn tol() -> BigRational {
        BigRational::new(1.into(), BigInt::from(1u64) << 64usize)
    }

    fn close(b: &RealBall, v: f64) -> bool {
        (b.to_f64() - v).abs() < 1e-12
    }

    #[test]
    fn embedding_values() {
        let q22 = make_algebra(2, 2).unwrap();
        let y = AlgebraElement::y(&q22);
        let v = embed_value(&y, &Embedding { l: 1, k: 1 }, 64);
        assert!(close(&v.re, -std::f64::consts::SQRT_2));
        assert!(v.radius() < Dyadic::pow2(-30));

        let q14 = make_algebra(1, 4).unwrap();
        let i = embed_value(&AlgebraElement::x(&q14), &Embedding::IDENTITY, 64);
        assert_eq!(i, ComplexBall::i(64));

        let q23 = make_algebra(2, 3).unwrap();
        let e = parse_element(&q23, "1 + r").unwrap();
        let v = embed_value(&e, &Embedding { l: 1, k: 1 }, 100);
        assert!((v.re.to_f64() - 0.370039).abs() < 1e-5);
        assert!((v.im.to_f64() - 1.091123).abs() < 1e-5);
    }

    #[test]
    fn embedded_generators_satisfy_relations() {
        for (a, n) in [(2u64, 6u64), (3, 4), (5, 5)] {
            let alg = make_algebra(a, n).unwrap();
            let cyclo = alg.cyclo().clone();
            for emb in alg.embeddings() {
                let x = embed_value(&AlgebraElement::x(&alg), &emb, 96);
                let y = embed_value(&AlgebraElement::y(&alg), &emb, 96);
                let mut acc = ComplexBall::zero(96);
                for c in cyclo.coeffs().iter().rev() {
                    acc = acc.mul(&x).add(&ComplexBall::real(RealBall::from_int(c.clone(), 96)));
                }
                assert!(acc.contains_zero());
                let mut yn = ComplexBall::one(96);
                for _ in 0..n {
                    yn = yn.mul(&y);
                }
                assert!(yn.re.contains(&Dyadic::from_int(a)) && yn.im.contains_zero());
            }
        }
    }

    #[test]
    fn house_and_mean_square_examples() {
        let q22 = make_algebra(2, 2).unwrap();
        let e = parse_element(&q22, "1 + r").unwrap();
        let rep = measure(&e, &tol()).unwrap();
        let h = (rep.house_low().clone() + rep.house_high()) / rat(2);
        assert!((num_traits::ToPrimitive::to_f64(&h).unwrap() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(rep.msq.contains(&rat(3)));

        let q13 = make_algebra(1, 3).unwrap();
        let rep = measure(&AlgebraElement::x(&q13), &tol()).unwrap();
        assert!(rep.house.contains(&rat(1)) && rep.msq.contains(&rat(1)));

        let q23 = make_algebra(2, 3).unwrap();
        let rep = measure(&parse_element(&q23, "1 + r").unwrap(), &tol()).unwrap();
        let hv = num_traits::ToPrimitive::to_f64(rep.house_low()).unwrap();
        assert!((hv - 2.259921).abs() < 1e-5);
        let mv = num_traits::ToPrimitive::to_f64(rep.msq_low()).unwrap();
        assert!((mv - (1.0 + 2f64.powf(2.0 / 3.0))).abs() < 1e-12);
        assert!(rep.house.width() < tol());
    }

    #[test]
    fn relative_mean_squares() {
        let q22 = make_algebra(2, 2).unwrap();
        let y = AlgebraElement::y(&q22);
        assert!(mean_square_relative(&y, 1, &tol()).unwrap().contains(&rat(2)));
        let q24 = make_algebra(2, 4).unwrap();
        let r = mean_square_relative(&AlgebraElement::y(&q24), 2, &tol()).unwrap();
        let v = num_traits::ToPrimitive::to_f64(&r.low).unwrap();
        assert!((v - std::f64::consts::SQRT_2).abs() < 1e-12);
        let q26 = make_algebra(2, 6).unwrap();
        let q23 = make_algebra(2, 3).unwrap();
        let sub = parse_element(&q23, "2 - z*r + r^2").unwrap();
        let up = sub.embed_into(&q26).unwrap();
        let rel = mean_square_relative_at(&up, 3, &Embedding::IDENTITY, 128).unwrap();
        let direct = embed_value(&sub, &Embedding::IDENTITY, 128).abs_sq();
        assert!(rel.overlaps(&direct));
        assert!(mean_square_relative(&up, 4, &tol()).is_err());
        let _ = ratio(1, 2);
    }

    #[test]
    fn tighter_tolerance_nests() {
        let q23 = make_algebra(2, 3).unwrap();
        let e = parse_element(&q23, "3 - z*r^2 + 2*r").unwrap();
        let coarse = measure(&e, &ratio(1, 1 << 20)).unwrap();
        let fine = measure(&e, &tol()).unwrap();
        assert!(coarse.msq.low <= fine.msq.low && fine.msq.high <= coarse.msq.high);
        assert!(coarse.house.low <= fine.house.low && fine.house.high <= coarse.house.high);
    }
}
