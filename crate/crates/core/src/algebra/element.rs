use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Algebra, Embedding};
use crate::exact::arith::ramanujan_sum;
use crate::exact::{RatPolynomial, RationalMatrix};
use crate::{Error, Result};

/// An element of a [`KummerAlgebra`](super::KummerAlgebra), stored as exact
/// coordinates over the basis `x^i y^j` (index `i * r + j`).
#[derive(Clone)]
pub struct AlgebraElement {
    alg: Algebra,
    coeffs: Vec<BigRational>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_as(&other.alg) && self.coeffs == other.coeffs
    }
}

impl Eq for AlgebraElement {}

impl std::hash::Hash for AlgebraElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.alg.a(), self.alg.n()).hash(state);
        self.coeffs.hash(state);
    }
}

fn common_denominator(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let d = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = v.iter().map(|c| c.numer() * (&d / c.denom())).collect();
    (nums, d)
}

impl AlgebraElement {
    pub fn new(alg: &Algebra, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != alg.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for an algebra of dimension {}",
                coeffs.len(),
                alg.dim()
            )));
        }
        Ok(AlgebraElement { alg: Arc::clone(alg), coeffs })
    }

    pub fn from_ints(alg: &Algebra, coeffs: &[i64]) -> Result<Self> {
        Self::new(alg, coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero(alg: &Algebra) -> Self {
        AlgebraElement { alg: Arc::clone(alg), coeffs: vec![BigRational::zero(); alg.dim()] }
    }

    pub fn from_rational(alg: &Algebra, q: BigRational) -> Self {
        let mut e = Self::zero(alg);
        e.coeffs[0] = q;
        e
    }

    pub fn from_int(alg: &Algebra, v: i64) -> Self {
        Self::from_rational(alg, BigRational::from_integer(v.into()))
    }

    pub fn one(alg: &Algebra) -> Self {
        Self::from_int(alg, 1)
    }

    /// `x^i y^j` for arbitrary nonnegative exponents, reduced.
    pub fn monomial(alg: &Algebra, i: u64, j: u64) -> Self {
        Self::one(alg).mul_monomial(i, j)
    }

    /// The class of `x`, i.e. `zeta_N`.
    pub fn x(alg: &Algebra) -> Self {
        Self::monomial(alg, 1, 0)
    }

    /// The class of `y`, i.e. the real radical `a^(1/N)`.
    pub fn y(alg: &Algebra) -> Self {
        Self::monomial(alg, 0, 1)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// Coefficient of `x^i y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> &BigRational {
        &self.coeffs[self.alg.index(i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Whether every coordinate is an integer.
    pub fn has_integral_coords(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// The rational `q` if the element equals `q * 1`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.alg.same_as(&other.alg) {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement { alg: Arc::clone(&self.alg), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(AlgebraElement { alg: Arc::clone(&self.alg), coeffs })
    }

    pub fn neg(&self) -> Self {
        AlgebraElement { alg: Arc::clone(&self.alg), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scalar_mul(&self, s: &BigRational) -> Self {
        AlgebraElement { alg: Arc::clone(&self.alg), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let alg = &self.alg;
        let (phi, r) = (alg.phi(), alg.radical_degree());
        let a = BigInt::from(alg.a());
        let (n1, d1) = common_denominator(&self.coeffs);
        let (n2, d2) = common_denominator(&other.coeffs);
        let nz2: Vec<(usize, usize, &BigInt)> = n2
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| (idx / r, idx % r, c))
            .collect();
        // unreduced x-degree up to 2 phi - 2
        let width = 2 * phi - 1;
        let mut acc = vec![BigInt::zero(); width * r];
        for (idx1, c1) in n1.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            let (i1, j1) = (idx1 / r, idx1 % r);
            for &(i2, j2, c2) in &nz2 {
                let j = j1 + j2;
                let slot = (i1 + i2) * r + j % r;
                if j >= r {
                    acc[slot] += c1 * c2 * &a;
                } else {
                    acc[slot] += c1 * c2;
                }
            }
        }
        let mut out = acc[..phi * r].to_vec();
        for m in phi..width {
            let xp = alg.x_power(m as u64);
            for j in 0..r {
                let c = &acc[m * r + j];
                if c.is_zero() {
                    continue;
                }
                for (i, xc) in xp.iter().enumerate() {
                    if !xc.is_zero() {
                        out[i * r + j] += c * xc;
                    }
                }
            }
        }
        let den = d1 * d2;
        let coeffs = out.into_iter().map(|c| BigRational::new(c, den.clone())).collect();
        Ok(AlgebraElement { alg: Arc::clone(alg), coeffs })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.alg);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same algebra");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same algebra");
            }
        }
        acc
    }

    /// Product with the monomial `x^i y^j`.
    pub fn mul_monomial(&self, i: u64, j: u64) -> Self {
        let alg = &self.alg;
        let r = alg.radical_degree() as u64;
        let a = BigRational::from_integer(alg.a().into());
        let mut out = vec![BigRational::zero(); alg.dim()];
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i1, j1) = alg.monomial(idx);
            let jj = j1 as u64 + j;
            let mut c = c.clone();
            for _ in 0..jj / r {
                c *= &a;
            }
            let col = (jj % r) as usize;
            add_x_power(&mut out, alg, i1 as u64 + i, col, &c);
        }
        AlgebraElement { alg: Arc::clone(alg), coeffs: out }
    }

    /// Image under `x -> x^l`, `y -> x^k y`.
    pub fn apply_automorphism(&self, emb: &Embedding) -> Self {
        let alg = &self.alg;
        let mut out = vec![BigRational::zero(); alg.dim()];
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = alg.monomial(idx);
            let m = (i as u64 * emb.l + j as u64 * emb.k) % alg.n();
            add_x_power(&mut out, alg, m, j, c);
        }
        AlgebraElement { alg: Arc::clone(alg), coeffs: out }
    }

    /// The image of `self` under `Q_a(N) -> Q_a(M)` for a multiple `M` of `N`,
    /// sending `x -> x^(M/N)` and `y -> y^(M/N)`.
    pub fn embed_into(&self, target: &Algebra) -> Result<Self> {
        let alg = &self.alg;
        if target.a() != alg.a() || target.n() % alg.n() != 0 {
            return Err(Error::InvalidParameter(format!(
                "cannot embed {:?} into {:?}",
                alg, target
            )));
        }
        let m = target.n() / alg.n();
        let mut out = vec![BigRational::zero(); target.dim()];
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = alg.monomial(idx);
            let col = if alg.a() == 1 { 0 } else { j * m as usize };
            add_x_power(&mut out, target, i as u64 * m, col, c);
        }
        Ok(AlgebraElement { alg: Arc::clone(target), coeffs: out })
    }

    /// The preimage of `self` in a sub-algebra `Q_a(N1)`; fails when `self` is
    /// not in the image of [`embed_into`](Self::embed_into).
    pub fn restrict_to(&self, sub: &Algebra) -> Result<Self> {
        let images: Vec<Vec<BigRational>> = (0..sub.dim())
            .map(|u| {
                let (i, j) = sub.monomial(u);
                Ok(AlgebraElement::monomial(sub, i as u64, j as u64).embed_into(&self.alg)?.coeffs)
            })
            .collect::<Result<_>>()?;
        let m = RationalMatrix::from_columns(self.alg.dim(), &images)?;
        match m.solve(&self.coeffs)? {
            Some(v) => AlgebraElement::new(sub, v),
            None => Err(Error::InvalidParameter(format!(
                "element does not lie in the image of {:?}",
                sub
            ))),
        }
    }

    /// Matrix of multiplication by `self` on the canonical basis.
    pub fn regular_matrix(&self) -> RationalMatrix {
        let alg = &self.alg;
        let cols: Vec<Vec<BigRational>> = (0..alg.dim())
            .map(|u| {
                let (i, j) = alg.monomial(u);
                self.mul_monomial(i as u64, j as u64).coeffs
            })
            .collect();
        RationalMatrix::from_columns(alg.dim(), &cols).expect("square by construction")
    }

    pub fn char_poly(&self) -> RatPolynomial {
        self.regular_matrix().char_poly().expect("regular matrix is square")
    }

    /// Absolute trace, from `Tr(x^i y^j) = [j = 0] * r * c_N(i)` with `c_N`
    /// Ramanujan's sum.
    pub fn trace_abs(&self) -> BigRational {
        let alg = &self.alg;
        let r = alg.radical_degree() as i64;
        let mut t = BigRational::zero();
        for i in 0..alg.phi() {
            let c = self.coeff(i, 0);
            if !c.is_zero() {
                t += c * BigRational::from_integer((r * ramanujan_sum(i as u64, alg.n())).into());
            }
        }
        t
    }

    /// Absolute norm, the determinant of the regular matrix.
    pub fn norm_abs(&self) -> BigRational {
        self.regular_matrix().det().expect("regular matrix is square")
    }

    /// Sum of the images under the embeddings fixing `Q_a(N1)`.
    pub fn relative_trace(&self, n1: u64) -> Result<Self> {
        let embs = self.alg.relative_embeddings(n1)?;
        let mut acc = Self::zero(&self.alg);
        for e in &embs {
            let img = self.apply_automorphism(e);
            for (a, b) in acc.coeffs.iter_mut().zip(img.coeffs) {
                *a += b;
            }
        }
        Ok(acc)
    }

    /// Whether the characteristic polynomial has integer coefficients.
    pub fn is_algebraic_integer(&self) -> bool {
        self.has_integral_coords() || self.char_poly().to_integer().is_some()
    }

    pub fn inverse(&self) -> Result<Self> {
        let unit = Self::one(&self.alg).coeffs;
        match self.regular_matrix().solve(&unit) {
            Ok(Some(v)) => Self::new(&self.alg, v),
            Ok(None) | Err(Error::Underdetermined { .. }) => Err(Error::NotInvertible),
            Err(e) => Err(e),
        }
    }
}

fn add_x_power(out: &mut [BigRational], alg: &Algebra, m: u64, col: usize, c: &BigRational) {
    let r = alg.radical_degree();
    for (i, xc) in alg.x_power(m).iter().enumerate() {
        if !xc.is_zero() {
            out[i * r + col] += c * xc;
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl ops::$trait<&AlgebraElement> for &AlgebraElement {
            type Output = AlgebraElement;

            /// # Panics
            ///
            /// Panics when the operands live in different algebras.
            fn $method(self, rhs: &AlgebraElement) -> AlgebraElement {
                AlgebraElement::$method(self, rhs).expect("operands in the same algebra")
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        AlgebraElement::neg(self)
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.alg)
    }
}

/// Renders in the expression grammar accepted by [`parse_element`](super::parse_element).
impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = self.alg.monomial(idx);
            let mut factors = Vec::new();
            match i {
                0 => {}
                1 => factors.push("z".to_string()),
                _ => factors.push(format!("z^{i}")),
            }
            match j {
                0 => {}
                1 => factors.push("r".to_string()),
                _ => factors.push(format!("r^{j}")),
            }
            let abs = c.abs();
            let sign = match (first, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            let body = if factors.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", abs, factors.join("*"))
            };
            write!(f, "{sign}{body}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::exact::{rat, ratio};

    #[test]
    fn multiplication_reduces() {
        let q22 = make_algebra(2, 2).unwrap();
        let y = AlgebraElement::y(&q22);
        let one = AlgebraElement::one(&q22);
        assert_eq!(&(&one + &y) * &(&one - &y), AlgebraElement::from_int(&q22, -1));

        let q13 = make_algebra(1, 3).unwrap();
        let x = AlgebraElement::x(&q13);
        assert_eq!(&x * &x, AlgebraElement::from_ints(&q13, &[-1, -1]).unwrap());

        let q24 = make_algebra(2, 4).unwrap();
        let y2 = AlgebraElement::monomial(&q24, 0, 2);
        assert_eq!(&y2 * &y2, AlgebraElement::from_int(&q24, 2));
        assert_eq!(AlgebraElement::monomial(&q24, 4, 4), AlgebraElement::from_int(&q24, 2));

        let other = make_algebra(3, 2).unwrap();
        assert_eq!(y.mul(&AlgebraElement::y(&other)).unwrap_err(), Error::MixedAlgebras);
    }

    #[test]
    fn automorphisms() {
        let q22 = make_algebra(2, 2).unwrap();
        let y = AlgebraElement::y(&q22);
        assert_eq!(y.apply_automorphism(&Embedding { l: 1, k: 1 }), y.neg());
        let q14 = make_algebra(1, 4).unwrap();
        let x = AlgebraElement::x(&q14);
        assert_eq!(x.apply_automorphism(&Embedding { l: 3, k: 0 }), x.neg());
        let q26 = make_algebra(2, 6).unwrap();
        let e = AlgebraElement::from_ints(&q26, &[1, 2, 0, -1, 5, 0, 0, 3, 1, 0, 0, 7]).unwrap();
        assert_eq!(e.apply_automorphism(&Embedding::IDENTITY), e);
    }

    #[test]
    fn trace_norm_charpoly() {
        let q22 = make_algebra(2, 2).unwrap();
        let y = AlgebraElement::y(&q22);
        assert_eq!(y.trace_abs(), rat(0));
        assert_eq!(y.norm_abs(), rat(-2));
        assert_eq!(y.char_poly().to_string(), "X^2 - 2");
        let one_plus = &AlgebraElement::one(&q22) + &y;
        assert_eq!(one_plus.norm_abs(), rat(-1));
        let q13 = make_algebra(1, 3).unwrap();
        assert_eq!(AlgebraElement::x(&q13).trace_abs(), rat(-1));
    }

    #[test]
    fn trace_closed_form_matches_matrix() {
        for (a, n) in [(2, 3), (3, 4), (1, 12), (2, 6), (5, 5)] {
            let alg = make_algebra(a, n).unwrap();
            for u in 0..alg.dim() {
                let mut coeffs = vec![rat(0); alg.dim()];
                coeffs[u] = rat(1);
                let e = AlgebraElement::new(&alg, coeffs).unwrap();
                assert_eq!(e.trace_abs(), e.regular_matrix().trace().unwrap(), "({a},{n}) basis {u}");
            }
        }
    }

    #[test]
    fn relative_traces() {
        let q22 = make_algebra(2, 2).unwrap();
        assert!(AlgebraElement::y(&q22).relative_trace(1).unwrap().is_zero());
        let q24 = make_algebra(2, 4).unwrap();
        let y2 = AlgebraElement::monomial(&q24, 0, 2);
        assert_eq!(y2.relative_trace(2).unwrap(), y2.scalar_mul(&rat(4)));
        let one = AlgebraElement::one(&q24);
        assert_eq!(one.relative_trace(2).unwrap(), AlgebraElement::from_int(&q24, 4));
    }

    #[test]
    fn integrality() {
        let q52 = make_algebra(5, 2).unwrap();
        let golden = AlgebraElement::new(&q52, vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        assert!(golden.is_algebraic_integer());
        let q22 = make_algebra(2, 2).unwrap();
        let half = AlgebraElement::new(&q22, vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        assert!(!half.is_algebraic_integer());
        assert_eq!(half.char_poly().to_string(), "X^2 - X - 1/4");
    }

    #[test]
    fn sub_algebra_round_trip() {
        let q26 = make_algebra(2, 6).unwrap();
        let q23 = make_algebra(2, 3).unwrap();
        let e = AlgebraElement::from_ints(&q23, &[1, -2, 3, 0, 5, 7]).unwrap();
        let up = e.embed_into(&q26).unwrap();
        assert_eq!(up.restrict_to(&q23).unwrap(), e);
        assert!(AlgebraElement::y(&q26).restrict_to(&q23).is_err());
        let f = AlgebraElement::from_ints(&q23, &[0, 1, 0, 2, 0, -1]).unwrap();
        assert_eq!((&e * &f).embed_into(&q26).unwrap(), &up * &f.embed_into(&q26).unwrap());
    }

    #[test]
    fn inverses_and_display() {
        let q23 = make_algebra(2, 3).unwrap();
        let e = AlgebraElement::from_ints(&q23, &[1, 1, 0, 0, 0, 0]).unwrap();
        let inv = e.inverse().unwrap();
        assert_eq!(&e * &inv, AlgebraElement::one(&q23));
        assert_eq!(AlgebraElement::zero(&q23).inverse().unwrap_err(), Error::NotInvertible);
        let f = AlgebraElement::new(&q23, vec![rat(1), rat(0), ratio(-1, 2), rat(0), rat(3), rat(0)]).unwrap();
        assert_eq!(f.to_string(), "1 - 1/2*r^2 + 3*z*r");
    }
}
