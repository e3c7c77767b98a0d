//! Midpoint-radius balls. Every operation returns a ball containing the exact
//! result for every choice of inputs in the operand balls.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};

const RAD_BITS: u32 = 30;

fn rad_up(x: &Dyadic) -> Dyadic {
    x.round(RAD_BITS, Round::Up)
}

#[derive(Clone, PartialEq, Eq)]
pub struct RealBall {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl RealBall {
    pub fn new(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(!rad.is_negative(), "negative ball radius");
        let (m, err) = mid.round_with_error(prec);
        RealBall { mid: m, rad: rad_up(&rad.add(&err)), prec }
    }

    pub fn exact(mid: Dyadic, prec: u32) -> Self {
        Self::new(mid, Dyadic::zero(), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::exact(Dyadic::one(), prec)
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Self::exact(Dyadic::from_int(v), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let lo = Dyadic::from_rational(q, prec, Round::Down);
        let hi = Dyadic::from_rational(q, prec, Round::Up);
        Self::from_endpoints(&lo, &hi, prec)
    }

    /// The smallest representable ball containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        let mid = lo.add(hi).mul_pow2(-1);
        let rad = hi.sub(&mid);
        Self::new(mid, rad, prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.mid.clone(), self.rad.clone(), prec)
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn width(&self) -> Dyadic {
        self.rad.mul_pow2(1)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lower().is_positive() && !self.upper().is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lower().to_rational() <= q && q <= &self.upper().to_rational()
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains_ball(&self, other: &Self) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Certainly `self < other`.
    pub fn lt(&self, other: &Self) -> bool {
        self.upper() < other.lower()
    }

    /// Certainly `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.upper() <= other.lower()
    }

    fn prec2(&self, other: &Self) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn neg(&self) -> Self {
        RealBall { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        if !self.contains_zero() {
            return if self.mid.is_negative() { self.neg() } else { self.clone() };
        }
        let hi = Dyadic::max(&self.upper(), &self.lower().neg());
        Self::from_endpoints(&Dyadic::zero(), &hi, self.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.mid.add(&other.mid), self.rad.add(&other.rad), self.prec2(other))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Self::new(self.mid.mul(&other.mid), rad, self.prec2(other))
    }

    pub fn sqr(&self) -> Self {
        if self.contains_zero() {
            let m = self.abs().upper();
            return Self::from_endpoints(&Dyadic::zero(), &m.mul(&m), self.prec);
        }
        self.mul(self)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        RealBall { mid: self.mid.mul_pow2(k), rad: self.rad.mul_pow2(k), prec: self.prec }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(k, self.prec))
    }

    /// Reciprocal; `None` when the ball contains zero.
    pub fn inv(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        let m = self.mid.abs();
        let low = m.sub(&self.rad);
        let q = Dyadic::one().div(&self.mid, self.prec + 2, Round::Down);
        let q_up = Dyadic::one().div(&self.mid, self.prec + 2, Round::Up);
        let denom = m.mul(&low).round(RAD_BITS + 2, Round::Down);
        let prop = self.rad.div(&denom, RAD_BITS + 2, Round::Up);
        Some(Self::new(q.clone(), prop.add(&q_up.sub(&q)), self.prec))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?.with_prec(self.prec2(other))))
    }

    /// Square root of the nonnegative part of the ball; `None` if the ball is
    /// entirely negative.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let lo = Dyadic::max(&self.lower(), &Dyadic::zero());
        let s_lo = lo.sqrt(self.prec + 2, Round::Down);
        let s_hi = self.upper().sqrt(self.prec + 2, Round::Up);
        Some(Self::from_endpoints(&s_lo, &s_hi, self.prec))
    }

    pub fn max(&self, other: &Self) -> Self {
        let lo = Dyadic::max(&self.lower(), &other.lower());
        let hi = Dyadic::max(&self.upper(), &other.upper());
        Self::from_endpoints(&lo, &hi, self.prec2(other))
    }

    pub fn min(&self, other: &Self) -> Self {
        let lo = Dyadic::min(&self.lower(), &other.lower());
        let hi = Dyadic::min(&self.upper(), &other.upper());
        Self::from_endpoints(&lo, &hi, self.prec2(other))
    }

    pub fn hull(&self, other: &Self) -> Self {
        let lo = Dyadic::min(&self.lower(), &other.lower());
        let hi = Dyadic::max(&self.upper(), &other.upper());
        Self::from_endpoints(&lo, &hi, self.prec2(other))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.mid.to_sci(20, Round::Down), self.rad.to_sci(3, Round::Up))
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A rectangle in the complex plane, stored as a pair of real balls.
#[derive(Clone, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> Self {
        ComplexBall { re, im }
    }

    pub fn real(re: RealBall) -> Self {
        let prec = re.prec();
        ComplexBall { re, im: RealBall::zero(prec) }
    }

    pub fn zero(prec: u32) -> Self {
        Self::real(RealBall::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::real(RealBall::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        ComplexBall { re: RealBall::zero(prec), im: RealBall::one(prec) }
    }

    /// A common bound on the error of both components.
    pub fn radius(&self) -> Dyadic {
        Dyadic::max(self.re.rad(), self.im.rad())
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexBall { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexBall { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn neg(&self) -> Self {
        ComplexBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        ComplexBall { re, im }
    }

    pub fn sqr(&self) -> Self {
        let re = self.re.sqr().sub(&self.im.sqr());
        let im = self.re.mul(&self.im).mul_pow2(1);
        ComplexBall { re, im }
    }

    pub fn scale(&self, s: &RealBall) -> Self {
        ComplexBall { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        ComplexBall { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    /// Enlarges both components by `r`.
    pub fn inflate(&self, r: &Dyadic) -> Self {
        let grow = |b: &RealBall| RealBall::new(b.mid().clone(), b.rad().add(r), b.prec());
        ComplexBall { re: grow(&self.re), im: grow(&self.im) }
    }

    /// `|z|^2` as a real ball.
    pub fn abs_sq(&self) -> RealBall {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> RealBall {
        self.abs_sq().sqrt().expect("a sum of squares is not negative")
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}i", self.re, self.im)
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn rational_enclosure() {
        let q = ratio(1, 3);
        let b = RealBall::from_rational(&q, 64);
        assert!(b.contains_rational(&q));
        assert!(b.rad() < &Dyadic::pow2(-63));
    }

    #[test]
    fn arithmetic_encloses_exact_results() {
        let third = RealBall::from_rational(&ratio(1, 3), 40);
        let seventh = RealBall::from_rational(&ratio(-2, 7), 40);
        assert!(third.add(&seventh).contains_rational(&ratio(1, 21)));
        assert!(third.mul(&seventh).contains_rational(&ratio(-2, 21)));
        assert!(third.div(&seventh).unwrap().contains_rational(&ratio(-7, 6)));
        assert!(seventh.sqr().contains_rational(&ratio(4, 49)));
        assert!(seventh.inv().unwrap().contains_rational(&ratio(-7, 2)));
    }

    #[test]
    fn sqrt_and_abs() {
        let two = RealBall::from_int(2, 80);
        let s = two.sqrt().unwrap();
        assert!(s.sqr().contains(&Dyadic::from_int(2)));
        let z = ComplexBall::new(RealBall::from_int(3, 60), RealBall::from_int(-4, 60));
        assert!(z.abs().contains(&Dyadic::from_int(5)));
        assert!(RealBall::from_int(-1, 10).sqrt().is_none());
    }

    #[test]
    fn straddling_zero() {
        let b = RealBall::new(Dyadic::zero(), Dyadic::one(), 32);
        assert!(b.inv().is_none());
        assert!(!b.sqr().lower().is_negative());
        assert!(b.abs().contains(&Dyadic::one()));
    }
}
