//! Binary floating-point numbers `man * 2^exp` with exact arithmetic and
//! directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Exact dyadic rational. Canonical: the mantissa is odd, or zero with `exp == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Dyadic { man, exp: 0 };
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { man: man >> tz, exp: exp + tz as i64 }
        } else {
            Dyadic { man, exp }
        }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: e }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// An upper bound for `log2 |self|` (the position just past the top bit).
    pub fn mag(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.man.bits() as i64 + self.exp
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &other.man << (other.exp - e) as usize;
        Self::new(a + b, e)
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.man * &other.man, self.exp + other.exp)
    }

    pub fn max(a: &Self, b: &Self) -> Self {
        if a >= b { a.clone() } else { b.clone() }
    }

    pub fn min(a: &Self, b: &Self) -> Self {
        if a <= b { a.clone() } else { b.clone() }
    }

    /// Rounds to at most `prec` mantissa bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        // `>>` on BigInt rounds toward negative infinity.
        let floor = &self.man >> shift;
        let exact = (&floor << shift) == self.man;
        let man = match dir {
            Round::Down => floor,
            Round::Up if exact => floor,
            Round::Up => floor + 1,
        };
        Self::new(man, self.exp + shift as i64)
    }

    /// Rounds to `prec` bits (toward negative infinity) and returns the
    /// rounded value together with a bound on the absolute rounding error.
    pub fn round_with_error(&self, prec: u32) -> (Self, Self) {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return (self.clone(), Self::zero());
        }
        let shift = bits - prec as u64;
        let r = self.round(prec, Round::Down);
        (r, Self::pow2(self.exp + shift as i64))
    }

    /// Quotient rounded to `prec` bits in the given direction.
    pub fn div(&self, other: &Self, prec: u32, dir: Round) -> Self {
        assert!(!other.is_zero(), "Dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let s = (prec as i64 + other.man.bits() as i64 - self.man.bits() as i64 + 2).max(0);
        let num = &self.man << s as usize;
        let (q, r) = num.div_mod_floor(&other.man);
        let q = match dir {
            Round::Down => q,
            Round::Up if r.is_zero() => q,
            Round::Up => q + 1,
        };
        Self::new(q, self.exp - other.exp - s).round(prec, dir)
    }

    /// Integer quotient `a / b` rounded to `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Self {
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        Self::from_int(num).div(&Self::from_int(den), prec, dir)
    }

    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec, dir)
    }

    /// Square root of a nonnegative value rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Self {
        assert!(!self.is_negative(), "sqrt of negative Dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        let mut k = (2 * prec as i64 + 4 - self.man.bits() as i64).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let n = &self.man << k as usize;
        let r = n.sqrt();
        let r = if dir == Round::Up && &r * &r != n { r + 1 } else { r };
        Self::new(r, (self.exp - k) / 2).round(prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as usize)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.man >> shift as usize).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }

    /// Decimal scientific notation with `digits` significant digits, rounded
    /// in the given direction.
    pub fn to_sci(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let q = self.to_rational();
        let aq = q.abs();
        let mut e10 = ((self.mag() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        while scale10(&aq, -e10) >= BigRational::from_integer(10.into()) {
            e10 += 1;
        }
        while scale10(&aq, -e10) < BigRational::one() {
            e10 -= 1;
        }
        loop {
            let scaled = scale10(&q, digits as i64 - 1 - e10);
            let int = match dir {
                Round::Down => scaled.floor().to_integer(),
                Round::Up => scaled.ceil().to_integer(),
            };
            let s = int.abs().to_string();
            if s.len() as u32 > digits {
                // rounding carried into a new digit
                e10 += 1;
                continue;
            }
            let sign = if int.sign() == Sign::Minus { "-" } else { "" };
            let (head, tail) = s.split_at(1);
            let tail = tail.trim_end_matches('0');
            return if tail.is_empty() {
                format!("{sign}{head}e{e10}")
            } else {
                format!("{sign}{head}.{tail}e{e10}")
            };
        }
    }
}

fn scale10(q: &BigRational, k: i64) -> BigRational {
    let p = BigInt::from(10).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        q * BigRational::from_integer(p)
    } else {
        q / BigRational::from_integer(p)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        d.man.sign().cmp(&Sign::NoSign)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Floor of `(n)^(1/k) * 2^s` for a positive integer `n`, as an integer.
pub(crate) fn scaled_root_floor(n: &BigInt, k: u32, s: u64) -> BigInt {
    (n << (s * k as u64) as usize).nth_root(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(m.into(), e)
    }

    #[test]
    fn canonical_form_and_order() {
        assert_eq!(d(4, 0), d(1, 2));
        assert!(d(3, -1) < d(2, 0));
        assert!(d(-3, 0) < d(1, -10));
        assert_eq!(d(3, -1).add(&d(1, -1)), d(2, 0));
    }

    #[test]
    fn directed_rounding_brackets() {
        let x = d(0b1011_0111, 0);
        let lo = x.round(3, Round::Down);
        let hi = x.round(3, Round::Up);
        assert!(lo <= x && x <= hi);
        assert_eq!(lo, d(0b101, 5));
        assert_eq!(hi, d(0b110, 5));
        let neg = x.neg();
        assert!(neg.round(3, Round::Down) <= neg && neg <= neg.round(3, Round::Up));
    }

    #[test]
    fn division_and_sqrt_bracket() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = one.div(&three, 64, Round::Down);
        let hi = one.div(&three, 64, Round::Up);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third && third < hi.to_rational());
        let two = Dyadic::from_int(2);
        let s_lo = two.sqrt(80, Round::Down);
        let s_hi = two.sqrt(80, Round::Up);
        assert!(s_lo.mul(&s_lo) < two && two < s_hi.mul(&s_hi));
        assert_eq!(Dyadic::from_int(9).sqrt(10, Round::Up), Dyadic::from_int(3));
    }

    #[test]
    fn scientific_formatting() {
        assert_eq!(d(1, 0).to_sci(3, Round::Down), "1e0");
        assert_eq!(d(-3, -1).to_sci(2, Round::Down), "-1.5e0");
        let third = Dyadic::one().div(&Dyadic::from_int(3), 64, Round::Down);
        assert_eq!(third.to_sci(4, Round::Down), "3.333e-1");
        assert_eq!(third.to_sci(4, Round::Up), "3.334e-1");
        assert_eq!(d(1000, 0).to_sci(1, Round::Down), "1e3");
    }
}
