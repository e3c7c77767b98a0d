//! Elementary functions on balls: pi, log 2, exp, ln, roots of unity and
//! real radicals.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use super::ball::{ComplexBall, RealBall};
use super::dyadic::{scaled_root_floor, Dyadic};

const GUARD: u32 = 24;

type ConstCache = Mutex<HashMap<u32, RealBall>>;

fn cached(cache: &'static OnceLock<ConstCache>, prec: u32, compute: fn(u32) -> RealBall) -> RealBall {
    let cache = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("constant cache poisoned").get(&prec) {
        return b.clone();
    }
    let b = compute(prec);
    cache.lock().expect("constant cache poisoned").insert(prec, b.clone());
    b
}

/// Fixed-point sum of `sum_k (+/-)^k / ((2k+1) n^(2k+1))` with `w` fraction
/// bits, i.e. `atan(1/n)` when `alternate`, else `atanh(1/n)`. Returns the
/// scaled integer and an error bound in units of `2^-w`.
fn arctan_recip_fixed(n: u64, w: u32, alternate: bool) -> (BigInt, u64) {
    let one = BigInt::one() << w as usize;
    let n2 = BigInt::from(n * n);
    let mut power = &one / BigInt::from(n); // floor(2^w / n^(2k+1))
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if alternate && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        power /= &n2;
        k += 1;
        terms += 1;
    }
    // each truncation loses < 1 unit in `power` and `term`; the omitted tail
    // is below one unit since `power` reached zero and the series decreases
    // geometrically (atanh tail at most twice the first omitted term).
    (sum, 2 * terms + 2)
}

fn fixed_to_ball(v: BigInt, err_units: u64, w: u32, prec: u32) -> RealBall {
    let mid = Dyadic::new(v, -(w as i64));
    let rad = Dyadic::new(BigInt::from(err_units), -(w as i64));
    RealBall::new(mid, rad, prec)
}

fn compute_pi(prec: u32) -> RealBall {
    let w = prec + GUARD;
    let (a, ea) = arctan_recip_fixed(5, w, true);
    let (b, eb) = arctan_recip_fixed(239, w, true);
    fixed_to_ball(a * 16 - b * 4, 16 * ea + 4 * eb, w, prec)
}

fn compute_ln2(prec: u32) -> RealBall {
    let w = prec + GUARD;
    let (a, ea) = arctan_recip_fixed(3, w, false);
    fixed_to_ball(a * 2, 2 * ea, w, prec)
}

pub fn pi(prec: u32) -> RealBall {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    cached(&CACHE, prec, compute_pi)
}

pub fn ln2(prec: u32) -> RealBall {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    cached(&CACHE, prec, compute_ln2)
}

/// `floor(d * 2^w)`.
fn to_fixed(d: &Dyadic, w: u32) -> BigInt {
    let shift = d.exponent() + w as i64;
    if shift >= 0 {
        d.mantissa() << shift as usize
    } else {
        d.mantissa() >> (-shift) as usize
    }
}

/// Fixed-point Taylor sum of `exp(y)` for a point `|y| <= 1/2` with `w`
/// fraction bits, returned as a ball at `w` bits.
fn exp_small(y: &Dyadic, w: u32) -> RealBall {
    let one = BigInt::one() << w as usize;
    let yf = to_fixed(y, w);
    let mut term = one.clone();
    let mut sum = one;
    let mut n = 1u32;
    while !term.is_zero() {
        term = ((term * &yf) >> w as usize) / n;
        sum += &term;
        n += 1;
    }
    // every step truncates by at most a unit and halves earlier errors, so
    // each term is off by at most 4 units; the tail once a term rounds to
    // zero is below 2 units, and the 1-unit error in y moves exp by < 2.
    let err = 4 * n as u64 + 4;
    fixed_to_ball(sum, err, w, w)
}

fn exp_point(m: &Dyadic, prec: u32) -> RealBall {
    if m.is_zero() {
        return RealBall::one(prec);
    }
    let s = (m.mag() + 2).max(0);
    let wp = prec + GUARD + 2 * s as u32;
    let mut r = exp_small(&m.mul_pow2(-s), wp);
    for _ in 0..s {
        r = r.sqr();
    }
    r.with_prec(prec)
}

/// Rigorous `exp(x)`.
pub fn exp(x: &RealBall) -> RealBall {
    let prec = x.prec();
    if x.rad() > &Dyadic::one() {
        let lo = exp_point(&x.lower(), prec);
        let hi = exp_point(&x.upper(), prec);
        return RealBall::from_endpoints(&lo.lower(), &hi.upper(), prec);
    }
    let c = exp_point(x.mid(), prec);
    // |exp(m + e) - exp(m)| <= exp(m) * (exp(r) - 1) <= exp(m) * 2r for r <= 1
    let extra = c.upper().mul(&x.rad().mul_pow2(1));
    RealBall::new(c.mid().clone(), c.rad().add(&extra), prec)
}

fn ln_point(m: &Dyadic, prec: u32) -> RealBall {
    debug_assert!(m.is_positive());
    let w = prec + GUARD;
    // m = f * 2^e with f in [2/3, 4/3]
    let mut e = m.mag() - 1;
    let mut f = m.mul_pow2(-e);
    let four_thirds = Dyadic::from_int(4).div(&Dyadic::from_int(3), 8, super::Round::Down);
    while f > four_thirds {
        e += 1;
        f = f.mul_pow2(-1);
    }
    // z = (f - 1) / (f + 1), |z| <= 1/5, and ln f = 2 atanh(z)
    let one = BigInt::one() << w as usize;
    let ff = to_fixed(&f, w);
    let z = ((&ff - &one) << w as usize) / (&ff + &one);
    let negative = z.is_negative();
    let z = z.abs();
    let z2 = (&z * &z) >> w as usize;
    let mut power = z.clone();
    let mut sum = z;
    let mut k = 1u32;
    while !power.is_zero() {
        power = (power * &z2) >> w as usize;
        sum += &power / (2 * k + 1);
        k += 1;
    }
    // z is off by at most 2 units (moving atanh by < 3); each power by at
    // most 3 units and each term by 4; the tail after a zero power is below
    // 4 units.
    let err = 4 * k as u64 + 8;
    if negative {
        sum = -sum;
    }
    let lf = fixed_to_ball(sum, err, w, w).mul_pow2(1);
    lf.add(&ln2(w).mul_int(e)).with_prec(prec)
}

/// Rigorous natural logarithm; `None` unless the ball is strictly positive.
pub fn ln(x: &RealBall) -> Option<RealBall> {
    if !x.is_positive() {
        return None;
    }
    let prec = x.prec();
    let c = ln_point(x.mid(), prec);
    if x.is_exact() {
        return Some(c);
    }
    let low = x.lower();
    // |ln(m + e) - ln(m)| <= r / (m - r)
    let extra = x.rad().div(&low, 32, super::Round::Up);
    Some(RealBall::new(c.mid().clone(), c.rad().add(&extra), prec))
}

/// `exp(i theta)` for a real ball `theta`.
pub fn exp_i(theta: &RealBall) -> ComplexBall {
    let prec = theta.prec();
    let m = theta.mid();
    let s = (m.mag() + 2).max(0);
    let wp = prec + GUARD + 2 * s as u32;
    let y = RealBall::exact(m.mul_pow2(-s), wp);
    let iy = ComplexBall::new(RealBall::zero(wp), y);
    let mut sum = ComplexBall::one(wp);
    let mut term = ComplexBall::one(wp);
    let stop = Dyadic::pow2(-(wp as i64) - 4);
    let mut n = 1i64;
    loop {
        let inv_n = RealBall::one(wp).div(&RealBall::from_int(n, wp)).expect("n > 0");
        term = term.mul(&iy).scale(&inv_n);
        sum = sum.add(&term);
        n += 1;
        if term.radius() < stop && term.re.abs().upper() < stop && term.im.abs().upper() < stop {
            break;
        }
    }
    let tail = Dyadic::max(&term.re.abs().upper(), &term.im.abs().upper()).mul_pow2(1);
    let mut r = sum.inflate(&tail);
    for _ in 0..s {
        r = r.sqr();
    }
    // |exp(i a) - exp(i b)| <= |a - b|
    let r = r.inflate(theta.rad());
    ComplexBall::new(r.re.with_prec(prec), r.im.with_prec(prec))
}

/// `exp(2 pi i l / n)`, exact at the points where it is a unit in `Z[i]`.
pub fn root_of_unity(l: i64, n: u64, prec: u32) -> ComplexBall {
    let n_i = n as i64;
    let l = l.rem_euclid(n_i);
    if l == 0 {
        return ComplexBall::one(prec);
    }
    if 2 * l == n_i {
        return ComplexBall::one(prec).neg();
    }
    if 4 * l == n_i {
        return ComplexBall::i(prec);
    }
    if 4 * l == 3 * n_i {
        return ComplexBall::i(prec).neg();
    }
    let wp = prec + 8;
    let theta = pi(wp).mul_int(2 * l).div(&RealBall::from_int(n_i, wp)).expect("n > 0");
    let z = exp_i(&theta);
    ComplexBall::new(z.re.with_prec(prec), z.im.with_prec(prec))
}

/// The positive real `n`-th root of a positive integer.
pub fn nth_root_int(value: &BigInt, n: u32, prec: u32) -> RealBall {
    assert!(value > &BigInt::zero() && n >= 1);
    if n == 1 {
        return RealBall::from_int(value.clone(), prec);
    }
    let s = (prec as u64 + 2).saturating_sub(value.bits() / n as u64).max(2);
    let floor = scaled_root_floor(value, n, s);
    let exact = Pow::pow(&floor, n) == (value << (s * n as u64) as usize);
    let lo = Dyadic::new(floor.clone(), -(s as i64));
    if exact {
        return RealBall::exact(lo, prec);
    }
    let hi = Dyadic::new(floor + 1, -(s as i64));
    RealBall::from_endpoints(&lo, &hi, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(b: &RealBall, v: f64, tol: f64) -> bool {
        (b.to_f64() - v).abs() < tol
    }

    #[test]
    fn constants() {
        let p = pi(128);
        assert!(close(&p, std::f64::consts::PI, 1e-15));
        assert!(p.rad() < &Dyadic::pow2(-120));
        // 355/113 is slightly larger than pi
        let upper = Dyadic::from_int(355).div(&Dyadic::from_int(113), 200, crate::numeric::Round::Down);
        assert!(p.upper() < upper);
        assert!(close(&ln2(100), std::f64::consts::LN_2, 1e-15));
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        for &v in &[-40i64, -3, -1, 0, 1, 2, 10, 77] {
            let x = RealBall::from_int(v, 96);
            let e = exp(&x);
            assert!(close(&e, (v as f64).exp(), (v as f64).exp() * 1e-14));
            if v != 0 {
                let back = ln(&e).unwrap();
                assert!(back.contains(&Dyadic::from_int(v)), "v = {v}: {back:?}");
            }
        }
        assert!(ln(&RealBall::from_int(0, 64)).is_none());
    }

    #[test]
    fn unit_circle_values() {
        let z = root_of_unity(1, 3, 100);
        assert!(close(&z.re, -0.5, 1e-15));
        assert!(close(&z.im, 3f64.sqrt() / 2.0, 1e-15));
        assert!(z.radius() < Dyadic::pow2(-90));
        let w = root_of_unity(1, 8, 100);
        let two = w.add(&w.conj()).re.sqr();
        assert!(two.contains(&Dyadic::from_int(2)));
        assert_eq!(root_of_unity(1, 4, 64), ComplexBall::i(64));
    }

    #[test]
    fn radicals() {
        let r = nth_root_int(&BigInt::from(2), 3, 100);
        let cube = r.mul(&r).mul(&r);
        assert!(cube.contains(&Dyadic::from_int(2)));
        assert!(r.rad() < &Dyadic::pow2(-95));
        assert!(nth_root_int(&BigInt::from(27), 3, 64).is_exact());
    }
}
