//! Small-integer number theory: factorization, Euler's totient, divisors,
//! perfect-power detection.

use num_integer::Integer;

/// Prime factorization with primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && matches!(factorize(n).as_slice(), [(_, 1)])
}

/// Returns `Some((m, e))` with `a = m^e`, `m >= 2`, `e >= 2` maximal, or `None`.
pub fn perfect_power(a: u64) -> Option<(u64, u32)> {
    if a < 4 {
        return None;
    }
    let f = factorize(a);
    let g = f.iter().fold(0u32, |g, &(_, e)| g.gcd(&e));
    if g < 2 {
        return None;
    }
    let base = f.iter().map(|&(p, e)| p.pow(e / g)).product();
    Some((base, g))
}

/// The squarefree kernel `s` with `a = s * m^2`.
pub fn squarefree_part(a: u64) -> u64 {
    factorize(a)
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p)
        .product()
}

/// Ramanujan's sum: the sum of `zeta_n^(i*l)` over units `l` mod `n`.
pub fn ramanujan_sum(i: u64, n: u64) -> i64 {
    let g = gcd(i % n, n);
    let q = n / g;
    mobius(q) * (euler_phi(n) / euler_phi(q)) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_and_phi() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power(4), Some((2, 2)));
        assert_eq!(perfect_power(72), None);
        assert_eq!(perfect_power(64), Some((2, 6)));
        assert_eq!(perfect_power(2), None);
        assert_eq!(perfect_power(1), None);
        assert_eq!(squarefree_part(12), 3);
    }

    #[test]
    fn ramanujan_sums_match_direct_sum() {
        for n in 1..20u64 {
            for i in 0..2 * n {
                let direct: f64 = (0..n)
                    .filter(|&l| gcd(l, n) == 1)
                    .map(|l| (2.0 * std::f64::consts::PI * (i * l) as f64 / n as f64).cos())
                    .sum();
                assert!((direct - ramanujan_sum(i, n) as f64).abs() < 1e-9, "n={n} i={i}");
            }
        }
    }
}
