//! Cyclotomic polynomials by exact division, with a process-wide cache.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::arith::divisors;
use super::poly::IntPolynomial;

fn cache() -> &'static Mutex<HashMap<u64, Arc<IntPolynomial>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<IntPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial, computed as `(X^n - 1) / prod_{d | n, d < n} Phi_d`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn cyclotomic_poly(n: u64) -> Arc<IntPolynomial> {
    assert!(n >= 1, "cyclotomic_poly: n must be positive");
    if let Some(p) = cache().lock().expect("cyclotomic cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    let mut poly = IntPolynomial::binomial(n as usize, 1);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        poly = poly
            .div_exact_monic(&cyclotomic_poly(d))
            .expect("X^n - 1 is divisible by Phi_d for every d | n");
    }
    let poly = Arc::new(poly);
    cache()
        .lock()
        .expect("cyclotomic cache poisoned")
        .entry(n)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::arith::euler_phi;

    #[test]
    fn small_cases() {
        assert_eq!(*cyclotomic_poly(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(2), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(*cyclotomic_poly(6), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(*cyclotomic_poly(12), IntPolynomial::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn degree_is_phi() {
        for n in 1..=60 {
            let p = cyclotomic_poly(n);
            assert_eq!(p.degree(), Some(euler_phi(n) as usize));
            assert!(p.leading().unwrap() == &1.into());
        }
    }

    #[test]
    fn product_over_divisors_is_x_n_minus_1() {
        for n in 1..=30u64 {
            let prod = divisors(n)
                .into_iter()
                .fold(IntPolynomial::one(), |acc, d| acc.mul(&cyclotomic_poly(d)));
            assert_eq!(prod, IntPolynomial::binomial(n as usize, 1), "n = {n}");
        }
    }

    #[test]
    fn concurrent_access_is_consistent() {
        let handles: Vec<_> = (0..8)
            .map(|t| std::thread::spawn(move || cyclotomic_poly(30 + t % 3)))
            .collect();
        for h in handles {
            let p = h.join().unwrap();
            assert!(p.degree().unwrap() > 0);
        }
    }
}
