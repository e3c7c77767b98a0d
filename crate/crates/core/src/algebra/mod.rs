//! The algebra `Q[x, y] / (Phi_N(x), y^r - a)` modelling the splitting field of
//! `X^N - a`, its elements, and the `(l, k)` action of its embeddings.
//!
//! For `a > 1` the radical degree is `r = N`. For `a = 1` the radical is the
//! unit `1`, `y` is identified with `1` and `r = 1`, leaving the cyclotomic
//! field `Q(zeta_N)` itself.

mod element;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::arith::{euler_phi, factorize, gcd, perfect_power, squarefree_part};
use crate::exact::{cyclotomic_poly, IntPolynomial};
use crate::{Error, Result};

pub use element::AlgebraElement;
pub use parse::parse_element;

/// Shared handle to an algebra; elements keep one alive.
pub type Algebra = Arc<KummerAlgebra>;

pub struct KummerAlgebra {
    a: u64,
    n: u64,
    phi: usize,
    r: usize,
    factorization: Vec<(u64, u32)>,
    cyclo: Arc<IntPolynomial>,
    /// `x^m` reduced modulo `Phi_N`, for `0 <= m < N`.
    xpow: Vec<Vec<BigInt>>,
}

fn algebra_cache() -> &'static Mutex<HashMap<(u64, u64), Algebra>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Algebra>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (or fetches from the process-wide cache) the algebra for `(a, N)`.
pub fn make_algebra(a: u64, n: u64) -> Result<Algebra> {
    if a == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("a and N must be positive (a={a}, N={n})")));
    }
    if let Some((base, exp)) = perfect_power(a) {
        return Err(Error::PerfectPowerRadicand { a, base, exp });
    }
    if let Some(alg) = algebra_cache().lock().expect("algebra cache poisoned").get(&(a, n)) {
        return Ok(Arc::clone(alg));
    }
    let cyclo = cyclotomic_poly(n);
    let phi = euler_phi(n) as usize;
    let xpow = reduced_powers(&cyclo, n as usize);
    let alg = Arc::new(KummerAlgebra {
        a,
        n,
        phi,
        r: if a == 1 { 1 } else { n as usize },
        factorization: factorize(n),
        cyclo,
        xpow,
    });
    let mut cache = algebra_cache().lock().expect("algebra cache poisoned");
    Ok(Arc::clone(cache.entry((a, n)).or_insert(alg)))
}

fn reduced_powers(cyclo: &IntPolynomial, n: usize) -> Vec<Vec<BigInt>> {
    let phi = cyclo.degree().expect("cyclotomic polynomials are nonzero");
    let c = cyclo.coeffs();
    let mut out = Vec::with_capacity(n);
    let mut cur = vec![BigInt::zero(); phi];
    if phi > 0 {
        cur[0] = BigInt::one();
    }
    for _ in 0..n {
        out.push(cur.clone());
        // multiply by x, then replace x^phi by -(c_0 + ... + c_{phi-1} x^{phi-1})
        let top = cur.pop().unwrap_or_default();
        cur.insert(0, BigInt::zero());
        if !top.is_zero() {
            for (k, ck) in c.iter().take(phi).enumerate() {
                cur[k] -= &top * ck;
            }
        }
    }
    out
}

impl KummerAlgebra {
    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    /// Number of radical powers `y^j` in the basis.
    pub fn radical_degree(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.phi * self.r
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn cyclo(&self) -> &IntPolynomial {
        &self.cyclo
    }

    /// Basis index of `x^i y^j`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.r + j
    }

    /// `(i, j)` of a basis index.
    pub fn monomial(&self, idx: usize) -> (usize, usize) {
        (idx / self.r, idx % self.r)
    }

    /// `x^m` reduced, as coefficients of `1, x, ..., x^(phi-1)`.
    pub(crate) fn x_power(&self, m: u64) -> &[BigInt] {
        &self.xpow[(m % self.n) as usize]
    }

    pub fn same_as(&self, other: &KummerAlgebra) -> bool {
        self.a == other.a && self.n == other.n
    }

    pub fn embeddings(&self) -> Vec<Embedding> {
        let mut out = Vec::with_capacity(self.dim());
        for l in (0..self.n).filter(|&l| gcd(l, self.n) == 1) {
            for k in 0..self.r as u64 {
                out.push(Embedding { l, k });
            }
        }
        out
    }

    /// Embeddings fixing the copy of `Q_a(N1)` pointwise.
    pub fn relative_embeddings(&self, n1: u64) -> Result<Vec<Embedding>> {
        self.check_divisor(n1)?;
        Ok(self
            .embeddings()
            .into_iter()
            .filter(|e| (e.l % n1) == 1 % n1 && e.k % n1 == 0)
            .collect())
    }

    pub(crate) fn check_divisor(&self, n1: u64) -> Result<()> {
        if n1 == 0 || self.n % n1 != 0 {
            return Err(Error::NotADivisor { n: self.n, n1 });
        }
        Ok(())
    }

    /// The algebra `Q_a(N1)` for a divisor `N1`.
    pub fn sub_algebra(&self, n1: u64) -> Result<Algebra> {
        self.check_divisor(n1)?;
        make_algebra(self.a, n1)
    }

    pub fn field_status(&self) -> FieldStatus {
        field_degree_check(self)
    }
}

impl fmt::Debug for KummerAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}({}) [dim {}]", self.a, self.n, self.dim())
    }
}

/// The embedding `x -> zeta_N^l`, `y -> zeta_N^k a^(1/N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Embedding {
    pub l: u64,
    pub k: u64,
}

impl Embedding {
    pub const IDENTITY: Embedding = Embedding { l: 1, k: 0 };

    /// `self` followed by `outer`: the embedding `outer o self`.
    pub fn then(&self, outer: &Embedding, n: u64) -> Embedding {
        Embedding { l: (outer.l * self.l) % n.max(1), k: (outer.l * self.k + outer.k) % n.max(1) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldStatus {
    CertifiedField,
    DegreeDropDetected,
    Unverified,
}

impl fmt::Display for FieldStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldStatus::CertifiedField => "certified_field",
            FieldStatus::DegreeDropDetected => "degree_drop_detected",
            FieldStatus::Unverified => "unverified",
        })
    }
}

/// Whether `X^N - a` is known to stay irreducible over `Q(zeta_N)`.
///
/// The only way the degree can drop for a non-power radicand is through
/// `sqrt(s)` lying in `Q(zeta_N)`, where `s` is the squarefree part of `a`;
/// that happens exactly when the discriminant of `Q(sqrt(s))` divides `N`.
pub fn field_degree_check(alg: &KummerAlgebra) -> FieldStatus {
    let (a, n) = (alg.a, alg.n);
    if a == 1 || n % 2 == 1 {
        return FieldStatus::CertifiedField;
    }
    let s = squarefree_part(a);
    let disc = if s % 4 == 1 { s } else { 4 * s };
    if n % disc == 0 {
        FieldStatus::DegreeDropDetected
    } else if n % 4 != 0 {
        FieldStatus::CertifiedField
    } else {
        FieldStatus::Unverified
    }
}
