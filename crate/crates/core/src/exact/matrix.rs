//! Exact rational matrices: Bareiss determinant, fraction-free solving,
//! inversion and Hessenberg characteristic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::RatPolynomial;
use crate::error::{Error, Result};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| BigRational::from_integer(v.into())))
            .collect();
        Self::from_entries(r, c, entries)
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {} (expected {rows})",
                    col.len()
                )));
            }
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn trace(&self) -> Result<BigRational> {
        self.require_square()?;
        Ok((0..self.rows).fold(BigRational::zero(), |acc, i| acc + &self[(i, i)]))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Exact determinant by Bareiss fraction-free elimination on the
    /// row-scaled integer matrix.
    pub fn det(&self) -> Result<BigRational> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(BigRational::one());
        }
        let (mut m, scale) = integer_rows(self, None);
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Ok(BigRational::zero());
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = sign * &m[n - 1][n - 1];
        Ok(BigRational::new(det, scale))
    }

    /// Solves `A x = b` exactly by fraction-free elimination.
    ///
    /// Returns `Ok(None)` for an inconsistent system and an error when the
    /// solution is not unique.
    pub fn solve(&self, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let (mut m, _) = integer_rows(self, Some(b));
        let (rows, cols) = (self.rows, self.cols);
        // Fraction-free forward elimination with row pivoting.
        let mut pivot_row = 0;
        let mut pivots = Vec::with_capacity(cols);
        let mut prev = BigInt::one();
        for c in 0..cols {
            let Some(p) = (pivot_row..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(pivot_row, p);
            for i in pivot_row + 1..rows {
                if m[i][c].is_zero() {
                    for j in c + 1..=cols {
                        let v = &m[i][j] * &m[pivot_row][c];
                        m[i][j] = v / &prev;
                    }
                    continue;
                }
                for j in c + 1..=cols {
                    let v = &m[i][j] * &m[pivot_row][c] - &m[i][c] * &m[pivot_row][j];
                    m[i][j] = v / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[pivot_row][c].clone();
            pivots.push(c);
            pivot_row += 1;
            if pivot_row == rows {
                break;
            }
        }
        if (pivot_row..rows).any(|i| !m[i][cols].is_zero()) {
            return Ok(None);
        }
        if pivots.len() < cols {
            return Err(Error::Underdetermined { rank: pivots.len(), cols });
        }
        let mut x = vec![BigRational::zero(); cols];
        for (r, &c) in pivots.iter().enumerate().rev() {
            let mut acc = BigRational::from_integer(m[r][cols].clone());
            for j in c + 1..cols {
                if !m[r][j].is_zero() {
                    acc -= &x[j] * BigRational::from_integer(m[r][j].clone());
                }
            }
            x[c] = acc / BigRational::from_integer(m[r][c].clone());
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![BigRational::zero(); n];
            e[j] = BigRational::one();
            match self.solve(&e) {
                Ok(Some(x)) => cols.push(x),
                Ok(None) | Err(Error::Underdetermined { .. }) => return Err(Error::NotInvertible),
                Err(e) => return Err(e),
            }
        }
        Self::from_columns(n, &cols)
    }

    /// Characteristic polynomial `det(X I - A)` via reduction to upper
    /// Hessenberg form.
    pub fn char_poly(&self) -> Result<RatPolynomial> {
        self.require_square()?;
        let n = self.rows;
        let mut h: Vec<Vec<BigRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        for m in 1..n {
            let Some(i) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
                continue;
            };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            let t = h[m][m - 1].clone();
            for i in m + 1..n {
                if h[i][m - 1].is_zero() {
                    continue;
                }
                let u = &h[i][m - 1] / &t;
                let (head, tail) = h.split_at_mut(i);
                for (dst, src) in tail[0].iter_mut().zip(&head[m]) {
                    if !src.is_zero() {
                        *dst -= &u * src;
                    }
                }
                for row in h.iter_mut() {
                    if !row[i].is_zero() {
                        let add = &u * &row[i];
                        row[m] += add;
                    }
                }
            }
        }
        // p_0 = 1, p_m = (X - h_mm) p_{m-1} - sum_{i<m} h_im (prod sub-diagonal) p_{i-1}.
        let x = RatPolynomial::new(vec![BigRational::zero(), BigRational::one()]);
        let mut p: Vec<RatPolynomial> = vec![RatPolynomial::new(vec![BigRational::one()])];
        for m in 0..n {
            let lin = x.add(&RatPolynomial::new(vec![-h[m][m].clone()]));
            let mut next = lin.mul(&p[m]);
            let mut t = BigRational::one();
            for i in (0..m).rev() {
                t *= &h[i + 1][i];
                if t.is_zero() {
                    break;
                }
                let c = &t * &h[i][m];
                if !c.is_zero() {
                    next = next.add(&p[i].scale(&-c));
                }
            }
            p.push(next);
        }
        Ok(p.pop().expect("nonempty"))
    }
}

/// Row-scales to integer rows (optionally augmented by `b`); returns the
/// rows and the product of the scale factors.
fn integer_rows(a: &RationalMatrix, b: Option<&[BigRational]>) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut total = BigInt::one();
    let rows = (0..a.rows)
        .map(|i| {
            let mut row: Vec<&BigRational> = a.row(i).iter().collect();
            if let Some(b) = b {
                row.push(&b[i]);
            }
            let l = row.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
            total *= &l;
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    (rows, total)
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Free-function form of [`RationalMatrix::solve`].
pub fn solve_linear(a: &RationalMatrix, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    a.solve(b)
}

/// Free-function form of [`RationalMatrix::det`].
pub fn det(a: &RationalMatrix) -> Result<BigRational> {
    a.det()
}

/// Largest absolute numerator/denominator bit length; handy for diagnostics.
pub fn max_bits(v: &[BigRational]) -> u64 {
    v.iter()
        .map(|x| x.numer().abs().bits().max(x.denom().bits()))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn determinant_examples() {
        let a = RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 4]]).unwrap();
        assert_eq!(a.det().unwrap(), q(8, 1));
        let s = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(s.det().unwrap(), q(0, 1));
        let ns = RationalMatrix::zeros(2, 3);
        assert!(matches!(ns.det(), Err(Error::NotSquare { .. })));
        // pivoting needed
        let p = RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(p.det().unwrap(), q(-1, 1));
    }

    #[test]
    fn solve_examples() {
        let id = RationalMatrix::identity(2);
        assert_eq!(id.solve(&[q(3, 1), q(1, 2)]).unwrap(), Some(vec![q(3, 1), q(1, 2)]));
        let d = RationalMatrix::from_i64_rows(&[&[2, 0], &[0, 4]]).unwrap();
        assert_eq!(d.solve(&[q(1, 1), q(1, 1)]).unwrap(), Some(vec![q(1, 2), q(1, 4)]));
        let s = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, -1]]).unwrap();
        assert_eq!(s.solve(&[q(2, 1), q(0, 1)]).unwrap(), Some(vec![q(1, 1), q(1, 1)]));
    }

    #[test]
    fn solve_overdetermined_and_inconsistent() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        assert_eq!(a.solve(&[q(1, 1), q(2, 1), q(3, 1)]).unwrap(), Some(vec![q(1, 1), q(2, 1)]));
        assert_eq!(a.solve(&[q(1, 1), q(2, 1), q(4, 1)]).unwrap(), None);
        let sing = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]).unwrap();
        assert!(matches!(sing.solve(&[q(1, 1), q(1, 1)]), Err(Error::Underdetermined { .. })));
        assert!(matches!(sing.solve(&[q(1, 1)]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn char_poly_of_companion_matrix() {
        // companion of X^3 - 2X + 5
        let c = RationalMatrix::from_i64_rows(&[&[0, 0, -5], &[1, 0, 2], &[0, 1, 0]]).unwrap();
        let p = c.char_poly().unwrap();
        assert_eq!(p.coeffs(), &[q(5, 1), q(-2, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn char_poly_needs_row_swap() {
        let a = RationalMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 3, 1], &[4, 0, 2]]).unwrap();
        let p = a.char_poly().unwrap();
        // constant term is -det, X^2 coefficient is -trace
        assert_eq!(p.coeff(0), -a.det().unwrap());
        assert_eq!(p.coeff(2), -a.trace().unwrap());
        assert!(p.is_monic());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = RationalMatrix::from_i64_rows(&[&[2, 1], &[7, 4]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
    }
}
