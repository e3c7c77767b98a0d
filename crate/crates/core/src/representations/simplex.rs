//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Solves `min c.x` subject to `A x = b`, `lo <= x <= up`. Sizes here are tiny
//! (a few dozen columns), so a dense tableau is plenty.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

/// An equality-constrained LP with per-variable bounds.
#[derive(Clone, Debug)]
pub struct Lp {
    pub a: Vec<Vec<BigInt>>,
    pub b: Vec<BigInt>,
    pub c: Vec<BigRational>,
    pub lo: Vec<BigInt>,
    pub up: Vec<Option<BigInt>>,
}

struct Tableau {
    /// Rows of `[coefficients | rhs]`.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn rhs(&self, r: usize) -> &BigRational {
        &self.rows[r][self.ncols]
    }

    /// Minimizes `cost` over columns `< allowed`; `false` when unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        loop {
            // reduced cost d_j = c_j - c_B . column_j
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (r, &bj) in self.basis.iter().enumerate() {
                    let a = &self.rows[r][j];
                    if !a.is_zero() && !cost[bj].is_zero() {
                        d -= &cost[bj] * a;
                    }
                }
                if d.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if a.is_positive() {
                    let ratio = self.rhs(r) / a;
                    let better = match &leave {
                        None => true,
                        Some((lr, lv)) => ratio < *lv || (ratio == *lv && self.basis[r] < self.basis[*lr]),
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, j);
        }
    }
}

impl Lp {
    pub fn solve(&self) -> LpOutcome {
        let n = self.c.len();
        let m = self.a.len();
        // shift x = lo + x'; upper bounds become rows x'_t + s_t = up_t - lo_t
        let mut rows: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
        let bounded: Vec<usize> = (0..n).filter(|&t| self.up[t].is_some()).collect();
        let width = n + bounded.len();
        for i in 0..m {
            let mut row = vec![BigRational::zero(); width];
            let mut rhs = BigRational::from_integer(self.b[i].clone());
            for t in 0..n {
                if !self.a[i][t].is_zero() {
                    row[t] = BigRational::from_integer(self.a[i][t].clone());
                    rhs -= BigRational::from_integer(&self.a[i][t] * &self.lo[t]);
                }
            }
            rows.push((row, rhs));
        }
        for (s, &t) in bounded.iter().enumerate() {
            let up = self.up[t].as_ref().expect("bounded");
            if up < &self.lo[t] {
                return LpOutcome::Infeasible;
            }
            let mut row = vec![BigRational::zero(); width];
            row[t] = BigRational::one();
            row[n + s] = BigRational::one();
            rows.push((row, BigRational::from_integer(up - &self.lo[t])));
        }
        for (row, rhs) in rows.iter_mut() {
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                *rhs = -rhs.clone();
            }
        }
        let nrows = rows.len();
        let ncols = width + nrows;
        let mut tab = Tableau { rows: Vec::with_capacity(nrows), basis: Vec::with_capacity(nrows), ncols };
        for (r, (mut row, rhs)) in rows.into_iter().enumerate() {
            row.resize(ncols, BigRational::zero());
            row[width + r] = BigRational::one();
            row.push(rhs);
            tab.rows.push(row);
            tab.basis.push(width + r);
        }
        let mut phase1 = vec![BigRational::zero(); ncols];
        for v in phase1.iter_mut().skip(width) {
            *v = BigRational::one();
        }
        tab.optimize(&phase1, ncols);
        let infeas: BigRational = (0..nrows).filter(|&r| tab.basis[r] >= width).map(|r| tab.rhs(r).clone()).sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis; drop redundant rows
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= width {
                match (0..width).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        let mut cost = vec![BigRational::zero(); ncols];
        cost[..n].clone_from_slice(&self.c);
        if !tab.optimize(&cost, width) {
            return LpOutcome::Unbounded;
        }
        let mut x: Vec<BigRational> = self.lo.iter().map(|l| BigRational::from_integer(l.clone())).collect();
        for (r, &bj) in tab.basis.iter().enumerate() {
            if bj < n {
                x[bj] += tab.rhs(r);
            }
        }
        let value = x.iter().zip(&self.c).map(|(xi, ci)| xi * ci).sum();
        LpOutcome::Optimal { value, x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_programs() {
        // min x + y + z, x + 2y = 3, y + z = 1
        let lp = Lp {
            a: vec![ints(&[1, 2, 0]), ints(&[0, 1, 1])],
            b: ints(&[3, 1]),
            c: vec![rat(1), rat(1), rat(1)],
            lo: ints(&[0, 0, 0]),
            up: vec![None, None, None],
        };
        match lp.solve() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, rat(2));
                assert_eq!(x, vec![rat(1), rat(1), rat(0)]);
            }
            other => panic!("{other:?}"),
        }
        let mut capped = lp.clone();
        capped.up[1] = Some(BigInt::from(0));
        match capped.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(4)),
            other => panic!("{other:?}"),
        }
        let mut infeasible = lp.clone();
        infeasible.lo[2] = BigInt::from(2);
        assert_eq!(infeasible.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn fractional_vertex_and_redundant_rows() {
        // min x + y, 2x + 2y = 3 (twice)
        let lp = Lp {
            a: vec![ints(&[2, 2]), ints(&[2, 2])],
            b: ints(&[3, 3]),
            c: vec![rat(1), rat(1)],
            lo: ints(&[0, 0]),
            up: vec![None, None],
        };
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(3, 2)),
            other => panic!("{other:?}"),
        }
        let neg = Lp {
            a: vec![ints(&[1, -1])],
            b: ints(&[-5]),
            c: vec![rat(1), rat(1)],
            lo: ints(&[0, 0]),
            up: vec![None, None],
        };
        match neg.solve() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, rat(5));
                assert_eq!(x, vec![rat(0), rat(5)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
