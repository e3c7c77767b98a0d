//! Minimal nonnegative integer combinations of a fixed set of lattice vectors
//! hitting a target: the per-radical-column subproblem of the minimal
//! representation count.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::simplex::{Lp, LpOutcome};
use crate::{Error, Result};

/// Largest depth explored by iterative deepening before handing over to
/// branch and bound.
pub(crate) const IDDFS_DEPTH: u128 = 10;
/// Branch-and-bound node budget per column.
pub(crate) const NODE_LIMIT: u64 = 200_000;

/// Vectors `v_t` (with `-v_t` present for each) and helpers shared by the
/// searches.
#[derive(Clone, Debug)]
pub(crate) struct ColumnSet {
    pub vecs: Vec<Vec<i64>>,
    /// Index of `-v_t`.
    pub neg: Vec<usize>,
    max_abs: Vec<i64>,
    max_l1: i64,
}

impl ColumnSet {
    pub fn new(vecs: Vec<Vec<i64>>) -> Self {
        let dim = vecs.first().map_or(0, Vec::len);
        let neg = vecs
            .iter()
            .map(|v| {
                let nv: Vec<i64> = v.iter().map(|x| -x).collect();
                vecs.iter().position(|w| *w == nv).expect("term set is closed under negation")
            })
            .collect();
        let max_abs = (0..dim).map(|c| vecs.iter().map(|v| v[c].abs()).max().unwrap_or(0)).collect();
        let max_l1 = vecs.iter().map(|v| v.iter().map(|x| x.abs()).sum()).max().unwrap_or(0);
        ColumnSet { vecs, neg, max_abs, max_l1 }
    }

    pub fn dim(&self) -> usize {
        self.max_abs.len()
    }

    fn lp(&self, target: &[BigInt]) -> Lp {
        let n = self.vecs.len();
        Lp {
            a: (0..self.dim()).map(|c| self.vecs.iter().map(|v| BigInt::from(v[c])).collect()).collect(),
            b: target.to_vec(),
            c: vec![BigRational::one(); n],
            lo: vec![BigInt::zero(); n],
            up: vec![None; n],
        }
    }

    /// Ceiling of the LP relaxation optimum.
    pub fn lower_bound(&self, target: &[BigInt]) -> Result<u128> {
        if target.iter().all(Zero::is_zero) {
            return Ok(0);
        }
        match self.lp(target).solve() {
            LpOutcome::Optimal { value, .. } => ceil_u128(&value),
            // the vectors span the lattice, so the relaxation is always feasible
            _ => Err(Error::Internal("column relaxation infeasible".into())),
        }
    }

    /// Minimal multiplicities summing to `target` with total at most `bound`,
    /// given a valid lower bound `lb`. `Ok(None)` when the optimum exceeds `bound`.
    pub fn solve(&self, target: &[BigInt], lb: u128, bound: u128) -> Result<Option<Vec<u128>>> {
        if target.iter().all(Zero::is_zero) {
            return Ok(Some(vec![0; self.vecs.len()]));
        }
        if lb > bound {
            return Ok(None);
        }
        let small: Option<Vec<i64>> = target.iter().map(|x| x.to_i64()).collect();
        if let Some(small) = small.filter(|_| lb <= IDDFS_DEPTH) {
            let top = bound.min(IDDFS_DEPTH);
            for depth in lb..=top {
                if let Some(m) = self.iddfs(&small, depth as usize) {
                    return Ok(Some(m));
                }
            }
            if bound <= IDDFS_DEPTH {
                return Ok(None);
            }
            return self.branch_and_bound(target, IDDFS_DEPTH + 1, bound);
        }
        self.branch_and_bound(target, lb, bound)
    }

    /// Exactly `depth` vectors (canonical nonincreasing index order) summing
    /// to `target`.
    pub fn iddfs(&self, target: &[i64], depth: usize) -> Option<Vec<u128>> {
        let mut res = target.to_vec();
        let mut mult = vec![0u128; self.vecs.len()];
        self.dfs(&mut res, depth, 0, &mut mult).then_some(mult)
    }

    fn dfs(&self, res: &mut [i64], left: usize, start: usize, mult: &mut [u128]) -> bool {
        if left == 0 {
            return res.iter().all(|&x| x == 0);
        }
        let l = left as i64;
        if res.iter().map(|x| x.abs()).sum::<i64>() > l * self.max_l1 {
            return false;
        }
        if res.iter().zip(&self.max_abs).any(|(x, m)| x.abs() > l * m) {
            return false;
        }
        for t in start..self.vecs.len() {
            if mult[self.neg[t]] > 0 {
                continue;
            }
            for (r, v) in res.iter_mut().zip(&self.vecs[t]) {
                *r -= v;
            }
            mult[t] += 1;
            if self.dfs(res, left - 1, t, mult) {
                return true;
            }
            mult[t] -= 1;
            for (r, v) in res.iter_mut().zip(&self.vecs[t]) {
                *r += v;
            }
        }
        false
    }

    /// Exact branch and bound over LP relaxations; the optimum is known to be
    /// at least `floor`.
    pub fn branch_and_bound(&self, target: &[BigInt], floor: u128, bound: u128) -> Result<Option<Vec<u128>>> {
        let base = self.lp(target);
        let mut best: Option<(u128, Vec<u128>)> = None;
        let mut stack = vec![(base.lo.clone(), base.up.clone())];
        let mut nodes = 0u64;
        while let Some((lo, up)) = stack.pop() {
            nodes += 1;
            if nodes > NODE_LIMIT {
                return Err(Error::NodeLimit(NODE_LIMIT));
            }
            let lp = Lp { lo, up, ..base.clone() };
            let LpOutcome::Optimal { value, x } = lp.solve() else { continue };
            let lb = ceil_u128(&value)?;
            let cutoff = best.as_ref().map_or(bound, |(b, _)| b.saturating_sub(1));
            if lb > cutoff {
                continue;
            }
            match x.iter().position(|v| !v.is_integer()) {
                None => {
                    let m: Vec<u128> = x.iter().map(|v| ceil_u128(v)).collect::<Result<_>>()?;
                    best = Some((lb, m));
                    if lb <= floor {
                        break;
                    }
                }
                Some(t) => {
                    let fl = x[t].floor().to_integer();
                    let mut down_up = lp.up.clone();
                    down_up[t] = Some(fl.clone());
                    let mut up_lo = lp.lo.clone();
                    up_lo[t] = fl + 1;
                    stack.push((up_lo, lp.up.clone()));
                    stack.push((lp.lo, down_up));
                }
            }
        }
        Ok(best.map(|(_, m)| m))
    }
}

fn ceil_u128(q: &BigRational) -> Result<u128> {
    let (d, r) = q.numer().div_rem(q.denom());
    let c = if r.is_positive() { d + 1 } else { d };
    c.max(BigInt::zero())
        .to_u128()
        .ok_or_else(|| Error::Internal("representation count exceeds u128".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagonal() -> ColumnSet {
        // +-1, +-z, +-z^2 with z^2 = -1 - z
        ColumnSet::new(vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1], vec![-1, -1], vec![1, 1]])
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hexagonal_lattice_counts() {
        let h = hexagonal();
        let count = |t: &[i64]| {
            let lb = h.lower_bound(&big(t)).unwrap();
            h.solve(&big(t), lb, 100).unwrap().map(|m| m.iter().sum::<u128>())
        };
        assert_eq!(count(&[2, 0]), Some(2));
        assert_eq!(count(&[1, 1]), Some(1));
        assert_eq!(count(&[2, -1]), Some(3));
        assert_eq!(count(&[0, 0]), Some(0));
        assert_eq!(count(&[40, -7]), Some(47));
    }

    #[test]
    fn searches_agree() {
        // +-1, +-i, +-z8 style set with a non-unimodular vertex
        let s = ColumnSet::new(vec![
            vec![1, 0, 0],
            vec![-1, 0, 0],
            vec![0, 1, 0],
            vec![0, -1, 0],
            vec![0, 0, 1],
            vec![0, 0, -1],
            vec![1, 1, 1],
            vec![-1, -1, -1],
        ]);
        for t in [[2i64, 2, 1], [3, 0, 1], [-1, 2, 2], [4, 4, 4], [1, -1, 0]] {
            let lb = s.lower_bound(&big(&t)).unwrap();
            let by_bnb = s.branch_and_bound(&big(&t), 0, 50).unwrap().unwrap();
            let by_iddfs = (lb..=12).find_map(|d| s.iddfs(&t, d as usize)).unwrap();
            assert_eq!(by_bnb.iter().sum::<u128>(), by_iddfs.iter().sum::<u128>(), "{t:?}");
        }
    }

    #[test]
    fn huge_targets() {
        let h = hexagonal();
        let t = vec![BigInt::from(10).pow(33u32), -BigInt::from(10).pow(30u32) * 7];
        let lb = h.lower_bound(&t).unwrap();
        let m = h.solve(&t, lb, u128::MAX).unwrap().unwrap();
        assert_eq!(m.iter().sum::<u128>(), lb);
    }
}
