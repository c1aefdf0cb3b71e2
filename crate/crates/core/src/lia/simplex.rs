//! Exact two-phase simplex over the rationals for rows `a·y ≤ b` with free
//! variables `y`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A row `coeffs·y ≤ rhs`.
#[derive(Debug, Clone)]
pub(crate) struct Ineq {
    pub coeffs: Vec<BigInt>,
    pub rhs: BigInt,
}

pub(crate) enum LpResult {
    Infeasible,
    /// A vertex minimizing the objective (or just feasible when unbounded).
    Optimal(Vec<BigRational>),
}

struct Tableau {
    /// `rows[i]` holds the coefficients of every column followed by the rhs.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost·x` over the columns `< allowed`. Returns false when the
    /// objective is unbounded.
    fn minimize(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        loop {
            // reduced costs: c_j - c_B · column_j
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    rc -= &cost[self.basis[i]] * &row[j];
                }
                if rc.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}

/// Solves `min objective·y` subject to `rows`, `y` free.
pub(crate) fn solve_lp(rows: &[Ineq], nvars: usize, objective: &[BigInt]) -> LpResult {
    let zero = BigRational::zero();
    let one = BigRational::from_integer(BigInt::from(1));
    let m = rows.len();
    // columns: y⁺ (nvars), y⁻ (nvars), slacks (m), artificials (m)
    let structural = 2 * nvars;
    let art_start = structural + m;
    let cols = art_start + m;
    let mut tab = Tableau { rows: Vec::with_capacity(m), basis: Vec::with_capacity(m), cols };
    for (i, row) in rows.iter().enumerate() {
        let mut r = vec![zero.clone(); cols + 1];
        let flip = row.rhs.is_negative();
        let sign = if flip { -one.clone() } else { one.clone() };
        for (j, a) in row.coeffs.iter().enumerate() {
            let a = BigRational::from_integer(a.clone());
            r[j] = &sign * &a;
            r[nvars + j] = -(&sign * &a);
        }
        r[structural + i] = sign.clone();
        r[cols] = &sign * BigRational::from_integer(row.rhs.clone());
        if flip {
            r[art_start + i] = one.clone();
            tab.basis.push(art_start + i);
        } else {
            tab.basis.push(structural + i);
        }
        tab.rows.push(r);
    }

    let mut phase1 = vec![zero.clone(); cols];
    for c in phase1.iter_mut().skip(art_start) {
        *c = one.clone();
    }
    tab.minimize(&phase1, cols);
    let infeasibility: BigRational =
        tab.rows.iter().zip(&tab.basis).filter(|(_, &b)| b >= art_start).map(|(r, _)| r[cols].clone()).sum();
    if infeasibility.is_positive() {
        return LpResult::Infeasible;
    }
    // drive zero-valued artificials out of the basis where possible
    for i in 0..m {
        if tab.basis[i] >= art_start {
            if let Some(c) = (0..art_start).find(|&c| !tab.rows[i][c].is_zero()) {
                tab.pivot(i, c);
            }
        }
    }
    let keep: Vec<usize> = (0..m).filter(|&i| tab.basis[i] < art_start).collect();
    tab.rows = keep.iter().map(|&i| tab.rows[i].clone()).collect();
    tab.basis = keep.iter().map(|&i| tab.basis[i]).collect();

    let mut phase2 = vec![zero.clone(); cols];
    for (j, c) in objective.iter().enumerate() {
        phase2[j] = BigRational::from_integer(c.clone());
        phase2[nvars + j] = -BigRational::from_integer(c.clone());
    }
    tab.minimize(&phase2, art_start);

    let mut values = vec![zero.clone(); structural];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < structural {
            values[b] = tab.rows[i][cols].clone();
        }
    }
    LpResult::Optimal((0..nvars).map(|j| &values[j] - &values[nvars + j]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ineq(coeffs: &[i64], rhs: i64) -> Ineq {
        Ineq { coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(), rhs: BigInt::from(rhs) }
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn infeasible_box() {
        let rows = [ineq(&[1], 1), ineq(&[-1], -2)];
        assert!(matches!(solve_lp(&rows, 1, &[BigInt::from(0)]), LpResult::Infeasible));
    }

    #[test]
    fn fractional_vertex() {
        // 2y ≥ 1, minimize y
        let rows = [ineq(&[-2], -1)];
        let LpResult::Optimal(v) = solve_lp(&rows, 1, &[BigInt::from(1)]) else { panic!() };
        assert_eq!(v, vec![rat(1, 2)]);
    }

    #[test]
    fn negative_values() {
        // y ≤ -3, -y ≤ 5, maximize y
        let rows = [ineq(&[1], -3), ineq(&[-1], 5)];
        let LpResult::Optimal(v) = solve_lp(&rows, 1, &[BigInt::from(-1)]) else { panic!() };
        assert_eq!(v, vec![rat(-3, 1)]);
    }
}
