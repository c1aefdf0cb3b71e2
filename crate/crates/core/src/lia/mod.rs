//! Conjunctions of linear equalities and inequalities over the naturals.
//!
//! Equalities are solved first over the integers: unimodular column
//! operations bring them to triangular form, which either refutes them by a
//! divisibility argument or yields the general solution `x = x₀ + T·y` with
//! free integers `y`. The remaining inequalities (including `x ≥ 0`) are
//! tightened by their coefficient gcd and decided by branch and bound over an
//! exact rational simplex.

mod simplex;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lengths::{LinSystem, LinVar, Rel};

use simplex::{solve_lp, Ineq, LpResult};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LiaModel {
    pub values: BTreeMap<LinVar, u64>,
}

impl LiaModel {
    /// Value of `v`; variables absent from the system read as 0.
    pub fn get(&self, v: &LinVar) -> u64 {
        self.values.get(v).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiaOutcome {
    Sat(LiaModel),
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiaError {
    #[error("model value does not fit in 64 bits")]
    CoefficientOverflow,
    #[error("branch and bound exceeded {0} nodes")]
    ResourceExhausted(usize),
}

pub fn lia_sat(sys: &LinSystem) -> Result<LiaOutcome, LiaError> {
    lia_sat_with(sys, DEFAULT_NODE_CAP)
}

/// General integer solution of the equalities: `x = x0 + T·y`.
struct Lattice {
    x0: Vec<BigInt>,
    t: Vec<Vec<BigInt>>,
    free: usize,
}

fn solve_equalities(eqs: &[(Vec<BigInt>, BigInt)], n: usize) -> Option<Lattice> {
    let mut a: Vec<Vec<BigInt>> = eqs.iter().map(|(c, _)| c.clone()).collect();
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut z: Vec<BigInt> = Vec::new();
    let mut pc = 0;

    let col_sub = |m: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in m.iter_mut() {
            let s = &row[src] * q;
            row[dst] -= s;
        }
    };
    let col_swap = |m: &mut Vec<Vec<BigInt>>, x: usize, y: usize| {
        for row in m.iter_mut() {
            row.swap(x, y);
        }
    };

    for (i, (_, b)) in eqs.iter().enumerate() {
        loop {
            let nz: Vec<usize> = (pc..n).filter(|&c| !a[i][c].is_zero()).collect();
            let Some(&m) = nz.iter().min_by_key(|&&c| a[i][c].abs()) else { break };
            if nz.len() == 1 {
                col_swap(&mut a, m, pc);
                col_swap(&mut u, m, pc);
                break;
            }
            for &c in &nz {
                if c != m {
                    let q = &a[i][c] / &a[i][m];
                    col_sub(&mut a, c, m, &q);
                    col_sub(&mut u, c, m, &q);
                }
            }
        }
        let known: BigInt = (0..pc).map(|c| &a[i][c] * &z[c]).sum();
        let rest = b - known;
        if pc < n && !a[i][pc].is_zero() {
            let (q, r) = rest.div_rem(&a[i][pc]);
            if !r.is_zero() {
                return None;
            }
            z.push(q);
            pc += 1;
        } else if !rest.is_zero() {
            return None;
        }
    }
    let x0 = (0..n).map(|j| (0..pc).map(|c| &u[j][c] * &z[c]).sum()).collect();
    let t = (0..n).map(|j| u[j][pc..].to_vec()).collect();
    Some(Lattice { x0, t, free: n - pc })
}

/// Divides by the coefficient gcd, rounding the bound down. `None` when the
/// row is constant and false; `Some(None)` when constant and true.
fn tighten(coeffs: Vec<BigInt>, rhs: BigInt) -> Option<Option<Ineq>> {
    let g = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return if rhs.is_negative() { None } else { Some(None) };
    }
    Some(Some(Ineq { coeffs: coeffs.iter().map(|c| c / &g).collect(), rhs: rhs.div_floor(&g) }))
}

pub fn lia_sat_with(sys: &LinSystem, max_nodes: usize) -> Result<LiaOutcome, LiaError> {
    let vars: Vec<LinVar> = sys.vars().into_iter().collect();
    let n = vars.len();
    let index: BTreeMap<&LinVar, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let dense = |coeffs: &BTreeMap<LinVar, i64>| {
        let mut row = vec![BigInt::zero(); n];
        for (v, c) in coeffs {
            row[index[v]] = BigInt::from(*c);
        }
        row
    };
    let mut eqs = Vec::new();
    let mut les = Vec::new();
    for r in &sys.rows {
        let entry = (dense(&r.coeffs), BigInt::from(r.bound));
        match r.rel {
            Rel::Eq => eqs.push(entry),
            Rel::Le => les.push(entry),
        }
    }

    let Some(lat) = solve_equalities(&eqs, n) else { return Ok(LiaOutcome::Unsat) };
    let k = lat.free;

    let mut base: Vec<Ineq> = Vec::new();
    let mut add = |coeffs: Vec<BigInt>, rhs: BigInt| -> bool {
        match tighten(coeffs, rhs) {
            None => false,
            Some(None) => true,
            Some(Some(row)) => {
                base.push(row);
                true
            }
        }
    };
    for j in 0..n {
        // x_j ≥ 0
        if !add(lat.t[j].iter().map(|c| -c).collect(), lat.x0[j].clone()) {
            return Ok(LiaOutcome::Unsat);
        }
    }
    for (a, b) in &les {
        let coeffs: Vec<BigInt> = (0..k).map(|t| (0..n).map(|j| &a[j] * &lat.t[j][t]).sum()).collect();
        let offset: BigInt = (0..n).map(|j| &a[j] * &lat.x0[j]).sum();
        if !add(coeffs, b - offset) {
            return Ok(LiaOutcome::Unsat);
        }
    }

    let y = if k == 0 {
        Vec::new()
    } else {
        // prefer small models: minimize the sum of all unknowns
        let objective: Vec<BigInt> = (0..k).map(|t| (0..n).map(|j| lat.t[j][t].clone()).sum()).collect();
        match branch_and_bound(&base, k, &objective, max_nodes)? {
            Some(y) => y,
            None => return Ok(LiaOutcome::Unsat),
        }
    };

    let mut values = BTreeMap::new();
    for (j, v) in vars.iter().enumerate() {
        let x: BigInt = &lat.x0[j] + (0..k).map(|t| &lat.t[j][t] * &y[t]).sum::<BigInt>();
        values.insert(v.clone(), x.to_u64().ok_or(LiaError::CoefficientOverflow)?);
    }
    assert!(sys.holds(&values), "integer model fails substitution check");
    Ok(LiaOutcome::Sat(LiaModel { values }))
}

fn branch_and_bound(
    base: &[Ineq],
    k: usize,
    objective: &[BigInt],
    max_nodes: usize,
) -> Result<Option<Vec<BigInt>>, LiaError> {
    let mut stack: Vec<Vec<Ineq>> = vec![Vec::new()];
    let mut nodes = 0usize;
    while let Some(extra) = stack.pop() {
        nodes += 1;
        if nodes > max_nodes {
            return Err(LiaError::ResourceExhausted(max_nodes));
        }
        let rows: Vec<Ineq> = base.iter().chain(extra.iter()).cloned().collect();
        let LpResult::Optimal(v) = solve_lp(&rows, k, objective) else { continue };
        let Some(t) = v.iter().position(|x| !x.is_integer()) else {
            return Ok(Some(v.into_iter().map(|x| x.to_integer()).collect()));
        };
        let f: BigInt = v[t].floor().to_integer();
        let unit = |sign: i64| {
            let mut c = vec![BigInt::zero(); k];
            c[t] = BigInt::from(sign);
            c
        };
        let mut up = extra.clone();
        up.push(Ineq { coeffs: unit(-1), rhs: -(&f + BigInt::one()) });
        let mut down = extra;
        down.push(Ineq { coeffs: unit(1), rhs: f });
        stack.push(up);
        stack.push(down);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lengths::LinRow;

    fn len(x: &str) -> LinVar {
        LinVar::LenOf(x.into())
    }

    fn sat(sys: &LinSystem) -> Option<LiaModel> {
        match lia_sat(sys).unwrap() {
            LiaOutcome::Sat(m) => Some(m),
            LiaOutcome::Unsat => None,
        }
    }

    #[test]
    fn length_example_unsat() {
        let sys = LinSystem::new(vec![
            LinRow::eq([(len("X"), 1), (len("Y"), -1)], 2),
            LinRow::le([(len("Y"), -1)], -2),
            LinRow::le([(len("X"), 1)], 2),
        ]);
        assert_eq!(sat(&sys), None);
    }

    #[test]
    fn length_example_sat() {
        let sys = LinSystem::new(vec![
            LinRow::eq([(len("X"), 1), (len("Y"), -1)], 2),
            LinRow::le([(len("Y"), -1)], -2),
        ]);
        let m = sat(&sys).unwrap();
        assert!(sys.holds(&m.values));
        assert_eq!(m.get(&len("Y")), 2);
        assert_eq!(m.get(&len("X")), 4);
    }

    #[test]
    fn empty_system() {
        assert_eq!(sat(&LinSystem::default()), Some(LiaModel::default()));
    }

    #[test]
    fn progression_with_bound() {
        let k = LinVar::FreshAp(0);
        let sys = LinSystem::new(vec![LinRow::eq([(len("X"), 1), (k, -2)], 1), LinRow::le([(len("X"), 1)], 3)]);
        let m = sat(&sys).unwrap();
        assert!([1, 3].contains(&m.get(&len("X"))));
    }

    #[test]
    fn parity_conflict() {
        // 2x - 2y = 1 has no integer solution though its relaxation does
        let sys = LinSystem::new(vec![LinRow::eq([(len("X"), 2), (len("Y"), -2)], 1)]);
        assert_eq!(sat(&sys), None);
    }

    #[test]
    fn gcd_tightening() {
        let sys = LinSystem::new(vec![
            LinRow::le([(len("X"), 3), (len("Y"), -3)], 2),
            LinRow::le([(len("X"), -3), (len("Y"), 3)], -1),
        ]);
        assert_eq!(sat(&sys), None);
    }

    #[test]
    fn constant_rows() {
        assert_eq!(sat(&LinSystem::new(vec![LinRow::le([], -1)])), None);
        assert!(sat(&LinSystem::new(vec![LinRow::le([], 0), LinRow::eq([], 0)])).is_some());
        assert_eq!(sat(&LinSystem::new(vec![LinRow::eq([], 1)])), None);
    }

    #[test]
    fn node_cap() {
        let sys = LinSystem::new(vec![LinRow::le([(len("X"), 1)], 4)]);
        assert_eq!(lia_sat_with(&sys, 0), Err(LiaError::ResourceExhausted(0)));
        assert!(lia_sat_with(&sys, 1).is_ok());
    }
}
