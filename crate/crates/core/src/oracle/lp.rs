//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Problems are stated over `x ≥ 0` with equality, `≤` and `≥` rows; slack
//! variables are added internally and never appear in witnesses.

use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    nvars: usize,
    rows: Vec<(Vec<Rational>, Kind, Rational)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, x: Vec<Rational> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpFeasibility {
    pub feasible: bool,
    pub witness: Option<Vec<Rational>>,
}

impl LpProblem {
    pub fn new(nvars: usize) -> Self {
        LpProblem {
            nvars,
            rows: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn push(&mut self, row: Vec<Rational>, kind: Kind, rhs: Rational) -> &mut Self {
        assert_eq!(row.len(), self.nvars, "constraint width mismatch");
        self.rows.push((row, kind, rhs));
        self
    }

    pub fn add_eq(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.push(row, Kind::Eq, rhs)
    }

    pub fn add_le(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.push(row, Kind::Le, rhs)
    }

    pub fn add_ge(&mut self, row: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.push(row, Kind::Ge, rhs)
    }

    /// Adds `Σ x = 1`.
    pub fn normalize(&mut self) -> &mut Self {
        let ones = vec![Rational::one(); self.nvars];
        self.add_eq(ones, Rational::one())
    }

    /// Equality system with one extra column per inequality row.
    fn standard_form(&self) -> (Vec<Vec<Rational>>, Vec<Rational>, usize) {
        let slacks = self.rows.iter().filter(|r| r.1 != Kind::Eq).count();
        let width = self.nvars + slacks;
        let mut a = Vec::with_capacity(self.rows.len());
        let mut b = Vec::with_capacity(self.rows.len());
        let mut s = self.nvars;
        for (row, kind, rhs) in &self.rows {
            let mut full = row.clone();
            full.resize(width, Rational::zero());
            match kind {
                Kind::Le => {
                    full[s] = Rational::one();
                    s += 1;
                }
                Kind::Ge => {
                    full[s] = -Rational::one();
                    s += 1;
                }
                Kind::Eq => {}
            }
            a.push(full);
            b.push(rhs.clone());
        }
        (a, b, width)
    }

    /// Maximizes `c · x` over the feasible set.
    pub fn maximize(&self, c: &[Rational]) -> Result<LpOutcome> {
        assert_eq!(c.len(), self.nvars);
        let (a, b, width) = self.standard_form();
        let mut t = Tableau::phase_one(a, b, width);
        t.run()?;
        if !t.objective_value().is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        t.drop_artificials();
        let mut cost = c.to_vec();
        cost.resize(width, Rational::zero());
        t.set_objective(&cost);
        if !t.run()? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = t.solution();
        x.truncate(self.nvars);
        Ok(LpOutcome::Optimal {
            value: t.objective_value(),
            x,
        })
    }

    pub fn feasible(&self) -> Result<LpFeasibility> {
        Ok(match self.maximize(&vec![Rational::zero(); self.nvars])? {
            LpOutcome::Optimal { x, .. } => LpFeasibility {
                feasible: true,
                witness: Some(x),
            },
            LpOutcome::Infeasible => LpFeasibility {
                feasible: false,
                witness: None,
            },
            LpOutcome::Unbounded => unreachable!("zero objective is bounded"),
        })
    }

    /// Whether some feasible point has `c · x > 0`.
    pub fn can_be_positive(&self, c: &[Rational]) -> Result<bool> {
        Ok(match self.maximize(c)? {
            LpOutcome::Infeasible => false,
            LpOutcome::Unbounded => true,
            LpOutcome::Optimal { value, .. } => value > Rational::zero(),
        })
    }
}

/// Convenience wrapper: feasibility of `{x ≥ 0 : a x = b}`.
pub fn lp_feasible(a: &crate::matrix::Matrix<Rational>, b: &[Rational]) -> Result<LpFeasibility> {
    let mut lp = LpProblem::new(a.cols());
    for (i, rhs) in b.iter().enumerate() {
        lp.add_eq(a.row(i).to_vec(), rhs.clone());
    }
    lp.feasible()
}

struct Tableau {
    /// Constraint rows `[A | b]`.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs `c_j − c_B B^{-1} A_j`, and the objective value in the
    /// last slot (negated).
    cost: Vec<Rational>,
    width: usize,
    artificial_from: usize,
}

impl Tableau {
    fn phase_one(a: Vec<Vec<Rational>>, b: Vec<Rational>, width: usize) -> Self {
        let m = a.len();
        let total = width + m;
        let mut rows = Vec::with_capacity(m);
        for (i, (mut row, mut rhs)) in a.into_iter().zip(b).enumerate() {
            if rhs < Rational::zero() {
                row.iter_mut().for_each(|v| *v = -v.clone());
                rhs = -rhs;
            }
            row.resize(total, Rational::zero());
            row[width + i] = Rational::one();
            row.push(rhs);
            rows.push(row);
        }
        let mut t = Tableau {
            rows,
            basis: (width..width + m).collect(),
            cost: Vec::new(),
            width: total,
            artificial_from: width,
        };
        let mut c = vec![Rational::zero(); total];
        for v in c.iter_mut().skip(width) {
            *v = -Rational::one();
        }
        t.set_objective(&c);
        t
    }

    fn set_objective(&mut self, c: &[Rational]) {
        let mut cost: Vec<Rational> = c.to_vec();
        cost.push(Rational::zero());
        for (r, &bvar) in self.basis.iter().enumerate() {
            let cb = c[bvar].clone();
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    cost[j] = cost[j].clone() - cb.clone() * v.clone();
                }
            }
        }
        self.cost = cost;
    }

    fn objective_value(&self) -> Rational {
        -self.cost[self.width].clone()
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = Rational::one() / self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for (v, p) in self.cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        self.basis[r] = col;
    }

    /// Bland's rule iterations. Returns false when unbounded.
    fn run(&mut self) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let Some(col) = (0..self.width).find(|&j| self.cost[j] > Rational::zero()) else {
                return Ok(true);
            };
            let mut best: Option<(Rational, usize, usize)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[col] > Rational::zero() {
                    let ratio = row[self.width].clone() / row[col].clone();
                    let better = match &best {
                        None => true,
                        Some((br, _, bb)) => {
                            ratio < *br || (ratio == *br && self.basis[r] < *bb)
                        }
                    };
                    if better {
                        best = Some((ratio, r, self.basis[r]));
                    }
                }
            }
            let Some((_, r, _)) = best else {
                return Ok(false);
            };
            self.pivot(r, col);
        }
        Err(Error::Inconsistency("simplex pivot limit exhausted".into()))
    }

    /// Pivots zero-valued artificials out of the basis (dropping redundant
    /// rows) and removes the artificial columns.
    fn drop_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.artificial_from {
                if let Some(col) =
                    (0..self.artificial_from).find(|&j| !self.rows[r][j].is_zero())
                {
                    self.pivot(r, col);
                } else {
                    self.rows.remove(r);
                    self.basis.remove(r);
                    continue;
                }
            }
            r += 1;
        }
        let keep = self.artificial_from;
        for row in self.rows.iter_mut() {
            let rhs = row[self.width].clone();
            row.truncate(keep);
            row.push(rhs);
        }
        self.width = keep;
    }

    fn solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.width];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rows[r][self.width].clone();
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn singular_diagonal_system_is_infeasible() {
        // (I − diag(0,1,2)) x = e3
        let a = qm(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, -1]]);
        let r = lp_feasible(&a, &[q(0), q(0), q(1)]).unwrap();
        assert!(!r.feasible);
        assert!(r.witness.is_none());
    }

    #[test]
    fn identity_system_returns_b() {
        let a = qm(&[&[1, 0], &[0, 1]]);
        let r = lp_feasible(&a, &[q(2), q(3)]).unwrap();
        assert_eq!(r.witness, Some(vec![q(2), q(3)]));
    }

    #[test]
    fn shifted_system_has_witness() {
        // P = [[2,0],[1,1]], (P − 2I) x = e2
        let a = qm(&[&[0, 0], &[1, -1]]);
        let r = lp_feasible(&a, &[q(0), q(1)]).unwrap();
        let x = r.witness.unwrap();
        assert_eq!(a.mul_vec(&x), vec![q(0), q(1)]);
        assert!(x.iter().all(|v| *v >= q(0)));
    }

    #[test]
    fn optimize_and_unbounded() {
        let mut lp = LpProblem::new(2);
        lp.add_le(vec![q(1), q(1)], q(4)).add_le(vec![q(1), q(0)], q(3));
        match lp.maximize(&[q(1), q(2)]).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(8)),
            other => panic!("{other:?}"),
        }
        let mut free = LpProblem::new(2);
        free.add_ge(vec![q(1), q(-1)], q(0));
        assert_eq!(free.maximize(&[q(1), q(0)]).unwrap(), LpOutcome::Unbounded);
        assert!(free.can_be_positive(&[q(1), q(0)]).unwrap());
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let a = qm(&[&[1, 1], &[2, 2], &[1, -1]]);
        let r = lp_feasible(&a, &[q(2), q(4), q(0)]).unwrap();
        assert_eq!(r.witness, Some(vec![q(1), q(1)]));
    }

    #[test]
    fn witnesses_are_deterministic() {
        let a = qm(&[&[1, 1, 1], &[0, 1, 2]]);
        let b = [q(3), q(2)];
        assert_eq!(lp_feasible(&a, &b).unwrap(), lp_feasible(&a, &b).unwrap());
    }
}
