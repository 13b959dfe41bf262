//! Dense two-phase simplex with Bland's rule.
//!
//! Free variables are split as `x = x⁺ − x⁻`; `≥` rows get a surplus
//! column; every row gets an artificial column for phase one. Pivoting uses
//! the lowest eligible column and breaks ratio ties by the lowest basic
//! column, so results are reproducible for a fixed input.

use num_traits::{Signed, Zero};

use super::{Constraint, LinearProgram, LpOutcome, LpStatus};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

struct Tableau {
    /// `m` rows of `cols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost row, same layout; its last entry is minus the objective.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
    /// Columns that may never enter the basis (artificials in phase two).
    barred: Vec<bool>,
}

enum Pivoting {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if p != Rational::from_integer(1.into()) {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let mut z: Vec<Rational> = costs.to_vec();
        z.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (zj, a) in z.iter_mut().zip(row) {
                *zj -= cb * a;
            }
        }
        self.cost = z;
    }

    fn run(&mut self) -> Pivoting {
        loop {
            let entering = (0..self.cols).find(|&j| !self.barred[j] && self.cost[j].is_negative());
            let Some(c) = entering else {
                return Pivoting::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Pivoting::Unbounded,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn value_of(&self, col: usize) -> Rational {
        self.basis
            .iter()
            .position(|&b| b == col)
            .map(|i| self.rows[i][self.cols].clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// Phase one over the closed part of `lp`. Returns the tableau positioned at
/// a feasible basis with artificials barred, or `None` when infeasible.
fn phase_one(lp: &LinearProgram) -> Option<(Tableau, usize)> {
    let n = lp.vars();
    let eqs = lp.equalities();
    let ges = lp.inequalities();
    let m = eqs.len() + ges.len();
    let structural = 2 * n + ges.len();
    let cols = structural + m;

    let mut rows = Vec::with_capacity(m);
    let push_row = |rows: &mut Vec<Vec<Rational>>, c: &Constraint, surplus: Option<usize>| {
        let mut row = vec![Rational::zero(); cols + 1];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n + j] = -a;
        }
        if let Some(s) = surplus {
            row[2 * n + s] = int(-1);
        }
        row[cols] = c.rhs.clone();
        if row[cols].is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
        let i = rows.len();
        row[structural + i] = int(1);
        rows.push(row);
    };
    for c in eqs {
        push_row(&mut rows, c, None);
    }
    for (s, c) in ges.iter().enumerate() {
        push_row(&mut rows, c, Some(s));
    }

    let mut t = Tableau {
        rows,
        cost: Vec::new(),
        basis: (structural..structural + m).collect(),
        cols,
        barred: vec![false; cols],
    };
    let mut costs = vec![Rational::zero(); cols];
    for c in costs.iter_mut().skip(structural) {
        *c = int(1);
    }
    t.set_costs(&costs);
    // Phase one is bounded below by zero.
    let _ = t.run();
    if !t.cost[cols].is_zero() {
        return None;
    }

    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= structural {
            match (0..structural).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    for b in t.barred.iter_mut().skip(structural) {
        *b = true;
    }
    Some((t, structural))
}

fn extract(t: &Tableau, n: usize) -> Vec<Rational> {
    (0..n).map(|j| t.value_of(j) - t.value_of(n + j)).collect()
}

fn minimize_closed(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.vars();
    let Some((mut t, structural)) = phase_one(lp) else {
        return Ok(LpOutcome::infeasible());
    };
    let mut costs = vec![Rational::zero(); t.cols];
    for (j, c) in lp.objective().iter().enumerate() {
        costs[j] = c.clone();
        costs[n + j] = -c;
    }
    debug_assert!(structural <= t.cols);
    t.set_costs(&costs);
    match t.run() {
        Pivoting::Unbounded => Ok(LpOutcome::unbounded()),
        Pivoting::Optimal => {
            let x = extract(&t, n);
            let value = lp.objective_value(&x);
            if !lp.satisfies_closed(&x) || value != -&t.cost[t.cols] {
                return Err(Error::Internal(
                    "simplex optimum fails exact re-check".into(),
                ));
            }
            Ok(LpOutcome::optimal(value, x))
        }
    }
}

/// Minimises the objective of `lp`, which must not carry strict rows.
pub fn lp_minimize(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    if lp.has_strict() {
        return Err(Error::Input(
            "lp_minimize does not accept strict constraints".into(),
        ));
    }
    minimize_closed(lp)
}

/// Decides feasibility of `lp`, strict rows included; the objective is
/// ignored.
///
/// Strict rows `a·x > b` are replaced by `a·x − t ≥ b` with a fresh variable
/// `t ≤ 1`, and `t` is maximised: the system is feasible iff the optimum is
/// positive.
pub fn lp_feasible(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.vars();
    if !lp.has_strict() {
        let Some((t, _)) = phase_one(lp) else {
            return Ok(LpOutcome::infeasible());
        };
        let x = extract(&t, n);
        if !lp.satisfies(&x) {
            return Err(Error::Internal(
                "phase-one witness fails exact re-check".into(),
            ));
        }
        return Ok(LpOutcome::feasible(x));
    }

    let widen = |c: &Constraint| {
        let mut coeffs = c.coeffs.clone();
        coeffs.push(Rational::zero());
        Constraint::new(coeffs, c.rhs.clone())
    };
    let mut lifted = LinearProgram::new(n + 1);
    for c in lp.equalities() {
        let w = widen(c);
        lifted.add_eq(w.coeffs, w.rhs);
    }
    for c in lp.inequalities() {
        let w = widen(c);
        lifted.add_ge(w.coeffs, w.rhs);
    }
    for c in lp.strict() {
        let mut w = widen(c);
        w.coeffs[n] = int(-1);
        lifted.add_ge(w.coeffs, w.rhs);
    }
    lifted.upper(n, int(1));
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = int(-1);
    lifted.set_objective(objective);

    let out = minimize_closed(&lifted)?;
    match out.status {
        LpStatus::Infeasible => Ok(LpOutcome::infeasible()),
        LpStatus::Optimal => {
            let mut x = out.witness.expect("optimal outcome carries a witness");
            let slack = x.pop().expect("lifted witness has the slack coordinate");
            if slack.is_positive() {
                if !lp.satisfies(&x) {
                    return Err(Error::Internal(
                        "strict witness fails exact re-check".into(),
                    ));
                }
                Ok(LpOutcome::feasible(x))
            } else {
                Ok(LpOutcome::infeasible())
            }
        }
        LpStatus::Unbounded | LpStatus::Feasible => Err(Error::Internal(
            "bounded slack program reported unbounded".into(),
        )),
    }
}
