//! Exact linear programming over the rationals.
//!
//! Two independent decision procedures share one problem type:
//! a two-phase dense simplex with Bland's rule ([`lp_minimize`],
//! [`lp_feasible`]) and Fourier–Motzkin elimination ([`fm_feasible`]),
//! which exists to cross-check the simplex on small systems.
//!
//! Variables are free (unrestricted in sign) unless a constraint says
//! otherwise. Strict rows (`a·x > b`) are only looked at by feasibility
//! queries.

mod fourier_motzkin;
mod simplex;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

pub use fourier_motzkin::{fm_feasible, fm_feasible_with_bound, DEFAULT_FM_VARIABLE_BOUND};
pub use simplex::{lp_feasible, lp_minimize};

/// One linear row `coeffs · x (op) rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, rhs }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (a, v)| acc + a * v)
    }

    fn negated(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
            rhs: -&self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    vars: usize,
    objective: Vec<Rational>,
    equalities: Vec<Constraint>,
    inequalities: Vec<Constraint>,
    strict: Vec<Constraint>,
}

impl LinearProgram {
    /// An unconstrained program in `vars` free variables with zero objective.
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            objective: vec![Rational::zero(); vars],
            equalities: Vec::new(),
            inequalities: Vec::new(),
            strict: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    pub fn strict(&self) -> &[Constraint] {
        &self.strict
    }

    /// Sets the (minimisation) objective.
    pub fn minimize(mut self, objective: Vec<Rational>) -> Self {
        self.objective = objective;
        self
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) {
        self.objective = objective;
    }

    /// `coeffs · x = rhs`
    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.equalities.push(Constraint::new(coeffs, rhs));
        self
    }

    /// `coeffs · x ≥ rhs`
    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.inequalities.push(Constraint::new(coeffs, rhs));
        self
    }

    /// `coeffs · x ≤ rhs`
    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.inequalities
            .push(Constraint::new(coeffs, rhs).negated());
        self
    }

    /// `coeffs · x > rhs`
    pub fn add_gt(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.strict.push(Constraint::new(coeffs, rhs));
        self
    }

    /// `coeffs · x < rhs`
    pub fn add_lt(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.strict.push(Constraint::new(coeffs, rhs).negated());
        self
    }

    /// `x_j ≥ 0`
    pub fn nonneg(&mut self, j: usize) -> &mut Self {
        let e = self.unit(j);
        self.add_ge(e, Rational::zero())
    }

    /// `x_j ≤ bound`
    pub fn upper(&mut self, j: usize, bound: Rational) -> &mut Self {
        let e = self.unit(j);
        self.add_le(e, bound)
    }

    fn unit(&self, j: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); self.vars];
        if j < self.vars {
            e[j] = int(1);
        }
        e
    }

    pub fn has_strict(&self) -> bool {
        !self.strict.is_empty()
    }

    pub fn constraint_count(&self) -> usize {
        self.equalities.len() + self.inequalities.len() + self.strict.len()
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.objective.len() != self.vars {
            return Err(Error::Input(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.vars
            )));
        }
        let rows = self
            .equalities
            .iter()
            .chain(&self.inequalities)
            .chain(&self.strict);
        for (i, row) in rows.enumerate() {
            if row.coeffs.len() != self.vars {
                return Err(Error::Input(format!(
                    "constraint {i} has {} coefficients for {} variables",
                    row.coeffs.len(),
                    self.vars
                )));
            }
        }
        Ok(())
    }

    /// Exact check of every constraint, strict ones included.
    pub fn satisfies(&self, x: &[Rational]) -> bool {
        x.len() == self.vars
            && self.equalities.iter().all(|c| c.lhs(x) == c.rhs)
            && self.inequalities.iter().all(|c| c.lhs(x) >= c.rhs)
            && self.strict.iter().all(|c| c.lhs(x) > c.rhs)
    }

    /// Exact check ignoring the strict rows.
    pub fn satisfies_closed(&self, x: &[Rational]) -> bool {
        x.len() == self.vars
            && self.equalities.iter().all(|c| c.lhs(x) == c.rhs)
            && self.inequalities.iter().all(|c| c.lhs(x) >= c.rhs)
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        Constraint::new(self.objective.clone(), Rational::zero()).lhs(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    Feasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: Option<Rational>,
    pub witness: Option<Vec<Rational>>,
}

impl LpOutcome {
    pub fn infeasible() -> Self {
        Self {
            status: LpStatus::Infeasible,
            value: None,
            witness: None,
        }
    }

    pub fn unbounded() -> Self {
        Self {
            status: LpStatus::Unbounded,
            value: None,
            witness: None,
        }
    }

    pub fn feasible(witness: Vec<Rational>) -> Self {
        Self {
            status: LpStatus::Feasible,
            value: None,
            witness: Some(witness),
        }
    }

    pub fn optimal(value: Rational, witness: Vec<Rational>) -> Self {
        Self {
            status: LpStatus::Optimal,
            value: Some(value),
            witness: Some(witness),
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.status, LpStatus::Feasible | LpStatus::Optimal)
    }
}

/// Something that decides feasibility of a [`LinearProgram`], strict rows
/// included. Lets higher layers swap the simplex for the elimination oracle.
pub trait FeasibilitySolver: Sync {
    fn feasible(&self, lp: &LinearProgram) -> Result<LpOutcome>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Simplex;

impl FeasibilitySolver for Simplex {
    fn feasible(&self, lp: &LinearProgram) -> Result<LpOutcome> {
        lp_feasible(lp)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FourierMotzkin {
    pub max_vars: usize,
}

impl Default for FourierMotzkin {
    fn default() -> Self {
        Self {
            max_vars: DEFAULT_FM_VARIABLE_BOUND,
        }
    }
}

impl FeasibilitySolver for FourierMotzkin {
    fn feasible(&self, lp: &LinearProgram) -> Result<LpOutcome> {
        fm_feasible_with_bound(lp, self.max_vars)
    }
}

#[cfg(test)]
mod tests;
