//! Fourier–Motzkin elimination with strict rows.
//!
//! Equalities are first used to substitute variables away, then the
//! remaining inequalities are projected one variable at a time. Each derived
//! row remembers which input rows it was combined from; Chernikov's rule
//! drops rows whose history exceeds `eliminated + 1`, which keeps the
//! projection exact while bounding growth. A witness is rebuilt by walking
//! the stored stages backwards.

use num_traits::{One, Signed, Zero};

use super::{LinearProgram, LpOutcome};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};

pub const DEFAULT_FM_VARIABLE_BOUND: usize = 8;

const ROW_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
    strict: bool,
    history: Vec<u64>,
}

fn history_union(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn popcount(h: &[u64]) -> usize {
    h.iter().map(|w| w.count_ones() as usize).sum()
}

impl Row {
    /// Scales so that the first non-zero coefficient has magnitude one.
    fn normalised(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|a| !a.is_zero()).map(|a| a.abs()) {
            if !lead.is_one() {
                for a in self.coeffs.iter_mut() {
                    *a /= &lead;
                }
                self.rhs /= &lead;
            }
        }
        self
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// For a constant row: does `0 ≥ rhs` (or `0 > rhs`) hold?
    fn constant_holds(&self) -> bool {
        if self.strict {
            self.rhs.is_negative()
        } else {
            !self.rhs.is_positive()
        }
    }
}

/// Feasibility by elimination with the default variable bound.
pub fn fm_feasible(lp: &LinearProgram) -> Result<LpOutcome> {
    fm_feasible_with_bound(lp, DEFAULT_FM_VARIABLE_BOUND)
}

pub fn fm_feasible_with_bound(lp: &LinearProgram, max_vars: usize) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.vars();
    if n > max_vars {
        return Err(Error::Capacity {
            what: "Fourier-Motzkin variables",
            needed: n,
            limit: max_vars,
        });
    }

    // Equality substitution: each recorded row reads x_p + Σ a_j x_j = rhs.
    let mut substitutions: Vec<(usize, Vec<Rational>, Rational)> = Vec::new();
    let mut pending: Vec<(Vec<Rational>, Rational)> = lp
        .equalities()
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .collect();
    let mut ineqs: Vec<(Vec<Rational>, Rational, bool)> = lp
        .inequalities()
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone(), false))
        .chain(
            lp.strict()
                .iter()
                .map(|c| (c.coeffs.clone(), c.rhs.clone(), true)),
        )
        .collect();

    for i in 0..pending.len() {
        let (coeffs, rhs) = pending[i].clone();
        let Some(p) = coeffs.iter().position(|a| !a.is_zero()) else {
            if !rhs.is_zero() {
                return Ok(LpOutcome::infeasible());
            }
            continue;
        };
        let lead = coeffs[p].clone();
        let coeffs: Vec<Rational> = coeffs.iter().map(|a| a / &lead).collect();
        let rhs = rhs / &lead;
        let eliminate = |row: &mut Vec<Rational>, b: &mut Rational| {
            if row[p].is_zero() {
                return;
            }
            let f = row[p].clone();
            for (a, e) in row.iter_mut().zip(&coeffs) {
                *a -= &f * e;
            }
            *b -= &f * &rhs;
        };
        for (row, b) in pending.iter_mut().skip(i + 1) {
            eliminate(row, b);
        }
        for (row, b, _) in ineqs.iter_mut() {
            eliminate(row, b);
        }
        substitutions.push((p, coeffs, rhs));
    }
    let substituted: Vec<bool> = (0..n)
        .map(|j| substitutions.iter().any(|(p, _, _)| *p == j))
        .collect();

    let words = ineqs.len().div_ceil(64).max(1);
    let mut rows: Vec<Row> = Vec::new();
    for (i, (coeffs, rhs, strict)) in ineqs.into_iter().enumerate() {
        let mut history = vec![0u64; words];
        history[i / 64] |= 1 << (i % 64);
        let row = Row {
            coeffs,
            rhs,
            strict,
            history,
        };
        if row.is_constant() {
            if !row.constant_holds() {
                return Ok(LpOutcome::infeasible());
            }
        } else {
            rows.push(row.normalised());
        }
    }

    // stages[k] holds the system in variables k..n before x_k is eliminated.
    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(n);
    for k in 0..n {
        stages.push(rows.clone());
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for row in rows.drain(..) {
            if row.coeffs[k].is_positive() {
                pos.push(row);
            } else if row.coeffs[k].is_negative() {
                neg.push(row);
            } else {
                next.push(row);
            }
        }
        let eliminated = k + 1;
        for p in &pos {
            for q in &neg {
                let history = history_union(&p.history, &q.history);
                if popcount(&history) > eliminated + 1 {
                    continue;
                }
                let wp = -&q.coeffs[k];
                let wq = p.coeffs[k].clone();
                let coeffs: Vec<Rational> = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(a, b)| &wp * a + &wq * b)
                    .collect();
                let row = Row {
                    coeffs,
                    rhs: &wp * &p.rhs + &wq * &q.rhs,
                    strict: p.strict || q.strict,
                    history,
                };
                if row.is_constant() {
                    if !row.constant_holds() {
                        return Ok(LpOutcome::infeasible());
                    }
                    continue;
                }
                next.push(row.normalised());
            }
        }
        next.sort();
        next.dedup();
        if next.len() > ROW_LIMIT {
            return Err(Error::Capacity {
                what: "Fourier-Motzkin rows",
                needed: next.len(),
                limit: ROW_LIMIT,
            });
        }
        rows = next;
    }
    debug_assert!(rows.is_empty());

    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        if substituted[k] {
            continue;
        }
        x[k] = pick_value(&stages[k], k, &x);
    }
    for (p, coeffs, rhs) in substitutions.iter().rev() {
        let rest = coeffs
            .iter()
            .enumerate()
            .filter(|(j, _)| j != p)
            .fold(Rational::zero(), |acc, (j, a)| acc + a * &x[j]);
        x[*p] = rhs - rest;
    }
    if !lp.satisfies(&x) {
        return Err(Error::Internal(
            "Fourier-Motzkin witness fails exact re-check".into(),
        ));
    }
    Ok(LpOutcome::feasible(x))
}

/// Chooses x_k inside the interval cut out by `rows` once x_{k+1..} are fixed.
fn pick_value(rows: &[Row], k: usize, x: &[Rational]) -> Rational {
    let mut lower: Option<(Rational, bool)> = None;
    let mut upper: Option<(Rational, bool)> = None;
    for row in rows {
        let a = &row.coeffs[k];
        if a.is_zero() {
            continue;
        }
        let rest = row
            .coeffs
            .iter()
            .enumerate()
            .skip(k + 1)
            .fold(Rational::zero(), |acc, (j, c)| acc + c * &x[j]);
        let bound = (&row.rhs - rest) / a;
        if a.is_positive() {
            let tighter = match &lower {
                None => true,
                Some((b, s)) => bound > *b || (bound == *b && row.strict && !s),
            };
            if tighter {
                lower = Some((bound, row.strict));
            }
        } else {
            let tighter = match &upper {
                None => true,
                Some((b, s)) => bound < *b || (bound == *b && row.strict && !s),
            };
            if tighter {
                upper = Some((bound, row.strict));
            }
        }
    }
    match (lower, upper) {
        (None, None) => Rational::zero(),
        (Some((lo, false)), _) => lo,
        (None, Some((hi, false))) => hi,
        (Some((lo, true)), None) => lo + Rational::one(),
        (None, Some((hi, true))) => hi - Rational::one(),
        (Some((_, true)), Some((hi, false))) => hi,
        (Some((lo, true)), Some((hi, true))) => (lo + hi) / int(2),
    }
}
