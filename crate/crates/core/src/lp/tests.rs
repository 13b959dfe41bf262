use num_traits::{Signed, Zero};
use proptest::prelude::*;

use super::*;
use crate::rational::{int, ratio};

fn row(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&a| int(a)).collect()
}

#[test]
fn minimize_tight_lower_bound() {
    let mut lp = LinearProgram::new(1).minimize(row(&[1]));
    lp.add_ge(row(&[1]), ratio(1, 3)).add_le(row(&[1]), int(2));
    let out = lp_minimize(&lp).unwrap();
    assert_eq!(out.status, LpStatus::Optimal);
    assert_eq!(out.value, Some(ratio(1, 3)));
    assert_eq!(out.witness, Some(vec![ratio(1, 3)]));
}

#[test]
fn minimize_empty_polytope() {
    let mut lp = LinearProgram::new(1).minimize(row(&[1]));
    lp.add_ge(row(&[1]), int(1)).add_le(row(&[1]), int(0));
    assert_eq!(lp_minimize(&lp).unwrap().status, LpStatus::Infeasible);
}

#[test]
fn minimize_open_ray() {
    let mut lp = LinearProgram::new(1).minimize(row(&[-1]));
    lp.add_ge(row(&[1]), int(0));
    assert_eq!(lp_minimize(&lp).unwrap().status, LpStatus::Unbounded);
}

#[test]
fn minimize_rejects_strict_rows_and_bad_dimensions() {
    let mut lp = LinearProgram::new(1);
    lp.add_gt(row(&[1]), int(0));
    assert!(matches!(lp_minimize(&lp), Err(Error::Input(_))));

    let mut bad = LinearProgram::new(2);
    bad.add_ge(row(&[1]), int(0));
    assert!(matches!(lp_minimize(&bad), Err(Error::Input(_))));
    assert!(matches!(lp_feasible(&bad), Err(Error::Input(_))));
    assert!(matches!(fm_feasible(&bad), Err(Error::Input(_))));
}

fn open_unit() -> LinearProgram {
    let mut lp = LinearProgram::new(1);
    lp.add_gt(row(&[1]), int(0)).add_le(row(&[1]), int(1));
    lp
}

fn empty_open() -> LinearProgram {
    let mut lp = LinearProgram::new(1);
    lp.add_gt(row(&[1]), int(0)).add_le(row(&[1]), int(0));
    lp
}

/// p1 + p2 = 1, p ≥ 0, p1 − p2 > 0, p2 − p1 > 0.
fn opposed_strict() -> LinearProgram {
    let mut lp = LinearProgram::new(2);
    lp.add_eq(row(&[1, 1]), int(1))
        .nonneg(0)
        .nonneg(1)
        .add_gt(row(&[1, -1]), int(0))
        .add_gt(row(&[-1, 1]), int(0));
    lp
}

#[test]
fn feasible_with_strict_rows() {
    for solve in [lp_feasible, fm_feasible] {
        let out = solve(&open_unit()).unwrap();
        assert_eq!(out.status, LpStatus::Feasible);
        let x = out.witness.unwrap();
        assert!(x[0].is_positive() && x[0] <= int(1));

        assert_eq!(solve(&empty_open()).unwrap().status, LpStatus::Infeasible);
        assert_eq!(
            solve(&opposed_strict()).unwrap().status,
            LpStatus::Infeasible
        );
    }
}

#[test]
fn fm_simplex_point_and_contradictory_strict_pair() {
    let mut simplex = LinearProgram::new(2);
    simplex.add_eq(row(&[1, 1]), int(1)).nonneg(0).nonneg(1);
    let out = fm_feasible(&simplex).unwrap();
    assert_eq!(out.status, LpStatus::Feasible);
    assert!(simplex.satisfies(&out.witness.unwrap()));

    let mut pair = LinearProgram::new(1);
    pair.add_gt(row(&[1]), int(0)).add_lt(row(&[1]), int(0));
    assert_eq!(fm_feasible(&pair).unwrap().status, LpStatus::Infeasible);
    assert_eq!(lp_feasible(&pair).unwrap().status, LpStatus::Infeasible);
}

#[test]
fn fm_enforces_variable_bound() {
    let lp = LinearProgram::new(9);
    assert!(matches!(fm_feasible(&lp), Err(Error::Capacity { .. })));
    assert!(fm_feasible_with_bound(&lp, 9).unwrap().is_feasible());
}

#[test]
fn redundant_equalities_are_tolerated() {
    let mut lp = LinearProgram::new(2).minimize(row(&[1, 2]));
    lp.add_eq(row(&[1, 1]), int(1))
        .add_eq(row(&[2, 2]), int(2))
        .nonneg(0)
        .nonneg(1);
    let out = lp_minimize(&lp).unwrap();
    assert_eq!(out.value, Some(int(1)));
    assert_eq!(out.witness, Some(vec![int(1), int(0)]));
}

#[test]
fn degenerate_program_terminates() {
    // Klee-Minty-like degeneracy: many constraints tight at the origin.
    let mut lp = LinearProgram::new(3).minimize(row(&[-1, -1, -1]));
    for j in 0..3 {
        lp.nonneg(j);
    }
    lp.add_le(row(&[1, 1, 0]), int(0))
        .add_le(row(&[0, 1, 1]), int(0))
        .add_le(row(&[1, 0, 1]), int(0))
        .add_le(row(&[1, 1, 1]), int(3));
    let out = lp_minimize(&lp).unwrap();
    assert_eq!(out.value, Some(int(0)));
}

/// Solves a square system by Gauss–Jordan; `None` when singular.
fn solve_square(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        b.swap(c, p);
        let piv = m[c][c].clone();
        for v in m[c].iter_mut() {
            *v /= &piv;
        }
        b[c] /= &piv;
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pr = m[c].clone();
                for (v, pv) in m[r].iter_mut().zip(&pr) {
                    *v -= &f * pv;
                }
                let bc = b[c].clone();
                b[r] -= f * bc;
            }
        }
    }
    Some(b)
}

/// Minimum over all basic feasible solutions, by enumerating every choice of
/// `n` tight rows. Only meaningful for bounded, pointed programs.
fn brute_force_min(lp: &LinearProgram) -> Option<Rational> {
    fn walk(
        lp: &LinearProgram,
        all: &[&Constraint],
        from: usize,
        chosen: &mut Vec<usize>,
        best: &mut Option<Rational>,
    ) {
        if chosen.len() == lp.vars() {
            let a = chosen.iter().map(|&i| all[i].coeffs.clone()).collect();
            let b = chosen.iter().map(|&i| all[i].rhs.clone()).collect();
            if let Some(x) = solve_square(a, b) {
                if lp.satisfies_closed(&x) {
                    let v = lp.objective_value(&x);
                    if best.as_ref().is_none_or(|bv| v < *bv) {
                        *best = Some(v);
                    }
                }
            }
            return;
        }
        for i in from..all.len() {
            chosen.push(i);
            walk(lp, all, i + 1, chosen, best);
            chosen.pop();
        }
    }
    let all: Vec<&Constraint> = lp.equalities().iter().chain(lp.inequalities()).collect();
    let mut best = None;
    walk(lp, &all, 0, &mut Vec::new(), &mut best);
    best
}

fn coeff() -> impl Strategy<Value = Rational> {
    (-4i64..=4, prop::sample::select(vec![1i64, 2, 3])).prop_map(|(n, d)| ratio(n, d))
}

#[derive(Debug, Clone)]
struct RandomSystem {
    vars: usize,
    rows: Vec<(Vec<Rational>, Rational, u8)>,
}

impl RandomSystem {
    fn program(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.vars);
        for (a, b, kind) in &self.rows {
            match kind {
                0 => lp.add_eq(a.clone(), b.clone()),
                1 | 2 => lp.add_ge(a.clone(), b.clone()),
                _ => lp.add_gt(a.clone(), b.clone()),
            };
        }
        lp
    }
}

fn system(max_vars: usize, max_rows: usize) -> impl Strategy<Value = RandomSystem> {
    (1..=max_vars).prop_flat_map(move |vars| {
        let row = (prop::collection::vec(coeff(), vars), coeff(), 0u8..6);
        prop::collection::vec(row, 0..=max_rows).prop_map(move |rows| RandomSystem { vars, rows })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplex_and_elimination_agree(sys in system(6, 12)) {
        let lp = sys.program();
        let a = lp_feasible(&lp).unwrap();
        let b = fm_feasible(&lp).unwrap();
        prop_assert_eq!(a.status, b.status);
        for out in [a, b] {
            if let Some(x) = out.witness {
                prop_assert!(lp.satisfies(&x));
            }
        }
    }

    #[test]
    fn minimum_matches_vertex_enumeration(
        sys in system(3, 5),
        obj in prop::collection::vec(coeff(), 3),
    ) {
        let mut lp = sys.program();
        // Keep only closed rows and box the region so it is bounded and pointed.
        let mut closed = LinearProgram::new(lp.vars());
        for c in lp.equalities() { closed.add_eq(c.coeffs.clone(), c.rhs.clone()); }
        for c in lp.inequalities() { closed.add_ge(c.coeffs.clone(), c.rhs.clone()); }
        for j in 0..lp.vars() {
            closed.add_ge(closed.unit(j), int(-5));
            closed.upper(j, int(5));
        }
        closed.set_objective(obj[..lp.vars()].to_vec());
        lp = closed;
        let out = lp_minimize(&lp).unwrap();
        let brute = brute_force_min(&lp);
        match out.status {
            LpStatus::Optimal => {
                prop_assert_eq!(out.value.clone(), brute);
                prop_assert!(lp.satisfies(out.witness.as_ref().unwrap()));
            }
            LpStatus::Infeasible => prop_assert_eq!(brute, None),
            other => prop_assert!(false, "unexpected status {:?}", other),
        }
    }
}
