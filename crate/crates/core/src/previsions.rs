//! Linear previsions, credal sets and their lower envelopes.

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, lp_minimize, LinearProgram, LpStatus};
use crate::options::{posi_member, ConeGenerators, Gamble};
use crate::rational::{self, Rational};

/// Largest number of candidate active sets tried when enumerating the
/// vertices of a half-space credal set.
pub const VERTEX_ENUMERATION_LIMIT: usize = 200_000;

/// An expectation functional, stored as its probability mass function.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearPrevision {
    mass: Vec<Rational>,
}

impl LinearPrevision {
    pub fn new(mass: Vec<Rational>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::Input("a prevision needs at least one state".into()));
        }
        if mass.iter().any(Signed::is_negative) {
            return Err(Error::Input(format!(
                "negative mass in {}",
                rational::Tuple(&mass)
            )));
        }
        let total = mass.iter().fold(Rational::zero(), |a, m| a + m);
        if !total.is_one() {
            return Err(Error::Input(format!(
                "masses {} sum to {}, not 1",
                rational::Tuple(&mass),
                rational::format(&total)
            )));
        }
        Ok(Self { mass })
    }

    pub fn from_ratios(mass: &[(i64, i64)]) -> Result<Self> {
        Self::new(mass.iter().map(|&(n, d)| rational::ratio(n, d)).collect())
    }

    pub fn uniform(dim: usize) -> Self {
        let share = Rational::new(1.into(), (dim as i64).into());
        Self {
            mass: vec![share; dim],
        }
    }

    pub fn mass(&self) -> &[Rational] {
        &self.mass
    }

    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    /// `P(u) = Σ p(x)·u(x)`.
    pub fn expectation(&self, u: &Gamble) -> Result<Rational> {
        u.check_dim(self.dim())?;
        Ok(u.dot(&self.mass))
    }
}

impl Serialize for LinearPrevision {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serde_vec::serialize(&self.mass, s)
    }
}

pub fn expectation(p: &LinearPrevision, u: &Gamble) -> Result<Rational> {
    p.expectation(u)
}

/// `coeffs · p ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfSpace {
    pub coeffs: Gamble,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
}

/// A non-empty closed polytope of mass functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CredalSet {
    /// Convex hull of the listed previsions (sorted, without duplicates).
    Vertices(Vec<LinearPrevision>),
    /// The probability simplex cut by the listed half-spaces.
    HalfSpaces { dim: usize, rows: Vec<HalfSpace> },
}

impl CredalSet {
    pub fn vertices(list: Vec<LinearPrevision>) -> Result<Self> {
        let Some(first) = list.first() else {
            return Err(Error::Input(
                "a credal set needs at least one vertex".into(),
            ));
        };
        let dim = first.dim();
        for p in &list {
            Error::check_dim(dim, p.dim())?;
        }
        let mut list = list;
        list.sort();
        list.dedup();
        Ok(CredalSet::Vertices(list))
    }

    pub fn singleton(p: LinearPrevision) -> Self {
        CredalSet::Vertices(vec![p])
    }

    pub fn half_spaces(dim: usize, rows: Vec<HalfSpace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("a credal set needs at least one state".into()));
        }
        for r in &rows {
            r.coeffs.check_dim(dim)?;
        }
        let set = CredalSet::HalfSpaces { dim, rows };
        if !lp_feasible(&set.polytope().expect("half-space form"))?.is_feasible() {
            return Err(Error::Input("half-space credal set is empty".into()));
        }
        Ok(set)
    }

    /// The whole probability simplex.
    pub fn vacuous(dim: usize) -> Self {
        CredalSet::HalfSpaces {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CredalSet::Vertices(v) => v[0].dim(),
            CredalSet::HalfSpaces { dim, .. } => *dim,
        }
    }

    /// Half-space form as linear constraints over the mass vector; `None`
    /// for vertex form.
    pub fn polytope(&self) -> Option<LinearProgram> {
        let CredalSet::HalfSpaces { dim, rows } = self else {
            return None;
        };
        let mut lp = LinearProgram::new(*dim);
        lp.add_eq(vec![Rational::one(); *dim], Rational::one());
        for j in 0..*dim {
            lp.nonneg(j);
        }
        for r in rows {
            lp.add_ge(r.coeffs.values().to_vec(), r.rhs.clone());
        }
        Some(lp)
    }

    pub fn contains(&self, p: &LinearPrevision) -> Result<bool> {
        Error::check_dim(self.dim(), p.dim())?;
        match self {
            CredalSet::HalfSpaces { rows, .. } => {
                Ok(rows.iter().all(|r| r.coeffs.dot(p.mass()) >= r.rhs))
            }
            CredalSet::Vertices(vs) if vs.binary_search(p).is_ok() => Ok(true),
            CredalSet::Vertices(vs) => {
                // p ∈ conv(vs): α ≥ 0, Σα = 1, Σ α_i v_i = p.
                let k = vs.len();
                let mut lp = LinearProgram::new(k);
                lp.add_eq(vec![Rational::one(); k], Rational::one());
                for j in 0..k {
                    lp.nonneg(j);
                }
                for x in 0..self.dim() {
                    let row = vs.iter().map(|v| v.mass()[x].clone()).collect();
                    lp.add_eq(row, p.mass()[x].clone());
                }
                Ok(lp_feasible(&lp)?.is_feasible())
            }
        }
    }

    /// The extreme points. For half-space form they are enumerated by
    /// trying every set of `n − 1` tight inequalities.
    pub fn vertex_list(&self) -> Result<Vec<LinearPrevision>> {
        match self {
            CredalSet::Vertices(vs) => Ok(vs.clone()),
            CredalSet::HalfSpaces { .. } => {
                enumerate_vertices(&self.polytope().expect("half-space form"))
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Gauss–Jordan solve of a square system; `None` when singular.
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
        let pivot_row = m[c].clone();
        let pivot_rhs = b[c].clone();
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for (v, pv) in m[r].iter_mut().zip(&pivot_row) {
                *v -= &f * pv;
            }
            b[r] -= &f * &pivot_rhs;
        }
    }
    Some(b)
}

fn enumerate_vertices(lp: &LinearProgram) -> Result<Vec<LinearPrevision>> {
    let n = lp.vars();
    let ineqs = lp.inequalities();
    let pick = n.saturating_sub(1);
    let count = binomial(ineqs.len(), pick);
    if count > VERTEX_ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: "vertex enumeration active sets",
            needed: count,
            limit: VERTEX_ENUMERATION_LIMIT,
        });
    }
    let simplex_row = &lp.equalities()[0];
    let mut found: Vec<LinearPrevision> = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(pick);
    fn walk(
        lp: &LinearProgram,
        simplex_row: &crate::lp::Constraint,
        from: usize,
        pick: usize,
        chosen: &mut Vec<usize>,
        found: &mut Vec<LinearPrevision>,
    ) {
        let ineqs = lp.inequalities();
        if chosen.len() == pick {
            let mut m = vec![simplex_row.coeffs.clone()];
            let mut b = vec![simplex_row.rhs.clone()];
            for &i in chosen.iter() {
                m.push(ineqs[i].coeffs.clone());
                b.push(ineqs[i].rhs.clone());
            }
            if let Some(x) = solve_square(m, b) {
                if lp.satisfies_closed(&x) {
                    let p = LinearPrevision { mass: x };
                    if !found.contains(&p) {
                        found.push(p);
                    }
                }
            }
            return;
        }
        for i in from..ineqs.len() {
            chosen.push(i);
            walk(lp, simplex_row, i + 1, pick, chosen, found);
            chosen.pop();
        }
    }
    walk(lp, simplex_row, 0, pick, &mut chosen, &mut found);
    if found.is_empty() {
        return Err(Error::Internal(
            "non-empty polytope without vertices".into(),
        ));
    }
    found.sort();
    Ok(found)
}

/// A coherent lower prevision, represented by its credal set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LowerPrevision {
    credal: CredalSet,
}

/// The value of a lower prevision and a mass function attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerValue {
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub attained_at: LinearPrevision,
}

impl LowerPrevision {
    pub fn new(credal: CredalSet) -> Self {
        Self { credal }
    }

    pub fn linear(p: LinearPrevision) -> Self {
        Self::new(CredalSet::singleton(p))
    }

    pub fn credal(&self) -> &CredalSet {
        &self.credal
    }

    pub fn dim(&self) -> usize {
        self.credal.dim()
    }

    /// `P̲(u)`, the minimum expectation over the credal set.
    pub fn lower(&self, u: &Gamble) -> Result<LowerValue> {
        u.check_dim(self.dim())?;
        match &self.credal {
            CredalSet::Vertices(vs) => {
                let mut best: Option<(Rational, &LinearPrevision)> = None;
                for p in vs {
                    let v = u.dot(p.mass());
                    if best.as_ref().is_none_or(|(b, _)| v < *b) {
                        best = Some((v, p));
                    }
                }
                let (value, p) = best.expect("vertex list is non-empty");
                Ok(LowerValue {
                    value,
                    attained_at: p.clone(),
                })
            }
            CredalSet::HalfSpaces { .. } => {
                let lp = self
                    .credal
                    .polytope()
                    .expect("half-space form")
                    .minimize(u.values().to_vec());
                let out = lp_minimize(&lp)?;
                match (out.status, out.value, out.witness) {
                    (LpStatus::Optimal, Some(value), Some(x)) => Ok(LowerValue {
                        value,
                        attained_at: LinearPrevision::new(x)?,
                    }),
                    _ => Err(Error::Internal(
                        "minimum over a non-empty credal polytope not attained".into(),
                    )),
                }
            }
        }
    }

    pub fn lower_value(&self, u: &Gamble) -> Result<Rational> {
        Ok(self.lower(u)?.value)
    }

    /// `P̄(u) = −P̲(−u)`.
    pub fn upper_value(&self, u: &Gamble) -> Result<Rational> {
        Ok(-self.lower_value(&-u)?)
    }
}

pub fn lower_prevision(l: &LowerPrevision, u: &Gamble) -> Result<LowerValue> {
    l.lower(u)
}

pub fn upper_prevision(l: &LowerPrevision, u: &Gamble) -> Result<Rational> {
    l.upper_value(u)
}

/// Outcome of a linearity test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Linearity {
    pub linear: bool,
    /// A gamble with `P̲(u) < P̄(u)` when not linear.
    pub witness: Option<Gamble>,
}

/// Decides whether `L` is a linear prevision. The probes are tried first so
/// that a caller-supplied witness is reported when it separates; the
/// coordinate indicators are then tried, which makes the test exact: the
/// credal set is a single point iff every coordinate of the mass is fixed.
pub fn is_linear(l: &LowerPrevision, probes: &[Gamble]) -> Result<Linearity> {
    let dim = l.dim();
    let indicators = (0..dim).map(|i| Gamble::indicator(dim, i));
    for u in probes.iter().cloned().chain(indicators) {
        if l.lower_value(&u)? != l.upper_value(&u)? {
            return Ok(Linearity {
                linear: false,
                witness: Some(u),
            });
        }
    }
    Ok(Linearity {
        linear: true,
        witness: None,
    })
}

/// A non-empty finite list of lower previsions on one state space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SetOfLowerPrevisions {
    members: Vec<LowerPrevision>,
}

impl SetOfLowerPrevisions {
    pub fn new(members: Vec<LowerPrevision>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::Input(
                "a set of lower previsions must not be empty".into(),
            ));
        };
        let dim = first.dim();
        for m in &members {
            Error::check_dim(dim, m.dim())?;
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[LowerPrevision] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }
}

/// The lower envelope of `{p : p·g ≥ 0 for g ∈ G}`; requires a coherent cone.
pub fn dual_credal_set(dim: usize, g: &ConeGenerators) -> Result<CredalSet> {
    g.check_dim(dim)?;
    if posi_member(g, &Gamble::zero(dim))?.is_member() {
        return Err(Error::Domain(
            "the cone contains 0 and is not coherent".into(),
        ));
    }
    let rows = g
        .generators()
        .iter()
        .map(|gi| HalfSpace {
            coeffs: gi.clone(),
            rhs: Rational::zero(),
        })
        .collect();
    CredalSet::half_spaces(dim, rows).map_err(|e| match e {
        Error::Input(m) => Error::Internal(format!("coherent cone with empty dual: {m}")),
        other => other,
    })
}

/// `sup{μ : u − μ ∈ posi(G ∪ {g : inf g > 0})}`; requires a coherent cone.
///
/// Solved as `max μ` over `u − μ − Σ λ_i g_i ≥ 0`, `λ ≥ 0`; the closed
/// program has the same supremum as the strict membership condition.
pub fn lower_prevision_from_cone(g: &ConeGenerators, u: &Gamble) -> Result<Rational> {
    let dim = u.dim();
    g.check_dim(dim)?;
    if posi_member(g, &Gamble::zero(dim))?.is_member() {
        return Err(Error::Domain(
            "the cone contains 0 and is not coherent".into(),
        ));
    }
    let k = g.len();
    // Variables: λ_0..λ_{k−1}, μ.
    let mut objective = vec![Rational::zero(); k + 1];
    objective[k] = -Rational::one();
    let mut lp = LinearProgram::new(k + 1).minimize(objective);
    for j in 0..k {
        lp.nonneg(j);
    }
    for x in 0..dim {
        // Σ λ_i g_i(x) + μ ≤ u(x)
        let mut row: Vec<Rational> = g
            .generators()
            .iter()
            .map(|gi| gi.values()[x].clone())
            .collect();
        row.push(Rational::one());
        lp.add_le(row, u.values()[x].clone());
    }
    let out = lp_minimize(&lp)?;
    match (out.status, out.value) {
        (LpStatus::Optimal, Some(v)) => Ok(-v),
        _ => Err(Error::Internal(format!(
            "cone lower prevision of {u} is not a finite optimum"
        ))),
    }
}

/// The lower envelope of finitely many linear previsions.
pub fn pointwise_min(ps: Vec<LinearPrevision>) -> Result<LowerPrevision> {
    Ok(LowerPrevision::new(CredalSet::vertices(ps)?))
}
