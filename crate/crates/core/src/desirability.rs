//! Coherent cones, sets of desirable option sets and natural extension.
//!
//! Membership in the natural extension of an assessment is decided by
//! enumerating selections (one gamble from each assessed set): `B` is outside
//! `Ex(𝒜)` exactly when some selection spans a coherent cone that contains
//! no element of `B`.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, FeasibilitySolver, LinearProgram, Simplex};
use crate::options::{
    posi_member, posi_member_with, posi_plain_member, shift_set, ConeGenerators, Gamble, OptionSet,
    PosiCertificate,
};
use crate::previsions::{pointwise_min, LinearPrevision, LowerPrevision, SetOfLowerPrevisions};
use crate::rational::{self, int, ratio, Rational};

pub const DEFAULT_SELECTION_CAP: usize = 4096;

/// A finite list of option sets judged to contain a desirable gamble.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Assessment {
    sets: Vec<OptionSet>,
}

impl Assessment {
    pub fn new(sets: impl IntoIterator<Item = OptionSet>) -> Self {
        let mut sets: Vec<OptionSet> = sets.into_iter().collect();
        sets.sort();
        sets.dedup();
        Self { sets }
    }

    pub fn sets(&self) -> &[OptionSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// True when some set is empty or `{0}` once the zero gamble is dropped;
    /// such an assessment can never be consistent.
    pub fn has_trivial_set(&self) -> bool {
        self.sets.iter().any(|a| a.without_zero().is_empty())
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        self.sets.iter().try_for_each(|a| a.check_dim(dim))
    }

    /// `∏ |A_i|`, refusing anything above `cap`.
    pub fn selection_count(&self, cap: usize) -> Result<usize> {
        let mut n: usize = 1;
        for a in &self.sets {
            n = n.saturating_mul(a.len());
            if n > cap {
                return Err(Error::Capacity {
                    what: "assessment selections",
                    needed: self
                        .sets
                        .iter()
                        .fold(1usize, |acc, a| acc.saturating_mul(a.len())),
                    limit: cap,
                });
            }
        }
        Ok(n)
    }

    /// The selection with mixed-radix index `index`, last set varying fastest.
    pub fn selection(&self, mut index: usize) -> Vec<Gamble> {
        let mut picked = vec![Gamble::zero(0); self.sets.len()];
        for (slot, a) in picked.iter_mut().zip(&self.sets).rev() {
            *slot = a.as_slice()[index % a.len()].clone();
            index /= a.len();
        }
        picked
    }

    fn dim_hint(&self) -> Option<usize> {
        self.sets
            .iter()
            .flat_map(|a| a.iter())
            .map(Gamble::dim)
            .next()
    }
}

fn common_dim(a: &Assessment, b: &OptionSet) -> Result<usize> {
    let dim = a
        .dim_hint()
        .or_else(|| b.iter().map(Gamble::dim).next())
        .unwrap_or(0);
    a.check_dim(dim)?;
    b.check_dim(dim)?;
    Ok(dim)
}

/// `0 ∉ posi(G ∪ {g : inf g > 0})`.
pub fn cone_coherent(g: &ConeGenerators) -> Result<bool> {
    let Some(dim) = g.generators().first().map(Gamble::dim) else {
        return Ok(true);
    };
    g.check_dim(dim)?;
    Ok(!posi_member(g, &Gamble::zero(dim))?.is_member())
}

/// What one selection says about a candidate option set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SelectionOutcome {
    /// The selection's cone contains 0, so no coherent model extends it.
    Incoherent {
        selection: Vec<Gamble>,
        zero: PosiCertificate,
    },
    /// The selection's cone contains `element`.
    Reaches {
        selection: Vec<Gamble>,
        element: Gamble,
        combination: PosiCertificate,
    },
    /// A coherent cone avoiding every element of the candidate set.
    Escapes { selection: Vec<Gamble> },
}

impl SelectionOutcome {
    pub fn selection(&self) -> &[Gamble] {
        match self {
            SelectionOutcome::Incoherent { selection, .. }
            | SelectionOutcome::Reaches { selection, .. }
            | SelectionOutcome::Escapes { selection } => selection,
        }
    }
}

fn analyse_selection(
    solver: &dyn FeasibilitySolver,
    selection: Vec<Gamble>,
    b: &OptionSet,
    dim: usize,
) -> Result<SelectionOutcome> {
    let zero = posi_member_with(solver, &selection, &Gamble::zero(dim))?;
    if zero.is_member() {
        return Ok(SelectionOutcome::Incoherent { selection, zero });
    }
    for element in b {
        let combination = posi_member_with(solver, &selection, element)?;
        if combination.is_member() {
            return Ok(SelectionOutcome::Reaches {
                selection,
                element: element.clone(),
                combination,
            });
        }
    }
    Ok(SelectionOutcome::Escapes { selection })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NatExCertificate {
    /// Every selection is incoherent or reaches the candidate set.
    Member { selections: Vec<SelectionOutcome> },
    /// The first selection (in enumeration order) whose cone avoids it.
    NotMember { escaping: Vec<Gamble> },
}

impl NatExCertificate {
    pub fn is_member(&self) -> bool {
        matches!(self, NatExCertificate::Member { .. })
    }
}

/// Decides `B ∈ Ex(𝒜)` with the simplex and the default selection cap.
pub fn natex_member(a: &Assessment, b: &OptionSet) -> Result<NatExCertificate> {
    natex_member_with(&Simplex, a, b, DEFAULT_SELECTION_CAP)
}

pub fn natex_member_with(
    solver: &dyn FeasibilitySolver,
    a: &Assessment,
    b: &OptionSet,
    cap: usize,
) -> Result<NatExCertificate> {
    let dim = common_dim(a, b)?;
    let count = a.selection_count(cap)?;
    let outcomes = (0..count)
        .into_par_iter()
        .map(|i| analyse_selection(solver, a.selection(i), b, dim))
        .collect::<Result<Vec<_>>>()?;
    if let Some(SelectionOutcome::Escapes { selection }) = outcomes
        .iter()
        .find(|o| matches!(o, SelectionOutcome::Escapes { .. }))
    {
        return Ok(NatExCertificate::NotMember {
            escaping: selection.clone(),
        });
    }
    Ok(NatExCertificate::Member {
        selections: outcomes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConsistencyCertificate {
    Consistent {
        selection: Vec<Gamble>,
    },
    /// Every selection's cone contains 0.
    Inconsistent {
        refutations: Vec<SelectionOutcome>,
    },
}

impl ConsistencyCertificate {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConsistencyCertificate::Consistent { .. })
    }
}

/// Is there a coherent set of desirable option sets including `𝒜`?
pub fn consistent(a: &Assessment) -> Result<ConsistencyCertificate> {
    consistent_with(&Simplex, a, DEFAULT_SELECTION_CAP)
}

pub fn consistent_with(
    solver: &dyn FeasibilitySolver,
    a: &Assessment,
    cap: usize,
) -> Result<ConsistencyCertificate> {
    let dim = common_dim(a, &OptionSet::empty())?;
    let count = a.selection_count(cap)?;
    let outcomes = (0..count)
        .into_par_iter()
        .map(|i| analyse_selection(solver, a.selection(i), &OptionSet::empty(), dim))
        .collect::<Result<Vec<_>>>()?;
    match outcomes
        .iter()
        .find(|o| !matches!(o, SelectionOutcome::Incoherent { .. }))
    {
        Some(o) => Ok(ConsistencyCertificate::Consistent {
            selection: o.selection().to_vec(),
        }),
        None => Ok(ConsistencyCertificate::Inconsistent {
            refutations: outcomes,
        }),
    }
}

/// The natural extension of an assessment, with its selection cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NaturalExtension {
    pub assessment: Assessment,
    #[serde(skip)]
    pub cap: usize,
}

impl NaturalExtension {
    pub fn new(assessment: Assessment) -> Self {
        Self {
            assessment,
            cap: DEFAULT_SELECTION_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }
}

/// A set of desirable option sets given by a decidable membership test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SdosOracle {
    /// `{A : A ∩ D ≠ ∅}` for the cone `D` spanned by the generators.
    FromCone(ConeGenerators),
    /// `{A : ∃u ∈ A, P̲(u) > 0}`.
    FromLower(LowerPrevision),
    /// The intersection of the `FromLower` sets of every member.
    FromSet(SetOfLowerPrevisions),
    NatEx(NaturalExtension),
}

/// Anything that can answer `A ∈ K`.
pub trait DesirableOptionSets: Sync {
    fn contains(&self, a: &OptionSet) -> Result<bool>;
}

impl DesirableOptionSets for SdosOracle {
    fn contains(&self, a: &OptionSet) -> Result<bool> {
        Ok(k_member(self, a)?.member)
    }
}

/// Wraps a plain predicate as a set of desirable option sets.
pub struct AdHoc<F>(pub F);

impl<F: Fn(&OptionSet) -> bool + Sync> DesirableOptionSets for AdHoc<F> {
    fn contains(&self, a: &OptionSet) -> Result<bool> {
        Ok((self.0)(a))
    }
}

impl SdosOracle {
    /// Whether coherence follows from how the oracle was built: always for
    /// lower previsions, for cones iff the cone is coherent, for natural
    /// extensions iff the assessment is consistent.
    pub fn coherent_by_construction(&self) -> Result<bool> {
        match self {
            SdosOracle::FromLower(_) | SdosOracle::FromSet(_) => Ok(true),
            SdosOracle::FromCone(g) => cone_coherent(g),
            SdosOracle::NatEx(n) => {
                Ok(consistent_with(&Simplex, &n.assessment, n.cap)?.is_consistent())
            }
        }
    }
}

/// An element of an option set together with its lower prevision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementValue {
    pub element: Gamble,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub attained_at: LinearPrevision,
}

/// The element of `a` with the largest lower prevision (first in canonical
/// order on ties); `None` for the empty set.
pub fn best_element(l: &LowerPrevision, a: &OptionSet) -> Result<Option<ElementValue>> {
    let mut best: Option<ElementValue> = None;
    for u in a {
        let lv = l.lower(u)?;
        if best.as_ref().is_none_or(|b| lv.value > b.value) {
            best = Some(ElementValue {
                element: u.clone(),
                value: lv.value,
                attained_at: lv.attained_at,
            });
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KCertificate {
    Cone {
        element: Option<Gamble>,
        combination: PosiCertificate,
    },
    /// Membership holds iff `best.value > 0`.
    Lower {
        best: Option<ElementValue>,
    },
    /// One certificate per member of the set.
    Set {
        members: Vec<KCertificate>,
    },
    NatEx {
        analysis: NatExCertificate,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KMembership {
    pub member: bool,
    pub certificate: KCertificate,
}

fn lower_membership(l: &LowerPrevision, a: &OptionSet) -> Result<KMembership> {
    let best = best_element(l, a)?;
    Ok(KMembership {
        member: best.as_ref().is_some_and(|b| b.value.is_positive()),
        certificate: KCertificate::Lower { best },
    })
}

/// Decides `A ∈ K`.
pub fn k_member(k: &SdosOracle, a: &OptionSet) -> Result<KMembership> {
    match k {
        SdosOracle::FromCone(g) => {
            for u in a {
                let c = posi_member(g, u)?;
                if c.is_member() {
                    return Ok(KMembership {
                        member: true,
                        certificate: KCertificate::Cone {
                            element: Some(u.clone()),
                            combination: c,
                        },
                    });
                }
            }
            Ok(KMembership {
                member: false,
                certificate: KCertificate::Cone {
                    element: None,
                    combination: PosiCertificate::Outside,
                },
            })
        }
        SdosOracle::FromLower(l) => lower_membership(l, a),
        SdosOracle::FromSet(s) => {
            let members = s
                .members()
                .iter()
                .map(|l| lower_membership(l, a))
                .collect::<Result<Vec<_>>>()?;
            Ok(KMembership {
                member: members.iter().all(|m| m.member),
                certificate: KCertificate::Set {
                    members: members.into_iter().map(|m| m.certificate).collect(),
                },
            })
        }
        SdosOracle::NatEx(n) => {
            let analysis = natex_member_with(&Simplex, &n.assessment, a, n.cap)?;
            Ok(KMembership {
                member: analysis.is_member(),
                certificate: KCertificate::NatEx { analysis },
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    K0,
    K1,
    K2,
    K3,
    K4,
}

/// A concrete instance on which an axiom fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub detail: String,
    pub sets: Vec<OptionSet>,
}

fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    ratio(
        rng.gen_range(0..=4),
        *[1, 2, 4].get(rng.gen_range(0..3)).unwrap(),
    )
}

/// Searches for violations of the coherence axioms `K0`–`K4` on instances
/// built from `probes`. Finding none is evidence, not proof: `K3` and `K4`
/// quantify over infinitely many coefficient choices and supersets.
///
/// * `K0`: `A ∪ {0} ∈ K` must imply `A \ {0} ∈ K`.
/// * `K1`: `{0} ∉ K`.
/// * `K2`: `{w} ∈ K` for every probe element lifted to `inf w = 1`.
/// * `K3`: for consecutive members `A₁, A₂` of `K` among the probes,
///   `coeff_trials` random combinations `{λ u + μ v}` with `(λ, μ) > 0`
///   drawn per pair.
/// * `K4`: each member joined with the next probe stays in `K`.
pub fn coherence_probe<R: Rng + ?Sized>(
    k: &dyn DesirableOptionSets,
    dim: usize,
    probes: &[OptionSet],
    coeff_trials: usize,
    rng: &mut R,
) -> Result<Vec<Violation>> {
    if probes.is_empty() {
        return Err(Error::Input(
            "coherence probe needs at least one probe".into(),
        ));
    }
    for p in probes {
        p.check_dim(dim)?;
    }
    let mut out = Vec::new();
    let zero = Gamble::zero(dim);

    let zero_set = OptionSet::singleton(zero.clone());
    if k.contains(&zero_set)? {
        out.push(Violation {
            axiom: Axiom::K1,
            detail: "{0} is a member".into(),
            sets: vec![zero_set],
        });
    }

    let member: Vec<bool> = probes
        .par_iter()
        .map(|p| k.contains(p))
        .collect::<Result<_>>()?;

    for p in probes {
        let with_zero = p.with(zero.clone());
        let stripped = p.without_zero();
        if k.contains(&with_zero)? && !k.contains(&stripped)? {
            out.push(Violation {
                axiom: Axiom::K0,
                detail: "member loses membership when 0 is removed".into(),
                sets: vec![with_zero, stripped],
            });
        }
        for u in p {
            let lifted = u.minus_constant(&(u.inf() - Rational::one()));
            let single = OptionSet::singleton(lifted);
            if !k.contains(&single)? {
                out.push(Violation {
                    axiom: Axiom::K2,
                    detail: "uniformly positive singleton is not a member".into(),
                    sets: vec![single],
                });
            }
        }
    }

    let members: Vec<&OptionSet> = probes
        .iter()
        .zip(&member)
        .filter_map(|(p, &m)| m.then_some(p))
        .collect();
    for (i, a1) in members.iter().enumerate() {
        let a2 = members[(i + 1) % members.len()];
        for _ in 0..coeff_trials {
            let mut combined = Vec::with_capacity(a1.len() * a2.len());
            for u in a1.iter() {
                for v in a2.iter() {
                    let (lam, mu) = loop {
                        let pair = (random_coefficient(rng), random_coefficient(rng));
                        if !(pair.0.is_zero() && pair.1.is_zero()) {
                            break pair;
                        }
                    };
                    combined.push(&u.scale(&lam) + &v.scale(&mu));
                }
            }
            let combined = OptionSet::new(combined);
            if !k.contains(&combined)? {
                out.push(Violation {
                    axiom: Axiom::K3,
                    detail: "positive combination of two members is not a member".into(),
                    sets: vec![(*a1).clone(), a2.clone(), combined],
                });
            }
        }
    }

    for (i, p) in probes.iter().enumerate() {
        if !member[i] {
            continue;
        }
        let superset = p.union(&probes[(i + 1) % probes.len()]);
        if !k.contains(&superset)? {
            out.push(Violation {
                axiom: Axiom::K4,
                detail: "superset of a member is not a member".into(),
                sets: vec![p.clone(), superset],
            });
        }
    }
    Ok(out)
}

/// Evidence for one instance of the mixing axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixingCheck {
    pub violated: bool,
    pub b_in_k: bool,
    pub a_subset_b: bool,
    /// Per element of `B`, its plain positive combination of `A` (empty
    /// unless the earlier conditions hold).
    pub combinations: Vec<PosiCertificate>,
    pub a_in_k: bool,
}

/// Checks whether `(A, B)` violates mixing: `B ∈ K`, `A ⊆ B ⊆ posi(A)` and
/// yet `A ∉ K`.
pub fn mixing_check(
    k: &dyn DesirableOptionSets,
    a: &OptionSet,
    b: &OptionSet,
) -> Result<MixingCheck> {
    let b_in_k = k.contains(b)?;
    let a_subset_b = a.is_subset(b);
    let mut combinations = Vec::new();
    let mut inside = b_in_k && a_subset_b;
    if inside {
        for w in b {
            let c = posi_plain_member(a.as_slice(), w)?;
            inside &= c.is_member();
            combinations.push(c);
            if !inside {
                break;
            }
        }
    }
    let a_in_k = k.contains(a)?;
    Ok(MixingCheck {
        violated: inside && !a_in_k,
        b_in_k,
        a_subset_b,
        combinations,
        a_in_k,
    })
}

/// A pair of option sets on which `K_P̲` fails to be mixing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixingCounterexample {
    pub direction: Gamble,
    #[serde(with = "rational::serde_str")]
    pub eps: Rational,
    pub a: OptionSet,
    pub b: OptionSet,
}

/// Candidate directions for a nonlinearity witness: differences of
/// indicators, indicators, then differences of vertices.
fn nonlinearity_directions(l: &LowerPrevision) -> Result<Vec<Gamble>> {
    let dim = l.dim();
    let mut dirs = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            dirs.push(&Gamble::indicator(dim, i) - &Gamble::indicator(dim, j));
        }
    }
    dirs.extend((0..dim).map(|i| Gamble::indicator(dim, i)));
    let vs = l.credal().vertex_list()?;
    for (i, p) in vs.iter().enumerate() {
        for q in &vs[i + 1..] {
            let d: Vec<Rational> = p.mass().iter().zip(q.mass()).map(|(x, y)| x - y).collect();
            dirs.push(Gamble::new(d));
        }
    }
    Ok(dirs)
}

/// Builds the mixing counterexample for `L` from a direction `u` with
/// `P̲(u) + P̲(−u) < 0`; `None` if `u` is not such a direction.
pub fn mixing_counterexample_from(
    l: &LowerPrevision,
    u: &Gamble,
) -> Result<Option<MixingCounterexample>> {
    let lu = l.lower_value(u)?;
    let eps = -(&lu + l.lower_value(&-u)?);
    if !eps.is_positive() {
        return Ok(None);
    }
    let half = &eps / int(2);
    let u1 = u.minus_constant(&(&lu + &half));
    let u2 = (-u).plus_constant(&(&lu + &eps));
    let sum = &u1 + &u2;
    let a = OptionSet::new([u1.clone(), u2.clone()]);
    let b = a.with(sum.clone());

    let ok = l.lower_value(&u1)? == -&half
        && l.lower_value(&u2)?.is_zero()
        && sum.inf() == half
        && mixing_check(&SdosOracle::FromLower(l.clone()), &a, &b)?.violated;
    if !ok {
        return Err(Error::Internal(format!(
            "mixing counterexample along {u} fails its postconditions"
        )));
    }
    Ok(Some(MixingCounterexample {
        direction: u.clone(),
        eps,
        a,
        b,
    }))
}

/// For a nonlinear `L`, option sets `A ⊆ B ⊆ posi(A)` with `B ∈ K_P̲` and
/// `A ∉ K_P̲`; `None` when `L` is linear. The indicator directions alone
/// already detect every nonlinear `L`, so the search never comes back
/// inconclusive.
pub fn mixing_counterexample(l: &LowerPrevision) -> Result<Option<MixingCounterexample>> {
    for u in nonlinearity_directions(l)? {
        if let Some(found) = mixing_counterexample_from(l, &u)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Does `L` dominate the assessment, i.e. does every assessed set hold an
/// element with positive lower prevision?
pub fn dominates(l: &LowerPrevision, a: &Assessment) -> Result<bool> {
    for set in a.sets() {
        let best = best_element(l, set)?;
        if !best.is_some_and(|b| b.value.is_positive()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of looking for a dominating lower prevision that excludes `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Separation {
    /// `B ∈ Ex(𝒜)`, so every dominating lower prevision accepts `B`.
    Member,
    /// `L` dominates `𝒜` through `selection` and gives every element of `B`
    /// a non-positive lower prevision.
    Separated {
        selection: Vec<Gamble>,
        lower: LowerPrevision,
    },
    /// `B ∉ Ex(𝒜)`, yet every dominating lower prevision accepts `B`: the
    /// natural extension is not Archimedean here. `escaping` is the
    /// selection whose cone avoids `B`.
    NotSeparable { escaping: Vec<Gamble> },
}

/// A mass function with `p·σ_i > 0` for every selected gamble and, when
/// given, `p·b ≤ 0`.
fn strict_dual_point(
    dim: usize,
    selection: &[Gamble],
    b: Option<&Gamble>,
) -> Result<Option<LinearPrevision>> {
    let mut lp = LinearProgram::new(dim);
    lp.add_eq(vec![Rational::one(); dim], Rational::one());
    for j in 0..dim {
        lp.nonneg(j);
    }
    for g in selection {
        lp.add_gt(g.values().to_vec(), Rational::zero());
    }
    if let Some(b) = b {
        lp.add_le(b.values().to_vec(), Rational::zero());
    }
    lp_feasible(&lp)?
        .witness
        .map(LinearPrevision::new)
        .transpose()
}

/// For each `b ∈ B` a mass function strictly positive on the selection with
/// `p·b ≤ 0`; `None` as soon as one `b` has none.
fn separating_points(
    dim: usize,
    selection: &[Gamble],
    b: &OptionSet,
) -> Result<Option<Vec<LinearPrevision>>> {
    if b.is_empty() {
        return Ok(strict_dual_point(dim, selection, None)?.map(|p| vec![p]));
    }
    let mut points = Vec::with_capacity(b.len());
    for w in b {
        match strict_dual_point(dim, selection, Some(w))? {
            Some(p) => points.push(p),
            None => return Ok(None),
        }
    }
    Ok(Some(points))
}

/// Looks for a coherent lower prevision that dominates `𝒜` but not `B`.
///
/// Such an `L` exists iff some selection `σ` admits, for every `b ∈ B`, a
/// mass function `p_b` with `p_b·σ_i > 0` for all `i` and `p_b·b ≤ 0`; the
/// lower envelope of those `p_b` is then returned.
pub fn separating_lower_prevision(a: &Assessment, b: &OptionSet) -> Result<Separation> {
    let dim = common_dim(a, b)?;
    if !consistent(a)?.is_consistent() {
        return Err(Error::Domain("the assessment is not consistent".into()));
    }
    let escaping = match natex_member(a, b)? {
        NatExCertificate::Member { .. } => return Ok(Separation::Member),
        NatExCertificate::NotMember { escaping } => escaping,
    };
    let count = a.selection_count(DEFAULT_SELECTION_CAP)?;
    let found = (0..count)
        .into_par_iter()
        .map(|i| {
            let sel = a.selection(i);
            Ok(separating_points(dim, &sel, b)?.map(|ps| (sel, ps)))
        })
        .find_map_first(|r: Result<Option<_>>| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let Some(found) = found else {
        return Ok(Separation::NotSeparable { escaping });
    };
    let (selection, points) = found?.expect("filtered to found separators");
    let lower = pointwise_min(points)?;
    if !dominates(&lower, a)? || k_member(&SdosOracle::FromLower(lower.clone()), b)?.member {
        return Err(Error::Internal(
            "separating lower prevision fails its postconditions".into(),
        ));
    }
    Ok(Separation::Separated { selection, lower })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LinearSeparation {
    Member,
    /// `P` dominates `𝒜` and `P(u) ≤ 0`.
    Separated {
        selection: Vec<Gamble>,
        prevision: LinearPrevision,
    },
    NotSeparable {
        escaping: Vec<Gamble>,
    },
}

/// A linear prevision dominating `𝒜` with `P(u) ≤ 0`, when `{u} ∉ Ex(𝒜)`
/// and one exists.
pub fn separating_linear(a: &Assessment, u: &Gamble) -> Result<LinearSeparation> {
    let b = OptionSet::singleton(u.clone());
    Ok(match separating_lower_prevision(a, &b)? {
        Separation::Member => LinearSeparation::Member,
        Separation::NotSeparable { escaping } => LinearSeparation::NotSeparable { escaping },
        Separation::Separated { selection, lower } => {
            let prevision = lower.lower(u)?.attained_at;
            LinearSeparation::Separated {
                selection,
                prevision,
            }
        }
    })
}

/// For `A ∈ K_S`, an `ε > 0` with `A − ε ∈ K_S`: half the smallest over the
/// members of the best lower prevision attained in `A`.
pub fn sa_shift_witness(s: &SetOfLowerPrevisions, a: &OptionSet) -> Result<Option<Rational>> {
    let mut smallest: Option<Rational> = None;
    for l in s.members() {
        match best_element(l, a)? {
            Some(b) if b.value.is_positive() => {
                if smallest.as_ref().is_none_or(|m| b.value < *m) {
                    smallest = Some(b.value);
                }
            }
            _ => return Ok(None),
        }
    }
    let Some(smallest) = smallest else {
        return Ok(None);
    };
    let eps = smallest / int(2);
    let k = SdosOracle::FromSet(s.clone());
    if !k_member(&k, &shift_set(a, &eps))?.member {
        return Err(Error::Internal("shifted option set left the set".into()));
    }
    Ok(Some(eps))
}

#[cfg(test)]
mod tests;
