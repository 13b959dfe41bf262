//! Choice functions: expected utility, E-admissibility, maximality and
//! Archimedean choice over sets of lower previsions, the bridges between
//! choice functions and sets of desirable option sets, and checks of their
//! structural properties on concrete instances.
//!
//! Every decision carries a certificate that [`verify_result`] re-checks
//! from scratch.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::desirability::{k_member, KMembership, SdosOracle};
use crate::error::{Error, Result};
use crate::lp::{lp_feasible, lp_minimize, LinearProgram, LpStatus};
use crate::options::{ominus, translate_set, Gamble, OptionSet};
use crate::previsions::{
    pointwise_min, CredalSet, LinearPrevision, LowerPrevision, SetOfLowerPrevisions,
};
use crate::rational::{self, Rational};

/// Largest vertex list accepted by [`maximality_as_archimedean`].
pub const MAX_ARCHIMEDEAN_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", content = "model", rename_all = "kebab-case")]
pub enum ChoiceRule {
    Meu(LinearPrevision),
    #[serde(rename = "e-admissibility")]
    EAdm(CredalSet),
    #[serde(rename = "maximality")]
    Max(CredalSet),
    #[serde(rename = "archimedean")]
    Arch(SetOfLowerPrevisions),
    FromK(SdosOracle),
}

impl ChoiceRule {
    /// The state-space size the rule is defined on, when it fixes one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            ChoiceRule::Meu(p) => Some(p.dim()),
            ChoiceRule::EAdm(m) | ChoiceRule::Max(m) => Some(m.dim()),
            ChoiceRule::Arch(s) => Some(s.dim()),
            ChoiceRule::FromK(k) => match k {
                SdosOracle::FromLower(l) => Some(l.dim()),
                SdosOracle::FromSet(s) => Some(s.dim()),
                SdosOracle::FromCone(g) => g.generators().first().map(Gamble::dim),
                SdosOracle::NatEx(n) => n
                    .assessment
                    .sets()
                    .iter()
                    .flat_map(|a| a.iter())
                    .map(Gamble::dim)
                    .next(),
            },
        }
    }
}

/// `P̲(w − u)` for one competitor `w`, with the mass function attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairValue {
    pub other: Gamble,
    #[serde(with = "rational::serde_str")]
    pub lower: Rational,
    pub attained_at: LinearPrevision,
}

/// A competitor strictly better under every prevision: `P̲(by − u) > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dominator {
    pub by: Gamble,
    #[serde(with = "rational::serde_str")]
    pub margin: Rational,
}

/// A mixture weight on one competitor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Weight {
    pub option: Gamble,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChoiceCertificate {
    /// Expected utility of the option against the best in the set.
    Expectation {
        #[serde(with = "rational::serde_str")]
        value: Rational,
        best: Gamble,
        #[serde(with = "rational::serde_str")]
        best_value: Rational,
    },
    /// A prevision in the credal set under which the option is optimal.
    Supporting {
        prevision: LinearPrevision,
    },
    /// A mixture of competitors that beats the option under every
    /// prevision: `P̲(Σ α_w w − u) = margin > 0`.
    MixtureDominates {
        weights: Vec<Weight>,
        #[serde(with = "rational::serde_str")]
        margin: Rational,
    },
    /// No competitor dominates: `P̲(w − u) ≤ 0` for each.
    Undominated {
        pairs: Vec<PairValue>,
    },
    Dominated(Dominator),
    /// Member `member` of the set leaves the option undominated.
    ArchChosen {
        member: usize,
        pairs: Vec<PairValue>,
    },
    /// For every member, a competitor dominating the option.
    ArchRejected {
        dominators: Vec<Dominator>,
    },
    /// Membership of `A ⊖ u`; the option is chosen iff it is not a member.
    Ominus {
        set: OptionSet,
        membership: KMembership,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptionVerdict {
    pub option: Gamble,
    pub chosen: bool,
    pub certificate: ChoiceCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChoiceResult {
    pub chosen: OptionSet,
    /// One verdict per option, in the canonical order of the input set.
    pub verdicts: Vec<OptionVerdict>,
}

impl ChoiceResult {
    fn from_verdicts(verdicts: Vec<OptionVerdict>) -> Self {
        let chosen = verdicts
            .iter()
            .filter(|v| v.chosen)
            .map(|v| v.option.clone())
            .collect();
        Self { chosen, verdicts }
    }
}

/// Anything that maps option sets to chosen subsets.
pub trait ChoiceFunction: Sync {
    fn chosen(&self, a: &OptionSet) -> Result<OptionSet>;
}

impl ChoiceFunction for ChoiceRule {
    fn chosen(&self, a: &OptionSet) -> Result<OptionSet> {
        Ok(choose(self, a)?.chosen)
    }
}

/// Wraps a plain function as a choice function.
pub struct AdHocChoice<F>(pub F);

impl<F: Fn(&OptionSet) -> OptionSet + Sync> ChoiceFunction for AdHocChoice<F> {
    fn chosen(&self, a: &OptionSet) -> Result<OptionSet> {
        Ok((self.0)(a))
    }
}

fn per_option<F>(a: &OptionSet, dim: usize, decide: F) -> Result<ChoiceResult>
where
    F: Fn(&Gamble) -> Result<(bool, ChoiceCertificate)> + Sync,
{
    a.check_dim(dim)?;
    let verdicts = a
        .as_slice()
        .par_iter()
        .map(|u| {
            let (chosen, certificate) = decide(u)?;
            Ok(OptionVerdict {
                option: u.clone(),
                chosen,
                certificate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChoiceResult::from_verdicts(verdicts))
}

pub fn choose(rule: &ChoiceRule, a: &OptionSet) -> Result<ChoiceResult> {
    match rule {
        ChoiceRule::Meu(p) => choose_meu(p, a),
        ChoiceRule::EAdm(m) => choose_eadm(m, a),
        ChoiceRule::Max(m) => choose_max(m, a),
        ChoiceRule::Arch(s) => choose_arch(s, a),
        ChoiceRule::FromK(k) => choice_from_k(k, a),
    }
}

/// Options of highest expectation; ties are all kept.
pub fn choose_meu(p: &LinearPrevision, a: &OptionSet) -> Result<ChoiceResult> {
    a.check_dim(p.dim())?;
    let mut best: Option<(Rational, &Gamble)> = None;
    for u in a {
        let v = p.expectation(u)?;
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, u));
        }
    }
    per_option(a, p.dim(), |u| {
        let (best_value, best) = best.clone().expect("non-empty when an option exists");
        let value = p.expectation(u)?;
        Ok((
            value == best_value,
            ChoiceCertificate::Expectation {
                value,
                best: best.clone(),
                best_value,
            },
        ))
    })
}

/// `max t` over mixtures `α` of the competitors, with
/// `Σ_w α_w v·(w − u) ≥ t` at every vertex `v`.
fn best_mixture(
    vertices: &[LinearPrevision],
    u: &Gamble,
    others: &[&Gamble],
) -> Result<(Rational, Vec<Rational>)> {
    let m = others.len();
    let mut objective = vec![Rational::zero(); m + 1];
    objective[m] = -Rational::one();
    let mut lp = LinearProgram::new(m + 1).minimize(objective);
    let mut simplex = vec![Rational::one(); m + 1];
    simplex[m] = Rational::zero();
    lp.add_eq(simplex, Rational::one());
    for j in 0..m {
        lp.nonneg(j);
    }
    for v in vertices {
        let mut row: Vec<Rational> = others.iter().map(|w| (*w - u).dot(v.mass())).collect();
        row.push(-Rational::one());
        lp.add_ge(row, Rational::zero());
    }
    let out = lp_minimize(&lp)?;
    match (out.status, out.value, out.witness) {
        (LpStatus::Optimal, Some(v), Some(mut x)) => {
            x.pop();
            Ok((-v, x))
        }
        _ => Err(Error::Internal("mixture program has no optimum".into())),
    }
}

/// A prevision in `M` under which `u` is at least as good as every
/// competitor.
fn supporting_prevision(
    m: &CredalSet,
    vertices: &[LinearPrevision],
    u: &Gamble,
    others: &[&Gamble],
) -> Result<Option<LinearPrevision>> {
    let dim = m.dim();
    match m.polytope() {
        Some(mut lp) => {
            for w in others {
                lp.add_ge((u - *w).into_values(), Rational::zero());
            }
            lp_feasible(&lp)?
                .witness
                .map(LinearPrevision::new)
                .transpose()
        }
        None => {
            // p = Σ β_k v_k over the vertices.
            let k = vertices.len();
            let mut lp = LinearProgram::new(k);
            lp.add_eq(vec![Rational::one(); k], Rational::one());
            for j in 0..k {
                lp.nonneg(j);
            }
            for w in others {
                let d = u - *w;
                lp.add_ge(
                    vertices.iter().map(|v| d.dot(v.mass())).collect(),
                    Rational::zero(),
                );
            }
            let Some(beta) = lp_feasible(&lp)?.witness else {
                return Ok(None);
            };
            let mut mass = vec![Rational::zero(); dim];
            for (b, v) in beta.iter().zip(vertices) {
                for (acc, x) in mass.iter_mut().zip(v.mass()) {
                    *acc += b * x;
                }
            }
            Ok(Some(LinearPrevision::new(mass)?))
        }
    }
}

/// E-admissible options: those maximising expectation under at least one
/// prevision of `M`. A rejected option is beaten by a mixture of the others
/// under every prevision of `M`, which is the certificate returned.
pub fn choose_eadm(m: &CredalSet, a: &OptionSet) -> Result<ChoiceResult> {
    a.check_dim(m.dim())?;
    let vertices = m.vertex_list()?;
    let lower = LowerPrevision::new(m.clone());
    per_option(a, m.dim(), |u| {
        let others: Vec<&Gamble> = a.iter().filter(|w| *w != u).collect();
        if !others.is_empty() {
            let (t, alpha) = best_mixture(&vertices, u, &others)?;
            if t.is_positive() {
                let mut mix = Gamble::zero(u.dim());
                for (w, al) in others.iter().zip(&alpha) {
                    mix = &mix + &w.scale(al);
                }
                let margin = lower.lower_value(&(&mix - u))?;
                if margin != t {
                    return Err(Error::Internal(
                        "mixture margin disagrees with its program".into(),
                    ));
                }
                let weights = others
                    .iter()
                    .zip(alpha)
                    .filter(|(_, al)| !al.is_zero())
                    .map(|(w, weight)| Weight {
                        option: (*w).clone(),
                        weight,
                    })
                    .collect();
                return Ok((
                    false,
                    ChoiceCertificate::MixtureDominates { weights, margin },
                ));
            }
        }
        match supporting_prevision(m, &vertices, u, &others)? {
            Some(prevision) => Ok((true, ChoiceCertificate::Supporting { prevision })),
            None => Err(Error::Internal(
                "option neither supported nor dominated by a mixture".into(),
            )),
        }
    })
}

/// Pairwise comparison of `u` against the competitors under one lower
/// prevision: the first dominator, or the full list of pair values.
fn undominated_under(
    l: &LowerPrevision,
    a: &OptionSet,
    u: &Gamble,
) -> Result<std::result::Result<Vec<PairValue>, Dominator>> {
    let mut pairs = Vec::new();
    for w in a.iter().filter(|w| *w != u) {
        let lv = l.lower(&(w - u))?;
        if lv.value.is_positive() {
            return Ok(Err(Dominator {
                by: w.clone(),
                margin: lv.value,
            }));
        }
        pairs.push(PairValue {
            other: w.clone(),
            lower: lv.value,
            attained_at: lv.attained_at,
        });
    }
    Ok(Ok(pairs))
}

/// Maximal options: those not dominated by a single competitor, i.e.
/// `P̲(w − u) ≤ 0` for every `w`.
pub fn choose_max(m: &CredalSet, a: &OptionSet) -> Result<ChoiceResult> {
    let l = LowerPrevision::new(m.clone());
    per_option(a, m.dim(), |u| {
        Ok(match undominated_under(&l, a, u)? {
            Ok(pairs) => (true, ChoiceCertificate::Undominated { pairs }),
            Err(d) => (false, ChoiceCertificate::Dominated(d)),
        })
    })
}

/// `u` is chosen iff some member leaves it undominated.
pub fn choose_arch(s: &SetOfLowerPrevisions, a: &OptionSet) -> Result<ChoiceResult> {
    per_option(a, s.dim(), |u| {
        let mut dominators = Vec::with_capacity(s.len());
        for (i, l) in s.members().iter().enumerate() {
            match undominated_under(l, a, u)? {
                Ok(pairs) => return Ok((true, ChoiceCertificate::ArchChosen { member: i, pairs })),
                Err(d) => dominators.push(d),
            }
        }
        Ok((false, ChoiceCertificate::ArchRejected { dominators }))
    })
}

/// Minima of every non-empty subset of the vertices of `M`; Archimedean
/// choice over this set coincides with maximality under `M`.
pub fn maximality_as_archimedean(m: &CredalSet) -> Result<SetOfLowerPrevisions> {
    let vs = m.vertex_list()?;
    if vs.len() > MAX_ARCHIMEDEAN_VERTICES {
        return Err(Error::Capacity {
            what: "credal vertices for subset minima",
            needed: vs.len(),
            limit: MAX_ARCHIMEDEAN_VERTICES,
        });
    }
    let members = (1u32..(1 << vs.len()))
        .map(|mask| {
            let subset = vs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect();
            pointwise_min(subset)
        })
        .collect::<Result<Vec<_>>>()?;
    SetOfLowerPrevisions::new(members)
}

/// `C_K(A) = {u ∈ A : A ⊖ u ∉ K}`.
pub fn choice_from_k(k: &SdosOracle, a: &OptionSet) -> Result<ChoiceResult> {
    let dim = a.iter().map(Gamble::dim).next().unwrap_or(0);
    per_option(a, dim, |u| {
        let set = ominus(a, u);
        let membership = k_member(k, &set)?;
        Ok((
            !membership.member,
            ChoiceCertificate::Ominus { set, membership },
        ))
    })
}

fn zero_for(rule: &ChoiceRule, a: &OptionSet) -> Result<Gamble> {
    let dim = a
        .iter()
        .map(Gamble::dim)
        .next()
        .or_else(|| rule.dim())
        .ok_or_else(|| Error::Input("cannot infer the state-space size".into()))?;
    Ok(Gamble::zero(dim))
}

/// `A ∈ R_C` iff `0 ∉ C(A ∪ {0})`.
pub fn k_from_choice(rule: &ChoiceRule, a: &OptionSet) -> Result<bool> {
    let zero = zero_for(rule, a)?;
    let chosen = rule.chosen(&a.with(zero.clone()))?;
    Ok(!chosen.contains(&zero))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationViolation {
    pub set: OptionSet,
    pub option: Gamble,
    pub chosen_in_set: bool,
    pub zero_chosen_in_translate: bool,
}

/// Checks `u ∈ C(A) ⟺ 0 ∈ C(A − u)` for every probe and every option.
pub fn check_translation_invariance(
    rule: &dyn ChoiceFunction,
    probes: &[OptionSet],
) -> Result<Vec<TranslationViolation>> {
    let mut out = Vec::new();
    for a in probes {
        let chosen = rule.chosen(a)?;
        for u in a {
            let zero = Gamble::zero(u.dim());
            let shifted = rule.chosen(&translate_set(a, u))?;
            let lhs = chosen.contains(u);
            let rhs = shifted.contains(&zero);
            if lhs != rhs {
                out.push(TranslationViolation {
                    set: a.clone(),
                    option: u.clone(),
                    chosen_in_set: lhs,
                    zero_chosen_in_translate: rhs,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binarity {
    pub binary: bool,
    pub chosen: OptionSet,
    /// Options that survive every pairwise comparison.
    pub pairwise: OptionSet,
    /// Options on which the two disagree.
    pub separators: OptionSet,
}

/// Compares `C(A)` with `{u ∈ A : u ∈ C({u, w}) for all w ∈ A \ {u}}`.
pub fn check_binary(rule: &dyn ChoiceFunction, a: &OptionSet) -> Result<Binarity> {
    if a.len() < 2 {
        return Err(Error::Input(
            "binarity needs an option set with at least two options".into(),
        ));
    }
    let chosen = rule.chosen(a)?;
    let mut pairwise = Vec::new();
    for u in a {
        let mut survives = true;
        for w in a.iter().filter(|w| *w != u) {
            if !rule
                .chosen(&OptionSet::new([u.clone(), w.clone()]))?
                .contains(u)
            {
                survives = false;
                break;
            }
        }
        if survives {
            pairwise.push(u.clone());
        }
    }
    let pairwise = OptionSet::new(pairwise);
    let separators: OptionSet = a
        .iter()
        .filter(|u| chosen.contains(u) != pairwise.contains(u))
        .cloned()
        .collect();
    Ok(Binarity {
        binary: separators.is_empty(),
        chosen,
        pairwise,
        separators,
    })
}

/// `E-admissible ⊆ maximal` on `A`.
pub fn verify_e_subset_m(m: &CredalSet, a: &OptionSet) -> Result<bool> {
    let e = choose_eadm(m, a)?.chosen;
    let mx = choose_max(m, a)?.chosen;
    Ok(e.is_subset(&mx))
}

/// An option set on which maximality and E-admissibility under `{P1, P2}`
/// differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparatingSet {
    pub direction: Gamble,
    pub set: OptionSet,
    pub maximal: OptionSet,
    pub e_admissible: OptionSet,
}

/// For distinct `P1`, `P2`: a direction `u` with `P1(u) > P2(u)` and the set
/// `{0, P1(u) − u, u − P2(u)}`, in which 0 is maximal but not E-admissible
/// under the credal set spanned by `P1` and `P2`. `None` when `P1 = P2`.
pub fn prop5_witness(p1: &LinearPrevision, p2: &LinearPrevision) -> Result<Option<SeparatingSet>> {
    Error::check_dim(p1.dim(), p2.dim())?;
    if p1 == p2 {
        return Ok(None);
    }
    let dim = p1.dim();
    let u = (0..dim)
        .map(|i| Gamble::indicator(dim, i))
        .find(|u| u.dot(p1.mass()) > u.dot(p2.mass()))
        .ok_or_else(|| {
            Error::Internal("distinct previsions without a separating indicator".into())
        })?;
    let u1 = &Gamble::constant(dim, p1.expectation(&u)?) - &u;
    let u2 = u.minus_constant(&p2.expectation(&u)?);
    let zero = Gamble::zero(dim);
    let set = OptionSet::new([zero.clone(), u1, u2]);
    let credal = CredalSet::vertices(vec![p1.clone(), p2.clone()])?;
    let maximal = choose_max(&credal, &set)?.chosen;
    let e_admissible = choose_eadm(&credal, &set)?.chosen;
    if !maximal.contains(&zero) || e_admissible.contains(&zero) {
        return Err(Error::Internal(
            "constructed set does not separate maximality from E-admissibility".into(),
        ));
    }
    Ok(Some(SeparatingSet {
        direction: u,
        set,
        maximal,
        e_admissible,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RoundTripViolation {
    /// `C(A) ≠ C_K(A)` for `K = R_C`.
    Choice {
        set: OptionSet,
        direct: OptionSet,
        via_k: OptionSet,
    },
    /// `A ∈ R_C` disagrees with `A ∈ K`.
    Membership {
        set: OptionSet,
        from_choice: bool,
        from_k: bool,
    },
}

/// Checks on every probe that the Archimedean rule of `S` and the choice
/// function of `K_S` coincide, and that `R_C` agrees with `K_S`.
pub fn roundtrip_prop3(
    s: &SetOfLowerPrevisions,
    probes: &[OptionSet],
) -> Result<Vec<RoundTripViolation>> {
    let rule = ChoiceRule::Arch(s.clone());
    let k = SdosOracle::FromSet(s.clone());
    let mut out = Vec::new();
    for a in probes {
        let direct = rule.chosen(a)?;
        let via_k = choice_from_k(&k, a)?.chosen;
        if direct != via_k {
            out.push(RoundTripViolation::Choice {
                set: a.clone(),
                direct,
                via_k,
            });
        }
        let from_choice = k_from_choice(&rule, a)?;
        let from_k = k_member(&k, a)?.member;
        if from_choice != from_k {
            out.push(RoundTripViolation::Membership {
                set: a.clone(),
                from_choice,
                from_k,
            });
        }
    }
    Ok(out)
}

fn sum_gambles<'a>(dim: usize, items: impl Iterator<Item = (&'a Gamble, &'a Rational)>) -> Gamble {
    items.fold(Gamble::zero(dim), |acc, (g, w)| &acc + &g.scale(w))
}

fn pairs_hold(l: &LowerPrevision, a: &OptionSet, u: &Gamble, pairs: &[PairValue]) -> Result<bool> {
    let others: Vec<&Gamble> = a.iter().filter(|w| *w != u).collect();
    if pairs.len() != others.len() {
        return Ok(false);
    }
    for (pair, w) in pairs.iter().zip(others) {
        let d = w - u;
        if &pair.other != w
            || pair.lower.is_positive()
            || l.lower_value(&d)? != pair.lower
            || pair.attained_at.expectation(&d)? != pair.lower
            || !l.credal().contains(&pair.attained_at)?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn dominator_holds(l: &LowerPrevision, a: &OptionSet, u: &Gamble, d: &Dominator) -> Result<bool> {
    Ok(a.contains(&d.by) && d.margin.is_positive() && l.lower_value(&(&d.by - u))? == d.margin)
}

/// Re-checks one verdict from scratch.
pub fn verify_verdict(rule: &ChoiceRule, a: &OptionSet, v: &OptionVerdict) -> Result<bool> {
    let u = &v.option;
    if !a.contains(u) {
        return Ok(false);
    }
    let ok = match (rule, &v.certificate) {
        (
            ChoiceRule::Meu(p),
            ChoiceCertificate::Expectation {
                value,
                best,
                best_value,
            },
        ) => {
            let top = a
                .iter()
                .map(|w| p.expectation(w))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .max();
            a.contains(best)
                && p.expectation(u)? == *value
                && p.expectation(best)? == *best_value
                && top.as_ref() == Some(best_value)
                && v.chosen == (value == best_value)
        }
        (ChoiceRule::EAdm(m), ChoiceCertificate::Supporting { prevision }) => {
            let mut ok = v.chosen && m.contains(prevision)?;
            let pu = prevision.expectation(u)?;
            for w in a {
                ok &= prevision.expectation(w)? <= pu;
            }
            ok
        }
        (ChoiceRule::EAdm(m), ChoiceCertificate::MixtureDominates { weights, margin }) => {
            let total = weights.iter().fold(Rational::zero(), |s, w| s + &w.weight);
            let valid = weights
                .iter()
                .all(|w| a.contains(&w.option) && &w.option != u && !w.weight.is_negative());
            let mix = sum_gambles(u.dim(), weights.iter().map(|w| (&w.option, &w.weight)));
            !v.chosen
                && valid
                && total.is_one()
                && margin.is_positive()
                && LowerPrevision::new(m.clone()).lower_value(&(&mix - u))? == *margin
        }
        (ChoiceRule::Max(m), ChoiceCertificate::Undominated { pairs }) => {
            v.chosen && pairs_hold(&LowerPrevision::new(m.clone()), a, u, pairs)?
        }
        (ChoiceRule::Max(m), ChoiceCertificate::Dominated(d)) => {
            !v.chosen && dominator_holds(&LowerPrevision::new(m.clone()), a, u, d)?
        }
        (ChoiceRule::Arch(s), ChoiceCertificate::ArchChosen { member, pairs }) => {
            match s.members().get(*member) {
                Some(l) => v.chosen && pairs_hold(l, a, u, pairs)?,
                None => false,
            }
        }
        (ChoiceRule::Arch(s), ChoiceCertificate::ArchRejected { dominators }) => {
            let mut ok = !v.chosen && dominators.len() == s.len();
            for (l, d) in s.members().iter().zip(dominators) {
                ok = ok && dominator_holds(l, a, u, d)?;
            }
            ok
        }
        (ChoiceRule::FromK(k), ChoiceCertificate::Ominus { set, membership }) => {
            *set == ominus(a, u)
                && k_member(k, set)?.member == membership.member
                && v.chosen == !membership.member
        }
        _ => false,
    };
    Ok(ok)
}

/// Re-checks every verdict of `result` and that `chosen` lists exactly the
/// accepted options of `A`.
pub fn verify_result(rule: &ChoiceRule, a: &OptionSet, result: &ChoiceResult) -> Result<()> {
    let options: Vec<&Gamble> = result.verdicts.iter().map(|v| &v.option).collect();
    if options != a.iter().collect::<Vec<_>>() {
        return Err(Error::Internal(
            "verdicts do not cover the option set".into(),
        ));
    }
    let accepted: OptionSet = result
        .verdicts
        .iter()
        .filter(|v| v.chosen)
        .map(|v| v.option.clone())
        .collect();
    if accepted != result.chosen {
        return Err(Error::Internal(
            "chosen set disagrees with the verdicts".into(),
        ));
    }
    for v in &result.verdicts {
        if !verify_verdict(rule, a, v)? {
            return Err(Error::Internal(format!(
                "certificate for option {} does not re-verify",
                v.option
            )));
        }
    }
    Ok(())
}
