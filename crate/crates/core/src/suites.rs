//! Seeded property suites that check the characterisation results of the
//! engine on many random instances, each against an independent oracle
//! where one exists. Shared by the command line and the acceptance tests.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::choice::{
    check_binary, choose, choose_eadm, choose_max, choose_meu, maximality_as_archimedean,
    prop5_witness, roundtrip_prop3, verify_result, ChoiceRule,
};
use crate::desirability::{
    coherence_probe, consistent, dominates, k_member, mixing_check, mixing_counterexample,
    natex_member, natex_member_with, NaturalExtension, SdosOracle,
};
use crate::error::{Error, Result};
use crate::gen::Generator;
use crate::lp::{fm_feasible, lp_feasible, FourierMotzkin, LinearProgram};
use crate::options::{Gamble, OptionSet};
use crate::previsions::{
    dual_credal_set, lower_prevision_from_cone, CredalSet, LinearPrevision, LowerPrevision,
    SetOfLowerPrevisions,
};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub summary: &'static str,
    /// Instances checked when no count is given.
    pub default_trials: usize,
    run: fn(u64, usize) -> Result<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    /// Set when nothing was checked, so a pass carries no evidence.
    pub vacuous: bool,
    pub counterexample: Option<String>,
}

type Outcome = std::result::Result<(), String>;

fn fail<T: std::fmt::Debug>(what: &str, detail: T) -> Outcome {
    Err(format!("{what}: {detail:?}"))
}

/// Runs `check` on trials `0..n`, each with its own generator derived from
/// `seed`, and reports the first failing trial in index order.
fn each_trial<F>(seed: u64, n: usize, check: F) -> Result<Outcome>
where
    F: Fn(&mut Generator) -> Result<Outcome> + Sync,
{
    let outcomes = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut g = Generator::new(
                seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
                    .wrapping_add(i as u64),
            );
            check(&mut g).map(|o| o.map_err(|e| format!("trial {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(outcomes.into_iter().find(Outcome::is_err).unwrap_or(Ok(())))
}

pub const SUITES: &[Suite] = &[
    Suite {
        name: "f1",
        summary: "two-state fixture: lower value, E-admissible and maximal sets",
        default_trials: 1,
        run: f1,
    },
    Suite {
        name: "e-subset-m",
        summary: "E-admissible options are maximal",
        default_trials: 1000,
        run: e_subset_m,
    },
    Suite {
        name: "singleton-collapse",
        summary: "one prevision: expected utility, E-admissibility and maximality agree",
        default_trials: 1000,
        run: singleton_collapse,
    },
    Suite {
        name: "prop5",
        summary: "two distinct previsions admit a set where maximality keeps more",
        default_trials: 200,
        run: prop5,
    },
    Suite {
        name: "maximality-as-archimedean",
        summary: "vertex-subset minima reproduce maximality",
        default_trials: 500,
        run: maximality_archimedean,
    },
    Suite {
        name: "coherence",
        summary: "no axiom violations for coherent oracles; natural extension inside every dominating model",
        default_trials: 200,
        run: coherence,
    },
    Suite {
        name: "natex-fm",
        summary: "natural extension agrees with an elimination-only implementation",
        default_trials: 200,
        run: natex_fm,
    },
    Suite {
        name: "mixing",
        summary: "nonlinear lower previsions yield mixing violations, linear ones none",
        default_trials: 100,
        run: mixing,
    },
    Suite {
        name: "duality",
        summary: "cone lower prevision equals the envelope of its dual credal set",
        default_trials: 200,
        run: duality,
    },
    Suite {
        name: "roundtrip",
        summary: "choice and desirable option sets determine each other",
        default_trials: 100,
        run: roundtrip,
    },
    Suite {
        name: "lp-cross",
        summary: "simplex and elimination agree on feasibility with exact witnesses",
        default_trials: 2000,
        run: lp_cross,
    },
    Suite {
        name: "binarity",
        summary: "maximality is binary; E-admissibility is not on the fixture triple",
        default_trials: 200,
        run: binarity,
    },
];

pub fn find(name: &str) -> Result<&'static Suite> {
    SUITES.iter().find(|s| s.name == name).ok_or_else(|| {
        let known: Vec<_> = SUITES.iter().map(|s| s.name).collect();
        Error::Input(format!(
            "unknown suite {name:?} (known: {})",
            known.join(", ")
        ))
    })
}

impl Suite {
    pub fn run(&self, seed: u64, trials: Option<usize>) -> Result<SuiteReport> {
        let trials = trials.unwrap_or(self.default_trials);
        let outcome = (self.run)(seed, trials)?;
        Ok(SuiteReport {
            suite: self.name,
            seed,
            trials,
            passed: outcome.is_ok(),
            vacuous: trials == 0,
            counterexample: outcome.err(),
        })
    }
}

fn two(n: i64, d: i64, m: i64, e: i64) -> LinearPrevision {
    LinearPrevision::new(vec![ratio(n, d), ratio(m, e)]).expect("valid mass")
}

/// The two-state fixture credal set with vertices `(1/4, 3/4)` and
/// `(3/4, 1/4)`.
pub fn fixture_credal() -> CredalSet {
    CredalSet::vertices(vec![two(1, 4, 3, 4), two(3, 4, 1, 4)]).expect("non-empty")
}

/// The fixture options `a = (1, 0)`, `b = (0, 1)`, `c = (2/5, 2/5)`.
pub fn fixture_options() -> [Gamble; 3] {
    [
        Gamble::from_ints(&[1, 0]),
        Gamble::from_ints(&[0, 1]),
        Gamble::from_ratios(&[(2, 5), (2, 5)]),
    ]
}

/// E-admissibility by elimination over vertex weights, bypassing the
/// simplex and the mixture program.
pub fn eadm_by_elimination(vs: &[LinearPrevision], a: &OptionSet) -> Result<OptionSet> {
    let mut out = Vec::new();
    for u in a {
        let k = vs.len();
        let mut lp = LinearProgram::new(k);
        lp.add_eq(vec![Rational::one(); k], Rational::one());
        for j in 0..k {
            lp.nonneg(j);
        }
        for w in a {
            let d = u - w;
            lp.add_ge(
                vs.iter().map(|v| d.dot(v.mass())).collect(),
                Rational::zero(),
            );
        }
        if fm_feasible(&lp)?.is_feasible() {
            out.push(u.clone());
        }
    }
    Ok(OptionSet::new(out))
}

/// Maximality by direct vertex minima.
pub fn max_by_vertices(vs: &[LinearPrevision], a: &OptionSet) -> OptionSet {
    a.iter()
        .filter(|u| {
            a.iter().all(|w| {
                let d = w - *u;
                vs.iter().map(|v| d.dot(v.mass())).min().expect("non-empty") <= Rational::zero()
            })
        })
        .cloned()
        .collect()
}

fn f1(_seed: u64, trials: usize) -> Result<Outcome> {
    if trials == 0 {
        return Ok(Ok(()));
    }
    let m = fixture_credal();
    let vs = m.vertex_list()?;
    let [a, b, c] = fixture_options();
    let abc = OptionSet::new([a.clone(), b.clone(), c.clone()]);
    let u = Gamble::from_ints(&[1, -1]);

    let lower = LowerPrevision::new(m.clone()).lower(&u)?;
    let by_vertices = vs.iter().map(|v| u.dot(v.mass())).min().expect("non-empty");
    if lower.value != ratio(-1, 2) || by_vertices != lower.value {
        return Ok(fail("lower value of (1,-1)", (lower.value, by_vertices)));
    }

    let e_rule = ChoiceRule::EAdm(m.clone());
    let e = choose(&e_rule, &abc)?;
    verify_result(&e_rule, &abc, &e)?;
    let expected_e = OptionSet::new([a, b]);
    if e.chosen != expected_e || eadm_by_elimination(&vs, &abc)? != expected_e {
        return Ok(fail("E-admissible set", e.chosen));
    }

    let m_rule = ChoiceRule::Max(m);
    let mx = choose(&m_rule, &abc)?;
    verify_result(&m_rule, &abc, &mx)?;
    if mx.chosen != abc || max_by_vertices(&vs, &abc) != abc {
        return Ok(fail("maximal set", mx.chosen));
    }
    if !(e.chosen.is_subset(&mx.chosen) && e.chosen != mx.chosen) {
        return Ok(fail(
            "E-admissible set is not a proper subset",
            (e.chosen, mx.chosen),
        ));
    }
    Ok(Ok(()))
}

fn e_subset_m(seed: u64, n: usize) -> Result<Outcome> {
    each_trial(seed, n, |g| {
        let dim = g.range(2, 5);
        let m = g.credal(dim, 6);
        let a = g.option_set(dim, 7);
        let e = choose_eadm(&m, &a)?;
        let mx = choose_max(&m, &a)?;
        verify_result(&ChoiceRule::EAdm(m.clone()), &a, &e)?;
        verify_result(&ChoiceRule::Max(m.clone()), &a, &mx)?;
        if !e.chosen.is_subset(&mx.chosen) {
            return Ok(fail(
                "E-admissible option not maximal",
                (m, a, e.chosen, mx.chosen),
            ));
        }
        if e.chosen.is_empty() {
            return Ok(fail("empty E-admissible set", (m, a)));
        }
        Ok(Ok(()))
    })
}

fn singleton_collapse(seed: u64, n: usize) -> Result<Outcome> {
    each_trial(seed, n, |g| {
        let dim = g.range(1, 5);
        let p = g.prevision(dim);
        let m = CredalSet::singleton(p.clone());
        let a = g.option_set(dim, 7);
        let meu = choose_meu(&p, &a)?.chosen;
        let e = choose_eadm(&m, &a)?.chosen;
        let mx = choose_max(&m, &a)?.chosen;
        if meu != e || meu != mx {
            return Ok(fail("rules differ", (p, a, meu, e, mx)));
        }
        Ok(Ok(()))
    })
}

fn prop5(seed: u64, n: usize) -> Result<Outcome> {
    each_trial(seed, n, |g| {
        let dim = g.range(2, 5);
        let pair = g.distinct_previsions(dim, 2);
        let (p1, p2) = (&pair[0], &pair[1]);
        if prop5_witness(p1, p1)?.is_some() {
            return Ok(fail("witness for equal previsions", p1));
        }
        let Some(w) = prop5_witness(p1, p2)? else {
            return Ok(fail("no witness for distinct previsions", (p1, p2)));
        };
        let credal = CredalSet::vertices(pair.clone())?;
        let vs = credal.vertex_list()?;
        let e = eadm_by_elimination(&vs, &w.set)?;
        let mx = max_by_vertices(&vs, &w.set);
        if !(e.is_subset(&mx) && e != mx) || e != w.e_admissible || mx != w.maximal {
            return Ok(fail("witness does not separate", (p1, p2, w.set)));
        }
        Ok(Ok(()))
    })
}

fn maximality_archimedean(seed: u64, n: usize) -> Result<Outcome> {
    each_trial(seed, n, |g| {
        let dim = g.range(2, 4);
        let m = g.credal(dim, 6);
        let a = g.option_set(dim, 5);
        let star = maximality_as_archimedean(&m)?;
        let arch = choose(&ChoiceRule::Arch(star), &a)?.chosen;
        let mx = choose_max(&m, &a)?.chosen;
        if arch != mx || mx != max_by_vertices(&m.vertex_list()?, &a) {
            return Ok(fail(
                "Archimedean choice differs from maximality",
                (m, a, arch, mx),
            ));
        }
        Ok(Ok(()))
    })
}

fn coherence(seed: u64, n: usize) -> Result<Outcome> {
    each_trial(seed, n, |g| {
        let dim = g.range(2, 3);
        let probes: Vec<OptionSet> = (0..5).map(|_| g.option_set(dim, 3)).collect();

        let l = LowerPrevision::new(g.credal(dim, 3));
        let others = LowerPrevision::new(g.credal(dim, 3));
        let set = SetOfLowerPrevisions::new(vec![l.clone(), others])?;
        let assessment = g.dominated_assessment(&l, 2, 2)?;
        if !consistent(&assessment)?.is_consistent() {
            return Ok(fail("dominated assessment is inconsistent", assessment));
        }
        let oracles = [
            SdosOracle::FromLower(l.clone()),
            SdosOracle::FromSet(set),
            SdosOracle::NatEx(NaturalExtension::new(assessment.clone())),
        ];
        for k in &oracles {
            let found = coherence_probe(k, dim, &probes, 1, g.rng())?;
            if !found.is_empty() {
                return Ok(fail("axiom violation", (k, found)));
            }
        }

        // Ex(𝒜) ⊆ R_L for a dominating L, on a random set and on a superset
        // of an assessed set.
        if !dominates(&l, &assessment)? {
            return Ok(fail(
                "constructed assessment not dominated",
                (l, assessment),
            ));
        }
        let first = assessment.sets()[0].clone();
        for b in [g.option_set(dim, 3), first.union(&g.option_set(dim, 2))] {
            if natex_member(&assessment, &b)?.is_member()
                && !k_member(&SdosOracle::FromLower(l.clone()), &b)?.member
            {
                return Ok(fail(
                    "natural extension escapes a dominating model",
                    (l, assessment, b),
                ));
            }
        }
        Ok(Ok(()))
    })
}

fn natex_fm(seed: u64, n: usize) -> Result<Outcome> {
    // At most three sets of at most four options: 64 selections.
    each_trial(seed, n, |g| {
        let dim = g.range(2, 4);
        let a = g.assessment(dim, 3, 4);
        for _ in 0..2 {
            let b = g.option_set(dim, 3);
            let simplex = natex_member(&a, &b)?.is_member();
            let fm = natex_member_with(&FourierMotzkin::default(), &a, &b, 64)?.is_member();
            if simplex != fm {
                return Ok(fail("natural extension disagrees", (a, b, simplex, fm)));
            }
        }
        Ok(Ok(()))
    })
}

fn mixing(seed: u64, n: usize) -> Result<Outcome> {
    each_trial(seed, n, |g| {
        let dim = g.range(2, 4);
        let l = g.nonlinear_lower(dim, 4);
        let Some(found) = mixing_counterexample(&l)? else {
            return Ok(fail("no counterexample for a nonlinear model", l));
        };
        let check = mixing_check(&SdosOracle::FromLower(l.clone()), &found.a, &found.b)?;
        if !check.violated {
            return Ok(fail("counterexample does not violate mixing", (l, found)));
        }
        let linear = LowerPrevision::linear(g.prevision(dim));
        if let Some(found) = mixing_counterexample(&linear)? {
            return Ok(fail("counterexample for a linear model", (linear, found)));
        }
        Ok(Ok(()))
    })
}

fn duality(seed: u64, n: usize) -> Result<Outcome> {
    each_trial(seed, n, |g| {
        let dim = g.range(2, 4);
        let cone = g.coherent_cone(dim, 3);
        let u = g.gamble(dim);
        let from_cone = lower_prevision_from_cone(&cone, &u)?;
        let envelope = dual_credal_set(dim, &cone)?
            .vertex_list()?
            .iter()
            .map(|p| u.dot(p.mass()))
            .min()
            .expect("a coherent cone has a non-empty dual");
        if from_cone != envelope {
            return Ok(fail(
                "cone value differs from envelope",
                (cone, u, from_cone, envelope),
            ));
        }
        Ok(Ok(()))
    })
}

fn roundtrip(seed: u64, n: usize) -> Result<Outcome> {
    each_trial(seed, n, |g| {
        let dim = g.range(2, 3);
        let members = (0..g.range(1, 3))
            .map(|_| LowerPrevision::new(g.credal(dim, 3)))
            .collect();
        let s = SetOfLowerPrevisions::new(members)?;
        let probes: Vec<OptionSet> = (0..5).map(|_| g.option_set(dim, 4)).collect();
        let found = roundtrip_prop3(&s, &probes)?;
        if !found.is_empty() {
            return Ok(fail("round trip violated", (s, found)));
        }
        Ok(Ok(()))
    })
}

fn lp_cross(seed: u64, n: usize) -> Result<Outcome> {
    each_trial(seed, n, |g| {
        let vars = g.range(1, 6);
        let mut lp = LinearProgram::new(vars);
        for _ in 0..g.range(1, 6) {
            let row: Vec<Rational> = (0..vars).map(|_| g.rational()).collect();
            let rhs = g.rational();
            match g.range(0, 4) {
                0 => lp.add_eq(row, rhs),
                1 => lp.add_gt(row, rhs),
                2 => lp.add_le(row, rhs),
                _ => lp.add_ge(row, rhs),
            };
        }
        for j in 0..vars {
            if g.coin() {
                lp.nonneg(j);
            }
        }
        let simplex = lp_feasible(&lp)?;
        let fm = fm_feasible(&lp)?;
        if simplex.is_feasible() != fm.is_feasible() {
            return Ok(fail("feasibility differs", lp));
        }
        for w in [&simplex.witness, &fm.witness].into_iter().flatten() {
            if !lp.satisfies(w) {
                return Ok(fail("witness violates the system", (lp, w)));
            }
        }
        Ok(Ok(()))
    })
}

fn binarity(seed: u64, n: usize) -> Result<Outcome> {
    let m = fixture_credal();
    let outcome = each_trial(seed, n, |g| {
        let mut a = g.option_set(2, 5);
        while a.len() < 2 {
            a = a.with(g.gamble(2));
        }
        let b = check_binary(&ChoiceRule::Max(m.clone()), &a)?;
        if !b.binary {
            return Ok(fail("maximality not binary", (a, b)));
        }
        Ok(Ok(()))
    })?;
    if outcome.is_err() {
        return Ok(outcome);
    }
    let [a, b, c] = fixture_options();
    let triple = OptionSet::new([a, b, c.clone()]);
    let e = check_binary(&ChoiceRule::EAdm(m), &triple)?;
    if e.binary || e.separators != OptionSet::singleton(c) {
        return Ok(fail("E-admissibility binary on the fixture triple", e));
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_small_runs() {
        for s in SUITES {
            let r = s.run(3, Some(s.default_trials.min(5))).unwrap();
            assert!(r.passed, "{}: {:?}", s.name, r.counterexample);
        }
    }

    #[test]
    fn zero_trials_are_flagged() {
        let r = find("e-subset-m").unwrap().run(1, Some(0)).unwrap();
        assert!(r.passed && r.vacuous);
        assert!(find("nope").is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let s = find("lp-cross").unwrap();
        assert_eq!(s.run(9, Some(50)).unwrap(), s.run(9, Some(50)).unwrap());
    }
}
