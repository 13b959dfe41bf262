use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::lp::FourierMotzkin;
use crate::previsions::{dual_credal_set, lower_prevision_from_cone, CredalSet};

fn g(v: &[i64]) -> Gamble {
    Gamble::from_ints(v)
}

fn set(v: &[&[i64]]) -> OptionSet {
    v.iter().map(|x| g(x)).collect()
}

fn p(v: &[(i64, i64)]) -> LinearPrevision {
    LinearPrevision::from_ratios(v).unwrap()
}

fn c1() -> LowerPrevision {
    pointwise_min(vec![p(&[(1, 4), (3, 4)]), p(&[(3, 4), (1, 4)])]).unwrap()
}

fn uv() -> Assessment {
    Assessment::new([set(&[&[1, -1], &[-1, 1]])])
}

#[test]
fn cone_coherence() {
    assert!(cone_coherent(&ConeGenerators::new([g(&[1, -1])])).unwrap());
    assert!(!cone_coherent(&ConeGenerators::new([g(&[1, -1]), g(&[-1, 1])])).unwrap());
    assert!(!cone_coherent(&ConeGenerators::new([g(&[-1, -1])])).unwrap());
    assert!(cone_coherent(&ConeGenerators::default()).unwrap());
}

#[test]
fn lower_membership() {
    let k = SdosOracle::FromLower(c1());
    let m = k_member(&k, &set(&[&[1, 0]])).unwrap();
    assert!(m.member);
    let KCertificate::Lower { best: Some(best) } = m.certificate else {
        panic!("expected a lower certificate")
    };
    assert_eq!(best.value, ratio(1, 4));
    assert!(!k_member(&k, &set(&[&[1, -1], &[-1, 1]])).unwrap().member);
    assert!(!k_member(&k, &set(&[&[0, 0]])).unwrap().member);
    assert!(!k_member(&k, &OptionSet::empty()).unwrap().member);
}

#[test]
fn other_oracles_reject_zero() {
    let oracles = [
        SdosOracle::FromCone(ConeGenerators::new([g(&[1, -1])])),
        SdosOracle::FromSet(SetOfLowerPrevisions::new(vec![c1()]).unwrap()),
        SdosOracle::NatEx(NaturalExtension::new(uv())),
    ];
    for k in &oracles {
        assert!(!k_member(k, &set(&[&[0, 0]])).unwrap().member);
        assert!(k.coherent_by_construction().unwrap());
    }
}

#[test]
fn natural_extension_examples() {
    let yes = natex_member(&uv(), &set(&[&[2, -1], &[-1, 2]])).unwrap();
    let NatExCertificate::Member { selections } = &yes else {
        panic!("expected membership")
    };
    assert_eq!(selections.len(), 2);
    assert!(selections
        .iter()
        .all(|s| matches!(s, SelectionOutcome::Reaches { .. })));

    let no = natex_member(&uv(), &set(&[&[-2, -2]])).unwrap();
    assert!(!no.is_member());

    assert!(natex_member(&Assessment::default(), &set(&[&[2, 2]]))
        .unwrap()
        .is_member());
    assert!(!natex_member(&Assessment::default(), &set(&[&[0, 1]]))
        .unwrap()
        .is_member());
}

#[test]
fn consistency_examples() {
    let c = consistent(&uv()).unwrap();
    assert!(c.is_consistent());
    let forced = Assessment::new([set(&[&[1, -1]]), set(&[&[-1, 1]])]);
    let c = consistent(&forced).unwrap();
    let ConsistencyCertificate::Inconsistent { refutations } = c else {
        panic!("expected inconsistency")
    };
    assert_eq!(refutations.len(), 1);
    assert!(!consistent(&Assessment::new([set(&[&[-1, -1]])]))
        .unwrap()
        .is_consistent());
    // An inconsistent assessment extends to every option set, {0} included.
    assert!(natex_member(&forced, &set(&[&[0, 0]])).unwrap().is_member());
}

#[test]
fn selection_cap_is_enforced() {
    let big = Assessment::new((0..3).map(|i| set(&[&[1, i], &[2, i], &[3, i]])));
    assert!(matches!(
        natex_member_with(&Simplex, &big, &OptionSet::empty(), 26),
        Err(Error::Capacity {
            needed: 27,
            limit: 26,
            ..
        })
    ));
    assert!(natex_member_with(&Simplex, &big, &OptionSet::empty(), 27).is_ok());
}

#[test]
fn adhoc_k1_violation_is_reported() {
    let k = AdHoc(|a: &OptionSet| a.contains(&g(&[1, 1])) || *a == set(&[&[0, 0]]));
    let probes = vec![set(&[&[1, 1]]), set(&[&[1, 1], &[0, 2]])];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let v = coherence_probe(&k, 2, &probes, 2, &mut rng).unwrap();
    assert!(v.iter().any(|v| v.axiom == Axiom::K1));
}

#[test]
fn probe_requires_probes() {
    let k = SdosOracle::FromLower(c1());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(matches!(
        coherence_probe(&k, 2, &[], 1, &mut rng),
        Err(Error::Input(_))
    ));
}

fn mixing_pair() -> (OptionSet, OptionSet) {
    let a = OptionSet::new([g(&[1, -1]), Gamble::from_ratios(&[(-1, 2), (3, 2)])]);
    let b = a.with(Gamble::from_ratios(&[(1, 2), (1, 2)]));
    (a, b)
}

#[test]
fn mixing_examples() {
    let (a, b) = mixing_pair();
    let k = SdosOracle::FromLower(c1());
    assert!(mixing_check(&k, &a, &b).unwrap().violated);
    let fair = SdosOracle::FromLower(LowerPrevision::linear(p(&[(1, 2), (1, 2)])));
    let check = mixing_check(&fair, &a, &b).unwrap();
    assert!(!check.violated && check.a_in_k);
    let member = set(&[&[1, 0]]);
    assert!(!mixing_check(&k, &member, &member).unwrap().violated);
}

#[test]
fn mixing_counterexamples() {
    let found = mixing_counterexample_from(&c1(), &g(&[1, -1]))
        .unwrap()
        .unwrap();
    assert_eq!(found.eps, int(1));
    let (a, b) = mixing_pair();
    assert_eq!(found.a, a);
    assert_eq!(found.b, b);
    assert_eq!(mixing_counterexample(&c1()).unwrap(), Some(found));

    let fair = LowerPrevision::linear(p(&[(1, 2), (1, 2)]));
    assert_eq!(mixing_counterexample(&fair).unwrap(), None);

    let thirds = pointwise_min(vec![p(&[(1, 3), (2, 3)]), p(&[(2, 3), (1, 3)])]).unwrap();
    let found = mixing_counterexample_from(&thirds, &g(&[1, -1]))
        .unwrap()
        .unwrap();
    assert_eq!(found.eps, ratio(2, 3));
    let u1 = g(&[1, -1]);
    let u2 = Gamble::from_ratios(&[(-2, 3), (4, 3)]);
    assert_eq!(found.a, OptionSet::new([u1.clone(), u2.clone()]));
    assert_eq!(thirds.lower_value(&u1).unwrap(), ratio(-1, 3));
    assert_eq!(thirds.lower_value(&u2).unwrap(), int(0));
}

#[test]
fn domination() {
    assert!(!dominates(&c1(), &uv()).unwrap());
    assert!(dominates(&LowerPrevision::linear(p(&[(3, 4), (1, 4)])), &uv()).unwrap());
    assert!(dominates(&c1(), &Assessment::default()).unwrap());
}

#[test]
fn separation() {
    let b = set(&[&[-2, -2]]);
    let Separation::Separated { lower, .. } = separating_lower_prevision(&uv(), &b).unwrap() else {
        panic!("expected a separator")
    };
    assert!(dominates(&lower, &uv()).unwrap());
    assert!(lower.lower_value(&g(&[-2, -2])).unwrap() <= int(0));

    let zero = set(&[&[0, 0]]);
    let Separation::Separated { lower, .. } =
        separating_lower_prevision(&Assessment::default(), &zero).unwrap()
    else {
        panic!("expected a separator")
    };
    assert!(lower.lower_value(&g(&[0, 0])).unwrap().is_zero());

    let u = g(&[1, -1]);
    let LinearSeparation::Separated { prevision, .. } = separating_linear(&uv(), &u).unwrap()
    else {
        panic!("expected a linear separator")
    };
    assert!(prevision.expectation(&u).unwrap() <= int(0));
    assert!(dominates(&LowerPrevision::linear(prevision), &uv()).unwrap());

    assert_eq!(
        separating_lower_prevision(&uv(), &set(&[&[2, -1], &[-1, 2]])).unwrap(),
        Separation::Member
    );
    let forced = Assessment::new([set(&[&[1, -1]]), set(&[&[-1, 1]])]);
    assert!(matches!(
        separating_lower_prevision(&forced, &b),
        Err(Error::Domain(_))
    ));
}

#[test]
fn natural_extension_need_not_be_archimedean() {
    // (1,−1,1) is outside the cone of (1,−1,0), but any p with p1 > p2
    // gives it positive expectation.
    let a = Assessment::new([set(&[&[1, -1, 0]])]);
    let b = set(&[&[1, -1, 1]]);
    assert!(!natex_member(&a, &b).unwrap().is_member());
    assert!(matches!(
        separating_lower_prevision(&a, &b).unwrap(),
        Separation::NotSeparable { .. }
    ));
}

#[test]
fn shift_witnesses() {
    let s = SetOfLowerPrevisions::new(vec![c1()]).unwrap();
    assert_eq!(
        sa_shift_witness(&s, &set(&[&[1, 0]])).unwrap(),
        Some(ratio(1, 8))
    );
    assert_eq!(sa_shift_witness(&s, &set(&[&[1, -1]])).unwrap(), None);
    let fair =
        SetOfLowerPrevisions::new(vec![LowerPrevision::linear(p(&[(1, 2), (1, 2)]))]).unwrap();
    assert_eq!(
        sa_shift_witness(&fair, &set(&[&[2, 2]])).unwrap(),
        Some(int(1))
    );
}

fn q() -> impl Strategy<Value = Rational> {
    (-4i64..=4, prop::sample::select(vec![1i64, 2])).prop_map(|(n, d)| ratio(n, d))
}

fn gamble(dim: usize) -> impl Strategy<Value = Gamble> {
    prop::collection::vec(q(), dim).prop_map(Gamble::new)
}

fn option_set(dim: usize, max: usize) -> impl Strategy<Value = OptionSet> {
    prop::collection::vec(gamble(dim), 1..=max).prop_map(OptionSet::new)
}

fn assessment(dim: usize) -> impl Strategy<Value = Assessment> {
    prop::collection::vec(option_set(dim, 2), 0..=3).prop_map(Assessment::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn natex_agrees_with_elimination(
        (a, b) in (2usize..=3).prop_flat_map(|n| (assessment(n), option_set(n, 3)))
    ) {
        let simplex = natex_member(&a, &b).unwrap();
        let fm = natex_member_with(&FourierMotzkin::default(), &a, &b, 64).unwrap();
        prop_assert_eq!(simplex.is_member(), fm.is_member());
    }

    #[test]
    fn natex_is_monotone_and_ignores_zero(
        (a, b, extra) in (2usize..=3).prop_flat_map(|n| (assessment(n), option_set(n, 2), gamble(n)))
    ) {
        let base = natex_member(&a, &b).unwrap().is_member();
        if base {
            prop_assert!(natex_member(&a, &b.with(extra.clone())).unwrap().is_member());
        }
        let zero = Gamble::zero(extra.dim());
        prop_assert_eq!(natex_member(&a, &b.with(zero.clone())).unwrap().is_member(), base);
        if consistent(&a).unwrap().is_consistent() {
            prop_assert!(!natex_member(&a, &OptionSet::singleton(zero)).unwrap().is_member());
        }
    }

    #[test]
    fn natex_lies_inside_every_dominating_lower_prevision(
        (a, b, masses) in (2usize..=3).prop_flat_map(|n| (
            assessment(n),
            option_set(n, 3),
            prop::collection::vec(prop::collection::vec(0i64..=4, n), 1..=3),
        ))
    ) {
        let ps: Vec<LinearPrevision> = masses.into_iter().map(|w| {
            let w = if w.iter().all(|&x| x == 0) { vec![1; w.len()] } else { w };
            let t: i64 = w.iter().sum();
            LinearPrevision::new(w.iter().map(|&x| ratio(x, t)).collect()).unwrap()
        }).collect();
        let l = pointwise_min(ps).unwrap();
        if dominates(&l, &a).unwrap() && natex_member(&a, &b).unwrap().is_member() {
            prop_assert!(k_member(&SdosOracle::FromLower(l), &b).unwrap().member);
        }
    }

    #[test]
    fn cone_and_dual_agree(
        (gens, u) in (2usize..=4).prop_flat_map(|n| (prop::collection::vec(gamble(n), 0..=3), gamble(n)))
    ) {
        let cone = ConeGenerators::new(gens);
        if cone_coherent(&cone).unwrap() {
            let dual = LowerPrevision::new(dual_credal_set(u.dim(), &cone).unwrap());
            let from_cone = lower_prevision_from_cone(&cone, &u).unwrap();
            prop_assert_eq!(&from_cone, &dual.lower_value(&u).unwrap());
            let k = SdosOracle::FromLower(dual);
            prop_assert_eq!(
                from_cone.is_positive(),
                k_member(&k, &OptionSet::singleton(u.clone())).unwrap().member
            );
        }
    }

    #[test]
    fn separators_satisfy_their_postconditions(
        (a, b) in (2usize..=3).prop_flat_map(|n| (assessment(n), option_set(n, 2)))
    ) {
        if consistent(&a).unwrap().is_consistent() {
            let member = natex_member(&a, &b).unwrap().is_member();
            match separating_lower_prevision(&a, &b).unwrap() {
                Separation::Member => prop_assert!(member),
                Separation::NotSeparable { .. } => prop_assert!(!member),
                Separation::Separated { lower, .. } => {
                    prop_assert!(!member);
                    prop_assert!(dominates(&lower, &a).unwrap());
                    prop_assert!(!k_member(&SdosOracle::FromLower(lower), &b).unwrap().member);
                }
            }
        }
    }

    #[test]
    fn vertex_lower_previsions_have_coherent_k(
        (masses, probes, seed) in (2usize..=3).prop_flat_map(|n| (
            prop::collection::vec(prop::collection::vec(0i64..=4, n), 1..=3),
            prop::collection::vec(option_set(n, 3), 1..=6),
            any::<u64>(),
        ))
    ) {
        let ps: Vec<LinearPrevision> = masses.into_iter().map(|w| {
            let w = if w.iter().all(|&x| x == 0) { vec![1; w.len()] } else { w };
            let t: i64 = w.iter().sum();
            LinearPrevision::new(w.iter().map(|&x| ratio(x, t)).collect()).unwrap()
        }).collect();
        let l = pointwise_min(ps).unwrap();
        let dim = l.dim();
        let k = SdosOracle::FromLower(l.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(coherence_probe(&k, dim, &probes, 2, &mut rng).unwrap().is_empty());
        let linear = matches!(l.credal(), CredalSet::Vertices(v) if v.len() == 1);
        let found = mixing_counterexample(&l).unwrap();
        prop_assert_eq!(found.is_none(), linear);
    }
}
