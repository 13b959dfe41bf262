//! Gambles, option sets and positive-cone membership.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lp::{FeasibilitySolver, LinearProgram, Simplex};
use crate::rational::{self, int, Rational};

/// Ordered, distinct state labels. Fixes the coordinate order of gambles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Input("state space must not be empty".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Input(format!("duplicate state label {l:?}")));
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A real-valued reward per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gamble(Vec<Rational>);

impl Gamble {
    pub fn new(values: Vec<Rational>) -> Self {
        Self(values)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self(values.iter().map(|&v| int(v)).collect())
    }

    /// Builds a gamble from `(numerator, denominator)` pairs.
    pub fn from_ratios(values: &[(i64, i64)]) -> Self {
        Self(values.iter().map(|&(n, d)| rational::ratio(n, d)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self(vec![c; dim])
    }

    /// The indicator of state `i`.
    pub fn indicator(dim: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.0
    }

    pub fn inf(&self) -> Rational {
        self.0.iter().min().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn sup(&self) -> Rational {
        self.0.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self(self.0.iter().map(|v| v * k).collect())
    }

    /// `self − c`, with `c` subtracted from every coordinate.
    pub fn minus_constant(&self, c: &Rational) -> Self {
        Self(self.0.iter().map(|v| v - c).collect())
    }

    pub fn plus_constant(&self, c: &Rational) -> Self {
        Self(self.0.iter().map(|v| v + c).collect())
    }

    pub fn dot(&self, weights: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(weights)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        Error::check_dim(dim, self.dim())
    }
}

impl Add for &Gamble {
    type Output = Gamble;
    fn add(self, rhs: &Gamble) -> Gamble {
        Gamble(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Gamble {
    type Output = Gamble;
    fn sub(self, rhs: &Gamble) -> Gamble {
        Gamble(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Gamble {
    type Output = Gamble;
    fn neg(self) -> Gamble {
        Gamble(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        rational::Tuple(&self.0).fmt(f)
    }
}

impl Serialize for Gamble {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serde_vec::serialize(&self.0, s)
    }
}

/// A finite set of gambles, kept sorted lexicographically and free of
/// duplicates so that equal sets compare and serialise identically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct OptionSet(Vec<Gamble>);

impl OptionSet {
    pub fn new(items: impl IntoIterator<Item = Gamble>) -> Self {
        let mut v: Vec<Gamble> = items.into_iter().collect();
        v.sort();
        v.dedup();
        Self(v)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(u: Gamble) -> Self {
        Self(vec![u])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Gamble> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Gamble] {
        &self.0
    }

    pub fn contains(&self, u: &Gamble) -> bool {
        self.0.binary_search(u).is_ok()
    }

    pub fn with(&self, u: Gamble) -> Self {
        Self::new(self.0.iter().cloned().chain(std::iter::once(u)))
    }

    pub fn without(&self, u: &Gamble) -> Self {
        Self(self.0.iter().filter(|v| *v != u).cloned().collect())
    }

    pub fn union(&self, other: &OptionSet) -> Self {
        Self::new(self.0.iter().chain(&other.0).cloned())
    }

    pub fn is_subset(&self, other: &OptionSet) -> bool {
        self.0.iter().all(|u| other.contains(u))
    }

    /// Drops the zero gamble, if present.
    pub fn without_zero(&self) -> Self {
        Self(self.0.iter().filter(|u| !u.is_zero()).cloned().collect())
    }

    /// Checks that every element has `dim` coordinates.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        self.0.iter().try_for_each(|u| u.check_dim(dim))
    }
}

impl FromIterator<Gamble> for OptionSet {
    fn from_iter<I: IntoIterator<Item = Gamble>>(iter: I) -> Self {
        Self::new(iter)
    }
}

impl<'a> IntoIterator for &'a OptionSet {
    type Item = &'a Gamble;
    type IntoIter = std::slice::Iter<'a, Gamble>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for OptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, u) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            u.fmt(f)?;
        }
        f.write_str("}")
    }
}

/// Generators `G` of the cone `posi(G ∪ {g : inf g > 0})`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ConeGenerators(Vec<Gamble>);

impl ConeGenerators {
    pub fn new(generators: impl IntoIterator<Item = Gamble>) -> Self {
        let mut v: Vec<Gamble> = Vec::new();
        for g in generators {
            if !v.contains(&g) {
                v.push(g);
            }
        }
        Self(v)
    }

    pub fn generators(&self) -> &[Gamble] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        self.0.iter().try_for_each(|g| g.check_dim(dim))
    }
}

pub fn inf_gamble(u: &Gamble) -> Rational {
    u.inf()
}

/// `A − ε`: `ε` subtracted from every coordinate of every option.
pub fn shift_set(a: &OptionSet, eps: &Rational) -> OptionSet {
    a.iter().map(|u| u.minus_constant(eps)).collect()
}

/// `A − u = {v − u : v ∈ A}`.
pub fn translate_set(a: &OptionSet, u: &Gamble) -> OptionSet {
    a.iter().map(|v| v - u).collect()
}

/// `A ⊖ u = {v − u : v ∈ A \ {u}}`.
pub fn ominus(a: &OptionSet, u: &Gamble) -> OptionSet {
    a.iter().filter(|v| *v != u).map(|v| v - u).collect()
}

/// Why a gamble lies in a positive cone, or that it does not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum PosiCertificate {
    /// `b − Σ λ_i g_i` has strictly positive infimum.
    Dominating {
        #[serde(with = "rational::serde_vec")]
        lambda: Vec<Rational>,
        remainder: Gamble,
    },
    /// `b = Σ λ_i g_i` with `λ ≥ 0` and `Σ λ_i > 0`.
    Combination {
        #[serde(with = "rational::serde_vec")]
        lambda: Vec<Rational>,
    },
    /// Neither system is feasible.
    Outside,
}

impl PosiCertificate {
    pub fn is_member(&self) -> bool {
        !matches!(self, PosiCertificate::Outside)
    }

    /// Re-checks an accepting certificate against `generators` and `b`.
    /// `Outside` carries no evidence and is reported as unverifiable.
    pub fn verify(&self, generators: &[Gamble], b: &Gamble) -> bool {
        let combine = |lambda: &[Rational]| -> Option<Gamble> {
            if lambda.len() != generators.len() || lambda.iter().any(Signed::is_negative) {
                return None;
            }
            let mut acc = Gamble::zero(b.dim());
            for (l, g) in lambda.iter().zip(generators) {
                acc = &acc + &g.scale(l);
            }
            Some(acc)
        };
        match self {
            PosiCertificate::Dominating { lambda, remainder } => combine(lambda)
                .is_some_and(|s| &(b - &s) == remainder && remainder.inf().is_positive()),
            PosiCertificate::Combination { lambda } => {
                let total = lambda.iter().fold(Rational::zero(), |a, l| a + l);
                total.is_positive() && combine(lambda).is_some_and(|s| &s == b)
            }
            PosiCertificate::Outside => false,
        }
    }
}

/// `∃λ ≥ 0: b − Σ λ_i g_i > 0` coordinatewise.
fn dominating_program(generators: &[Gamble], b: &Gamble) -> LinearProgram {
    let k = generators.len();
    let mut lp = LinearProgram::new(k);
    for j in 0..k {
        lp.nonneg(j);
    }
    for (x, bx) in b.values().iter().enumerate() {
        let row = generators.iter().map(|g| -&g.values()[x]).collect();
        lp.add_gt(row, -bx);
    }
    lp
}

/// `∃λ ≥ 0, Σλ > 0: b = Σ λ_i g_i`.
fn combination_program(generators: &[Gamble], b: &Gamble) -> LinearProgram {
    let k = generators.len();
    let mut lp = LinearProgram::new(k);
    for j in 0..k {
        lp.nonneg(j);
    }
    for (x, bx) in b.values().iter().enumerate() {
        let row = generators.iter().map(|g| g.values()[x].clone()).collect();
        lp.add_eq(row, bx.clone());
    }
    lp.add_gt(vec![Rational::one(); k], Rational::zero());
    lp
}

fn check_generators(generators: &[Gamble], b: &Gamble) -> Result<()> {
    generators.iter().try_for_each(|g| g.check_dim(b.dim()))
}

/// Decides `b ∈ posi(G ∪ {g : inf g > 0})`.
pub fn posi_member(g: &ConeGenerators, b: &Gamble) -> Result<PosiCertificate> {
    posi_member_with(&Simplex, g.generators(), b)
}

/// [`posi_member`] with an explicit feasibility solver.
pub fn posi_member_with(
    solver: &dyn FeasibilitySolver,
    generators: &[Gamble],
    b: &Gamble,
) -> Result<PosiCertificate> {
    check_generators(generators, b)?;
    if b.inf().is_positive() {
        return Ok(PosiCertificate::Dominating {
            lambda: vec![Rational::zero(); generators.len()],
            remainder: b.clone(),
        });
    }
    if generators.is_empty() {
        return Ok(PosiCertificate::Outside);
    }
    let out = solver.feasible(&dominating_program(generators, b))?;
    if let Some(lambda) = out.witness {
        let mut remainder = b.clone();
        for (l, g) in lambda.iter().zip(generators) {
            remainder = &remainder - &g.scale(l);
        }
        return Ok(PosiCertificate::Dominating { lambda, remainder });
    }
    posi_plain_member_with(solver, generators, b)
}

/// Decides `b ∈ posi(A)` for plain positive combinations of `A`, without
/// the positive gambles.
pub fn posi_plain_member(generators: &[Gamble], b: &Gamble) -> Result<PosiCertificate> {
    posi_plain_member_with(&Simplex, generators, b)
}

pub fn posi_plain_member_with(
    solver: &dyn FeasibilitySolver,
    generators: &[Gamble],
    b: &Gamble,
) -> Result<PosiCertificate> {
    check_generators(generators, b)?;
    if generators.is_empty() {
        return Ok(PosiCertificate::Outside);
    }
    let out = solver.feasible(&combination_program(generators, b))?;
    Ok(match out.witness {
        Some(lambda) => PosiCertificate::Combination { lambda },
        None => PosiCertificate::Outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::FourierMotzkin;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn g(v: &[i64]) -> Gamble {
        Gamble::from_ints(v)
    }

    #[test]
    fn infimum() {
        assert_eq!(inf_gamble(&g(&[1, -1])), int(-1));
        assert_eq!(
            inf_gamble(&Gamble::from_ratios(&[(2, 5), (2, 5)])),
            ratio(2, 5)
        );
        assert_eq!(inf_gamble(&g(&[0, 0])), int(0));
    }

    #[test]
    fn set_arithmetic() {
        let a = OptionSet::singleton(g(&[1, 0]));
        assert_eq!(
            shift_set(&a, &ratio(1, 8)),
            OptionSet::singleton(Gamble::from_ratios(&[(7, 8), (-1, 8)]))
        );
        assert!(shift_set(&OptionSet::empty(), &int(3)).is_empty());
        let uv = OptionSet::new([g(&[1, -1]), g(&[-1, 1])]);
        assert_eq!(
            shift_set(&uv, &int(1)),
            OptionSet::new([g(&[0, -2]), g(&[-2, 0])])
        );

        let ab = OptionSet::new([g(&[1, 0]), g(&[0, 1])]);
        assert_eq!(
            translate_set(&ab, &g(&[1, 0])),
            OptionSet::new([g(&[0, 0]), g(&[-1, 1])])
        );
        assert_eq!(
            translate_set(&OptionSet::singleton(g(&[3, 4])), &g(&[3, 4])),
            OptionSet::singleton(g(&[0, 0]))
        );
        assert!(translate_set(&OptionSet::empty(), &g(&[1, 1])).is_empty());

        assert_eq!(ominus(&ab, &g(&[1, 0])), OptionSet::singleton(g(&[-1, 1])));
        assert!(ominus(&OptionSet::singleton(g(&[2, 1])), &g(&[2, 1])).is_empty());
        let c = Gamble::from_ratios(&[(2, 5), (2, 5)]);
        let abc = ab.with(c.clone());
        assert_eq!(
            ominus(&abc, &c),
            OptionSet::new([
                Gamble::from_ratios(&[(3, 5), (-2, 5)]),
                Gamble::from_ratios(&[(-2, 5), (3, 5)]),
            ])
        );
    }

    #[test]
    fn option_sets_are_canonical() {
        let a = OptionSet::new([g(&[0, 1]), g(&[1, 0]), g(&[0, 1])]);
        let b = OptionSet::new([g(&[1, 0]), g(&[0, 1])]);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert_eq!(a.as_slice()[0], g(&[0, 1]));
    }

    #[test]
    fn posi_cases() {
        let gens = ConeGenerators::new([g(&[1, -1])]);
        let b = g(&[2, -1]);
        let cert = posi_member(&gens, &b).unwrap();
        assert!(matches!(cert, PosiCertificate::Dominating { .. }));
        assert!(cert.verify(gens.generators(), &b));
        if let PosiCertificate::Dominating { lambda, .. } = &cert {
            assert!(lambda[0] > int(1) && lambda[0] < int(2));
        }

        let b = g(&[2, -2]);
        let cert = posi_member(&gens, &b).unwrap();
        assert_eq!(
            cert,
            PosiCertificate::Combination {
                lambda: vec![int(2)]
            }
        );
        assert!(cert.verify(gens.generators(), &b));

        assert_eq!(
            posi_member(&gens, &g(&[-2, -2])).unwrap(),
            PosiCertificate::Outside
        );
    }

    #[test]
    fn fractional_multiples_of_a_generator_are_members() {
        let gens = ConeGenerators::new([g(&[2, -2])]);
        let cert = posi_member(&gens, &g(&[1, -1])).unwrap();
        assert_eq!(
            cert,
            PosiCertificate::Combination {
                lambda: vec![ratio(1, 2)]
            }
        );
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let gens = ConeGenerators::new([g(&[1, -1, 0])]);
        assert!(matches!(
            posi_member(&gens, &g(&[1, 1])),
            Err(Error::Dimension { .. })
        ));
    }

    fn gamble(dim: usize) -> impl Strategy<Value = Gamble> {
        prop::collection::vec((-4i64..=4, 1i64..=3), dim)
            .prop_map(|v| Gamble::new(v.into_iter().map(|(n, d)| ratio(n, d)).collect()))
    }

    fn option_set(dim: usize) -> impl Strategy<Value = OptionSet> {
        prop::collection::vec(gamble(dim), 0..5).prop_map(OptionSet::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn shifting_by_zero_is_identity(a in option_set(3), u in gamble(3)) {
            prop_assert_eq!(shift_set(&a, &int(0)), a.clone());
            prop_assert_eq!(translate_set(&a, &Gamble::zero(3)), a.clone());
            let eps = u.values()[0].clone();
            prop_assert_eq!(shift_set(&shift_set(&a, &eps), &-eps), a);
        }

        #[test]
        fn posi_is_monotone_and_contains_its_generators(
            gens in prop::collection::vec(gamble(3), 0..4),
            extra in gamble(3),
            b in gamble(3),
        ) {
            let small = ConeGenerators::new(gens.clone());
            let big = ConeGenerators::new(gens.iter().cloned().chain([extra]));
            let before = posi_member(&small, &b).unwrap();
            let after = posi_member(&big, &b).unwrap();
            prop_assert!(!before.is_member() || after.is_member());
            for (c, gs) in [(&before, &small), (&after, &big)] {
                if c.is_member() {
                    prop_assert!(c.verify(gs.generators(), &b));
                }
            }
            for gi in big.generators() {
                prop_assert!(posi_member(&big, gi).unwrap().is_member());
            }
            if b.inf().is_positive() {
                prop_assert!(before.is_member());
            }
            let fm = posi_member_with(&FourierMotzkin::default(), big.generators(), &b).unwrap();
            prop_assert_eq!(fm.is_member(), after.is_member());
        }
    }
}
