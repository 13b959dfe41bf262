//! Seeded random instances. Gamble values have numerators in `[-8, 8]` and
//! denominators in `{1, 2, 4, 5}`; the same seed always gives the same
//! instance.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::desirability::Assessment;
use crate::error::{Error, Result};
use crate::options::{ConeGenerators, Gamble, OptionSet};
use crate::previsions::{CredalSet, LinearPrevision, LowerPrevision};
use crate::rational::{ratio, Rational};

const DENOMINATORS: [i64; 4] = [1, 2, 4, 5];

pub struct Generator {
    rng: ChaCha8Rng,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-8..=8);
        let d = *DENOMINATORS.choose(&mut self.rng).expect("non-empty");
        ratio(n, d)
    }

    /// A rational in `[1/5, 2]`.
    pub fn positive(&mut self) -> Rational {
        loop {
            let r = self.rational().abs();
            if r.is_positive() && r <= Rational::from_integer(2.into()) {
                return r;
            }
        }
    }

    pub fn gamble(&mut self, dim: usize) -> Gamble {
        Gamble::new((0..dim).map(|_| self.rational()).collect())
    }

    /// A non-empty option set of at most `max_len` options.
    pub fn option_set(&mut self, dim: usize, max_len: usize) -> OptionSet {
        let n = self.range(1, max_len.max(1));
        OptionSet::new((0..n).map(|_| self.gamble(dim)))
    }

    /// Mass proportional to integer weights in `0..=8`, not all zero.
    pub fn prevision(&mut self, dim: usize) -> LinearPrevision {
        let weights: Vec<i64> = loop {
            let w: Vec<i64> = (0..dim).map(|_| self.rng.gen_range(0..=8)).collect();
            if w.iter().any(|&x| x > 0) {
                break w;
            }
        };
        let total: i64 = weights.iter().sum();
        LinearPrevision::new(weights.iter().map(|&x| ratio(x, total)).collect())
            .expect("normalised weights")
    }

    /// A list of exactly `count` distinct previsions.
    pub fn distinct_previsions(&mut self, dim: usize, count: usize) -> Vec<LinearPrevision> {
        let mut out: Vec<LinearPrevision> = Vec::with_capacity(count);
        while out.len() < count {
            let p = self.prevision(dim);
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// Vertex-form credal set with between 1 and `max_vertices` points.
    pub fn credal(&mut self, dim: usize, max_vertices: usize) -> CredalSet {
        let k = self.range(1, max_vertices.max(1));
        CredalSet::vertices((0..k).map(|_| self.prevision(dim)).collect()).expect("non-empty")
    }

    /// A lower prevision with at least two distinct vertices, hence
    /// nonlinear.
    pub fn nonlinear_lower(&mut self, dim: usize, max_vertices: usize) -> LowerPrevision {
        let k = self.range(2, max_vertices.max(2));
        let vs = self.distinct_previsions(dim, k);
        LowerPrevision::new(CredalSet::vertices(vs).expect("non-empty"))
    }

    pub fn assessment(&mut self, dim: usize, max_sets: usize, max_len: usize) -> Assessment {
        let n = self.range(0, max_sets);
        Assessment::new((0..n).map(|_| self.option_set(dim, max_len)))
    }

    /// Lifts `u` so that `L(u) = δ` for a random `δ > 0`.
    pub fn lift_above(&mut self, l: &LowerPrevision, u: &Gamble) -> Result<Gamble> {
        let delta = self.positive();
        Ok(u.minus_constant(&(l.lower_value(u)? - delta)))
    }

    /// An assessment every set of which holds an option with positive lower
    /// prevision under `L`, so `L` dominates it and it is consistent.
    pub fn dominated_assessment(
        &mut self,
        l: &LowerPrevision,
        max_sets: usize,
        max_len: usize,
    ) -> Result<Assessment> {
        let dim = l.dim();
        let n = self.range(1, max_sets.max(1));
        let mut sets = Vec::with_capacity(n);
        for _ in 0..n {
            let mut s = self.option_set(dim, max_len);
            if !s
                .iter()
                .any(|u| l.lower_value(u).is_ok_and(|v| v.is_positive()))
            {
                let w = self.gamble(dim);
                s = s.with(self.lift_above(l, &w)?);
            }
            sets.push(s);
        }
        Ok(Assessment::new(sets))
    }

    /// Up to `max_gens` generators, each with positive expectation under a
    /// random prevision, so the cone they span is coherent.
    pub fn coherent_cone(&mut self, dim: usize, max_gens: usize) -> ConeGenerators {
        let p = LowerPrevision::linear(self.prevision(dim));
        let n = self.range(0, max_gens);
        let mut gens = Vec::with_capacity(n);
        for _ in 0..n {
            let g = self.gamble(dim);
            gens.push(self.lift_above(&p, &g).expect("dimensions match"));
        }
        ConeGenerators::new(gens)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Small,
    Medium,
    Adversarial,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Small => "small",
            Profile::Medium => "medium",
            Profile::Adversarial => "adversarial",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Profile::Small),
            "medium" => Ok(Profile::Medium),
            "adversarial" => Ok(Profile::Adversarial),
            other => Err(Error::Input(format!(
                "unknown profile {other:?} (expected small, medium or adversarial)"
            ))),
        }
    }
}

/// A random decision problem: a credal set given by its vertices and a list
/// of option sets over `states` outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub states: usize,
    pub vertices: Vec<LinearPrevision>,
    pub option_sets: Vec<OptionSet>,
}

/// * `small`: 2 to 3 states, at most 4 vertices and 5 options per set.
/// * `medium`: 2 to 5 states, at most 6 vertices and 7 options per set.
/// * `adversarial`: like `medium`, but the uniform prevision is a vertex and
///   every option set contains a pair tied under one of the vertices, so
///   E-admissibility and maximality hinge on exact boundary values.
pub fn instance(seed: u64, profile: Profile) -> Instance {
    let mut g = Generator::new(seed);
    let (states, max_vertices, max_options) = match profile {
        Profile::Small => (g.range(2, 3), 4, 5),
        Profile::Medium => (g.range(2, 5), 6, 7),
        Profile::Adversarial => (g.range(2, 5), 5, 6),
    };
    let sets = g.range(1, 3);
    let mut vertices = g
        .credal(states, max_vertices)
        .vertex_list()
        .expect("vertex form");
    if profile == Profile::Adversarial {
        let uniform = LinearPrevision::uniform(states);
        if !vertices.contains(&uniform) {
            vertices.push(uniform);
            vertices.sort();
        }
    }
    let option_sets = (0..sets)
        .map(|_| {
            let s = g.option_set(states, max_options);
            if profile != Profile::Adversarial {
                return s;
            }
            let u = s.iter().next().expect("non-empty").clone();
            let v = vertices.choose(g.rng()).expect("non-empty").clone();
            let d = g.gamble(states);
            let shift = d.dot(v.mass());
            let tied = &u + &d.minus_constant(&shift);
            debug_assert_eq!(tied.dot(v.mass()), u.dot(v.mass()));
            s.with(tied)
        })
        .collect();
    Instance {
        states,
        vertices,
        option_sets,
    }
}
