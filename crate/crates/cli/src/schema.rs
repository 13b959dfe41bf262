//! The `ipchoice/1` problem file and its conversion into engine types.
//!
//! Rationals are integers or `"a/b"` strings; floats are rejected. Every
//! gamble must have one value per declared state.

use ipchoice_core::choice::ChoiceRule;
use ipchoice_core::desirability::{Assessment, NaturalExtension, SdosOracle};
use ipchoice_core::previsions::{
    CredalSet, HalfSpace, LinearPrevision, LowerPrevision, SetOfLowerPrevisions,
};
use ipchoice_core::rational::Literal;
use ipchoice_core::{ConeGenerators, Gamble, OptionSet, Rational, StateSpace};
use serde::Deserialize;

use crate::error::CliError;

pub const SCHEMA: &str = "ipchoice/1";

type Vector = Vec<Literal>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: String,
    /// Provenance of generated files; informational only.
    #[serde(default)]
    pub generator: Option<GeneratorInfo>,
    pub states: Vec<String>,
    /// Rule used by `choose` when the file has no `choose` queries.
    #[serde(default)]
    pub model: Option<RuleSpec>,
    #[serde(default)]
    pub options: Vec<OptionSetSpec>,
    #[serde(default)]
    pub queries: Vec<QuerySpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorInfo {
    pub seed: u64,
    pub profile: String,
}

/// An option set, either a bare list of gambles or a named one.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OptionSetSpec {
    Plain(Vec<Vector>),
    Named { name: String, options: Vec<Vector> },
}

impl OptionSetSpec {
    pub fn name(&self) -> Option<&str> {
        match self {
            OptionSetSpec::Plain(_) => None,
            OptionSetSpec::Named { name, .. } => Some(name),
        }
    }

    pub fn gambles(&self) -> &[Vector] {
        match self {
            OptionSetSpec::Plain(g) | OptionSetSpec::Named { options: g, .. } => g,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "rule", content = "model", rename_all = "kebab-case")]
pub enum RuleSpec {
    Meu(Vector),
    EAdmissibility(CredalSpec),
    Maximality(CredalSpec),
    /// One lower prevision per listed credal set.
    Archimedean(Vec<CredalSpec>),
    FromK(KSpec),
}

impl RuleSpec {
    pub fn name(&self) -> &'static str {
        match self {
            RuleSpec::Meu(_) => "meu",
            RuleSpec::EAdmissibility(_) => "e-admissibility",
            RuleSpec::Maximality(_) => "maximality",
            RuleSpec::Archimedean(_) => "archimedean",
            RuleSpec::FromK(_) => "from-k",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CredalSpec {
    Vertices(Vec<Vector>),
    /// Rows `coeffs · p ≥ rhs` cutting the probability simplex.
    HalfSpaces(Vec<HalfSpaceSpec>),
    Vacuous,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceSpec {
    pub coeffs: Vector,
    pub rhs: Literal,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KSpec {
    Cone(Vec<Vector>),
    Lower(CredalSpec),
    Set(Vec<CredalSpec>),
    Natex(Vec<Vec<Vector>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "query", rename_all = "kebab-case")]
pub enum QuerySpec {
    Choose {
        rule: Option<RuleSpec>,
        options: Option<usize>,
    },
    Lower {
        model: Option<CredalSpec>,
        gamble: Vector,
    },
    Coherence {
        k: KSpec,
        probes: Option<Vec<usize>>,
        coeff_trials: Option<usize>,
    },
    TranslationInvariance {
        rule: Option<RuleSpec>,
        probes: Option<Vec<usize>>,
    },
    Binary {
        rule: Option<RuleSpec>,
        options: usize,
    },
    Mixing {
        k: KSpec,
        a: Vec<Vector>,
        b: Vec<Vector>,
    },
    MixingCounterexample {
        model: CredalSpec,
    },
    Consistency {
        assessment: Vec<Vec<Vector>>,
    },
    Natex {
        assessment: Vec<Vec<Vector>>,
        set: Vec<Vector>,
    },
    Separate {
        assessment: Vec<Vec<Vector>>,
        set: Vec<Vector>,
    },
    ESubsetM {
        model: Option<CredalSpec>,
        options: Option<usize>,
    },
    Prop5 {
        p1: Vector,
        p2: Vector,
    },
    KFromChoice {
        rule: Option<RuleSpec>,
        set: Vec<Vector>,
    },
    Roundtrip {
        set: Vec<CredalSpec>,
        probes: Option<Vec<usize>>,
    },
    Suite {
        suite: String,
        trials: Option<usize>,
    },
}

impl QuerySpec {
    pub fn kind(&self) -> &'static str {
        match self {
            QuerySpec::Choose { .. } => "choose",
            QuerySpec::Lower { .. } => "lower",
            QuerySpec::Coherence { .. } => "coherence",
            QuerySpec::TranslationInvariance { .. } => "translation-invariance",
            QuerySpec::Binary { .. } => "binary",
            QuerySpec::Mixing { .. } => "mixing",
            QuerySpec::MixingCounterexample { .. } => "mixing-counterexample",
            QuerySpec::Consistency { .. } => "consistency",
            QuerySpec::Natex { .. } => "natex",
            QuerySpec::Separate { .. } => "separate",
            QuerySpec::ESubsetM { .. } => "e-subset-m",
            QuerySpec::Prop5 { .. } => "prop5",
            QuerySpec::KFromChoice { .. } => "k-from-choice",
            QuerySpec::Roundtrip { .. } => "roundtrip",
            QuerySpec::Suite { .. } => "suite",
        }
    }
}

/// A validated problem: the parsed file plus the state space, its option
/// sets in input order and the selection cap for natural extensions.
pub struct Problem {
    pub file: ProblemFile,
    pub states: StateSpace,
    /// Each option set as given, duplicates and order kept.
    pub option_lists: Vec<Vec<Gamble>>,
    pub cap: usize,
}

pub fn parse(text: &str, cap: usize) -> Result<Problem, CliError> {
    let file: ProblemFile =
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    if file.schema != SCHEMA {
        return Err(CliError::Schema(format!(
            "unsupported schema {:?} (expected {SCHEMA:?})",
            file.schema
        )));
    }
    if let Some(g) = &file.generator {
        log::debug!(
            "problem generated from seed {} with profile {}",
            g.seed,
            g.profile
        );
    }
    let states = StateSpace::new(file.states.iter().cloned()).map_err(CliError::schema)?;
    let mut problem = Problem {
        states,
        option_lists: Vec::new(),
        cap,
        file,
    };
    problem.option_lists = problem
        .file
        .options
        .iter()
        .enumerate()
        .map(|(i, s)| problem.gamble_list(s.gambles(), &format!("options[{i}]")))
        .collect::<Result<_, _>>()?;
    if let Some(rule) = &problem.file.model {
        problem.rule(rule, "model")?;
    }
    Ok(problem)
}

fn rational(l: &Literal, at: &str) -> Result<Rational, CliError> {
    l.clone()
        .into_rational()
        .map_err(|e| CliError::Schema(format!("{at}: {e}")))
}

impl Problem {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn vector(&self, v: &[Literal], at: &str) -> Result<Vec<Rational>, CliError> {
        if v.len() != self.dim() {
            return Err(CliError::Schema(format!(
                "{at}: expected {} values (one per state), found {}",
                self.dim(),
                v.len()
            )));
        }
        v.iter()
            .enumerate()
            .map(|(i, l)| rational(l, &format!("{at}[{i}]")))
            .collect()
    }

    pub fn gamble(&self, v: &[Literal], at: &str) -> Result<Gamble, CliError> {
        Ok(Gamble::new(self.vector(v, at)?))
    }

    pub fn gamble_list(&self, vs: &[Vector], at: &str) -> Result<Vec<Gamble>, CliError> {
        vs.iter()
            .enumerate()
            .map(|(i, v)| self.gamble(v, &format!("{at}[{i}]")))
            .collect()
    }

    pub fn set(&self, vs: &[Vector], at: &str) -> Result<OptionSet, CliError> {
        Ok(OptionSet::new(self.gamble_list(vs, at)?))
    }

    pub fn prevision(&self, v: &[Literal], at: &str) -> Result<LinearPrevision, CliError> {
        LinearPrevision::new(self.vector(v, at)?)
            .map_err(|e| CliError::Schema(format!("{at}: {e}")))
    }

    pub fn credal(&self, c: &CredalSpec, at: &str) -> Result<CredalSet, CliError> {
        let out = match c {
            CredalSpec::Vertices(vs) => CredalSet::vertices(
                vs.iter()
                    .enumerate()
                    .map(|(i, v)| self.prevision(v, &format!("{at}.vertices[{i}]")))
                    .collect::<Result<_, _>>()?,
            ),
            CredalSpec::HalfSpaces(rows) => CredalSet::half_spaces(
                self.dim(),
                rows.iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let here = format!("{at}.half_spaces[{i}]");
                        Ok(HalfSpace {
                            coeffs: self.gamble(&r.coeffs, &format!("{here}.coeffs"))?,
                            rhs: rational(&r.rhs, &format!("{here}.rhs"))?,
                        })
                    })
                    .collect::<Result<_, CliError>>()?,
            ),
            CredalSpec::Vacuous => Ok(CredalSet::vacuous(self.dim())),
        };
        out.map_err(|e| CliError::Schema(format!("{at}: {e}")))
    }

    pub fn lower_set(&self, cs: &[CredalSpec], at: &str) -> Result<SetOfLowerPrevisions, CliError> {
        let members = cs
            .iter()
            .enumerate()
            .map(|(i, c)| Ok(LowerPrevision::new(self.credal(c, &format!("{at}[{i}]"))?)))
            .collect::<Result<_, CliError>>()?;
        SetOfLowerPrevisions::new(members).map_err(|e| CliError::Schema(format!("{at}: {e}")))
    }

    pub fn assessment(&self, a: &[Vec<Vector>], at: &str) -> Result<Assessment, CliError> {
        Ok(Assessment::new(
            a.iter()
                .enumerate()
                .map(|(i, s)| self.set(s, &format!("{at}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?,
        ))
    }

    pub fn oracle(&self, k: &KSpec, at: &str) -> Result<SdosOracle, CliError> {
        Ok(match k {
            KSpec::Cone(g) => SdosOracle::FromCone(ConeGenerators::new(
                self.gamble_list(g, &format!("{at}.cone"))?,
            )),
            KSpec::Lower(c) => {
                SdosOracle::FromLower(LowerPrevision::new(self.credal(c, &format!("{at}.lower"))?))
            }
            KSpec::Set(cs) => SdosOracle::FromSet(self.lower_set(cs, &format!("{at}.set"))?),
            KSpec::Natex(a) => SdosOracle::NatEx(
                NaturalExtension::new(self.assessment(a, &format!("{at}.natex"))?)
                    .with_cap(self.cap),
            ),
        })
    }

    pub fn rule(&self, r: &RuleSpec, at: &str) -> Result<ChoiceRule, CliError> {
        let at = format!("{at}.model");
        Ok(match r {
            RuleSpec::Meu(p) => ChoiceRule::Meu(self.prevision(p, &at)?),
            RuleSpec::EAdmissibility(c) => ChoiceRule::EAdm(self.credal(c, &at)?),
            RuleSpec::Maximality(c) => ChoiceRule::Max(self.credal(c, &at)?),
            RuleSpec::Archimedean(cs) => ChoiceRule::Arch(self.lower_set(cs, &at)?),
            RuleSpec::FromK(k) => ChoiceRule::FromK(self.oracle(k, &at)?),
        })
    }

    /// The explicit rule, or the file's top-level model.
    pub fn rule_or_default(
        &self,
        r: Option<&RuleSpec>,
        at: &str,
    ) -> Result<(ChoiceRule, &'static str), CliError> {
        match (r, &self.file.model) {
            (Some(r), _) => Ok((self.rule(r, at)?, r.name())),
            (None, Some(m)) => Ok((self.rule(m, "model")?, m.name())),
            (None, None) => Err(CliError::Schema(format!(
                "{at}: no rule given and the file has no top-level model"
            ))),
        }
    }

    /// The explicit credal set, or the one behind the top-level model.
    pub fn credal_or_default(
        &self,
        c: Option<&CredalSpec>,
        at: &str,
    ) -> Result<CredalSet, CliError> {
        match (c, &self.file.model) {
            (Some(c), _) => self.credal(c, at),
            (None, Some(RuleSpec::EAdmissibility(c) | RuleSpec::Maximality(c))) => {
                self.credal(c, "model.model")
            }
            (None, Some(RuleSpec::Meu(p))) => {
                Ok(CredalSet::singleton(self.prevision(p, "model.model")?))
            }
            _ => Err(CliError::Schema(format!(
                "{at}: no credal set given and the top-level model has none"
            ))),
        }
    }

    pub fn option_set(&self, index: usize, at: &str) -> Result<&[Gamble], CliError> {
        self.option_lists
            .get(index)
            .map(Vec::as_slice)
            .ok_or_else(|| {
                CliError::Schema(format!(
                    "{at}: option set {index} does not exist ({} given)",
                    self.option_lists.len()
                ))
            })
    }

    /// The listed option sets as canonical sets, or all of them.
    pub fn probes(&self, indices: Option<&[usize]>, at: &str) -> Result<Vec<OptionSet>, CliError> {
        match indices {
            Some(ix) => ix
                .iter()
                .map(|&i| Ok(OptionSet::new(self.option_set(i, at)?.iter().cloned())))
                .collect(),
            None => Ok(self
                .option_lists
                .iter()
                .map(|l| OptionSet::new(l.iter().cloned()))
                .collect()),
        }
    }
}
