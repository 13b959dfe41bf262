use std::time::Instant;

use ipchoice_core::choice::{
    check_binary, check_translation_invariance, choose, k_from_choice, prop5_witness,
    roundtrip_prop3, verify_e_subset_m, verify_result, ChoiceResult, ChoiceRule,
};
use ipchoice_core::desirability::{
    coherence_probe, consistent, mixing_check, mixing_counterexample, natex_member_with,
    separating_lower_prevision, ConsistencyCertificate, NatExCertificate,
};
use ipchoice_core::gen::{self, Generator, Profile};
use ipchoice_core::lp::Simplex;
use ipchoice_core::previsions::{CredalSet, LowerPrevision};
use ipchoice_core::rational;
use ipchoice_core::suites::{self, SuiteReport, SUITES};
use ipchoice_core::{Gamble, OptionSet};
use log::info;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::schema::{self, Problem, QuerySpec, RuleSpec, SCHEMA};

/// Everything a report depends on besides the engine itself.
#[derive(Debug, Clone, Default)]
pub struct Params {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub cap: usize,
}

pub struct Input {
    pub text: String,
    pub digest: String,
}

impl Input {
    pub fn new(text: String) -> Self {
        let digest = hex::encode(Sha256::digest(text.as_bytes()));
        Self { text, digest }
    }
}

pub struct Outcome {
    pub report: Value,
    /// Set when a verification suite found a counterexample.
    pub failed: bool,
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("engine types serialise")
}

fn envelope(command: &str, input: Option<&Input>, params: &Params, results: Vec<Value>) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "engine": concat!("ipchoice ", env!("CARGO_PKG_VERSION")),
        "input_sha256": input.map(|i| i.digest.clone()),
        "parameters": {
            "seed": params.seed,
            "trials": params.trials,
            "cap_selections": params.cap,
        },
        "results": results,
    })
}

/// Positions in `list` of the options that belong to `set`.
fn indices(list: &[Gamble], set: &OptionSet) -> Vec<usize> {
    list.iter()
        .enumerate()
        .filter(|(_, g)| set.contains(g))
        .map(|(i, _)| i)
        .collect()
}

fn choice_json(list: &[Gamble], result: &ChoiceResult) -> Value {
    let certificates: Vec<Value> = list
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let v = result
                .verdicts
                .iter()
                .find(|v| &v.option == g)
                .expect("every option has a verdict");
            json!({"option": j, "chosen": v.chosen, "certificate": to_value(&v.certificate)})
        })
        .collect();
    json!({"chosen": indices(list, &result.chosen), "certificates": certificates})
}

fn run_choice(
    problem: &Problem,
    rule: &ChoiceRule,
    rule_name: &str,
    index: usize,
    at: &str,
) -> Result<Value, CliError> {
    let list = problem.option_set(index, at)?;
    let set = OptionSet::new(list.iter().cloned());
    let result = choose(rule, &set)?;
    verify_result(rule, &set, &result)?;
    let mut out = Map::new();
    out.insert("kind".into(), json!("choose"));
    out.insert("rule".into(), json!(rule_name));
    out.insert("options".into(), json!(index));
    if let Some(name) = problem.file.options[index].name() {
        out.insert("name".into(), json!(name));
    }
    if let Value::Object(body) = choice_json(list, &result) {
        out.extend(body);
    }
    Ok(Value::Object(out))
}

fn timed<T>(what: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    info!("{what} took {:.3}s", start.elapsed().as_secs_f64());
    out
}

/// Runs `f` on every selected query in parallel; results keep query order.
fn per_query<F>(
    problem: &Problem,
    keep: fn(&QuerySpec) -> bool,
    f: F,
) -> Result<Vec<Value>, CliError>
where
    F: Fn(usize, &QuerySpec) -> Result<Vec<Value>, CliError> + Sync,
{
    let selected: Vec<(usize, &QuerySpec)> = problem
        .file
        .queries
        .iter()
        .enumerate()
        .filter(|(_, q)| keep(q))
        .collect();
    let nested = selected
        .par_iter()
        .map(|&(i, q)| {
            timed(&format!("query {i} ({})", q.kind()), || f(i, q)).map(|vs| {
                vs.into_iter()
                    .map(|mut v| {
                        if let Value::Object(m) = &mut v {
                            let mut ordered = Map::new();
                            ordered.insert("query".into(), json!(i));
                            ordered.append(m);
                            v = Value::Object(ordered);
                        }
                        v
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(nested.into_iter().flatten().collect())
}

pub fn cmd_choose(input: &Input, params: &Params) -> Result<Outcome, CliError> {
    let problem = schema::parse(&input.text, params.cap)?;
    let has_queries = problem
        .file
        .queries
        .iter()
        .any(|q| matches!(q, QuerySpec::Choose { .. }));
    let results = if has_queries {
        per_query(
            &problem,
            |q| matches!(q, QuerySpec::Choose { .. }),
            |i, q| {
                let QuerySpec::Choose { rule, options } = q else {
                    unreachable!("filtered to choose queries")
                };
                let at = format!("queries[{i}]");
                let (rule, name) = problem.rule_or_default(rule.as_ref(), &at)?;
                let targets: Vec<usize> = match options {
                    Some(o) => vec![*o],
                    None => (0..problem.option_lists.len()).collect(),
                };
                targets
                    .into_iter()
                    .map(|o| run_choice(&problem, &rule, name, o, &at))
                    .collect()
            },
        )?
    } else if problem.option_lists.is_empty() {
        Vec::new()
    } else {
        let (rule, name) = problem.rule_or_default(None, "model")?;
        (0..problem.option_lists.len())
            .into_par_iter()
            .map(|o| run_choice(&problem, &rule, name, o, "options"))
            .collect::<Result<_, _>>()?
    };
    Ok(Outcome {
        report: envelope("choose", Some(input), params, results),
        failed: false,
    })
}

fn verdict_word(ok: bool, yes: &str, no: &str) -> Value {
    json!(if ok { yes } else { no })
}

fn check_query(
    problem: &Problem,
    params: &Params,
    i: usize,
    q: &QuerySpec,
) -> Result<Vec<Value>, CliError> {
    let at = format!("queries[{i}]");
    let kind = q.kind();
    let body = match q {
        QuerySpec::Lower { model, gamble } => {
            let l = LowerPrevision::new(problem.credal_or_default(model.as_ref(), &at)?);
            let u = problem.gamble(gamble, &format!("{at}.gamble"))?;
            let v = l.lower(&u)?;
            json!({"value": rational::format(&v.value), "attained_at": to_value(&v.attained_at)})
        }
        QuerySpec::Coherence {
            k,
            probes,
            coeff_trials,
        } => {
            let oracle = problem.oracle(k, &format!("{at}.k"))?;
            let probes = problem.probes(probes.as_deref(), &at)?;
            let mut g = Generator::new(params.seed.unwrap_or(0).wrapping_add(i as u64));
            let found = coherence_probe(
                &oracle,
                problem.dim(),
                &probes,
                coeff_trials.unwrap_or(2),
                g.rng(),
            )?;
            json!({
                "verdict": verdict_word(found.is_empty(), "no violations", "violations"),
                "violations": to_value(&found),
            })
        }
        QuerySpec::TranslationInvariance { rule, probes } => {
            let (rule, name) = problem.rule_or_default(rule.as_ref(), &at)?;
            let probes = problem.probes(probes.as_deref(), &at)?;
            let found = check_translation_invariance(&rule, &probes)?;
            json!({
                "rule": name,
                "verdict": verdict_word(found.is_empty(), "invariant", "not invariant"),
                "violations": to_value(&found),
            })
        }
        QuerySpec::Binary { rule, options } => {
            let (rule, name) = problem.rule_or_default(rule.as_ref(), &at)?;
            let list = problem.option_set(*options, &at)?;
            let b = check_binary(&rule, &OptionSet::new(list.iter().cloned()))?;
            json!({
                "rule": name,
                "options": options,
                "verdict": verdict_word(b.binary, "binary", "not binary"),
                "chosen": indices(list, &b.chosen),
                "pairwise": indices(list, &b.pairwise),
                "separators": indices(list, &b.separators),
            })
        }
        QuerySpec::Mixing { k, a, b } => {
            let oracle = problem.oracle(k, &format!("{at}.k"))?;
            let a = problem.set(a, &format!("{at}.a"))?;
            let b = problem.set(b, &format!("{at}.b"))?;
            let m = mixing_check(&oracle, &a, &b)?;
            json!({
                "verdict": verdict_word(m.violated, "violated", "not violated"),
                "evidence": to_value(&m),
            })
        }
        QuerySpec::MixingCounterexample { model } => {
            let l = LowerPrevision::new(problem.credal(model, &format!("{at}.model"))?);
            let found = mixing_counterexample(&l)?;
            json!({
                "verdict": verdict_word(found.is_some(), "counterexample", "linear"),
                "counterexample": to_value(&found),
            })
        }
        QuerySpec::Consistency { assessment } => {
            let a = problem.assessment(assessment, &format!("{at}.assessment"))?;
            a.selection_count(problem.cap)?;
            let c = consistent(&a)?;
            let word = match c {
                ConsistencyCertificate::Consistent { .. } => "consistent",
                ConsistencyCertificate::Inconsistent { .. } => "inconsistent",
            };
            json!({"verdict": word, "certificate": to_value(&c)})
        }
        QuerySpec::Natex { assessment, set } => {
            let a = problem.assessment(assessment, &format!("{at}.assessment"))?;
            let b = problem.set(set, &format!("{at}.set"))?;
            let c = natex_member_with(&Simplex, &a, &b, problem.cap)?;
            let word = match c {
                NatExCertificate::Member { .. } => "member",
                NatExCertificate::NotMember { .. } => "not member",
            };
            json!({"verdict": word, "certificate": to_value(&c)})
        }
        QuerySpec::Separate { assessment, set } => {
            let a = problem.assessment(assessment, &format!("{at}.assessment"))?;
            a.selection_count(problem.cap)?;
            let b = problem.set(set, &format!("{at}.set"))?;
            json!({"separation": to_value(&separating_lower_prevision(&a, &b)?)})
        }
        QuerySpec::ESubsetM { model, options } => {
            let m = problem.credal_or_default(model.as_ref(), &at)?;
            let targets: Vec<usize> = match options {
                Some(o) => vec![*o],
                None => (0..problem.option_lists.len()).collect(),
            };
            let mut holds = true;
            let mut per_set = Vec::new();
            for o in targets {
                let set = OptionSet::new(problem.option_set(o, &at)?.iter().cloned());
                let ok = verify_e_subset_m(&m, &set)?;
                holds &= ok;
                per_set.push(json!({"options": o, "holds": ok}));
            }
            json!({"verdict": verdict_word(holds, "holds", "violated"), "sets": per_set})
        }
        QuerySpec::Prop5 { p1, p2 } => {
            let p1 = problem.prevision(p1, &format!("{at}.p1"))?;
            let p2 = problem.prevision(p2, &format!("{at}.p2"))?;
            let w = prop5_witness(&p1, &p2)?;
            json!({
                "verdict": verdict_word(w.is_some(), "separated", "equal previsions"),
                "witness": to_value(&w),
            })
        }
        QuerySpec::KFromChoice { rule, set } => {
            let (rule, name) = problem.rule_or_default(rule.as_ref(), &at)?;
            let set = problem.set(set, &format!("{at}.set"))?;
            json!({"rule": name, "member": k_from_choice(&rule, &set)?})
        }
        QuerySpec::Roundtrip { set, probes } => {
            let s = problem.lower_set(set, &format!("{at}.set"))?;
            let probes = problem.probes(probes.as_deref(), &at)?;
            let found = roundtrip_prop3(&s, &probes)?;
            json!({
                "verdict": verdict_word(found.is_empty(), "round trip holds", "violations"),
                "violations": to_value(&found),
            })
        }
        QuerySpec::Choose { .. } | QuerySpec::Suite { .. } => unreachable!("not a check query"),
    };
    let mut out = Map::new();
    out.insert("kind".into(), json!(kind));
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Ok(vec![Value::Object(out)])
}

fn is_check(q: &QuerySpec) -> bool {
    !matches!(q, QuerySpec::Choose { .. } | QuerySpec::Suite { .. })
}

pub fn cmd_check(input: &Input, params: &Params) -> Result<Outcome, CliError> {
    let problem = schema::parse(&input.text, params.cap)?;
    let results = per_query(&problem, is_check, |i, q| {
        check_query(&problem, params, i, q)
    })?;
    Ok(Outcome {
        report: envelope("check", Some(input), params, results),
        failed: false,
    })
}

/// Vertices of the top-level model's credal set, if it has one.
fn model_vertices(problem: &Problem) -> Result<Option<CredalSet>, CliError> {
    match &problem.file.model {
        Some(RuleSpec::EAdmissibility(c) | RuleSpec::Maximality(c)) => {
            Ok(Some(problem.credal(c, "model.model")?))
        }
        _ => Ok(None),
    }
}

/// Evidence on the file's own model for suites that have an instance form.
fn instance_evidence(problem: &Problem, suite: &str) -> Result<Option<Value>, CliError> {
    let Some(m) = model_vertices(problem)? else {
        return Ok(None);
    };
    Ok(match suite {
        "prop5" => {
            let vs = m.vertex_list()?;
            match vs.as_slice() {
                [p1, p2, ..] => Some(json!({"witness": to_value(&prop5_witness(p1, p2)?)})),
                _ => None,
            }
        }
        "e-subset-m" => {
            let mut holds = Vec::new();
            for list in &problem.option_lists {
                holds.push(verify_e_subset_m(
                    &m,
                    &OptionSet::new(list.iter().cloned()),
                )?);
            }
            Some(json!({"holds": holds}))
        }
        _ => None,
    })
}

fn suite_json(r: &SuiteReport, evidence: Option<Value>) -> (Value, bool) {
    let mut v = json!({"kind": "suite"});
    if let (Value::Object(m), Value::Object(body)) = (&mut v, to_value(r)) {
        m.extend(body);
    }
    let mut failed = !r.passed;
    if let (Value::Object(m), Some(e)) = (&mut v, evidence) {
        let instance_ok = match (e.get("witness"), e.get("holds")) {
            (Some(w), _) => !w.is_null(),
            (_, Some(Value::Array(h))) => h.iter().all(|x| x == &json!(true)),
            _ => true,
        };
        failed |= !instance_ok;
        m.insert("instance".into(), e);
    }
    (v, failed)
}

pub fn cmd_verify(input: Option<&Input>, params: &Params) -> Result<Outcome, CliError> {
    let seed = params.seed.unwrap_or(0);
    let problem = input
        .map(|i| schema::parse(&i.text, params.cap))
        .transpose()?;
    let mut wanted: Vec<(String, Option<usize>)> = problem
        .iter()
        .flat_map(|p| p.file.queries.iter())
        .filter_map(|q| match q {
            QuerySpec::Suite { suite, trials } => Some((suite.clone(), *trials)),
            _ => None,
        })
        .collect();
    if wanted.is_empty() {
        wanted = SUITES.iter().map(|s| (s.name.to_string(), None)).collect();
    }
    let mut results = Vec::new();
    let mut failed = false;
    for (name, trials) in wanted {
        let suite = suites::find(&name).map_err(CliError::schema)?;
        let report = timed(&format!("suite {name}"), || {
            suite.run(seed, params.trials.or(trials))
        })?;
        if report.vacuous {
            log::warn!("suite {name} ran no trials; its pass is vacuous");
        }
        let evidence = match &problem {
            Some(p) => instance_evidence(p, &name)?,
            None => None,
        };
        let (v, f) = suite_json(&report, evidence);
        failed |= f;
        results.push(v);
    }
    let params = Params {
        seed: Some(seed),
        ..params.clone()
    };
    Ok(Outcome {
        report: envelope("verify", input, &params, results),
        failed,
    })
}

/// A random problem file in the `ipchoice/1` schema.
pub fn cmd_gen(seed: u64, profile: Profile) -> Value {
    let inst = gen::instance(seed, profile);
    let credal = json!({"vertices": to_value(&inst.vertices)});
    let mut queries = vec![
        json!({"query": "choose", "rule": {"rule": "e-admissibility", "model": credal}}),
        json!({"query": "choose", "rule": {"rule": "maximality", "model": credal}}),
        json!({"query": "e-subset-m"}),
    ];
    for (i, s) in inst.option_sets.iter().enumerate() {
        if s.len() >= 2 {
            queries.push(json!({"query": "binary", "options": i}));
        }
    }
    json!({
        "schema": SCHEMA,
        "generator": {"seed": seed, "profile": profile.name()},
        "states": (1..=inst.states).map(|i| format!("s{i}")).collect::<Vec<_>>(),
        "model": {"rule": "maximality", "model": credal},
        "options": to_value(&inst.option_sets),
        "queries": queries,
    })
}

/// The first JSON pointer at which `a` and `b` differ.
fn first_difference(a: &Value, b: &Value, path: &str) -> Option<String> {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let keys: Vec<&String> = x
                .keys()
                .chain(y.keys().filter(|k| !x.contains_key(*k)))
                .collect();
            keys.into_iter().find_map(|k| match (x.get(k), y.get(k)) {
                (Some(p), Some(q)) => first_difference(p, q, &format!("{path}/{k}")),
                _ => Some(format!("{path}/{k}")),
            })
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => x
            .iter()
            .zip(y)
            .enumerate()
            .find_map(|(i, (p, q))| first_difference(p, q, &format!("{path}/{i}"))),
        _ if a == b => None,
        _ => Some(if path.is_empty() {
            "/".into()
        } else {
            path.into()
        }),
    }
}

/// Recomputes a report from its input and parameters, re-verifying every
/// choice certificate on the way, and requires the result to be identical.
pub fn cmd_recheck(report_text: &str, input: Option<&Input>) -> Result<Outcome, CliError> {
    let report: Value =
        serde_json::from_str(report_text).map_err(|e| CliError::Schema(format!("report: {e}")))?;
    if report.get("schema") != Some(&json!(SCHEMA)) {
        return Err(CliError::Schema(format!(
            "report: schema is not {SCHEMA:?}"
        )));
    }
    let command = report
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Schema("report: missing command".into()))?
        .to_string();
    let p = report.get("parameters").cloned().unwrap_or(Value::Null);
    let params = Params {
        seed: p.get("seed").and_then(Value::as_u64),
        trials: p.get("trials").and_then(Value::as_u64).map(|t| t as usize),
        cap: p
            .get("cap_selections")
            .and_then(Value::as_u64)
            .map_or(ipchoice_core::desirability::DEFAULT_SELECTION_CAP, |c| {
                c as usize
            }),
    };
    let digest = report.get("input_sha256").and_then(Value::as_str);
    let input = match (digest, input) {
        (Some(d), Some(i)) if d == i.digest => Some(i),
        (Some(_), Some(_)) => {
            return Err(CliError::Schema(
                "input digest does not match the report; pass the original input".into(),
            ))
        }
        (Some(_), None) => {
            return Err(CliError::Schema(
                "report needs its input: pass --input".into(),
            ))
        }
        (None, _) => None,
    };
    let need_input = || input.ok_or_else(|| CliError::Schema("report has no input digest".into()));
    let again = match command.as_str() {
        "choose" => cmd_choose(need_input()?, &params)?,
        "check" => cmd_check(need_input()?, &params)?,
        "verify" => cmd_verify(input, &params)?,
        other => {
            return Err(CliError::Schema(format!(
                "cannot recheck a {other:?} report"
            )))
        }
    };
    if let Some(path) = first_difference(&report, &again.report, "") {
        return Err(CliError::Mismatch(format!(
            "recomputed report differs at {path}"
        )));
    }
    let results = report["results"].as_array().map_or(0, Vec::len);
    Ok(Outcome {
        report: json!({
            "schema": SCHEMA,
            "command": "recheck",
            "rechecked": command,
            "input_sha256": digest,
            "results": results,
            "identical": true,
        }),
        failed: again.failed,
    })
}
