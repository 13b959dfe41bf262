//! Runs every acceptance criterion once with its full trial count and prints
//! one line per criterion. Exits non-zero if any criterion fails or runs
//! longer than a minute.

use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ipchoice_core::suites;

const SEED: u64 = 7;
const TIME_LIMIT: Duration = Duration::from_secs(60);

const CRITERIA: [(u32, &str, &str); 12] = [
    (
        1,
        "f1",
        "fixture lower value, E-admissible {a,b}, maximal {a,b,c}",
    ),
    (
        2,
        "e-subset-m",
        "E-admissible within maximal on 1000 instances",
    ),
    (
        3,
        "singleton-collapse",
        "single prevision rules agree on 1000 instances",
    ),
    (
        4,
        "prop5",
        "distinct previsions separate E from M on 200 pairs",
    ),
    (
        5,
        "maximality-as-archimedean",
        "vertex-subset minima give maximality on 500 instances",
    ),
    (
        6,
        "coherence",
        "coherent oracles pass axiom probes; natural extension inside dominating models",
    ),
    (
        7,
        "natex-fm",
        "natural extension agrees with elimination on 200 assessments",
    ),
    (
        8,
        "mixing",
        "nonlinear models break mixing, linear ones do not, on 100 models",
    ),
    (
        9,
        "duality",
        "cone lower prevision equals dual envelope on 200 pairs",
    ),
    (
        10,
        "roundtrip",
        "choice and option-set bridges invert on 100 rules",
    ),
    (
        11,
        "lp-cross",
        "simplex and elimination agree on 2000 systems",
    ),
    (
        12,
        "binarity",
        "maximality binary on 200 probes; E-admissibility not on the triple",
    ),
];

fn main() -> ExitCode {
    // Written straight to stderr so the lines show without --nocapture.
    let mut err = std::io::stderr().lock();
    let mut failures = 0;
    for (n, name, what) in CRITERIA {
        let start = Instant::now();
        let result = suites::find(name).and_then(|s| s.run(SEED, None));
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(r) if r.passed && elapsed < TIME_LIMIT => (true, format!("{} trials", r.trials)),
            Ok(r) if r.passed => (false, format!("too slow after {} trials", r.trials)),
            Ok(r) => (false, r.counterexample.unwrap_or_default()),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        let _ = writeln!(
            err,
            "criterion {n:>2} {}: {what} [{name}, {detail}, {:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    let _ = writeln!(
        err,
        "acceptance: {} of {} criteria passed",
        CRITERIA.len() - failures,
        CRITERIA.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
