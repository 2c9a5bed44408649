//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bbs_core::{run_suite, SuiteOptions, SuiteReport, SUITES};

struct Criterion {
    id: u32,
    title: &'static str,
    suite: &'static str,
    /// Checks that must pass; empty means every check in the suite.
    checks: &'static [&'static str],
    budget: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "reference elimination rows and riggings",
        suite: "reference",
        checks: &["reference elimination rows", "reference riggings"],
        budget: secs(1),
    },
    Criterion {
        id: 2,
        title: "reference excursion soliton sizes",
        suite: "reference",
        checks: &["reference excursion soliton sizes"],
        budget: secs(1),
    },
    Criterion {
        id: 3,
        title: "elimination equals skip on 2^15 half-line configs",
        suite: "ten",
        checks: &[],
        budget: secs(10),
    },
    Criterion {
        id: 4,
        title: "linearization",
        suite: "linearization",
        checks: &[],
        budget: secs(30),
    },
    Criterion {
        id: 5,
        title: "skip algebra",
        suite: "skip-algebra",
        checks: &[],
        budget: secs(60),
    },
    Criterion {
        id: 6,
        title: "zeta bijection round trip",
        suite: "bijection",
        checks: &[],
        budget: secs(60),
    },
    Criterion {
        id: 7,
        title: "fermionic formula",
        suite: "fermionic",
        checks: &[],
        budget: secs(10),
    },
    Criterion {
        id: 8,
        title: "partition function shift and mean length",
        suite: "measures",
        checks: &[
            "partition function under the shift",
            "mean length by continued fraction and enumeration",
        ],
        budget: secs(10),
    },
    Criterion {
        id: 9,
        title: "skipped Markov chain transitions",
        suite: "skip-markov",
        checks: &["skip 1 of the Markov chain", "skip 2 of the Markov chain"],
        budget: secs(60),
    },
    Criterion {
        id: 10,
        title: "carrier expectations",
        suite: "carrier",
        checks: &[
            "mean seat 1 load",
            "mean seat 2 load",
            "mean seat 3 load",
            "mean infinite carrier load",
            "seat 1 and seat 2 correlation",
        ],
        budget: secs(120),
    },
    Criterion {
        id: 11,
        title: "invariance under T and shifts",
        suite: "invariance",
        checks: &[
            "pattern frequencies invariant under T",
            "pattern frequencies invariant under shifts",
        ],
        budget: secs(60),
    },
];

fn workers() -> usize {
    std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(8)
}

fn report(id: u32, title: &str, passed: bool, elapsed: Duration, note: &str) -> bool {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!(
        "AC{id:<2} {verdict}  {title} ({:.2}s){note}",
        elapsed.as_secs_f64()
    );
    passed
}

fn evaluate(c: &Criterion, r: &SuiteReport) -> (bool, String) {
    let names: Vec<&str> = if c.checks.is_empty() {
        r.checks.iter().map(|k| k.name.as_str()).collect()
    } else {
        c.checks.to_vec()
    };
    let failed: Vec<&str> = names
        .iter()
        .copied()
        .filter(|n| !r.check(n).is_some_and(|k| k.passed))
        .collect();
    if failed.is_empty() {
        (true, String::new())
    } else {
        (false, format!("; failing: {}", failed.join(", ")))
    }
}

fn suite_json(name: &str, opts: &SuiteOptions) -> Result<String, String> {
    let r = run_suite(name, opts).map_err(|e| format!("{name}: {e}"))?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

/// Every suite twice with one seed, plus worker counts 1 and 4 at reduced size.
fn determinism() -> (bool, String) {
    let full = SuiteOptions {
        workers: workers(),
        ..SuiteOptions::default()
    };
    let small = |workers| SuiteOptions {
        workers,
        max_len: Some(8),
        scale: 0.05,
        ..SuiteOptions::default()
    };
    let mut diffs = Vec::new();
    for &name in SUITES {
        let same_seed = suite_json(name, &full).and_then(|a| Ok((a, suite_json(name, &full)?)));
        let workers =
            suite_json(name, &small(1)).and_then(|a| Ok((a, suite_json(name, &small(4))?)));
        for (what, pair) in [("rerun", same_seed), ("workers", workers)] {
            match pair {
                Ok((a, b)) if a == b => {}
                Ok(_) => diffs.push(format!("{name} {what}")),
                Err(e) => diffs.push(e),
            }
        }
    }
    if diffs.is_empty() {
        (true, String::new())
    } else {
        (false, format!("; differing: {}", diffs.join(", ")))
    }
}

fn main() -> ExitCode {
    let opts = SuiteOptions {
        workers: workers(),
        ..SuiteOptions::default()
    };
    let mut cache: HashMap<&str, (Result<SuiteReport, String>, Duration)> = HashMap::new();
    let mut all = true;
    for c in CRITERIA {
        let (result, elapsed) = cache.entry(c.suite).or_insert_with(|| {
            let start = Instant::now();
            let r = run_suite(c.suite, &opts).map_err(|e| e.to_string());
            (r, start.elapsed())
        });
        let (passed, mut note) = match result {
            Ok(r) => evaluate(c, r),
            Err(e) => (false, format!("; error: {e}")),
        };
        let in_time = *elapsed <= c.budget;
        if !in_time {
            note.push_str(&format!("; over the {}s budget", c.budget.as_secs()));
        }
        all &= report(c.id, c.title, passed && in_time, *elapsed, &note);
    }
    let start = Instant::now();
    let (passed, note) = determinism();
    all &= report(
        12,
        "byte-identical reports for a fixed seed",
        passed,
        start.elapsed(),
        &note,
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
