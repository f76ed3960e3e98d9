//! The ten acceptance criteria at their stated sizes. Prints one PASS/FAIL
//! line per criterion and exits non-zero if any fails.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use redux_core::inter::WrapperKind;
use redux_core::model::{Mode, ProblemKind};
use redux_core::verify::{
    apsp_trial, bpm17_threshold_trial, pp_trial, rollback_trace, seth_trial, tally, threesum_trial,
    trial_rng, triangle_trial, wrapper_trace, Check, PropertyTally, TRACE_STEPS,
};

const SEED: u64 = 20_240_601;

fn run(
    seed: u64,
    trials: u64,
    f: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Vec<Check> + Sync,
) -> Vec<PropertyTally> {
    let checks: Vec<Vec<Check>> = (0..trials)
        .into_par_iter()
        .map(|t| f(&mut trial_rng(seed, t)))
        .collect();
    tally(checks.into_iter().flatten())
}

fn get<'a>(tallies: &'a [PropertyTally], name: &str) -> Option<&'a PropertyTally> {
    tallies.iter().find(|t| t.name == name)
}

/// Holds, with at least one check behind it.
fn strict(tallies: &[PropertyTally], name: &str) -> (bool, String) {
    match get(tallies, name) {
        Some(t) => (
            t.holds() && t.passed > 0,
            format!(
                "{name}: {} passed, {} failed{}",
                t.passed,
                t.failed,
                t.first_failure
                    .as_deref()
                    .map(|f| format!("; first failure: {}", f.lines().next().unwrap_or("")))
                    .unwrap_or_default()
            ),
        ),
        None => (false, format!("{name}: no checks ran")),
    }
}

fn all(results: &[(bool, String)]) -> (bool, String) {
    (
        results.iter().all(|r| r.0),
        results
            .iter()
            .map(|r| r.1.as_str())
            .collect::<Vec<_>>()
            .join("; "),
    )
}

struct Criterion {
    number: u32,
    title: &'static str,
    body: fn() -> (bool, String),
}

/// Criteria 1 and 2 share the 200 formulas, 3 and 6 the 300 graphs.
fn seth_runs() -> &'static (Vec<PropertyTally>, Duration) {
    static RUNS: OnceLock<(Vec<PropertyTally>, Duration)> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let t = run(SEED + 1, 200, |rng| seth_trial(rng, 12));
        (t, start.elapsed())
    })
}

fn triangle_runs() -> &'static [PropertyTally] {
    static RUNS: OnceLock<Vec<PropertyTally>> = OnceLock::new();
    RUNS.get_or_init(|| run(SEED + 3, 300, |rng| triangle_trial(rng, 40)))
}

fn c1() -> (bool, String) {
    let (t, elapsed) = seth_runs();
    let (ok, msg) = strict(t, "seth.equivalence");
    let in_time = *elapsed <= Duration::from_secs(300);
    (
        ok && in_time,
        format!("{msg}; {:.1}s (limit 300s)", elapsed.as_secs_f64()),
    )
}

fn c2() -> (bool, String) {
    strict(&seth_runs().0, "seth.ssr_counters")
}

fn c3() -> (bool, String) {
    strict(triangle_runs(), "triangle.equivalence")
}

fn c4() -> (bool, String) {
    let t = run(SEED + 4, 100, |rng| bpm17_threshold_trial(rng, 40));
    strict(&t, "triangle.bpm17_threshold")
}

fn c5() -> (bool, String) {
    let t = run(SEED + 5, 300, |rng| pp_trial(rng, 40));
    let fp = get(&t, "triangle.pp_false_positive_rate");
    let fp_line = fp.map_or("no triangle-free trials".to_string(), |t| {
        format!(
            "false positives {}/{} (limit 1%)",
            t.failed,
            t.passed + t.failed
        )
    });
    let (fn_ok, fn_line) = strict(&t, "triangle.pp_no_false_negatives");
    (
        fn_ok && fp.is_none_or(PropertyTally::holds),
        format!("{fn_line}; {fp_line}"),
    )
}

fn c6() -> (bool, String) {
    strict(triangle_runs(), "triangle.dec_tree_accounting")
}

fn c7() -> (bool, String) {
    let t = run(SEED + 7, 200, |rng| apsp_trial(rng, 24));
    all(&[strict(&t, "apsp.equivalence"), strict(&t, "apsp.counters")])
}

fn c8() -> (bool, String) {
    let t = run(SEED + 8, 200, |rng| threesum_trial(rng, 32));
    all(&[
        strict(&t, "threesum.listing"),
        strict(&t, "threesum.probe_calls"),
    ])
}

fn c9() -> (bool, String) {
    let results: Vec<(bool, String)> = WrapperKind::ALL
        .into_iter()
        .map(|w| {
            let t = run(SEED + 9, 300, |rng| {
                let mode = Mode::ALL[rng.random_range(0..3)];
                wrapper_trace(w, mode, rng, 8, TRACE_STEPS)
            });
            let (ok, msg) = all(&[
                strict(&t, "wrappers.agreement"),
                strict(&t, "wrappers.fan_out"),
                strict(&t, "wrappers.size_bounds"),
                strict(&t, "wrappers.rollback"),
            ]);
            (ok, format!("{w:?}: {msg}"))
        })
        .collect();
    let ok = results.iter().all(|r| r.0);
    let failing: Vec<&str> = results
        .iter()
        .filter(|r| !r.0)
        .map(|r| r.1.as_str())
        .collect();
    let msg = if ok {
        "5 wrappers x 300 traces agree".to_string()
    } else {
        failing.join(" | ")
    };
    (ok, msg)
}

fn c10() -> (bool, String) {
    let mut failing = Vec::new();
    let mut rollbacks = 0;
    for kind in ProblemKind::ALL {
        let t = run(SEED + 10, 500, |rng| {
            let mode = Mode::ALL[rng.random_range(0..3)];
            rollback_trace(kind, mode, rng, 8, TRACE_STEPS)
        });
        let (ok, msg) = strict(&t, "engines.rollback");
        rollbacks += get(&t, "engines.rollback").map_or(0, |t| t.passed);
        if !ok {
            failing.push(format!("{kind}: {msg}"));
        }
    }
    if failing.is_empty() {
        (
            true,
            format!(
                "{} kinds x 500 traces, {rollbacks} rollbacks restored",
                ProblemKind::ALL.len()
            ),
        )
    } else {
        (false, failing.join(" | "))
    }
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        number: 1,
        title: "SETH-reduction equivalence",
        body: c1,
    },
    Criterion {
        number: 2,
        title: "SETH counter exactness",
        body: c2,
    },
    Criterion {
        number: 3,
        title: "Triangle-reduction equivalence",
        body: c3,
    },
    Criterion {
        number: 4,
        title: "17-BPM gadget threshold law",
        body: c4,
    },
    Criterion {
        number: 5,
        title: "Randomized PP reduction",
        body: c5,
    },
    Criterion {
        number: 6,
        title: "Decremental tree accounting",
        body: c6,
    },
    Criterion {
        number: 7,
        title: "APSP-reduction equivalence",
        body: c7,
    },
    Criterion {
        number: 8,
        title: "3SUM-side listing",
        body: c8,
    },
    Criterion {
        number: 9,
        title: "Wrapper fidelity",
        body: c9,
    },
    Criterion {
        number: 10,
        title: "Rollback soundness",
        body: c10,
    },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let (ok, detail) = (c.body)();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {:>2} {} [{:.1}s]: {detail}",
            c.number,
            c.title,
            start.elapsed().as_secs_f64()
        );
        failed += !ok as u32;
    }
    println!("acceptance: {}/10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
