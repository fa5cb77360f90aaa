//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every suite runs at horizon 8 with a fixed seed.

use std::cell::OnceCell;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use causal::laws::{run_suite, CheckConfig, Expect, Report, Suite};
use causal::rnn::{self, Task, TrainConfig};
use causal::BaseTag;

const SEED: u64 = 0;
const HORIZON: usize = 8;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn suite(suite: Suite, base: BaseTag, cases: usize) -> Result<Report, String> {
    let cfg = CheckConfig {
        seed: SEED,
        horizon: HORIZON,
        base,
        cases: Some(cases),
    };
    run_suite(suite, &cfg).map_err(|e| format!("{} did not run: {}", suite, e))
}

/// Every named law ran at least `min` times and never failed.
fn laws(report: &Report, names: &[&str], min: usize) -> Verdict {
    for name in names {
        let l = report
            .law(name)
            .ok_or_else(|| format!("{} has no law `{}`", report.suite, name))?;
        if l.cases < min {
            return Err(format!("`{}` ran {} cases, wanted {}", name, l.cases, min));
        }
        if l.passed != l.cases {
            let detail = report
                .counterexample
                .as_ref()
                .map(|c| serde_json::to_string(c).unwrap_or_default())
                .unwrap_or_default();
            return Err(format!(
                "`{}` failed {} of {} cases {}",
                name,
                l.cases - l.passed,
                l.cases,
                detail
            ));
        }
    }
    if !report.passed {
        return Err(format!("{} reported a failure", report.suite));
    }
    let total: usize = names
        .iter()
        .filter_map(|n| report.law(n))
        .map(|l| l.cases)
        .sum();
    Ok(format!("{} laws, {} cases", names.len(), total))
}

fn trace(report: &Report) -> Verdict {
    let mut summary = laws(
        report,
        &[
            "target-naturality",
            "source-naturality",
            "superposing",
            "vanishing-unit",
            "vanishing-product",
            "yanking-is-delay",
        ],
        25,
    )?;
    let yanking = report.law("yanking").ok_or("no yanking check")?;
    if yanking.expect != Expect::Fails || yanking.passed != yanking.cases || yanking.cases < 25 {
        return Err(format!(
            "yanking refuted in {} of {} cases",
            yanking.passed, yanking.cases
        ));
    }
    let witness = report
        .witnesses
        .iter()
        .find(|w| w.law == "yanking")
        .ok_or("no yanking witness")?;
    let at_zero = serde_json::to_value(&witness.evidence).map_err(|e| e.to_string())?["tick"] == 0;
    if !at_zero {
        return Err("the yanking witness is not at tick 0".into());
    }
    summary.push_str("; yanking refuted at tick 0");
    Ok(summary)
}

fn dinaturality() -> Verdict {
    let r = suite(Suite::Dinaturality, BaseTag::Poly, 25)?;
    laws(
        &r,
        &[
            "regular-dinaturality",
            "dinaturality",
            "initial-state-update",
            "retiming",
        ],
        25,
    )
}

fn squd() -> Verdict {
    let r = suite(Suite::SqudProps, BaseTag::Poly, 50)?;
    laws(
        &r,
        &[
            "squd-lifts",
            "squd-zero",
            "squd-additive",
            "squd-vertical",
            "squd-chain",
            "squd-cross",
            "squd-second-zero",
            "squd-symmetric",
            "squd-tower",
        ],
        50,
    )
}

fn cartesian_differential() -> Verdict {
    let r = suite(Suite::CdAxioms, BaseTag::Poly, 25)?;
    laws(
        &r,
        &[
            "cd1-structural",
            "cd2-zero",
            "cd3-additive",
            "cd3-idempotent-shim",
            "cd4-chain-rule",
            "cd5-product",
            "cd6-linear-in-tangent",
            "cd7-symmetry",
            "well-defined",
        ],
        25,
    )
}

fn unrolling() -> Verdict {
    let exact = laws(
        &suite(Suite::Unrol, BaseTag::Poly, 50)?,
        &["unroll-vs-bptt"],
        50,
    )?;
    let smooth = suite(Suite::Unrol, BaseTag::Smooth, 50)?;
    let numeric = laws(&smooth, &["finite-differences"], 100)?;
    Ok(format!("exact: {}; finite differences: {}", exact, numeric))
}

fn bijection() -> Verdict {
    let r = suite(
        Suite::CausalBijection,
        BaseTag::Fin,
        Suite::CausalBijection.default_cases(),
    )?;
    // each case sweeps all nine alphabet pairs
    let pairs = 9 * Suite::CausalBijection.default_cases();
    laws(&r, &["sequence-roundtrip", "function-roundtrip"], pairs)?;
    laws(
        &r,
        &["sequence-roundtrip", "function-roundtrip", "delay-is-shift"],
        1,
    )
}

fn rnn_demo() -> Verdict {
    let started = Instant::now();
    let t = rnn::train(&TrainConfig::new(Task::CopyDelay), |_| {}).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let (first, last) = (t.first_loss(), t.last_loss());
    let drop = 1.0 - last / first;
    let summary = format!(
        "{} steps, loss {:.3e} -> {:.3e} ({:.1}% lower), deviation {:.1e}, {:.1?}",
        t.log.len(),
        first,
        last,
        100.0 * drop,
        t.max_deviation(),
        elapsed
    );
    let ok = !t.diverged
        && t.log.len() == 200
        && drop >= 0.5
        && t.log.iter().all(|s| s.deviation <= 1e-10)
        && elapsed <= Duration::from_secs(30);
    if ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn causality() -> Verdict {
    laws(
        &suite(Suite::Causality, BaseTag::Poly, 1000)?,
        &["causal-outputs"],
        1000,
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    // the trace suite also carries the single-register law
    let trace_cell = OnceCell::new();
    let trace_report = || {
        trace_cell
            .get_or_init(|| suite(Suite::TraceAxioms, BaseTag::Poly, 25))
            .clone()
    };
    let criteria: Vec<Criterion> = vec![
        ("delayed-trace laws", Box::new(|| trace(&trace_report()?))),
        ("modified dinaturality", Box::new(dinaturality)),
        ("per-tick differential", Box::new(squd)),
        (
            "cartesian differential axioms",
            Box::new(cartesian_differential),
        ),
        ("unrolling vs backpropagation", Box::new(unrolling)),
        (
            "single register suffices",
            Box::new(|| laws(&trace_report()?, &["single-register"], 25)),
        ),
        ("causal function bijection", Box::new(bijection)),
        ("rnn demo", Box::new(rnn_demo)),
        ("end-to-end causality", Box::new(causality)),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(msg) => println!("PASS {} {}: {} [{:.2?}]", n + 1, name, msg, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {}: {} [{:.2?}]", n + 1, name, msg, t.elapsed());
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1?}",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
