//! Randomized law suites with machine-readable reports.
//!
//! Each suite draws instances from a seeded [`Gen`], checks every equation
//! of its family on them, and returns a [`Report`]. Stream equations are
//! checked with [`ext_equal`] up to a horizon; single-tick equations compare
//! 2-cells directly. A failing case records the full input point and both
//! sides so it can be replayed.
//!
//! Some entries are expected to fail: the yanking equation, for instance, is
//! reported as a witness whose counterexample must appear at tick 0.

mod bijection;
mod causality;
mod cd;
mod dinat;
pub mod gen;
mod squd;
mod trace;
mod unrol;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use gen::Gen;

use crate::base::{BaseTag, EqualityMode};
use crate::caus::{ext_equal, StatefulSeq, Verdict};
use crate::error::{Error, Result};
use crate::obj::Point;
use crate::square::TwoCell;

pub const SCHEMA: &str = "causal-check/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TraceAxioms,
    Dinaturality,
    SqudProps,
    CdAxioms,
    Unrol,
    CausalBijection,
    Causality,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::TraceAxioms,
        Suite::Dinaturality,
        Suite::SqudProps,
        Suite::CdAxioms,
        Suite::Unrol,
        Suite::CausalBijection,
        Suite::Causality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TraceAxioms => "trace-axioms",
            Suite::Dinaturality => "dinaturality",
            Suite::SqudProps => "squd-props",
            Suite::CdAxioms => "cd-axioms",
            Suite::Unrol => "unrol",
            Suite::CausalBijection => "causal-bijection",
            Suite::Causality => "causality",
        }
    }

    /// Instances per law when the caller does not say.
    pub fn default_cases(self) -> usize {
        match self {
            Suite::SqudProps | Suite::Unrol => 50,
            Suite::CausalBijection => 4,
            Suite::Causality => 1000,
            _ => 25,
        }
    }

    /// Bases the suite can run over.
    pub fn supports(self, base: BaseTag) -> bool {
        match self {
            Suite::TraceAxioms | Suite::Dinaturality | Suite::Causality => true,
            Suite::SqudProps | Suite::CdAxioms | Suite::Unrol => base.has_differential(),
            Suite::CausalBijection => base == BaseTag::Fin,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{}`", s)))
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub seed: u64,
    /// Largest truncation index compared.
    pub horizon: usize,
    pub base: BaseTag,
    /// Overrides [`Suite::default_cases`].
    pub cases: Option<usize>,
}

impl CheckConfig {
    pub fn new(seed: u64) -> CheckConfig {
        CheckConfig {
            seed,
            horizon: 8,
            base: BaseTag::Poly,
            cases: None,
        }
    }

    fn mode(&self) -> EqualityMode {
        match self.base {
            BaseTag::Smooth => EqualityMode::Sampled {
                samples: 16,
                tol: 1e-9,
                seed: self.seed,
            },
            _ => EqualityMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Holds,
    /// A counterexample must be found in every case.
    Fails,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawSummary {
    pub law: String,
    pub expect: Expect,
    pub cases: usize,
    pub passed: usize,
}

/// What was observed when an equation did or did not hold.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Truncations at `tick` disagree on the flattened `input`.
    Truncation {
        tick: usize,
        input: Point,
        left: Point,
        right: Point,
    },
    /// Underlying morphisms of two 2-cells disagree.
    Cell {
        input: Point,
        left: Point,
        right: Point,
    },
    Boundary {
        left: String,
        right: String,
    },
    /// Outputs of two stream functions on one input prefix.
    Prefix {
        prefix: Vec<Point>,
        left: Vec<Point>,
        right: Vec<Point>,
    },
    Numeric {
        what: String,
        left: f64,
        right: f64,
        tolerance: f64,
    },
    /// An equation expected to fail held on every tested tick.
    NoCounterexample {
        horizon: usize,
    },
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub law: String,
    pub case: usize,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: Suite,
    pub seed: u64,
    pub horizon: usize,
    pub base: BaseTag,
    pub passed: bool,
    pub cases: usize,
    pub laws: Vec<LawSummary>,
    /// Counterexamples that were supposed to exist, such as yanking.
    pub witnesses: Vec<Failure>,
    /// The first failing case, if any.
    pub counterexample: Option<Failure>,
}

impl Report {
    pub fn law(&self, name: &str) -> Option<&LawSummary> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Accumulates case outcomes for one suite run.
pub(crate) struct Runner {
    cfg: CheckConfig,
    suite: Suite,
    laws: Vec<LawSummary>,
    witnesses: Vec<Failure>,
    first: Option<Failure>,
}

/// `None` when an equation holds, the evidence otherwise.
pub(crate) type Outcome = Result<Option<Evidence>>;

impl Runner {
    fn new(suite: Suite, cfg: &CheckConfig) -> Runner {
        Runner {
            cfg: cfg.clone(),
            suite,
            laws: Vec::new(),
            witnesses: Vec::new(),
            first: None,
        }
    }

    pub fn cases(&self) -> usize {
        self.cfg.cases.unwrap_or_else(|| self.suite.default_cases())
    }

    pub fn horizon(&self) -> usize {
        self.cfg.horizon
    }

    pub fn mode(&self) -> EqualityMode {
        self.cfg.mode()
    }

    fn slot(&mut self, law: &str, expect: Expect) -> usize {
        if let Some(i) = self.laws.iter().position(|l| l.law == law) {
            return i;
        }
        self.laws.push(LawSummary {
            law: law.to_string(),
            expect,
            cases: 0,
            passed: 0,
        });
        self.laws.len() - 1
    }

    /// Records a case of an equation that should hold.
    pub fn holds(&mut self, law: &str, case: usize, outcome: Outcome) {
        let i = self.slot(law, Expect::Holds);
        self.laws[i].cases += 1;
        let evidence = match outcome {
            Ok(None) => {
                self.laws[i].passed += 1;
                return;
            }
            Ok(Some(e)) => e,
            Err(e) => Evidence::Error {
                message: e.to_string(),
            },
        };
        self.fail(law, case, evidence);
    }

    /// Records a case of an equation that should fail; the evidence of the
    /// failure is kept as a witness.
    pub fn fails(
        &mut self,
        law: &str,
        case: usize,
        outcome: Outcome,
        accept: impl Fn(&Evidence) -> bool,
    ) {
        let i = self.slot(law, Expect::Fails);
        self.laws[i].cases += 1;
        match outcome {
            Ok(Some(e)) if accept(&e) => {
                self.laws[i].passed += 1;
                if !self.witnesses.iter().any(|w| w.law == law) {
                    self.witnesses.push(Failure {
                        law: law.to_string(),
                        case,
                        evidence: e,
                    });
                }
            }
            Ok(Some(e)) => self.fail(law, case, e),
            Ok(None) => self.fail(
                law,
                case,
                Evidence::NoCounterexample {
                    horizon: self.cfg.horizon,
                },
            ),
            Err(e) => self.fail(
                law,
                case,
                Evidence::Error {
                    message: e.to_string(),
                },
            ),
        }
    }

    fn fail(&mut self, law: &str, case: usize, evidence: Evidence) {
        if self.first.is_none() {
            self.first = Some(Failure {
                law: law.to_string(),
                case,
                evidence,
            });
        }
    }

    fn finish(self) -> Report {
        let passed = self.first.is_none() && self.laws.iter().all(|l| l.passed == l.cases);
        Report {
            schema: SCHEMA,
            suite: self.suite,
            seed: self.cfg.seed,
            horizon: self.cfg.horizon,
            base: self.cfg.base,
            passed,
            cases: self.laws.iter().map(|l| l.cases).sum(),
            laws: self.laws,
            witnesses: self.witnesses,
            counterexample: self.first,
        }
    }
}

/// Extensional equality up to `horizon`, as an outcome.
pub(crate) fn streams(
    s: &StatefulSeq,
    t: &StatefulSeq,
    horizon: usize,
    mode: EqualityMode,
) -> Outcome {
    Ok(match ext_equal(s, t, horizon, mode)? {
        Verdict::EqualUpToHorizon { .. } => None,
        Verdict::CounterexampleAt(c) => Some(Evidence::Truncation {
            tick: c.tick,
            input: c.input,
            left: c.left,
            right: c.right,
        }),
    })
}

/// Equality of 2-cells: boundaries first, then underlying morphisms.
pub(crate) fn cells(a: &TwoCell, b: &TwoCell, mode: EqualityMode) -> Outcome {
    if !a.same_boundary(b) {
        return Ok(Some(Evidence::Boundary {
            left: format!("{:?}", a),
            right: format!("{:?}", b),
        }));
    }
    Ok(
        match a.underlying().find_difference(b.underlying(), mode)? {
            None => None,
            Some(x) => Some(Evidence::Cell {
                left: a.underlying().eval(&x)?,
                right: b.underlying().eval(&x)?,
                input: x,
            }),
        },
    )
}

/// Runs one suite.
pub fn run_suite(suite: Suite, cfg: &CheckConfig) -> Result<Report> {
    if !suite.supports(cfg.base) {
        return Err(Error::UnsupportedStructure(format!(
            "suite {} does not run over the {} base",
            suite, cfg.base
        )));
    }
    let mut r = Runner::new(suite, cfg);
    let mut g = Gen::new(cfg.seed, cfg.base);
    match suite {
        Suite::TraceAxioms => trace::run(&mut r, &mut g)?,
        Suite::Dinaturality => dinat::run(&mut r, &mut g)?,
        Suite::SqudProps => squd::run(&mut r, &mut g)?,
        Suite::CdAxioms => cd::run(&mut r, &mut g)?,
        Suite::Unrol => unrol::run(&mut r, &mut g)?,
        Suite::CausalBijection => bijection::run(&mut r, &mut g)?,
        Suite::Causality => causality::run(&mut r, &mut g)?,
    }
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(suite: Suite, base: BaseTag, cases: usize) -> Report {
        let cfg = CheckConfig {
            cases: Some(cases),
            base,
            ..CheckConfig::new(11)
        };
        let report = run_suite(suite, &cfg).unwrap();
        assert!(report.passed, "{}", report.to_json());
        eprintln!("{}", report.to_json());
        report
    }

    #[test]
    fn trace_suite_passes_with_yanking_witness() {
        let report = quick(Suite::TraceAxioms, BaseTag::Poly, 4);
        let w = &report.witnesses[0];
        assert_eq!(w.law, "yanking");
        assert!(matches!(w.evidence, Evidence::Truncation { tick: 0, .. }));
    }

    #[test]
    fn dinaturality_suite_passes() {
        quick(Suite::Dinaturality, BaseTag::Poly, 4);
    }

    #[test]
    fn squd_suite_passes() {
        quick(Suite::SqudProps, BaseTag::Poly, 6);
    }

    #[test]
    fn cd_suite_passes() {
        quick(Suite::CdAxioms, BaseTag::Poly, 3);
    }

    #[test]
    fn unrol_suite_passes() {
        quick(Suite::Unrol, BaseTag::Poly, 4);
    }

    #[test]
    fn bijection_suite_passes() {
        quick(Suite::CausalBijection, BaseTag::Fin, 1);
    }

    #[test]
    fn causality_suite_passes_on_every_base() {
        for base in [BaseTag::Poly, BaseTag::Smooth, BaseTag::Fin] {
            quick(Suite::Causality, base, 40);
        }
    }

    #[test]
    fn smooth_suites_pass() {
        quick(Suite::Unrol, BaseTag::Smooth, 3);
        quick(Suite::SqudProps, BaseTag::Smooth, 3);
    }

    #[test]
    fn unsupported_base_is_rejected() {
        let cfg = CheckConfig {
            base: BaseTag::Fin,
            ..CheckConfig::new(0)
        };
        assert!(matches!(
            run_suite(Suite::CdAxioms, &cfg),
            Err(Error::UnsupportedStructure(_))
        ));
    }

    #[test]
    fn reports_are_reproducible() {
        let a = quick(Suite::TraceAxioms, BaseTag::Poly, 2).to_json();
        let b = quick(Suite::TraceAxioms, BaseTag::Poly, 2).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }
}
