use serde::Serialize;

use crate::base::{BaseMorphism, EqualityMode, Source};
use crate::caus::StatefulSeq;
use crate::error::{check_obj, Error, Result};
use crate::obj::Point;
use crate::seq::Seq;
use crate::square::{vcomp, TwoCell};

pub const DEFAULT_HORIZON: usize = 16;

/// Successive truncations `Tc_0, Tc_1, ...`, each built from the previous
/// tower by one more vertical composition.
pub struct Truncations<'a> {
    seq: &'a StatefulSeq,
    tower: TwoCell,
    next: usize,
}

impl<'a> Truncations<'a> {
    pub fn new(seq: &'a StatefulSeq) -> Truncations<'a> {
        Truncations {
            seq,
            tower: TwoCell::lift_v(seq.init()),
            next: 0,
        }
    }

    /// `U(i^v ⨾ s_0 ⨾ ... ⨾ s_n)`, the tower before its final state is
    /// discarded.
    pub fn tower(&self) -> &TwoCell {
        &self.tower
    }

    fn step(&mut self) -> Result<BaseMorphism> {
        let cell = self.seq.cell(self.next)?;
        self.tower = vcomp(&self.tower, &cell)?;
        self.next += 1;
        let discard = TwoCell::lift_v(&BaseMorphism::terminal(self.seq.tag(), self.tower.nxt())?);
        Ok(vcomp(&self.tower, &discard)?.underlying().clone())
    }
}

impl Iterator for Truncations<'_> {
    type Item = Result<BaseMorphism>;

    fn next(&mut self) -> Option<Result<BaseMorphism>> {
        Some(self.step())
    }
}

/// `Tc_n(i, s) = U(i^v ⨾ s_0 ⨾ ... ⨾ s_n ⨾ !^v) : ∏ X_k -> ∏ Y_k`.
pub fn truncate(s: &StatefulSeq, n: usize) -> Result<BaseMorphism> {
    Truncations::new(s).nth(n).expect("infinite iterator")
}

/// Projection of a truncation onto its last output block.
fn last_block(s: &StatefulSeq, tc: &BaseMorphism, k: usize) -> Result<BaseMorphism> {
    let yk = s.cod_at(k)?;
    let total = tc.cod().len();
    let sources: Vec<Source> = (total - yk.len()..total).map(Source::Slot).collect();
    let proj = BaseMorphism::wiring(s.tag(), tc.cod(), &yk, &sources)?;
    proj.after(tc)
}

/// `Un_k = π_k ∘ Tc_k : ∏_{n ≤ k} X_n -> Y_k`.
pub fn unroll(s: &StatefulSeq, k: usize) -> Result<BaseMorphism> {
    last_block(s, &truncate(s, k)?, k)
}

/// Where two sequences were observed to differ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    /// The truncation index at which the difference first shows.
    pub tick: usize,
    /// All inputs up to and including `tick`, flattened.
    pub input: Point,
    pub left: Point,
    pub right: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Truncations `0..=horizon` agree. This is evidence, not a proof of
    /// extensional equality.
    EqualUpToHorizon {
        horizon: usize,
    },
    CounterexampleAt(Counterexample),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::EqualUpToHorizon { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::CounterexampleAt(c) => Some(c),
            Verdict::EqualUpToHorizon { .. } => None,
        }
    }
}

/// Compares `Tc_n(s)` with `Tc_n(t)` for every `n ≤ horizon`.
pub fn ext_equal(
    s: &StatefulSeq,
    t: &StatefulSeq,
    horizon: usize,
    mode: EqualityMode,
) -> Result<Verdict> {
    for k in 0..=horizon {
        check_obj(
            "extensional equality (inputs)",
            &s.dom_at(k)?,
            &t.dom_at(k)?,
        )?;
        check_obj(
            "extensional equality (outputs)",
            &s.cod_at(k)?,
            &t.cod_at(k)?,
        )?;
    }
    let mut left = Truncations::new(s);
    let mut right = Truncations::new(t);
    for n in 0..=horizon {
        let a = left.step()?;
        let b = right.step()?;
        if let Some(x) = a.find_difference(&b, mode)? {
            return Ok(Verdict::CounterexampleAt(Counterexample {
                tick: n,
                left: a.eval(&x)?,
                right: b.eval(&x)?,
                input: x,
            }));
        }
    }
    Ok(Verdict::EqualUpToHorizon { horizon })
}

/// Checks a shim `b_k : prv s_k -> prv t_k`: `b_0 ∘ i = j` and
/// `s_k ⨾ b_{k+1}^v = b_k^v ⨾ t_k`.
///
/// When `s`, `t` and `b` are all eventually periodic the check covers every
/// tick and a `true` result certifies extensional equality outright;
/// otherwise ticks `0..fallback` are checked.
pub fn shim_check(
    s: &StatefulSeq,
    t: &StatefulSeq,
    b: &Seq<BaseMorphism>,
    fallback: usize,
    mode: EqualityMode,
) -> Result<bool> {
    let b0 = b.at(0)?;
    check_obj("shim at tick 0", s.init().cod(), b0.dom())?;
    check_obj("shim at tick 0", t.init().cod(), b0.cod())?;
    if !b0.after(s.init())?.equal(t.init(), mode)? {
        return Ok(false);
    }
    let ticks = match (
        s.cells().stabilization(),
        t.cells().stabilization(),
        b.stabilization(),
    ) {
        (Some(x), Some(y), Some(z)) => x.join(y).join(z).known_after(),
        _ => fallback,
    };
    for k in 0..ticks {
        let (sk, tk) = (s.cell(k)?, t.cell(k)?);
        let (bk, bk1) = (b.at(k)?, b.at(k + 1)?);
        let lhs = vcomp(&sk, &TwoCell::lift_v(&bk1))?;
        let rhs = vcomp(&TwoCell::lift_v(&bk), &tk)?;
        if !lhs.same_boundary(&rhs) {
            return Err(Error::BoundaryMismatch {
                context: "shim square",
                expected: lhs.prv().times(lhs.dom()),
                found: rhs.prv().times(rhs.dom()),
            });
        }
        if !lhs.equal(&rhs, mode)? {
            return Ok(false);
        }
    }
    Ok(true)
}
