//! Causal morphisms: stateful morphism sequences and their operations.
//!
//! A [`StatefulSeq`] of type `X -> Y` is an initial state `i : 1 -> S_0`
//! together with one [`TwoCell`] per tick, `s_k : (S_k, X_k, S_{k+1}, Y_k)`.
//! Two sequences denote the same causal morphism when all of their
//! truncations agree ([`ext_equal`]); states are internal.
//!
//! Sequences whose cells are all the same (constant descriptors) are the
//! Mealy-machine fragment; they are closed under every operation here.

mod diff;
mod run;
mod trace;
mod truncate;

pub use diff::seq_d;
pub use run::run;
pub use trace::{canonicalize, delay_gate, delayed_trace, TraceSpec};
pub use truncate::{
    ext_equal, shim_check, truncate, unroll, Counterexample, Truncations, Verdict, DEFAULT_HORIZON,
};

use std::fmt;

use crate::base::{BaseMorphism, BaseTag, Structural};
use crate::error::{check_obj, Error, Result};
use crate::obj::Obj;
use crate::seq::Seq;
use crate::square::{cross, hcomp, TwoCell};

/// How far eager boundary checks look into generators without a declared
/// period.
const LAZY_CHECK_TICKS: usize = 4;

#[derive(Clone)]
pub struct StatefulSeq {
    init: BaseMorphism,
    cells: Seq<TwoCell>,
}

impl fmt::Debug for StatefulSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StatefulSeq {{ init: {:?}, cells: {:?} }}",
            self.init, self.cells
        )
    }
}

impl StatefulSeq {
    /// Checks `i : 1 -> prv s_0` and `nxt s_k = prv s_{k+1}` up to the point
    /// where the cell sequence repeats (a few ticks for free generators).
    pub fn new(init: BaseMorphism, cells: Seq<TwoCell>) -> Result<StatefulSeq> {
        check_obj("initial state domain", &Obj::unit(), init.dom())?;
        let first = cells.at(0)?;
        check_obj("initial state", first.prv(), init.cod())?;
        if first.tag() != init.tag() {
            return Err(Error::BaseMismatch {
                left: init.tag(),
                right: first.tag(),
            });
        }
        let n = cells.horizon_or(LAZY_CHECK_TICKS);
        let mut prev = first;
        for k in 1..=n {
            let cell = cells.at(k)?;
            check_obj("state boundary between ticks", prev.nxt(), cell.prv())?;
            prev = cell;
        }
        Ok(StatefulSeq { init, cells })
    }

    pub fn init(&self) -> &BaseMorphism {
        &self.init
    }

    pub fn cells(&self) -> &Seq<TwoCell> {
        &self.cells
    }

    pub fn cell(&self, k: usize) -> Result<TwoCell> {
        self.cells.at(k)
    }

    pub fn tag(&self) -> BaseTag {
        self.init.tag()
    }

    /// True when every tick runs the same cell.
    pub fn is_regular(&self) -> bool {
        self.cells.is_constant()
    }

    pub fn dom_seq(&self) -> Result<Seq<Obj>> {
        self.cells.map(|c| Ok(c.dom().clone()))
    }

    pub fn cod_seq(&self) -> Result<Seq<Obj>> {
        self.cells.map(|c| Ok(c.cod().clone()))
    }

    /// `st(i, s)`, the sequence of state objects.
    pub fn state_seq(&self) -> Result<Seq<Obj>> {
        self.cells.map(|c| Ok(c.prv().clone()))
    }

    pub fn dom_at(&self, k: usize) -> Result<Obj> {
        Ok(self.cell(k)?.dom().clone())
    }

    pub fn cod_at(&self, k: usize) -> Result<Obj> {
        Ok(self.cell(k)?.cod().clone())
    }

    /// Horizon after which the cells repeat, if known.
    pub fn known_after(&self) -> Option<usize> {
        self.cells.stabilization().map(|s| s.known_after())
    }

    /// `id_X = (id_1, [id_{X_k}^h])`.
    pub fn identity(tag: BaseTag, objs: &Seq<Obj>) -> Result<StatefulSeq> {
        StatefulSeq::lift_h(tag, &objs.map(move |x| BaseMorphism::id(tag, x))?)
    }

    /// `H f = (id_1, [f_k^h])`, a stateless sequence.
    pub fn lift_h(tag: BaseTag, fs: &Seq<BaseMorphism>) -> Result<StatefulSeq> {
        let cells = fs.map(|f| Ok(TwoCell::lift_h(f)))?;
        StatefulSeq::new(BaseMorphism::id(tag, &Obj::unit())?, cells)
    }

    /// `H_0 f`: the same stateless map at every tick.
    pub fn lift_h0(f: &BaseMorphism) -> Result<StatefulSeq> {
        StatefulSeq::lift_h(f.tag(), &Seq::constant(f.clone()))
    }

    /// Stateless lift of a structural morphism at every tick.
    pub fn structural(tag: BaseTag, kinds: &Seq<Structural>) -> Result<StatefulSeq> {
        StatefulSeq::lift_h(
            tag,
            &kinds.map(move |k| BaseMorphism::structural(tag, k.clone()))?,
        )
    }

    pub fn structural0(tag: BaseTag, kind: Structural) -> Result<StatefulSeq> {
        StatefulSeq::structural(tag, &Seq::constant(kind))
    }

    /// `+_X : X × X -> X`, pointwise.
    pub fn plus(tag: BaseTag, objs: &Seq<Obj>) -> Result<StatefulSeq> {
        StatefulSeq::structural(tag, &objs.map(|x| Ok(Structural::Plus(x.clone())))?)
    }

    /// `0_X : 1 -> X`, pointwise.
    pub fn zero(tag: BaseTag, objs: &Seq<Obj>) -> Result<StatefulSeq> {
        StatefulSeq::structural(tag, &objs.map(|x| Ok(Structural::Zero(x.clone())))?)
    }

    /// `self ∘ first`: run `first`, feed its outputs to `self`.
    pub fn after(&self, first: &StatefulSeq) -> Result<StatefulSeq> {
        compose(self, first)
    }

    pub fn then(&self, next: &StatefulSeq) -> Result<StatefulSeq> {
        compose(next, self)
    }

    pub fn product(&self, other: &StatefulSeq) -> Result<StatefulSeq> {
        product(self, other)
    }

    /// `⟨self, other⟩ = (self × other) ∘ Δ`.
    pub fn pair(&self, other: &StatefulSeq) -> Result<StatefulSeq> {
        let tag = self.tag();
        let diag = StatefulSeq::structural(
            tag,
            &self
                .dom_seq()?
                .map(|x| Ok(Structural::Diagonal(x.clone())))?,
        )?;
        compose(&product(self, other)?, &diag)
    }

    /// `self + other` through the output monoid.
    pub fn add(&self, other: &StatefulSeq) -> Result<StatefulSeq> {
        let plus = StatefulSeq::plus(self.tag(), &self.cod_seq()?)?;
        compose(&plus, &self.pair(other)?)
    }

    /// The same cells started from a different initial state.
    pub fn with_init(&self, init: BaseMorphism) -> Result<StatefulSeq> {
        StatefulSeq::new(init, self.cells.clone())
    }
}

/// `(i, s) ∘ (j, t) = (⟨j, i⟩, [s_k ⋄ t_k])`.
pub fn compose(second: &StatefulSeq, first: &StatefulSeq) -> Result<StatefulSeq> {
    let init = first.init.pair(&second.init)?;
    let cells = second.cells.zip(&first.cells, hcomp)?;
    StatefulSeq::new(init, cells)
}

/// `(i, s) × (j, t) = (⟨i, j⟩, [s_k ⊠ t_k])`.
pub fn product(left: &StatefulSeq, right: &StatefulSeq) -> Result<StatefulSeq> {
    let init = left.init.pair(&right.init)?;
    let cells = left.cells.zip(&right.cells, cross)?;
    StatefulSeq::new(init, cells)
}

#[cfg(test)]
mod tests;
