use crate::base::{BaseMorphism, BaseTag, Structural};
use crate::caus::StatefulSeq;
use crate::error::{check_obj, Error, Result};
use crate::obj::Obj;
use crate::seq::Seq;
use crate::square::value_to_state;

/// What a delayed trace feeds back: the objects `T_k` and the initial
/// register contents `p : 1 -> T_0`.
#[derive(Clone, Debug)]
pub struct TraceSpec {
    pub objs: Seq<Obj>,
    pub init: BaseMorphism,
}

impl TraceSpec {
    pub fn new(objs: Seq<Obj>, init: BaseMorphism) -> TraceSpec {
        TraceSpec { objs, init }
    }

    /// Feedback along a constant object.
    pub fn constant(obj: Obj, init: BaseMorphism) -> TraceSpec {
        TraceSpec::new(Seq::constant(obj), init)
    }

    /// The trivial trace along `1` with `p = id_1`.
    pub fn unit(tag: BaseTag) -> Result<TraceSpec> {
        Ok(TraceSpec::constant(
            Obj::unit(),
            BaseMorphism::id(tag, &Obj::unit())?,
        ))
    }
}

/// `tr_T^p(i, s) = (⟨i, p⟩, [conv s_k at (T_k, T_{k+1})])` for
/// `(i, s) : T × X -> ○T × Y`; the result has type `X -> Y`.
pub fn delayed_trace(spec: &TraceSpec, s: &StatefulSeq) -> Result<StatefulSeq> {
    check_obj("trace initial value domain", &Obj::unit(), spec.init.dom())?;
    check_obj("trace initial value", &spec.objs.at(0)?, spec.init.cod())?;
    let pairs = spec
        .objs
        .zip(&spec.objs.tail(), |a, b| Ok((a.clone(), b.clone())))?;
    let cells = s.cells().zip_indexed(&pairs, |k, cell, (t, t_next)| {
        if cell.dom().strip_prefix(t).is_none() {
            return Err(Error::PrefixMismatch {
                prefix: t.clone(),
                whole: cell.dom().clone(),
            });
        }
        if cell.cod().strip_prefix(t_next).is_none() {
            return Err(Error::TailMismatch {
                tick: k,
                expected: t_next.clone(),
            });
        }
        value_to_state(cell, t, t_next)
    })?;
    StatefulSeq::new(s.init().pair(&spec.init)?, cells)
}

/// `r_X(i) = tr_X^i(σ_{X, ○X}) : ○X -> X`, which outputs `i` and then
/// repeats its input one tick late.
pub fn delay_gate(objs: &Seq<Obj>, init: &BaseMorphism) -> Result<StatefulSeq> {
    let tag = init.tag();
    let swaps = objs.zip(&objs.tail(), |x, x_next| {
        Ok(Structural::Symmetry(x.clone(), x_next.clone()))
    })?;
    let sigma = StatefulSeq::structural(tag, &swaps)?;
    delayed_trace(&TraceSpec::new(objs.clone(), init.clone()), &sigma)
}

/// Splits `(i, s)` into a register and a stateless core:
/// `(i, s) = tr_{st(i, s)}^i(H[U s_k])`.
pub fn canonicalize(s: &StatefulSeq) -> Result<(TraceSpec, StatefulSeq)> {
    let spec = TraceSpec::new(s.state_seq()?, s.init().clone());
    let core = StatefulSeq::lift_h(s.tag(), &s.cells().map(|c| Ok(c.underlying().clone()))?)?;
    Ok((spec, core))
}
