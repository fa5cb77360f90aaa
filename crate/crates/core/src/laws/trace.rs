//! Delayed-trace equations, the failure of yanking, the single-register
//! representation, and the category laws they rest on.

use crate::base::{BaseMorphism, Structural};
use crate::caus::{self, canonicalize, compose, delayed_trace, product, StatefulSeq, TraceSpec};
use crate::error::Result;
use crate::laws::{streams, Evidence, Gen, Outcome, Runner};
use crate::obj::{Obj, Point};
use crate::seq::Seq;

/// A constant sequence for one phase, a cycle otherwise.
pub(crate) fn phased<T: Clone + Send + Sync + 'static>(items: &[T]) -> Seq<T> {
    if items.len() == 1 {
        Seq::constant(items[0].clone())
    } else {
        Seq::periodic(Vec::new(), items.to_vec())
    }
}

/// `p` phases of independently drawn objects with at least `min` slots.
pub(crate) fn phases(g: &mut Gen, p: usize, min: usize) -> Vec<Obj> {
    (0..p).map(|_| g.obj(min)).collect()
}

/// A random `(i, s) : T × X -> ○T × Y` ready to be traced along `T`.
pub(crate) fn loopable(g: &mut Gen, t: &[Obj], x: &[Obj], y: &[Obj]) -> Result<StatefulSeq> {
    let p = t.len();
    let dom: Vec<Obj> = (0..p).map(|k| t[k].times(&x[k])).collect();
    let cod: Vec<Obj> = (0..p).map(|k| t[(k + 1) % p].times(&y[k])).collect();
    let loop_dom: Vec<usize> = t.iter().map(Obj::len).collect();
    let loop_cod: Vec<usize> = (0..p).map(|k| t[(k + 1) % p].len()).collect();
    g.circuit(&dom, &cod, &loop_dom, &loop_cod)
}

pub(crate) fn circuit(g: &mut Gen, x: &[Obj], y: &[Obj]) -> Result<StatefulSeq> {
    g.circuit(x, y, &vec![0; x.len()], &vec![0; x.len()])
}

fn spec(g: &mut Gen, t: &[Obj]) -> Result<TraceSpec> {
    Ok(TraceSpec::new(phased(t), g.constant(&t[0])?))
}

fn identity(g: &Gen, objs: &Seq<Obj>) -> Result<StatefulSeq> {
    StatefulSeq::identity(g.base(), objs)
}

pub(crate) fn run(r: &mut Runner, g: &mut Gen) -> Result<()> {
    let (h, mode) = (r.horizon(), r.mode());
    for case in 0..r.cases() {
        // odd cases vary the objects from tick to tick
        let p = 1 + case % 2;
        let t = phases(g, p, 1);
        let x = phases(g, p, 0);
        let y = phases(g, p, 0);

        let s = loopable(g, &t, &x, &y)?;
        let sp = spec(g, &t)?;
        let traced = delayed_trace(&sp, &s)?;

        let outcome = (|| -> Outcome {
            let z = phases(g, p, 0);
            let post = circuit(g, &y, &z)?;
            let lhs = compose(&post, &traced)?;
            let wrapped = product(&identity(g, &phased(&t).tail())?, &post)?;
            let rhs = delayed_trace(&sp, &compose(&wrapped, &s)?)?;
            streams(&lhs, &rhs, h, mode)
        })();
        r.holds("target-naturality", case, outcome);

        let outcome = (|| -> Outcome {
            let w = phases(g, p, 0);
            let pre = circuit(g, &w, &x)?;
            let lhs = compose(&traced, &pre)?;
            let wrapped = product(&identity(g, &phased(&t))?, &pre)?;
            let rhs = delayed_trace(&sp, &compose(&s, &wrapped)?)?;
            streams(&lhs, &rhs, h, mode)
        })();
        r.holds("source-naturality", case, outcome);

        let outcome = (|| -> Outcome {
            let (w, z) = (phases(g, p, 0), phases(g, p, 0));
            let side = circuit(g, &w, &z)?;
            let lhs = product(&traced, &side)?;
            let rhs = delayed_trace(&sp, &product(&s, &side)?)?;
            streams(&lhs, &rhs, h, mode)
        })();
        r.holds("superposing", case, outcome);

        let outcome = (|| -> Outcome {
            let plain = circuit(g, &x, &y)?;
            let lhs = delayed_trace(&TraceSpec::unit(g.base())?, &plain)?;
            streams(&lhs, &plain, h, mode)
        })();
        r.holds("vanishing-unit", case, outcome);

        let outcome = (|| -> Outcome {
            // tr_V(tr_U(s)) = tr_{U×V}(s) for s : U × V × X -> ○U × ○V × Y
            let u = phases(g, p, 1);
            let v = phases(g, p, 1);
            let uv: Vec<Obj> = (0..p).map(|k| u[k].times(&v[k])).collect();
            let both = loopable(g, &uv, &x, &y)?;
            let (su, sv) = (spec(g, &u)?, spec(g, &v)?);
            let inner = delayed_trace(&su, &both)?;
            let lhs = delayed_trace(&sv, &inner)?;
            let joint = TraceSpec::new(phased(&uv), su.init.pair(&sv.init)?);
            let rhs = delayed_trace(&joint, &both)?;
            streams(&lhs, &rhs, h, mode)
        })();
        r.holds("vanishing-product", case, outcome);

        let outcome = (|| -> Outcome {
            let (spec, core) = canonicalize(&s)?;
            streams(&delayed_trace(&spec, &core)?, &s, h, mode)
        })();
        r.holds("single-register", case, outcome);

        let outcome = (|| -> Outcome {
            let (z, w) = (phases(g, p, 0), phases(g, p, 0));
            let a = circuit(g, &x, &y)?;
            let b = circuit(g, &y, &z)?;
            let c = circuit(g, &z, &w)?;
            streams(
                &compose(&c, &compose(&b, &a)?)?,
                &compose(&compose(&c, &b)?, &a)?,
                h,
                mode,
            )
        })();
        r.holds("compose-associative", case, outcome);

        let outcome = (|| -> Outcome {
            let a = circuit(g, &x, &y)?;
            let left = compose(&identity(g, &phased(&y))?, &a)?;
            let right = compose(&a, &identity(g, &phased(&x))?)?;
            Ok(streams(&left, &a, h, mode)?.or(streams(&right, &a, h, mode)?))
        })();
        r.holds("identity-unital", case, outcome);

        // yanking: tr_X^i(σ) is a delay, not the identity
        // compared with the identity, so the object is the same at every tick
        let xs = vec![g.obj(1); p];
        let seq = phased(&xs);
        let base = g.base();
        let i = g.constant(&xs[0])?;
        let swaps = seq.zip(&seq.tail(), |a, b| {
            Ok(Structural::Symmetry(a.clone(), b.clone()))
        })?;
        let yank = || {
            delayed_trace(
                &TraceSpec::new(seq.clone(), i.clone()),
                &StatefulSeq::structural(base, &swaps)?,
            )
        };
        let outcome =
            (|| -> Outcome { streams(&yank()?, &StatefulSeq::identity(base, &seq)?, h, mode) })();
        r.fails("yanking", case, outcome, |e| {
            matches!(e, Evidence::Truncation { tick: 0, .. })
        });

        let outcome = (|| -> Outcome {
            let yank = yank()?;
            let inputs = g.inputs(&yank, h + 1)?;
            delay_semantics(&yank, &i, &inputs)
        })();
        r.holds("yanking-is-delay", case, outcome);
    }
    Ok(())
}

/// Output `i` first, then each input one tick late.
fn delay_semantics(s: &StatefulSeq, i: &BaseMorphism, inputs: &[Point]) -> Outcome {
    let got = caus::run(s, inputs)?;
    let mut want = vec![i.eval(&s.tag().empty_point())?];
    want.extend(inputs.iter().take(inputs.len().saturating_sub(1)).cloned());
    Ok((got != want).then(|| Evidence::Prefix {
        prefix: inputs.to_vec(),
        left: got,
        right: want,
    }))
}
