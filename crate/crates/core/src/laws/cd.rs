//! The Cartesian differential axioms for the sequence derivative, checked
//! extensionally on random circuits, with shim certificates where the
//! states of the two sides are related by a fixed rearrangement.

use crate::base::{BaseMorphism, BaseTag, Source, Structural};
use crate::caus::{compose, ext_equal, product, seq_d, shim_check, StatefulSeq, Verdict};
use crate::error::Result;
use crate::laws::trace::{circuit, phased, phases};
use crate::laws::{streams, Evidence, Gen, Outcome, Runner};
use crate::obj::Obj;
use crate::seq::Seq;
use crate::square::{vcomp, TwoCell};

/// The stateless sequence `x_k ↦ make(x_k)` over the given phases.
fn lifted(
    tag: BaseTag,
    xs: &[Obj],
    make: impl Fn(&Obj) -> Result<BaseMorphism>,
) -> Result<StatefulSeq> {
    let fs: Vec<BaseMorphism> = xs.iter().map(make).collect::<Result<_>>()?;
    StatefulSeq::lift_h(tag, &phased(&fs))
}

fn st(tag: BaseTag, kind: Structural) -> Result<BaseMorphism> {
    BaseMorphism::structural(tag, kind)
}

fn certificate(holds: bool, what: &str) -> Option<Evidence> {
    (!holds).then(|| Evidence::Error {
        message: format!("{} does not certify the equation", what),
    })
}

pub(crate) fn run(r: &mut Runner, g: &mut Gen) -> Result<()> {
    let (h, mode) = (r.horizon(), r.mode());
    let tag = g.base();
    for case in 0..r.cases() {
        let p = 1 + case % 2;
        let (x, y) = (phases(g, p, 1), phases(g, p, 1));
        let f = circuit(g, &x, &y)?;
        let df = seq_d(&f)?;

        let outcome = (|| -> Outcome {
            let kinds: [fn(&Obj, &Obj) -> Structural; 6] = [
                |a, _| Structural::Id(a.clone()),
                |a, b| Structural::Symmetry(a.clone(), b.clone()),
                |a, _| Structural::Terminal(a.clone()),
                |a, _| Structural::Diagonal(a.clone()),
                |a, _| Structural::Plus(a.clone()),
                |a, _| Structural::Zero(a.clone()),
            ];
            for kind in kinds {
                let s = lifted(tag, &x, |a| st(tag, kind(a, &y[0])))?;
                let dead = lifted(tag, &x, |a| {
                    let m = st(tag, kind(a, &y[0]))?;
                    BaseMorphism::terminal(tag, m.dom())
                })?;
                if let Some(e) = streams(&seq_d(&s)?, &product(&s, &dead)?, h, mode)? {
                    return Ok(Some(e));
                }
            }
            Ok(None)
        })();
        r.holds("cd1-structural", case, outcome);

        let outcome = (|| -> Outcome {
            let pad = lifted(tag, &x, |a| {
                st(tag, Structural::Zero(a.clone()))?.product(&BaseMorphism::id(tag, a)?)
            })?;
            let ms: Vec<BaseMorphism> = (0..p)
                .map(|k| {
                    st(tag, Structural::Zero(y[k].clone()))?
                        .after(&BaseMorphism::terminal(tag, &x[k])?)
                })
                .collect::<Result<_>>()?;
            let kill = StatefulSeq::lift_h(tag, &phased(&ms))?;
            streams(&compose(&df, &pad)?, &kill, h, mode)
        })();
        r.holds("cd2-zero", case, outcome);

        let outcome = (|| -> Outcome {
            let plus = lifted(tag, &x, |a| {
                st(tag, Structural::Plus(a.clone()))?.product(&BaseMorphism::id(tag, a)?)
            })?;
            let lhs = compose(&df, &plus)?;
            let rhs = cd3_rhs(tag, &df, &x, &y)?;
            streams(&lhs, &rhs, h, mode)
        })();
        r.holds("cd3-additive", case, outcome);

        // (i, [c_k]) = (i, [b_k^v ⨾ c_k]) for idempotent b_k = α ∘ β fixing i
        let outcome = (|| -> Outcome {
            let rhs = cd3_rhs(tag, &df, &x, &y)?;
            let squash = f.state_seq()?.map(move |s| {
                st(tag, Structural::Alpha(s.clone()))?.after(&st(tag, Structural::Beta(s.clone()))?)
            })?;
            for k in 0..squash.horizon_or(h) {
                let b = squash.at(k)?;
                if !b.after(&b)?.equal(&b, mode)? {
                    return Ok(certificate(false, "a non-idempotent α ∘ β"));
                }
            }
            if !squash.at(0)?.after(rhs.init())?.equal(rhs.init(), mode)? {
                return Ok(certificate(false, "α ∘ β moving the initial state"));
            }
            let cells = rhs
                .cells()
                .zip(&squash, |c, b| vcomp(&TwoCell::lift_v(b), c))?;
            let squashed = StatefulSeq::new(rhs.init().clone(), cells)?;
            streams(&squashed, &rhs, h, mode)
        })();
        r.holds("cd3-idempotent-shim", case, outcome);

        let outcome = (|| -> Outcome {
            let z = phases(g, p, 0);
            let k = circuit(g, &y, &z)?;
            let lhs = seq_d(&compose(&k, &f)?)?;
            let copy = lifted(tag, &x, |a| {
                BaseMorphism::id(tag, a)?.product(&st(tag, Structural::Diagonal(a.clone()))?)
            })?;
            let rhs = compose(&seq_d(&k)?, &compose(&product(&df, &f)?, &copy)?)?;
            if let Some(e) = streams(&lhs, &rhs, h, mode)? {
                return Ok(Some(e));
            }
            let shim = f.state_seq()?.zip(&k.state_seq()?, move |s, t| {
                st(tag, Structural::Gamma(s.clone(), t.clone()))
            })?;
            Ok(certificate(
                shim_check(&lhs, &rhs, &shim, h, mode)?,
                "the γ shim",
            ))
        })();
        r.holds("cd4-chain-rule", case, outcome);

        let outcome = (|| -> Outcome {
            let (v, w) = (phases(g, p, 0), phases(g, p, 0));
            let k = circuit(g, &v, &w)?;
            let lhs = seq_d(&product(&f, &k)?)?;
            let ms: Vec<BaseMorphism> = (0..p)
                .map(|i| st(tag, Structural::Delta(x[i].clone(), v[i].clone())))
                .collect::<Result<_>>()?;
            let rhs = compose(
                &product(&df, &seq_d(&k)?)?,
                &StatefulSeq::lift_h(tag, &phased(&ms))?,
            )?;
            if let Some(e) = streams(&lhs, &rhs, h, mode)? {
                return Ok(Some(e));
            }
            let shim = f.state_seq()?.zip(&k.state_seq()?, move |s, u| {
                st(tag, Structural::Delta(s.clone(), u.clone()))
            })?;
            Ok(certificate(
                shim_check(&lhs, &rhs, &shim, h, mode)?,
                "the δ shim",
            ))
        })();
        r.holds("cd5-product", case, outcome);

        let ddf = seq_d(&df)?;
        let outcome = (|| -> Outcome {
            let zeta = lifted(tag, &x, |a| st(tag, Structural::Zeta(a.clone())))?;
            streams(&compose(&ddf, &zeta)?, &df, h, mode)
        })();
        r.holds("cd6-linear-in-tangent", case, outcome);

        let outcome = (|| -> Outcome {
            let swap = lifted(tag, &x, |a| {
                st(tag, Structural::Delta(a.clone(), a.clone()))
            })?;
            streams(&compose(&ddf, &swap)?, &ddf, h, mode)
        })();
        r.holds("cd7-symmetry", case, outcome);

        let outcome = well_defined(g, &f, h, mode);
        r.holds("well-defined", case, outcome);
    }
    Ok(())
}

/// `+_Y ∘ (seqD f × seqD f) ∘ α_X`
fn cd3_rhs(tag: BaseTag, df: &StatefulSeq, x: &[Obj], y: &[Obj]) -> Result<StatefulSeq> {
    let alpha = lifted(tag, x, |a| st(tag, Structural::Alpha(a.clone())))?;
    let plus = lifted(tag, y, |b| st(tag, Structural::Plus(b.clone())))?;
    compose(&plus, &compose(&product(df, df)?, &alpha)?)
}

/// A copy of `f` whose states are stored in a shuffled order, with the
/// shuffle as shim. Both the copy and its derivative must agree with the
/// original.
fn well_defined(
    g: &mut Gen,
    f: &StatefulSeq,
    h: usize,
    mode: crate::base::EqualityMode,
) -> Outcome {
    let tag = f.tag();
    let period = f.cells().horizon_or(h).max(1);
    let mut perms = Vec::with_capacity(period);
    for k in 0..period {
        let n = f.cell(k)?.prv().len();
        let mut idx: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            idx.swap(i, g.below(i + 1));
        }
        perms.push(idx);
    }
    let stab = f.cells().stabilization();
    let shim_at = {
        let f = f.clone();
        let perms = perms.clone();
        move |k: usize, inverse: bool| -> Result<BaseMorphism> {
            let s = f.cell(k)?.prv().clone();
            let idx = &perms[k % perms.len()];
            let sources: Vec<Source> = if inverse {
                (0..idx.len())
                    .map(|i| Source::Slot(idx.iter().position(|&j| j == i).expect("permutation")))
                    .collect()
            } else {
                idx.iter().map(|&j| Source::Slot(j)).collect()
            };
            BaseMorphism::wiring(tag, &s, &s, &sources)
        }
    };
    // the shuffle must repeat with the cells for the descriptors to stay finite
    if stab.is_none_or(|s| s.offset != 0) {
        return Ok(None);
    }
    let shims: Vec<BaseMorphism> = (0..period)
        .map(|k| shim_at(k, false))
        .collect::<Result<_>>()?;
    let inverses: Vec<BaseMorphism> = (0..period)
        .map(|k| shim_at(k, true))
        .collect::<Result<_>>()?;
    let mut cells = Vec::with_capacity(period);
    for k in 0..period {
        let conj = vcomp(
            &vcomp(&TwoCell::lift_v(&inverses[k]), &f.cell(k)?)?,
            &TwoCell::lift_v(&shims[(k + 1) % period]),
        )?;
        cells.push(conj);
    }
    let shuffled = StatefulSeq::new(shims[0].after(f.init())?, phased(&cells))?;
    let b: Seq<BaseMorphism> = phased(&shims);
    if !shim_check(f, &shuffled, &b, h, mode)? {
        return Ok(certificate(false, "the state shuffle"));
    }
    if let Verdict::CounterexampleAt(_) = ext_equal(f, &shuffled, h, mode)? {
        return streams(f, &shuffled, h, mode);
    }
    streams(&seq_d(f)?, &seq_d(&shuffled)?, h, mode)
}
