//! Sliding a causal morphism around a delayed trace, which changes the
//! register's initial value, and the retiming rule for delay gates.

use crate::base::BaseMorphism;
use crate::caus::{self, compose, delay_gate, delayed_trace, product, StatefulSeq, TraceSpec};
use crate::error::Result;
use crate::laws::trace::{phased, phases};
use crate::laws::{streams, Evidence, Gen, Outcome, Runner};
use crate::obj::Obj;
use crate::seq::Seq;

struct Instance {
    /// `(i, s) : T × X -> ○U × Y`
    s: StatefulSeq,
    /// `(j, g) : U -> T`
    g: StatefulSeq,
    u: Vec<Obj>,
    t: Vec<Obj>,
    x: Vec<Obj>,
    y: Vec<Obj>,
    /// Register contents `u : 1 -> U_0`.
    u0: BaseMorphism,
}

fn instance(gen: &mut Gen, p: usize) -> Result<Instance> {
    let (u, t) = (phases(gen, p, 1), phases(gen, p, 1));
    let (x, y) = (phases(gen, p, 0), phases(gen, p, 0));
    let dom: Vec<Obj> = (0..p).map(|k| t[k].times(&x[k])).collect();
    let cod: Vec<Obj> = (0..p).map(|k| u[(k + 1) % p].times(&y[k])).collect();
    let t_len: Vec<usize> = t.iter().map(Obj::len).collect();
    let next_u: Vec<usize> = (0..p).map(|k| u[(k + 1) % p].len()).collect();
    let s = gen.circuit(&dom, &cod, &t_len, &next_u)?;
    // everything g does is inside the loop
    let u_len: Vec<usize> = u.iter().map(Obj::len).collect();
    let g = gen.circuit(&u, &t, &u_len, &t_len)?;
    let u0 = gen.constant(&u[0])?;
    Ok(Instance {
        s,
        g,
        u,
        t,
        x,
        y,
        u0,
    })
}

/// `⟨j', u'⟩ = U g_0 ∘ ⟨j, u⟩`, split into its two parts.
pub(crate) fn slide_init(
    g: &StatefulSeq,
    u0: &BaseMorphism,
) -> Result<(BaseMorphism, BaseMorphism)> {
    let tag = g.tag();
    let cell = g.cell(0)?;
    let moved = cell.underlying().after(&g.init().pair(u0)?)?;
    let point = moved.eval(&tag.empty_point())?;
    let (j, u) = point.split_at(cell.nxt().len());
    Ok((
        BaseMorphism::constant(tag, cell.nxt(), &j)?,
        BaseMorphism::constant(tag, cell.cod(), &u)?,
    ))
}

fn sides(inst: &Instance) -> Result<(StatefulSeq, StatefulSeq)> {
    let tag = inst.s.tag();
    let ident = |objs: &[Obj]| StatefulSeq::identity(tag, &phased(objs));
    let lhs = delayed_trace(
        &TraceSpec::new(phased(&inst.u), inst.u0.clone()),
        &compose(&inst.s, &product(&inst.g, &ident(&inst.x)?)?)?,
    )?;
    let (j2, u2) = slide_init(&inst.g, &inst.u0)?;
    let shifted = StatefulSeq::new(j2, inst.g.cells().tail())?;
    let rhs = delayed_trace(
        &TraceSpec::new(phased(&inst.t), u2),
        &compose(&product(&shifted, &ident(&inst.y)?)?, &inst.s)?,
    )?;
    Ok((lhs, rhs))
}

/// The slid register and state, checked by simply running `g` one tick on
/// `u` and then on further inputs.
fn check_slide(gen: &mut Gen, inst: &Instance, ticks: usize) -> Outcome {
    let tag = inst.g.tag();
    let (j2, u2) = slide_init(&inst.g, &inst.u0)?;
    let u_point = inst.u0.eval(&tag.empty_point())?;
    let mut inputs = vec![u_point];
    for k in 1..=ticks {
        inputs.push(gen.point(&inst.u[k % inst.u.len()]));
    }
    let direct = caus::run(&inst.g, &inputs)?;
    let shifted = StatefulSeq::new(j2, inst.g.cells().tail())?;
    let mut slid = vec![u2.eval(&tag.empty_point())?];
    slid.extend(caus::run(&shifted, &inputs[1..])?);
    Ok((direct != slid).then_some(Evidence::Prefix {
        prefix: inputs,
        left: slid,
        right: direct,
    }))
}

pub(crate) fn run(r: &mut Runner, gen: &mut Gen) -> Result<()> {
    let (h, mode) = (r.horizon(), r.mode());
    for case in 0..r.cases() {
        for (law, p) in [("regular-dinaturality", 1), ("dinaturality", 2)] {
            let inst = instance(gen, p)?;
            let outcome = sides(&inst).and_then(|(lhs, rhs)| streams(&lhs, &rhs, h, mode));
            r.holds(law, case, outcome);
            let outcome = check_slide(gen, &inst, h);
            r.holds("initial-state-update", case, outcome);
        }

        // H f ∘ r_X(i) = r_Y(f_0 ∘ i) ∘ H(○f), with f varying per tick
        let outcome = (|| -> Outcome {
            let p = 1 + case % 2;
            let (x, y) = (phases(gen, p, 1), phases(gen, p, 0));
            let fs: Vec<BaseMorphism> = (0..p)
                .map(|k| gen.morphism(&x[k], &y[k]))
                .collect::<Result<_>>()?;
            let f = if p == 1 {
                Seq::constant(fs[0].clone())
            } else {
                Seq::periodic(Vec::new(), fs.clone())
            };
            let i = gen.constant(&x[0])?;
            let tag = gen.base();
            let lhs = compose(
                &StatefulSeq::lift_h(tag, &f)?,
                &delay_gate(&phased(&x), &i)?,
            )?;
            let rhs = compose(
                &delay_gate(&phased(&y), &fs[0].after(&i)?)?,
                &StatefulSeq::lift_h(tag, &f.tail())?,
            )?;
            streams(&lhs, &rhs, h, mode)
        })();
        r.holds("retiming", case, outcome);
    }
    Ok(())
}
