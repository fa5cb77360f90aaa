//! End-to-end causality of compiled circuits: random expressions are
//! compiled, run, and run again with one input changed; nothing before the
//! change may move. Printing and re-parsing each expression is checked on
//! the way.

use crate::base::{Activation, BaseTag};
use crate::caus;
use crate::dsl::{compile, parse, pretty, Expr, ExprKind, Prim};
use crate::error::{Error, Result};
use crate::laws::{Evidence, Gen, Outcome, Runner};
use crate::obj::{Obj, Point};
use crate::rational::Rational;

const MAX_TICKS: usize = 8;

/// A leaf `dom -> cod`; the first `looped` inputs enter the first `looped`
/// outputs affinely so that values stay small over many ticks.
fn leaf(g: &mut Gen, dom: &Obj, cod: &Obj, looped: usize) -> Expr {
    match g.base() {
        BaseTag::Fin => {
            let rows = dom.cardinality().unwrap_or(1);
            let mut entries = Vec::with_capacity(rows * cod.len());
            for _ in 0..rows {
                for s in cod.slots() {
                    entries.push(g.below(s.cardinality().unwrap_or(1) as usize) as u32);
                }
            }
            Expr::new(ExprKind::Table {
                dom: dom.clone(),
                cod: cod.clone(),
                entries,
            })
        }
        base => {
            let comps = (0..cod.len())
                .map(|j| g.poly(dom.len(), looped, j < looped))
                .collect();
            let p = Expr::new(ExprKind::Prim(Prim::Poly {
                nvars: dom.len(),
                comps,
            }));
            if base == BaseTag::Smooth && looped == 0 && g.chance(0.3) {
                Expr::comp(
                    Expr::new(ExprKind::Prim(Prim::Act(
                        Activation::Tanh,
                        Some(cod.clone()),
                    ))),
                    p,
                )
            } else {
                p
            }
        }
    }
}

fn literal(g: &mut Gen, obj: &Obj) -> Vec<Rational> {
    obj.slots()
        .iter()
        .map(|s| match s.cardinality() {
            Some(m) => Rational::from_int(g.below(m as usize) as i64),
            None => Rational::from_int(g.below(5) as i64 - 2),
        })
        .collect()
}

/// A random well-typed expression `dom -> cod`.
fn expr(g: &mut Gen, dom: &Obj, cod: &Obj, depth: usize) -> Expr {
    let choice = if depth == 0 { 0 } else { g.below(4) };
    match choice {
        1 => {
            let mid = g.obj(1);
            let f = expr(g, dom, &mid, depth - 1);
            let h = expr(g, &mid, cod, depth - 1);
            Expr::comp(h, f)
        }
        2 if dom.len() >= 2 && cod.len() >= 2 => {
            let (d1, d2) = dom.split_at(1 + g.below(dom.len() - 1));
            let (c1, c2) = cod.split_at(1 + g.below(cod.len() - 1));
            Expr::prod(expr(g, &d1, &c1, depth - 1), expr(g, &d2, &c2, depth - 1))
        }
        3 => {
            // the register feeds an affine leaf behind an arbitrary sub-circuit
            let state = g.obj(1);
            let mid = g.obj(1);
            let inner = expr(g, dom, &mid, depth - 1);
            let wrapped = Expr::prod(Expr::new(ExprKind::Id(Some(state.clone()))), inner);
            let core = leaf(g, &state.times(&mid), &state.times(cod), state.len());
            let init = literal(g, &state);
            Expr::dtr(init, state, Expr::comp(core, wrapped))
        }
        _ => leaf(g, dom, cod, 0),
    }
}

fn check(g: &mut Gen) -> Outcome {
    let (dom, cod) = (g.obj(1), g.obj(1));
    let e = expr(g, &dom, &cod, 3);
    let reparsed = parse(&pretty(&e)).map_err(|d| Error::Invalid(d.to_string()))?;
    if reparsed != e {
        return Ok(Some(Evidence::Error {
            message: format!("`{}` does not read back as itself", pretty(&e)),
        }));
    }
    let s =
        compile(&e, g.base()).map_err(|d| Error::Invalid(format!("{} in `{}`", d, pretty(&e))))?;
    let n = 1 + g.below(MAX_TICKS);
    let inputs = g.inputs(&s, n)?;
    let at = g.below(n);
    let mut changed = inputs.clone();
    for _ in 0..8 {
        changed[at] = g.point(&dom);
        if changed[at] != inputs[at] {
            break;
        }
    }
    let (before, after): (Vec<Point>, Vec<Point>) =
        (caus::run(&s, &inputs)?, caus::run(&s, &changed)?);
    Ok((before[..at] != after[..at]).then_some(Evidence::Prefix {
        prefix: changed,
        left: before,
        right: after,
    }))
}

pub(crate) fn run(r: &mut Runner, g: &mut Gen) -> Result<()> {
    for case in 0..r.cases() {
        let outcome = check(g);
        r.holds("causal-outputs", case, outcome);
    }
    Ok(())
}
