use crate::base::{BaseMorphism, BaseTag, FinMap, SmoothView};
use crate::caus::{canonicalize, seq_d};
use crate::dsl::compile::compile;
use crate::dsl::{DslError, DslResult, Expr, ExprKind, Prim};
use crate::error::Error;
use crate::obj::{Obj, Point};
use crate::rational::Rational;

fn rat(x: f64) -> crate::error::Result<Rational> {
    Rational::from_f64(x).ok_or_else(|| Error::Invalid(format!("non-finite coefficient {}", x)))
}

fn rats(xs: &[f64]) -> crate::error::Result<Vec<Rational>> {
    xs.iter().map(|x| rat(*x)).collect()
}

/// A stateless circuit computing exactly `m`.
pub fn reify(m: &BaseMorphism) -> crate::error::Result<Expr> {
    Ok(Expr::new(match m {
        BaseMorphism::Poly(p) => match p.as_wiring() {
            Some(sources) => ExprKind::Wire {
                dom: p.dom().clone(),
                sources,
            },
            None => ExprKind::Prim(Prim::Poly {
                nvars: p.dom().len(),
                comps: p.comps().to_vec(),
            }),
        },
        BaseMorphism::Smooth(s) => match s.view() {
            SmoothView::Wiring(sources) => ExprKind::Wire {
                dom: s.dom().clone(),
                sources: sources.to_vec(),
            },
            SmoothView::Plus(n) => ExprKind::Add(Some(Obj::real(n))),
            SmoothView::Affine { rows, cols, w, b } => ExprKind::Prim(Prim::Affine {
                rows: (0..rows)
                    .map(|i| rats(&w[i * cols..(i + 1) * cols]))
                    .collect::<crate::error::Result<_>>()?,
                bias: rats(b)?,
            }),
            SmoothView::Poly(p) => ExprKind::Prim(Prim::Poly {
                nvars: p.dom().len(),
                comps: p.comps().to_vec(),
            }),
            SmoothView::Pointwise(a, n) => ExprKind::Prim(Prim::Act(a, Some(Obj::real(n)))),
            SmoothView::Mul(n) => ExprKind::Prim(Prim::Mul(Some(Obj::real(n)))),
            SmoothView::Const(v) => ExprKind::Const {
                value: rats(v)?,
                obj: Some(Obj::real(v.len())),
            },
            SmoothView::Compose(g, f) => ExprKind::Comp(
                Box::new(reify(&BaseMorphism::Smooth(g.clone()))?),
                Box::new(reify(&BaseMorphism::Smooth(f.clone()))?),
            ),
            SmoothView::Product(f, h) => ExprKind::Prod(
                Box::new(reify(&BaseMorphism::Smooth(f.clone()))?),
                Box::new(reify(&BaseMorphism::Smooth(h.clone()))?),
            ),
        },
        BaseMorphism::Fin(t) => {
            let mut entries = Vec::new();
            for x in FinMap::points(t.dom()) {
                entries.extend(t.eval(&x));
            }
            ExprKind::Table {
                dom: t.dom().clone(),
                cod: t.cod().clone(),
                entries,
            }
        }
    }))
}

/// The derivative of a circuit as a circuit in canonical form: one delayed
/// trace around a stateless core.
///
/// The core is the per-tick derivative of the original core; its state is
/// the original state doubled, tangent register first and starting at zero.
/// A stateless circuit yields just the core.
pub fn derivative(e: &Expr, base: BaseTag) -> DslResult<Expr> {
    let s = compile(e, base)?;
    let (spec, core) = canonicalize(&seq_d(&s)?)?;
    if !core.is_regular() {
        return Err(DslError::Core(Error::UnsupportedStructure(
            "derivative of a time-varying circuit".into(),
        )));
    }
    let state = spec.objs.at(0)?;
    let body = reify(core.cell(0)?.underlying())?;
    if state.is_unit() {
        return Ok(body);
    }
    let init = match spec.init.eval(&base.empty_point())? {
        Point::Rat(v) => v,
        Point::Real(v) => rats(&v)?,
        Point::Fin(_) => return Err(DslError::Core(Error::NoDifferential(BaseTag::Fin))),
    };
    Ok(Expr::dtr(init, state, body))
}
