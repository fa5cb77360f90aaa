use crate::base::{BaseMorphism, BaseTag, FinMap, Poly, PolyMap, SmoothMap};
use crate::caus::{delayed_trace, product, seq_d, StatefulSeq, TraceSpec};
use crate::dsl::typecheck::{elaborate, Leaf, Node, Typed};
use crate::dsl::{DslError, DslResult, Expr};
use crate::error::Error;
use crate::obj::{Obj, Point};
use crate::rational::Rational;

/// Compiles a circuit; the result has constant cells.
pub fn compile(e: &Expr, base: BaseTag) -> DslResult<StatefulSeq> {
    let t = elaborate(e, base, None)?;
    build(&t, base)
}

/// Compiles a circuit whose input object is fixed in advance.
pub fn compile_with_dom(e: &Expr, base: BaseTag, dom: &Obj) -> DslResult<StatefulSeq> {
    let t = elaborate(e, base, Some(dom))?;
    build(&t, base)
}

/// A numeric literal as a point of `obj` in the given base.
pub fn literal_point(values: &[Rational], obj: &Obj, base: BaseTag) -> crate::error::Result<Point> {
    let p = match base {
        BaseTag::Poly => Point::Rat(values.to_vec()),
        BaseTag::Smooth => Point::Real(values.iter().map(Rational::to_f64).collect()),
        BaseTag::Fin => Point::Fin(
            values
                .iter()
                .map(|v| {
                    v.to_i64()
                        .and_then(|i| u32::try_from(i).ok())
                        .ok_or_else(|| {
                            Error::ShapeMismatch(format!("{} is not an element of a finite set", v))
                        })
                })
                .collect::<crate::error::Result<Vec<_>>>()?,
        ),
    };
    p.check_against(obj)?;
    Ok(p)
}

pub(crate) fn build(t: &Typed, base: BaseTag) -> DslResult<StatefulSeq> {
    let span = t.expr.span;
    let located = |e: Error| match e {
        Error::ShapeMismatch(m) | Error::UnsupportedStructure(m) | Error::Invalid(m) => {
            DslError::type_error(span, m)
        }
        other => DslError::Core(other),
    };
    match &t.node {
        Node::Leaf(leaf) => {
            let m = leaf_morphism(leaf, base).map_err(located)?;
            Ok(StatefulSeq::lift_h0(&m)?)
        }
        Node::Comp(g, f) => Ok(build(g, base)?.after(&build(f, base)?)?),
        Node::Prod(a, b) => Ok(product(&build(a, base)?, &build(b, base)?)?),
        Node::Dtr { init, state, body } => {
            let point = literal_point(init, state, base).map_err(located)?;
            let init = BaseMorphism::constant(base, state, &point)?;
            Ok(delayed_trace(
                &TraceSpec::constant(state.clone(), init),
                &build(body, base)?,
            )?)
        }
        Node::Diff(inner) => Ok(seq_d(&build(inner, base)?)?),
    }
}

fn affine_polys(rows: &[Vec<Rational>], bias: &[Rational]) -> Vec<Poly> {
    rows.iter()
        .zip(bias)
        .map(|(row, b)| {
            row.iter()
                .enumerate()
                .fold(Poly::constant(b.clone()), |acc, (j, w)| {
                    acc.add(&Poly::var(j as u32).scale(w))
                })
        })
        .collect()
}

pub(crate) fn leaf_morphism(leaf: &Leaf, base: BaseTag) -> crate::error::Result<BaseMorphism> {
    let unsupported =
        |what: &str| Error::UnsupportedStructure(format!("{} in the {} base", what, base));
    Ok(match leaf {
        Leaf::Structural(s) => BaseMorphism::structural(base, s.clone())?,
        Leaf::Const(obj, value) => {
            BaseMorphism::constant(base, obj, &literal_point(value, obj, base)?)?
        }
        Leaf::Wire(dom, cod, sources) => BaseMorphism::wiring(base, dom, cod, sources)?,
        Leaf::Table(dom, cod, entries) => match base {
            BaseTag::Fin => {
                BaseMorphism::Fin(FinMap::table(dom.clone(), cod.clone(), entries.clone())?)
            }
            _ => return Err(unsupported("lookup tables")),
        },
        Leaf::Act(a, n) => match base {
            BaseTag::Smooth => BaseMorphism::Smooth(SmoothMap::activation(*a, *n)),
            _ => return Err(unsupported(a.name())),
        },
        Leaf::Mul(n) => {
            let comps: Vec<Poly> = (0..*n as u32)
                .map(|i| Poly::var(i).mul(&Poly::var(i + *n as u32)))
                .collect();
            match base {
                BaseTag::Poly => BaseMorphism::Poly(PolyMap::new(Obj::real(2 * n), comps)?),
                BaseTag::Smooth => BaseMorphism::Smooth(SmoothMap::mul(*n)),
                BaseTag::Fin => return Err(unsupported("mul")),
            }
        }
        Leaf::Affine { rows, bias } => {
            let cols = rows.first().map_or(0, Vec::len);
            match base {
                BaseTag::Poly => {
                    BaseMorphism::Poly(PolyMap::new(Obj::real(cols), affine_polys(rows, bias))?)
                }
                BaseTag::Smooth => {
                    let w: Vec<Vec<f64>> = rows
                        .iter()
                        .map(|r| r.iter().map(Rational::to_f64).collect())
                        .collect();
                    let b = bias.iter().map(Rational::to_f64).collect();
                    BaseMorphism::Smooth(
                        SmoothMap::affine(&w, b)
                            .ok_or_else(|| Error::ShapeMismatch("ragged affine matrix".into()))?,
                    )
                }
                BaseTag::Fin => return Err(unsupported("affine")),
            }
        }
        Leaf::Poly { nvars, comps } => {
            let p = PolyMap::new(Obj::real(*nvars), comps.clone())?;
            match base {
                BaseTag::Poly => BaseMorphism::Poly(p),
                BaseTag::Smooth => BaseMorphism::Smooth(SmoothMap::poly(p)),
                BaseTag::Fin => return Err(unsupported("polynomials")),
            }
        }
    })
}
