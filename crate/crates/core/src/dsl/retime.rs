//! Retiming: sliding stateless logic backwards across a register.
//!
//! `(dtr u U (comp s (prod g id)))`, where `g : U -> T` is stateless and
//! `s : T × X -> U × Y`, becomes `(dtr g(u) T (comp (prod g (id Y)) s))`.
//! The register now holds `g`'s output instead of its input, so its initial
//! value is pushed through `g`.

use crate::base::BaseTag;
use crate::dsl::compile::{build, literal_point};
use crate::dsl::typecheck::{elaborate, Node, Typed};
use crate::dsl::{DslError, DslResult, Expr, ExprKind};
use crate::error::Error;
use crate::obj::Point;
use crate::rational::Rational;

/// Applies the rewrite at every matching trace, innermost first.
pub fn retime(e: &Expr, base: BaseTag) -> DslResult<Expr> {
    let t = elaborate(e, base, None)?;
    go(&t, base)
}

fn go(t: &Typed, base: BaseTag) -> DslResult<Expr> {
    let span = t.expr.span;
    let rebuilt = match &t.node {
        Node::Leaf(_) => return Ok(t.expr.clone()),
        Node::Comp(g, f) => ExprKind::Comp(Box::new(go(g, base)?), Box::new(go(f, base)?)),
        Node::Prod(a, b) => ExprKind::Prod(Box::new(go(a, base)?), Box::new(go(b, base)?)),
        Node::Diff(inner) => ExprKind::Diff(Box::new(go(inner, base)?)),
        Node::Dtr { init, state, body } => {
            if let Some(e) = slide(init, state, body, base)? {
                return Ok(Expr { kind: e.kind, span });
            }
            ExprKind::Dtr {
                init: init.clone(),
                state: state.clone(),
                body: Box::new(go(body, base)?),
            }
        }
    };
    Ok(Expr {
        kind: rebuilt,
        span,
    })
}

fn is_identity(t: &Typed) -> bool {
    matches!(t.expr.kind, ExprKind::Id(_))
}

fn slide(
    init: &[Rational],
    state: &crate::obj::Obj,
    body: &Typed,
    base: BaseTag,
) -> DslResult<Option<Expr>> {
    let Node::Comp(s, pre) = &body.node else {
        return Ok(None);
    };
    let Node::Prod(g, id) = &pre.node else {
        return Ok(None);
    };
    if !is_identity(id) || !g.expr.is_stateless() || &g.dom != state {
        return Ok(None);
    }
    let y = s.cod.strip_prefix(state).ok_or_else(|| {
        DslError::shape(
            body.expr.span,
            format!("body does not return the state {:#} first", state),
        )
    })?;
    let g_seq = build(g, base)?;
    let u = literal_point(init, state, base).map_err(DslError::Core)?;
    let moved = g_seq.cell(0)?.underlying().eval(&u)?;
    let new_init = match moved {
        Point::Rat(v) => v,
        Point::Real(v) => v
            .iter()
            .map(|x| {
                Rational::from_f64(*x)
                    .ok_or_else(|| Error::Invalid(format!("non-finite value {}", x)))
            })
            .collect::<crate::error::Result<_>>()?,
        Point::Fin(v) => v.iter().map(|x| Rational::from_int(*x as i64)).collect(),
    };
    let g_src = go(g, base)?;
    let s_src = go(s, base)?;
    let new_body = Expr::comp(Expr::prod(g_src, Expr::new(ExprKind::Id(Some(y)))), s_src);
    Ok(Some(Expr::dtr(new_init, g.cod.clone(), new_body)))
}
