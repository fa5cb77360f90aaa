//! Elaboration: every node gets concrete domain and codomain objects.
//!
//! Domains flow from the inputs: `(comp g f)` types `f` against the incoming
//! object and then `g` against the codomain of `f`. Bare structural atoms take
//! whatever object arrives; when nothing arrives they fall back to the base's
//! default scalar (`R1` on the real bases, none on the finite base).

use crate::base::{Activation, BaseTag, Poly, Source, Structural};
use crate::dsl::{DslError, DslResult, Expr, ExprKind, Prim, Span};
use crate::obj::Obj;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub(crate) enum Leaf {
    Structural(Structural),
    Act(Activation, usize),
    Mul(usize),
    Affine {
        rows: Vec<Vec<Rational>>,
        bias: Vec<Rational>,
    },
    Poly {
        nvars: usize,
        comps: Vec<Poly>,
    },
    Const(Obj, Vec<Rational>),
    Wire(Obj, Obj, Vec<Source>),
    Table(Obj, Obj, Vec<u32>),
}

#[derive(Debug, Clone)]
pub(crate) enum Node {
    Leaf(Leaf),
    Comp(Box<Typed>, Box<Typed>),
    Prod(Box<Typed>, Box<Typed>),
    Dtr {
        init: Vec<Rational>,
        state: Obj,
        body: Box<Typed>,
    },
    Diff(Box<Typed>),
}

#[derive(Debug, Clone)]
pub(crate) struct Typed {
    pub node: Node,
    pub dom: Obj,
    pub cod: Obj,
    /// The source form this node was elaborated from.
    pub expr: Expr,
}

/// Domain and codomain of a circuit, with inputs inferred where needed.
pub fn typecheck(e: &Expr, base: BaseTag) -> DslResult<(Obj, Obj)> {
    let t = elaborate(e, base, None)?;
    Ok((t.dom, t.cod))
}

/// Like [`typecheck`], with the input object fixed.
pub fn typecheck_with_dom(e: &Expr, base: BaseTag, dom: &Obj) -> DslResult<(Obj, Obj)> {
    let t = elaborate(e, base, Some(dom))?;
    Ok((t.dom, t.cod))
}

pub(crate) fn elaborate(e: &Expr, base: BaseTag, dom: Option<&Obj>) -> DslResult<Typed> {
    let cx = Cx {
        base,
        default: match base {
            BaseTag::Poly | BaseTag::Smooth => Some(Obj::real(1)),
            BaseTag::Fin => None,
        },
    };
    cx.go(e, dom)
}

struct Cx {
    base: BaseTag,
    default: Option<Obj>,
}

/// The domain a node has regardless of context, when it has one.
fn fixed_dom(e: &Expr) -> Option<Obj> {
    match &e.kind {
        // a bare `id` passes its input straight to `g`
        ExprKind::Comp(g, f) if matches!(f.kind, ExprKind::Id(None)) => fixed_dom(g),
        ExprKind::Comp(_, f) => fixed_dom(f),
        ExprKind::Prod(a, b) => Some(fixed_dom(a)?.times(&fixed_dom(b)?)),
        ExprKind::Dtr { state, body, .. } => fixed_dom(body)?.strip_prefix(state),
        ExprKind::Diff(inner) => Some(fixed_dom(inner)?.power(2)),
        ExprKind::Id(o) | ExprKind::Dup(o) | ExprKind::Discard(o) => o.clone(),
        ExprKind::Proj { split, .. } | ExprKind::Swap(split) => {
            split.as_ref().map(|(a, b)| a.times(b))
        }
        ExprKind::Add(o) | ExprKind::Prim(Prim::Mul(o)) => o.as_ref().map(|x| x.power(2)),
        ExprKind::Zero(_) | ExprKind::Const { .. } => Some(Obj::unit()),
        ExprKind::Wire { dom, .. } | ExprKind::Table { dom, .. } => Some(dom.clone()),
        ExprKind::Prim(Prim::Act(_, o)) => o.clone(),
        ExprKind::Prim(Prim::Affine { rows, .. }) => {
            Some(Obj::real(rows.first().map_or(0, Vec::len)))
        }
        ExprKind::Prim(Prim::Poly { nvars, .. }) => Some(Obj::real(*nvars)),
    }
}

fn halves(o: &Obj) -> Option<Obj> {
    let n = o.len();
    if !n.is_multiple_of(2) {
        return None;
    }
    let (a, b) = o.split_at(n / 2);
    (a == b).then_some(a)
}

impl Cx {
    fn incoming(&self, dom: Option<&Obj>, span: Span, what: &str) -> DslResult<Obj> {
        dom.cloned()
            .or_else(|| self.default.clone())
            .ok_or_else(|| {
                DslError::type_error(
                    span,
                    format!("cannot infer the object of `{}`; annotate it", what),
                )
            })
    }

    fn admit(&self, o: &Obj, span: Span) -> DslResult<()> {
        if self.base.admits(o) {
            Ok(())
        } else {
            Err(DslError::type_error(
                span,
                format!("{:#} is not an object of the {} base", o, self.base),
            ))
        }
    }

    fn expect_dom(&self, want: Option<&Obj>, have: &Obj, span: Span) -> DslResult<()> {
        match want {
            Some(w) if w != have => Err(DslError::type_error(
                span,
                format!("expected an input of {:#}, but this takes {:#}", w, have),
            )),
            _ => Ok(()),
        }
    }

    fn leaf(
        &self,
        e: &Expr,
        leaf: Leaf,
        dom: Obj,
        cod: Obj,
        want: Option<&Obj>,
    ) -> DslResult<Typed> {
        self.expect_dom(want, &dom, e.span)?;
        self.admit(&dom, e.span)?;
        self.admit(&cod, e.span)?;
        Ok(Typed {
            node: Node::Leaf(leaf),
            dom,
            cod,
            expr: e.clone(),
        })
    }

    fn structural(&self, e: &Expr, s: Structural, want: Option<&Obj>) -> DslResult<Typed> {
        let (dom, cod) = (s.dom(), s.cod());
        self.leaf(e, Leaf::Structural(s), dom, cod, want)
    }

    /// A pair `X × X` arriving at `add`, `mul` or a bare `swap`.
    fn pair_of(
        &self,
        e: &Expr,
        annotated: &Option<Obj>,
        want: Option<&Obj>,
        what: &str,
    ) -> DslResult<Obj> {
        if let Some(x) = annotated {
            return Ok(x.clone());
        }
        match want {
            Some(d) => halves(d).ok_or_else(|| {
                DslError::type_error(
                    e.span,
                    format!("`{}` needs an input of the form X × X, got {:#}", what, d),
                )
            }),
            None => self.incoming(None, e.span, what),
        }
    }

    fn go(&self, e: &Expr, want: Option<&Obj>) -> DslResult<Typed> {
        let span = e.span;
        match &e.kind {
            ExprKind::Comp(g, f) => {
                let hint = want.cloned().or_else(|| fixed_dom(e));
                let tf = self.go(f, hint.as_ref())?;
                let tg = self.go(g, Some(&tf.cod))?;
                if tg.dom != tf.cod {
                    return Err(DslError::type_error(
                        span,
                        format!(
                            "cannot feed {:#} into a circuit taking {:#}",
                            tf.cod, tg.dom
                        ),
                    ));
                }
                Ok(Typed {
                    dom: tf.dom.clone(),
                    cod: tg.cod.clone(),
                    node: Node::Comp(Box::new(tg), Box::new(tf)),
                    expr: e.clone(),
                })
            }
            ExprKind::Prod(a, b) => {
                let (ta, tb) = match want {
                    None => (self.go(a, None)?, self.go(b, None)?),
                    Some(d) => {
                        let (da, db) = if let Some(da) = fixed_dom(a) {
                            let db = d.strip_prefix(&da).ok_or_else(|| {
                                DslError::type_error(
                                    span,
                                    format!("{:#} does not start with {:#}", d, da),
                                )
                            })?;
                            (da, db)
                        } else if let Some(db) = fixed_dom(b) {
                            let da = d.strip_suffix(&db).ok_or_else(|| {
                                DslError::type_error(
                                    span,
                                    format!("{:#} does not end with {:#}", d, db),
                                )
                            })?;
                            (da, db)
                        } else if d.len() % 2 == 0 {
                            d.split_at(d.len() / 2)
                        } else {
                            return Err(DslError::type_error(
                                span,
                                format!(
                                    "cannot split {:#} between the factors; annotate one of them",
                                    d
                                ),
                            ));
                        };
                        (self.go(a, Some(&da))?, self.go(b, Some(&db))?)
                    }
                };
                Ok(Typed {
                    dom: ta.dom.times(&tb.dom),
                    cod: ta.cod.times(&tb.cod),
                    node: Node::Prod(Box::new(ta), Box::new(tb)),
                    expr: e.clone(),
                })
            }
            ExprKind::Dtr { init, state, body } => {
                self.admit(state, span)?;
                if init.len() != state.len() {
                    return Err(DslError::type_error(
                        span,
                        format!(
                            "initial value has {} entries but the state {:#} has {}",
                            init.len(),
                            state,
                            state.len()
                        ),
                    ));
                }
                let body_want = want.map(|d| state.times(d));
                let tb = self.go(body, body_want.as_ref())?;
                let x = tb.dom.strip_prefix(state).ok_or_else(|| {
                    DslError::shape(
                        span,
                        format!(
                            "body takes {:#}, which does not start with the state {:#}",
                            tb.dom, state
                        ),
                    )
                })?;
                let y = tb.cod.strip_prefix(state).ok_or_else(|| {
                    DslError::shape(
                        span,
                        format!(
                            "body returns {:#}, which does not start with the state {:#}",
                            tb.cod, state
                        ),
                    )
                })?;
                Ok(Typed {
                    dom: x,
                    cod: y,
                    node: Node::Dtr {
                        init: init.clone(),
                        state: state.clone(),
                        body: Box::new(tb),
                    },
                    expr: e.clone(),
                })
            }
            ExprKind::Diff(inner) => {
                let inner_want = match want {
                    Some(d) => Some(halves(d).ok_or_else(|| {
                        DslError::type_error(
                            span,
                            format!("a derivative takes (tangent, point) pairs, got {:#}", d),
                        )
                    })?),
                    None => None,
                };
                let ti = self.go(inner, inner_want.as_ref())?;
                Ok(Typed {
                    dom: ti.dom.power(2),
                    cod: ti.cod.clone(),
                    node: Node::Diff(Box::new(ti)),
                    expr: e.clone(),
                })
            }
            ExprKind::Id(o) => {
                let x = match o {
                    Some(x) => x.clone(),
                    None => self.incoming(want, span, "id")?,
                };
                self.structural(e, Structural::Id(x), want)
            }
            ExprKind::Dup(o) => {
                let x = match o {
                    Some(x) => x.clone(),
                    None => self.incoming(want, span, "dup")?,
                };
                self.structural(e, Structural::Diagonal(x), want)
            }
            ExprKind::Discard(o) => {
                let x = match o {
                    Some(x) => x.clone(),
                    None => self.incoming(want, span, "discard")?,
                };
                self.structural(e, Structural::Terminal(x), want)
            }
            ExprKind::Proj { index, split } => {
                let (a, b) = match split {
                    Some(s) => s.clone(),
                    None => {
                        let d = match want {
                            Some(d) => d.clone(),
                            None => self.incoming(None, span, "proj")?.power(2),
                        };
                        if d.len() == 1 {
                            // a bare projection on a single slot keeps it
                            if *index == 0 {
                                (d, Obj::unit())
                            } else {
                                (Obj::unit(), d)
                            }
                        } else if d.len() % 2 == 0 {
                            d.split_at(d.len() / 2)
                        } else {
                            return Err(DslError::type_error(
                                span,
                                format!(
                                    "cannot split {:#} for a projection; write (proj{} X Y)",
                                    d, index
                                ),
                            ));
                        }
                    }
                };
                let s = if *index == 0 {
                    Structural::Proj0(a, b)
                } else {
                    Structural::Proj1(a, b)
                };
                self.structural(e, s, want)
            }
            ExprKind::Swap(split) => {
                let (a, b) = match split {
                    Some(s) => s.clone(),
                    None => match want {
                        Some(d) if d.len() % 2 == 0 => d.split_at(d.len() / 2),
                        Some(d) => {
                            return Err(DslError::type_error(
                                span,
                                format!("cannot split {:#} for a swap; write (swap X Y)", d),
                            ))
                        }
                        None => {
                            let x = self.incoming(None, span, "swap")?;
                            (x.clone(), x)
                        }
                    },
                };
                self.structural(e, Structural::Symmetry(a, b), want)
            }
            ExprKind::Add(o) => {
                let x = self.pair_of(e, o, want, "add")?;
                if !self.base.has_differential() && !x.is_additive() {
                    return Err(DslError::type_error(
                        span,
                        format!("{:#} has no addition; use Z<m> slots", x),
                    ));
                }
                self.structural(e, Structural::Plus(x), want)
            }
            ExprKind::Zero(o) => {
                let x = match o {
                    Some(x) => x.clone(),
                    None => self.incoming(None, span, "zero")?,
                };
                if !x.is_additive() {
                    return Err(DslError::type_error(
                        span,
                        format!("{:#} has no zero; use Z<m> slots", x),
                    ));
                }
                self.structural(e, Structural::Zero(x), want)
            }
            ExprKind::Const { value, obj } => {
                let cod = match obj {
                    Some(o) => o.clone(),
                    None if self.base == BaseTag::Fin => {
                        return Err(DslError::type_error(
                            span,
                            "finite constants need an object, as in (const [1] F2)",
                        ))
                    }
                    None => Obj::real(value.len()),
                };
                if cod.len() != value.len() {
                    return Err(DslError::type_error(
                        span,
                        format!("{} values for the object {:#}", value.len(), cod),
                    ));
                }
                self.leaf(
                    e,
                    Leaf::Const(cod.clone(), value.clone()),
                    Obj::unit(),
                    cod,
                    want,
                )
            }
            ExprKind::Wire { dom, sources } => {
                let mut cod = Vec::with_capacity(sources.len());
                for s in sources {
                    match s {
                        Source::Slot(k) if *k < dom.len() => cod.push(dom.slots()[*k]),
                        Source::Slot(k) => {
                            return Err(DslError::type_error(
                                span,
                                format!("slot {} is out of range for {:#}", k, dom),
                            ))
                        }
                        Source::Zero if self.base == BaseTag::Fin => {
                            return Err(DslError::type_error(
                                span,
                                "zero wires need additive slots",
                            ))
                        }
                        Source::Zero => cod.push(crate::obj::Slot::Real),
                    }
                }
                let cod = Obj::from_slots(cod);
                self.leaf(
                    e,
                    Leaf::Wire(dom.clone(), cod.clone(), sources.clone()),
                    dom.clone(),
                    cod,
                    want,
                )
            }
            ExprKind::Table { dom, cod, entries } => {
                if self.base != BaseTag::Fin {
                    return Err(DslError::type_error(
                        span,
                        format!("tables need the fin base, not {}", self.base),
                    ));
                }
                self.leaf(
                    e,
                    Leaf::Table(dom.clone(), cod.clone(), entries.clone()),
                    dom.clone(),
                    cod.clone(),
                    want,
                )
            }
            ExprKind::Prim(p) => self.prim(e, p, want),
        }
    }

    fn prim(&self, e: &Expr, p: &Prim, want: Option<&Obj>) -> DslResult<Typed> {
        let span = e.span;
        let real_only = |name: &str| -> DslResult<()> {
            if self.base == BaseTag::Fin {
                Err(DslError::type_error(
                    span,
                    format!("`{}` is not available in the fin base", name),
                ))
            } else {
                Ok(())
            }
        };
        match p {
            Prim::Act(a, o) => {
                if self.base != BaseTag::Smooth {
                    return Err(DslError::type_error(
                        span,
                        format!("`{}` is not available in the {} base", a.name(), self.base),
                    ));
                }
                let x = match o {
                    Some(x) => x.clone(),
                    None => self.incoming(want, span, a.name())?,
                };
                self.leaf(e, Leaf::Act(*a, x.len()), x.clone(), x, want)
            }
            Prim::Mul(o) => {
                real_only("mul")?;
                let x = self.pair_of(e, o, want, "mul")?;
                self.leaf(e, Leaf::Mul(x.len()), x.power(2), x, want)
            }
            Prim::Affine { rows, bias } => {
                real_only("affine")?;
                let cols = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != cols) {
                    return Err(DslError::type_error(
                        span,
                        "matrix rows have different lengths",
                    ));
                }
                if bias.len() != rows.len() {
                    return Err(DslError::type_error(
                        span,
                        format!("bias has {} entries for {} rows", bias.len(), rows.len()),
                    ));
                }
                let leaf = Leaf::Affine {
                    rows: rows.clone(),
                    bias: bias.clone(),
                };
                self.leaf(e, leaf, Obj::real(cols), Obj::real(rows.len()), want)
            }
            Prim::Poly { nvars, comps } => {
                real_only("poly")?;
                let leaf = Leaf::Poly {
                    nvars: *nvars,
                    comps: comps.clone(),
                };
                self.leaf(e, leaf, Obj::real(*nvars), Obj::real(comps.len()), want)
            }
        }
    }
}
