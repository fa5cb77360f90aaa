//! `.sfg`: a small s-expression language for signal-flow graphs.
//!
//! Every circuit is built from stateless boxes, sequential and parallel
//! composition, and a delayed trace that feeds a declared state object back
//! through a register. Compilation is homomorphic into [`StatefulSeq`], so
//! every compiled circuit has constant cells.
//!
//! ```text
//! expr  ::= atom | "(" head arg* ")"
//! head  ::= comp | prod | dtr | diff | prim | poly | id | proj0 | proj1
//!         | dup | discard | swap | add | zero | const | wire | table
//! (comp g f)            g after f: f runs first
//! (prod a b)            a and b side by side
//! (dtr [init..] S body) body : S × X -> S × Y, traced along S
//! (diff e)              derivative, inputs (tangent, point)
//! (prim tanh|sigmoid|softplus|mul|add [OBJ])
//! (prim affine [[a b][c d]] [b0 b1])
//! (poly N "x0*x1" ...)  polynomial literal in x0 .. x(N-1)
//! (wire OBJ [2 0 z])    slot wiring; z is a zero output
//! (table DOM COD [..])  lookup table over finite objects
//! ```
//!
//! Structural atoms (`id`, `dup`, `swap`, ...) may be written bare, in which
//! case their objects are inferred from the surrounding circuit, or with
//! explicit objects such as `(swap R1 R2)`.

mod compile;
mod emit;
mod parse;
mod pretty;
mod retime;
mod typecheck;

pub use compile::{compile, compile_with_dom, literal_point};
pub use emit::{derivative, reify};
pub use parse::parse;
pub use pretty::{fmt_num, pretty};
pub use retime::retime;
pub use typecheck::{typecheck, typecheck_with_dom};

use thiserror::Error;

use crate::base::{Activation, Poly, Source};
use crate::caus::StatefulSeq;
use crate::error::Error;
use crate::obj::Obj;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

/// A circuit expression. Equality ignores spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Expr {
        Expr {
            kind,
            span: Span::default(),
        }
    }

    pub fn comp(g: Expr, f: Expr) -> Expr {
        Expr::new(ExprKind::Comp(Box::new(g), Box::new(f)))
    }

    pub fn prod(a: Expr, b: Expr) -> Expr {
        Expr::new(ExprKind::Prod(Box::new(a), Box::new(b)))
    }

    pub fn dtr(init: Vec<Rational>, state: Obj, body: Expr) -> Expr {
        Expr::new(ExprKind::Dtr {
            init,
            state,
            body: Box::new(body),
        })
    }

    pub fn diff(e: Expr) -> Expr {
        Expr::new(ExprKind::Diff(Box::new(e)))
    }

    /// True when no delayed trace occurs anywhere inside.
    pub fn is_stateless(&self) -> bool {
        match &self.kind {
            ExprKind::Dtr { .. } => false,
            ExprKind::Comp(a, b) | ExprKind::Prod(a, b) => a.is_stateless() && b.is_stateless(),
            ExprKind::Diff(e) => e.is_stateless(),
            _ => true,
        }
    }

    /// Number of delayed traces in the expression.
    pub fn count_traces(&self) -> usize {
        match &self.kind {
            ExprKind::Dtr { body, .. } => 1 + body.count_traces(),
            ExprKind::Comp(a, b) | ExprKind::Prod(a, b) => a.count_traces() + b.count_traces(),
            ExprKind::Diff(e) => e.count_traces(),
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// `g ∘ f`
    Comp(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Dtr {
        init: Vec<Rational>,
        state: Obj,
        body: Box<Expr>,
    },
    Diff(Box<Expr>),
    Prim(Prim),
    Id(Option<Obj>),
    Proj {
        index: u8,
        split: Option<(Obj, Obj)>,
    },
    Dup(Option<Obj>),
    Discard(Option<Obj>),
    Swap(Option<(Obj, Obj)>),
    Add(Option<Obj>),
    Zero(Option<Obj>),
    Const {
        value: Vec<Rational>,
        obj: Option<Obj>,
    },
    Wire {
        dom: Obj,
        sources: Vec<Source>,
    },
    Table {
        dom: Obj,
        cod: Obj,
        entries: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prim {
    Act(Activation, Option<Obj>),
    /// Pointwise product `X × X -> X`.
    Mul(Option<Obj>),
    /// `x ↦ W x + b`, `W` given by rows.
    Affine {
        rows: Vec<Vec<Rational>>,
        bias: Vec<Rational>,
    },
    Poly {
        nvars: usize,
        comps: Vec<Poly>,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("unknown primitive `{name}` at {line}:{col}")]
    UnknownPrimitive {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("type error at {line}:{col}: {message}")]
    Type {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("trace shape error at {line}:{col}: {message}")]
    DtrShape {
        line: usize,
        col: usize,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

impl DslError {
    pub(crate) fn syntax(span: Span, expected: impl Into<String>) -> DslError {
        DslError::Syntax {
            line: span.line,
            col: span.col,
            expected: expected.into(),
        }
    }

    pub(crate) fn type_error(span: Span, message: impl Into<String>) -> DslError {
        DslError::Type {
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }

    pub(crate) fn shape(span: Span, message: impl Into<String>) -> DslError {
        DslError::DtrShape {
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }

    /// Parse, name and typing problems, as opposed to failures while
    /// building or running the compiled circuit.
    pub fn is_static(&self) -> bool {
        !matches!(self, DslError::Core(_))
    }
}

pub type DslResult<T> = std::result::Result<T, DslError>;

/// Parses and compiles source text in one step.
pub fn load(text: &str, base: crate::base::BaseTag) -> DslResult<StatefulSeq> {
    compile(&parse(text)?, base)
}

/// Replaces the initial register value of the `index`-th delayed trace,
/// counting in reading order from 0.
pub fn set_trace_init(e: &mut Expr, index: usize, init: Vec<Rational>) -> DslResult<()> {
    fn visit<'a>(e: &'a mut Expr, found: &mut Vec<&'a mut Vec<Rational>>) {
        match &mut e.kind {
            ExprKind::Dtr { init, body, .. } => {
                found.push(init);
                visit(body, found);
            }
            ExprKind::Comp(a, b) | ExprKind::Prod(a, b) => {
                visit(a, found);
                visit(b, found);
            }
            ExprKind::Diff(inner) => visit(inner, found),
            _ => {}
        }
    }
    let mut found = Vec::new();
    visit(e, &mut found);
    let count = found.len();
    let slot = found.into_iter().nth(index).ok_or_else(|| {
        DslError::Core(Error::Invalid(format!(
            "no delayed trace number {}: the circuit has {}",
            index, count
        )))
    })?;
    *slot = init;
    Ok(())
}

#[cfg(test)]
mod tests;
