use crate::base::{Activation, Poly, Source};
use crate::dsl::{DslError, DslResult, Expr, ExprKind, Prim, Span};
use crate::obj::Obj;
use crate::rational::Rational;

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, Span),
    Str(String, Span),
    List(Vec<Sexp>, Span),
    Vector(Vec<Sexp>, Span),
}

impl Sexp {
    fn span(&self) -> Span {
        match self {
            Sexp::Atom(_, s) | Sexp::Str(_, s) | Sexp::List(_, s) | Sexp::Vector(_, s) => *s,
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Reader<'_> {
    fn here(&self) -> Span {
        Span {
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> DslResult<Sexp> {
        self.skip_blank();
        let start = self.here();
        match self.chars.peek().copied() {
            None => Err(DslError::syntax(start, "an expression")),
            Some(open @ ('(' | '[')) => {
                self.bump();
                let close = if open == '(' { ')' } else { ']' };
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.chars.peek().copied() {
                        None => return Err(DslError::syntax(self.here(), format!("`{}`", close))),
                        Some(c) if c == close => {
                            self.bump();
                            break;
                        }
                        Some(c @ (')' | ']')) => {
                            return Err(DslError::syntax(
                                self.here(),
                                format!("`{}` but found `{}`", close, c),
                            ))
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
                Ok(if open == '(' {
                    Sexp::List(items, start)
                } else {
                    Sexp::Vector(items, start)
                })
            }
            Some(c @ (')' | ']')) => Err(DslError::syntax(
                start,
                format!("an expression but found `{}`", c),
            )),
            Some('"') => {
                self.bump();
                let mut text = String::new();
                loop {
                    match self.bump() {
                        None => return Err(DslError::syntax(self.here(), "closing `\"`")),
                        Some('"') => break,
                        Some(c) => text.push(c),
                    }
                }
                Ok(Sexp::Str(text, start))
            }
            Some(_) => {
                let mut text = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | '"' | ';') {
                        break;
                    }
                    text.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(text, start))
            }
        }
    }
}

/// Parses a single circuit expression; comments run from `;` to the end of
/// the line.
pub fn parse(text: &str) -> DslResult<Expr> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let sexp = r.read()?;
    r.skip_blank();
    if r.chars.peek().is_some() {
        return Err(DslError::syntax(r.here(), "end of input"));
    }
    to_expr(&sexp)
}

fn unknown(name: &str, span: Span) -> DslError {
    DslError::UnknownPrimitive {
        name: name.to_string(),
        line: span.line,
        col: span.col,
    }
}

fn atom_expr(name: &str, span: Span) -> DslResult<ExprKind> {
    Ok(match name {
        "id" => ExprKind::Id(None),
        "proj0" => ExprKind::Proj {
            index: 0,
            split: None,
        },
        "proj1" => ExprKind::Proj {
            index: 1,
            split: None,
        },
        "dup" => ExprKind::Dup(None),
        "discard" => ExprKind::Discard(None),
        "swap" => ExprKind::Swap(None),
        "add" => ExprKind::Add(None),
        "zero" => ExprKind::Zero(None),
        _ => return Err(unknown(name, span)),
    })
}

fn to_expr(s: &Sexp) -> DslResult<Expr> {
    let span = s.span();
    let kind = match s {
        Sexp::Atom(name, _) => atom_expr(name, span)?,
        Sexp::Str(..) | Sexp::Vector(..) => {
            return Err(DslError::syntax(span, "a circuit expression"))
        }
        Sexp::List(items, _) => {
            let (head, args) = items
                .split_first()
                .ok_or_else(|| DslError::syntax(span, "a non-empty form"))?;
            let Sexp::Atom(head, head_span) = head else {
                return Err(DslError::syntax(head.span(), "a form name"));
            };
            list_expr(head, *head_span, args, span)?
        }
    };
    Ok(Expr { kind, span })
}

fn arity(name: &str, args: &[Sexp], allowed: &[usize], span: Span) -> DslResult<()> {
    if allowed.contains(&args.len()) {
        return Ok(());
    }
    let counts: Vec<String> = allowed.iter().map(|n| n.to_string()).collect();
    let what = match allowed {
        [2] if name == "comp" || name == "prod" => {
            format!("{} is binary: exactly 2 arguments", name)
        }
        _ => format!("{} argument(s) to {}", counts.join(" or "), name),
    };
    Err(DslError::syntax(
        span,
        format!("{}, found {}", what, args.len()),
    ))
}

fn obj(s: &Sexp) -> DslResult<Obj> {
    match s {
        Sexp::Atom(text, span) => text.parse().map_err(|_| {
            DslError::syntax(
                *span,
                format!("an object such as R2 or F3, found `{}`", text),
            )
        }),
        other => Err(DslError::syntax(other.span(), "an object such as R2 or F3")),
    }
}

fn opt_obj(args: &[Sexp]) -> DslResult<Option<Obj>> {
    args.first().map(obj).transpose()
}

fn number(s: &Sexp) -> DslResult<Rational> {
    match s {
        Sexp::Atom(text, span) => text
            .parse()
            .map_err(|_| DslError::syntax(*span, format!("a number, found `{}`", text))),
        other => Err(DslError::syntax(other.span(), "a number")),
    }
}

fn numbers(s: &Sexp) -> DslResult<Vec<Rational>> {
    match s {
        Sexp::Vector(items, _) => items.iter().map(number).collect(),
        other => Err(DslError::syntax(
            other.span(),
            "a literal such as [1 2/3 0.5]",
        )),
    }
}

fn matrix(s: &Sexp) -> DslResult<Vec<Vec<Rational>>> {
    match s {
        Sexp::Vector(rows, _) => rows.iter().map(numbers).collect(),
        other => Err(DslError::syntax(
            other.span(),
            "a matrix literal such as [[1 2][3 4]]",
        )),
    }
}

fn index(s: &Sexp) -> DslResult<u32> {
    match s {
        Sexp::Atom(text, span) => text.parse().map_err(|_| {
            DslError::syntax(*span, format!("a non-negative integer, found `{}`", text))
        }),
        other => Err(DslError::syntax(other.span(), "a non-negative integer")),
    }
}

fn sources(s: &Sexp) -> DslResult<Vec<Source>> {
    match s {
        Sexp::Vector(items, _) => items
            .iter()
            .map(|i| match i {
                Sexp::Atom(t, _) if t == "z" => Ok(Source::Zero),
                other => index(other).map(|k| Source::Slot(k as usize)),
            })
            .collect(),
        other => Err(DslError::syntax(other.span(), "a wiring such as [1 0 z]")),
    }
}

fn poly_literal(args: &[Sexp], span: Span) -> DslResult<Prim> {
    let Some((n, comps)) = args.split_first() else {
        return Err(DslError::syntax(
            span,
            "a variable count, then polynomial strings",
        ));
    };
    let nvars = index(n)? as usize;
    let comps = comps
        .iter()
        .map(|c| match c {
            Sexp::Str(text, span) => Poly::parse(text, nvars).map_err(|e| {
                DslError::syntax(
                    *span,
                    format!("a polynomial in x0..x{}: {}", nvars.saturating_sub(1), e),
                )
            }),
            other => Err(DslError::syntax(other.span(), "a quoted polynomial")),
        })
        .collect::<DslResult<Vec<_>>>()?;
    Ok(Prim::Poly { nvars, comps })
}

fn list_expr(head: &str, head_span: Span, args: &[Sexp], span: Span) -> DslResult<ExprKind> {
    let boxed = |s: &Sexp| to_expr(s).map(Box::new);
    Ok(match head {
        "comp" | "prod" => {
            arity(head, args, &[2], span)?;
            let (a, b) = (boxed(&args[0])?, boxed(&args[1])?);
            if head == "comp" {
                ExprKind::Comp(a, b)
            } else {
                ExprKind::Prod(a, b)
            }
        }
        "dtr" => {
            arity(head, args, &[3], span)?;
            ExprKind::Dtr {
                init: numbers(&args[0])?,
                state: obj(&args[1])?,
                body: boxed(&args[2])?,
            }
        }
        "diff" => {
            arity(head, args, &[1], span)?;
            ExprKind::Diff(boxed(&args[0])?)
        }
        "id" | "dup" | "discard" | "add" | "zero" => {
            arity(head, args, &[0, 1], span)?;
            let o = opt_obj(args)?;
            match head {
                "id" => ExprKind::Id(o),
                "dup" => ExprKind::Dup(o),
                "discard" => ExprKind::Discard(o),
                "add" => ExprKind::Add(o),
                _ => ExprKind::Zero(o),
            }
        }
        "proj0" | "proj1" | "swap" => {
            arity(head, args, &[0, 2], span)?;
            let split = if args.is_empty() {
                None
            } else {
                Some((obj(&args[0])?, obj(&args[1])?))
            };
            match head {
                "swap" => ExprKind::Swap(split),
                "proj0" => ExprKind::Proj { index: 0, split },
                _ => ExprKind::Proj { index: 1, split },
            }
        }
        "const" => {
            arity(head, args, &[1, 2], span)?;
            ExprKind::Const {
                value: numbers(&args[0])?,
                obj: opt_obj(&args[1..])?,
            }
        }
        "wire" => {
            arity(head, args, &[2], span)?;
            ExprKind::Wire {
                dom: obj(&args[0])?,
                sources: sources(&args[1])?,
            }
        }
        "table" => {
            arity(head, args, &[3], span)?;
            let entries = match &args[2] {
                Sexp::Vector(items, _) => items.iter().map(index).collect::<DslResult<Vec<_>>>()?,
                other => return Err(DslError::syntax(other.span(), "a table such as [1 0 2]")),
            };
            ExprKind::Table {
                dom: obj(&args[0])?,
                cod: obj(&args[1])?,
                entries,
            }
        }
        "poly" => ExprKind::Prim(poly_literal(args, span)?),
        "prim" => {
            let Some((name, rest)) = args.split_first() else {
                return Err(DslError::syntax(span, "a primitive name"));
            };
            let Sexp::Atom(name, name_span) = name else {
                return Err(DslError::syntax(name.span(), "a primitive name"));
            };
            let act = |a| -> DslResult<ExprKind> {
                arity(name, rest, &[0, 1], span)?;
                Ok(ExprKind::Prim(Prim::Act(a, opt_obj(rest)?)))
            };
            match name.as_str() {
                "tanh" => act(Activation::Tanh)?,
                "sigmoid" => act(Activation::Sigmoid)?,
                "softplus" => act(Activation::Softplus)?,
                "mul" => {
                    arity(name, rest, &[0, 1], span)?;
                    ExprKind::Prim(Prim::Mul(opt_obj(rest)?))
                }
                "add" => {
                    arity(name, rest, &[0, 1], span)?;
                    ExprKind::Add(opt_obj(rest)?)
                }
                "affine" => {
                    arity(name, rest, &[2], span)?;
                    ExprKind::Prim(Prim::Affine {
                        rows: matrix(&rest[0])?,
                        bias: numbers(&rest[1])?,
                    })
                }
                "poly" => ExprKind::Prim(poly_literal(rest, span)?),
                other => return Err(unknown(other, *name_span)),
            }
        }
        other => return Err(unknown(other, head_span)),
    })
}
