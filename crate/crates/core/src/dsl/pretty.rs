use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::base::Source;
use crate::dsl::{Expr, ExprKind, Prim};
use crate::obj::Obj;
use crate::rational::Rational;

const WIDTH: usize = 72;

/// Renders an expression in the concrete syntax accepted by [`parse`]:
/// short forms on one line, longer ones broken one argument per line.
///
/// [`parse`]: crate::dsl::parse
pub fn pretty(e: &Expr) -> String {
    let mut out = String::new();
    layout(&doc(e), 0, &mut out);
    out.push('\n');
    out
}

/// A form: either a leaf text or a head with argument documents.
enum Doc {
    Text(String),
    Form(String, Vec<Doc>),
}

fn flat(d: &Doc) -> String {
    match d {
        Doc::Text(t) => t.clone(),
        Doc::Form(head, args) => {
            let mut s = format!("({}", head);
            for a in args {
                s.push(' ');
                s.push_str(&flat(a));
            }
            s.push(')');
            s
        }
    }
}

fn layout(d: &Doc, indent: usize, out: &mut String) {
    let one_line = flat(d);
    match d {
        Doc::Form(head, args) if indent + one_line.len() > WIDTH && !args.is_empty() => {
            out.push('(');
            out.push_str(head);
            for a in args {
                out.push('\n');
                out.push_str(&" ".repeat(indent + 2));
                layout(a, indent + 2, out);
            }
            out.push(')');
        }
        _ => out.push_str(&one_line),
    }
}

pub(crate) fn fmt_obj(o: &Obj) -> String {
    format!("{:#}", o)
}

/// Integers as integers, short terminating decimals as decimals, anything
/// else as `p/q`; every form parses back to the same rational.
pub fn fmt_num(r: &Rational) -> String {
    let big = r.to_big();
    let (n, d) = (big.numer().clone(), big.denom().clone());
    if d.is_one() {
        return n.to_string();
    }
    let (two, five, ten) = (BigInt::from(2), BigInt::from(5), BigInt::from(10));
    let mut rest = d.clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    let digits = twos.max(fives);
    if !rest.is_one() || digits > 12 {
        return format!("{}/{}", n, d);
    }
    let scaled = &n * num_traits::pow(ten.clone(), digits as usize) / &d;
    let neg = scaled < BigInt::zero();
    let s = if neg {
        (-scaled).to_string()
    } else {
        scaled.to_string()
    };
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (int, frac) = s.split_at(s.len() - digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

fn vector(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(fmt_num).collect();
    format!("[{}]", parts.join(" "))
}

fn with_obj(name: &str, o: &Option<Obj>) -> Doc {
    match o {
        None => Doc::Text(name.to_string()),
        Some(o) => Doc::Form(name.to_string(), vec![Doc::Text(fmt_obj(o))]),
    }
}

fn with_split(name: &str, s: &Option<(Obj, Obj)>) -> Doc {
    match s {
        None => Doc::Text(name.to_string()),
        Some((a, b)) => Doc::Form(
            name.to_string(),
            vec![Doc::Text(fmt_obj(a)), Doc::Text(fmt_obj(b))],
        ),
    }
}

fn doc(e: &Expr) -> Doc {
    let text = |s: String| Doc::Text(s);
    match &e.kind {
        ExprKind::Comp(g, f) => Doc::Form("comp".into(), vec![doc(g), doc(f)]),
        ExprKind::Prod(a, b) => Doc::Form("prod".into(), vec![doc(a), doc(b)]),
        ExprKind::Dtr { init, state, body } => Doc::Form(
            "dtr".into(),
            vec![text(vector(init)), text(fmt_obj(state)), doc(body)],
        ),
        ExprKind::Diff(inner) => Doc::Form("diff".into(), vec![doc(inner)]),
        ExprKind::Id(o) => with_obj("id", o),
        ExprKind::Proj { index, split } => {
            with_split(if *index == 0 { "proj0" } else { "proj1" }, split)
        }
        ExprKind::Dup(o) => with_obj("dup", o),
        ExprKind::Discard(o) => with_obj("discard", o),
        ExprKind::Swap(s) => with_split("swap", s),
        ExprKind::Add(o) => with_obj("add", o),
        ExprKind::Zero(o) => with_obj("zero", o),
        ExprKind::Const { value, obj } => {
            let mut args = vec![text(vector(value))];
            if let Some(o) = obj {
                args.push(text(fmt_obj(o)));
            }
            Doc::Form("const".into(), args)
        }
        ExprKind::Wire { dom, sources } => {
            let parts: Vec<String> = sources
                .iter()
                .map(|s| match s {
                    Source::Slot(k) => k.to_string(),
                    Source::Zero => "z".to_string(),
                })
                .collect();
            Doc::Form(
                "wire".into(),
                vec![text(fmt_obj(dom)), text(format!("[{}]", parts.join(" ")))],
            )
        }
        ExprKind::Table { dom, cod, entries } => {
            let parts: Vec<String> = entries.iter().map(u32::to_string).collect();
            Doc::Form(
                "table".into(),
                vec![
                    text(fmt_obj(dom)),
                    text(fmt_obj(cod)),
                    text(format!("[{}]", parts.join(" "))),
                ],
            )
        }
        ExprKind::Prim(p) => match p {
            Prim::Act(a, o) => {
                let mut args = vec![text(a.name().to_string())];
                if let Some(o) = o {
                    args.push(text(fmt_obj(o)));
                }
                Doc::Form("prim".into(), args)
            }
            Prim::Mul(o) => {
                let mut args = vec![text("mul".into())];
                if let Some(o) = o {
                    args.push(text(fmt_obj(o)));
                }
                Doc::Form("prim".into(), args)
            }
            Prim::Affine { rows, bias } => {
                let m: String = rows.iter().map(|r| vector(r)).collect();
                Doc::Form(
                    "prim".into(),
                    vec![
                        text("affine".into()),
                        text(format!("[{}]", m)),
                        text(vector(bias)),
                    ],
                )
            }
            Prim::Poly { nvars, comps } => {
                let mut args = vec![text(nvars.to_string())];
                args.extend(comps.iter().map(|c| text(format!("\"{}\"", c))));
                Doc::Form("poly".into(), args)
            }
        },
    }
}
