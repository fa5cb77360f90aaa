use super::*;
use crate::base::{BaseTag, EqualityMode};
use crate::caus::{ext_equal, run, seq_d};
use crate::obj::Point;

const RUNNING_SUM: &str = "(dtr [0] R1 (comp (prod proj0 proj0) (comp dup (prim add))))";
const DELAY: &str = "(dtr [0] R1 swap)";

fn ints(values: &[i64]) -> Vec<Point> {
    values.iter().map(|v| Point::rat([*v])).collect()
}

fn reals(values: &[f64]) -> Vec<Point> {
    values.iter().map(|v| Point::Real(vec![*v])).collect()
}

#[test]
fn running_sum_source() {
    let e = parse(RUNNING_SUM).unwrap();
    assert!(matches!(e.kind, ExprKind::Dtr { .. }));
    assert_eq!(
        typecheck(&e, BaseTag::Poly).unwrap(),
        (Obj::real(1), Obj::real(1))
    );
    let s = compile(&e, BaseTag::Poly).unwrap();
    assert!(s.is_regular());
    assert_eq!(run(&s, &ints(&[1, 2, 3])).unwrap(), ints(&[1, 3, 6]));
}

#[test]
fn delay_gate_source() {
    let e = parse(DELAY).unwrap();
    assert_eq!(
        typecheck(&e, BaseTag::Poly).unwrap(),
        (Obj::real(1), Obj::real(1))
    );
    let s = compile(&e, BaseTag::Poly).unwrap();
    assert_eq!(run(&s, &ints(&[1, 2, 3])).unwrap(), ints(&[0, 1, 2]));
    let d = compile(&Expr::diff(e), BaseTag::Poly).unwrap();
    let out = run(&d, &[Point::rat([4, 1]), Point::rat([5, 2])]).unwrap();
    assert_eq!(out[0], Point::rat([0]));
    assert_eq!(out[1], Point::rat([4]));
}

#[test]
fn primitive_forms() {
    let e = parse("(prim tanh)").unwrap();
    assert_eq!(
        e.kind,
        ExprKind::Prim(Prim::Act(crate::base::Activation::Tanh, None))
    );
    assert_eq!(
        typecheck(&e, BaseTag::Smooth).unwrap(),
        (Obj::real(1), Obj::real(1))
    );
    assert!(matches!(
        typecheck(&e, BaseTag::Poly),
        Err(DslError::Type { .. })
    ));
    let p = parse("(prod (prim tanh) (poly 2 \"x0*x1\"))").unwrap();
    assert_eq!(
        typecheck(&p, BaseTag::Smooth).unwrap(),
        (Obj::real(3), Obj::real(2))
    );
    assert_eq!(parse("(prim add)").unwrap(), parse("add").unwrap());
}

#[test]
fn syntax_errors() {
    let err = parse("(comp (prim tanh) proj0 proj1)").unwrap_err();
    match err {
        DslError::Syntax {
            line,
            col,
            expected,
        } => {
            assert_eq!((line, col), (1, 1));
            assert!(expected.contains("binary"), "{}", expected);
        }
        other => panic!("unexpected {:?}", other),
    }
    assert!(matches!(
        parse("(prim relu)"),
        Err(DslError::UnknownPrimitive { .. })
    ));
    assert!(matches!(
        parse("(frobnicate id)"),
        Err(DslError::UnknownPrimitive { .. })
    ));
    assert!(matches!(parse("(comp id id"), Err(DslError::Syntax { .. })));
    assert!(matches!(
        parse("(dtr [x] R1 swap)"),
        Err(DslError::Syntax { .. })
    ));
    match parse("\n  (prod id\n     (poly 1 \"x7\"))") {
        Err(DslError::Syntax { line, col, .. }) => assert_eq!((line, col), (3, 14)),
        other => panic!("unexpected {:?}", other),
    }
}

#[test]
fn trace_shape_errors() {
    let e = parse("(dtr [0 0] R2 (poly 2 \"x0\"))").unwrap();
    assert!(matches!(
        typecheck(&e, BaseTag::Poly),
        Err(DslError::DtrShape { .. })
    ));
    let e = parse("(dtr [0 0] R2 (poly 1 \"x0\" \"x0\"))").unwrap();
    assert!(matches!(
        typecheck(&e, BaseTag::Poly),
        Err(DslError::DtrShape { .. })
    ));
    // a trace may swallow every output
    let e = parse("(dtr [0] R1 (poly 2 \"x0 + x1\"))").unwrap();
    assert_eq!(
        typecheck(&e, BaseTag::Poly).unwrap(),
        (Obj::real(1), Obj::unit())
    );
    let e = parse("(dtr [0 1] R1 swap)").unwrap();
    assert!(matches!(
        typecheck(&e, BaseTag::Poly),
        Err(DslError::Type { .. })
    ));
}

#[test]
fn products_concatenate() {
    let e = parse("(prod (poly 1 \"x0^2\") (poly 2 \"x0 - x1\"))").unwrap();
    assert_eq!(
        typecheck(&e, BaseTag::Poly).unwrap(),
        (Obj::real(3), Obj::real(2))
    );
    let id = parse("(id R3)").unwrap();
    assert_eq!(
        typecheck(&id, BaseTag::Poly).unwrap(),
        (Obj::real(3), Obj::real(3))
    );
}

#[test]
fn elman_cell_matches_hand_recurrence() {
    let src = "
        ; h' = tanh(W [h; x] + b), output h'
        (dtr [0 0] R2
          (comp dup (comp (prim tanh) (prim affine [[0.5 -0.25 1][0.125 0.75 -0.5]] [0.1 -0.2]))))";
    let s = compile(&parse(src).unwrap(), BaseTag::Smooth).unwrap();
    let xs = [0.3, -1.2, 0.8, 0.05, 2.0];
    let out = run(&s, &reals(&xs)).unwrap();
    let mut h = [0.0f64, 0.0];
    for (k, x) in xs.iter().enumerate() {
        let a0 = 0.5 * h[0] - 0.25 * h[1] + x + 0.1;
        let a1 = 0.125 * h[0] + 0.75 * h[1] - 0.5 * x - 0.2;
        h = [a0.tanh(), a1.tanh()];
        let got = out[k].as_real().unwrap();
        assert!((got[0] - h[0]).abs() < 1e-12 && (got[1] - h[1]).abs() < 1e-12);
    }
}

#[test]
fn pretty_roundtrips() {
    for src in [
        RUNNING_SUM,
        DELAY,
        "(prim tanh)",
        "(prim affine [[1 2][3 4]] [0.5 -1/3])",
        "(wire R3 [2 z 0])",
        "(table F2 F2 [1 0])",
        "(const [1] F3)",
        "(diff (comp (poly 2 \"3/2*x0*x1 - x1^2\") (swap R1 R1)))",
    ] {
        let e = parse(src).unwrap();
        let text = pretty(&e);
        assert_eq!(parse(&text).unwrap(), e, "{}", text);
    }
    assert_eq!(
        pretty(&parse("(prim affine [[1 2][3 4]] [0 0])").unwrap()),
        "(prim affine [[1 2][3 4]] [0 0])\n"
    );
}

#[test]
fn number_formatting_is_exact() {
    for text in ["0", "-3", "1/3", "0.5", "-0.125", "2.75", "1e-3"] {
        let r: crate::rational::Rational = text.parse().unwrap();
        let back: crate::rational::Rational = pretty::fmt_num(&r).parse().unwrap();
        assert_eq!(back, r, "{}", text);
    }
    let tenth = crate::rational::Rational::from_f64(0.1).unwrap();
    assert_eq!(
        pretty::fmt_num(&tenth)
            .parse::<crate::rational::Rational>()
            .unwrap(),
        tenth
    );
}

#[test]
fn derivative_of_delay_has_doubled_register() {
    let e = derivative(&parse(DELAY).unwrap(), BaseTag::Poly).unwrap();
    match &e.kind {
        ExprKind::Dtr { init, state, .. } => {
            assert_eq!(state, &Obj::real(2));
            assert_eq!(init, &vec![crate::rational::Rational::zero(); 2]);
        }
        other => panic!("expected a trace, got {:?}", other),
    }
    let e7 = derivative(&parse("(dtr [7] R1 swap)").unwrap(), BaseTag::Poly).unwrap();
    let ExprKind::Dtr { init, .. } = &e7.kind else {
        panic!()
    };
    assert_eq!(init, &vec![0.into(), 7.into()]);
}

#[test]
fn derivative_of_stateless_has_no_trace() {
    let e = derivative(&parse("(poly 1 \"x0^3\")").unwrap(), BaseTag::Poly).unwrap();
    assert_eq!(e.count_traces(), 0);
    let s = compile(&e, BaseTag::Poly).unwrap();
    assert_eq!(
        run(&s, &[Point::rat([1, 2])]).unwrap(),
        vec![Point::rat([12])]
    );
}

#[test]
fn emitted_derivative_reparses_and_agrees() {
    for (src, base) in [
        (RUNNING_SUM, BaseTag::Poly),
        (
            "(dtr [1] R1 (comp (prod (poly 2 \"x0 + x1\") (poly 2 \"x0*x1\")) (dup R2)))",
            BaseTag::Poly,
        ),
        (
            "(dtr [0.5] R1 (comp dup (comp (prim tanh) (prim affine [[0.5 -1]] [0.25]))))",
            BaseTag::Smooth,
        ),
    ] {
        let e = parse(src).unwrap();
        let text = pretty(&derivative(&e, base).unwrap());
        let back = compile(&parse(&text).unwrap(), base).unwrap();
        let direct = seq_d(&compile(&e, base).unwrap()).unwrap();
        let v = ext_equal(&back, &direct, 16, EqualityMode::Exact).unwrap();
        assert!(v.is_equal(), "{}\n{:?}", text, v);
    }
}

#[test]
fn retiming_moves_the_register() {
    // the register sits in front of x ↦ 2x + 1
    let src = "(dtr [3] R1 (comp (comp (prod (poly 2 \"x0 + x1\") (poly 2 \"x0*x1\")) (dup R2)) (prod (poly 1 \"2*x0 + 1\") id)))";
    let e = parse(src).unwrap();
    let retimed = retime(&e, BaseTag::Poly).unwrap();
    let ExprKind::Dtr { init, .. } = &retimed.kind else {
        panic!("{:?}", retimed)
    };
    assert_eq!(init, &vec![7.into()]);
    let a = compile(&e, BaseTag::Poly).unwrap();
    let b = compile(&retimed, BaseTag::Poly).unwrap();
    assert!(ext_equal(&a, &b, 16, EqualityMode::Exact)
        .unwrap()
        .is_equal());
}

#[test]
fn finite_base_circuits() {
    // running parity over Z2
    let src = "(dtr [0] Z2 (comp dup (add Z2)))";
    let s = compile(&parse(src).unwrap(), BaseTag::Fin).unwrap();
    let xs: Vec<Point> = [1, 1, 0, 1].iter().map(|v| Point::Fin(vec![*v])).collect();
    let out: Vec<u32> = run(&s, &xs)
        .unwrap()
        .iter()
        .map(|p| p.as_fin().unwrap()[0])
        .collect();
    assert_eq!(out, vec![1, 0, 0, 1]);
    assert!(matches!(
        typecheck(&parse("(dtr [0] F2 swap)").unwrap(), BaseTag::Fin),
        Err(DslError::Type { .. })
    ));
    assert!(matches!(
        compile(&parse("(diff (table F2 F2 [1 0]))").unwrap(), BaseTag::Fin),
        Err(DslError::Core(_))
    ));
}

#[test]
fn trace_inits_can_be_overridden() {
    let mut e = parse(DELAY).unwrap();
    set_trace_init(&mut e, 0, vec![Rational::from_int(7)]).unwrap();
    let s = compile(&e, BaseTag::Poly).unwrap();
    assert_eq!(run(&s, &ints(&[1, 2])).unwrap(), ints(&[7, 1]));
    assert!(set_trace_init(&mut e, 1, vec![]).is_err());
}

#[test]
fn bare_id_takes_the_input_of_what_follows() {
    let e = parse("(comp (poly 3 \"x2\" \"x0\" \"x1\") id)").unwrap();
    assert_eq!(
        typecheck(&e, BaseTag::Poly).unwrap(),
        (Obj::real(3), Obj::real(3))
    );
    let s = load(
        "(dtr [0 0] R2 (comp (poly 3 \"x2\" \"x0 + x2\" \"x1\") id))",
        BaseTag::Poly,
    )
    .unwrap();
    assert_eq!(run(&s, &ints(&[1, 2, 3])).unwrap(), ints(&[0, 1, 3]));
}
