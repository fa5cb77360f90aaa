use super::*;
use crate::base::EqualityMode;
use crate::obj::Point;

const EXACT: EqualityMode = EqualityMode::Exact;

fn r1() -> Obj {
    Obj::real(1)
}

fn poly(dom: usize, comps: &[&str]) -> BaseMorphism {
    BaseMorphism::parse_poly(dom, comps).unwrap()
}

fn konst(values: &[i64]) -> BaseMorphism {
    let p = Point::rat(values.iter().copied());
    BaseMorphism::constant(BaseTag::Poly, &Obj::real(values.len()), &p).unwrap()
}

fn mealy(state: usize, x: usize, y: usize, init: &[i64], comps: &[&str]) -> StatefulSeq {
    let cell = TwoCell::new(
        Obj::real(state),
        Obj::real(x),
        Obj::real(state),
        Obj::real(y),
        poly(state + x, comps),
    )
    .unwrap();
    StatefulSeq::new(konst(init), Seq::constant(cell)).unwrap()
}

fn running_sum() -> StatefulSeq {
    mealy(1, 1, 1, &[0], &["x0 + x1", "x0 + x1"])
}

fn delay(init: i64) -> StatefulSeq {
    delay_gate(&Seq::constant(r1()), &konst(&[init])).unwrap()
}

fn ints(values: &[i64]) -> Vec<Point> {
    values.iter().map(|v| Point::rat([*v])).collect()
}

fn flat(values: &[i64]) -> Point {
    Point::rat(values.iter().copied())
}

#[test]
fn identity_and_pointwise_lifts() {
    let id = StatefulSeq::identity(BaseTag::Poly, &Seq::constant(r1())).unwrap();
    assert_eq!(run(&id, &ints(&[3, 1, 4])).unwrap(), ints(&[3, 1, 4]));
    let sq = StatefulSeq::lift_h0(&poly(1, &["x0^2"])).unwrap();
    assert_eq!(run(&sq, &ints(&[1, 2, 3])).unwrap(), ints(&[1, 4, 9]));
    assert!(run(&sq, &[]).unwrap().is_empty());
}

#[test]
fn lift_is_functorial() {
    let f = poly(1, &["x0 + 3"]);
    let g = poly(1, &["x0^2 - x0"]);
    let lhs = StatefulSeq::lift_h0(&f)
        .unwrap()
        .after(&StatefulSeq::lift_h0(&g).unwrap())
        .unwrap();
    let rhs = StatefulSeq::lift_h0(&f.after(&g).unwrap()).unwrap();
    assert!(ext_equal(&lhs, &rhs, 6, EXACT).unwrap().is_equal());
}

#[test]
fn delay_gate_shifts() {
    assert_eq!(run(&delay(0), &ints(&[1, 2, 3])).unwrap(), ints(&[0, 1, 2]));
    let tc = truncate(&delay(0), 2).unwrap();
    assert!(tc.equal(&poly(3, &["0", "x0", "x1"]), EXACT).unwrap());
}

#[test]
fn two_delays_shift_twice() {
    let dd = delay(0).then(&delay(0)).unwrap();
    assert_eq!(run(&dd, &ints(&[1, 2, 3, 4])).unwrap(), ints(&[0, 0, 1, 2]));
    assert_eq!(
        truncate(&dd, 3)
            .unwrap()
            .eval(&flat(&[1, 2, 3, 4]))
            .unwrap(),
        flat(&[0, 0, 1, 2])
    );
}

#[test]
fn running_sum_by_recurrence_and_by_trace() {
    let rs = running_sum();
    assert_eq!(
        truncate(&rs, 2).unwrap().eval(&flat(&[1, 2, 3])).unwrap(),
        flat(&[1, 3, 6])
    );
    assert_eq!(
        unroll(&rs, 2).unwrap().eval(&flat(&[1, 2, 3])).unwrap(),
        flat(&[6])
    );

    let add_copy = StatefulSeq::lift_h0(&poly(2, &["x0 + x1", "x0 + x1"])).unwrap();
    let traced = delayed_trace(&TraceSpec::constant(r1(), konst(&[0])), &add_copy).unwrap();
    assert_eq!(run(&traced, &ints(&[1, 2, 3])).unwrap(), ints(&[1, 3, 6]));
    assert!(ext_equal(&traced, &rs, 8, EXACT).unwrap().is_equal());

    let doubled = rs
        .after(&StatefulSeq::lift_h0(&poly(1, &["2*x0"])).unwrap())
        .unwrap();
    assert_eq!(run(&doubled, &ints(&[1, 1, 1])).unwrap(), ints(&[2, 4, 6]));
}

#[test]
fn unroll_reproduces_hand_recurrence() {
    // next state s + x, output s·x, starting from 1
    let m = mealy(1, 1, 1, &[1], &["x0 + x1", "x0*x1"]);
    assert_eq!(
        unroll(&m, 2).unwrap().eval(&flat(&[1, 2, 3])).unwrap(),
        flat(&[12])
    );
    assert_eq!(run(&m, &ints(&[1, 2, 3])).unwrap()[2], Point::rat([12]));
}

#[test]
fn different_initial_values_differ_at_tick_zero() {
    let v = ext_equal(&delay(0), &delay(1), 8, EXACT).unwrap();
    let c = v.counterexample().expect("counterexample");
    assert_eq!(c.tick, 0);
    assert_ne!(c.left, c.right);
    assert!(ext_equal(&delay(1), &delay(1), 8, EXACT)
        .unwrap()
        .is_equal());
}

#[test]
fn yanking_fails() {
    let x = Seq::constant(r1());
    let sigma = StatefulSeq::structural0(BaseTag::Poly, Structural::Symmetry(r1(), r1())).unwrap();
    let yanked = delayed_trace(&TraceSpec::new(x.clone(), konst(&[0])), &sigma).unwrap();
    let id = StatefulSeq::identity(BaseTag::Poly, &x).unwrap();
    let v = ext_equal(&yanked, &id, 8, EXACT).unwrap();
    assert_eq!(v.counterexample().map(|c| c.tick), Some(0));
    assert!(ext_equal(&yanked, &delay(0), 8, EXACT).unwrap().is_equal());
}

#[test]
fn permuted_state_is_certified_by_a_shim() {
    // state (sum, count) against (count, sum)
    let s = mealy(2, 1, 1, &[0, 1], &["x0 + x2", "x1 + 1", "x0*x1 + x2"]);
    let t = mealy(2, 1, 1, &[1, 0], &["x0 + 1", "x1 + x2", "x1*x0 + x2"]);
    let swap = BaseMorphism::structural(BaseTag::Poly, Structural::Symmetry(r1(), r1())).unwrap();
    let shim = Seq::constant(swap.clone());
    assert!(shim_check(&s, &t, &shim, 8, EXACT).unwrap());
    assert!(ext_equal(&s, &t, 8, EXACT).unwrap().is_equal());

    let ident = Seq::constant(BaseMorphism::id(BaseTag::Poly, &Obj::real(2)).unwrap());
    assert!(shim_check(&s, &s, &ident, 8, EXACT).unwrap());
    // right shim, wrong initial state
    let t_bad = t.with_init(konst(&[0, 0])).unwrap();
    assert!(!shim_check(&s, &t_bad, &shim, 8, EXACT).unwrap());
}

#[test]
fn canonical_form_retraces_to_the_original() {
    for s in [
        running_sum(),
        mealy(1, 1, 1, &[1], &["x0 + x1", "x0*x1"]),
        delay(3),
    ] {
        let (spec, core) = canonicalize(&s).unwrap();
        assert!(core.state_seq().unwrap().at(0).unwrap().is_unit());
        let back = delayed_trace(&spec, &core).unwrap();
        assert!(ext_equal(&back, &s, 8, EXACT).unwrap().is_equal());
    }
}

#[test]
fn trace_checks_prefixes() {
    let rs = running_sum();
    let wide = TraceSpec::constant(Obj::real(3), konst(&[0, 0, 0]));
    assert!(matches!(
        delayed_trace(&wide, &rs),
        Err(Error::PrefixMismatch { .. })
    ));
    // T_0 = R fits the domain, but the codomain R² cannot start with T_1 = R³
    let growing = TraceSpec::new(Seq::prefix(vec![r1()], Obj::real(3)), konst(&[0]));
    let core = StatefulSeq::lift_h0(&poly(2, &["x0 + x1", "x0"])).unwrap();
    assert!(matches!(
        delayed_trace(&growing, &core),
        Err(Error::TailMismatch { tick: 0, .. })
    ));
}

#[test]
fn seq_d_of_running_sum_is_running_sum_of_tangents() {
    let d = seq_d(&running_sum()).unwrap();
    let out = run(&d, &[flat(&[5, 1]), flat(&[0, 1]), flat(&[0, 1])]).unwrap();
    assert_eq!(out, ints(&[5, 5, 5]));
}

#[test]
fn seq_d_of_stateless_is_pointwise_derivative() {
    let f = poly(1, &["x0^3 + x0"]);
    let lhs = seq_d(&StatefulSeq::lift_h0(&f).unwrap()).unwrap();
    let rhs = StatefulSeq::lift_h0(&f.diff().unwrap()).unwrap();
    assert!(ext_equal(&lhs, &rhs, 6, EXACT).unwrap().is_equal());
}

#[test]
fn seq_d_of_delay_starts_at_zero() {
    let d = seq_d(&delay(7)).unwrap();
    let out = run(&d, &[flat(&[2, 9]), flat(&[3, 9])]).unwrap();
    assert_eq!(out, ints(&[0, 2]));
}

#[test]
fn time_varying_cells() {
    // tick k: (s, x) ↦ (s + k·x, s)
    let cells = Seq::generator(
        |k| {
            let c = format!("x0 + {}*x1", k);
            TwoCell::new(r1(), r1(), r1(), r1(), poly(2, &[c.as_str(), "x0"]))
        },
        None,
    );
    let s = StatefulSeq::new(konst(&[0]), cells).unwrap();
    assert!(!s.is_regular());
    assert_eq!(run(&s, &ints(&[1, 1, 1, 1])).unwrap(), ints(&[0, 0, 1, 3]));
    assert_eq!(
        truncate(&s, 3).unwrap().eval(&flat(&[1, 1, 1, 1])).unwrap(),
        flat(&[0, 0, 1, 3])
    );
}

#[test]
fn boundaries_are_checked() {
    let bad = StatefulSeq::new(konst(&[0, 0]), running_sum().cells().clone());
    assert!(matches!(bad, Err(Error::BoundaryMismatch { .. })));
    let two = StatefulSeq::lift_h0(&poly(2, &["x0"])).unwrap();
    assert!(running_sum().after(&two).is_ok());
    assert!(matches!(
        two.after(&running_sum()),
        Err(Error::BoundaryMismatch { .. })
    ));
}

#[test]
fn sums_and_products_of_streams() {
    let tag = BaseTag::Poly;
    let a = StatefulSeq::identity(tag, &Seq::constant(r1())).unwrap();
    let b = StatefulSeq::lift_h0(&poly(1, &["10*x0"])).unwrap();
    assert_eq!(
        run(&a.add(&b).unwrap(), &ints(&[1, 2])).unwrap(),
        ints(&[11, 22])
    );
    let p = running_sum().product(&delay(0)).unwrap();
    assert_eq!(
        run(&p, &[flat(&[1, 5]), flat(&[2, 6])]).unwrap(),
        vec![flat(&[1, 0]), flat(&[3, 5])]
    );
}
