use causal::base::Poly;
use causal::caus::{run, seq_d, truncate};
use causal::dsl::load;
use causal::stream::{format_record, parse_records};
use causal::{BaseTag, Point, Rational};
use num_rational::BigRational;
use proptest::prelude::*;

const SUM: &str = "(dtr [0] R1 (comp (prod proj0 proj0) (comp dup (prim add))))";

fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        4 => (-1000i64..1000, 1i64..60).prop_map(|(n, d)| Rational::new(n, d)),
        // near the edge of i64, so arithmetic has to promote
        1 => (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d)),
    ]
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..20, 1i64..6).prop_map(|(n, d)| Rational::new(n, d))
}

/// Polynomials in `nvars` variables with small coefficients.
fn poly(nvars: u32) -> impl Strategy<Value = Poly> {
    let term = (
        small_rational(),
        prop::collection::vec((0..nvars, 1u32..3), 0..3),
    );
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (c, vars)| {
            let m = vars
                .iter()
                .fold(Poly::constant(c), |p, &(v, e)| p.mul(&Poly::var(v).pow(e)));
            acc.add(&m)
        })
    })
}

fn rats(values: &[Rational]) -> Point {
    Point::Rat(values.to_vec())
}

proptest! {
    #[test]
    fn arithmetic_matches_big_rationals(a in rational(), b in rational()) {
        let (x, y): (BigRational, BigRational) = (a.to_big(), b.to_big());
        prop_assert_eq!((&a + &b).to_big(), &x + &y);
        prop_assert_eq!((&a - &b).to_big(), &x - &y);
        prop_assert_eq!((&a * &b).to_big(), &x * &y);
        if !b.is_zero() {
            prop_assert_eq!((&a / &b).to_big(), &x / &y);
        }
    }

    #[test]
    fn rationals_print_and_parse_back(a in rational()) {
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn evaluation_respects_ring_operations(p in poly(3), q in poly(3), x in prop::collection::vec(small_rational(), 3)) {
        prop_assert_eq!(p.add(&q).eval(&x), &p.eval(&x) + &q.eval(&x));
        prop_assert_eq!(p.mul(&q).eval(&x), &p.eval(&x) * &q.eval(&x));
        prop_assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn partials_obey_the_product_rule(p in poly(3), q in poly(3), v in 0u32..3) {
        let lhs = p.mul(&q).partial(v);
        let rhs = p.partial(v).mul(&q).add(&p.mul(&q.partial(v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_composition(p in poly(2), q0 in poly(3), q1 in poly(3), x in prop::collection::vec(small_rational(), 3)) {
        let inner = [q0.eval(&x), q1.eval(&x)];
        prop_assert_eq!(p.substitute(&[q0, q1]).eval(&x), p.eval(&inner));
    }

    #[test]
    fn polynomials_print_and_parse_back(p in poly(3)) {
        prop_assert_eq!(Poly::parse(&p.to_string(), 3).unwrap(), p);
    }

    #[test]
    fn records_print_and_parse_back(rows in prop::collection::vec(prop::collection::vec(rational(), 1..4), 0..6)) {
        let text: String = rows.iter().map(|r| format_record(&rats(r)) + "\n").collect();
        prop_assert_eq!(parse_records(&text).unwrap(), rows);
    }

    #[test]
    fn running_sum_is_prefix_sums(xs in prop::collection::vec(rational(), 0..12)) {
        let s = load(SUM, BaseTag::Poly).unwrap();
        let inputs: Vec<Point> = xs.iter().map(|x| rats(std::slice::from_ref(x))).collect();
        let mut acc = Rational::zero();
        let expected: Vec<Point> = xs.iter().map(|x| { acc = &acc + x; rats(&[acc.clone()]) }).collect();
        prop_assert_eq!(run(&s, &inputs).unwrap(), expected);
    }

    #[test]
    fn outputs_never_depend_on_later_inputs(xs in prop::collection::vec(small_rational(), 1..10), cut in 0usize..10, init in small_rational()) {
        let src = format!(
            "(dtr [{}] R1 (comp (poly 2 \"x0*x1 + 1/2\" \"x0 - x1*x1\") (prod id (poly 1 \"x0 + 1\"))))",
            init
        );
        let s = load(&src, BaseTag::Poly).unwrap();
        let inputs: Vec<Point> = xs.iter().map(|x| rats(std::slice::from_ref(x))).collect();
        let cut = cut.min(inputs.len());
        let full = run(&s, &inputs).unwrap();
        prop_assert_eq!(run(&s, &inputs[..cut]).unwrap(), full[..cut].to_vec());
    }

    #[test]
    fn truncation_computes_the_same_outputs(xs in prop::collection::vec(small_rational(), 1..7)) {
        let s = load(SUM, BaseTag::Poly).unwrap();
        let inputs: Vec<Point> = xs.iter().map(|x| rats(std::slice::from_ref(x))).collect();
        let flat = rats(&xs);
        let outputs: Vec<Rational> = run(&s, &inputs)
            .unwrap()
            .into_iter()
            .flat_map(|p| p.as_rat().unwrap().to_vec())
            .collect();
        let t = truncate(&s, xs.len() - 1).unwrap();
        prop_assert_eq!(t.eval(&flat).unwrap(), rats(&outputs));
    }

    #[test]
    fn derivative_of_running_sum_sums_tangents(pairs in prop::collection::vec((rational(), rational()), 0..10)) {
        let d = seq_d(&load(SUM, BaseTag::Poly).unwrap()).unwrap();
        let inputs: Vec<Point> = pairs.iter().map(|(t, x)| rats(&[t.clone(), x.clone()])).collect();
        let mut acc = Rational::zero();
        let expected: Vec<Point> = pairs.iter().map(|(t, _)| { acc = &acc + t; rats(&[acc.clone()]) }).collect();
        prop_assert_eq!(run(&d, &inputs).unwrap(), expected);
    }

    #[test]
    fn delay_emits_its_register_then_the_input(xs in prop::collection::vec(rational(), 0..10), init in rational()) {
        let s = load(&format!("(dtr [{}] R1 swap)", init), BaseTag::Poly).unwrap();
        let inputs: Vec<Point> = xs.iter().map(|x| rats(std::slice::from_ref(x))).collect();
        let expected: Vec<Point> = std::iter::once(init).chain(xs.iter().cloned()).take(xs.len()).map(|x| rats(&[x])).collect();
        prop_assert_eq!(run(&s, &inputs).unwrap(), expected);
    }
}
