use std::f64::consts::PI;

use lidstone::contour::{contour_derivative, contour_derivatives, ContourOptions};
use lidstone::expr::{parse_expression, Expr};
use lidstone::multiindex::indices_up_to;
use lidstone::rational::{frac, int, Rational};
use lidstone::source::ExprFunction;
use lidstone::{MultiIndex, MultiPoly};
use num_complex::Complex64;
use proptest::prelude::*;

const CORPUS: &[&str] = &[
    "0",
    "1",
    "-7/3",
    "x1",
    "x12",
    "pi",
    "2*pi",
    "-pi/2",
    "x1 + x2",
    "x1 - x2",
    "x1*x2*x3",
    "x1^7",
    "(x1 + 1)^3",
    "-(x1 - x2)^2",
    "1/2*x1 + 3/4",
    "0.25*x2",
    "sin(x1)",
    "cos(pi*x1)",
    "sinh(x1 - 1)",
    "cosh(2*x2)",
    "sin(pi*(x1 - 1)/2)",
    "sin(pi*(x1 + x2 + x3))",
    "sin(x1)^2 + cos(x1)^2",
    "sin(pi*x1)*x2^2",
    "x1*sin(x2)*cosh(x3)",
    "sinh(x1)/sinh(1)",
    "complex(0.5, -1.25)*x1",
    "complex(1, 0) + x1",
    "x1/pi",
    "x1/3 - x2/5",
    "sin(sin(x1))",
    "cos(x1 + pi/2)",
    "(x1 - 2)*(x1 + 2)",
    "x1^2*x2^3 - 4*x1*x2 + 9",
    "sin(pi*x1/3)*cos(pi*x2/4)",
    "-sin(-x1)",
    "2^3*x1",
    "(1/2)^2",
    "cosh(x1)*cosh(x2) - sinh(x1)*sinh(x2)",
    "sin(2*pi*x1)*(1 + x2)",
    "x3 - x1",
    "3.5 - x1*1.5",
    "((x1))",
    "sinh(pi*x1)^2",
    "x1*x1*x1",
    "sin(x1)*sin(x1)",
    "cos(3*pi/2)",
    "sinh(0) + cosh(0)",
    "-x1^2",
    "(x1 + x2)^2 - x1^2 - 2*x1*x2",
];

#[test]
fn corpus_print_is_a_parse_fixpoint() {
    for text in CORPUS {
        let e = parse_expression(text).unwrap_or_else(|err| panic!("{text}: {err}"));
        let printed = e.to_string();
        let again = parse_expression(&printed).unwrap_or_else(|err| panic!("{text} -> {printed}: {err}"));
        assert_eq!(again.to_string(), printed, "{text}");
        if !matches!(e.node(), lidstone::expr::Node::Poly(_)) {
            assert_eq!(again, e, "{text} printed as {printed}");
        }
    }
}

#[test]
fn special_values_are_exact() {
    let zero = [Rational::from_integer(0.into())];
    for (text, want) in [("cos(3*pi/2)", int(0)), ("sinh(0) + cosh(0)", int(1)), ("sin(pi*x1 + pi/2)", int(1))] {
        assert_eq!(parse_expression(text).unwrap().eval_exact(&zero).unwrap(), want, "{text}");
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (1usize..=3).prop_map(Expr::var),
        (-9i64..=9, 1i64..=5).prop_map(|(p, q)| Expr::rational(frac(p, q))),
        (-4i64..=4, 1i64..=3).prop_map(|(p, q)| Expr::pi_multiple(frac(p, q))),
    ]
}

fn tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::product),
            (inner.clone(), 1u32..4).prop_map(|(b, e)| Expr::pow(b, e)),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.clone().prop_map(Expr::sinh),
            inner.prop_map(Expr::cosh),
        ]
    })
}

fn point() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-0.8f64..0.8, -0.8f64..0.8).prop_map(|(a, b)| Complex64::new(a, b)), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_trees_round_trip(e in tree()) {
        let printed = e.to_string();
        let again = parse_expression(&printed).unwrap();
        prop_assert_eq!(&again, &e, "printed {}", printed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn symbolic_derivatives_match_contour(e in tree(), z in point(), t in prop::sample::select(indices_up_to(3, 6))) {
        let f = ExprFunction::new(e.clone(), 3).unwrap();
        let scale = e.eval_magnitude(&[Complex64::new(2.0, 2.0); 3]).unwrap_or(1.0).max(1.0);
        prop_assume!(scale < 1e3);
        let symbolic = e.derivative(&t).eval_numeric(&z).unwrap();
        let contour = contour_derivative(&f, &t, &z, &ContourOptions::default()).unwrap();
        let tol = 1e-8 * scale * t.factorial().to_string().parse::<f64>().unwrap();
        prop_assert!((symbolic - contour).norm() < tol, "{} D^{}: {} vs {}", e, t, symbolic, contour);
    }

    #[test]
    fn contour_matches_exact_polynomial_derivatives(
        terms in prop::collection::vec((0usize..35, -9i64..=9), 1..8),
        z in point(),
    ) {
        let monomials = indices_up_to(3, 4);
        let p = MultiPoly::from_terms(3, terms.into_iter().map(|(k, c)| (monomials[k].clone(), int(c)))).unwrap();
        let ts = indices_up_to(3, 6);
        let estimates = contour_derivatives(&p, &ts, &z, &ContourOptions::default()).unwrap();
        for (t, est) in ts.iter().zip(estimates) {
            let exact = p.differentiate(t).unwrap().evaluate_complex(&z).unwrap();
            prop_assert!((exact - est.value).norm() < 1e-9 * exact.norm().max(1.0), "D^{}: {} vs {}", t, exact, est.value);
        }
    }
}

#[test]
fn mixed_derivative_of_sine_times_square() {
    let e = parse_expression("sin(pi*x1)*x2^2").unwrap();
    let d = e.derivative(&MultiIndex::new(vec![1, 1]));
    let want = parse_expression("2*pi*cos(pi*x1)*x2").unwrap();
    let f = ExprFunction::new(e, 2).unwrap();
    for z in [[0.3, -0.2], [0.0, 1.0], [0.7, 0.45]] {
        let z: Vec<Complex64> = z.iter().map(|&x| Complex64::new(x, 0.1)).collect();
        let a = d.eval_numeric(&z).unwrap();
        assert!((a - want.eval_numeric(&z).unwrap()).norm() < 1e-12);
        let c = contour_derivative(&f, &MultiIndex::new(vec![1, 1]), &z, &ContourOptions::default()).unwrap();
        assert!((a - c).norm() < 1e-8, "{a} vs {c}");
    }
}

#[test]
fn contour_sees_vanishing_fourth_derivative_of_sine() {
    let f = ExprFunction::new(parse_expression("sin(pi*x1)").unwrap(), 1).unwrap();
    let v = contour_derivative(&f, &MultiIndex::new(vec![4]), &[Complex64::new(0.0, 0.0)], &ContourOptions::default())
        .unwrap();
    assert!(v.norm() < 1e-8, "{v}");
    let v = contour_derivative(&f, &MultiIndex::new(vec![3]), &[Complex64::new(0.0, 0.0)], &ContourOptions::default())
        .unwrap();
    assert!((v.re + PI.powi(3)).abs() < 1e-8, "{v}");
}
