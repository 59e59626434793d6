use std::collections::HashMap;

use finsler_symbolic::{eval_at, parse, to_text, Coordinates, Expr, NumericPoint, Var};
use proptest::prelude::*;

fn coords() -> Coordinates {
    Coordinates::standard(2)
}

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        (1i64..6).prop_map(|n| n.to_string()),
        Just("x1".to_string()),
        Just("x2".to_string()),
        Just("y1".to_string()),
        Just("y2".to_string()),
    ]
}

/// Random expression texts built from sums, products, quotients by positive
/// polynomials, small powers and square roots of positive polynomials.
fn expr_text() -> impl Strategy<Value = String> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), 1u32..3).prop_map(|(a, k)| format!("({a})^{k}")),
            inner.clone().prop_map(|a| format!("({a})/(x1 + y2^2)")),
            inner.clone().prop_map(|a| format!("({a})*sqrt(x2*y1 + 1)")),
            inner.prop_map(|a| format!("({a})/sqrt(y1^2 + x1)")),
        ]
    })
}

fn point() -> impl Strategy<Value = NumericPoint> {
    (prop::array::uniform2(1.0f64..2.0), prop::array::uniform2(1.0f64..2.0))
        .prop_map(|(x, y)| NumericPoint::new(x.to_vec(), y.to_vec()))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_round_trips(t in expr_text()) {
        let e = parse(&t, &coords()).unwrap();
        let printed = to_text(&e, Some(&coords()));
        let again = parse(&printed, &coords()).unwrap();
        prop_assert_eq!(&again, &e);
        // canonicalizing a canonical form is the identity
        prop_assert_eq!(to_text(&again, Some(&coords())), printed);
    }

    #[test]
    fn derivatives_commute(t in expr_text(), u in 0usize..4, v in 0usize..4) {
        let vars = [Var::Base(0), Var::Base(1), Var::Fiber(0), Var::Fiber(1)];
        let e = parse(&t, &coords()).unwrap();
        let a = e.diff(vars[u]).diff(vars[v]);
        let b = e.diff(vars[v]).diff(vars[u]);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn canonical_form_agrees_with_direct_evaluation(t in expr_text(), p in point()) {
        // evaluate the unsimplified tree directly and compare with the canonical form
        let node = finsler_symbolic::parse_node(&t, &coords()).unwrap();
        let e = node.canonicalize().unwrap();
        let direct = eval_node(&node, &p);
        let canonical = eval_at(&e, &p).unwrap();
        prop_assert!(close(direct, canonical), "{} vs {}", direct, canonical);
    }

    #[test]
    fn canonical_equality_is_sound(a in expr_text(), b in expr_text(), p in point()) {
        let ea = parse(&a, &coords()).unwrap();
        let eb = parse(&b, &coords()).unwrap();
        let sum = ea.add(&eb);
        let swapped = eb.add(&ea);
        prop_assert_eq!(&sum, &swapped);
        let lhs = eval_at(&sum, &p).unwrap();
        let rhs = eval_at(&ea, &p).unwrap() + eval_at(&eb, &p).unwrap();
        prop_assert!(close(lhs, rhs));
        if !eb.is_zero() {
            let q = ea.checked_div(&eb).unwrap();
            prop_assert_eq!(q.mul(&eb), ea);
        }
    }

    #[test]
    fn substitution_matches_evaluation(t in expr_text(), p in point()) {
        let e = parse(&t, &coords()).unwrap();
        let mut b = HashMap::new();
        b.insert(Var::Base(0), Expr::from_int(1));
        b.insert(Var::Fiber(1), parse("x2 + 1", &coords()).unwrap());
        let s = e.substitute(&b).unwrap();
        let mut q = p.clone();
        q.x[0] = 1.0;
        q.y[1] = p.x[1] + 1.0;
        prop_assert!(close(eval_at(&s, &p).unwrap(), eval_at(&e, &q).unwrap()));
    }
}

fn eval_node(n: &finsler_symbolic::Node, p: &NumericPoint) -> f64 {
    use finsler_symbolic::Node;
    use num_traits::ToPrimitive;
    match n {
        Node::Const(r) => r.to_f64().unwrap(),
        Node::Coord(v) => p.get(*v).unwrap(),
        Node::Sum(xs) => xs.iter().map(|x| eval_node(x, p)).sum(),
        Node::Product(xs) => xs.iter().map(|x| eval_node(x, p)).product(),
        Node::Pow(b, e, q) => eval_node(b, p).powf(*e as f64 / *q as f64),
        Node::Sqrt(b) => eval_node(b, p).sqrt(),
    }
}
