use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;

pub(crate) fn small_poly() -> impl Strategy<Value = Poly4> {
    let term = ((-6i64..=6, 1i64..=4), (0u32..3, 0u32..3, 0u32..3, 0u32..3));
    prop::collection::vec(term, 0..5).prop_map(|ts| {
        Poly4::from_terms(
            ts.into_iter()
                .map(|((n, d), (a, b, c, e))| (Monomial([a, b, c, e]), rat(n, d))),
        )
    })
}

fn coord() -> impl Strategy<Value = Coord> {
    (0usize..4).prop_map(|i| Coord::from_index(i).unwrap())
}

fn small_point() -> impl Strategy<Value = Point4<Rational>> {
    prop::array::uniform4((-16i64..=16, prop::sample::select(vec![1i64, 2, 4])))
        .prop_map(|a| Point4(a.map(|(n, d)| rat(n, d))))
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(p in small_poly()) {
        prop_assert_eq!(parse(&p.to_string(), &BTreeMap::new()).unwrap(), p);
    }

    #[test]
    fn ring_laws(p in small_poly(), q in small_poly(), r in small_poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn leibniz_rule(p in small_poly(), q in small_poly(), c in coord()) {
        let lhs = (&p * &q).differentiate(c);
        let rhs = &(&p.differentiate(c) * &q) + &(&p * &q.differentiate(c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_partials_commute(p in small_poly(), i in coord(), j in coord()) {
        prop_assert_eq!(
            p.differentiate(i).differentiate(j),
            p.differentiate(j).differentiate(i)
        );
    }

    #[test]
    fn exact_evaluation_is_additive(p in small_poly(), q in small_poly(), x in small_point()) {
        prop_assert_eq!((&p + &q).eval_exact(&x), p.eval_exact(&x) + q.eval_exact(&x));
    }

    #[test]
    fn exact_and_float_paths_agree(p in small_poly(), x in small_point()) {
        let exact = p.eval_exact(&x);
        let approx = p.eval_float(&x.to_f64()).unwrap();
        let reference = rational::abs_f64(&exact);
        let value = crate::expression::poly::rational_to_f64(&exact);
        // relative to the size of the individual terms, which bounds cancellation
        let scale: f64 = p
            .terms()
            .map(|(m, c)| {
                let t = Poly4::monomial(c.clone(), *m).eval_exact(&x);
                rational::abs_f64(&t)
            })
            .sum::<f64>()
            .max(reference);
        prop_assert!((approx - value).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
    }
}
