use berezin_core::{DecayOrder, GaussianRational as Q, Poly, RatFunc};
use proptest::prelude::*;

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-5i64..=5, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(3), nonzero_poly(3)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn finite(d: DecayOrder) -> Option<i64> {
    match d {
        DecayOrder::Finite(k) => Some(k),
        DecayOrder::Infinite => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eval_is_a_ring_homomorphism(f in ratfunc(), g in ratfunc(), k in -20i64..=20) {
        if let (Ok(a), Ok(b)) = (f.eval(k), g.eval(k)) {
            prop_assert_eq!(f.add(&g).eval(k).unwrap(), &a + &b);
            prop_assert_eq!(f.mul(&g).eval(k).unwrap(), &a * &b);
            prop_assert_eq!(f.sub(&g).eval(k).unwrap(), &a - &b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decay_order_is_additive(f in ratfunc(), g in ratfunc()) {
        let prod = f.mul(&g).decay_order();
        match (finite(f.decay_order()), finite(g.decay_order())) {
            (Some(a), Some(b)) => prop_assert_eq!(prod, DecayOrder::Finite(a + b)),
            _ => prop_assert_eq!(prod, DecayOrder::Infinite),
        }
    }

    #[test]
    fn canonical_form_is_idempotent(f in ratfunc(), c in nonzero_poly(2), s in 1i64..=7) {
        prop_assert_eq!(RatFunc::new(f.num().clone(), f.den().clone()).unwrap(), f.clone());
        // common factors and scalings cancel
        let scaled = RatFunc::new(
            f.num().mul(&c).scale(&Q::from_int(s)),
            f.den().mul(&c).scale(&Q::from_int(s)),
        )
        .unwrap();
        prop_assert_eq!(scaled, f);
    }

    #[test]
    fn shift_matches_evaluation(f in ratfunc(), s in -5i64..=5, k in -10i64..=10) {
        if let Ok(v) = f.eval(k + s) {
            prop_assert_eq!(f.shift(s).eval(k).unwrap(), v);
        }
    }

    #[test]
    fn division_inverts_multiplication(f in ratfunc(), g in ratfunc()) {
        if !g.is_zero() {
            prop_assert_eq!(f.mul(&g).div(&g).unwrap(), f);
        }
    }
}
