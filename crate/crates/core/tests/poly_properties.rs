mod common;

use common::poly;
use proptest::prelude::*;
use vilab_core::span::{combine, SpanBasis, SpanMembership};
use vilab_core::{Poly, F2, F3, F5, Q};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_f5(a in poly::<F5>(2, 3, 4, 2), b in poly::<F5>(2, 3, 4, 2), c in poly::<F5>(2, 3, 4, 2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn ring_axioms_q(a in poly::<Q>(2, 2, 3, 2), b in poly::<Q>(2, 2, 3, 2), c in poly::<Q>(2, 2, 3, 2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn frobenius(a2 in poly::<F2>(2, 2, 4, 2), b2 in poly::<F2>(2, 2, 4, 2),
                 a3 in poly::<F3>(2, 2, 3, 2), b3 in poly::<F3>(2, 2, 3, 2),
                 a5 in poly::<F5>(1, 3, 3, 1), b5 in poly::<F5>(1, 3, 3, 1)) {
        prop_assert_eq!((&a2 + &b2).pow(2), &a2.pow(2) + &b2.pow(2));
        prop_assert_eq!((&a3 + &b3).pow(3), &a3.pow(3) + &b3.pow(3));
        prop_assert_eq!((&a5 + &b5).pow(5), &a5.pow(5) + &b5.pow(5));
    }

    #[test]
    fn pow_matches_repeated_product(a in poly::<F5>(2, 2, 3, 2), e in 0u64..5) {
        let mut p = Poly::one();
        for _ in 0..e {
            p = &p * &a;
        }
        prop_assert_eq!(a.pow(e), p);
    }

    #[test]
    fn display_parses_back(a in poly::<Q>(2, 3, 4, 3)) {
        let text = a.to_string();
        prop_assert_eq!(vilab_core::poly::parse_poly::<Q>(&text).unwrap(), a);
    }

    #[test]
    fn span_coordinates_reproduce(inputs in prop::collection::vec(poly::<F5>(2, 2, 3, 2), 1..6),
                                  coeffs in prop::collection::vec(-3i64..=3, 6)) {
        let basis = SpanBasis::from_polys(&inputs);
        let mut v = Poly::zero();
        for (p, &c) in inputs.iter().zip(&coeffs) {
            v = &v + &p.scale(&<F5 as vilab_core::Field>::from_i64(c));
        }
        match basis.member(&v) {
            SpanMembership::Member(coords) => prop_assert_eq!(combine(&coords, &inputs), v),
            SpanMembership::NonMember(_) => prop_assert!(false, "combination of inputs reported outside the span"),
        }
    }

    #[test]
    fn span_is_deterministic(inputs in prop::collection::vec(poly::<Q>(2, 2, 3, 2), 0..6)) {
        let a = SpanBasis::from_polys(&inputs);
        let b = SpanBasis::from_polys(&inputs);
        prop_assert_eq!(a.rows().collect::<Vec<_>>(), b.rows().collect::<Vec<_>>());
        prop_assert_eq!(a.dim(), b.dim());
    }

    #[test]
    fn nonmember_residual_is_reduced(inputs in prop::collection::vec(poly::<F3>(2, 2, 3, 2), 0..4),
                                     v in poly::<F3>(2, 2, 3, 2)) {
        let basis = SpanBasis::from_polys(&inputs);
        if let SpanMembership::NonMember(r) = basis.member(&v) {
            prop_assert!(!r.is_zero());
            prop_assert!(basis.contains(&(&v - &r)));
        } else {
            prop_assert!(basis.contains(&v));
        }
    }
}
