use crlab_core::algebra::{parse_poly, Monomial, PointAssignment, Poly, RealFamily, Var, GR};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const VARS: [Var; 5] = [Var::Holo(crlab_core::algebra::Family::Z, 1), Var::Anti(crlab_core::algebra::Family::Z, 1),
    Var::Holo(crlab_core::algebra::Family::Z, 2), Var::Anti(crlab_core::algebra::Family::Z, 2), Var::Real(RealFamily::S, 1)];

fn coeff() -> impl Strategy<Value = GR> {
    (-9i64..=9, -9i64..=9, 1i64..=6).prop_map(|(a, b, d)| {
        GR::new(BigRational::new(BigInt::from(a), BigInt::from(d)), BigRational::new(BigInt::from(b), BigInt::from(d)))
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((coeff(), prop::collection::vec(0u32..3, VARS.len())), 0..6).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|(c, e)| {
            (Monomial::from_pairs(VARS.iter().copied().zip(e).collect()), c)
        }))
    })
}

fn point() -> impl Strategy<Value = PointAssignment> {
    (coeff(), coeff(), -5i64..=5).prop_map(|(a, b, s)| {
        PointAssignment::new()
            .with(Var::z(1), a).unwrap()
            .with(Var::z(2), b).unwrap()
            .with(Var::real(RealFamily::S, 1), GR::from(s)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn mixed_partials_commute(p in poly(), i in 0usize..5, j in 0usize..5) {
        let (u, v) = (VARS[i], VARS[j]);
        prop_assert_eq!(p.derive(u).derive(v), p.derive(v).derive(u));
    }

    #[test]
    fn conjugation_swaps_wirtinger_derivatives(p in poly(), j in 1u16..=2) {
        prop_assert_eq!(p.derive(Var::z(j)).conj(), p.conj().derive(Var::zbar(j)));
    }

    #[test]
    fn evaluation_respects_conjugation(p in poly(), at in point()) {
        prop_assert!(at.is_conjugate_consistent());
        prop_assert_eq!(p.conj().eval(&at).unwrap(), p.eval(&at).unwrap().conj());
    }

    #[test]
    fn printing_round_trips(p in poly()) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn exact_division_inverts_multiplication(p in poly(), q in poly()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).exact_div(&q), Some(p));
    }
}
