//! Property tests for the algebra, the statistics and the reduction systems.

use proptest::prelude::*;
use qmm::algebra::{Monomial, TermRecord};
use qmm::rewrite::{ReductionSystem, SystemName};
use qmm::stats::{is_circuit, phi, phi_sf};
use qmm::{Biword, Expression, LaurentPoly, Word};

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, -2i32..=2, -3i32..=3), 0..4).prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|(c, t, q)| (Monomial::new(t, q), c.into())))
    })
}

fn biword(r: u16, max_len: usize) -> impl Strategy<Value = Biword> {
    (0..=max_len).prop_flat_map(move |n| {
        (prop::collection::vec(1..=r, n), prop::collection::vec(1..=r, n)).prop_map(|(t, b)| {
            Biword::new(Word::from_values(&t).unwrap(), Word::from_values(&b).unwrap()).unwrap()
        })
    })
}

fn circuit(r: u16, max_len: usize) -> impl Strategy<Value = Biword> {
    prop::collection::vec(1..=r, 0..=max_len)
        .prop_flat_map(|bottom| (Just(bottom.clone()), Just(bottom).prop_shuffle()))
        .prop_map(|(bottom, top)| Biword::new(Word::from_values(&top).unwrap(), Word::from_values(&bottom).unwrap()).unwrap())
}

fn expr_of(terms: impl Strategy<Value = Biword>) -> impl Strategy<Value = Expression> {
    prop::collection::vec((terms, poly()), 0..4).prop_map(Expression::from_terms)
}

fn expr() -> impl Strategy<Value = Expression> {
    expr_of(biword(3, 3))
}

fn system() -> impl Strategy<Value = SystemName> {
    prop::sample::select(SystemName::ALL.to_vec())
}

proptest! {
    #[test]
    fn poly_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn poly_text_round_trip(a in poly()) {
        let back: LaurentPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn expression_ring_laws(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &Expression::one(), a.clone());
        prop_assert_eq!(&Expression::one() * &a, a.clone());
        prop_assert!((&a * &Expression::zero()).is_zero());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn expression_text_and_records_round_trip(a in expr()) {
        let back: Expression = a.to_string().parse().unwrap();
        prop_assert_eq!(&back, &a);
        let signed: Expression = a.render_signed().parse().unwrap();
        prop_assert_eq!(&signed, &a);
        let json = serde_json::to_string(&a.to_records()).unwrap();
        let records: Vec<TermRecord> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(Expression::from_records(&records).unwrap(), a);
    }

    #[test]
    fn leftmost_reduction_is_an_irreducible_projection(name in system(), a in expr()) {
        let sys = ReductionSystem::new(name);
        let reduced = sys.leftmost_reduce(&a).unwrap();
        prop_assert!(sys.is_irreducible_expr(&reduced));
        prop_assert_eq!(sys.leftmost_reduce(&reduced).unwrap(), reduced);
    }

    #[test]
    fn leftmost_reduction_is_linear(name in system(), a in expr(), b in expr(), c in poly()) {
        let sys = ReductionSystem::new(name);
        let lhs = sys.leftmost_reduce(&(&a + &b.scale(&c))).unwrap();
        let rhs = &sys.leftmost_reduce(&a).unwrap() + &sys.leftmost_reduce(&b).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rewriting_preserves_lengths_and_letter_multisets(name in system(), b in biword(4, 5)) {
        let sys = ReductionSystem::new(name);
        for i in sys.match_positions(&b) {
            let next = sys.reduce_at(&b, i + 1).unwrap();
            for x in next.support() {
                prop_assert_eq!(x.len(), b.len());
                prop_assert_eq!(x.top().sorted(), b.top().sorted());
                prop_assert_eq!(x.bottom().sorted(), b.bottom().sorted());
                // (inv top, inv bottom) drops lexicographically.
                prop_assert!((x.top().inv(), x.bottom().inv()) < (b.top().inv(), b.bottom().inv()));
            }
        }
    }

    #[test]
    fn unique_systems_are_strategy_independent(b in biword(3, 4)) {
        for name in [SystemName::Sr, SystemName::SrQ, SystemName::Sf, SystemName::SfQ, SystemName::Sm, SystemName::SqQ] {
            let sys = ReductionSystem::new(name);
            let leftmost = sys.reduce_biword(&b).unwrap();
            for i in sys.match_positions(&b) {
                let other = sys.leftmost_reduce(&sys.reduce_at(&b, i + 1).unwrap()).unwrap();
                prop_assert_eq!(&other, &leftmost);
            }
        }
    }

    #[test]
    fn weights_are_multiplicative_on_circuits(a in expr_of(circuit(3, 3)), b in expr_of(circuit(3, 3))) {
        prop_assert!(a.support().all(is_circuit));
        prop_assert_eq!(phi(&(&a * &b)), &phi(&a) * &phi(&b));
        prop_assert_eq!(phi_sf(&(&a * &b)), &phi_sf(&a) * &phi_sf(&b));
    }

    #[test]
    fn weight_transport(a in expr_of(circuit(3, 4))) {
        let (sr, srq) = (ReductionSystem::new(SystemName::Sr), ReductionSystem::new(SystemName::SrQ));
        prop_assert_eq!(phi(&sr.leftmost_reduce(&a).unwrap()), srq.leftmost_reduce(&phi(&a)).unwrap());
        let (sf, sfq) = (ReductionSystem::new(SystemName::Sf), ReductionSystem::new(SystemName::SfQ));
        prop_assert_eq!(phi_sf(&sf.leftmost_reduce(&a).unwrap()), sfq.leftmost_reduce(&phi_sf(&a)).unwrap());
    }
}
