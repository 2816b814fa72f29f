mod common;

use common::{atom, ops, sum_form, Unimodular};
use num_bigint::BigInt;
use proptest::prelude::*;
use systole_core::quadform::{classify_indefinite_unimodular, direct_sum, invariants, is_isomorphic, Parity};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_sum_is_additive(a in prop::collection::vec(atom(), 1..3), b in prop::collection::vec(atom(), 1..3)) {
        let (qa, qb) = (sum_form(&a), sum_form(&b));
        let (ia, ib) = (invariants(&qa), invariants(&qb));
        let is = invariants(&direct_sum(&qa, &qb));
        prop_assert_eq!(is.rank, ia.rank + ib.rank);
        prop_assert_eq!(is.b_plus, ia.b_plus + ib.b_plus);
        prop_assert_eq!(is.b_minus, ia.b_minus + ib.b_minus);
        prop_assert_eq!(is.signature, ia.signature + ib.signature);
        prop_assert_eq!(&is.determinant, &(&ia.determinant * &ib.determinant));
        let even = ia.parity == Parity::Even && ib.parity == Parity::Even;
        prop_assert_eq!(is.parity == Parity::Even, even);
    }

    #[test]
    fn invariants_survive_change_of_basis(atoms in prop::collection::vec(atom(), 1..4), word in ops(12)) {
        let q = sum_form(&atoms);
        let u = Unimodular::from_ops(q.rank(), &word);
        let p = q.congruent(&u.u).unwrap();
        prop_assert_eq!(invariants(&p), invariants(&q));
        prop_assert_eq!(p.congruent(&u.inv).unwrap(), q.clone());
        if invariants(&q).unimodular && invariants(&q).is_indefinite() {
            prop_assert_eq!(classify_indefinite_unimodular(&p).unwrap(), classify_indefinite_unimodular(&q).unwrap());
            prop_assert!(is_isomorphic(&p, &q).unwrap());
        }
    }

    #[test]
    fn determinant_matches_diagonal_product(d in prop::collection::vec(prop_oneof![-6i64..=-1, 1i64..=6], 1..8), word in ops(10)) {
        let q = systole_core::quadform::build_diagonal_entries(&d).unwrap();
        let p = q.congruent(&Unimodular::from_ops(d.len(), &word).u).unwrap();
        let expected: BigInt = d.iter().map(|&x| BigInt::from(x)).product();
        prop_assert_eq!(p.determinant(), expected);
        let neg = d.iter().filter(|&&x| x < 0).count();
        prop_assert_eq!(invariants(&p).b_minus, neg);
    }
}
