//! Property tests for the structural laws the spec pins down: the graded
//! order, border combinatorics, coefficient-vector round trips, Hankel
//! structure, and rank symmetries.

use std::collections::BTreeSet;

use proptest::prelude::*;

use realvar_core::linalg::{numeric_rank, rref_partial_pivot, DenseMatrix, RankTolerance};
use realvar_core::moment::{moment_matrix, LinearFunctional};
use realvar_core::poly::{
    border, binomial, is_connected_to_1, is_division_closed, monomials_up_to, prolong_monomials,
    Monomial, MonomialBasis, Polynomial,
};

fn arb_monomial(n: usize, max_deg: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_deg, n).prop_map(Monomial::new)
}

fn arb_monomial_set(n: usize) -> impl Strategy<Value = BTreeSet<Monomial>> {
    prop::collection::btree_set(arb_monomial(n, 3), 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_count_matches_binomial(n in 1usize..=4, t in 0usize..=6) {
        prop_assert_eq!(monomials_up_to(n, t).len(), binomial(n + t, t));
    }

    #[test]
    fn graded_order_respects_multiplication(
        a in arb_monomial(3, 4),
        b in arb_monomial(3, 4),
        c in arb_monomial(3, 4),
    ) {
        if a < b {
            prop_assert!(a.mul(&c) < b.mul(&c));
        }
    }

    #[test]
    fn border_partitions_the_prolongation(set in arb_monomial_set(2)) {
        let db = border(&set);
        prop_assert!(db.intersection(&set).next().is_none());
        let union: BTreeSet<Monomial> = db.union(&set).cloned().collect();
        prop_assert_eq!(union, prolong_monomials(&set));
    }

    #[test]
    fn division_closed_sets_are_connected(set in arb_monomial_set(2)) {
        // close the random set under division, then the connectivity test
        // must accept it
        let mut closed = set.clone();
        loop {
            let mut grew = false;
            for m in closed.clone() {
                for i in 0..m.num_vars() {
                    if let Some(d) = m.div_var(i) {
                        if closed.insert(d) {
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        prop_assert!(is_division_closed(&closed));
        prop_assert!(is_connected_to_1(&closed));
    }

    #[test]
    fn coefficient_vector_roundtrip(
        terms in prop::collection::vec((arb_monomial(2, 3), -10.0f64..10.0), 0..6)
    ) {
        let poly = Polynomial::from_terms(2, terms);
        let basis = MonomialBasis::new(2, 6);
        let v = poly.coefficient_vector(&basis).unwrap();
        let back = Polynomial::from_coefficient_vector(&v, &basis);
        prop_assert_eq!(poly, back);
    }

    #[test]
    fn moment_matrix_is_hankel(values in prop::collection::vec(-5.0f64..5.0, 15)) {
        // n = 2, order 4: |T^2_4| = 15 values; the matrix entry depends only
        // on the sum of the row and column exponents
        let l = LinearFunctional::new(2, 4, values);
        let m2 = moment_matrix(&l, 2).unwrap();
        prop_assert_eq!(m2.max_asymmetry(), 0.0);
        let basis = MonomialBasis::new(2, 2);
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                for k in 0..basis.len() {
                    for l2 in 0..basis.len() {
                        if basis.at(i).mul(basis.at(j)) == basis.at(k).mul(basis.at(l2)) {
                            prop_assert_eq!(m2.get(i, j), m2.get(k, l2));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rank_is_transpose_invariant(
        data in prop::collection::vec(-3.0f64..3.0, 24),
        split in 1usize..4,
    ) {
        let rows = 2 * split;
        let cols = 24 / rows;
        let a = DenseMatrix::from_vec(rows, cols, data);
        let tol = RankTolerance::default();
        let r1 = numeric_rank(&a, &tol).unwrap().rank;
        let r2 = numeric_rank(&a.transpose(), &tol).unwrap().rank;
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn rref_preserves_row_space(data in prop::collection::vec(-3.0f64..3.0, 20)) {
        let a = DenseMatrix::from_vec(4, 5, data);
        let tol = RankTolerance::default();
        let (r, pivots) = rref_partial_pivot(&a, &tol);
        let rank_a = numeric_rank(&a, &tol).unwrap().rank;
        // stacking the reduction on the original cannot change the rank
        let stacked = a.vstack(&r);
        prop_assert_eq!(numeric_rank(&stacked, &tol).unwrap().rank, rank_a);
        prop_assert!(pivots.len() <= rank_a + 1);
    }
}
