use catdyn::exact_linalg::{growth_signature, ExactMatrix};
use catdyn::quiver_hereditary::{
    check_isometry, coxeter_matrix, euler_form, hereditary_report, order_up_to_sign, BasisTag, EulerLattice, Quiver,
};
use catdyn::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn acyclic() -> impl Strategy<Value = Quiver> {
    (1usize..=6).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (Just(n), Just(pairs), prop::collection::vec(0usize..=2, m), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    })
    .prop_map(|(n, pairs, mult, order)| {
        let arrows = pairs
            .iter()
            .zip(mult)
            .flat_map(|(&(a, b), k)| std::iter::repeat((order[a], order[b])).take(k))
            .collect();
        Quiver::new(n, arrows).unwrap()
    })
}

#[test]
fn cycles_and_loops_are_rejected() {
    assert!(Quiver::new(2, vec![(0, 1), (1, 0)]).is_err());
    assert!(Quiver::new(1, vec![(0, 0)]).is_err());
    assert!(Quiver::new(2, vec![(0, 2)]).is_err());
    assert!(Quiver::from_one_based(2, &[(0, 1)]).is_err());
}

#[test]
fn a_n_has_finite_order() {
    for n in 1..=8 {
        let q = Quiver::linear_a(n).unwrap();
        let phi = coxeter_matrix(&q);
        // the Coxeter number of A_n is n + 1
        assert!(phi.pow(n as u64 + 1).is_identity(), "n = {n}");
        assert!(order_up_to_sign(&phi, 100).is_some());
        let g = growth_signature(&phi).unwrap();
        assert!(g.rho_is_one());
        assert_eq!(g.s, 0);
    }
}

#[test]
fn kronecker_quivers() {
    let r2 = hereditary_report(&euler_form(&Quiver::kronecker(2)), &coxeter_matrix(&Quiver::kronecker(2))).unwrap();
    assert_eq!((r2.h_cat, r2.h_pol), (0.0, 1));
    assert!(r2.crosscheck.passed);
    let q3 = Quiver::kronecker(3);
    let r3 = hereditary_report(&euler_form(&q3), &coxeter_matrix(&q3)).unwrap();
    let want = ((7.0 + 45f64.sqrt()) / 2.0).ln();
    assert!((r3.h_cat - want).abs() < 1e-12);
    assert_eq!(r3.h_pol, 0);
    assert!(r3.crosscheck.passed);
}

#[test]
fn non_isometry_is_rejected() {
    let q = Quiver::linear_a(3).unwrap();
    let lat = euler_form(&q);
    let bad = ExactMatrix::from_i64(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    assert!(!check_isometry(&lat, &bad).unwrap());
    assert!(matches!(hereditary_report(&lat, &bad), Err(Error::NotAnIsometry)));
    assert!(check_isometry(&lat, &ExactMatrix::identity(2)).is_err());
}

#[test]
fn user_lattice_is_tagged() {
    let lat = EulerLattice::user(ExactMatrix::identity(2));
    assert_eq!(lat.basis_tag, BasisTag::UserSupplied);
    assert_eq!(euler_form(&Quiver::kronecker(2)).basis_tag, BasisTag::Simples);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_form_is_unimodular(q in acyclic()) {
        let lat = euler_form(&q);
        prop_assert_eq!(lat.gram.det(), BigRational::from_integer(BigInt::from(1)));
        for i in 0..q.vertex_count() {
            for j in 0..q.vertex_count() {
                let want = i64::from(i == j) - q.arrow_count(i, j) as i64;
                prop_assert_eq!(lat.gram.get(i, j), &BigRational::from_integer(BigInt::from(want)));
            }
        }
    }

    #[test]
    fn coxeter_is_an_integer_isometry(q in acyclic()) {
        let lat = euler_form(&q);
        let phi = coxeter_matrix(&q);
        prop_assert!(phi.is_integer());
        prop_assert!(check_isometry(&lat, &phi).unwrap());
        prop_assert!(phi.det().numer().magnitude() == &num_bigint::BigUint::from(1u8));
    }

    #[test]
    fn hereditary_report_agrees_with_the_signature(q in acyclic()) {
        let lat = euler_form(&q);
        let phi = coxeter_matrix(&q);
        let r = hereditary_report(&lat, &phi).unwrap();
        let g = growth_signature(&phi).unwrap();
        prop_assert!((r.h_cat - g.log_rho()).abs() < 1e-12);
        prop_assert_eq!(r.h_pol, g.s);
    }
}
