use dispkit::displacement::DisplacementKind::{Delta, Nabla};
use dispkit::matrix::{alternating_shift, reverse_identity, shift_matrix};
use dispkit::structured::{
    alternate_toeplitz_example, random_hankel, random_integer_matrix, random_toeplitz,
    rank3_toeplitz_example, rank_deficient_hankel, rank_deficient_toeplitz, rng_from_seed,
};
use dispkit::verify::*;
use dispkit::{Error, FMatrix, QMatrix, Rational, Scalar};
use proptest::prelude::*;

fn s(n: usize) -> QMatrix {
    shift_matrix(n)
}

fn st(n: usize) -> QMatrix {
    shift_matrix::<Rational>(n).transpose()
}

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

#[test]
fn link_on_identity_with_shifts() {
    let [a, b] = check_link_dn(&QMatrix::identity(5), &s(5), &s(5)).unwrap();
    assert!(a.holds && b.holds);
    assert_eq!(a.witnesses["dN[Z,Z*]{I}"], 1);
    // I - S I S has rank 5; S* - S has rank 4.
    assert_eq!(a.lhs, 5);
    assert_eq!(b.lhs, 0);
}

#[test]
fn link_equality_witness_exists() {
    let w = find_link_equality_witness(0, 200_000).unwrap().expect("witness");
    assert_eq!(w.check.lhs, w.check.rhs);
    assert!(w.check.witnesses["dN[Z,Z*]{I}"] >= 1);
}

#[test]
fn inverse_duality_on_identity_and_diagonal() {
    let [d, n] = check_inverse_duality(&QMatrix::identity(6), &s(6), &st(6)).unwrap();
    assert_eq!((n.lhs, n.rhs), (1, 1));
    assert!(d.holds);
    let diag = QMatrix::diagonal(&[q(2), q(-1), q(3), q(5)]);
    for c in check_inverse_duality(&diag, &s(4), &s(4)).unwrap() {
        assert!(c.holds, "{c}");
    }
    let singular = rank3_toeplitz_example();
    assert!(matches!(
        check_inverse_duality(&singular, &s(5), &st(5)),
        Err(Error::Singular { .. })
    ));
}

#[test]
fn regularized_with_zero_shift_is_duality_plus_slack() {
    let mut rng = rng_from_seed(4);
    let t: QMatrix = loop {
        let t = random_toeplitz(&mut rng, 5, 5);
        if dispkit::rank::exact_rank(&t).rank == 5 {
            break t;
        }
    };
    let [n, _] = check_regularized(&t, &s(5), &st(5), &q(0)).unwrap();
    assert_eq!(n.lhs, n.witnesses["dN[Z,N]{A}"]);
    assert_eq!(n.rhs, n.lhs + 1);
}

#[test]
fn regularized_alternate_toeplitz() {
    let a = alternate_toeplitz_example();
    let z: QMatrix = alternating_shift(5);
    for c in check_regularized(&a, &z, &-&z.transpose(), &q(1)).unwrap() {
        assert!(c.holds, "{c}");
    }
}

#[test]
fn regularized_toeplitz_needs_toeplitz_input() {
    let a = alternate_toeplitz_example();
    assert!(check_regularized_toeplitz(&a, &q(1)).is_err());
    let t = rank3_toeplitz_example();
    let c = check_regularized_toeplitz(&t, &q(1)).unwrap();
    assert_eq!(c.len(), 2);
    assert!(c.iter().all(|c| c.holds && c.lhs == 2));
}

#[test]
fn regularized_toeplitz_with_zero_first_row() {
    // First row off-diagonal part vanishes: only the shifted form is asserted.
    let t: QMatrix = dispkit::structured::toeplitz_i64(&[1, 2, 3, 4], &[1, 0, 0, 0]).unwrap();
    let c = check_regularized_toeplitz(&t, &q(2)).unwrap();
    assert_eq!(c.len(), 1);
    assert!(c[0].holds, "{}", c[0]);
}

#[test]
fn schur_of_block_diagonal_is_trailing_block() {
    let mut rng = rng_from_seed(9);
    let a: QMatrix = QMatrix::diagonal(&[q(1), q(2), q(3)]);
    let d: QMatrix = random_toeplitz(&mut rng, 3, 3);
    let m = a.direct_sum(&d).unwrap();
    let c = check_schur(&m, &s(3), &st(3), &s(3), &st(3), Nabla).unwrap();
    assert!(c.holds);
    assert!(c.lhs <= 2);
}

#[test]
fn product_with_identity_factor() {
    let mut rng = rng_from_seed(5);
    let a: QMatrix = random_toeplitz(&mut rng, 4, 4);
    let i = QMatrix::identity(4);
    let c = check_product(&a, &i, &s(4), &st(4), &st(4), &st(4), Nabla).unwrap();
    assert!(c.holds);
    assert_eq!(c.witnesses["dN[N2,Z2]{A2}"], c.witnesses["dN[N1,N2]{I}"]);
}

#[test]
fn rectangular_product_identity_in_floats() {
    let mut rng = rng_from_seed(6);
    let a: FMatrix = dispkit::structured::random_float_matrix(&mut rng, 5, 7);
    let b: FMatrix = dispkit::structured::random_float_matrix(&mut rng, 7, 4);
    let c = check_product_rect(
        &a,
        &b,
        &shift_matrix(5),
        &reverse_identity(7),
        &shift_matrix(7),
        &alternating_shift(4),
    )
    .unwrap();
    assert!(c.holds, "{c}");
    let r = c.residuals["leibniz"];
    assert!(r.value <= r.bound && r.bound > 0.0);
}

#[test]
fn inverse_pair_has_null_dual_displacement() {
    let mut rng = rng_from_seed(7);
    let a: QMatrix = loop {
        let a = random_integer_matrix(&mut rng, 4, 4);
        if dispkit::rank::exact_rank(&a).rank == 4 {
            break a;
        }
    };
    let b = dispkit::inverses::inverse(&a).unwrap();
    let c = check_leibniz_dual(&a, &b, &s(4), &reverse_identity(4)).unwrap();
    assert!(c.holds);
    assert_eq!(c.residuals["null"].value, 0.0);
    assert_eq!(c.lhs, 0);
}

#[test]
fn full_rank_pinv_of_orthonormal_columns() {
    // Columns of a permutation: B = A*.
    let a = QMatrix::from_i64_rows(&[[0, 1], [1, 0], [0, 0], [0, 0]]).unwrap();
    for c in check_full_rank_pinv(&a, &s(4), &s(2)).unwrap() {
        assert!(c.holds, "{c}");
    }
    assert!(check_pinv_rect(&a, &s(4), &s(2)).unwrap().holds);
}

#[test]
fn tall_toeplitz_first_bound_is_six() {
    let mut rng = rng_from_seed(8);
    let t: QMatrix = random_toeplitz(&mut rng, 8, 5);
    let [first, second] = check_full_rank_pinv(&t, &s(8), &s(5)).unwrap();
    assert_eq!(first.rhs, 6);
    assert!(first.holds && second.holds);
    assert!(first.lhs <= 4);
}

#[test]
fn pinv_psym_on_worked_examples() {
    let a = alternate_toeplitz_example();
    let z: QMatrix = alternating_shift(5);
    let c = check_pinv_psym(&a, &reverse_identity(5), &z, &-&z.transpose()).unwrap();
    assert_eq!((c.lhs, c.rhs), (4, 4));
    let t = rank3_toeplitz_example();
    let c = check_pinv_psym(&t, &reverse_identity(5), &s(5), &st(5)).unwrap();
    assert_eq!((c.lhs, c.rhs), (4, 4));
    let err = check_pinv_psym(&t, &QMatrix::identity(5), &s(5), &st(5)).unwrap_err();
    assert!(matches!(err, Error::HypothesisViolated { what: "PZP = N", .. }));
}

#[test]
fn rank_pinv_branches() {
    let h = rank_deficient_hankel(5, 1, 3).unwrap();
    let c = check_rank_pinv(&h, &s(5), &s(5)).unwrap();
    assert!(c.holds);
    assert!(c.lhs <= 2);
    let t = rank3_toeplitz_example();
    let c = check_rank_pinv(&t, &s(5), &st(5)).unwrap();
    assert_eq!((c.lhs, c.relation, c.rhs), (4, Relation::Lt, 6));
    let zero = QMatrix::zeros(4, 4);
    let c = check_rank_pinv(&zero, &s(4), &st(4)).unwrap();
    assert_eq!((c.lhs, c.relation, c.rhs), (0, Relation::Le, 0));
}

#[test]
fn pinv_ht_hankel_bound_is_five() {
    let mut rng = rng_from_seed(10);
    for _ in 0..20 {
        let h: QMatrix = random_hankel(&mut rng, 5, 5);
        let [n, d] = check_pinv_ht(&h, Family::Hankel).unwrap();
        assert!(n.holds && d.holds);
        assert!(d.rhs <= 5);
    }
}

#[test]
fn pinv_rect_on_truncated_rank_deficient_toeplitz() {
    let t = rank_deficient_toeplitz(7, 2, 1).unwrap().submatrix(0, 7, 0, 4);
    let c = check_pinv_rect(&t, &s(7), &s(4)).unwrap();
    assert!(c.holds, "{c}");
    assert_eq!(c.witnesses["rank{A}"], 2);
    assert!(check_pinv_rect(&t.transpose(), &s(4), &s(7)).is_err());
}

#[test]
fn penrose_and_oracle_checks() {
    let a = QMatrix::from_i64_rows(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]).unwrap();
    let c = check_penrose(&a).unwrap();
    assert!(c.holds, "{c}");
    assert_eq!(c.rhs, 2);
    assert!(check_oracle_rank(&a).unwrap().holds);
}

#[test]
fn block_mp_on_invertible_blocks() {
    let p = QMatrix::from_i64_rows(&[[2, 1], [0, 1]]).unwrap();
    let a1 = QMatrix::from_i64_rows(&[[1, 0], [1, 1]]).unwrap();
    let a2 = QMatrix::from_i64_rows(&[[0, 1], [1, 3]]).unwrap();
    let c = check_block_mp(&p, &a1, &a2).unwrap();
    assert!(c.holds, "{c}");
    assert_eq!(c.residuals["vs-inverse"].value, 0.0);
}

#[test]
fn suite_report_serializes_with_stable_keys() {
    let r = run_suite("pinv-ht", 3, 11, DEFAULT_SIZES).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in ["suite", "trials", "seed", "checks", "failures"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let c = &v["checks"][0];
    assert_eq!(c["relation"], "<=");
    assert!(c["instance_digest"].as_str().unwrap().len() == 16);
}

#[test]
fn sizes_are_validated() {
    assert!(run_suite("schur", 1, 0, (0, 3)).is_err());
    assert!(run_suite("schur", 1, 0, (5, 3)).is_err());
}

#[test]
fn all_suite_is_the_union() {
    let all = run_suite("all", 2, 5, (3, 5)).unwrap();
    let parts: usize = SUITES
        .iter()
        .filter(|s| **s != "all")
        .map(|s| run_suite(s, 2, 5, (3, 5)).unwrap().checks.len())
        .sum();
    assert_eq!(all.checks.len(), parts);
    assert!(all.passed(), "{:?}", all.failures);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn holds_matches_relation(lhs in 0usize..10, rhs in 0usize..10) {
        for rel in [Relation::Le, Relation::Eq, Relation::Lt] {
            let c = BoundCheck::new("x", lhs, rel, rhs);
            prop_assert_eq!(c.holds, rel.eval(lhs, rhs));
            let c = c.residual("r", 1.0, 0.5);
            prop_assert!(!c.holds);
        }
    }

    #[test]
    fn link_checks_record_every_rank(seed in any::<u64>(), m in 2usize..6, n in 2usize..6) {
        let mut rng = rng_from_seed(seed);
        let a: QMatrix = random_integer_matrix(&mut rng, m, n);
        let z: QMatrix = random_integer_matrix(&mut rng, m, m);
        let nn: QMatrix = random_integer_matrix(&mut rng, n, n);
        for c in check_link_dn(&a, &z, &nn).unwrap() {
            prop_assert!(c.holds, "{}", c);
            prop_assert_eq!(c.witnesses.len(), 5);
        }
    }

    #[test]
    fn schur_bound_on_random_invertible(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = rng_from_seed(seed);
        let m: QMatrix = random_integer_matrix(&mut rng, n, n);
        let k = 1 + (seed as usize) % (n - 1);
        let full = |a: &QMatrix| dispkit::rank::exact_rank(a).rank == a.rows();
        prop_assume!(full(&m) && full(&m.submatrix(0, k, 0, k)));
        for kind in [Nabla, Delta] {
            let c = check_schur(&m, &s(k), &st(k), &st(n - k), &s(n - k), kind).unwrap();
            prop_assert!(c.holds, "{}", c);
        }
    }

    #[test]
    fn same_seed_same_report(seed in any::<u64>()) {
        let a = run_suite("link-dn", 4, seed, (2, 5)).unwrap();
        let b = run_suite("link-dn", 4, seed, (2, 5)).unwrap();
        prop_assert_eq!(a, b);
    }
}
