//! Closed forms against the slow reference implementations.

use std::sync::Arc;

use num_rational::BigRational as Q;
use tangent_core::anchor::{anchor_inverse_matrix, anchor_matrix};
use tangent_core::hyperlin::{kron_det, kron_inverse, kron_product, CubeMatrix};
use tangent_core::json::{tangent_from_json, tangent_to_json};
use tangent_verify::gen::{Gen, LabelKind};
use tangent_verify::oracle;

fn rows(m: &CubeMatrix<Q>) -> oracle::Matrix {
    m.rows().map(<[Q]>::to_vec).collect()
}

const KINDS: [LabelKind; 3] = [LabelKind::Regular, LabelKind::Singular, LabelKind::Mixed];

#[test]
fn product_matches_polynomial_reduction() {
    let mut gen = Gen::new(1);
    for n in 1..=4 {
        for kind in KINDS {
            if kind == LabelKind::Mixed && n < 2 {
                continue;
            }
            for _ in 0..10 {
                let label = Arc::new(gen.label(n, kind));
                let (x, y) = (gen.element(&label), gen.element(&label));
                let expected = oracle::algebra_mul(x.coeffs(), y.coeffs(), &label);
                assert_eq!(x.mul(&y).unwrap().coeffs(), expected.as_slice(), "{x} · {y}");
            }
        }
    }
}

#[test]
fn anchor_is_corner_evaluation() {
    let mut gen = Gen::new(2);
    for n in 0..=5 {
        let label = gen.label(n, LabelKind::Regular);
        assert_eq!(rows(&anchor_matrix(&label)), oracle::anchor_by_evaluation(&label));
        let inverse = oracle::gauss_inverse(&oracle::anchor_by_evaluation(&label)).unwrap();
        assert_eq!(rows(&anchor_inverse_matrix(&label).unwrap()), inverse, "{label}");
    }
}

#[test]
fn anchor_determinant() {
    let mut gen = Gen::new(3);
    for n in 1..=4 {
        let label = gen.label(n, LabelKind::Regular);
        let det = oracle::determinant(&rows(&anchor_matrix(&label)));
        let mut expected = label.diff().into_iter().fold(Q::from_integer(1.into()), |a, d| a * d);
        for _ in 1..n {
            expected = expected.clone() * expected;
        }
        assert_eq!(det, expected, "{label}");
    }
}

#[test]
fn kronecker_against_textbook_product() {
    let mut gen = Gen::new(4);
    for n in 1..=4 {
        for _ in 0..5 {
            let blocks = gen.blocks(n, true);
            let naive = oracle::naive_kron(&blocks);
            assert_eq!(rows(&kron_product(&blocks).unwrap()), naive);
            assert_eq!(kron_det(&blocks), oracle::determinant(&naive));
            let invertible = gen.blocks(n, false);
            let expected = oracle::gauss_inverse(&oracle::naive_kron(&invertible)).unwrap();
            assert_eq!(rows(&kron_inverse(&invertible).unwrap()), expected);
        }
    }
}

#[test]
fn json_round_trip_of_random_elements() {
    let mut gen = Gen::new(5);
    for n in 0..=3 {
        let label = Arc::new(gen.label(n, LabelKind::Regular));
        let x = gen.element(&label);
        assert_eq!(tangent_from_json::<Q>(&tangent_to_json(&x)).unwrap(), x);
    }
}
