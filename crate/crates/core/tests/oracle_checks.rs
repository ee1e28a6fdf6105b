//! Cross-checks of the library's numerics against independently derived
//! oracles: moment recurrences, Gram-Schmidt families, and Chebyshev
//! product linearization.

mod common;

use approx::assert_abs_diff_eq;
use boxbound::{
    build_moment_matrix, evaluate_family, gauss_jacobi, recurrence_coefficients, JacobiParams,
    ProductJacobiMeasure, SparsePolynomial,
};

const PARAMS: [(f64, f64); 5] = [
    (-0.5, -0.5),
    (0.0, 0.0),
    (0.5, 0.5),
    (0.5, -0.5),
    (1.5, 0.25),
];

#[test]
fn masses_match_the_beta_function_oracle() {
    for &(alpha, beta) in &PARAMS {
        let params = JacobiParams::new(alpha, beta).unwrap();
        let expected = common::mass_oracle(alpha, beta);
        assert_abs_diff_eq!(params.mass(), expected, epsilon = 1e-13 * expected);
    }
}

#[test]
fn gauss_rules_reproduce_moment_recurrence() {
    for &(alpha, beta) in &PARAMS {
        let params = JacobiParams::new(alpha, beta).unwrap();
        let moments = common::moments_oracle(alpha, beta, 25);
        for m in [4usize, 9, 13] {
            let rule = gauss_jacobi(&params, m).unwrap();
            for degree in 0..=(2 * m - 1).min(25) {
                let quadrature: f64 = rule
                    .nodes()
                    .iter()
                    .zip(rule.weights())
                    .map(|(x, w)| w * x.powi(degree as i32))
                    .sum();
                let scale = moments[0].max(moments[degree].abs());
                assert!(
                    (quadrature - moments[degree]).abs() <= 1e-12 * scale,
                    "moment {degree} off for ({alpha}, {beta}) with {m} nodes: \
                     {quadrature} vs {}",
                    moments[degree]
                );
            }
        }
    }
}

#[test]
fn recurrence_coefficients_match_gram_schmidt() {
    for &(alpha, beta) in &PARAMS {
        let params = JacobiParams::new(alpha, beta).unwrap();
        let degree = 6;
        let family = common::gram_schmidt_family(alpha, beta, degree + 1);
        let moments = common::moments_oracle(alpha, beta, 2 * (degree + 2));
        let coefficients = recurrence_coefficients(&params, degree + 1, true);
        for k in 0..=degree {
            let x_pk = common::shift_up(&family[k]);
            let b = common::moment_inner(&x_pk, &family[k], &moments);
            let a = common::moment_inner(&x_pk, &family[k + 1], &moments);
            assert_abs_diff_eq!(coefficients.b[k], b, epsilon = 1e-10);
            assert_abs_diff_eq!(coefficients.a[k], a, epsilon = 1e-10);
            assert!(coefficients.a[k] > 0.0, "offdiagonal must stay positive");
            if k > 0 {
                // Symmetric recurrence: the down coefficient repeats the
                // previous up coefficient.
                assert_abs_diff_eq!(coefficients.c[k], coefficients.a[k - 1], epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn orthonormal_evaluations_match_gram_schmidt() {
    for &(alpha, beta) in &PARAMS {
        let params = JacobiParams::new(alpha, beta).unwrap();
        let degree = 6;
        let family = common::gram_schmidt_family(alpha, beta, degree);
        for &x in &[-0.9, -0.3, 0.3, 0.7] {
            let values = evaluate_family(&params, degree, x, true);
            for k in 0..=degree {
                let expected = common::eval_coefficients(&family[k], x);
                assert_abs_diff_eq!(values[k], expected, epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn classical_legendre_evaluation_reference() {
    // P_4(x) = (35 x^4 - 30 x^2 + 3) / 8 at x = 0.3.
    let x: f64 = 0.3;
    let expected = (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0;
    let values = evaluate_family(&JacobiParams::legendre(), 4, x, false);
    assert_abs_diff_eq!(values[4], expected, epsilon = 1e-12);
}

#[test]
fn chebyshev_moment_entries_match_linearization() {
    let mu = ProductJacobiMeasure::chebyshev(1).unwrap();
    for f in [
        SparsePolynomial::parse("x1^2 + x1", 1).unwrap(),
        SparsePolynomial::parse("x1^4 - x1^2", 1).unwrap(),
        SparsePolynomial::parse("x1^3 - 1/2*x1 + 2", 1).unwrap(),
    ] {
        let moment = build_moment_matrix(&f, &mu, 8).unwrap();
        for j in 0..=8 {
            for k in 0..=8 {
                let expected = common::chebyshev_moment_entry(&f, j, k);
                assert_abs_diff_eq!(moment.matrix()[(j, k)], expected, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn tensor_entries_factor_into_linearization_products() {
    // For f = x1^2 * x2^2 each entry splits into two univariate factors.
    let f = SparsePolynomial::parse("x1^2*x2^2", 2).unwrap();
    let mu = ProductJacobiMeasure::chebyshev(2).unwrap();
    let moment = build_moment_matrix(&f, &mu, 3).unwrap();
    let x2 = SparsePolynomial::parse("x1^2", 1).unwrap();
    let set = moment.index_set();
    for row in 0..set.len() {
        for col in 0..set.len() {
            let a = set.get(row);
            let b = set.get(col);
            let expected =
                common::chebyshev_moment_entry(&x2, a.exponent(0) as usize, b.exponent(0) as usize)
                    * common::chebyshev_moment_entry(
                        &x2,
                        a.exponent(1) as usize,
                        b.exponent(1) as usize,
                    );
            assert_abs_diff_eq!(moment.matrix()[(row, col)], expected, epsilon = 1e-12);
        }
    }
}

#[test]
fn monomial_chebyshev_expansion_reproduces_powers() {
    for m in 0..=9usize {
        let coefficients = common::monomial_in_chebyshev(m);
        for &x in &[-0.8f64, -0.25, 0.0, 0.4, 1.0] {
            let theta = x.clamp(-1.0, 1.0).acos();
            let reconstructed: f64 = coefficients
                .iter()
                .enumerate()
                .map(|(l, &c)| c * (l as f64 * theta).cos())
                .sum();
            assert_abs_diff_eq!(reconstructed, x.powi(m as i32), epsilon = 1e-13);
        }
    }
}

#[test]
fn box_oracle_agrees_with_library_minimizer() {
    for text in ["x1^2 + x1", "x1^4 - x1^2", "x1*x2 + x1"] {
        let n = if text.contains("x2") { 2 } else { 1 };
        let f = SparsePolynomial::parse(text, n).unwrap();
        let (_, oracle_value) = common::box_minimum_oracle(&f);
        let library = boxbound::minimize_on_box(&f, None).unwrap();
        assert_abs_diff_eq!(oracle_value, library.value, epsilon = 1e-9);
    }
}
