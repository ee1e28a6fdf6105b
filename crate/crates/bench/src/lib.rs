//! Shared fixtures for the criterion benchmarks: a few polynomials at the
//! sizes the hierarchy targets, so both bench binaries measure identical
//! inputs.

use boxbound::{MultiIndex, SparsePolynomial};

/// `x^2 + x` in one variable, the standard quadratic test case.
pub fn univariate_quadratic() -> SparsePolynomial {
    SparsePolynomial::parse("x1^2 + x1", 1).expect("fixture parses")
}

/// A dense-ish bivariate quartic exercising mixed monomials.
pub fn bivariate_quartic() -> SparsePolynomial {
    SparsePolynomial::parse("x1^4 - 2*x1^2*x2^2 + x2^4 + x1*x2 - 0.5*x1 + 0.25*x2", 2)
        .expect("fixture parses")
}

/// A trivariate cubic for the subset scan of the weighted hierarchy.
pub fn trivariate_cubic() -> SparsePolynomial {
    SparsePolynomial::parse("x1*x2*x3 + x1^2 - x2 + 0.5*x3^2", 3).expect("fixture parses")
}

/// Builds a polynomial with every monomial of total degree `degree` in two
/// variables, unit coefficients; scales moment-matrix assembly stress.
pub fn full_bivariate(degree: u32) -> SparsePolynomial {
    let mut terms = Vec::new();
    for total in 0..=degree {
        for first in 0..=total {
            terms.push((MultiIndex::new(vec![first, total - first]), 1.0));
        }
    }
    SparsePolynomial::from_terms(2, terms).expect("fixture assembles")
}
