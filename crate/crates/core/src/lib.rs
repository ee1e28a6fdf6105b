//! Measure-based upper bounds for polynomial minimization on the box.
//!
//! For a polynomial `f` on `[-1, 1]^n`, restricting the optimization
//! `min f` to probability densities of bounded degree against a reference
//! measure gives a hierarchy of upper bounds: at level `d`,
//!
//! ```text
//! bound(d) = inf { int f sigma dmu : sigma >= 0 polynomial,
//!                  deg sigma <= 2d, int sigma dmu = 1 } .
//! ```
//!
//! Over an interval, nonnegativity of `sigma` can be written in sums of
//! squares, and expanding the squares in the tensor basis orthonormal
//! against `mu` reduces each level to a smallest-eigenvalue computation on
//! a matrix of size `binomial(n + d, d)`. Two density classes are
//! implemented: plain squares against a product Jacobi measure
//! ([`lasserre_bound`]), and squares times products of box-vanishing
//! factors `1 - x_i^2` against the Chebyshev measure ([`dkhl_bound`]).
//!
//! In one variable with `f = x`, the level-`d` matrices are the truncated
//! recurrence matrices of the underlying orthogonal families, so the
//! bounds are smallest roots of Jacobi polynomials and the convergence
//! rate `bound(d) - min f = Theta(1/d^2)` can be read off from root
//! asymptotics. The [`analysis`] machinery extends that rate statement to
//! `f = x^2 + alpha x` through an explicit pentadiagonal moment matrix, a
//! Toeplitz comparison block, and a circulant whose spectrum is known in
//! closed form; [`rate_fit`] measures empirical rates for everything else.
//!
//! The supporting layers are usable on their own: sparse polynomials in
//! graded-lex order ([`poly`]), Jacobi recurrences, evaluations, roots,
//! and extremal-root bounds ([`jacobi`]), Gauss-Jacobi rules and product
//! measures ([`quadrature`]), and a symmetric tridiagonal eigensolver
//! ([`tridiag`]).
//!
//! ```
//! use boxbound::{dkhl_bound, lasserre_bound, ProductJacobiMeasure, SparsePolynomial};
//!
//! let f = SparsePolynomial::parse("x1^2 + x1", 1)?;
//! let mu = ProductJacobiMeasure::chebyshev(1)?;
//!
//! let plain = lasserre_bound(&f, &mu, 8, false)?;
//! let weighted = dkhl_bound(&f, 8, false)?;
//! // Both overestimate the true minimum -1/4; the weighted family is tighter.
//! assert!(weighted.bound.value <= plain.value);
//! assert!(plain.value >= -0.25 && plain.value < -0.2);
//! # Ok::<(), boxbound::Error>(())
//! ```

pub mod analysis;
pub mod dkhl;
pub mod error;
pub mod jacobi;
pub mod lasserre;
pub mod poly;
pub mod quadrature;
pub mod tridiag;

pub use analysis::{
    circulant_spectrum, grid_bound, interlacing_chain, minimize_on_box, quadratic_chebyshev_matrix,
    quadratic_upper_estimator, rate_fit, BoxMinimum, CirculantSpectrum, GridKind,
    InterlacingReport, QuadraticEstimator, RateFit,
};
pub use dkhl::{dkhl_block, dkhl_bound, dkhl_bound_capped, DkhlBlock, DkhlOutcome};
pub use error::{Error, Result};
pub use jacobi::{
    evaluate_family, extremal_root_bounds, largest_root, recurrence_coefficients, roots,
    smallest_root, ExtremalRootBounds, JacobiMatrix, JacobiParams, RecurrenceCoefficients,
};
pub use lasserre::{
    build_moment_matrix, certificate_check, gram_matrix, lasserre_bound, orthonormality_defect,
    BoundResult, CertificateReport, DensityCertificate, Hierarchy, MomentMatrix,
};
pub use poly::{binomial, MultiIndex, MultiIndexSet, SparsePolynomial};
pub use quadrature::{
    gauss_jacobi, inner_product, integrate, ProductJacobiMeasure, QuadratureRule,
};
