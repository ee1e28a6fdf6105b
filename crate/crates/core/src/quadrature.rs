//! Gauss-Jacobi quadrature and product Jacobi measures on the box.
//!
//! One-dimensional rules come from the Golub-Welsch construction: the nodes
//! of the m-point rule are the eigenvalues of the order-m symmetric Jacobi
//! matrix of the orthonormal recurrence, and each weight is the squared
//! first component of the corresponding orthonormal eigenvector times the
//! total mass of the weight function. An m-point rule integrates every
//! polynomial of degree at most 2m-1 exactly.
//!
//! Multivariate integration against a product measure
//! `scaling * w_1(x_1) ... w_n(x_n) dx` tensorizes the per-axis rules.

use crate::error::{Error, Result};
use crate::jacobi::{self, JacobiParams};
use crate::poly::SparsePolynomial;

/// Hard cap on tensor-product node tuples visited by one integration call.
const NODE_BUDGET: usize = 20_000_000;

/// A one-dimensional quadrature rule with nodes in ascending order.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exactness_degree: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest polynomial degree integrated exactly.
    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// The m-point Gauss rule for the Jacobi weight `(1-x)^alpha (1+x)^beta`.
pub fn gauss_jacobi(params: &JacobiParams, m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::invalid("quadrature rule needs at least one node"));
    }
    let eig = jacobi::JacobiMatrix::new(params, m)?.eigen_with_first_components()?;
    let mass = params.mass();
    let weights = eig.first_components.iter().map(|z| mass * z * z).collect();
    Ok(QuadratureRule {
        nodes: eig.eigenvalues,
        weights,
        exactness_degree: 2 * m - 1,
    })
}

/// Node count that reaches `exactness_degree` plus a two-node safety margin.
pub(crate) fn node_count(exactness_degree: usize) -> usize {
    exactness_degree / 2 + 1 + 2
}

/// Product measure `scaling * prod_i w_{alpha_i, beta_i}(x_i) dx` on the box.
#[derive(Clone, Debug)]
pub struct ProductJacobiMeasure {
    params: Vec<JacobiParams>,
    scaling: f64,
}

impl ProductJacobiMeasure {
    pub fn new(params: Vec<JacobiParams>, scaling: f64) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::invalid(
                "product measure needs at least one coordinate",
            ));
        }
        if !(scaling.is_finite() && scaling > 0.0) {
            return Err(Error::invalid(format!(
                "measure scaling must be positive, got {scaling}"
            )));
        }
        Ok(ProductJacobiMeasure { params, scaling })
    }

    /// Chebyshev product measure `prod_i (1 - x_i^2)^(-1/2) dx`.
    pub fn chebyshev(n: usize) -> Result<Self> {
        Self::new(vec![JacobiParams::chebyshev_first(); n], 1.0)
    }

    /// Uniform (Legendre) product measure.
    pub fn legendre(n: usize) -> Result<Self> {
        Self::new(vec![JacobiParams::legendre(); n], 1.0)
    }

    /// Same coordinate weights under a different global scaling.
    pub fn with_scaling(&self, scaling: f64) -> Result<Self> {
        Self::new(self.params.clone(), scaling)
    }

    pub fn n(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[JacobiParams] {
        &self.params
    }

    pub fn axis(&self, i: usize) -> &JacobiParams {
        &self.params[i]
    }

    pub fn scaling(&self) -> f64 {
        self.scaling
    }

    /// Total measure of the box.
    pub fn total_mass(&self) -> f64 {
        self.scaling * self.params.iter().map(JacobiParams::mass).product::<f64>()
    }

    /// True when every coordinate weight is Chebyshev of the first kind.
    pub fn is_chebyshev(&self) -> bool {
        self.params
            .iter()
            .all(|p| *p == JacobiParams::chebyshev_first())
    }
}

/// Integrates a polynomial against a product Jacobi measure with tensorized
/// Gauss rules sized for `degree_hint`.
pub fn integrate(
    f: &SparsePolynomial,
    mu: &ProductJacobiMeasure,
    degree_hint: usize,
) -> Result<f64> {
    if f.n() != mu.n() {
        return Err(Error::invalid(format!(
            "polynomial has {} variables, measure has {}",
            f.n(),
            mu.n()
        )));
    }
    if degree_hint < f.degree() as usize {
        return Err(Error::invalid(format!(
            "degree hint {} below polynomial degree {}",
            degree_hint,
            f.degree()
        )));
    }
    let m = node_count(degree_hint);
    let rules: Vec<QuadratureRule> = mu
        .params()
        .iter()
        .map(|p| gauss_jacobi(p, m))
        .collect::<Result<_>>()?;
    let tuples = m
        .checked_pow(mu.n() as u32)
        .filter(|&t| t <= NODE_BUDGET)
        .ok_or_else(|| {
            Error::resource(format!(
                "{m}^{} tensor nodes exceed the integration budget",
                mu.n()
            ))
        })?;
    let _ = tuples;

    let n = mu.n();
    let mut index = vec![0usize; n];
    let mut point = vec![0.0f64; n];
    let mut total = 0.0;
    loop {
        let mut weight = mu.scaling();
        for axis in 0..n {
            point[axis] = rules[axis].nodes()[index[axis]];
            weight *= rules[axis].weights()[index[axis]];
        }
        total += weight * f.evaluate(&point)?;
        // Odometer increment over the tensor grid.
        let mut axis = n;
        loop {
            if axis == 0 {
                return Ok(total);
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < m {
                break;
            }
            index[axis] = 0;
        }
    }
}

/// Inner product of the `alpha`-th and `beta`-th tensor basis members
/// against the measure. With `normalized = true` the basis is the tensor
/// family orthonormal against the measure (scaling included), so the result
/// is a Kronecker delta up to quadrature rounding; otherwise the classical
/// per-axis families are used.
pub fn inner_product(
    alpha: &crate::poly::MultiIndex,
    beta: &crate::poly::MultiIndex,
    mu: &ProductJacobiMeasure,
    normalized: bool,
) -> Result<f64> {
    if alpha.len() != mu.n() || beta.len() != mu.n() {
        return Err(Error::invalid(format!(
            "basis indices have {} and {} entries, measure has {} coordinates",
            alpha.len(),
            beta.len(),
            mu.n()
        )));
    }
    // The integrand is a product of per-axis factors, so the tensor rule
    // collapses to a product of one-dimensional integrals.
    let mut product = mu.scaling();
    // The tensor basis orthonormal against the scaled measure carries one
    // global factor 1/sqrt(scaling) relative to the unscaled one.
    if normalized {
        product /= mu.scaling();
    }
    for axis in 0..mu.n() {
        let (j, k) = (alpha.exponent(axis) as usize, beta.exponent(axis) as usize);
        let degree = j.max(k);
        let rule = gauss_jacobi(mu.axis(axis), node_count(j + k))?;
        let mut integral = 0.0;
        for (node, weight) in rule.nodes().iter().zip(rule.weights()) {
            let values = jacobi::evaluate_family(mu.axis(axis), degree, *node, normalized);
            integral += weight * values[j] * values[k];
        }
        product *= integral;
    }
    Ok(product)
}
