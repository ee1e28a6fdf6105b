//! Measure-based upper bounds via sum-of-squares densities.
//!
//! For a polynomial `f`, a product Jacobi measure `mu` on the box
//! `[-1, 1]^n`, and a level `d`, the bound is
//!
//! ```text
//! inf { int f sigma dmu : sigma a sum of squares, deg sigma <= 2d,
//!       int sigma dmu = 1 }
//! ```
//!
//! Expanding `sigma = (sum_alpha u_alpha b_alpha)^2` over the tensor basis
//! orthonormal against `mu` turns the normalization into `|u| = 1` and the
//! objective into a quadratic form, so the bound is the smallest eigenvalue
//! of the moment-like matrix
//!
//! ```text
//! A[alpha, beta] = int f b_alpha b_beta dmu ,   alpha, beta in N(n, d),
//! ```
//!
//! and the minimizing unit eigenvector is an explicit optimal density.
//!
//! Matrix entries are products of one-dimensional Gauss integrals: for each
//! axis and each exponent `e` appearing in `f` on that axis, the table
//! `G_e[j, k] = int x^e b_j(x) b_k(x) w(x) dx` is computed once from a Gauss
//! rule exact for the full integrand degree, and every entry of `A` is a
//! short sum of products of table values. No quadrature runs per entry.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::{self, JacobiParams};
use crate::poly::{MultiIndexSet, SparsePolynomial};
use crate::quadrature::{self, gauss_jacobi, ProductJacobiMeasure};

/// Which bound family produced a value.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hierarchy {
    /// Sum-of-squares densities against a product Jacobi measure.
    Lasserre,
    /// Densities `sum_I sigma_I prod_{i in I} (1 - x_i^2)` against the
    /// Chebyshev measure.
    Dkhl,
    /// Minimum over the Chebyshev-Lobatto tensor grid.
    GridLobatto,
    /// Minimum over the evenly spaced tensor grid.
    GridRegular,
}

impl fmt::Display for Hierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Hierarchy::Lasserre => "lasserre",
            Hierarchy::Dkhl => "dkhl",
            Hierarchy::GridLobatto => "grid-lobatto",
            Hierarchy::GridRegular => "grid-regular",
        };
        write!(f, "{name}")
    }
}

/// An optimal-density witness for a reported bound.
///
/// `coefficients` expands the squared density factor over the tensor basis
/// members of `N(n, degree - |weighted_axes|)` in graded-lex order.
/// `weighted_axes` lists the 0-based axes whose density carries a
/// `(1 - x_i^2)` factor; it is empty for plain sum-of-squares densities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityCertificate {
    pub degree: usize,
    pub coefficients: Vec<f64>,
    pub weighted_axes: Vec<usize>,
}

/// A bound value at one hierarchy level.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: f64,
    pub degree: usize,
    pub hierarchy: Hierarchy,
    pub certificate: Option<DensityCertificate>,
}

/// Deviation of a certificate from feasibility and from its claimed value.
#[derive(Clone, Copy, Debug)]
pub struct CertificateReport {
    /// `|int sigma dmu - 1|`.
    pub mass_error: f64,
    /// `|int f sigma dmu - claimed|`.
    pub objective_error: f64,
}

/// Moment-like matrix of `f` over a tensor orthonormal basis.
#[derive(Clone, Debug)]
pub struct MomentMatrix {
    index_set: MultiIndexSet,
    matrix: DMatrix<f64>,
}

impl MomentMatrix {
    pub(crate) fn from_parts(index_set: MultiIndexSet, matrix: DMatrix<f64>) -> Self {
        MomentMatrix { index_set, matrix }
    }

    pub fn index_set(&self) -> &MultiIndexSet {
        &self.index_set
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest absolute asymmetry `|A - A^T|`; zero by construction here.
    pub fn symmetry_defect(&self) -> f64 {
        let mut defect = 0.0f64;
        for i in 0..self.order() {
            for j in (i + 1)..self.order() {
                defect = defect.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        defect
    }

    pub fn smallest_eigenvalue(&self) -> Result<f64> {
        Ok(smallest_eigenpair(&self.matrix)?.0)
    }
}

/// Per-axis Gauss rule plus orthonormal basis values at its nodes.
pub(crate) struct AxisTable {
    rule: quadrature::QuadratureRule,
    /// `values[k][node]`: k-th orthonormal member at each rule node.
    values: Vec<Vec<f64>>,
}

pub(crate) fn axis_table(
    params: &JacobiParams,
    basis_degree: usize,
    exactness_degree: usize,
) -> Result<AxisTable> {
    let rule = gauss_jacobi(params, quadrature::node_count(exactness_degree))?;
    let mut values = vec![Vec::with_capacity(rule.len()); basis_degree + 1];
    for &node in rule.nodes() {
        let member_values = jacobi::evaluate_family(params, basis_degree, node, true);
        for (k, v) in member_values.into_iter().enumerate() {
            values[k].push(v);
        }
    }
    Ok(AxisTable { rule, values })
}

/// `G_e[j, k] = int x^e b_j b_k w dx` for one axis, by the axis Gauss rule.
fn operator_table(axis: &AxisTable, exponent: u32) -> DMatrix<f64> {
    let order = axis.values.len();
    let mut table = DMatrix::zeros(order, order);
    for j in 0..order {
        for k in j..order {
            let mut total = 0.0;
            for (node_index, (&node, &weight)) in axis
                .rule
                .nodes()
                .iter()
                .zip(axis.rule.weights())
                .enumerate()
            {
                total += weight
                    * node.powi(exponent as i32)
                    * axis.values[j][node_index]
                    * axis.values[k][node_index];
            }
            table[(j, k)] = total;
            table[(k, j)] = total;
        }
    }
    table
}

/// Assembles `factor * int f b_alpha b_beta prod_i w_i dx` over the index
/// set, with a per-axis weight/basis family and rules exact for
/// `exactness_degree` per coordinate.
pub(crate) fn assemble_matrix(
    f: &SparsePolynomial,
    families: &[JacobiParams],
    index_set: &MultiIndexSet,
    exactness_degree: usize,
    factor: f64,
) -> Result<DMatrix<f64>> {
    let n = index_set.n();
    debug_assert_eq!(families.len(), n);
    debug_assert_eq!(f.n(), n);
    let basis_degree = index_set.degree() as usize;

    // Distinct exponents of f per axis drive which operator tables exist.
    let mut exponents: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    for (index, _) in f.terms() {
        for (axis, set) in exponents.iter_mut().enumerate() {
            set.insert(index.exponent(axis));
        }
    }

    let mut tables: Vec<Vec<(u32, DMatrix<f64>)>> = Vec::with_capacity(n);
    for axis in 0..n {
        let table = axis_table(&families[axis], basis_degree, exactness_degree)?;
        let per_exponent = exponents[axis]
            .iter()
            .map(|&e| (e, operator_table(&table, e)))
            .collect();
        tables.push(per_exponent);
    }
    let lookup = |axis: usize, e: u32| -> &DMatrix<f64> {
        let per_exponent = &tables[axis];
        &per_exponent[per_exponent
            .iter()
            .position(|(ex, _)| *ex == e)
            .expect("table built")]
        .1
    };

    let size = index_set.len();
    let mut matrix = DMatrix::zeros(size, size);
    for row in 0..size {
        let alpha = index_set.get(row);
        for col in row..size {
            let beta = index_set.get(col);
            let mut entry = 0.0;
            for (delta, coefficient) in f.terms() {
                let mut product = coefficient;
                for axis in 0..n {
                    product *= lookup(axis, delta.exponent(axis))
                        [(alpha.exponent(axis) as usize, beta.exponent(axis) as usize)];
                }
                entry += product;
            }
            entry *= factor;
            matrix[(row, col)] = entry;
            matrix[(col, row)] = entry;
        }
    }
    Ok(matrix)
}

/// The scaling of a measure cancels against the renormalized basis: the
/// matrix picks up `s` from the measure and `1/sqrt(s)` from each of the two
/// basis factors. Returns that combined factor (1 up to rounding).
fn scaling_factor(mu: &ProductJacobiMeasure) -> f64 {
    let s = mu.scaling();
    s / (s.sqrt() * s.sqrt())
}

/// Builds the moment-like matrix of `f` over `N(n, d)` for the tensor basis
/// orthonormal against `mu`, with per-coordinate Gauss rules exact for
/// `deg f + 2d`.
pub fn build_moment_matrix(
    f: &SparsePolynomial,
    mu: &ProductJacobiMeasure,
    d: usize,
) -> Result<MomentMatrix> {
    if f.n() != mu.n() {
        return Err(Error::invalid(format!(
            "polynomial has {} variables, measure has {}",
            f.n(),
            mu.n()
        )));
    }
    let index_set = MultiIndexSet::new(mu.n(), d as u32)?;
    let exactness = f.degree() as usize + 2 * d;
    let matrix = assemble_matrix(f, mu.params(), &index_set, exactness, scaling_factor(mu))?;
    Ok(MomentMatrix { index_set, matrix })
}

/// Gram matrix of the orthonormal tensor basis computed by quadrature;
/// equals the identity up to rounding. Exposed as a validation mode.
pub fn gram_matrix(mu: &ProductJacobiMeasure, d: usize) -> Result<DMatrix<f64>> {
    let one = SparsePolynomial::constant(mu.n(), 1.0)?;
    let index_set = MultiIndexSet::new(mu.n(), d as u32)?;
    assemble_matrix(&one, mu.params(), &index_set, 2 * d, scaling_factor(mu))
}

/// `max |B - I|` over the quadrature Gram matrix; a basis health check.
pub fn orthonormality_defect(mu: &ProductJacobiMeasure, d: usize) -> Result<f64> {
    let gram = gram_matrix(mu, d)?;
    let mut defect = 0.0f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let expected = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((gram[(i, j)] - expected).abs());
        }
    }
    Ok(defect)
}

/// Smallest eigenvalue and its unit eigenvector, sign-fixed so that the
/// largest-magnitude component is positive.
pub(crate) fn smallest_eigenpair(matrix: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let eigen = matrix
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::numeric("dense symmetric eigensolve did not converge"))?;
    let mut argmin = 0;
    for i in 1..eigen.eigenvalues.len() {
        if eigen.eigenvalues[i] < eigen.eigenvalues[argmin] {
            argmin = i;
        }
    }
    let mut vector = eigen.eigenvectors.column(argmin).into_owned();
    let mut largest = 0;
    for i in 1..vector.len() {
        if vector[i].abs() > vector[largest].abs() {
            largest = i;
        }
    }
    if vector[largest] < 0.0 {
        vector.neg_mut();
    }
    Ok((eigen.eigenvalues[argmin], vector))
}

/// The level-`d` sum-of-squares density bound on `min f` over the box.
///
/// Constant polynomials short-circuit to their value with the constant
/// density as certificate; no eigensolve runs.
pub fn lasserre_bound(
    f: &SparsePolynomial,
    mu: &ProductJacobiMeasure,
    d: usize,
    with_certificate: bool,
) -> Result<BoundResult> {
    if f.n() != mu.n() {
        return Err(Error::invalid(format!(
            "polynomial has {} variables, measure has {}",
            f.n(),
            mu.n()
        )));
    }
    if f.is_constant() {
        let certificate = with_certificate.then(|| {
            let size = MultiIndexSet::new(f.n(), d as u32)
                .map(|s| s.len())
                .unwrap_or(1);
            let mut coefficients = vec![0.0; size];
            coefficients[0] = 1.0;
            DensityCertificate {
                degree: d,
                coefficients,
                weighted_axes: Vec::new(),
            }
        });
        return Ok(BoundResult {
            value: f.constant_term(),
            degree: d,
            hierarchy: Hierarchy::Lasserre,
            certificate,
        });
    }
    let moment = build_moment_matrix(f, mu, d)?;
    let (value, vector) = smallest_eigenpair(moment.matrix())?;
    let certificate = with_certificate.then(|| DensityCertificate {
        degree: d,
        coefficients: vector.iter().copied().collect(),
        weighted_axes: Vec::new(),
    });
    Ok(BoundResult {
        value,
        degree: d,
        hierarchy: Hierarchy::Lasserre,
        certificate,
    })
}

/// Re-integrates a certificate density against the measure and reports how
/// far it is from unit mass and from the claimed bound value.
///
/// The density is `(sum_a u_a b_a)^2 prod_{i in I} (1 - x_i^2)` where the
/// basis members for axes in `I` belong to the (1/2, 1/2) family with the
/// quadratic factor absorbed into their weight. Certificates with a
/// non-empty `I` therefore require the Chebyshev measure.
pub fn certificate_check(
    certificate: &DensityCertificate,
    f: &SparsePolynomial,
    mu: &ProductJacobiMeasure,
    claimed: f64,
) -> Result<CertificateReport> {
    let n = mu.n();
    if f.n() != n {
        return Err(Error::invalid(format!(
            "polynomial has {} variables, measure has {}",
            f.n(),
            n
        )));
    }
    for &axis in &certificate.weighted_axes {
        if axis >= n {
            return Err(Error::invalid(format!("weighted axis {axis} out of range")));
        }
    }
    if !certificate.weighted_axes.is_empty() && !(mu.is_chebyshev() && mu.scaling() == 1.0) {
        return Err(Error::invalid(
            "certificates with weighted axes are defined against the unscaled Chebyshev measure",
        ));
    }
    if certificate.degree < certificate.weighted_axes.len() {
        return Err(Error::invalid(
            "certificate degree below its weighted axis count",
        ));
    }
    let basis_degree = certificate.degree - certificate.weighted_axes.len();
    let index_set = MultiIndexSet::new(n, basis_degree as u32)?;
    if certificate.coefficients.len() != index_set.len() {
        return Err(Error::invalid(format!(
            "certificate has {} coefficients, basis has {} members",
            certificate.coefficients.len(),
            index_set.len()
        )));
    }

    let families: Vec<JacobiParams> = (0..n)
        .map(|axis| {
            if certificate.weighted_axes.contains(&axis) {
                JacobiParams::chebyshev_second()
            } else {
                *mu.axis(axis)
            }
        })
        .collect();
    let exactness = f.degree() as usize + 4 * certificate.degree;
    let tables: Vec<AxisTable> = families
        .iter()
        .map(|family| axis_table(family, basis_degree, exactness))
        .collect::<Result<_>>()?;
    let m = tables[0].rule.len();
    m.checked_pow(n as u32)
        .filter(|&t| t <= 20_000_000)
        .ok_or_else(|| {
            Error::resource(format!(
                "{m}^{n} tensor nodes exceed the certificate check budget"
            ))
        })?;

    // One sweep over the tensor grid accumulates both integrals.
    let basis_factor = 1.0 / mu.scaling().sqrt();
    let mut index = vec![0usize; n];
    let mut point = vec![0.0f64; n];
    let mut mass = 0.0;
    let mut objective = 0.0;
    'grid: loop {
        let mut weight = mu.scaling();
        for axis in 0..n {
            point[axis] = tables[axis].rule.nodes()[index[axis]];
            weight *= tables[axis].rule.weights()[index[axis]];
        }
        let mut density_root = 0.0;
        for (position, member) in index_set.iter().enumerate() {
            let mut product = certificate.coefficients[position] * basis_factor;
            for axis in 0..n {
                product *= tables[axis].values[member.exponent(axis) as usize][index[axis]];
            }
            density_root += product;
        }
        let density = density_root * density_root;
        mass += weight * density;
        objective += weight * density * f.evaluate(&point)?;
        let mut axis = n;
        loop {
            if axis == 0 {
                break 'grid;
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < m {
                break;
            }
            index[axis] = 0;
        }
    }
    Ok(CertificateReport {
        mass_error: (mass - 1.0).abs(),
        objective_error: (objective - claimed).abs(),
    })
}
