//! Upper bounds from densities with explicit box-vanishing factors.
//!
//! The level-`d` bound minimizes `int f sigma dmu` over the Chebyshev
//! product measure and densities of the form
//!
//! ```text
//! sigma = h(x)^2 * prod_{i in I} (1 - x_i^2) ,   I subset of the axes,
//! ```
//!
//! with `deg sigma <= 2d`. For a fixed subset `I` the factor
//! `(1 - x_i^2) w_{-1/2,-1/2}(x_i) = w_{1/2,1/2}(x_i)` turns each weighted
//! axis into a plain Jacobi axis of the second-kind parameters, so the
//! optimal value over that subset is again the smallest eigenvalue of a
//! moment-like matrix: rows and columns run over `N(n, d - |I|)`, the basis
//! is the tensor family orthonormal per axis against `w_{1/2,1/2}` on
//! weighted axes and `w_{-1/2,-1/2}` elsewhere. The bound is the minimum
//! over all subsets with `|I| <= min(d, n)`.
//!
//! The empty subset reproduces the plain sum-of-squares bound against the
//! Chebyshev measure, so this hierarchy is never weaker at equal level. In
//! one variable with `f = x` the two candidate blocks are the recurrence
//! matrices of the two weight families, giving the closed form
//! `min(xi_{d+1}, eta_d)` over their smallest roots.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::jacobi::JacobiParams;
use crate::lasserre::{self, BoundResult, DensityCertificate, Hierarchy};
use crate::poly::{MultiIndexSet, SparsePolynomial};

/// Most variables the subset scan accepts by default; the scan visits
/// `2^n` blocks.
pub const DEFAULT_VARIABLE_CAP: usize = 6;

/// One subset's moment-like matrix.
#[derive(Clone, Debug)]
pub struct DkhlBlock {
    subset: Vec<usize>,
    index_set: MultiIndexSet,
    matrix: DMatrix<f64>,
}

impl DkhlBlock {
    /// Weighted axes, sorted ascending.
    pub fn subset(&self) -> &[usize] {
        &self.subset
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

    pub fn smallest_eigenvalue(&self) -> Result<f64> {
        Ok(lasserre::smallest_eigenpair(&self.matrix)?.0)
    }
}

/// The bound together with the subset that attains it.
#[derive(Clone, Debug)]
pub struct DkhlOutcome {
    pub bound: BoundResult,
    pub minimizing_subset: Vec<usize>,
}

/// Builds the block of one subset: entries
/// `int f b_alpha b_beta prod_{i in I} (1 - x_i^2) dmu_chebyshev` over
/// `N(n, d - |I|)`, with rules exact for `deg f + 2d` per coordinate.
pub fn dkhl_block(f: &SparsePolynomial, d: usize, subset: &[usize]) -> Result<DkhlBlock> {
    let n = f.n();
    let mut sorted: Vec<usize> = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subset.len() {
        return Err(Error::invalid("subset axes must be distinct"));
    }
    if let Some(&axis) = sorted.iter().find(|&&axis| axis >= n) {
        return Err(Error::invalid(format!(
            "subset axis {axis} out of range for {n} variables"
        )));
    }
    if sorted.len() > d {
        return Err(Error::invalid(format!(
            "subset of {} axes exceeds level {d}",
            sorted.len()
        )));
    }
    let families: Vec<JacobiParams> = (0..n)
        .map(|axis| {
            if sorted.binary_search(&axis).is_ok() {
                JacobiParams::chebyshev_second()
            } else {
                JacobiParams::chebyshev_first()
            }
        })
        .collect();
    let index_set = MultiIndexSet::new(n, (d - sorted.len()) as u32)?;
    let exactness = f.degree() as usize + 2 * d;
    let matrix = lasserre::assemble_matrix(f, &families, &index_set, exactness, 1.0)?;
    Ok(DkhlBlock {
        subset: sorted,
        index_set,
        matrix,
    })
}

/// The level-`d` bound, scanning all admissible subsets. Ties keep the
/// first subset in bitmask order, so the empty subset wins exact ties.
pub fn dkhl_bound(f: &SparsePolynomial, d: usize, with_certificate: bool) -> Result<DkhlOutcome> {
    dkhl_bound_capped(f, d, with_certificate, DEFAULT_VARIABLE_CAP)
}

/// Same scan with an explicit cap on the variable count.
pub fn dkhl_bound_capped(
    f: &SparsePolynomial,
    d: usize,
    with_certificate: bool,
    variable_cap: usize,
) -> Result<DkhlOutcome> {
    let n = f.n();
    if d == 0 {
        return Err(Error::invalid("level must be at least 1"));
    }
    if n > variable_cap || n > 24 {
        return Err(Error::resource(format!(
            "{n} variables need {} subset blocks, above the configured cap",
            1u128 << n
        )));
    }
    if f.is_constant() {
        let certificate = with_certificate.then(|| {
            let size = MultiIndexSet::new(n, d as u32)
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
        let bound = BoundResult {
            value: f.constant_term(),
            degree: d,
            hierarchy: Hierarchy::Dkhl,
            certificate,
        };
        return Ok(DkhlOutcome {
            bound,
            minimizing_subset: Vec::new(),
        });
    }

    let mut best_value = f64::INFINITY;
    let mut best_subset = Vec::new();
    let mut best_vector = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|&axis| mask & (1 << axis) != 0).collect();
        if subset.len() > d {
            continue;
        }
        let block = dkhl_block(f, d, &subset)?;
        let (value, vector) = lasserre::smallest_eigenpair(block.matrix())?;
        if value < best_value {
            best_value = value;
            best_subset = subset;
            best_vector = vector.iter().copied().collect();
        }
    }
    let certificate = with_certificate.then(|| DensityCertificate {
        degree: d,
        coefficients: best_vector,
        weighted_axes: best_subset.clone(),
    });
    let bound = BoundResult {
        value: best_value,
        degree: d,
        hierarchy: Hierarchy::Dkhl,
        certificate,
    };
    Ok(DkhlOutcome {
        bound,
        minimizing_subset: best_subset,
    })
}
