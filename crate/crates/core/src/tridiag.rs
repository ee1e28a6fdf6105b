//! Eigenvalues of symmetric tridiagonal matrices by the implicit-shift QL
//! iteration.
//!
//! This is the classic EISPACK/Numerical Recipes `tql2`-style sweep: chase a
//! single Wilkinson-shifted rotation down each unreduced block until the
//! subdiagonal entry is negligible. The solver optionally accumulates the
//! first row of the orthogonal eigenvector matrix, which is exactly what
//! Gauss quadrature weight extraction needs, without storing full
//! eigenvectors.

use crate::error::{Error, Result};

/// Iteration cap per eigenvalue before the solve is declared stuck.
const MAX_SWEEPS: usize = 50;

/// Eigen decomposition summary of a symmetric tridiagonal matrix.
#[derive(Clone, Debug)]
pub struct TridiagonalEigen {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// First component of the orthonormal eigenvector for each eigenvalue,
    /// in the same order.
    pub first_components: Vec<f64>,
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the
/// given diagonal and subdiagonal.
pub fn eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let (mut d, mut e) = check_input(diag, offdiag)?;
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues plus the first eigenvector components, both ascending by
/// eigenvalue.
pub fn eigen_with_first_components(diag: &[f64], offdiag: &[f64]) -> Result<TridiagonalEigen> {
    let (mut d, mut e) = check_input(diag, offdiag)?;
    let mut z = vec![0.0; d.len()];
    z[0] = 1.0;
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    Ok(TridiagonalEigen {
        eigenvalues: order.iter().map(|&i| d[i]).collect(),
        first_components: order.iter().map(|&i| z[i]).collect(),
    })
}

fn check_input(diag: &[f64], offdiag: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if diag.is_empty() {
        return Err(Error::invalid(
            "tridiagonal matrix must have at least order 1",
        ));
    }
    if offdiag.len() + 1 != diag.len() {
        return Err(Error::invalid(format!(
            "subdiagonal length {} does not match order {}",
            offdiag.len(),
            diag.len()
        )));
    }
    if diag.iter().chain(offdiag).any(|v| !v.is_finite()) {
        return Err(Error::invalid("tridiagonal entries must be finite"));
    }
    let d = diag.to_vec();
    // One trailing slot acts as the scratch sentinel of the QL sweep.
    let mut e = offdiag.to_vec();
    e.push(0.0);
    Ok((d, e))
}

/// In-place implicit-shift QL iteration. `e` carries the subdiagonal in
/// `e[0..n-1]` with `e[n-1]` a scratch slot. When `z` is given it starts as a
/// row vector (first row of the identity) and is rotated alongside, ending as
/// the first row of the eigenvector matrix.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Find the end of the unreduced block starting at l.
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::numeric(format!(
                    "tridiagonal QL did not converge for eigenvalue {l} within {MAX_SWEEPS} sweeps"
                )));
            }
            // Wilkinson shift from the leading 2x2 of the block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // A rotation annihilated early; discard the partial shift
                    // and restart the sweep on the shrunk block.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(row) = z.as_deref_mut() {
                    let h = row[i + 1];
                    row[i + 1] = s * row[i] + c * h;
                    row[i] = c * row[i] - s * h;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
