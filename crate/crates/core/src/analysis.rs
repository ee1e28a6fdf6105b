//! Convergence-rate analysis and elementary reference bounds.
//!
//! The hierarchy gap for `f = x^2 + alpha x` against the Chebyshev measure
//! shrinks as `Theta(1/d^2)`, and the upper half of that statement reduces
//! to linear algebra carried out here. Over the orthonormal Chebyshev
//! basis the moment-like matrix of `f` is pentadiagonal with constant
//! interior bands ([`quadratic_chebyshev_matrix`]); its interior rows form
//! a banded Toeplitz block, which in turn is a principal submatrix of a
//! circulant with symbol
//!
//! ```text
//! c(theta) = 1/2 + alpha cos(theta) + (1/2) cos(2 theta)
//!          = cos^2(theta) + alpha cos(theta) .
//! ```
//!
//! Cauchy interlacing therefore chains the smallest eigenvalues as
//! `lambda_min(moment) <= lambda_min(toeplitz) <= lambda_3(circulant)`
//! ([`interlacing_chain`]), and the circulant eigenvalues are explicit
//! cosine samples of `c` ([`circulant_spectrum`]) whose third smallest
//! approaches `min c = -alpha^2/4` (for `|alpha| <= 2`) at rate `1/d^2`.
//!
//! The remaining items are frames of reference for measuring rates on
//! general polynomials: a multistart projected-gradient box minimizer, a
//! separable quadratic upper estimator that touches `f` at its minimizer,
//! and plain tensor-grid bounds.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lasserre::{self, BoundResult, Hierarchy, MomentMatrix};
use crate::poly::{MultiIndex, MultiIndexSet, SparsePolynomial};

/// The moment-like matrix of `f = x^2 + alpha x` over the orthonormal
/// Chebyshev basis, written in closed form.
///
/// Linearizing `x T_j` and `x^2 T_j` leaves five bands. The first two rows
/// feel the different normalization of the constant member and the
/// endpoint of the recurrence, so their entries deviate from the interior
/// pattern; every later row, including the last one, carries the exact
/// band values since no truncation enters the integrals.
pub fn quadratic_chebyshev_matrix(alpha: f64, d: usize) -> Result<MomentMatrix> {
    if !alpha.is_finite() {
        return Err(Error::invalid("linear coefficient must be finite"));
    }
    if d < 4 {
        return Err(Error::invalid("closed-form matrix needs level at least 4"));
    }
    let order = d + 1;
    let sqrt2 = 2.0f64.sqrt();
    let mut matrix = DMatrix::zeros(order, order);
    matrix[(0, 0)] = 0.5;
    matrix[(1, 1)] = 0.75;
    for i in 2..order {
        matrix[(i, i)] = 0.5;
    }
    matrix[(0, 1)] = alpha / sqrt2;
    for i in 1..order - 1 {
        matrix[(i, i + 1)] = alpha / 2.0;
    }
    matrix[(0, 2)] = 1.0 / (2.0 * sqrt2);
    for i in 1..order - 2 {
        matrix[(i, i + 2)] = 0.25;
    }
    for i in 0..order {
        for j in (i + 1)..order {
            matrix[(j, i)] = matrix[(i, j)];
        }
    }
    Ok(MomentMatrix::from_parts(
        MultiIndexSet::new(1, d as u32)?,
        matrix,
    ))
}

/// Spectrum of the order `d+1` comparison circulant for `f = x^2 + alpha x`.
#[derive(Clone, Debug)]
pub struct CirculantSpectrum {
    order: usize,
    diagonal: f64,
    first_band: f64,
    second_band: f64,
    eigenvalues: Vec<f64>,
}

/// Eigenvalues of the circulant with diagonal 1/2, adjacent band `alpha/2`,
/// and distance-two band 1/4, all indices mod `d+1`:
///
/// ```text
/// lambda_j = cos^2(theta_j) + alpha cos(theta_j),  theta_j = 2 pi j / (d+1).
/// ```
///
/// The spectrum is symmetric under `j -> d+1-j`; mirrored entries are
/// copied rather than recomputed so the symmetry holds exactly.
pub fn circulant_spectrum(alpha: f64, d: usize) -> Result<CirculantSpectrum> {
    if !alpha.is_finite() {
        return Err(Error::invalid("linear coefficient must be finite"));
    }
    if d < 5 {
        return Err(Error::invalid(
            "comparison circulant needs level at least 5",
        ));
    }
    let order = d + 1;
    let mut eigenvalues = vec![0.0; order];
    for j in 0..=order / 2 {
        let theta = 2.0 * PI * j as f64 / order as f64;
        let value = 0.5 + alpha * theta.cos() + 0.5 * (2.0 * theta).cos();
        eigenvalues[j] = value;
        if j != 0 && j != order - j {
            eigenvalues[order - j] = value;
        }
    }
    Ok(CirculantSpectrum {
        order,
        diagonal: 0.5,
        first_band: alpha / 2.0,
        second_band: 0.25,
        eigenvalues,
    })
}

impl CirculantSpectrum {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn diagonal(&self) -> f64 {
        self.diagonal
    }

    pub fn first_band(&self) -> f64 {
        self.first_band
    }

    pub fn second_band(&self) -> f64 {
        self.second_band
    }

    /// Eigenvalues in frequency order `j = 0, ..., d`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut sorted = self.eigenvalues.clone();
        sorted.sort_by(f64::total_cmp);
        sorted
    }

    pub fn smallest(&self) -> f64 {
        self.sorted()[0]
    }

    /// Third smallest eigenvalue, multiplicities counted.
    pub fn third_smallest(&self) -> f64 {
        self.sorted()[2]
    }

    /// The dense circulant matrix itself, for cross-checks.
    pub fn dense(&self) -> DMatrix<f64> {
        let mut matrix = DMatrix::zeros(self.order, self.order);
        for i in 0..self.order {
            matrix[(i, i)] = self.diagonal;
            let next = (i + 1) % self.order;
            let next2 = (i + 2) % self.order;
            matrix[(i, next)] += self.first_band;
            matrix[(next, i)] += self.first_band;
            matrix[(i, next2)] += self.second_band;
            matrix[(next2, i)] += self.second_band;
        }
        matrix
    }
}

/// The three smallest-eigenvalue comparisons along the interlacing chain.
#[derive(Clone, Copy, Debug)]
pub struct InterlacingReport {
    pub lambda_min_moment: f64,
    pub lambda_min_toeplitz: f64,
    pub lambda3_circulant: f64,
    pub holds: bool,
}

/// Verifies `lambda_min(moment) <= lambda_min(toeplitz) <= lambda_3(circulant)`
/// for `f = x^2 + alpha x` at level `d`.
///
/// The Toeplitz block is rows and columns `2..=d` of the moment matrix; it
/// is a principal submatrix of both neighbours in the chain (of the moment
/// matrix directly, of the circulant after deleting two rows), so both
/// inequalities are instances of Cauchy interlacing.
pub fn interlacing_chain(alpha: f64, d: usize) -> Result<InterlacingReport> {
    if d < 6 {
        return Err(Error::invalid("interlacing chain needs level at least 6"));
    }
    let moment = quadratic_chebyshev_matrix(alpha, d)?;
    let toeplitz = moment.matrix().view((2, 2), (d - 1, d - 1)).into_owned();
    let lambda_min_moment = lasserre::smallest_eigenpair(moment.matrix())?.0;
    let lambda_min_toeplitz = lasserre::smallest_eigenpair(&toeplitz)?.0;
    let lambda3_circulant = circulant_spectrum(alpha, d)?.third_smallest();
    let tolerance = 1e-10 * (1.0 + alpha.abs());
    let holds = lambda_min_moment <= lambda_min_toeplitz + tolerance
        && lambda_min_toeplitz <= lambda3_circulant + tolerance;
    Ok(InterlacingReport {
        lambda_min_moment,
        lambda_min_toeplitz,
        lambda3_circulant,
        holds,
    })
}

/// A located box minimum.
#[derive(Clone, Debug)]
pub struct BoxMinimum {
    pub point: Vec<f64>,
    pub value: f64,
}

/// Reference minimizer of `f` over the box, used to turn bound values into
/// gaps. Multistart projected gradient descent with Armijo backtracking:
/// starts come from the `{-1, 0, 1}^n` lattice, a coarse tensor grid when
/// affordable, and seeded random points; the best end point gets a
/// coordinate-wise golden-section polish.
///
/// This is a numerical oracle, not a certified global minimizer; for the
/// low-degree polynomials the hierarchies target, the lattice of sign
/// patterns reliably covers the basin of the global minimum.
pub fn minimize_on_box(f: &SparsePolynomial, seed: Option<u64>) -> Result<BoxMinimum> {
    let n = f.n();
    if n > 9 {
        return Err(Error::resource(format!(
            "box minimization scans 3^{n} lattice starts, above the cap"
        )));
    }
    let gradient: Vec<SparsePolynomial> = (0..n)
        .map(|axis| f.partial_derivative(axis))
        .collect::<Result<_>>()?;

    let mut pool: Vec<Vec<f64>> = Vec::new();
    let mut lattice = vec![0usize; n];
    'lattice: loop {
        pool.push(lattice.iter().map(|&i| i as f64 - 1.0).collect());
        let mut axis = n;
        loop {
            if axis == 0 {
                break 'lattice;
            }
            axis -= 1;
            lattice[axis] += 1;
            if lattice[axis] < 3 {
                break;
            }
            lattice[axis] = 0;
        }
    }
    if 21usize.checked_pow(n as u32).is_some_and(|p| p <= 200_000) {
        let mut index = vec![0usize; n];
        'grid: loop {
            pool.push(index.iter().map(|&i| -1.0 + i as f64 / 10.0).collect());
            let mut axis = n;
            loop {
                if axis == 0 {
                    break 'grid;
                }
                axis -= 1;
                index[axis] += 1;
                if index[axis] < 21 {
                    break;
                }
                index[axis] = 0;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0x0b0c_5eed));
    for _ in 0..64 {
        pool.push((0..n).map(|_| rng.random_range(-1.0..=1.0)).collect());
    }

    let mut scored: Vec<(f64, Vec<f64>)> = Vec::with_capacity(pool.len());
    for point in pool {
        let value = f.evaluate(&point)?;
        scored.push((value, point));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    scored.truncate(32);

    let mut best_value = f64::INFINITY;
    let mut best_point = vec![0.0; n];
    for (_, start) in scored {
        let (point, value) = projected_gradient(f, &gradient, start)?;
        if value < best_value {
            best_value = value;
            best_point = point;
        }
    }

    for _ in 0..3 {
        for axis in 0..n {
            let (coordinate, value) = golden_polish(f, &best_point, axis, best_value)?;
            if value < best_value {
                best_value = value;
                best_point[axis] = coordinate;
            }
        }
    }
    if !best_value.is_finite() {
        return Err(Error::numeric(
            "box minimization produced a non-finite value",
        ));
    }
    Ok(BoxMinimum {
        point: best_point,
        value: best_value,
    })
}

fn projected_gradient(
    f: &SparsePolynomial,
    gradient: &[SparsePolynomial],
    start: Vec<f64>,
) -> Result<(Vec<f64>, f64)> {
    let n = start.len();
    let mut x = start;
    let mut fx = f.evaluate(&x)?;
    let mut g = vec![0.0; n];
    for _ in 0..300 {
        for axis in 0..n {
            g[axis] = gradient[axis].evaluate(&x)?;
        }
        // Stationarity residual: gradient components that still point at a
        // feasible descent direction.
        let mut residual = 0.0f64;
        for axis in 0..n {
            let blocked_low = x[axis] <= -1.0 && g[axis] > 0.0;
            let blocked_high = x[axis] >= 1.0 && g[axis] < 0.0;
            if !(blocked_low || blocked_high) {
                residual = residual.max(g[axis].abs());
            }
        }
        if residual <= 1e-12 {
            break;
        }
        let mut step = 1.0;
        let mut moved = false;
        while step >= 1e-18 {
            let candidate: Vec<f64> = (0..n)
                .map(|i| (x[i] - step * g[i]).clamp(-1.0, 1.0))
                .collect();
            let predicted: f64 = (0..n).map(|i| g[i] * (x[i] - candidate[i])).sum();
            let value = f.evaluate(&candidate)?;
            if value < fx && fx - value >= 1e-4 * predicted {
                x = candidate;
                fx = value;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Ok((x, fx))
}

fn golden_polish(
    f: &SparsePolynomial,
    point: &[f64],
    axis: usize,
    current: f64,
) -> Result<(f64, f64)> {
    const RATIO: f64 = 0.618_033_988_749_894_9;
    let mut probe = point.to_vec();
    let mut low = (point[axis] - 1e-2).max(-1.0);
    let mut high = (point[axis] + 1e-2).min(1.0);
    let eval = |coordinate: f64, probe: &mut Vec<f64>| -> Result<f64> {
        probe[axis] = coordinate;
        f.evaluate(probe)
    };
    let mut a = high - RATIO * (high - low);
    let mut b = low + RATIO * (high - low);
    let mut fa = eval(a, &mut probe)?;
    let mut fb = eval(b, &mut probe)?;
    for _ in 0..80 {
        if fa < fb {
            high = b;
            b = a;
            fb = fa;
            a = high - RATIO * (high - low);
            fa = eval(a, &mut probe)?;
        } else {
            low = a;
            a = b;
            fa = fb;
            b = low + RATIO * (high - low);
            fb = eval(b, &mut probe)?;
        }
    }
    let coordinate = if fa < fb { a } else { b };
    let value = fa.min(fb);
    // Endpoints of the bracket can beat the interior probes.
    let at_low = eval(low.max(-1.0), &mut probe)?;
    let at_high = eval(high.min(1.0), &mut probe)?;
    let mut best = (coordinate, value);
    if at_low < best.1 {
        best = (low, at_low);
    }
    if at_high < best.1 {
        best = (high, at_high);
    }
    if current < best.1 {
        best = (point[axis], current);
    }
    Ok(best)
}

/// A separable quadratic that dominates `f` on the box and touches it at
/// the anchor point.
#[derive(Clone, Debug)]
pub struct QuadraticEstimator {
    pub estimator: SparsePolynomial,
    pub minimizer: Vec<f64>,
    pub minimum: f64,
    pub curvature_bound: f64,
}

/// Builds `g(x) = f(a) + grad f(a) . (x - a) + C |x - a|^2` with `C` the
/// largest Hessian spectral norm sampled on a 101-per-axis tensor grid.
///
/// Taylor expansion with the Lagrange remainder gives `g >= f` on the box
/// (the remainder carries `C/2`, so the grid estimate of the true maximum
/// has a factor-two margin). When `a` is a box minimizer of `f`, it
/// satisfies the first-order conditions for the convex `g` as well, so the
/// box minimum of `g` equals `f(a)` exactly.
pub fn quadratic_upper_estimator(
    f: &SparsePolynomial,
    anchor: Option<&[f64]>,
) -> Result<QuadraticEstimator> {
    let n = f.n();
    if n > 3 {
        return Err(Error::resource(format!(
            "curvature scan visits 101^{n} grid points, above the cap"
        )));
    }
    let anchor: Vec<f64> = match anchor {
        Some(point) => {
            if point.len() != n {
                return Err(Error::invalid(format!(
                    "anchor has {} coordinates, polynomial has {n} variables",
                    point.len()
                )));
            }
            if point.iter().any(|&c| !(-1.0..=1.0).contains(&c)) {
                return Err(Error::invalid("anchor must lie in the box"));
            }
            point.to_vec()
        }
        None => minimize_on_box(f, None)?.point,
    };

    let gradient: Vec<SparsePolynomial> = (0..n)
        .map(|axis| f.partial_derivative(axis))
        .collect::<Result<_>>()?;
    let mut hessian: Vec<Vec<SparsePolynomial>> = Vec::with_capacity(n);
    for (i, gradient_i) in gradient.iter().enumerate() {
        let mut row = Vec::with_capacity(n - i);
        for j in i..n {
            row.push(gradient_i.partial_derivative(j)?);
        }
        hessian.push(row);
    }

    let mut curvature: f64 = 0.0;
    let mut index = vec![0usize; n];
    let mut point = vec![0.0f64; n];
    let mut entries = vec![0.0f64; n * n];
    'grid: loop {
        for axis in 0..n {
            point[axis] = -1.0 + index[axis] as f64 / 50.0;
        }
        for i in 0..n {
            for j in i..n {
                let value = hessian[i][j - i].evaluate(&point)?;
                entries[i * n + j] = value;
                entries[j * n + i] = value;
            }
        }
        let norm = match n {
            1 => entries[0].abs(),
            2 => {
                let trace_half = (entries[0] + entries[3]) / 2.0;
                let split = (entries[0] - entries[3]) / 2.0;
                trace_half.abs() + (split * split + entries[1] * entries[1]).sqrt()
            }
            _ => {
                let h = DMatrix::from_row_slice(n, n, &entries);
                let eigen = h
                    .try_symmetric_eigen(f64::EPSILON, 1_000)
                    .ok_or_else(|| Error::numeric("Hessian eigensolve did not converge"))?;
                eigen
                    .eigenvalues
                    .iter()
                    .fold(0.0f64, |m, &l| m.max(l.abs()))
            }
        };
        curvature = curvature.max(norm);
        let mut axis = n;
        loop {
            if axis == 0 {
                break 'grid;
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < 101 {
                break;
            }
            index[axis] = 0;
        }
    }

    let anchor_value = f.evaluate(&anchor)?;
    let mut gradient_at_anchor = vec![0.0; n];
    for axis in 0..n {
        gradient_at_anchor[axis] = gradient[axis].evaluate(&anchor)?;
    }
    let mut terms: Vec<(MultiIndex, f64)> = Vec::new();
    let mut constant = anchor_value;
    for axis in 0..n {
        constant +=
            curvature * anchor[axis] * anchor[axis] - gradient_at_anchor[axis] * anchor[axis];
        let mut linear = vec![0u32; n];
        linear[axis] = 1;
        terms.push((
            MultiIndex::new(linear),
            gradient_at_anchor[axis] - 2.0 * curvature * anchor[axis],
        ));
        let mut square = vec![0u32; n];
        square[axis] = 2;
        terms.push((MultiIndex::new(square), curvature));
    }
    terms.push((MultiIndex::new(vec![0; n]), constant));
    let estimator = SparsePolynomial::from_terms(n, terms)?;

    let mut minimizer = vec![0.0; n];
    for axis in 0..n {
        let linear = gradient_at_anchor[axis] - 2.0 * curvature * anchor[axis];
        minimizer[axis] = if curvature > 0.0 {
            (-linear / (2.0 * curvature)).clamp(-1.0, 1.0)
        } else if linear > 0.0 {
            -1.0
        } else if linear < 0.0 {
            1.0
        } else {
            0.0
        };
    }
    let minimum = estimator.evaluate(&minimizer)?;
    Ok(QuadraticEstimator {
        estimator,
        minimizer,
        minimum,
        curvature_bound: curvature,
    })
}

/// Families of tensor evaluation grids.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GridKind {
    /// Chebyshev-Lobatto points `cos(j pi / d)`.
    Lobatto,
    /// Evenly spaced points `-1 + 2j/d`.
    Regular,
}

/// Minimum of `f` over the tensor grid with `d + 1` points per axis; an
/// upper bound on the box minimum by evaluation.
pub fn grid_bound(f: &SparsePolynomial, d: usize, kind: GridKind) -> Result<BoundResult> {
    let n = f.n();
    if d == 0 {
        return Err(Error::invalid("grids need at least two points per axis"));
    }
    if n > 4 {
        return Err(Error::resource(format!(
            "grid scan covers ({})^{n} points, above the variable cap",
            d + 1
        )));
    }
    (d + 1)
        .checked_pow(n as u32)
        .filter(|&p| p <= 50_000_000)
        .ok_or_else(|| Error::resource(format!("({})^{n} grid points exceed the budget", d + 1)))?;
    let per_axis: Vec<f64> = match kind {
        GridKind::Lobatto => (0..=d).map(|j| (j as f64 * PI / d as f64).cos()).collect(),
        GridKind::Regular => (0..=d).map(|j| -1.0 + 2.0 * j as f64 / d as f64).collect(),
    };
    let mut index = vec![0usize; n];
    let mut point = vec![0.0f64; n];
    let mut minimum = f64::INFINITY;
    'grid: loop {
        for axis in 0..n {
            point[axis] = per_axis[index[axis]];
        }
        minimum = minimum.min(f.evaluate(&point)?);
        let mut axis = n;
        loop {
            if axis == 0 {
                break 'grid;
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] <= d {
                break;
            }
            index[axis] = 0;
        }
    }
    let hierarchy = match kind {
        GridKind::Lobatto => Hierarchy::GridLobatto,
        GridKind::Regular => Hierarchy::GridRegular,
    };
    Ok(BoundResult {
        value: minimum,
        degree: d,
        hierarchy,
        certificate: None,
    })
}

/// Least-squares power-law fit of gap against level.
#[derive(Clone, Debug)]
pub struct RateFit {
    pub degrees: Vec<usize>,
    pub gaps: Vec<f64>,
    /// Slope of `log gap` against `log d`; near -2 for the hierarchies.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits `log(gap) = slope * log(d) + intercept` by least squares.
///
/// Needs at least five strictly increasing levels, and every gap must
/// exceed `1e-14`: a smaller gap means the bound already matches the
/// minimum to machine precision and no rate is identifiable.
pub fn rate_fit(degrees: &[usize], gaps: &[f64]) -> Result<RateFit> {
    if degrees.len() != gaps.len() {
        return Err(Error::invalid(format!(
            "{} degrees against {} gaps",
            degrees.len(),
            gaps.len()
        )));
    }
    if degrees.len() < 5 {
        return Err(Error::invalid("rate fit needs at least five points"));
    }
    for pair in degrees.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::invalid("degrees must be strictly increasing"));
        }
    }
    if degrees[0] == 0 {
        return Err(Error::invalid("degrees must be positive"));
    }
    for (&d, &gap) in degrees.iter().zip(gaps) {
        // The comparison is arranged so that a NaN gap also lands here.
        if gap.is_nan() || gap <= 1e-14 {
            return Err(Error::invalid(format!(
                "gap {gap:e} at degree {d} is machine-exact; the bound already \
                 matches the minimum and no rate can be fitted"
            )));
        }
    }
    let xs: Vec<f64> = degrees.iter().map(|&d| (d as f64).ln()).collect();
    let ys: Vec<f64> = gaps.iter().map(|&g| g.ln()).collect();
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        let predicted = slope * x + intercept;
        ss_res += (y - predicted) * (y - predicted);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(RateFit {
        degrees: degrees.to_vec(),
        gaps: gaps.to_vec(),
        slope,
        intercept,
        r_squared,
    })
}
