//! Jacobi orthogonal polynomials on [-1, 1].
//!
//! The weight is `w(x) = (1-x)^alpha (1+x)^beta` with `alpha, beta > -1`.
//! Chebyshev polynomials of the first and second kind are the parameter
//! pairs (-1/2, -1/2) and (1/2, 1/2); Legendre is (0, 0).
//!
//! Everything flows from the three-term recurrence
//!
//! ```text
//! x p_k(x) = a_k p_{k+1}(x) + b_k p_k(x) + c_k p_{k-1}(x)
//! ```
//!
//! whose coefficients are known in closed form. In the orthonormal
//! normalization the recurrence is symmetric (`a_{k-1} = c_k`), so the roots
//! of `p_k` are the eigenvalues of the symmetric tridiagonal matrix built
//! from the coefficients. Roots are computed exclusively along that route;
//! no polynomial root-finding is ever performed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag;

/// Weight exponents of a Jacobi family; both must exceed -1.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0) {
            return Err(Error::invalid(format!(
                "Jacobi exponents must be finite and exceed -1, got ({alpha}, {beta})"
            )));
        }
        Ok(JacobiParams { alpha, beta })
    }

    /// Chebyshev weight of the first kind, `(1-x^2)^(-1/2)`.
    pub fn chebyshev_first() -> Self {
        JacobiParams {
            alpha: -0.5,
            beta: -0.5,
        }
    }

    /// Chebyshev weight of the second kind, `(1-x^2)^(1/2)`.
    pub fn chebyshev_second() -> Self {
        JacobiParams {
            alpha: 0.5,
            beta: 0.5,
        }
    }

    /// Uniform (Legendre) weight.
    pub fn legendre() -> Self {
        JacobiParams {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The reflected family `(beta, alpha)`, orthogonal after `x -> -x`.
    pub fn swapped(&self) -> Self {
        JacobiParams {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// Total mass of the weight over [-1, 1]:
    /// `2^(alpha+beta+1) Gamma(alpha+1) Gamma(beta+1) / Gamma(alpha+beta+2)`.
    pub fn mass(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(a + b + 2.0))
        .exp()
    }

    fn is_chebyshev_first(&self) -> bool {
        self.alpha == -0.5 && self.beta == -0.5
    }

    fn is_chebyshev_second(&self) -> bool {
        self.alpha == 0.5 && self.beta == 0.5
    }

    fn is_legendre(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0
    }
}

/// Monic recurrence data: `p_{k+1} = (x - diag_k) p_k - weight_k p_{k-1}`
/// with `weight_0` carrying the total mass.
fn monic_diag(p: &JacobiParams, k: usize) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if k == 0 {
        (b - a) / (a + b + 2.0)
    } else {
        let s = 2.0 * k as f64 + a + b;
        (b * b - a * a) / (s * (s + 2.0))
    }
}

fn monic_weight(p: &JacobiParams, k: usize) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    match k {
        0 => p.mass(),
        1 => 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0).powi(2) * (a + b + 3.0)),
        _ => {
            let kf = k as f64;
            let s = 2.0 * kf + a + b;
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0))
        }
    }
}

/// Coefficients of the three-term recurrence
/// `x p_k = a_k p_{k+1} + b_k p_k + c_k p_{k-1}` for `k = 0..d-1`.
///
/// With `normalized = true` the family is orthonormal and the coefficients
/// are symmetric (`a_{k-1} = c_k`); otherwise the family is monic and
/// `a_k = 1` throughout. `c_0` is 0 by the convention `p_{-1} = 0`.
#[derive(Clone, Debug)]
pub struct RecurrenceCoefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub normalized: bool,
}

pub fn recurrence_coefficients(
    params: &JacobiParams,
    d: usize,
    normalized: bool,
) -> RecurrenceCoefficients {
    let mut a = Vec::with_capacity(d);
    let mut b = Vec::with_capacity(d);
    let mut c = Vec::with_capacity(d);
    for k in 0..d {
        b.push(monic_diag(params, k));
        if normalized {
            a.push(monic_weight(params, k + 1).sqrt());
            c.push(if k == 0 {
                0.0
            } else {
                monic_weight(params, k).sqrt()
            });
        } else {
            a.push(1.0);
            c.push(if k == 0 { 0.0 } else { monic_weight(params, k) });
        }
    }
    RecurrenceCoefficients {
        a,
        b,
        c,
        normalized,
    }
}

/// Values `p_0(x) .. p_d(x)` by the forward three-term recurrence.
///
/// `normalized = true` yields the family orthonormal against the unscaled
/// weight. `normalized = false` yields the classical normalization:
/// `T_k` for (-1/2, -1/2), `U_k` for (1/2, 1/2), Legendre `P_k` for (0, 0),
/// and for other parameters the standard normalization with
/// `p_k(1) = binom(k+alpha, k)`.
pub fn evaluate_family(params: &JacobiParams, d: usize, x: f64, normalized: bool) -> Vec<f64> {
    if normalized {
        return evaluate_orthonormal(params, d, x);
    }
    if params.is_chebyshev_first() {
        return chebyshev_like(d, x, 1.0, x);
    }
    if params.is_chebyshev_second() {
        return chebyshev_like(d, x, 1.0, 2.0 * x);
    }
    if params.is_legendre() {
        let mut values = Vec::with_capacity(d + 1);
        values.push(1.0);
        if d == 0 {
            return values;
        }
        values.push(x);
        for k in 1..d {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0) * x * values[k] - kf * values[k - 1]) / (kf + 1.0);
            values.push(next);
        }
        return values;
    }
    classical_jacobi(params, d, x)
}

/// Recurrence `p_{k+1} = 2x p_k - p_{k-1}` shared by both Chebyshev kinds.
fn chebyshev_like(d: usize, x: f64, p0: f64, p1: f64) -> Vec<f64> {
    let mut values = Vec::with_capacity(d + 1);
    values.push(p0);
    if d == 0 {
        return values;
    }
    values.push(p1);
    for k in 1..d {
        values.push(2.0 * x * values[k] - values[k - 1]);
    }
    values
}

/// Standard-normalization Jacobi values via the classical recurrence.
fn classical_jacobi(params: &JacobiParams, d: usize, x: f64) -> Vec<f64> {
    let (a, b) = (params.alpha, params.beta);
    let mut values = Vec::with_capacity(d + 1);
    values.push(1.0);
    if d == 0 {
        return values;
    }
    values.push(0.5 * (a + b + 2.0) * x + 0.5 * (a - b));
    for k in 1..d {
        // Recurrence for p_{k+1} in terms of p_k and p_{k-1}.
        let n = k as f64 + 1.0;
        let s = 2.0 * n + a + b;
        let lead = 2.0 * n * (n + a + b) * (s - 2.0);
        let mid = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let tail = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        values.push((mid * values[k] - tail * values[k - 1]) / lead);
    }
    values
}

fn evaluate_orthonormal(params: &JacobiParams, d: usize, x: f64) -> Vec<f64> {
    let mut values = Vec::with_capacity(d + 1);
    values.push(1.0 / params.mass().sqrt());
    if d == 0 {
        return values;
    }
    let mut e_next = monic_weight(params, 1).sqrt();
    values.push((x - monic_diag(params, 0)) * values[0] / e_next);
    for k in 1..d {
        let e_k = e_next;
        e_next = monic_weight(params, k + 1).sqrt();
        let next = ((x - monic_diag(params, k)) * values[k] - e_k * values[k - 1]) / e_next;
        values.push(next);
    }
    values
}

/// Symmetric tridiagonal matrix of the orthonormal recurrence; its order-k
/// eigenvalues are the roots of the degree-k family member.
#[derive(Clone, Debug)]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(params: &JacobiParams, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("Jacobi matrix order must be at least 1"));
        }
        let diag = (0..order).map(|k| monic_diag(params, k)).collect();
        let offdiag = (1..order).map(|k| monic_weight(params, k).sqrt()).collect();
        Ok(JacobiMatrix { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        tridiag::eigenvalues(&self.diag, &self.offdiag)
    }

    /// Eigenvalues plus first eigenvector components (Gauss weight data).
    pub fn eigen_with_first_components(&self) -> Result<tridiag::TridiagonalEigen> {
        tridiag::eigen_with_first_components(&self.diag, &self.offdiag)
    }
}

/// All `k` roots of the degree-`k` family member, ascending, inside (-1, 1).
pub fn roots(params: &JacobiParams, k: usize) -> Result<Vec<f64>> {
    JacobiMatrix::new(params, k)?.eigenvalues()
}

/// Smallest root of the degree-`k` member.
pub fn smallest_root(params: &JacobiParams, k: usize) -> Result<f64> {
    Ok(roots(params, k)?[0])
}

/// Largest root of the degree-`k` member, via the reflection
/// `p^(alpha,beta)_k(x) = (-1)^k p^(beta,alpha)_k(-x)`.
pub fn largest_root(params: &JacobiParams, k: usize) -> Result<f64> {
    Ok(-smallest_root(&params.swapped(), k)?)
}

/// Closed-form enclosure of the smallest root of the degree-`k` member.
#[derive(Clone, Copy, Debug)]
pub struct ExtremalRootBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Closed-form sandwich for the smallest root, valid for `k >= 2`.
///
/// Upper estimate:
///
/// ```text
/// xi <= -1 + 2(beta+1)(beta+3) / [2(k-1)(k+alpha+beta+2) + (beta+3)(alpha+beta+2)]
/// ```
///
/// Lower estimate `(F - 4(k-1) sqrt(DELTA)) / E` with
///
/// ```text
/// F     = (beta-alpha) ((alpha+beta+6)k + 2(alpha+beta))
/// E     = (2k+alpha+beta) (k(2k+alpha+beta) + 2(alpha+beta+2))
/// DELTA = k^2 (k+alpha+beta+1)^2
///         + (alpha+1)(beta+1) (k^2 + (alpha+beta+4)k + 2(alpha+beta))
/// ```
pub fn extremal_root_bounds(params: &JacobiParams, k: usize) -> Result<ExtremalRootBounds> {
    if k < 2 {
        return Err(Error::invalid("extremal root bounds require k >= 2"));
    }
    let (a, b) = (params.alpha, params.beta);
    let kf = k as f64;
    let s = a + b;

    let upper_denominator = 2.0 * (kf - 1.0) * (kf + s + 2.0) + (b + 3.0) * (s + 2.0);
    let upper = -1.0 + 2.0 * (b + 1.0) * (b + 3.0) / upper_denominator;

    let f = (b - a) * ((s + 6.0) * kf + 2.0 * s);
    let e = (2.0 * kf + s) * (kf * (2.0 * kf + s) + 2.0 * (s + 2.0));
    let delta = kf * kf * (kf + s + 1.0).powi(2)
        + (a + 1.0) * (b + 1.0) * (kf * kf + (s + 4.0) * kf + 2.0 * s);
    let lower = (f - 4.0 * (kf - 1.0) * delta.sqrt()) / e;

    Ok(ExtremalRootBounds { lower, upper })
}

/// Natural log of the gamma function for positive arguments (Lanczos
/// approximation, g = 7, with the reflection formula below 1/2).
pub(crate) fn ln_gamma(x: f64) -> f64 {
    // Published table; digits beyond f64 are kept so the source matches it.
    #[allow(clippy::excessive_precision)]
    const COEFFICIENTS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return (std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = COEFFICIENTS[0];
    for (i, c) in COEFFICIENTS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}
