//! Independent oracles for cross-checking the library's numerics.
//!
//! Everything here reaches the same quantities as the library through a
//! different route: monomial moments come from an integration-by-parts
//! recurrence instead of quadrature, orthonormal families from
//! Gram-Schmidt over Hankel moment inner products instead of the
//! three-term recurrence, Chebyshev moment-matrix entries from product
//! linearization instead of Gauss rules, and box minima from a dense scan
//! with coordinate descent instead of projected gradients.

#![allow(dead_code)]

use std::f64::consts::PI;

use boxbound::SparsePolynomial;

/// Log-gamma by the Stirling series with an argument shift; a different
/// algorithm from the library's Lanczos evaluation.
pub fn ln_gamma_oracle(x: f64) -> f64 {
    assert!(x > 0.0, "oracle log-gamma needs a positive argument");
    let mut shift = 0.0;
    let mut z = x;
    while z < 12.0 {
        shift -= z.ln();
        z += 1.0;
    }
    let zi = 1.0 / z;
    let zi2 = zi * zi;
    let series = zi
        * (1.0 / 12.0
            + zi2 * (-1.0 / 360.0 + zi2 * (1.0 / 1260.0 + zi2 * (-1.0 / 1680.0 + zi2 / 1188.0))));
    shift + 0.5 * (2.0 * PI).ln() + (z - 0.5) * z.ln() - z + series
}

/// `int_{-1}^{1} (1-x)^alpha (1+x)^beta dx = 2^(alpha+beta+1) B(alpha+1, beta+1)`.
pub fn mass_oracle(alpha: f64, beta: f64) -> f64 {
    ((alpha + beta + 1.0) * 2.0f64.ln()
        + ln_gamma_oracle(alpha + 1.0)
        + ln_gamma_oracle(beta + 1.0)
        - ln_gamma_oracle(alpha + beta + 2.0))
    .exp()
}

/// Monomial moments `M_j = int x^j (1-x)^alpha (1+x)^beta dx` up to
/// `max_degree`, by the recurrence obtained from integration by parts:
///
/// ```text
/// (alpha + beta + j + 2) M_{j+1} = (beta - alpha) M_j + j M_{j-1} .
/// ```
pub fn moments_oracle(alpha: f64, beta: f64, max_degree: usize) -> Vec<f64> {
    let mut moments = vec![0.0; max_degree + 1];
    moments[0] = mass_oracle(alpha, beta);
    if max_degree == 0 {
        return moments;
    }
    moments[1] = (beta - alpha) * moments[0] / (alpha + beta + 2.0);
    for j in 1..max_degree {
        moments[j + 1] = ((beta - alpha) * moments[j] + j as f64 * moments[j - 1])
            / (alpha + beta + j as f64 + 2.0);
    }
    moments
}

/// Inner product of monomial-basis coefficient vectors against the Hankel
/// matrix of weight moments.
pub fn moment_inner(p: &[f64], q: &[f64], moments: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (j, &qj) in q.iter().enumerate() {
            total += pi * qj * moments[i + j];
        }
    }
    total
}

/// Coefficient vectors (ascending powers) of the orthonormal family up to
/// `degree`, by modified Gram-Schmidt with one reorthogonalization pass.
/// Leading coefficients are positive, matching the recurrence convention.
pub fn gram_schmidt_family(alpha: f64, beta: f64, degree: usize) -> Vec<Vec<f64>> {
    let moments = moments_oracle(alpha, beta, 2 * degree);
    let mut family: Vec<Vec<f64>> = Vec::with_capacity(degree + 1);
    for k in 0..=degree {
        let mut p = vec![0.0; k + 1];
        p[k] = 1.0;
        for _ in 0..2 {
            for member in &family {
                let overlap = moment_inner(&p, member, &moments);
                for (slot, &m) in p.iter_mut().zip(member) {
                    *slot -= overlap * m;
                }
            }
        }
        let norm = moment_inner(&p, &p, &moments).sqrt();
        for slot in &mut p {
            *slot /= norm;
        }
        family.push(p);
    }
    family
}

/// Coefficient vector of `x * p`.
pub fn shift_up(p: &[f64]) -> Vec<f64> {
    let mut shifted = vec![0.0; p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        shifted[i + 1] = c;
    }
    shifted
}

/// Horner evaluation of an ascending-power coefficient vector.
pub fn eval_coefficients(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn chebyshev_pair_integral(a: usize, b: usize) -> f64 {
    if a != b {
        0.0
    } else if a == 0 {
        PI
    } else {
        PI / 2.0
    }
}

/// `int T_i T_j T_k (1-x^2)^(-1/2) dx` via `T_i T_j = (T_{i+j} + T_{|i-j|})/2`.
pub fn chebyshev_triple_product(i: usize, j: usize, k: usize) -> f64 {
    0.5 * (chebyshev_pair_integral(i + j, k) + chebyshev_pair_integral(i.abs_diff(j), k))
}

fn binomial_small(n: usize, k: usize) -> f64 {
    let mut value = 1.0;
    for i in 0..k.min(n - k) {
        value = value * (n - i) as f64 / (i + 1) as f64;
    }
    value
}

/// Chebyshev expansion of `x^m`: coefficients of `T_0, ..., T_m` in
/// `x^m = 2^(1-m) sum'' C(m, (m-l)/2) T_l` (primes: `l` runs down from `m`
/// in steps of two, and the `l = 0` coefficient is halved).
pub fn monomial_in_chebyshev(m: usize) -> Vec<f64> {
    let mut coefficients = vec![0.0; m + 1];
    let scale = 2.0f64.powi(1 - m as i32);
    let mut l = m;
    loop {
        let mut value = scale * binomial_small(m, (m - l) / 2);
        if l == 0 {
            value /= 2.0;
        }
        coefficients[l] = value;
        if l < 2 {
            break;
        }
        l -= 2;
    }
    coefficients
}

/// `int f bhat_j bhat_k (1-x^2)^(-1/2) dx` for univariate `f` over the
/// orthonormal Chebyshev basis, entirely by linearization.
pub fn chebyshev_moment_entry(f: &SparsePolynomial, j: usize, k: usize) -> f64 {
    assert_eq!(f.n(), 1, "linearization oracle is univariate");
    let normalizer = |i: usize| if i == 0 { PI } else { PI / 2.0 };
    let scale = 1.0 / (normalizer(j) * normalizer(k)).sqrt();
    let mut total = 0.0;
    for (index, coefficient) in f.terms() {
        let m = index.exponent(0) as usize;
        for (l, &tl) in monomial_in_chebyshev(m).iter().enumerate() {
            if tl != 0.0 {
                total += coefficient * tl * chebyshev_triple_product(j, k, l);
            }
        }
    }
    total * scale
}

/// Box minimum by dense tensor scan plus coordinate descent with step
/// halving; independent of the library's projected-gradient minimizer.
pub fn box_minimum_oracle(f: &SparsePolynomial) -> (Vec<f64>, f64) {
    let n = f.n();
    let per_axis: usize = match n {
        1 => 2001,
        2 => 201,
        _ => 41,
    };
    let spacing = 2.0 / (per_axis - 1) as f64;
    let mut index = vec![0usize; n];
    let mut point = vec![0.0f64; n];
    let mut best_point = vec![-1.0f64; n];
    let mut best_value = f64::INFINITY;
    'grid: loop {
        for axis in 0..n {
            point[axis] = -1.0 + spacing * index[axis] as f64;
        }
        let value = f.evaluate(&point).unwrap();
        if value < best_value {
            best_value = value;
            best_point.copy_from_slice(&point);
        }
        let mut axis = n;
        loop {
            if axis == 0 {
                break 'grid;
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < per_axis {
                break;
            }
            index[axis] = 0;
        }
    }

    let mut step = spacing;
    while step > 1e-14 {
        let mut improved = true;
        while improved {
            improved = false;
            for axis in 0..n {
                for direction in [-1.0, 1.0] {
                    let coordinate = (best_point[axis] + direction * step).clamp(-1.0, 1.0);
                    if coordinate == best_point[axis] {
                        continue;
                    }
                    let previous = best_point[axis];
                    best_point[axis] = coordinate;
                    let value = f.evaluate(&best_point).unwrap();
                    if value < best_value {
                        best_value = value;
                        improved = true;
                    } else {
                        best_point[axis] = previous;
                    }
                }
            }
        }
        step *= 0.5;
    }
    (best_point, best_value)
}
