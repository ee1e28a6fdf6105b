//! Sparse multivariate polynomials over the standard monomial basis.
//!
//! Polynomials are stored as a map from exponent multi-indices to nonzero
//! coefficients. The canonical term order is graded lexicographic: lower
//! total degree first, and within a degree block the lexicographically
//! larger exponent tuple first, so for two variables the degree-two block
//! reads `x1^2, x1*x2, x2^2`. Every routine that enumerates basis members
//! (moment matrices, certificates) relies on this single ordering.
//!
//! The text grammar accepted by [`SparsePolynomial::parse`]:
//!
//! ```text
//! poly        :=  [sign] term { sign term }
//! term        :=  coefficient | [coefficient ["*"]] factor { "*" factor }
//! factor      :=  "x" K [ "^" E ]          K in 1..=n, E a non-negative integer
//! coefficient :=  number [ "/" number ]    integer, decimal, or fraction
//! ```
//!
//! Whitespace is insignificant. Variable indices are 1-based.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector of a monomial; one entry per variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree, the sum of all exponents.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of the given 0-based variable.
    pub fn exponent(&self, axis: usize) -> u32 {
        self.0[axis]
    }
}

impl Ord for MultiIndex {
    /// Graded lexicographic order: total degree first, then the
    /// lexicographically larger tuple first within a degree block.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact binomial coefficient; errors if the result overflows desk scale.
pub fn binomial(n: u64, k: u64) -> Result<usize> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return Err(Error::resource(format!(
                "binomial({n}, {k}) exceeds addressable size"
            )));
        }
    }
    Ok(acc as usize)
}

/// All multi-indices with `n` variables and total degree at most `degree`,
/// in graded lexicographic order.
#[derive(Clone, Debug)]
pub struct MultiIndexSet {
    n: usize,
    degree: u32,
    members: Vec<MultiIndex>,
}

impl MultiIndexSet {
    pub fn new(n: usize, degree: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid(
                "multi-index set needs at least one variable",
            ));
        }
        let size = binomial(n as u64 + degree as u64, degree as u64)?;
        let mut members = Vec::with_capacity(size);
        let mut scratch = vec![0u32; n];
        for total in 0..=degree {
            push_compositions(&mut members, &mut scratch, 0, total);
        }
        debug_assert_eq!(members.len(), size);
        Ok(MultiIndexSet { n, degree, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.members.iter()
    }

    pub fn members(&self) -> &[MultiIndex] {
        &self.members
    }

    pub fn get(&self, position: usize) -> &MultiIndex {
        &self.members[position]
    }
}

/// Appends, in graded-lex order, every completion of `scratch[..axis]` whose
/// remaining entries sum to `remaining`.
fn push_compositions(out: &mut Vec<MultiIndex>, scratch: &mut [u32], axis: usize, remaining: u32) {
    if axis == scratch.len() - 1 {
        scratch[axis] = remaining;
        out.push(MultiIndex::new(scratch.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        scratch[axis] = e;
        push_compositions(out, scratch, axis + 1, remaining - e);
    }
}

/// Sparse polynomial in `n` variables with real coefficients.
///
/// Zero coefficients are never stored; the zero polynomial has no terms and
/// total degree 0 by convention.
#[derive(Clone, PartialEq, Debug)]
pub struct SparsePolynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl SparsePolynomial {
    /// The zero polynomial in `n` variables.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("polynomial needs at least one variable"));
        }
        Ok(SparsePolynomial {
            n,
            terms: BTreeMap::new(),
        })
    }

    /// The constant polynomial `c`.
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_terms(n, [(MultiIndex::new(vec![0; n]), c)])
    }

    /// Builds a polynomial from (multi-index, coefficient) pairs. Duplicate
    /// indices are summed; zero coefficients are dropped.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (MultiIndex, f64)>,
    ) -> Result<Self> {
        let mut poly = Self::zero(n)?;
        for (index, coefficient) in terms {
            if index.len() != n {
                return Err(Error::invalid(format!(
                    "multi-index has {} entries, polynomial has {} variables",
                    index.len(),
                    n
                )));
            }
            if !coefficient.is_finite() {
                return Err(Error::invalid("polynomial coefficients must be finite"));
            }
            let slot = poly.terms.entry(index).or_insert(0.0);
            *slot += coefficient;
        }
        poly.terms.retain(|_, c| *c != 0.0);
        Ok(poly)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial has no term of degree 1 or higher.
    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Coefficient of the degree-zero term.
    pub fn constant_term(&self) -> f64 {
        self.coefficient(&MultiIndex::new(vec![0; self.n]))
    }

    /// Coefficient of the given monomial, 0 when absent.
    pub fn coefficient(&self, index: &MultiIndex) -> f64 {
        self.terms.get(index).copied().unwrap_or(0.0)
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Evaluates the polynomial at a point.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::invalid(format!(
                "point has {} coordinates, polynomial has {} variables",
                x.len(),
                self.n
            )));
        }
        let mut total = 0.0;
        for (index, coefficient) in &self.terms {
            let mut monomial = 1.0;
            for (axis, &e) in index.exponents().iter().enumerate() {
                if e > 0 {
                    monomial *= x[axis].powi(e as i32);
                }
            }
            total += coefficient * monomial;
        }
        Ok(total)
    }

    /// Sum of two polynomials over the same variables.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::invalid(
                "cannot add polynomials in different variable counts",
            ));
        }
        Self::from_terms(
            self.n,
            self.terms()
                .chain(other.terms())
                .map(|(k, v)| (k.clone(), v)),
        )
    }

    /// Scalar multiple.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::invalid("scale factor must be finite"));
        }
        Self::from_terms(self.n, self.terms().map(|(k, v)| (k.clone(), v * c)))
    }

    /// Partial derivative with respect to the given 0-based variable.
    pub fn partial_derivative(&self, axis: usize) -> Result<Self> {
        if axis >= self.n {
            return Err(Error::invalid(format!(
                "axis {} out of range for {} variables",
                axis, self.n
            )));
        }
        let terms = self.terms.iter().filter_map(|(index, &c)| {
            let e = index.exponent(axis);
            if e == 0 {
                return None;
            }
            let mut exponents = index.exponents().to_vec();
            exponents[axis] = e - 1;
            Some((MultiIndex::new(exponents), c * e as f64))
        });
        Self::from_terms(self.n, terms)
    }

    /// Parses polynomial text in `n` variables; see the module grammar.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("polynomial needs at least one variable"));
        }
        Parser::new(text, n).parse()
    }
}

impl fmt::Display for SparsePolynomial {
    /// Canonical printing: graded-lex term order, explicit `*` between
    /// factors, `^` only for exponents above 1, unit coefficients omitted.
    /// Parsing the output reproduces the polynomial exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (position, (index, &coefficient)) in self.terms.iter().enumerate() {
            let magnitude = coefficient.abs();
            if position == 0 {
                if coefficient < 0.0 {
                    write!(f, "-")?;
                }
            } else if coefficient < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for (axis, &e) in index.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", axis + 1)),
                    _ => factors.push(format!("x{}^{}", axis + 1, e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude == 1.0 {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", magnitude, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Recursive-descent parser over the byte positions of the input.
struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, n: usize) -> Self {
        Parser {
            text: text.as_bytes(),
            pos: 0,
            n,
        }
    }

    fn parse(mut self) -> Result<SparsePolynomial> {
        let mut terms: Vec<(MultiIndex, f64)> = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(Error::parse(self.pos, "empty polynomial"));
        }
        let mut sign = 1.0;
        if let Some(s) = self.try_sign() {
            sign = s;
        }
        loop {
            let (index, coefficient) = self.term()?;
            terms.push((index, sign * coefficient));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') | Some(b'-') => {
                    sign = self.try_sign().expect("sign peeked");
                }
                Some(c) => {
                    return Err(Error::parse(
                        self.pos,
                        format!("expected '+', '-', or end of input, found '{}'", c as char),
                    ));
                }
            }
        }
        SparsePolynomial::from_terms(self.n, terms)
    }

    /// One term: a coefficient, a product of factors, or both.
    fn term(&mut self) -> Result<(MultiIndex, f64)> {
        self.skip_ws();
        let start = self.pos;
        let mut coefficient = 1.0;
        let mut have_coefficient = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
            coefficient = self.coefficient()?;
            have_coefficient = true;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                if self.peek() != Some(b'x') {
                    return Err(Error::parse(self.pos, "expected variable after '*'"));
                }
            }
        }
        let mut exponents = vec![0u32; self.n];
        let mut have_factor = false;
        while self.peek() == Some(b'x') {
            let (axis, exponent) = self.factor()?;
            exponents[axis] += exponent;
            have_factor = true;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                if self.peek() != Some(b'x') {
                    return Err(Error::parse(self.pos, "expected variable after '*'"));
                }
            } else {
                break;
            }
        }
        if !have_coefficient && !have_factor {
            return Err(Error::parse(start, "expected term"));
        }
        Ok((MultiIndex::new(exponents), coefficient))
    }

    /// `x K [^ E]`; returns the 0-based axis and the exponent.
    fn factor(&mut self) -> Result<(usize, u32)> {
        let start = self.pos;
        debug_assert_eq!(self.peek(), Some(b'x'));
        self.pos += 1;
        let index: usize = self.integer("variable index")?;
        if index == 0 {
            return Err(Error::parse(start, "variable indices are 1-based"));
        }
        if index > self.n {
            return Err(Error::parse(
                start,
                format!("variable x{} out of range for {} variables", index, self.n),
            ));
        }
        let mut exponent = 1u32;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() == Some(b'-') {
                return Err(Error::parse(self.pos, "exponents must be non-negative"));
            }
            exponent = self.integer("exponent")? as u32;
        }
        Ok((index - 1, exponent))
    }

    /// `number [/ number]`.
    fn coefficient(&mut self) -> Result<f64> {
        let numerator = self.number()?;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let denominator_pos = self.pos;
            if !matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
                return Err(Error::parse(denominator_pos, "expected denominator"));
            }
            let denominator = self.number()?;
            if denominator == 0.0 {
                return Err(Error::parse(denominator_pos, "zero denominator"));
            }
            return Ok(numerator / denominator);
        }
        Ok(numerator)
    }

    /// Unsigned integer or decimal literal.
    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let mut seen_dot = false;
        let mut seen_digit = false;
        while let Some(c) = self.peek() {
            match c {
                b'0'..=b'9' => {
                    seen_digit = true;
                    self.pos += 1;
                }
                b'.' if !seen_dot => {
                    seen_dot = true;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        if !seen_digit {
            return Err(Error::parse(start, "expected number"));
        }
        let slice = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        slice
            .parse::<f64>()
            .map_err(|_| Error::parse(start, format!("invalid number literal '{slice}'")))
    }

    /// Unsigned integer.
    fn integer(&mut self, what: &str) -> Result<usize> {
        let start = self.pos;
        let mut value: usize = 0;
        let mut seen = false;
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            seen = true;
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as usize))
                .ok_or_else(|| Error::parse(start, format!("{what} too large")))?;
            self.pos += 1;
        }
        if !seen {
            return Err(Error::parse(start, format!("expected {what}")));
        }
        Ok(value)
    }

    fn try_sign(&mut self) -> Option<f64> {
        self.skip_ws();
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(1.0)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(-1.0)
            }
            _ => None,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn graded_lex_order_two_variables() {
        let set = MultiIndexSet::new(2, 2).unwrap();
        let expected: Vec<MultiIndex> = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]
            .iter()
            .map(|e| idx(e))
            .collect();
        assert_eq!(set.members(), expected.as_slice());
    }

    #[test]
    fn univariate_set_is_degree_ladder() {
        let set = MultiIndexSet::new(1, 3).unwrap();
        let expected: Vec<MultiIndex> = (0..=3).map(|e| idx(&[e])).collect();
        assert_eq!(set.members(), expected.as_slice());
    }

    #[test]
    fn set_size_matches_binomial_and_enumeration() {
        let set = MultiIndexSet::new(3, 4).unwrap();
        assert_eq!(set.len(), 35);
        assert_eq!(set.len(), binomial(7, 3).unwrap());
        // Independent enumeration: all of [0,4]^3 filtered by total degree.
        let mut brute = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=4u32 {
                for c in 0..=4u32 {
                    if a + b + c <= 4 {
                        brute.push(idx(&[a, b, c]));
                    }
                }
            }
        }
        brute.sort();
        let mut members = set.members().to_vec();
        members.sort();
        assert_eq!(members, brute);
    }

    #[test]
    fn set_sizes_follow_binomial_for_small_cases() {
        for n in 1..=5usize {
            for d in 0..=8u32 {
                let set = MultiIndexSet::new(n, d).unwrap();
                assert_eq!(set.len(), binomial(n as u64 + d as u64, d as u64).unwrap());
            }
        }
    }

    #[test]
    fn ordering_is_total_degree_then_lex() {
        assert!(idx(&[1, 0]) < idx(&[0, 1]));
        assert!(idx(&[0, 1]) < idx(&[2, 0]));
        assert!(idx(&[2, 0]) < idx(&[1, 1]));
        assert!(idx(&[1, 1]) < idx(&[0, 2]));
    }

    #[test]
    fn parses_mixed_terms() {
        let p = SparsePolynomial::parse("x1^2 + 0.5*x1*x2 - x3", 3).unwrap();
        assert_eq!(p.term_count(), 3);
        assert_eq!(p.coefficient(&idx(&[2, 0, 0])), 1.0);
        assert_eq!(p.coefficient(&idx(&[1, 1, 0])), 0.5);
        assert_eq!(p.coefficient(&idx(&[0, 0, 1])), -1.0);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn parses_implicit_multiplication_after_coefficient() {
        let p = SparsePolynomial::parse("2x1", 1).unwrap();
        assert_eq!(p.coefficient(&idx(&[1])), 2.0);
    }

    #[test]
    fn parses_fraction_coefficients() {
        let p = SparsePolynomial::parse("1/2*x2^4", 2).unwrap();
        assert_eq!(p.coefficient(&idx(&[0, 4])), 0.5);
    }

    #[test]
    fn cancelling_terms_yield_zero() {
        let p = SparsePolynomial::parse("x1 - x1", 1).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn parses_plain_constant() {
        let p = SparsePolynomial::parse("3", 2).unwrap();
        assert!(p.is_constant());
        assert_eq!(p.constant_term(), 3.0);
    }

    #[test]
    fn repeated_variable_in_term_accumulates_exponent() {
        let p = SparsePolynomial::parse("x1^2*x1", 1).unwrap();
        assert_eq!(p.coefficient(&idx(&[3])), 1.0);
    }

    #[test]
    fn rejects_out_of_range_variable_with_position() {
        let err = SparsePolynomial::parse("x3", 2).unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                position: 0,
                message: "variable x3 out of range for 2 variables".into()
            }
        );
    }

    #[test]
    fn rejects_negative_exponent_with_position() {
        let err = SparsePolynomial::parse("x1^-2", 1).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 3, .. }));
    }

    #[test]
    fn rejects_dangling_sign() {
        let err = SparsePolynomial::parse("1 + + 2", 1).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 4, .. }));
    }

    #[test]
    fn rejects_zero_based_variable() {
        let err = SparsePolynomial::parse("x0", 1).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 0, .. }));
    }

    #[test]
    fn rejects_empty_input() {
        let err = SparsePolynomial::parse("   ", 1).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn rejects_zero_denominator() {
        let err = SparsePolynomial::parse("1/0*x1", 1).unwrap_err();
        assert!(matches!(err, Error::Parse { position: 2, .. }));
    }

    #[test]
    fn evaluates_at_points() {
        let p = SparsePolynomial::parse("x1^2 + 0.5*x1*x2 - x3", 3).unwrap();
        assert_eq!(p.evaluate(&[1.0, 2.0, 3.0]).unwrap(), -1.0);
        let q = SparsePolynomial::parse("2x1", 1).unwrap();
        assert_eq!(q.evaluate(&[0.5]).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_rejects_dimension_mismatch() {
        let p = SparsePolynomial::parse("x1", 1).unwrap();
        assert!(matches!(
            p.evaluate(&[1.0, 2.0]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn derivative_drops_and_scales() {
        let p = SparsePolynomial::parse("x1^2*x2 + x2", 2).unwrap();
        let dp = p.partial_derivative(0).unwrap();
        assert_eq!(dp, SparsePolynomial::parse("2*x1*x2", 2).unwrap());
        let dq = p.partial_derivative(1).unwrap();
        assert_eq!(dq, SparsePolynomial::parse("x1^2 + 1", 2).unwrap());
    }

    #[test]
    fn display_is_canonical_and_round_trips() {
        let p = SparsePolynomial::parse("-x3 + x1^2+ 0.5 * x1 * x2", 3).unwrap();
        let printed = p.to_string();
        assert_eq!(printed, "-x3 + x1^2 + 0.5*x1*x2");
        let reparsed = SparsePolynomial::parse(&printed, 3).unwrap();
        assert_eq!(reparsed, p);
    }

    #[test]
    fn display_zero_polynomial() {
        assert_eq!(SparsePolynomial::zero(2).unwrap().to_string(), "0");
    }

    #[test]
    fn addition_and_scaling() {
        let p = SparsePolynomial::parse("x1 + 1", 1).unwrap();
        let q = SparsePolynomial::parse("x1^2 - 1", 1).unwrap();
        let sum = p.add(&q).unwrap();
        assert_eq!(sum, SparsePolynomial::parse("x1^2 + x1", 1).unwrap());
        let scaled = sum.scale(-2.0).unwrap();
        assert_eq!(scaled.coefficient(&idx(&[2])), -2.0);
        assert_eq!(scaled.coefficient(&idx(&[1])), -2.0);
    }

    #[test]
    fn from_terms_rejects_non_finite() {
        let err = SparsePolynomial::from_terms(1, [(idx(&[1]), f64::NAN)]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }
}
