//! Monic real polynomials in binary floating point.
//!
//! Coefficients are stored most-significant first, leading `1` included, so
//! index `i` holds the coefficient of `x^(d - i)`. This matches the order in
//! which sign patterns are read.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::signs::{Sign, SignPattern};

/// Default relative tolerance below which a coefficient is treated as zero.
pub const DEFAULT_SIGN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("root specification is empty")]
    EmptySpec,
    #[error("real root {index} is exactly zero")]
    ZeroRoot { index: usize },
    #[error("complex pair {index} has non-positive imaginary part {im}")]
    NonPositiveImaginary { index: usize, im: f64 },
    #[error("constant term is zero")]
    ZeroConstantTerm,
    #[error("root {index} is not finite")]
    NonFinite { index: usize },
}

/// One complex-conjugate pair `re ± i·im`, `im > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPair {
    pub re: f64,
    pub im: f64,
}

impl ComplexPair {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// The pair of the monic quadratic `x^2 + b x + c`, when `b^2 < 4c`.
    pub fn from_quadratic(b: f64, c: f64) -> Option<Self> {
        let re = -b / 2.0;
        let disc = c - re * re;
        (disc > 0.0).then(|| Self { re, im: disc.sqrt() })
    }

    /// `|re + i im|^2`, the constant term of the quadratic factor.
    pub fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// The roots a polynomial is built from: nonzero real roots plus conjugate pairs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RootSpec {
    pub real_roots: Vec<f64>,
    pub complex_pairs: Vec<ComplexPair>,
}

impl RootSpec {
    pub fn new(real_roots: Vec<f64>, complex_pairs: Vec<ComplexPair>) -> Self {
        Self { real_roots, complex_pairs }
    }

    pub fn real(real_roots: Vec<f64>) -> Self {
        Self { real_roots, complex_pairs: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.real_roots.len() + 2 * self.complex_pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree() == 0
    }

    pub fn positive_count(&self) -> usize {
        self.real_roots.iter().filter(|r| **r > 0.0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.real_roots.iter().filter(|r| **r < 0.0).count()
    }

    pub fn validate(&self) -> Result<(), PolyError> {
        if self.is_empty() {
            return Err(PolyError::EmptySpec);
        }
        for (index, &r) in self.real_roots.iter().enumerate() {
            if !r.is_finite() {
                return Err(PolyError::NonFinite { index });
            }
            if r == 0.0 {
                return Err(PolyError::ZeroRoot { index });
            }
        }
        for (index, pair) in self.complex_pairs.iter().enumerate() {
            if !(pair.re.is_finite() && pair.im.is_finite()) {
                return Err(PolyError::NonFinite { index });
            }
            if pair.im <= 0.0 {
                return Err(PolyError::NonPositiveImaginary { index, im: pair.im });
            }
        }
        Ok(())
    }

    /// Roots of `(-1)^d Q(-x)`.
    pub fn negated(&self) -> Self {
        Self {
            real_roots: self.real_roots.iter().map(|r| -r).collect(),
            complex_pairs: self
                .complex_pairs
                .iter()
                .map(|p| ComplexPair::new(-p.re, p.im))
                .collect(),
        }
    }

    /// Roots of the reversed polynomial `x^d Q(1/x) / Q(0)`.
    pub fn inverted(&self) -> Self {
        Self {
            real_roots: self.real_roots.iter().map(|r| 1.0 / r).collect(),
            complex_pairs: self
                .complex_pairs
                .iter()
                .map(|p| {
                    let n = p.norm_sqr();
                    ComplexPair::new(p.re / n, p.im / n)
                })
                .collect(),
        }
    }

    /// Every root multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            real_roots: self.real_roots.iter().map(|r| r * factor).collect(),
            complex_pairs: self
                .complex_pairs
                .iter()
                .map(|p| ComplexPair::new(p.re * factor, p.im * factor))
                .collect(),
        }
    }

    /// Concatenation of both root lists.
    pub fn union(&self, other: &RootSpec) -> Self {
        let mut out = self.clone();
        out.real_roots.extend_from_slice(&other.real_roots);
        out.complex_pairs.extend_from_slice(&other.complex_pairs);
        out
    }
}

/// Horner evaluation of a most-significant-first coefficient slice.
pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// A dense real polynomial, not necessarily monic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn from_coefficients(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.first().copied().unwrap_or(0.0)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }
}

/// A monic polynomial `x^d + a_{d-1} x^{d-1} + ... + a_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    /// Builds from the non-leading coefficients `a_{d-1}, ..., a_0`.
    pub fn from_lower(lower: &[f64]) -> Self {
        let mut coeffs = Vec::with_capacity(lower.len() + 1);
        coeffs.push(1.0);
        coeffs.extend_from_slice(lower);
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// All coefficients, leading `1` first.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `a_{d-1}, ..., a_0`.
    pub fn lower(&self) -> &[f64] {
        &self.coeffs[1..]
    }

    pub fn constant_term(&self) -> f64 {
        *self.coeffs.last().expect("monic polynomial has a leading coefficient")
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    pub fn derivative(&self) -> Polynomial {
        let d = self.degree();
        let coeffs = self.coeffs[..d]
            .iter()
            .enumerate()
            .map(|(i, c)| (d - i) as f64 * c)
            .collect();
        Polynomial { coeffs }
    }

    /// `(-1)^d Q(-x)`: the roots are negated.
    pub fn negate_variable(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { -c } else { c })
            .collect();
        Self { coeffs }
    }

    /// `x^d Q(1/x) / Q(0)`: the roots are inverted.
    pub fn reciprocal(&self) -> Result<Self, PolyError> {
        let a0 = self.constant_term();
        if a0 == 0.0 {
            return Err(PolyError::ZeroConstantTerm);
        }
        let mut coeffs: Vec<f64> = self.coeffs.iter().rev().map(|c| c / a0).collect();
        coeffs[0] = 1.0;
        Ok(Self { coeffs })
    }

    /// Reads the coefficient signs, or `None` when some coefficient satisfies
    /// `|a_j| <= tolerance * max(1, max_k |a_k|)`.
    pub fn sign_vector(&self, tolerance: f64) -> Option<SignPattern> {
        let threshold = tolerance * self.max_abs_coefficient().max(1.0);
        let mut signs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            if c.abs() <= threshold {
                return None;
            }
            signs.push(if c > 0.0 { Sign::Plus } else { Sign::Minus });
        }
        Some(SignPattern::from_signs(signs).expect("monic leading sign is +"))
    }

    /// Allocation-free equivalent of `sign_vector(tolerance) == Some(pattern)`.
    pub fn matches_pattern(&self, pattern: &SignPattern, tolerance: f64) -> bool {
        if pattern.len() != self.coeffs.len() {
            return false;
        }
        let threshold = tolerance * self.max_abs_coefficient().max(1.0);
        self.coeffs.iter().zip(pattern.signs()).all(|(&c, s)| {
            c.abs() > threshold
                && match s {
                    Sign::Plus => c > 0.0,
                    Sign::Minus => c < 0.0,
                }
        })
    }
}

/// Expands the product of `(x - r)` and `x^2 - 2 re x + (re^2 + im^2)` factors.
pub fn expand_from_roots(spec: &RootSpec) -> Result<RealPolynomial, PolyError> {
    spec.validate()?;
    Ok(expand_unchecked(spec))
}

/// Expansion without validation, for the sampling hot path.
pub(crate) fn expand_unchecked(spec: &RootSpec) -> RealPolynomial {
    let d = spec.degree();
    let mut coeffs = Vec::with_capacity(d + 1);
    coeffs.push(1.0);
    for &r in &spec.real_roots {
        coeffs.push(0.0);
        for i in (1..coeffs.len()).rev() {
            coeffs[i] -= r * coeffs[i - 1];
        }
    }
    for pair in &spec.complex_pairs {
        let b = -2.0 * pair.re;
        let c = pair.norm_sqr();
        coeffs.push(0.0);
        coeffs.push(0.0);
        for i in (1..coeffs.len()).rev() {
            coeffs[i] += b * coeffs[i - 1];
            if i >= 2 {
                coeffs[i] += c * coeffs[i - 2];
            }
        }
    }
    RealPolynomial { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn expands_q1_shape() {
        let pair = ComplexPair::from_quadratic(-1.97, 0.977).unwrap();
        let spec = RootSpec::new(vec![-0.723, -0.59, -0.48], vec![pair]);
        let p = expand_from_roots(&spec).unwrap();
        assert_eq!(p.degree(), 5);
        assert!(close(p.lower(), &[-0.177, -1.498, -0.125, 0.629, 0.2], 2e-3));
    }

    #[test]
    fn single_linear_factor() {
        let p = expand_from_roots(&RootSpec::real(vec![0.5])).unwrap();
        assert_eq!(p.coefficients(), &[1.0, -0.5]);
    }

    #[test]
    fn symmetric_roots_cancel_exactly() {
        let p = expand_from_roots(&RootSpec::real(vec![1.0, -1.0])).unwrap();
        assert_eq!(p.coefficients(), &[1.0, 0.0, -1.0]);
        assert_eq!(p.sign_vector(DEFAULT_SIGN_TOLERANCE), None);
    }

    #[test]
    fn zero_root_rejected() {
        let err = expand_from_roots(&RootSpec::real(vec![0.3, 0.0])).unwrap_err();
        assert_eq!(err, PolyError::ZeroRoot { index: 1 });
        assert_eq!(expand_from_roots(&RootSpec::default()), Err(PolyError::EmptySpec));
    }

    #[test]
    fn evaluates() {
        let p = RealPolynomial::from_lower(&[0.0, -1.0]);
        assert_eq!(p.evaluate(2.0), 3.0);
        assert_eq!(p.evaluate(1.0), 0.0);
        let g = RealPolynomial::from_lower(&[
            -1.60,
            0.5300,
            0.122578,
            -0.03793509,
            -0.0025040322,
            0.000600530112,
        ]);
        assert_eq!(g.evaluate(0.0), 0.000600530112);
    }

    #[test]
    fn derivative_matches_printed() {
        let g = RealPolynomial::from_lower(&[
            -1.60,
            0.5300,
            0.122578,
            -0.03793509,
            -0.0025040322,
            0.000600530112,
        ]);
        let dg = g.derivative();
        assert!(close(
            dg.coefficients(),
            &[6.0, -8.0, 2.12, 0.367734, -0.07587018, -0.0025040322],
            1e-12
        ));
        let p = RealPolynomial::from_lower(&[0.0, -1.0]);
        assert_eq!(p.derivative().coefficients(), &[2.0, 0.0]);
        let lin = RealPolynomial::from_lower(&[-3.0]);
        assert_eq!(lin.derivative().coefficients(), &[1.0]);
    }

    #[test]
    fn negate_and_reciprocal() {
        let p = RealPolynomial::from_lower(&[-1.0]);
        assert_eq!(p.negate_variable().coefficients(), &[1.0, 1.0]);
        let q = RealPolynomial::from_lower(&[1.0, -2.0]);
        assert_eq!(q.negate_variable().coefficients(), &[1.0, -1.0, -2.0]);
        assert_eq!(q.negate_variable().negate_variable(), q);

        let r = RealPolynomial::from_lower(&[-2.0]);
        assert_eq!(r.reciprocal().unwrap().coefficients(), &[1.0, -0.5]);
        let s = RealPolynomial::from_lower(&[-3.0, 2.0]);
        assert_eq!(s.reciprocal().unwrap().coefficients(), &[1.0, -1.5, 0.5]);
        let back = s.reciprocal().unwrap().reciprocal().unwrap();
        assert!(close(back.coefficients(), s.coefficients(), 1e-12));
        assert_eq!(
            RealPolynomial::from_lower(&[1.0, 0.0]).reciprocal(),
            Err(PolyError::ZeroConstantTerm)
        );
    }

    #[test]
    fn sign_vectors() {
        let p = RealPolynomial::from_lower(&[
            17.91,
            98.1106,
            -21.793074,
            -1971.4272,
            -5976.303538,
            -2955.965399,
            6696.676474,
        ]);
        assert_eq!(p.sign_vector(1e-9).unwrap().to_string(), "+++----+");
        let pattern: SignPattern = "+++----+".parse().unwrap();
        assert!(p.matches_pattern(&pattern, 1e-9));
        assert!(!p.matches_pattern(&"++-----+".parse().unwrap(), 1e-9));
    }

    #[test]
    fn root_spec_transforms() {
        let spec = RootSpec::new(vec![2.0, -0.5], vec![ComplexPair::new(1.0, 1.0)]);
        let inv = spec.inverted();
        assert_eq!(inv.real_roots, vec![0.5, -2.0]);
        assert_eq!(inv.complex_pairs[0], ComplexPair::new(0.5, 0.5));
        let p = expand_from_roots(&spec).unwrap();
        let q = expand_from_roots(&inv).unwrap();
        assert!(close(q.coefficients(), p.reciprocal().unwrap().coefficients(), 1e-12));
        let n = expand_from_roots(&spec.negated()).unwrap();
        assert!(close(n.coefficients(), p.negate_variable().coefficients(), 1e-12));
    }
}
