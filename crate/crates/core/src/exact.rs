//! Exact rational root specifications and polynomials.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{ComplexPair, RootSpec};
use crate::signs::{Sign, SignPattern};

pub type Rational = BigRational;

/// Default number of significant decimal digits kept when rationalizing.
pub const DEFAULT_DIGITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("cannot parse {0:?} as an exact decimal or fraction")]
    Parse(String),
    #[error("value {0} is not finite")]
    NonFinite(String),
    #[error("{what} rounds to zero at {digits} significant digits")]
    RoundsToZero { what: String, digits: u32 },
    #[error("digits must be at least 1")]
    ZeroDigits,
    #[error("real root {index} is zero")]
    ZeroRoot { index: usize },
    #[error("quadratic factor {index} has real roots (b^2 >= 4c)")]
    NotIrreducible { index: usize },
    #[error("root specification is empty")]
    Empty,
}

fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), exp as usize)
}

/// Parses `-0.0025`, `1.5e-3`, `7`, or `3/4` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::Parse(text.to_string());
    let t = text.trim().replace('\u{2212}', "-");
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t.as_str(), 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| err())?);
    let scale = exponent - frac_part.len() as i32;
    if scale >= 0 {
        value *= Rational::from_integer(pow10(scale as u32));
    } else {
        value /= Rational::from_integer(pow10(scale.unsigned_abs()));
    }
    Ok(if negative { -value } else { value })
}

/// Rounds `x` to `digits` significant decimal digits and returns the
/// rounded decimal exactly.
pub fn round_to_digits(x: f64, digits: u32) -> Result<Rational, ExactError> {
    if digits == 0 {
        return Err(ExactError::ZeroDigits);
    }
    if !x.is_finite() {
        return Err(ExactError::NonFinite(x.to_string()));
    }
    let text = format!("{:.*e}", (digits - 1) as usize, x);
    parse_rational(&text)
}

/// The exact value of a binary float.
pub fn rational_from_f64(x: f64) -> Result<Rational, ExactError> {
    Rational::from_float(x).ok_or_else(|| ExactError::NonFinite(x.to_string()))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `"numerator/denominator"` in lowest terms.
pub fn fraction_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn sign_of(r: &Rational) -> Option<Sign> {
    if r.is_positive() {
        Some(Sign::Plus)
    } else if r.is_negative() {
        Some(Sign::Minus)
    } else {
        None
    }
}

/// Complex pair stored through its quadratic factor `x^2 - 2 re x + norm_sqr`
/// with `norm_sqr > re^2`, so pairs given by rational quadratics stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPair {
    pub re: Rational,
    pub norm_sqr: Rational,
}

impl ExactPair {
    /// The pair of `x^2 + b x + c`.
    pub fn from_quadratic(b: Rational, c: Rational) -> Self {
        let re = -b / Rational::from_integer(2.into());
        Self { re, norm_sqr: c }
    }

    pub fn linear_coefficient(&self) -> Rational {
        -(&self.re + &self.re)
    }

    pub fn is_irreducible(&self) -> bool {
        self.norm_sqr > &self.re * &self.re
    }

    pub fn to_float(&self) -> ComplexPair {
        let re = to_f64(&self.re);
        let im2 = to_f64(&(&self.norm_sqr - &self.re * &self.re));
        ComplexPair::new(re, im2.max(0.0).sqrt())
    }
}

/// Root data with rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactRootSpec {
    pub real_roots: Vec<Rational>,
    pub complex_pairs: Vec<ExactPair>,
}

impl ExactRootSpec {
    pub fn new(real_roots: Vec<Rational>, complex_pairs: Vec<ExactPair>) -> Result<Self, ExactError> {
        let spec = Self { real_roots, complex_pairs };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ExactError> {
        if self.degree() == 0 {
            return Err(ExactError::Empty);
        }
        if let Some(index) = self.real_roots.iter().position(Zero::is_zero) {
            return Err(ExactError::ZeroRoot { index });
        }
        if let Some(index) = self.complex_pairs.iter().position(|p| !p.is_irreducible()) {
            return Err(ExactError::NotIrreducible { index });
        }
        Ok(())
    }

    /// Parses decimal real roots and quadratic factors `(b, c)` of
    /// `x^2 + b x + c`.
    pub fn from_decimals(real: &[&str], quadratics: &[(&str, &str)]) -> Result<Self, ExactError> {
        let real_roots = real.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
        let complex_pairs = quadratics
            .iter()
            .map(|(b, c)| Ok(ExactPair::from_quadratic(parse_rational(b)?, parse_rational(c)?)))
            .collect::<Result<Vec<_>, ExactError>>()?;
        Self::new(real_roots, complex_pairs)
    }

    pub fn degree(&self) -> usize {
        self.real_roots.len() + 2 * self.complex_pairs.len()
    }

    pub fn positive_count(&self) -> usize {
        self.real_roots.iter().filter(|r| r.is_positive()).count()
    }

    pub fn negative_count(&self) -> usize {
        self.real_roots.iter().filter(|r| r.is_negative()).count()
    }

    /// Sum of all roots; each pair contributes `2 re`.
    pub fn root_sum(&self) -> Rational {
        let mut sum = Rational::zero();
        for r in &self.real_roots {
            sum += r;
        }
        for p in &self.complex_pairs {
            sum += &p.re + &p.re;
        }
        sum
    }

    pub fn to_float(&self) -> RootSpec {
        RootSpec::new(
            self.real_roots.iter().map(to_f64).collect(),
            self.complex_pairs.iter().map(ExactPair::to_float).collect(),
        )
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self {
            real_roots: self.real_roots.iter().map(|r| r * factor).collect(),
            complex_pairs: self
                .complex_pairs
                .iter()
                .map(|p| ExactPair { re: &p.re * factor, norm_sqr: &p.norm_sqr * factor * factor })
                .collect(),
        }
    }

    /// Roots of `(-1)^d Q(-x)`.
    pub fn negated(&self) -> Self {
        Self {
            real_roots: self.real_roots.iter().map(|r| -r).collect(),
            complex_pairs: self
                .complex_pairs
                .iter()
                .map(|p| ExactPair { re: -p.re.clone(), norm_sqr: p.norm_sqr.clone() })
                .collect(),
        }
    }

    /// Roots of `x^d Q(1/x) / Q(0)`.
    pub fn inverted(&self) -> Self {
        Self {
            real_roots: self.real_roots.iter().map(|r| r.recip()).collect(),
            complex_pairs: self
                .complex_pairs
                .iter()
                .map(|p| ExactPair { re: &p.re / &p.norm_sqr, norm_sqr: p.norm_sqr.recip() })
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.real_roots.extend(other.real_roots.iter().cloned());
        out.complex_pairs.extend(other.complex_pairs.iter().cloned());
        out
    }
}

/// Rounds every entry of a float spec to `digits` significant decimals.
/// Pairs are rounded in `(re, im)` and the norm is recomputed exactly.
pub fn rationalize(spec: &RootSpec, digits: u32) -> Result<ExactRootSpec, ExactError> {
    let real_roots = spec
        .real_roots
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let q = round_to_digits(r, digits)?;
            if q.is_zero() {
                return Err(ExactError::RoundsToZero { what: format!("real root {i}"), digits });
            }
            Ok(q)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let complex_pairs = spec
        .complex_pairs
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let re = round_to_digits(pair.re, digits)?;
            let im = round_to_digits(pair.im, digits)?;
            if !im.is_positive() {
                return Err(ExactError::RoundsToZero { what: format!("imaginary part {i}"), digits });
            }
            let norm_sqr = &re * &re + &im * &im;
            Ok(ExactPair { re, norm_sqr })
        })
        .collect::<Result<Vec<_>, _>>()?;
    ExactRootSpec::new(real_roots, complex_pairs)
}

/// A dense rational polynomial, most-significant coefficient first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    coeffs: Vec<Rational>,
}

impl ExactPolynomial {
    pub fn from_coefficients(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in &self.coeffs {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of the value at `x`, computed on a common denominator.
    pub fn sign_at(&self, x: &Rational) -> Ordering {
        // p(n/m) * m^d = sum c_i n^(d-i) m^i, with c_i scaled to integers.
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let (n, m) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut mpow = BigInt::one();
        for c in &self.coeffs {
            acc = acc * n + (c.numer() * (&lcm / c.denom())) * &mpow;
            mpow *= m;
        }
        acc.sign_cmp()
    }

    pub fn derivative(&self) -> Self {
        let d = self.degree();
        let coeffs = self.coeffs[..d]
            .iter()
            .enumerate()
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(d - i)))
            .collect();
        Self { coeffs }
    }

    /// Signs of all coefficients, or the index of the first zero one.
    pub fn sign_vector(&self) -> Result<SignPattern, usize> {
        let mut signs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            signs.push(sign_of(c).ok_or(i)?);
        }
        SignPattern::from_signs(signs).map_err(|_| 0)
    }

    pub fn to_float(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Exact convolution product of all linear and quadratic factors.
pub fn exact_expand(spec: &ExactRootSpec) -> ExactPolynomial {
    let mut coeffs = vec![Rational::one()];
    for r in &spec.real_roots {
        coeffs.push(Rational::zero());
        for i in (1..coeffs.len()).rev() {
            let t = r * &coeffs[i - 1];
            coeffs[i] -= t;
        }
    }
    for pair in &spec.complex_pairs {
        let b = pair.linear_coefficient();
        let c = &pair.norm_sqr;
        coeffs.push(Rational::zero());
        coeffs.push(Rational::zero());
        for i in (1..coeffs.len()).rev() {
            let mut add = &b * &coeffs[i - 1];
            if i >= 2 {
                add += c * &coeffs[i - 2];
            }
            coeffs[i] += add;
        }
    }
    ExactPolynomial { coeffs }
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fraction_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(q("0.723"), Rational::new(723.into(), 1000.into()));
        assert_eq!(q("-2.5e-3"), Rational::new((-25).into(), 10000.into()));
        assert_eq!(q("3/4"), Rational::new(3.into(), 4.into()));
        assert_eq!(q("+7"), Rational::from_integer(7.into()));
        assert_eq!(q(".5"), Rational::new(1.into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn rounding_examples() {
        assert_eq!(round_to_digits(0.723, 3).unwrap(), q("723/1000"));
        assert_eq!(
            round_to_digits(-0.0025040322, 5).unwrap(),
            Rational::new((-25040).into(), 10_000_000.into())
        );
        assert_eq!(round_to_digits(1.0, 0), Err(ExactError::ZeroDigits));
        assert!(round_to_digits(f64::NAN, 3).is_err());
    }

    #[test]
    fn rationalize_rejects_vanishing_imaginary_part() {
        let spec = RootSpec::new(vec![0.5], vec![ComplexPair::new(0.1, 1e-300)]);
        assert!(rationalize(&spec, 12).is_ok());
        let spec = RootSpec::new(vec![0.5], vec![ComplexPair::new(0.1, 0.0)]);
        assert!(matches!(rationalize(&spec, 12), Err(ExactError::RoundsToZero { .. })));
    }

    #[test]
    fn exact_expand_symmetric_cancellation() {
        let spec = ExactRootSpec::from_decimals(&["1", "-1"], &[]).unwrap();
        let p = exact_expand(&spec);
        assert_eq!(p.coefficients(), &[q("1"), q("0"), q("-1")]);
        assert_eq!(p.sign_vector(), Err(1));
    }

    #[test]
    fn q1_signs() {
        let spec = ExactRootSpec::from_decimals(&["-0.723", "-0.59", "-0.48"], &[("-1.97", "0.977")]).unwrap();
        let p = exact_expand(&spec);
        assert_eq!(p.sign_vector().unwrap().to_string(), "+---++");
    }

    #[test]
    fn subdominant_coefficient_is_negated_root_sum() {
        let spec = ExactRootSpec::from_decimals(
            // x^2 - 1.84x + 0.846 = (x - 0.9)(x - 0.94)
            &["-0.2", "-0.3", "-0.3", "0.9", "0.94"],
            &[("-1.62", "0.67"), ("1.72", "1.348")],
        )
        .unwrap();
        let p = exact_expand(&spec);
        assert_eq!(p.degree(), 9);
        // pairs contribute 2 re = -b
        let sum = q("-0.2") + q("-0.3") + q("-0.3") + q("0.9") + q("0.94") + q("1.62") - q("1.72");
        assert_eq!(sum, q("0.94"));
        assert_eq!(p.coefficients()[1], -sum);
    }

    #[test]
    fn sign_at_matches_evaluate() {
        let spec = ExactRootSpec::from_decimals(&["0.3", "-1.7", "2.25"], &[("0.5", "1.1")]).unwrap();
        let p = exact_expand(&spec);
        for x in ["0", "0.3", "-3/7", "2.2", "-1.70001", "10"] {
            let x = q(x);
            assert_eq!(p.sign_at(&x), p.evaluate(&x).cmp(&Rational::zero()), "{x}");
        }
    }
}
